import json

import pytest

from soficapprox.cli import (
    emit_certificate,
    load_certificate,
    load_realization,
    main,
    parse_gchunk_file,
    parse_rational,
)
from soficapprox.lazyperm import realize, supp_morphism
from soficapprox.profile import sofic_profile

from conftest import data_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestChunkValidate:
    def test_valid_file(self, capsys):
        code, out, _ = run(capsys, "chunk", "validate", data_path("z2.chunk"))
        assert code == 0
        assert out.strip() == "valid"

    def test_violations_reported(self, capsys, tmp_path):
        bad = tmp_path / "bad.chunk"
        bad.write_text("unit 1\nelem a\n1 * 1 = 1\n1 * a = 1\na * 1 = a\n")
        code, out, _ = run(capsys, "chunk", "validate", str(bad))
        assert code == 1
        assert "violation" in out

    def test_parse_error_has_line_number(self, capsys, tmp_path):
        bad = tmp_path / "bad.chunk"
        bad.write_text("unit 1\nwhat is this\n")
        code, _, err = run(capsys, "chunk", "validate", str(bad))
        assert code == 1
        assert "line 2" in err

    def test_missing_file(self, capsys):
        code, _, err = run(capsys, "chunk", "validate", "/nonexistent.chunk")
        assert code == 1
        assert "error" in err


class TestProfileCommand:
    def test_z2_at_two(self, capsys):
        code, out, _ = run(capsys, "profile", "--chunk", data_path("z2.chunk"),
                           "--r", "2/1")
        assert code == 0
        assert "prof = 2" in out
        assert "a -> [1 0]" in out

    def test_exhausted_exit_code(self, capsys):
        code, out, _ = run(capsys, "profile", "--chunk", data_path("z3.chunk"),
                           "--r", "2/1", "--n-max", "2")
        assert code == 2
        assert "exhausted" in out

    def test_all_r_table(self, capsys):
        code, out, _ = run(capsys, "profile", "--chunk", data_path("z2.chunk"),
                           "--all-r", "2/1,3/1")
        assert code == 0
        assert "r = 2/1 prof = 2" in out
        assert "r = 3/1 prof = 2" in out

    def test_witness_file(self, capsys, tmp_path):
        witness = tmp_path / "w.txt"
        code, _, _ = run(capsys, "profile", "--chunk", data_path("z2.chunk"),
                         "--r", "2/1", "--emit-witness", str(witness))
        assert code == 0
        assert witness.read_text() == "1 -> [0 1]\na -> [1 0]\n"

    def test_element_count_warning(self, capsys, tmp_path):
        code, _, err = run(capsys, "profile", "--chunk", data_path("klein.chunk"),
                           "--r", "2/1", "--n-max", "4")
        assert code == 0
        assert "warning" not in err  # klein has exactly four elements
        big = tmp_path / "five.chunk"
        lines = ["unit 1"] + [f"elem x{i}" for i in range(4)]
        elems = ["1"] + [f"x{i}" for i in range(4)]
        lines += [f"1 * {e} = {e}" for e in elems]
        lines += [f"{e} * 1 = {e}" for e in elems if e != "1"]
        big.write_text("\n".join(lines) + "\n")
        code, _, err = run(capsys, "profile", "--chunk", str(big),
                           "--r", "2/1", "--n-max", "5")
        assert "warning" in err

    def test_unknown_flag_rejected(self, capsys):
        code = main(["profile", "--chunk", data_path("z2.chunk"), "--bogus"])
        capsys.readouterr()
        assert code == 1

    def test_byte_identical_across_workers(self, capsys):
        _, out1, _ = run(capsys, "profile", "--chunk", data_path("z3.chunk"), "--r", "2/1")
        _, out2, _ = run(capsys, "--workers", "2", "profile",
                         "--chunk", data_path("z3.chunk"), "--r", "2/1")
        assert out1 == out2


class TestGrowthCommand:
    def test_prof_successor(self, capsys):
        code, out, _ = run(capsys, "growth", "prof", "--g", "affine:1", "--r", "2/1")
        assert code == 0
        assert out.strip() == "3"

    def test_prof_infinity(self, capsys):
        code, out, _ = run(capsys, "growth", "prof", "--g", "infinity",
                           "--r", "2/1", "--n-max", "50")
        assert code == 2
        assert "exhausted" in out

    def test_prof_linear_note(self, capsys):
        code, out, _ = run(capsys, "growth", "prof", "--g", "linear:2",
                           "--r", "3/1", "--n-max", "50")
        assert code == 2
        assert "impossible" in out

    def test_cmp_prec(self, capsys):
        code, out, _ = run(capsys, "growth", "cmp", "--f", "affine:2",
                           "--g", "linear:2", "--rel", "prec")
        assert code == 0
        assert "true from n0 = 3" in out

    def test_cmp_ll(self, capsys):
        code, out, _ = run(capsys, "growth", "cmp", "--f", "affine:1",
                           "--g", "linear:2", "--rel", "ll")
        assert code == 0
        assert "true for every power" in out

    def test_cmp_sim(self, capsys):
        code, out, _ = run(capsys, "growth", "cmp", "--f", "affine:1",
                           "--g", "affine:2", "--rel", "sim", "--k-max", "5")
        assert code == 0
        assert "true with k = 3" in out

    def test_bad_spec(self, capsys):
        code, _, err = run(capsys, "growth", "prof", "--g", "quadratic:2", "--r", "2/1")
        assert code == 1
        assert "error" in err


class TestSuppCommand:
    def test_three_cycle_report(self, capsys):
        code, out, _ = run(capsys, "supp", "--gchunk", data_path("three.gchunk"),
                           "--n", "99", "--r", "2/1", "--horizon", "300")
        assert code == 0
        assert "m_star = 68" in out
        assert "defect_bound_holds = true" in out


class TestRealizeCommand:
    def test_z2_depth_four(self, capsys, tmp_path):
        emitted = tmp_path / "real.json"
        code, out, _ = run(capsys, "realize", "--chunk", data_path("z2.chunk"),
                           "--depth", "4", "--emit", str(emitted))
        assert code == 0
        assert "slow = slow" in out
        payload = json.loads(emitted.read_text())
        assert payload["depth"] == 4
        assert payload["m"] == [2, 2, 2]

    def test_blocksum_carrier_round_trip(self, capsys, tmp_path):
        emitted = tmp_path / "real_z3.json"
        code, _, _ = run(capsys, "realize", "--chunk", data_path("z3.chunk"),
                         "--depth", "4", "--emit", str(emitted))
        assert code == 0
        spec_file = tmp_path / "fromfile.gchunk"
        spec_file.write_text(
            f"chunk {data_path('z3.chunk')}\n"
            f"carrier h = blocksum:{emitted}\n"
            f"carrier h2 = blocksum:{emitted}\n"
            "bound = " + json.loads(emitted.read_text())["g"] + "\n")
        gc = parse_gchunk_file(str(spec_file), horizon=200)
        real = load_realization(str(emitted))
        assert supp_morphism(gc, real.layout[-1]) == real.block_sum_assignment(real.depth)

    def test_tampered_realization_rejected(self, capsys, tmp_path):
        emitted = tmp_path / "real.json"
        run(capsys, "realize", "--chunk", data_path("z2.chunk"),
            "--depth", "3", "--emit", str(emitted))
        payload = json.loads(emitted.read_text())
        payload["f"][0] += 1
        emitted.write_text(json.dumps(payload))
        with pytest.raises(ValueError):
            load_realization(str(emitted))


class TestGadgetCommands:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "gadget", "example", "--n", "99")
        assert code == 0
        assert "m_star = 68" in out
        assert "holds = true" in out

    def test_encode_true_and_false(self, capsys):
        code, out, _ = run(capsys, "gadget", "encode", "--rho", "(0 1)",
                           "--k", "0", "--n", "1")
        assert code == 0 and out.strip() == "true"
        code, out, _ = run(capsys, "gadget", "encode", "--rho", "(0 1)",
                           "--k", "0", "--n", "0")
        assert code == 0 and out.strip() == "false"

    def test_stages(self, capsys):
        code, out, _ = run(capsys, "gadget", "stages", "--trace", "1,0,1,1,0,1",
                           "--horizon", "30")
        assert code == 0
        assert "fired = 4" in out
        assert "prefix_end = 12" in out
        assert "involution_on_prefix = true" in out


class TestCertificatePersistence:
    def test_round_trip(self, z2, tmp_path):
        cert = sofic_profile(z2, 2, 5)
        path = tmp_path / "z2.cert"
        emit_certificate(str(path), cert, z2)
        loaded, chunk = load_certificate(str(path))
        assert loaded.r == cert.r
        assert loaded.n == cert.n
        assert loaded.assignment == cert.assignment
        assert loaded.quality == cert.quality
        assert loaded.infeasible == cert.infeasible
        assert chunk == z2
        # emitted form is stable under a save/load cycle
        path2 = tmp_path / "again.cert"
        emit_certificate(str(path2), loaded, chunk)
        assert path.read_text() == path2.read_text()

    def test_cli_verify(self, capsys, z2, tmp_path):
        path = tmp_path / "z2.cert"
        emit_certificate(str(path), sofic_profile(z2, 2, 5), z2)
        code, out, _ = run(capsys, "cert", "verify", str(path))
        assert code == 0
        assert "certificate ok" in out

    def test_non_bijection_witness_rejected(self, capsys, z2, tmp_path):
        path = tmp_path / "z2.cert"
        emit_certificate(str(path), sofic_profile(z2, 2, 5), z2)
        tampered = path.read_text().replace("witness a = [1 0]", "witness a = [1 1]")
        path.write_text(tampered)
        code, _, err = run(capsys, "cert", "verify", str(path))
        assert code == 1
        assert "error" in err

    def test_false_quality_claim_rejected(self, capsys, z3, tmp_path):
        cert = sofic_profile(z3, 2, 5)
        path = tmp_path / "z3.cert"
        emit_certificate(str(path), cert, z3)
        # claim a wrong witness whose true defect is 1, keeping the claimed 0
        tampered = path.read_text().replace("witness h2 = [2 0 1]",
                                            "witness h2 = [0 1 2]")
        path.write_text(tampered)
        code, _, err = run(capsys, "cert", "verify", str(path))
        assert code == 1
        assert "defect" in err

    def test_parse_rational(self):
        from fractions import Fraction
        assert parse_rational("3/2") == Fraction(3, 2)
        assert parse_rational("4") == Fraction(4)


class TestGChunkSpecFormat:
    def test_table_carrier(self, capsys, tmp_path):
        spec = tmp_path / "pairswap.gchunk"
        spec.write_text(
            f"chunk {data_path('z2.chunk')}\n"
            "carrier a = table:[1 0 3 2]\n"
            "bound = affine:1\n")
        gc = parse_gchunk_file(str(spec), horizon=50)
        assert gc.carriers["a"](0) == 1
        assert gc.carriers["a"](4) == 4  # identity beyond the prefix

    def test_table_carrier_descriptor_form(self, tmp_path):
        spec = tmp_path / "pairswap.gchunk"
        spec.write_text(
            f"chunk {data_path('z2.chunk')}\n"
            "carrier a = table:[1 0]+id\n"
            "bound = affine:1\n")
        gc = parse_gchunk_file(str(spec), horizon=50)
        assert gc.carriers["a"].descriptor == "table:[1 0]+id"

    def test_unknown_gadget_rejected(self, tmp_path):
        spec = tmp_path / "bad.gchunk"
        spec.write_text(
            f"chunk {data_path('z2.chunk')}\n"
            "carrier a = gadget:nonsense\n"
            "bound = affine:1\n")
        with pytest.raises(ValueError):
            parse_gchunk_file(str(spec), horizon=50)

    def test_missing_bound_rejected(self, tmp_path):
        spec = tmp_path / "bad.gchunk"
        spec.write_text(f"chunk {data_path('z2.chunk')}\n"
                        "carrier a = table:[1 0]\n")
        with pytest.raises(ValueError):
            parse_gchunk_file(str(spec), horizon=50)
