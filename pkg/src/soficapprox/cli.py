"""Command-line frontend: batch subcommands over chunk files and reports.

Exit codes: 0 for a successful result or certificate, 2 for an exhausted or
inconclusive outcome, 1 for usage or data errors.  All serialized rationals
are exact ``P/Q`` text; identical inputs and flags produce byte-identical
output regardless of the worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import gadgets, profile
from .chunk import Chunk, ChunkParseError, format_chunk, parse_chunk, validate
from .growth import Exhausted as GrowthExhausted
from .growth import GrowthFn, growth_profile, is_slow, ll, lt_eventually, parse_growth, sim
from .lazyperm import (GChunk, LazyPerm, Realization, build_gchunk, finitary,
                       identity_lazy, realize, supp_quality)
from .permcore import Perm, format_perm, parse_perm
from .profile import (Exhausted, ProfileCertificate, measure, profile_table,
                      sofic_profile)

EXIT_OK = 0
EXIT_DATA = 1
EXIT_EXHAUSTED = 2


@dataclass
class RunConfig:
    """Parsed flags plus the resource caps shared by all subcommands."""

    n_max: int = 8
    horizon: int = 10_000
    f_cap: int = 10 ** 6
    workers: int = 1
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.n_max < 1 or self.horizon < 1 or self.f_cap < 1 or self.workers < 1:
            raise ValueError("resource caps must be positive")


ELEMENT_CAP_WARNING = 4


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def format_rational(x: Fraction | None) -> str:
    if x is None:
        return "inf"
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


# -- certificate persistence -----------------------------------------------------

def emit_certificate(path: str, cert: ProfileCertificate, c: Chunk) -> None:
    """Self-contained text certificate: chunk, witness, quality, search records."""
    lines = [
        f"r = {format_rational(cert.r)}",
        f"n = {cert.n}",
        f"defect = {format_rational(cert.quality.defect)}",
        f"expansiveness = {format_rational(cert.quality.expansiveness)}",
    ]
    for rec in cert.infeasible:
        lines.append(f"infeasible {rec.degree} nodes {rec.nodes}")
    for e in c.elements:
        lines.append(f"witness {e} = {format_perm(cert.assignment[e])}")
    lines.append("chunk-begin")
    lines.append(format_chunk(c).rstrip("\n"))
    lines.append("chunk-end")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_certificate(path: str) -> tuple[ProfileCertificate, Chunk]:
    """Parse and re-verify a certificate; tampering fails with the bad quantity.

    The witness is re-measured against the embedded chunk and must reproduce
    the claimed defect and expansiveness exactly, and meet the r-thresholds.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    header: dict[str, str] = {}
    witness_lines: list[tuple[str, str]] = []
    records: list[profile.DegreeRecord] = []
    chunk_lines: list[str] = []
    in_chunk = False
    for raw in text.splitlines():
        line = raw.strip()
        if line == "chunk-begin":
            in_chunk = True
            continue
        if line == "chunk-end":
            in_chunk = False
            continue
        if in_chunk:
            chunk_lines.append(raw)
            continue
        if not line:
            continue
        if line.startswith("witness "):
            body = line[len("witness "):]
            name, _, perm_text = body.partition(" = ")
            witness_lines.append((name.strip(), perm_text.strip()))
        elif line.startswith("infeasible "):
            parts = line.split()
            records.append(profile.DegreeRecord(int(parts[1]), int(parts[3])))
        else:
            key, _, value = line.partition(" = ")
            header[key.strip()] = value.strip()

    c = parse_chunk("\n".join(chunk_lines))
    r = parse_rational(header["r"])
    n = int(header["n"])
    assignment = {}
    for name, perm_text in witness_lines:
        if name not in c.elements:
            raise ValueError(f"witness names unknown element {name!r}")
        p = parse_perm(perm_text, degree=n)
        assignment[name] = p
    quality = measure(c, assignment)
    claimed_defect = parse_rational(header["defect"])
    exp_text = header["expansiveness"]
    claimed_exp = None if exp_text == "inf" else parse_rational(exp_text)
    if quality.defect != claimed_defect:
        raise ValueError(
            f"re-measured defect {format_rational(quality.defect)} "
            f"differs from claimed {format_rational(claimed_defect)}")
    if quality.expansiveness != claimed_exp:
        raise ValueError(
            f"re-measured expansiveness {format_rational(quality.expansiveness)} "
            f"differs from claimed {format_rational(claimed_exp)}")
    if not quality.meets(r):
        raise ValueError(f"witness does not meet the r = {format_rational(r)} thresholds")
    cert = ProfileCertificate(r, n, assignment, quality, tuple(records))
    return cert, c


# -- realization persistence ------------------------------------------------------

def emit_realization(path: str, real: Realization) -> None:
    payload = {
        "format": "realization-v1",
        "chunk": format_chunk(real.chunk),
        "depth": real.depth,
        "m": list(real.m),
        "f": list(real.f),
        "layout": list(real.layout),
        "g": real.g.spec(),
        "sigma": [{e: list(s[e].images) for e in real.chunk.elements} for s in real.sigma],
        "stages": [
            {
                "n": st.n, "m": st.m_n, "f": st.f_n, "degree": st.degree,
                "defect": format_rational(st.defect),
                "expansiveness": format_rational(st.expansiveness),
                "slow_lhs": format_rational(st.slow_lhs),
                "g_gap": format_rational(st.g_gap),
                "slow_threshold": format_rational(st.slow_threshold),
            }
            for st in real.stages
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_realization(path: str) -> Realization:
    """Rebuild a realization from its emitted file, re-verifying every stage."""
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != "realization-v1":
        raise ValueError(f"unrecognized realization file {path!r}")
    c = parse_chunk(payload["chunk"])
    certs = []
    for idx, stage_sigma in enumerate(payload["sigma"]):
        r = Fraction(idx + 2)
        assignment = {e: Perm(tuple(images)) for e, images in stage_sigma.items()}
        quality = measure(c, assignment)
        if not quality.meets(r):
            raise ValueError(f"stage r = {idx + 2} assignment fails its thresholds")
        certs.append(ProfileCertificate(r, payload["m"][idx], assignment, quality, ()))
    real = realize(c, certs)
    if list(real.f) != payload["f"] or list(real.layout) != payload["layout"]:
        raise ValueError("stored multiplicities or layout differ from the recomputed ones")
    if real.g.spec() != payload["g"]:
        raise ValueError("stored growth bound differs from the recomputed one")
    return real


# -- gchunk spec files -------------------------------------------------------------

_GADGET_CARRIERS = {
    "threecycle": gadgets.three_cycle,
    "threecycle2": gadgets.three_cycle_squared,
    "delta": gadgets.delta,
    "identity": identity_lazy,
}


def parse_gchunk_file(path: str, horizon: int) -> GChunk:
    """Build a g-chunk from ``chunk``, ``carrier``, and ``bound`` statements.

    Carrier kinds: ``gadget:NAME``, ``table:[images]`` (identity beyond the
    listed prefix), ``blocksum:PATH`` (an emitted realization, element matched
    by name).  The unit's carrier defaults to the identity.
    """
    base = os.path.dirname(os.path.abspath(path))
    chunk_obj: Chunk | None = None
    carrier_specs: list[tuple[int, str, str]] = []
    bound: GrowthFn | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("chunk "):
                rel = line[len("chunk "):].strip()
                target = rel if os.path.isabs(rel) else os.path.join(base, rel)
                with open(target, "r", encoding="utf-8") as ch:
                    chunk_obj = parse_chunk(ch.read())
            elif line.startswith("carrier "):
                body = line[len("carrier "):]
                name, _, spec = body.partition("=")
                carrier_specs.append((lineno, name.strip(), spec.strip()))
            elif line.startswith("bound"):
                _, _, spec = line.partition("=")
                bound = parse_growth(spec.strip())
            else:
                raise ChunkParseError(lineno, f"cannot parse statement {line!r}")
    if chunk_obj is None:
        raise ValueError(f"{path}: no chunk statement")
    if bound is None:
        raise ValueError(f"{path}: no bound statement")
    carriers: dict[str, LazyPerm] = {}
    for lineno, name, spec in carrier_specs:
        if name not in chunk_obj.elements:
            raise ChunkParseError(lineno, f"carrier for unknown element {name!r}")
        carriers[name] = _parse_carrier(spec, base, name, lineno)
    return build_gchunk(chunk_obj, carriers, bound, horizon)


def _parse_carrier(spec: str, base: str, element: str, lineno: int) -> LazyPerm:
    if spec.startswith("gadget:"):
        name = spec[len("gadget:"):]
        if name not in _GADGET_CARRIERS:
            raise ChunkParseError(lineno, f"unknown gadget carrier {name!r}")
        return _GADGET_CARRIERS[name]()
    if spec.startswith("table:"):
        body = spec[len("table:"):]
        if body.endswith("+id"):  # the descriptor form round-trips
            body = body[:-len("+id")]
        p = parse_perm(body)
        return finitary(p.images)
    if spec.startswith("blocksum:"):
        rel = spec[len("blocksum:"):]
        target = rel if os.path.isabs(rel) else os.path.join(base, rel)
        real = load_realization(target)
        return real.carrier(element)
    raise ChunkParseError(lineno, f"cannot parse carrier spec {spec!r}")


# -- subcommands -------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors are exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_DATA)


def build_parser() -> _Parser:
    parser = _Parser(prog="sofic", description=__doc__)
    parser.add_argument("--workers", type=int, default=1, help="parallel search workers")
    parser.add_argument("--seed", type=int, default=None,
                        help="seed for randomized property-test subcommands "
                             "(search order is never randomized)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_chunk = sub.add_parser("chunk", help="chunk file operations")
    chunk_sub = p_chunk.add_subparsers(dest="chunk_command", required=True)
    p_validate = chunk_sub.add_parser("validate", help="validate a chunk file")
    p_validate.add_argument("file")

    p_profile = sub.add_parser("profile", help="certified sofic profile search")
    p_profile.add_argument("--chunk", required=True)
    p_profile.add_argument("--r", type=parse_rational, help="quality parameter P/Q")
    p_profile.add_argument("--all-r", type=str, default=None,
                           help="comma-separated list P1/Q1,P2/Q2,...")
    p_profile.add_argument("--n-max", type=int, default=None)
    p_profile.add_argument("--emit-witness", type=str, default=None)
    p_profile.add_argument("--emit-cert", type=str, default=None)

    p_growth = sub.add_parser("growth", help="growth-function calculus")
    growth_sub = p_growth.add_subparsers(dest="growth_command", required=True)
    p_gprof = growth_sub.add_parser("prof", help="profile of a growth function")
    p_gprof.add_argument("--g", required=True)
    p_gprof.add_argument("--r", type=parse_rational, required=True)
    p_gprof.add_argument("--n-max", type=int, default=10_000)
    p_gcmp = growth_sub.add_parser("cmp", help="order comparisons")
    p_gcmp.add_argument("--f", required=True)
    p_gcmp.add_argument("--g", required=True)
    p_gcmp.add_argument("--rel", choices=["prec", "ll", "sim"], required=True)
    p_gcmp.add_argument("--horizon", type=int, default=10_000)
    p_gcmp.add_argument("--k-max", type=int, default=16)

    p_supp = sub.add_parser("supp", help="supp-morphism quality report")
    p_supp.add_argument("--gchunk", required=True)
    p_supp.add_argument("--n", type=int, required=True)
    p_supp.add_argument("--r", type=parse_rational, required=True)
    p_supp.add_argument("--horizon", type=int, default=None)

    p_realize = sub.add_parser("realize", help="block-direct-sum realization")
    p_realize.add_argument("--chunk", required=True)
    p_realize.add_argument("--depth", type=int, required=True)
    p_realize.add_argument("--f-cap", type=int, default=10 ** 6)
    p_realize.add_argument("--n-max", type=int, default=None)
    p_realize.add_argument("--emit", type=str, default=None)

    p_gadget = sub.add_parser("gadget", help="worked constructions")
    gadget_sub = p_gadget.add_subparsers(dest="gadget_command", required=True)
    p_example = gadget_sub.add_parser("example", help="three-cycle fixed-point deviation")
    p_example.add_argument("--n", type=int, required=True)
    p_encode = gadget_sub.add_parser("encode", help="point-evaluation encoding")
    p_encode.add_argument("--rho", required=True, help="finitary permutation, cycle form")
    p_encode.add_argument("--k", type=int, required=True)
    p_encode.add_argument("--n", type=int, required=True)
    p_encode.add_argument("--horizon", type=int, default=1000)
    p_stages = gadget_sub.add_parser("stages", help="stagewise limit map")
    p_stages.add_argument("--trace", required=True, help="comma-separated 0/1 flags")
    p_stages.add_argument("--horizon", type=int, required=True)

    p_cert = sub.add_parser("cert", help="certificate persistence")
    cert_sub = p_cert.add_subparsers(dest="cert_command", required=True)
    p_cverify = cert_sub.add_parser("verify", help="re-measure a stored certificate")
    p_cverify.add_argument("file")

    return parser


def _load_chunk(path: str) -> Chunk:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_chunk(fh.read())


def _cmd_chunk_validate(args) -> int:
    c = _load_chunk(args.file)
    report = validate(c)
    if report.ok:
        print("valid")
        return EXIT_OK
    for v in report.all_violations():
        print(f"violation: {v}")
    return EXIT_DATA


def _cmd_profile(args, config: RunConfig) -> int:
    c = _load_chunk(args.chunk)
    if len(c.elements) > ELEMENT_CAP_WARNING:
        print(f"warning: chunk has {len(c.elements)} elements; the exhaustive "
              f"search grows steeply beyond {ELEMENT_CAP_WARNING}", file=sys.stderr)
    n_max = args.n_max if args.n_max is not None else config.n_max
    if args.all_r:
        if args.emit_witness or args.emit_cert:
            raise ValueError("--emit-witness/--emit-cert need a single --r")
        rs = [parse_rational(tok) for tok in args.all_r.split(",")]
        results = profile_table(c, rs, n_max, workers=config.workers)
        code = EXIT_OK
        for r, res in zip(rs, results):
            if isinstance(res, Exhausted):
                print(f"r = {format_rational(r)} exhausted at n_max = {res.n_max}")
                code = EXIT_EXHAUSTED
            else:
                print(f"r = {format_rational(r)} prof = {res.n}")
        return code
    if args.r is None:
        raise ValueError("need --r or --all-r")
    result = sofic_profile(c, args.r, n_max, workers=config.workers)
    if isinstance(result, Exhausted):
        print(f"exhausted at n_max = {result.n_max}")
        return EXIT_EXHAUSTED
    print(f"prof = {result.n}")
    for e in c.elements:
        print(f"{e} -> {format_perm(result.assignment[e])}")
    print(f"defect = {format_rational(result.quality.defect)}")
    print(f"expansiveness = {format_rational(result.quality.expansiveness)}")
    if result.vacuous:
        print("note: r = 1 makes every assignment feasible; certificate is vacuous")
    if args.emit_witness:
        with open(args.emit_witness, "w", encoding="utf-8") as fh:
            for e in c.elements:
                fh.write(f"{e} -> {format_perm(result.assignment[e])}\n")
    if args.emit_cert:
        emit_certificate(args.emit_cert, result, c)
    return EXIT_OK


def _cmd_growth_prof(args) -> int:
    g = parse_growth(args.g)
    result = growth_profile(g, args.r, args.n_max)
    if isinstance(result, GrowthExhausted):
        print(f"exhausted at n_max = {result.n_max}")
        if result.note:
            print(f"note: {result.note}")
        return EXIT_EXHAUSTED
    print(result)
    return EXIT_OK


def _cmd_growth_cmp(args) -> int:
    f = parse_growth(args.f)
    g = parse_growth(args.g)
    if args.rel == "prec":
        v = lt_eventually(f, g, args.horizon)
        if v.outcome == "true":
            print(f"prec: true from n0 = {v.n0}")
            return EXIT_OK
        if v.outcome == "false":
            print(f"prec: false, f >= g from n = {v.witness}")
            return EXIT_OK
        print(f"prec: inconclusive ({v.note})")
        return EXIT_EXHAUSTED
    if args.rel == "ll":
        v = ll(f, g, args.k_max, args.horizon)
        if v.outcome == "true":
            print("ll: true for every power")
            return EXIT_OK
        if v.outcome == "false":
            print(f"ll: false at power k = {v.k}")
            return EXIT_OK
        print(f"ll: true up to k_max = {v.k} ({v.note})")
        return EXIT_EXHAUSTED
    v = sim(f, g, args.k_max, args.horizon)
    if v.outcome == "true":
        print(f"sim: true with k = {v.k}")
        return EXIT_OK
    if v.outcome == "false":
        print(f"sim: false ({v.note})")
        return EXIT_OK
    print(f"sim: inconclusive ({v.note})")
    return EXIT_EXHAUSTED


def _cmd_supp(args, config: RunConfig) -> int:
    horizon = args.horizon if args.horizon is not None else max(config.horizon // 10, 2 * args.n)
    gc = parse_gchunk_file(args.gchunk, horizon)
    report = supp_quality(gc, args.n, args.r)
    print(f"n = {report.n}")
    print(f"m_star = {report.m_star if report.m_star is not None else 'none'}")
    print(f"defect = {format_rational(report.quality.defect)}")
    print(f"expansiveness = {format_rational(report.quality.expansiveness)}")
    print(f"defect_bound = {format_rational(report.defect_bound)}"
          if report.defect_bound is not None else "defect_bound = none")
    print(f"defect_bound_holds = {_yn(report.defect_bound_holds)}")
    print(f"separation_hypothesis = {_yn(report.separation_hypothesis)}")
    print(f"conclusion_expected = {_yn(report.conclusion_expected)}")
    print(f"expansiveness_threshold = {format_rational(report.expansiveness_threshold)}")
    print(f"expansiveness_ok = {_yn(report.expansiveness_ok)}")
    return EXIT_OK


def _yn(value) -> str:
    if value is None:
        return "none"
    return "true" if value else "false"


def _cmd_realize(args, config: RunConfig) -> int:
    c = _load_chunk(args.chunk)
    if args.depth < 2:
        raise ValueError("depth must be at least 2")
    n_max = args.n_max if args.n_max is not None else config.n_max
    certs = []
    for r in range(2, args.depth + 1):
        result = sofic_profile(c, r, n_max, workers=config.workers)
        if isinstance(result, Exhausted):
            print(f"profile search exhausted at r = {r}, n_max = {result.n_max}")
            return EXIT_EXHAUSTED
        certs.append(result)
    real = realize(c, certs, f_cap=args.f_cap)
    for st in real.stages:
        print(f"n = {st.n} m = {st.m_n} f = {st.f_n} degree = {st.degree} "
              f"defect = {format_rational(st.defect)} "
              f"expansiveness = {format_rational(st.expansiveness)} "
              f"slow_lhs = {format_rational(st.slow_lhs)} "
              f"g_gap = {format_rational(st.g_gap)} "
              f"threshold = {format_rational(st.slow_threshold)}")
    print(f"g = {real.g.spec()}")
    verdict = is_slow(real.g)
    print(f"slow = {verdict.verdict}")
    if args.emit:
        emit_realization(args.emit, real)
    return EXIT_OK


def _cmd_gadget_example(args) -> int:
    report = gadgets.example_check(args.n)
    print(f"n = {report.n}")
    print(f"m_star = {report.m_star}")
    print(f"fix_count = {report.fix_count}")
    print(f"deviation = {report.deviation}")
    print(f"holds = {_yn(report.holds)}")
    return EXIT_OK if report.holds else EXIT_EXHAUSTED


def _cmd_gadget_encode(args) -> int:
    p = parse_perm(args.rho)
    rho = finitary(p.images)
    result = gadgets.encode_check(rho, args.k, args.n, args.horizon)
    print("true" if result else "false")
    return EXIT_OK


def _cmd_gadget_stages(args) -> int:
    flags = tuple(tok.strip() not in ("0", "") for tok in args.trace.split(","))
    _, outcome = gadgets.stage_construction(gadgets.StageTrace(flags), args.horizon)
    print(f"fired = {outcome.fired}")
    print(f"prefix_end = {outcome.prefix_end}")
    print(f"involution_on_prefix = {_yn(outcome.involution_on_prefix)}")
    print(f"collisions_beyond = {_yn(outcome.collisions_beyond)}")
    return EXIT_OK


def _cmd_cert_verify(args) -> int:
    cert, c = load_certificate(args.file)
    print(f"certificate ok: prof({format_rational(cert.r)}) <= {cert.n} "
          f"for chunk on {len(c.elements)} elements")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles -h (0) and usage errors (1)
        return exc.code if isinstance(exc.code, int) else EXIT_DATA
    try:
        config = RunConfig(workers=args.workers, seed=args.seed)
        if args.command == "chunk":
            return _cmd_chunk_validate(args)
        if args.command == "profile":
            return _cmd_profile(args, config)
        if args.command == "growth":
            if args.growth_command == "prof":
                return _cmd_growth_prof(args)
            return _cmd_growth_cmp(args)
        if args.command == "supp":
            return _cmd_supp(args, config)
        if args.command == "realize":
            return _cmd_realize(args, config)
        if args.command == "gadget":
            if args.gadget_command == "example":
                return _cmd_gadget_example(args)
            if args.gadget_command == "encode":
                return _cmd_gadget_encode(args)
            return _cmd_gadget_stages(args)
        if args.command == "cert":
            return _cmd_cert_verify(args)
        raise ValueError(f"unknown command {args.command!r}")
    except ChunkParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
