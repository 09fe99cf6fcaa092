#!/usr/bin/env python3
"""Build the block-direct-sum realization of a chunk and report every stage.

For each stage the report shows the certificate degree, the chosen
multiplicity, the running total degree, the measured block-sum quality, and
the two block-end slowness quantities against their 1/n threshold.  The
growth bound's own block checks conclude the report.

Example:
    python scripts/realization_report.py tests/data/z3.chunk --depth 8 \
        --emit /tmp/z3_realization.json
"""

import argparse
import sys

from soficapprox.chunk import parse_chunk_file
from soficapprox.cli import emit_realization, format_rational
from soficapprox.growth import is_slow
from soficapprox.lazyperm import realize, supp_morphism
from soficapprox.profile import Exhausted, sofic_profile


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("chunk")
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--n-max", type=int, default=8)
    ap.add_argument("--f-cap", type=int, default=10 ** 6)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--emit", default=None)
    args = ap.parse_args(argv)

    c = parse_chunk_file(args.chunk)
    certs = []
    for r in range(2, args.depth + 1):
        result = sofic_profile(c, r, args.n_max, workers=args.workers)
        if isinstance(result, Exhausted):
            print(f"profile search exhausted at r = {r} (n_max = {result.n_max})")
            return 2
        certs.append(result)
        print(f"certificate r = {r}: degree {result.n}, "
              f"defect {format_rational(result.quality.defect)}, "
              f"expansiveness {format_rational(result.quality.expansiveness)}")

    real = realize(c, certs, f_cap=args.f_cap)
    print()
    print("stage   m   f  degree     defect  expansiveness   slow_lhs      g_gap  threshold")
    for st in real.stages:
        print(f"{st.n:5d} {st.m_n:3d} {st.f_n:3d} {st.degree:7d} "
              f"{format_rational(st.defect):>10} {format_rational(st.expansiveness):>14} "
              f"{format_rational(st.slow_lhs):>10} {format_rational(st.g_gap):>10} "
              f"{format_rational(st.slow_threshold):>10}")
    print()
    print(f"growth bound: {real.g.spec()}")
    verdict = is_slow(real.g)
    print(f"slow: {verdict.verdict}")
    for check in verdict.blocks or ():
        print(f"  stage {check.stage}: gap {check.gap} < {check.threshold}: "
              f"{'ok' if check.ok else 'VIOLATED'}")

    gc = real.gchunk()
    agree = all(
        supp_morphism(gc, degree) == real.block_sum_assignment(stage_n)
        for stage_n, degree in zip(range(2, real.depth + 1), real.layout))
    print(f"supp restrictions reproduce every stage: {'yes' if agree else 'NO'}")

    if args.emit:
        emit_realization(args.emit, real)
        print(f"wrote {args.emit}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
