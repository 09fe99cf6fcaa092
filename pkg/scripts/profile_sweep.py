#!/usr/bin/env python3
"""Sweep sofic profiles of chunk files over a range of quality parameters.

Example:
    python scripts/profile_sweep.py tests/data/z2.chunk tests/data/z3.chunk \
        --rs 2/1,3/1,4/1 --n-max 6
"""

import argparse
import sys
import time
from fractions import Fraction

from soficapprox.chunk import parse_chunk_file
from soficapprox.profile import Exhausted, profile_table


def parse_rational(text):
    if "/" in text:
        num, den = text.split("/", 1)
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("chunks", nargs="+", help="chunk files to sweep")
    ap.add_argument("--rs", default="2/1,3/1,4/1,5/1")
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)

    rs = [parse_rational(tok) for tok in args.rs.split(",")]
    header = "chunk".ljust(28) + "".join(f"r={r}".rjust(10) for r in rs) + "    time"
    print(header)
    print("-" * len(header))
    for path in args.chunks:
        c = parse_chunk_file(path)
        start = time.perf_counter()
        results = profile_table(c, rs, args.n_max, workers=args.workers)
        elapsed = time.perf_counter() - start
        cells = []
        for res in results:
            cells.append("--" if isinstance(res, Exhausted) else str(res.n))
        print(path.ljust(28) + "".join(cell.rjust(10) for cell in cells)
              + f"  {elapsed:6.2f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
