"""Morphism quality measurement and certified sofic-profile search.

``sofic_profile`` finds the least degree n admitting a unit-preserving map
E -> S_n whose multiplicative defect is at most 1/r on every defined product
and whose distinct elements stay at Hamming distance at least 1 - 1/r.  The
search is exhaustive per degree: it backtracks over assignments in chunk
element order, prunes on the exact rational thresholds, and restricts the
first assigned element to canonical cycle-type representatives.  That
restriction loses nothing because conjugating an entire assignment by a fixed
permutation preserves distances, products, and the unit, so every feasible
assignment has a conjugate whose first element is canonical.

Degrees proven infeasible are recorded with the number of search nodes that
exhausted them, so a returned certificate documents minimality, not just
feasibility.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass
from fractions import Fraction

from .chunk import Chunk, validate
from .permcore import (
    Perm,
    all_cycle_types,
    all_perms,
    compose,
    cycle_type_representative,
    hamming_distance,
    identity,
)


@dataclass(frozen=True)
class MorphismQuality:
    """Measured defect and expansiveness of an assignment E -> S_n.

    ``expansiveness`` is None for single-element chunks, where the min over
    distinct pairs is vacuous (treated as the top value by every threshold).
    """

    defect: Fraction
    expansiveness: Fraction | None

    def meets(self, r: Fraction) -> bool:
        eps = 1 / r
        if self.defect > eps:
            return False
        return self.expansiveness is None or self.expansiveness >= 1 - eps


@dataclass(frozen=True)
class DegreeRecord:
    """One degree proven infeasible, with the node count that exhausted it."""

    degree: int
    nodes: int


@dataclass(frozen=True)
class ProfileCertificate:
    r: Fraction
    n: int
    assignment: dict[str, Perm]
    quality: MorphismQuality
    infeasible: tuple[DegreeRecord, ...]

    @property
    def vacuous(self) -> bool:
        # At r = 1 the thresholds are defect <= 1 and expansiveness >= 0,
        # which every assignment meets.
        return self.r == 1


@dataclass(frozen=True)
class Exhausted:
    """No feasible degree up to n_max; per-degree search records attached."""

    n_max: int
    records: tuple[DegreeRecord, ...] = ()


def measure(c: Chunk, f: dict[str, Perm]) -> MorphismQuality:
    """Exact defect (max over defined products) and expansiveness (min over pairs)."""
    missing = [e for e in c.elements if e not in f]
    if missing:
        raise ValueError(f"assignment not total, missing {missing}")
    degrees = {f[e].degree for e in c.elements}
    if len(degrees) > 1:
        raise ValueError(f"images of mixed degrees {sorted(degrees)}")
    n = degrees.pop()
    if f[c.unit] != identity(n):
        raise ValueError("unit must map to the identity permutation")

    defect = Fraction(0)
    for (a, b), ab in c.table.items():
        d = hamming_distance(f[ab], compose(f[a], f[b]))
        if d > defect:
            defect = d

    expansiveness: Fraction | None = None
    if len(c.elements) > 1:
        expansiveness = Fraction(1)
        elems = c.elements
        for i in range(len(elems)):
            for j in range(i + 1, len(elems)):
                d = hamming_distance(f[elems[i]], f[elems[j]])
                if d < expansiveness:
                    expansiveness = d
    return MorphismQuality(defect, expansiveness)


def _search_plan(c: Chunk) -> tuple[tuple[str, ...], list[list[tuple[str, str, str]]], list[list[str]]]:
    """Assignment order plus, per depth, the product triples and distinct pairs
    that become fully checkable once that depth is assigned."""
    order = tuple(e for e in c.elements if e != c.unit)
    pos = {e: i for i, e in enumerate(order)}
    pos[c.unit] = -1
    triples_at: list[list[tuple[str, str, str]]] = [[] for _ in order]
    pairs_at: list[list[str]] = [[] for _ in order]
    for (a, b), ab in c.table.items():
        last = max(pos[a], pos[b], pos[ab])
        if last >= 0:
            triples_at[last].append((a, b, ab))
    for i, e in enumerate(order):
        pairs_at[i] = [c.unit] + list(order[:i])
    return order, triples_at, pairs_at


def _backtrack(c: Chunk, r: Fraction, n: int,
               first_candidates: list[Perm] | None = None) -> tuple[dict[str, Perm] | None, int]:
    """Exhaustive search at one degree.  Returns (witness or None, nodes tried)."""
    eps = 1 / r
    need_exp = 1 - eps
    order, triples_at, pairs_at = _search_plan(c)
    assigned: dict[str, Perm] = {c.unit: identity(n)}
    nodes = 0

    if not order:
        # Single-element chunk: the unit assignment is the whole witness.
        return dict(assigned), 1

    candidates0 = first_candidates
    if candidates0 is None:
        candidates0 = [cycle_type_representative(t, n) for t in all_cycle_types(n)]
    rest = all_perms(n)

    def extend(depth: int) -> dict[str, Perm] | None:
        nonlocal nodes
        e = order[depth]
        pool = candidates0 if depth == 0 else rest
        for cand in pool:
            nodes += 1
            ok = True
            for other in pairs_at[depth]:
                if hamming_distance(assigned[other], cand) < need_exp:
                    ok = False
                    break
            if ok:
                assigned[e] = cand
                for a, b, ab in triples_at[depth]:
                    if hamming_distance(assigned[ab], compose(assigned[a], assigned[b])) > eps:
                        ok = False
                        break
                if ok:
                    if depth + 1 == len(order):
                        return dict(assigned)
                    found = extend(depth + 1)
                    if found is not None:
                        return found
                del assigned[e]
        return None

    return extend(0), nodes


def _search_one_candidate(args: tuple[Chunk, Fraction, int, Perm]) -> tuple[dict[str, Perm] | None, int]:
    c, r, n, cand = args
    return _backtrack(c, r, n, first_candidates=[cand])


def _search_degree(c: Chunk, r: Fraction, n: int, workers: int) -> tuple[dict[str, Perm] | None, int]:
    order = [e for e in c.elements if e != c.unit]
    cands = [cycle_type_representative(t, n) for t in all_cycle_types(n)]
    if workers <= 1 or not order or len(cands) <= 1:
        return _backtrack(c, r, n)
    # Split the canonical first-element candidates across workers.  Results are
    # consumed in candidate order, so the reported witness and node totals are
    # identical to the sequential search.
    nodes = 0
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        for witness, sub_nodes in pool.map(
                _search_one_candidate, [(c, r, n, cand) for cand in cands]):
            nodes += sub_nodes
            if witness is not None:
                return witness, nodes
    return None, nodes


def sofic_profile(c: Chunk, r, n_max: int, *, workers: int = 1,
                  require_valid: bool = True) -> ProfileCertificate | Exhausted:
    """Least feasible degree for the 1/r thresholds, or Exhausted(n_max).

    ``require_valid=False`` skips the group-trace validation, for deliberately
    pathological inputs.  r = 1 is accepted; the resulting certificate is
    flagged vacuous since both thresholds degenerate.
    """
    r = Fraction(r)
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    if require_valid:
        report = validate(c)
        if not report.ok:
            raise ValueError("chunk fails validation: " + "; ".join(report.all_violations()))

    records: list[DegreeRecord] = []
    for n in range(1, n_max + 1):
        witness, nodes = _search_degree(c, r, n, workers)
        if witness is not None:
            quality = measure(c, witness)
            return ProfileCertificate(r, n, witness, quality, tuple(records))
        records.append(DegreeRecord(n, nodes))
    return Exhausted(n_max, tuple(records))


def profile_table(c: Chunk, rs, n_max: int, *, workers: int = 1,
                  require_valid: bool = True) -> list[ProfileCertificate | Exhausted]:
    return [sofic_profile(c, r, n_max, workers=workers, require_valid=require_valid)
            for r in rs]


def decide_product(c: Chunk, i: str, j: str, k: str,
                   cert: ProfileCertificate) -> str:
    """Decide whether i*j = k from an r = 3 certificate covering {unit, i, j, k}.

    Measures d(f(i)f(j), f(k)) and answers "equal" below 1/3 and "distinct"
    from 2/3 up.  The middle band cannot occur for a genuine certificate of a
    group trace, so hitting it means the certificate is unfit for the chunk.
    """
    if cert.r != 3:
        raise ValueError(f"certificate must be at r = 3, got r = {cert.r}")
    for e in (i, j, k):
        if e not in c.elements:
            raise ValueError(f"element {e!r} not in chunk")
        if e not in cert.assignment:
            raise ValueError(f"certificate does not cover element {e!r}")
    f = cert.assignment
    d = hamming_distance(compose(f[i], f[j]), f[k])
    if d < Fraction(1, 3):
        return "equal"
    if d >= Fraction(2, 3):
        return "distinct"
    raise ValueError(f"certificate too weak: d(f({i})f({j}), f({k})) = {d} lies in [1/3, 2/3)")
