"""Evaluable permutations of the naturals with growth-bound certificates.

A ``LazyPerm`` carries total forward and backward evaluators plus a symbolic
descriptor.  Nothing here can verify bijectivity of a black-box function on
all of the naturals; ``audit`` checks injectivity, the inverse round trips,
and the two-sided growth bound on an explicit horizon and says so in the
witness it returns.

``supp_morphism`` restricts carriers to a finite prefix and completes the
partial injection to a permutation by the greedy rule: unmatched domain
points, in increasing order, go to unmatched range points in increasing
order.  ``realize`` assembles the block-direct-sum family out of profile
certificates, choosing each multiplicity minimally so that every stage meets
its quality thresholds and both block-end slowness inequalities.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .chunk import Chunk, validate
from .growth import (BlockStep, Exhausted, GrowthFn, growth_profile,
                     max_m_with_value_at_most)
from .permcore import Perm, block_sum, identity, inverse
from .profile import MorphismQuality, ProfileCertificate, measure


class GChunkError(ValueError):
    """A carrier family failed its construction-time audit."""


@dataclass(frozen=True)
class LazyPerm:
    """A permutation of the naturals given by forward/backward evaluators."""

    forward: Callable[[int], int]
    backward: Callable[[int], int]
    descriptor: str

    def __call__(self, m: int) -> int:
        return self.forward(m)

    def __repr__(self) -> str:
        return f"LazyPerm({self.descriptor})"


def identity_lazy() -> LazyPerm:
    return LazyPerm(lambda m: m, lambda m: m, "identity")


def finitary(images: Sequence[int]) -> LazyPerm:
    """Permutation acting as ``images`` on a prefix and as the identity beyond."""
    images = tuple(images)
    n = len(images)
    if sorted(images) != list(range(n)):
        raise ValueError(f"prefix {images!r} is not a permutation of 0..{n - 1}")
    back = [0] * n
    for x, v in enumerate(images):
        back[v] = x
    back = tuple(back)
    body = " ".join(str(v) for v in images)
    return LazyPerm(
        lambda m: images[m] if m < n else m,
        lambda m: back[m] if m < n else m,
        f"table:[{body}]+id",
    )


def from_perm(p: Perm) -> LazyPerm:
    return finitary(p.images)


def compose_lazy(p: LazyPerm, q: LazyPerm) -> LazyPerm:
    return LazyPerm(
        lambda m: p.forward(q.forward(m)),
        lambda m: q.backward(p.backward(m)),
        f"({p.descriptor})o({q.descriptor})",
    )


def inverse_lazy(p: LazyPerm) -> LazyPerm:
    return LazyPerm(p.backward, p.forward, f"({p.descriptor})^-1")


@dataclass(frozen=True)
class BoundWitness:
    """Audit record: two-sided bound by g verified on [0, audited_horizon]."""

    g: GrowthFn
    audited_horizon: int
    symbolic: str | None = None


@dataclass(frozen=True)
class AuditViolation:
    """First failure found by an audit; which check, and where."""

    kind: str  # "injectivity" | "roundtrip" | "bound"
    m: int
    n: int | None = None
    side: str = "forward"

    def __str__(self) -> str:
        if self.kind == "bound":
            return f"{self.side}({self.m}) exceeds g({self.n})"
        if self.kind == "roundtrip":
            return f"inverse round trip fails at {self.m} ({self.side})"
        return f"forward not injective at {self.m}"


def audit(p: LazyPerm, g: GrowthFn, horizon: int,
          symbolic: str | None = None) -> BoundWitness | AuditViolation:
    """Check injectivity, round trips, and rho(m) <= g(n) for all m <= n <= horizon.

    The bound is two-sided (forward and backward).  Violations are data; the
    first one found is returned.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    fwd = [p.forward(m) for m in range(horizon + 1)]
    seen: dict[int, int] = {}
    for m, v in enumerate(fwd):
        if v in seen:
            return AuditViolation("injectivity", m)
        seen[v] = m
    for m, v in enumerate(fwd):
        if p.backward(v) != m:
            return AuditViolation("roundtrip", m, side="forward")
    bwd = [p.backward(m) for m in range(horizon + 1)]
    for m, v in enumerate(bwd):
        if p.forward(v) != m:
            return AuditViolation("roundtrip", m, side="backward")
    run_max_f = -1
    run_max_b = -1
    arg_f = arg_b = 0
    for n in range(horizon + 1):
        if fwd[n] > run_max_f:
            run_max_f, arg_f = fwd[n], n
        if bwd[n] > run_max_b:
            run_max_b, arg_b = bwd[n], n
        gn = g(n)
        if run_max_f > gn:
            return AuditViolation("bound", arg_f, n=n, side="forward")
        if run_max_b > gn:
            return AuditViolation("bound", arg_b, n=n, side="backward")
    return BoundWitness(g, horizon, symbolic)


@dataclass(frozen=True)
class GChunk:
    """A chunk whose elements are carried by lazy permutations bounded by g."""

    chunk: Chunk
    carriers: dict[str, LazyPerm]
    bound: GrowthFn
    horizon: int
    witnesses: dict[str, BoundWitness]


def build_gchunk(chunk: Chunk, carriers: Mapping[str, LazyPerm], bound: GrowthFn,
                 horizon: int, *, check_table: bool = True) -> GChunk:
    """Audit every carrier and the table consistency, then assemble the g-chunk.

    The unit's carrier defaults to the identity and must evaluate as such on
    the horizon.  Where the table defines a*b = c, the carriers of a and b
    must compose to the carrier of c pointwise on the audited prefix.
    """
    carriers = dict(carriers)
    carriers.setdefault(chunk.unit, identity_lazy())
    missing = [e for e in chunk.elements if e not in carriers]
    if missing:
        raise GChunkError(f"no carrier for elements {missing}")

    unit_carrier = carriers[chunk.unit]
    for m in range(horizon + 1):
        if unit_carrier.forward(m) != m:
            raise GChunkError(f"unit carrier moves {m}")

    witnesses = {}
    for e in chunk.elements:
        outcome = audit(carriers[e], bound, horizon)
        if isinstance(outcome, AuditViolation):
            raise GChunkError(f"carrier of {e!r}: {outcome}")
        witnesses[e] = outcome

    if check_table:
        for (a, b), c in chunk.table.items():
            fa, fb, fc = carriers[a].forward, carriers[b].forward, carriers[c].forward
            for m in range(horizon + 1):
                if fa(fb(m)) != fc(m):
                    raise GChunkError(
                        f"table says {a} * {b} = {c} but carriers disagree at {m}")

    return GChunk(chunk, carriers, bound, horizon, witnesses)


def supp_morphism(gc: GChunk, n: int) -> dict[str, Perm]:
    """Degree-n restriction of every carrier, greedily completed to bijections.

    A carrier's pairs (m, rho(m)) with both sides below n are kept; leftover
    domain points are matched to leftover range points in increasing order.
    The unit goes to the identity.
    """
    if n < 1:
        raise ValueError("degree must be positive")
    out: dict[str, Perm] = {}
    for e in gc.chunk.elements:
        if e == gc.chunk.unit:
            out[e] = identity(n)
            continue
        rho = gc.carriers[e].forward
        images: list[int | None] = [None] * n
        used = [False] * n
        for m in range(n):
            v = rho(m)
            if v < n:
                if used[v]:
                    raise ValueError(f"carrier of {e!r} not injective below {n}")
                images[m] = v
                used[v] = True
        free = iter([v for v in range(n) if not used[v]])
        filled = tuple(img if img is not None else next(free) for img in images)
        out[e] = Perm(filled)
    return out


@dataclass(frozen=True)
class SuppReport:
    """Measured quality of the degree-n supp morphism against the g-bounds."""

    n: int
    r: Fraction
    m_star: int | None
    quality: MorphismQuality
    defect_bound: Fraction | None          # 2(n - m*)/n when m* exists
    defect_bound_holds: bool | None
    separation_hypothesis: bool            # g(n - |Fix|) >= n for distinct pairs
    conclusion_expected: bool              # hypothesis and (n - m*)/n <= 1/(2r)
    expansiveness_threshold: Fraction      # 1 - 1/(2r)
    expansiveness_ok: bool


def supp_quality(gc: GChunk, n: int, r) -> SuppReport:
    r = Fraction(r)
    sigma = supp_morphism(gc, n)
    quality = measure(gc.chunk, sigma)
    m_star = max_m_with_value_at_most(gc.bound, n)
    defect_bound = None
    bound_holds = None
    if m_star is not None:
        defect_bound = Fraction(2 * (n - m_star), n)
        bound_holds = quality.defect <= defect_bound

    hypothesis = True
    elems = gc.chunk.elements
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            p, q = sigma[elems[i]], sigma[elems[j]]
            agree = sum(1 for x in range(n) if p.images[x] == q.images[x])
            if gc.bound(n - agree) < n:
                hypothesis = False
    gap_small = (m_star is not None and Fraction(n - m_star, n) <= 1 / (2 * r))
    threshold = 1 - 1 / (2 * r)
    exp_ok = quality.expansiveness is None or quality.expansiveness >= threshold
    return SuppReport(
        n=n, r=r, m_star=m_star, quality=quality,
        defect_bound=defect_bound, defect_bound_holds=bound_holds,
        separation_hypothesis=hypothesis,
        conclusion_expected=hypothesis and gap_small,
        expansiveness_threshold=threshold,
        expansiveness_ok=exp_ok,
    )


def supp_defect_holds(gc: GChunk, n: int, r: Fraction) -> bool:
    sigma = supp_morphism(gc, n)
    return measure(gc.chunk, sigma).defect <= 1 / r


def property_profile(gc: GChunk, r, n_max: int) -> int | Exhausted:
    """Least degree at which the supp morphism's defect drops to 1/r.

    Cross-checked against growth_profile(bound, 2r): whenever that bound is
    finite and within n_max, the returned degree may not exceed it.  The
    defect need not be monotone in n; use ``property_holds_mask`` to inspect
    the full scan.
    """
    r = Fraction(r)
    found = None
    for n in range(1, n_max + 1):
        if supp_defect_holds(gc, n, r):
            found = n
            break
    bound = growth_profile(gc.bound, 2 * r, n_max)
    if isinstance(bound, int):
        if found is None or found > bound:
            raise RuntimeError(
                f"supp defect stays above 1/r through degree {bound}, which the "
                "growth profile of the declared bound guarantees to suffice")
    if found is None:
        return Exhausted(n_max)
    return found


def property_holds_mask(gc: GChunk, r, n_range: Sequence[int]) -> list[bool]:
    r = Fraction(r)
    return [supp_defect_holds(gc, n, r) for n in n_range]


# -- block-direct-sum realization ----------------------------------------------

@dataclass(frozen=True)
class StageReport:
    """Quality of the stage-n block sum and its slowness inequalities.

    ``slow_lhs`` uses the stage sums below n; ``g_gap`` is 1 - j/g(j) at the
    block end j = degree - 1 of the realized growth bound, whose block-n
    offset sums through n.  The two differ by one stage of block sizes and the
    construction keeps both below 1/n.
    """

    n: int
    m_n: int
    f_n: int
    degree: int                      # total degree through this stage
    defect: Fraction
    expansiveness: Fraction | None
    slow_lhs: Fraction
    g_gap: Fraction
    slow_threshold: Fraction


@dataclass(frozen=True)
class Realization:
    """Block-direct-sum family realizing a chunk inside permutations of N.

    Stage i (i = 2..depth) contributes f_i consecutive copies of the degree
    m_i certificate assignment; beyond the constructed blocks every carrier is
    the identity.  ``g`` is the block-step growth function of the layout and
    bounds every carrier exactly, blockwise.
    """

    chunk: Chunk
    m: tuple[int, ...]
    f: tuple[int, ...]
    layout: tuple[int, ...]          # cumulative degrees, one per stage
    sigma: tuple[dict[str, Perm], ...]
    g: BlockStep
    stages: tuple[StageReport, ...]

    @property
    def depth(self) -> int:
        return len(self.m) + 1

    def block_sum_assignment(self, n: int) -> dict[str, Perm]:
        """The stage-n assignment: f(i) copies of each certificate, i = 2..n."""
        if not 2 <= n <= self.depth:
            raise ValueError(f"stage {n} outside 2..{self.depth}")
        return {
            e: block_sum([(self.sigma[i - 2][e], self.f[i - 2]) for i in range(2, n + 1)])
            for e in self.chunk.elements
        }

    def carrier(self, e: str) -> LazyPerm:
        if e not in self.chunk.elements:
            raise ValueError(f"element {e!r} not in chunk")
        layout = self.layout
        sizes = self.m
        tables = tuple(s[e].images for s in self.sigma)
        inv_tables = tuple(inverse(s[e]).images for s in self.sigma)
        top = layout[-1]

        def walk(tabs):
            def fn(x: int) -> int:
                if x >= top:
                    return x
                k = bisect_right(layout, x)
                start = layout[k - 1] if k else 0
                size = sizes[k]
                off = x - start
                return start + (off // size) * size + tabs[k][off % size]
            return fn

        return LazyPerm(walk(tables), walk(inv_tables),
                        f"blocksum:depth={self.depth}")

    def exact_products(self) -> dict[tuple[str, str], str]:
        """Pairs whose carriers compose to another carrier exactly.

        Block sums compose blockwise and the tails are identities, so equality
        of total functions reduces to per-stage equality of finite
        permutations; no horizon is involved.
        """
        out: dict[tuple[str, str], str] = {}
        elems = self.chunk.elements
        stage_images = [{e: s[e].images for e in elems} for s in self.sigma]
        for a in elems:
            for b in elems:
                composites = [
                    tuple(imgs[a][imgs[b][x]] for x in range(len(imgs[b])))
                    for imgs in stage_images
                ]
                for c in elems:
                    if all(imgs[c] == comp
                           for imgs, comp in zip(stage_images, composites)):
                        out[(a, b)] = c
                        break
        return out

    def realized_chunk(self) -> Chunk:
        """The carriers' own chunk: the induced table of exact compositions.

        When some certificate has positive defect, products of the abstract
        table drop out here; the name-preserving bijection onto the abstract
        chunk is then a homomorphism that is not an isomorphism.
        """
        return Chunk(self.chunk.elements, self.chunk.unit, self.exact_products())

    def chunk_compatibility(self) -> tuple[tuple[tuple[str, str], ...],
                                           tuple[tuple[str, str], ...]]:
        """(dropped, extra): abstract products the carriers miss, and
        carrier-exact products the abstract chunk does not define the same way.

        The name-preserving map from the realized chunk onto the abstract one
        is a homomorphism exactly when ``extra`` is empty.
        """
        induced = self.exact_products()
        dropped = tuple(sorted(
            key for key, val in self.chunk.table.items()
            if induced.get(key) != val))
        extra = tuple(sorted(
            key for key, val in induced.items()
            if self.chunk.table.get(key) != val))
        return dropped, extra

    def gchunk(self, horizon: int | None = None) -> GChunk:
        """The realized g-chunk: carriers over the induced (exact) table."""
        if horizon is None:
            horizon = self.layout[-1] + self.m[-1]
        carriers = {e: self.carrier(e) for e in self.chunk.elements}
        return build_gchunk(self.realized_chunk(), carriers, self.g, horizon)

    def displacement(self, n: int, e1: str, e2: str) -> Fraction:
        """Block-sum distance predicted from per-stage fixed-point counts."""
        num = 0
        den = 0
        for i in range(2, n + 1):
            p = self.sigma[i - 2][e1]
            q = self.sigma[i - 2][e2]
            agree = sum(1 for x in range(p.degree) if p.images[x] == q.images[x])
            num += self.f[i - 2] * (self.m[i - 2] - agree)
            den += self.f[i - 2] * self.m[i - 2]
        return Fraction(num, den)


def realize(c: Chunk, certs: Sequence[ProfileCertificate], *,
            f_cap: int = 10 ** 6, require_valid: bool = True) -> Realization:
    """Assemble the realization from certificates at r = 2, 3, ..., depth.

    Each multiplicity f(n) is the least positive integer making the stage-n
    block sum a (1 - 1/(n-1))-expansive 1/(n-1)-morphism while keeping both
    block-end slowness quantities (the stage-sum ratio and the realized g's
    1 - j/g(j) at the block end) below 1/n.  Every constraint improves as
    f(n) grows, so a least value exists; f_cap guards runaway inputs.
    """
    if require_valid:
        report = validate(c)
        if not report.ok:
            raise ValueError("chunk fails validation: " + "; ".join(report.all_violations()))
    if not certs:
        raise ValueError("need at least the r = 2 certificate")
    for idx, cert in enumerate(certs):
        want = idx + 2
        if cert.r != want:
            raise ValueError(f"certificate {idx} has r = {cert.r}, expected {want}")
        if not cert.quality.meets(Fraction(want)):
            raise ValueError(f"certificate at r = {want} does not meet its thresholds")
        if set(cert.assignment) != set(c.elements):
            raise ValueError(f"certificate at r = {want} covers different elements")

    m_list = [cert.n for cert in certs]
    sigma = [dict(cert.assignment) for cert in certs]
    f_list: list[int] = []
    layout: list[int] = []
    stages: list[StageReport] = []

    for idx, cert in enumerate(certs):
        n = idx + 2
        prev_degree = layout[-1] if layout else 0
        sum_m_prev = sum(m_list[:idx])
        sum_m_total = sum_m_prev + m_list[idx]
        eps = Fraction(1, n - 1)
        chosen = None
        for f_n in range(1, f_cap + 1):
            degree = prev_degree + f_n * m_list[idx]
            assignment = {
                e: block_sum([(sigma[i][e], f_list[i]) for i in range(idx)]
                             + [(sigma[idx][e], f_n)])
                for e in c.elements
            }
            quality = measure(c, assignment)
            slow_den = degree - 1 + sum_m_prev
            slow_lhs = Fraction(sum_m_prev, slow_den) if slow_den else Fraction(0)
            g_gap = Fraction(sum_m_total, degree - 1 + sum_m_total)
            if (quality.defect <= eps
                    and (quality.expansiveness is None or quality.expansiveness >= 1 - eps)
                    and slow_lhs < Fraction(1, n)
                    and g_gap < Fraction(1, n)):
                chosen = (f_n, degree, quality, slow_lhs, g_gap)
                break
        if chosen is None:
            raise ValueError(
                f"no multiplicity up to {f_cap} satisfies the stage-{n} quality "
                f"thresholds and the slowness inequalities")
        f_n, degree, quality, slow_lhs, g_gap = chosen
        f_list.append(f_n)
        layout.append(degree)
        stages.append(StageReport(
            n=n, m_n=m_list[idx], f_n=f_n, degree=degree,
            defect=quality.defect, expansiveness=quality.expansiveness,
            slow_lhs=slow_lhs, g_gap=g_gap, slow_threshold=Fraction(1, n)))

    offsets = []
    acc = 0
    for m_i in m_list:
        acc += m_i
        offsets.append(acc)
    g = BlockStep(tuple(layout), tuple(offsets))

    return Realization(
        chunk=c, m=tuple(m_list), f=tuple(f_list), layout=tuple(layout),
        sigma=tuple(sigma), g=g, stages=tuple(stages))
