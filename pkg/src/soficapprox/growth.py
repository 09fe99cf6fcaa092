"""Growth functions on the naturals-with-infinity and their profile calculus.

Members of the calculus are monotone functions g with g(n) > n everywhere and
g(inf) = inf.  Symbolic kinds (affine, linear, block-step, tabulated,
composition, power, infinity) evaluate lazily and exactly; the comparison
orders are decided symbolically wherever a kind reduces to an eventually
affine form, and otherwise produce explicitly bounded verdicts rather than
silent guesses.

``growth_profile`` computes the least n such that some m has g(m) <= n and
(n - m)/n < 1/r, with the strict inequality taken exactly; the infimum over an
empty set is reported as Exhausted.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

INF = math.inf  # top element; comparisons against ints are exact

DEFAULT_HORIZON = 10_000


class GrowthFn:
    """Base class; subclasses implement ``_eval`` on finite arguments."""

    def __call__(self, n):
        if n == INF:
            return INF
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"argument must be a natural number or INF, got {n!r}")
        return self._eval(n)

    def _eval(self, n: int):
        raise NotImplementedError

    def spec(self) -> str:
        raise NotImplementedError

    def __str__(self) -> str:
        return self.spec()


@dataclass(frozen=True, repr=False)
class Affine(GrowthFn):
    """n -> n + c with c >= 1."""

    c: int

    def __post_init__(self) -> None:
        if not isinstance(self.c, int) or self.c < 1:
            raise ValueError(f"affine offset must be a positive integer, got {self.c!r}")

    def _eval(self, n: int) -> int:
        return n + self.c

    def spec(self) -> str:
        return f"affine:{self.c}"

    def __repr__(self) -> str:
        return f"Affine({self.c})"


@dataclass(frozen=True, repr=False)
class Linear(GrowthFn):
    """n -> a*n for n >= 1, with a >= 2.

    a*0 = 0 would break g(n) > n at the origin, so the value at 0 is defined
    as a, which keeps monotonicity and the strict bound testable everywhere.
    """

    a: int

    def __post_init__(self) -> None:
        if not isinstance(self.a, int) or self.a < 2:
            raise ValueError(f"linear slope must be an integer >= 2, got {self.a!r}")

    def _eval(self, n: int) -> int:
        return self.a * n if n >= 1 else self.a

    def spec(self) -> str:
        return f"linear:{self.a}"

    def __repr__(self) -> str:
        return f"Linear({self.a})"


@dataclass(frozen=True, repr=False)
class BlockStep(GrowthFn):
    """n -> n + offset of the block containing n.

    ``breaks`` are the strictly increasing block end points; block k covers
    [breaks[k-1], breaks[k]) (the first starts at 0) and carries offsets[k].
    Beyond the last break the final offset continues, so the function is total
    and eventually affine.  Realizations emit one (break, offset) pair per
    construction stage.
    """

    breaks: tuple[int, ...]
    offsets: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.breaks) != len(self.offsets) or not self.breaks:
            raise ValueError("need equally many breaks and offsets, at least one pair")
        if any(not isinstance(b, int) or b < 1 for b in self.breaks):
            raise ValueError(f"breaks must be positive integers: {self.breaks!r}")
        if list(self.breaks) != sorted(set(self.breaks)):
            raise ValueError(f"breaks must be strictly increasing: {self.breaks!r}")
        if any(not isinstance(o, int) or o < 1 for o in self.offsets):
            raise ValueError(f"offsets must be positive integers: {self.offsets!r}")
        if list(self.offsets) != sorted(self.offsets):
            raise ValueError(f"offsets must be non-decreasing: {self.offsets!r}")

    def _eval(self, n: int) -> int:
        k = bisect_right(self.breaks, n)
        return n + self.offsets[min(k, len(self.offsets) - 1)]

    def spec(self) -> str:
        return "blockstep:" + ";".join(f"{b},{o}" for b, o in zip(self.breaks, self.offsets))

    def __repr__(self) -> str:
        return f"BlockStep(breaks={self.breaks}, offsets={self.offsets})"


@dataclass(frozen=True, repr=False)
class Tabulated(GrowthFn):
    """Explicit prefix table followed by an affine tail n -> n + tail_c."""

    prefix: tuple[int, ...]
    tail_c: int

    def __post_init__(self) -> None:
        if not isinstance(self.tail_c, int) or self.tail_c < 1:
            raise ValueError(f"tail offset must be a positive integer, got {self.tail_c!r}")
        prev = None
        for i, v in enumerate(self.prefix):
            if not isinstance(v, int) or v <= i:
                raise ValueError(f"table value {v!r} at {i} violates g(n) > n")
            if prev is not None and v < prev:
                raise ValueError(f"table not monotone at {i}")
            prev = v
        if self.prefix and self.prefix[-1] > len(self.prefix) + self.tail_c:
            raise ValueError("table does not join monotonically onto its tail")

    def _eval(self, n: int) -> int:
        if n < len(self.prefix):
            return self.prefix[n]
        return n + self.tail_c

    def spec(self) -> str:
        body = ",".join(str(v) for v in self.prefix)
        return f"table:{body}+{self.tail_c}"

    def __repr__(self) -> str:
        return f"Tabulated({list(self.prefix)}, tail_c={self.tail_c})"


@dataclass(frozen=True, repr=False)
class Compose(GrowthFn):
    """n -> outer(inner(n))."""

    outer: GrowthFn
    inner: GrowthFn

    def _eval(self, n: int):
        return self.outer(self.inner(n))

    def spec(self) -> str:
        return f"compose({self.outer.spec()},{self.inner.spec()})"

    def __repr__(self) -> str:
        return f"Compose({self.outer!r}, {self.inner!r})"


@dataclass(frozen=True, repr=False)
class Power(GrowthFn):
    """k-fold composition of the base with itself, k >= 1."""

    base: GrowthFn
    k: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"power must be a positive integer, got {self.k!r}")

    def _eval(self, n: int):
        v = n
        for _ in range(self.k):
            v = self.base(v)
            if v == INF:
                return INF
        return v

    def spec(self) -> str:
        return f"power({self.base.spec()},{self.k})"

    def __repr__(self) -> str:
        return f"Power({self.base!r}, {self.k})"


@dataclass(frozen=True, repr=False)
class Infinity(GrowthFn):
    """Identically infinite; bounds nothing and has an empty profile set."""

    def _eval(self, n: int):
        return INF

    def spec(self) -> str:
        return "infinity"

    def __repr__(self) -> str:
        return "Infinity()"


def compose(outer: GrowthFn, inner: GrowthFn) -> Compose:
    return Compose(outer, inner)


def power(g: GrowthFn, k: int) -> Power:
    return Power(g, k)


# -- spec strings -------------------------------------------------------------

def parse_growth(text: str) -> GrowthFn:
    text = text.strip()
    if text == "infinity":
        return Infinity()
    if text.startswith("affine:"):
        return Affine(int(text[len("affine:"):]))
    if text.startswith("linear:"):
        return Linear(int(text[len("linear:"):]))
    if text.startswith("blockstep:"):
        pairs = []
        for part in text[len("blockstep:"):].split(";"):
            b, o = part.split(",")
            pairs.append((int(b), int(o)))
        return BlockStep(tuple(b for b, _ in pairs), tuple(o for _, o in pairs))
    if text.startswith("table:"):
        body = text[len("table:"):]
        values, _, tail = body.rpartition("+")
        prefix = tuple(int(v) for v in values.split(",")) if values else ()
        return Tabulated(prefix, int(tail))
    if text.startswith("compose(") and text.endswith(")"):
        left, right = _split_top_comma(text[len("compose("):-1])
        return Compose(parse_growth(left), parse_growth(right))
    if text.startswith("power(") and text.endswith(")"):
        left, right = _split_top_comma(text[len("power("):-1])
        return Power(parse_growth(left), int(right))
    raise ValueError(f"cannot parse growth spec {text!r}")


def _split_top_comma(body: str) -> tuple[str, str]:
    depth = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            return body[:i], body[i + 1:]
    raise ValueError(f"expected a top-level comma in {body!r}")


# -- symbolic analysis --------------------------------------------------------

@dataclass(frozen=True)
class EventualAffine:
    """g(n) = a*n + c exactly for all n >= n_from."""

    a: int
    c: int
    n_from: int


def is_infinite(g: GrowthFn) -> bool:
    if isinstance(g, Infinity):
        return True
    if isinstance(g, Compose):
        return is_infinite(g.outer) or is_infinite(g.inner)
    if isinstance(g, Power):
        return is_infinite(g.base)
    return False


def linearize(g: GrowthFn) -> EventualAffine | None:
    """Exact eventually-affine form, or None (infinite or unknown shape)."""
    if isinstance(g, Affine):
        return EventualAffine(1, g.c, 0)
    if isinstance(g, Linear):
        return EventualAffine(g.a, 0, 1)
    if isinstance(g, BlockStep):
        return EventualAffine(1, g.offsets[-1], g.breaks[-1])
    if isinstance(g, Tabulated):
        return EventualAffine(1, g.tail_c, len(g.prefix))
    if isinstance(g, Compose):
        fo, fi = linearize(g.outer), linearize(g.inner)
        if fo is None or fi is None:
            return None
        # inner(n) > n >= outer's threshold once n clears both thresholds
        return EventualAffine(fo.a * fi.a, fo.a * fi.c + fo.c,
                              max(fi.n_from, fo.n_from))
    if isinstance(g, Power):
        form = linearize(g.base)
        if form is None:
            return None
        acc = form
        for _ in range(g.k - 1):
            acc = EventualAffine(form.a * acc.a, form.a * acc.c + form.c,
                                 max(acc.n_from, form.n_from))
        return acc
    return None


@dataclass(frozen=True)
class PrecVerdict:
    """Outcome of the eventual strict comparison f(n) < g(n).

    ``true`` carries the minimal onset n0; ``false`` carries a point from
    which f(n) >= g(n) persists; ``inconclusive`` carries the sampled window.
    """

    outcome: str  # "true" | "false" | "inconclusive"
    n0: int | None = None
    witness: int | None = None
    note: str = ""


def _minimal_onset(f: GrowthFn, g: GrowthFn, start: int) -> int:
    """Given that f < g pointwise from ``start`` on, find the minimal onset."""
    n = start
    while n > 0 and f(n - 1) < g(n - 1):
        n -= 1
    return n


def lt_eventually(f: GrowthFn, g: GrowthFn, horizon: int = DEFAULT_HORIZON) -> PrecVerdict:
    """Decide whether f(n) < g(n) for all large n.

    Eventually-affine kinds are decided exactly; the horizon only matters for
    the sampled fallback, which never claims a tail it cannot justify.
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    f_inf, g_inf = is_infinite(f), is_infinite(g)
    if f_inf:
        return PrecVerdict("false", witness=0, note="left side is identically infinite")
    if g_inf:
        return PrecVerdict("true", n0=0, note="finite values stay below infinity")
    lf, lg = linearize(f), linearize(g)
    if lf is not None and lg is not None:
        base = max(lf.n_from, lg.n_from, 1)
        if (lf.a, lf.c) < (lg.a, lg.c):
            if lf.a == lg.a:
                onset = base
            else:
                # a_f*n + c_f < a_g*n + c_g from n > (c_f - c_g)/(a_g - a_f)
                onset = max(base, (lf.c - lg.c) // (lg.a - lf.a) + 1)
            return PrecVerdict("true", n0=_minimal_onset(f, g, onset), note="eventually affine")
        if lf.a == lg.a:
            witness = base
        else:
            witness = max(base, (lg.c - lf.c) // (lf.a - lg.a) + 1)
        return PrecVerdict("false", witness=witness, note="eventually affine")
    # sampled fallback: report the window, never extrapolate
    n0 = None
    for n in range(horizon, -1, -1):
        if f(n) < g(n):
            n0 = n
        else:
            break
    if n0 is None:
        return PrecVerdict("false", witness=horizon, note=f"f >= g at the horizon {horizon}")
    return PrecVerdict("inconclusive", n0=n0,
                       note=f"f < g on [{n0}, {horizon}] but no symbolic tail")


@dataclass(frozen=True)
class PowerDomVerdict:
    """Outcome of 'every composition power of f stays eventually below g'."""

    outcome: str  # "true" | "false" | "true_up_to"
    k: int | None = None  # failing power for "false", depth checked otherwise
    note: str = ""


def ll(f: GrowthFn, g: GrowthFn, k_max: int, horizon: int = DEFAULT_HORIZON) -> PowerDomVerdict:
    """Check f^k < g eventually, for every k (symbolically) or up to k_max."""
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if is_infinite(f):
        return PowerDomVerdict("false", k=1, note="left side infinite")
    if is_infinite(g):
        return PowerDomVerdict("true", k=k_max, note="right side infinite")
    lf, lg = linearize(f), linearize(g)
    if lf is not None and lg is not None:
        if lf.a == 1:
            if lg.a >= 2:
                return PowerDomVerdict("true", k=k_max, note="slope 1 below slope >= 2")
            # f^k keeps slope 1 with offset k*c_f, so it passes c_g at the ceiling
            k_fail = max(1, -((-lg.c) // lf.c))
            return PowerDomVerdict("false", k=k_fail,
                                   note=f"offsets grow linearly in k, failing at k = {k_fail}")
        k = 1
        while True:
            if lt_eventually(Power(f, k), g, horizon).outcome != "true":
                return PowerDomVerdict("false", k=k, note="slope outgrows the right side")
            k += 1
    for k in range(1, k_max + 1):
        v = lt_eventually(Power(f, k), g, horizon)
        if v.outcome == "false":
            return PowerDomVerdict("false", k=k, note=v.note)
        if v.outcome == "inconclusive":
            return PowerDomVerdict("true_up_to", k=k - 1, note="sampled comparison went inconclusive")
    return PowerDomVerdict("true_up_to", k=k_max, note="no symbolic form available")


@dataclass(frozen=True)
class SimVerdict:
    """Outcome of the same-growth search: one k with f < g^k and g < f^k."""

    outcome: str  # "true" | "false" | "inconclusive"
    k: int | None = None
    note: str = ""


def sim(f: GrowthFn, g: GrowthFn, k_max: int, horizon: int = DEFAULT_HORIZON) -> SimVerdict:
    if k_max < 1:
        raise ValueError("k_max must be positive")
    f_inf, g_inf = is_infinite(f), is_infinite(g)
    if f_inf and g_inf:
        return SimVerdict("false", note="infinite functions never compare strictly")
    if f_inf or g_inf:
        return SimVerdict("false", note="one side is infinite, the other is not")
    for k in range(1, k_max + 1):
        left = lt_eventually(f, Power(g, k), horizon)
        right = lt_eventually(g, Power(f, k), horizon)
        if left.outcome == "true" and right.outcome == "true":
            return SimVerdict("true", k=k)
        if left.outcome == "inconclusive" or right.outcome == "inconclusive":
            return SimVerdict("inconclusive", k=k, note="sampled comparison went inconclusive")
    lf, lg = linearize(f), linearize(g)
    if lf is not None and lg is not None:
        # powers of a slope-1 form keep slope 1, so they can never pass a
        # slope >= 2 form; powers of a slope >= 2 form eventually pass anything
        if lf.a >= 2 and lg.a == 1:
            return SimVerdict("false", note=f"{g.spec()} never dominates slope {lf.a}")
        if lg.a >= 2 and lf.a == 1:
            return SimVerdict("false", note=f"{f.spec()} never dominates slope {lg.a}")
    return SimVerdict("inconclusive", k=k_max, note=f"no k <= {k_max} works")


# -- slowness -----------------------------------------------------------------

@dataclass(frozen=True)
class BlockCheck:
    """One block-end inequality 1 - j/g(j) < 1/stage at j = break - 1."""

    stage: int
    end: int
    gap: Fraction
    threshold: Fraction
    ok: bool


@dataclass(frozen=True)
class SlownessVerdict:
    verdict: str  # "slow" | "not_slow" | "inconclusive"
    evidence: str
    max_gap: Fraction | None = None
    window: tuple[int, int] | None = None
    blocks: tuple[BlockCheck, ...] | None = None


def is_slow(g: GrowthFn, horizon: int = DEFAULT_HORIZON) -> SlownessVerdict:
    """Slowness means n/g(n) -> 1.

    Affine and Linear are decided symbolically.  A BlockStep is judged by the
    construction inequality at each block end: 1 - j/g(j) < 1/(stage), with
    stages numbered 2, 3, ... in break order.  Everything else gets a numeric
    verdict over the tail half of the horizon, reported as inconclusive with
    the measured maximum of 1 - n/g(n).
    """
    if horizon < 1:
        raise ValueError("horizon must be positive")
    if isinstance(g, Affine):
        return SlownessVerdict("slow", f"n/(n+{g.c}) tends to 1")
    if isinstance(g, Linear):
        return SlownessVerdict("not_slow", f"n/({g.a}n) tends to 1/{g.a}")
    if isinstance(g, Infinity):
        return SlownessVerdict("not_slow", "n/infinity tends to 0")
    if isinstance(g, BlockStep):
        checks = []
        all_ok = True
        for k, b in enumerate(g.breaks):
            j = b - 1
            gj = g(j)
            gap = Fraction(gj - j, gj)  # = 1 - j/g(j)
            threshold = Fraction(1, k + 2)
            ok = gap < threshold
            all_ok = all_ok and ok
            checks.append(BlockCheck(k + 2, j, gap, threshold, ok))
        verdict = "slow" if all_ok else "not_slow"
        return SlownessVerdict(verdict, "block-end inequalities", blocks=tuple(checks))
    lo = max(1, horizon // 2)
    max_gap = Fraction(0)
    for n in range(lo, horizon + 1):
        gn = g(n)
        if gn == INF:
            return SlownessVerdict("not_slow", "infinite value in the sampled window")
        gap = Fraction(gn - n, gn)
        if gap > max_gap:
            max_gap = gap
    return SlownessVerdict("inconclusive", "numeric window only",
                           max_gap=max_gap, window=(lo, horizon))


# -- profiles -----------------------------------------------------------------

@dataclass(frozen=True)
class Exhausted:
    """The profile's defining set is empty up to n_max."""

    n_max: int
    note: str = ""


def max_m_with_value_at_most(g: GrowthFn, n: int) -> int | None:
    """Largest m with g(m) <= n (None if even g(0) > n).  Monotone bisection."""
    if g(0) > n:
        return None
    lo, hi = 0, n  # g(m) > m forces any solution below n
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if g(mid) <= n:
            lo = mid
        else:
            hi = mid - 1
    return lo


def growth_profile(g: GrowthFn, r, n_max: int) -> int | Exhausted:
    """Least n with some m satisfying g(m) <= n and (n - m)/n < 1/r."""
    r = Fraction(r)
    if r < 1:
        raise ValueError(f"r must be at least 1, got {r}")
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    if is_infinite(g):
        return Exhausted(n_max, note="g(m) <= n holds for no m: the defining set is empty")
    for n in range(1, n_max + 1):
        m = max_m_with_value_at_most(g, n)
        if m is None:
            continue
        if Fraction(n - m, n) < 1 / r:
            return n
    note = ""
    if isinstance(g, Linear) and Fraction(g.a - 1, g.a) >= 1 / r:
        note = (f"impossible for every n: g(m) <= n forces m <= n/{g.a}, "
                f"so (n - m)/n >= {Fraction(g.a - 1, g.a)} >= 1/r")
    return Exhausted(n_max, note=note)


def compare_pf(u: Mapping, v: Mapping, C, Cp, Cpp, sample_rs: Sequence) -> bool:
    """Check u(r) <= C * v(Cp * r) + Cpp at every sampled r, exactly.

    Both tables must cover every sampled argument, including the rescaled
    ones; a missing entry is an error, not a silent pass.
    """
    C, Cp, Cpp = Fraction(C), Fraction(Cp), Fraction(Cpp)
    u_tab = {Fraction(k): val for k, val in u.items()}
    v_tab = {Fraction(k): val for k, val in v.items()}
    for r in sample_rs:
        r = Fraction(r)
        if r not in u_tab:
            raise ValueError(f"sample r = {r} outside the left table")
        if Cp * r not in v_tab:
            raise ValueError(f"rescaled sample {Cp * r} outside the right table")
        if u_tab[r] > C * v_tab[Cp * r] + Cpp:
            return False
    return True
