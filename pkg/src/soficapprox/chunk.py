"""Finite chunks: subsets of a group with the induced partial multiplication.

A chunk stores an ordered element list, a distinguished unit, and a partial
table; absent entries mean the product falls outside the chunk.  Validation
checks only conditions every group trace must satisfy (unit laws,
cancellation, partial associativity); passing them does not certify abstract
embeddability into a group.

Text format, one statement per line (``#`` starts a comment)::

    unit 1
    elem a
    a * a = 1
    a * b = undef

Unspecified products default to undef.  ``unit``/``elem`` lines declare
elements in order of first appearance; printing is canonical and round-trips
bit-exactly through the parser.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .permcore import Perm, compose, identity

_RESERVED = {"unit", "elem", "undef", "*", "=", "#"}


class ChunkParseError(ValueError):
    """Malformed chunk/gchunk text; carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


@dataclass(frozen=True)
class Chunk:
    """Finite partial group: ordered elements, unit, partial product table."""

    elements: tuple[str, ...]
    unit: str
    table: dict[tuple[str, str], str]

    def __post_init__(self) -> None:
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate elements")
        for e in self.elements:
            if not e or e in _RESERVED or any(ch.isspace() for ch in e):
                raise ValueError(f"bad element identifier {e!r}")
        if self.unit not in self.elements:
            raise ValueError(f"unit {self.unit!r} not among elements")
        members = set(self.elements)
        for (a, b), c in self.table.items():
            if a not in members or b not in members or c not in members:
                raise ValueError(f"table entry {a} * {b} = {c} mentions unknown element")

    def product(self, a: str, b: str) -> str | None:
        return self.table.get((a, b))

    def __repr__(self) -> str:
        return f"Chunk({list(self.elements)}, unit={self.unit!r}, {len(self.table)} products)"


@dataclass(frozen=True)
class ValidationReport:
    """Every violated unit law, cancellation failure, and associativity failure."""

    unit_violations: tuple[str, ...] = ()
    cancellation_violations: tuple[str, ...] = ()
    associativity_violations: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not (self.unit_violations or self.cancellation_violations
                    or self.associativity_violations)

    def all_violations(self) -> tuple[str, ...]:
        return self.unit_violations + self.cancellation_violations + self.associativity_violations


def validate(c: Chunk) -> ValidationReport:
    """Check unit laws, two-sided cancellation, and partial associativity.

    Violations are data, not errors; an empty report means all three families
    of conditions hold.
    """
    unit_bad = []
    u = c.unit
    for x in c.elements:
        if c.product(u, x) != x:
            got = c.product(u, x)
            unit_bad.append(f"{u} * {x} = {got if got is not None else 'undef'} (expected {x})")
        if c.product(x, u) != x:
            got = c.product(x, u)
            unit_bad.append(f"{x} * {u} = {got if got is not None else 'undef'} (expected {x})")

    cancel_bad = []
    for a in c.elements:
        seen: dict[str, str] = {}
        for b in c.elements:
            v = c.product(a, b)
            if v is None:
                continue
            if v in seen and seen[v] != b:
                cancel_bad.append(f"left cancellation: {a} * {seen[v]} = {a} * {b} = {v}")
            seen.setdefault(v, b)
    for b in c.elements:
        seen = {}
        for a in c.elements:
            v = c.product(a, b)
            if v is None:
                continue
            if v in seen and seen[v] != a:
                cancel_bad.append(f"right cancellation: {seen[v]} * {b} = {a} * {b} = {v}")
            seen.setdefault(v, a)

    assoc_bad = []
    for a in c.elements:
        for b in c.elements:
            ab = c.product(a, b)
            if ab is None:
                continue
            for d in c.elements:
                bd = c.product(b, d)
                if bd is None:
                    continue
                left = c.product(ab, d)
                right = c.product(a, bd)
                if left is not None and right is not None and left != right:
                    assoc_bad.append(
                        f"({a} * {b}) * {d} = {left} but {a} * ({b} * {d}) = {right}")

    return ValidationReport(tuple(unit_bad), tuple(cancel_bad), tuple(assoc_bad))


def induced_chunk(elems: Sequence[str], unit: str,
                  mult_oracle: Callable[[str, str], str]) -> Chunk:
    """Chunk of an ambient multiplication: keep a*b exactly when it lands in elems."""
    if unit not in elems:
        raise ValueError(f"unit {unit!r} not in element list")
    members = set(elems)
    table = {}
    for a in elems:
        for b in elems:
            v = mult_oracle(a, b)
            if v in members:
                table[(a, b)] = v
    return Chunk(tuple(elems), unit, table)


@dataclass(frozen=True)
class ChunkMap:
    """Total assignment from a source chunk's elements into some target."""

    source: Chunk
    images: dict[str, object]

    def __post_init__(self) -> None:
        missing = [e for e in self.source.elements if e not in self.images]
        if missing:
            raise ValueError(f"map not total, missing {missing}")


def is_homomorphism(m: ChunkMap, target_mult: Callable[[object, object], object],
                    target_unit: object | None = None) -> bool:
    """True iff m preserves the unit and every defined product of the source.

    ``target_unit`` may be omitted when the images are ``Perm`` values, in
    which case the identity permutation of the right degree is assumed.
    """
    c = m.source
    fu = m.images[c.unit]
    if target_unit is None:
        if isinstance(fu, Perm):
            target_unit = identity(fu.degree)
        else:
            raise ValueError("target_unit required for non-permutation targets")
    if fu != target_unit:
        return False
    for (a, b), ab in c.table.items():
        if target_mult(m.images[a], m.images[b]) != m.images[ab]:
            return False
    return True


def perm_images_homomorphism(m: ChunkMap) -> bool:
    """is_homomorphism specialized to S_n targets."""
    return is_homomorphism(m, lambda p, q: compose(p, q))


def compose_maps(outer: ChunkMap, inner: ChunkMap) -> ChunkMap:
    """(outer o inner), defined when inner's images are elements of outer's source."""
    images = {e: outer.images[inner.images[e]] for e in inner.source.elements}
    return ChunkMap(inner.source, images)


def chunk_mult(c: Chunk) -> Callable[[str, str], str | None]:
    """The chunk's own partial multiplication, None where undefined."""
    return lambda a, b: c.product(a, b)


# -- text format ------------------------------------------------------------

def format_chunk(c: Chunk) -> str:
    """Canonical text: element declarations in order, then products row-major."""
    lines = []
    for e in c.elements:
        lines.append(f"unit {e}" if e == c.unit else f"elem {e}")
    for a in c.elements:
        for b in c.elements:
            v = c.product(a, b)
            if v is not None:
                lines.append(f"{a} * {b} = {v}")
    return "\n".join(lines) + "\n"


def parse_chunk(text: str) -> Chunk:
    elements: list[str] = []
    members: set[str] = set()
    unit: str | None = None
    table: dict[tuple[str, str], str] = {}
    explicit_undef: set[tuple[str, str]] = set()

    def declare(name: str, lineno: int) -> None:
        if not name or name in _RESERVED or any(ch.isspace() for ch in name):
            raise ChunkParseError(lineno, f"bad element identifier {name!r}")
        if name not in members:
            members.add(name)
            elements.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if toks[0] == "unit":
            if len(toks) != 2:
                raise ChunkParseError(lineno, "expected: unit NAME")
            if unit is not None:
                raise ChunkParseError(lineno, f"unit already declared as {unit!r}")
            declare(toks[1], lineno)
            unit = toks[1]
        elif toks[0] == "elem":
            if len(toks) != 2:
                raise ChunkParseError(lineno, "expected: elem NAME")
            declare(toks[1], lineno)
        elif len(toks) == 5 and toks[1] == "*" and toks[3] == "=":
            a, b, v = toks[0], toks[2], toks[4]
            for name in (a, b) + ((v,) if v != "undef" else ()):
                if name not in members:
                    raise ChunkParseError(lineno, f"undeclared element {name!r}")
            key = (a, b)
            if key in table or key in explicit_undef:
                raise ChunkParseError(lineno, f"product {a} * {b} defined twice")
            if v == "undef":
                explicit_undef.add(key)
            else:
                table[key] = v
        else:
            raise ChunkParseError(lineno, f"cannot parse statement {line!r}")

    if unit is None:
        raise ChunkParseError(len(text.splitlines()) or 1, "no unit declared")
    return Chunk(tuple(elements), unit, table)


def parse_chunk_file(path: str) -> Chunk:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_chunk(fh.read())


def write_chunk_file(path: str, c: Chunk) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_chunk(c))
