"""Finitely generated abelian grading groups and graded presentations.

A :class:`GradedGroup` is ``Z^free_rank + Z/m_1 + ... + Z/m_t``.  Elements
are plain int tuples: free coordinates first, then torsion residues reduced
into ``[0, m_i)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import exactlin
from .errors import NotHomogeneous, ParseError
from .poly import Poly, parse_poly

Element = tuple[int, ...]


@dataclass(frozen=True)
class GradedGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if any(m < 2 for m in self.torsion):
            raise ValueError("torsion orders must be at least 2")

    @property
    def width(self) -> int:
        return self.free_rank + len(self.torsion)

    def element(self, free: Sequence[int] = (), torsion: Sequence[int] = ()) -> Element:
        free = tuple(int(x) for x in free)
        torsion = tuple(int(x) for x in torsion)
        if len(free) != self.free_rank or len(torsion) != len(self.torsion):
            raise ValueError(f"element {free};{torsion} does not fit {self}")
        return free + tuple(t % m for t, m in zip(torsion, self.torsion))

    def normalize(self, v: Sequence[int]) -> Element:
        v = tuple(int(x) for x in v)
        if len(v) != self.width:
            raise ValueError("element has the wrong length")
        f = self.free_rank
        return v[:f] + tuple(t % m for t, m in zip(v[f:], self.torsion))

    def zero(self) -> Element:
        return (0,) * self.width

    def add(self, a: Element, b: Element) -> Element:
        return self.normalize([x + y for x, y in zip(a, b)])

    def neg(self, a: Element) -> Element:
        return self.normalize([-x for x in a])

    def sub(self, a: Element, b: Element) -> Element:
        return self.normalize([x - y for x, y in zip(a, b)])

    def scale(self, a: Element, k: int) -> Element:
        return self.normalize([k * x for x in a])

    def combination(self, coeffs: Sequence[int], elements: Sequence[Element]) -> Element:
        out = [0] * self.width
        for c, e in zip(coeffs, elements):
            if c:
                for t in range(self.width):
                    out[t] += c * e[t]
        return self.normalize(out)

    def is_zero(self, a: Element) -> bool:
        return not any(self.normalize(a))

    def order(self, a: Element) -> int:
        """Order of ``a``; 0 means infinite."""
        a = self.normalize(a)
        if any(a[: self.free_rank]):
            return 0
        k = 1
        while not self.is_zero(self.scale(a, k)):
            k += 1
        return k

    def __str__(self):
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{m}" for m in self.torsion]
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class CokernelMap:
    """The quotient ``Z^n -> Z^n / image(R)`` realised by stored unimodular data.

    ``free_rows`` is in row Hermite form, so free coordinates of generator
    images read off a canonical basis; ``torsion_rows`` give residues modulo
    the matching ``group.torsion`` orders.
    """

    group: GradedGroup
    free_rows: tuple[tuple[int, ...], ...]
    torsion_rows: tuple[tuple[int, ...], ...]

    def __call__(self, x: Sequence[int]) -> Element:
        free = [sum(a * b for a, b in zip(r, x)) for r in self.free_rows]
        tors = [sum(a * b for a, b in zip(r, x)) for r in self.torsion_rows]
        return self.group.element(free, tors)


def cokernel(relations: exactlin.IntMatrix) -> CokernelMap:
    """Presentation of ``Z^rows / relations * Z^cols``."""
    n = relations.rows
    snf = exactlin.smith_normal_form(relations)
    divs = list(snf.elementary_divisors) + [0] * max(0, n - len(snf.elementary_divisors))
    U = snf.U.to_rows()
    torsion, torsion_rows, free_idx = [], [], []
    for i in range(n):
        d = divs[i] if i < len(divs) else 0
        if d == 0:
            free_idx.append(i)
        elif d >= 2:
            torsion.append(d)
            torsion_rows.append(tuple(x % d for x in U[i]))
    free = [U[i] for i in free_idx]
    if free:
        H, _ = exactlin.hermite_rows(free)
        free = H
    return CokernelMap(
        GradedGroup(len(free_idx), tuple(torsion)),
        tuple(tuple(r) for r in free),
        tuple(torsion_rows),
    )


@dataclass(frozen=True)
class GradedPresentation:
    """Polynomial ring with graded variables modulo at most one relation."""

    group: GradedGroup
    names: tuple[str, ...]
    degrees: tuple[Element, ...]
    relation: Poly | None = None
    notes: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("variable names must be distinct")
        if self.relation is not None and self.relation.nvars != len(self.names):
            raise ValueError("relation has the wrong number of variables")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def has_relation(self) -> bool:
        return self.relation is not None and not self.relation.is_zero()

    def monomial_degree(self, exp: Sequence[int]) -> Element:
        return self.group.combination(exp, self.degrees)

    def relation_degree(self) -> Element:
        if not self.has_relation():
            raise NotHomogeneous("no relation")
        degs = {self.monomial_degree(e) for e in self.relation.terms}
        if len(degs) != 1:
            raise NotHomogeneous("relation is not homogeneous")
        return degs.pop()

    def with_relation(self, relation: Poly | None) -> GradedPresentation:
        return GradedPresentation(self.group, self.names, self.degrees, relation, self.notes)


def _parse_group(line: str, lineno: int) -> GradedGroup:
    body = line.split(":", 1)[1]
    free = 0
    torsion: list[int] = []
    for tok in body.split():
        if "=" not in tok:
            raise ParseError(f"expected key=value in group line, got {tok!r}", lineno)
        key, val = tok.split("=", 1)
        try:
            if key == "free":
                free = int(val)
            elif key == "torsion":
                torsion = [int(x) for x in val.split(",") if x]
            else:
                raise ParseError(f"unknown group key {key!r}", lineno)
        except ValueError:
            raise ParseError(f"bad integer in {tok!r}", lineno) from None
    try:
        return GradedGroup(free, tuple(torsion))
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def parse_presentation(text: str) -> GradedPresentation:
    """Read the presentation file format.

    ::

        group: free=1 torsion=2
        var x deg = 1 ; 0
        var y deg = 1 ; 1
        relation: x^2 - y^2
    """
    group = None
    names: list[str] = []
    degrees: list[Element] = []
    relation_text = None
    want_relation = False
    relation_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if want_relation:
            relation_text, relation_line, want_relation = line, lineno, False
            continue
        low = line.lower()
        if low.startswith("group:"):
            group = _parse_group(line, lineno)
        elif low.startswith("var "):
            if group is None:
                raise ParseError("'group:' must come before variables", lineno)
            head, _, deg = line[4:].partition("deg")
            name = head.strip()
            if not name or not deg.strip().startswith("="):
                raise ParseError("expected 'var NAME deg = v1 ... ; t1,...'", lineno)
            free_txt, _, tors_txt = deg.strip()[1:].partition(";")
            try:
                free = [int(x) for x in free_txt.split()]
                tors = [int(x) for x in tors_txt.replace(",", " ").split()]
                degrees.append(group.element(free, tors))
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
            names.append(name)
        elif low.startswith("relation:"):
            rest = line.split(":", 1)[1].strip()
            if rest:
                relation_text, relation_line = rest, lineno
            else:
                want_relation = True
        else:
            raise ParseError(f"unexpected line {line!r}", lineno)
    if group is None:
        raise ParseError("missing 'group:' line")
    relation = None
    if relation_text is not None:
        try:
            relation = parse_poly(relation_text, names)
        except ValueError as exc:
            raise ParseError(str(exc), relation_line) from None
    return GradedPresentation(group, tuple(names), tuple(degrees), relation)


def format_presentation(p: GradedPresentation) -> str:
    lines = [f"group: free={p.group.free_rank} torsion={','.join(str(m) for m in p.group.torsion)}"]
    f = p.group.free_rank
    for name, d in zip(p.names, p.degrees):
        free = " ".join(str(x) for x in d[:f])
        tors = ",".join(str(x) for x in d[f:])
        lines.append(f"var {name} deg = {free} ; {tors}".rstrip(" ;") if not tors else f"var {name} deg = {free} ; {tors}")
    lines.append("relation: " + (p.relation.format(p.names) if p.has_relation() else ""))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def as_fraction_vector(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)
