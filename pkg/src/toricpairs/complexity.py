"""Complexity of log pairs from abstract class data.

A pair is described only by its dimension, the free rank of its class group
and, for each boundary component, a class vector and a coefficient.  Toric
pairs can be converted with :func:`pair_from_fan`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from . import exactlin, kernels
from .errors import DecompositionExceedsBoundary, InvalidPair, ParseError, TooManyComponents

MAX_COMPONENTS = 12
PARTITION_LABEL = "partition-family minimum"


@dataclass(frozen=True)
class Component:
    cls: tuple[Fraction, ...]
    coeff: Fraction
    name: str = ""


@dataclass(frozen=True)
class AbstractPairData:
    n: int
    group_rank: int
    components: tuple[Component, ...] = ()
    permissive: bool = False

    def __post_init__(self):
        if self.n < 0 or self.group_rank < 0:
            raise InvalidPair("dimension and rank must be nonnegative")
        for k, comp in enumerate(self.components):
            if len(comp.cls) != self.group_rank:
                raise InvalidPair(f"component {k} has a class of length {len(comp.cls)}, expected {self.group_rank}")
            if comp.coeff <= 0:
                raise InvalidPair(f"component {k} has nonpositive coefficient {comp.coeff}")
            if comp.coeff > 1 and not self.permissive:
                raise InvalidPair(
                    f"component {k} has coefficient {comp.coeff} > 1; pass permissive=True to allow it"
                )

    @classmethod
    def build(cls, n: int, rank: int, items, permissive: bool = False) -> AbstractPairData:
        """``items`` are ``(class_vector, coeff)`` or ``(class_vector, coeff, name)``."""
        comps = []
        for k, it in enumerate(items):
            name = it[2] if len(it) > 2 else f"C{k}"
            comps.append(Component(tuple(Fraction(x) for x in it[0]), Fraction(it[1]), name))
        return cls(int(n), int(rank), tuple(comps), permissive)

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(c.coeff for c in self.components)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)


@dataclass(frozen=True)
class Decomposition:
    """Parts ``(a_i, S_i)``; ``S_i`` is a multiplicity vector over the components."""

    parts: tuple[tuple[Fraction, tuple[int, ...]], ...]

    @classmethod
    def of(cls, parts) -> Decomposition:
        return cls(tuple((Fraction(a), tuple(int(x) for x in S)) for a, S in parts))

    @classmethod
    def singletons(cls, pair: AbstractPairData) -> Decomposition:
        k = len(pair.components)
        return cls(tuple((c.coeff, tuple(int(i == j) for j in range(k))) for i, c in enumerate(pair.components)))

    @classmethod
    def from_partition(cls, pair: AbstractPairData, rgs: Sequence[int]) -> Decomposition:
        k = len(pair.components)
        parts = []
        for b in range(max(rgs) + 1 if rgs else 0):
            block = [j for j in range(k) if rgs[j] == b]
            a = min(pair.components[j].coeff for j in block)
            parts.append((a, tuple(int(rgs[j] == b) for j in range(k))))
        return cls(tuple(parts))

    def describe(self, names: Sequence[str]) -> str:
        out = []
        for a, S in self.parts:
            terms = [(f"{m}*" if m != 1 else "") + names[j] for j, m in enumerate(S) if m]
            out.append(f"{a}*({' + '.join(terms) or '0'})")
        return " + ".join(out) or "0"


@dataclass(frozen=True)
class ComplexityReport:
    n: int
    r: int
    d: Fraction
    c: Fraction
    witness: Decomposition
    label: str = "decomposition"

    @property
    def floor_2c(self) -> int:
        return floor(2 * self.c)


def decomposition_complexity(pair: AbstractPairData, dec: Decomposition) -> ComplexityReport:
    k = len(pair.components)
    used = [Fraction(0)] * k
    for a, S in dec.parts:
        if len(S) != k:
            raise InvalidPair(f"part has {len(S)} multiplicities, pair has {k} components")
        if a < 0 or any(m < 0 for m in S):
            raise InvalidPair("decomposition parts must be nonnegative")
        for j, m in enumerate(S):
            used[j] += a * m
    for j in range(k):
        if used[j] > pair.components[j].coeff:
            raise DecompositionExceedsBoundary(
                f"component {pair.components[j].name or j}: {used[j]} > {pair.components[j].coeff}"
            )
    classes = []
    for _, S in dec.parts:
        v = [Fraction(0)] * pair.group_rank
        for j, m in enumerate(S):
            if m:
                for t in range(pair.group_rank):
                    v[t] += m * pair.components[j].cls[t]
        classes.append(v)
    r = exactlin.rank_rational(classes) if classes and pair.group_rank else 0
    d = sum((a for a, _ in dec.parts), Fraction(0))
    return ComplexityReport(pair.n, r, d, pair.n + r - d, dec)


def min_complexity(pair: AbstractPairData) -> ComplexityReport:
    """Minimum over set partitions of the components (``a_i`` = smallest coefficient in a block)."""
    k = len(pair.components)
    if k > MAX_COMPONENTS:
        raise TooManyComponents(f"{k} components; the exhaustive search stops at {MAX_COMPONENTS}")
    if k == 0:
        rep = decomposition_complexity(pair, Decomposition(()))
        return ComplexityReport(rep.n, rep.r, rep.d, rep.c, rep.witness, PARTITION_LABEL)
    L = exactlin.lcm_denominator(x for c in pair.components for x in c.cls)
    classes = [[int(x * L) for x in c.cls] or [0] for c in pair.components]
    unit = exactlin.lcm_denominator(pair.coefficients)
    weights = [int(a * unit) for a in pair.coefficients]
    rgs, _ = kernels.min_partition(classes, weights, unit)
    rep = decomposition_complexity(pair, Decomposition.from_partition(pair, rgs))
    return ComplexityReport(rep.n, rep.r, rep.d, rep.c, rep.witness, PARTITION_LABEL)


def absolute_complexity(pair: AbstractPairData) -> Fraction:
    return pair.n + pair.group_rank - sum(pair.coefficients, Fraction(0))


def boundary_bracket(pair: AbstractPairData) -> tuple[int, ...]:
    half = Fraction(1, 2)
    return tuple(i for i, a in enumerate(pair.coefficients) if a > half)


def local_complexity(n: int, coefficients: Sequence) -> Fraction:
    cs = [Fraction(a) for a in coefficients]
    if any(a < 0 for a in cs):
        raise InvalidPair("local complexity needs nonnegative coefficients")
    return n - sum(cs, Fraction(0))


# Toric pairs


def pair_from_fan(f, delta, permissive: bool = False) -> tuple[AbstractPairData, tuple[int, ...]]:
    """Abstract data of ``(X_f, delta)``; also returns the ray index of each component."""
    from .toric import InvariantDivisor, class_group

    if not isinstance(delta, InvariantDivisor):
        delta = InvariantDivisor.of(delta)
    cg = class_group(f)
    items, rays = [], []
    for i, a in enumerate(delta.coefficients):
        if a == 0:
            continue
        e = [int(i == j) for j in range(f.nrays)]
        free = cg.degree_map(e)[: cg.free_rank]
        items.append((free, a, f"D{i}"))
        rays.append(i)
    return AbstractPairData.build(f.dim, cg.free_rank, items, permissive), tuple(rays)


@dataclass(frozen=True)
class TheoremVerdict:
    status: str  # "pass", "fail" or "hypothesis-failed"
    hypothesis: str = ""
    report: ComplexityReport | None = None
    missing: tuple[int, ...] = ()
    bracket: tuple[int, ...] = ()
    bracket_covered: bool = True
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def toric_theorem_check(f, delta) -> TheoremVerdict:
    """Check the toric characterisation on an invariant pair.

    ``D`` is the sum of all invariant divisors.  A ray counts as missing
    when its divisor is not one of the ``S_i`` of the minimising witness.
    """
    from .fan import is_complete, is_simplicial
    from .toric import InvariantDivisor, canonical_divisor, is_nef, lc_check_invariant

    if not isinstance(delta, InvariantDivisor):
        delta = InvariantDivisor.of(delta)
    if not is_simplicial(f):
        return TheoremVerdict("hypothesis-failed", "fan is not simplicial")
    if not is_complete(f):
        return TheoremVerdict("hypothesis-failed", "fan is not complete")
    if any(a < 0 for a in delta.coefficients):
        return TheoremVerdict("hypothesis-failed", "boundary has negative coefficients")
    if not lc_check_invariant(f, delta):
        return TheoremVerdict("hypothesis-failed", "pair is not log canonical")
    if not is_nef(f, -(canonical_divisor(f) + delta)):
        return TheoremVerdict("hypothesis-failed", "-(K+Delta) is not nef")
    pair, rays = pair_from_fan(f, delta)
    rep = min_complexity(pair)
    if rep.c >= 1:
        return TheoremVerdict("hypothesis-failed", "complexity >= 1", rep)
    singles = set()
    for _, S in rep.witness.parts:
        if sum(S) == 1:
            singles.add(rays[S.index(1)])
    missing = tuple(i for i in range(f.nrays) if i not in singles)
    bracket = tuple(rays[k] for k in boundary_bracket(pair))
    # D contains every invariant divisor, so D >= [[Delta]] holds for invariant boundaries
    covered = all(0 <= i < f.nrays for i in bracket)
    ok = covered and len(missing) <= rep.floor_2c
    return TheoremVerdict(
        "pass" if ok else "fail",
        "",
        rep,
        missing,
        bracket,
        covered,
        {"missing_count": len(missing), "allowed": rep.floor_2c},
    )


# Pair files


def parse_pair_file(text: str, permissive: bool = False) -> AbstractPairData:
    """Read ``n:``, ``rho:``, then ``components:`` lines ``class = ... ; coeff = p/q ; name = s``."""
    n = rho = None
    items = []
    in_components = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        low = line.lower()
        if low.startswith("n:") or low.startswith("rho:") or low.startswith("permissive:"):
            key, val = (s.strip() for s in line.split(":", 1))
            key = key.lower()
            if key == "permissive":
                permissive = permissive or val.lower() in ("1", "yes", "true")
                continue
            try:
                num = int(val)
            except ValueError:
                raise ParseError(f"{key} must be an integer", lineno) from None
            if key == "n":
                n = num
            else:
                rho = num
            in_components = False
            continue
        if low == "components:":
            in_components = True
            continue
        if not in_components:
            raise ParseError(f"unexpected line {line!r}", lineno)
        fields = {}
        for chunk in line.split(";"):
            if "=" not in chunk:
                raise ParseError(f"expected key = value, got {chunk.strip()!r}", lineno)
            key, val = (s.strip() for s in chunk.split("=", 1))
            fields[key.lower()] = val
        if "class" not in fields or "coeff" not in fields:
            raise ParseError("component needs 'class' and 'coeff'", lineno)
        try:
            cls_vec = [Fraction(x) for x in fields["class"].split()]
            coeff = Fraction(fields["coeff"])
        except (ValueError, ZeroDivisionError):
            raise ParseError("bad rational in component", lineno) from None
        if rho is not None and len(cls_vec) != rho:
            raise ParseError(f"class has {len(cls_vec)} entries, rho is {rho}", lineno)
        items.append((cls_vec, coeff, fields.get("name", f"C{len(items)}")))
    if n is None or rho is None:
        raise ParseError("pair file needs 'n:' and 'rho:'")
    return AbstractPairData.build(n, rho, items, permissive)


def format_pair(pair: AbstractPairData) -> str:
    lines = [f"n: {pair.n}", f"rho: {pair.group_rank}"]
    if pair.permissive:
        lines.append("permissive: yes")
    lines.append("components:")
    for c in pair.components:
        lines.append(f"class = {' '.join(str(x) for x in c.cls)} ; coeff = {c.coeff} ; name = {c.name}")
    return "\n".join(lines) + "\n"


def read_pair(path, permissive: bool = False) -> AbstractPairData:
    with open(path, encoding="utf-8") as fh:
        return parse_pair_file(fh.read(), permissive)
