"""Divisors on toric varieties: class group, support functions, positivity,
log discrepancies, lifting sections from invariant subvarieties, Cox rings.

Sign convention: a Q-Cartier invariant divisor ``D = sum b_i D_i`` has, on
each maximal cone ``sigma``, a covector ``m_sigma`` with
``<m_sigma, u_i> = -b_i`` for the rays of ``sigma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import exactlin
from .errors import (
    ConeNotInFan,
    InputError,
    NonIntegral,
    NoAmpleAvoidingW,
    NotComplete,
    NotQCartier,
    NotSimplicial,
    OutsideSupport,
    ParseError,
    PostconditionFailed,
    RaysDoNotSpan,
)
from .fan import Cone, Fan, StarQuotient, is_complete, is_simplicial, is_smooth, star_quotient_data
from .grading import CokernelMap, Element, GradedGroup, GradedPresentation, cokernel

Covector = tuple[Fraction, ...]


@dataclass(frozen=True)
class ClassGroup:
    """``Cl(X) = Z^rays / M``; ``degree_map`` sends a ray-coefficient vector to its class."""

    degree_map: CokernelMap

    @property
    def group(self) -> GradedGroup:
        return self.degree_map.group

    @property
    def free_rank(self) -> int:
        return self.group.free_rank

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.group.torsion

    def __str__(self):
        return str(self.group)


@dataclass(frozen=True)
class InvariantDivisor:
    coefficients: tuple[Fraction, ...]

    @classmethod
    def of(cls, coeffs: Sequence) -> InvariantDivisor:
        return cls(tuple(Fraction(c) for c in coeffs))

    def __len__(self):
        return len(self.coefficients)

    def __getitem__(self, i):
        return self.coefficients[i]

    def __add__(self, other: InvariantDivisor) -> InvariantDivisor:
        return InvariantDivisor(tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> InvariantDivisor:
        return InvariantDivisor(tuple(-a for a in self.coefficients))

    def __sub__(self, other: InvariantDivisor) -> InvariantDivisor:
        return self + (-other)

    def scale(self, k) -> InvariantDivisor:
        return InvariantDivisor(tuple(Fraction(k) * a for a in self.coefficients))

    def is_effective(self) -> bool:
        return all(a >= 0 for a in self.coefficients)

    def __str__(self):
        return " ".join(str(a) for a in self.coefficients)


@dataclass(frozen=True)
class SupportFunction:
    """One covector per maximal cone; evaluation ``f(v) = <m_sigma, v>`` on ``sigma``."""

    fan: Fan
    covectors: dict  # Cone -> Covector

    def on(self, cone: Cone) -> Covector:
        return self.covectors[cone]

    def __call__(self, v: Sequence[int]) -> Fraction:
        cone, _ = locate(self.fan, v)
        m = self.covectors[_max_cone_over(self.fan, cone)]
        return sum((a * b for a, b in zip(m, v)), Fraction(0))


def _check_rays(f: Fan, D: InvariantDivisor):
    if len(D) != f.nrays:
        raise InputError(f"divisor has {len(D)} coefficients, fan has {f.nrays} rays")


def class_group(f: Fan) -> ClassGroup:
    R = f.ray_matrix()
    if exactlin.rank(R) < f.dim:
        raise RaysDoNotSpan("rays do not span N_Q")
    return ClassGroup(cokernel(R))


def divisor_class(f: Fan, cg: ClassGroup, D) -> Element:
    if not isinstance(D, InvariantDivisor):
        D = InvariantDivisor.of(D)
    _check_rays(f, D)
    if any(c.denominator != 1 for c in D.coefficients):
        raise NonIntegral("divisor class needs integer coefficients")
    return cg.degree_map([int(c) for c in D.coefficients])


def principal_divisor(f: Fan, m: Sequence[int]) -> InvariantDivisor:
    """``div(chi^m)``, with coefficient ``<m, u_i>`` on ray ``i``."""
    return InvariantDivisor.of([sum(a * b for a, b in zip(m, u)) for u in f.rays])


def support_function(f: Fan, D) -> SupportFunction | NotQCartier:
    """Exact per-cone solve.  Failure is returned, not raised."""
    if not isinstance(D, InvariantDivisor):
        D = InvariantDivisor.of(D)
    _check_rays(f, D)
    cov = {}
    for c in f.max_cones:
        if not c:
            cov[c] = (Fraction(0),) * f.dim
            continue
        m = exactlin.solve_rational(f.cone_rays(c), [-D[i] for i in c])
        if m is None:
            return NotQCartier(f"no covector on cone {c}")
        cov[c] = m
    # shared faces: each covector already matches -b_i on its own rays, so
    # the agreement is checked on the common rays directly
    cones = list(f.max_cones)
    for x in range(len(cones)):
        for y in range(x + 1, len(cones)):
            for i in set(cones[x]) & set(cones[y]):
                u = f.rays[i]
                if _pair(cov[cones[x]], u) != _pair(cov[cones[y]], u):
                    return NotQCartier(f"covectors disagree on ray {i}")
    return SupportFunction(f, cov)


def _pair(m, u) -> Fraction:
    return sum((a * b for a, b in zip(m, u)), Fraction(0))


def _require_sf(f: Fan, D) -> tuple[InvariantDivisor, SupportFunction]:
    if not isinstance(D, InvariantDivisor):
        D = InvariantDivisor.of(D)
    if not is_complete(f):
        raise NotComplete("positivity tests need a complete fan")
    sf = support_function(f, D)
    if isinstance(sf, NotQCartier):
        raise sf
    return D, sf


def convexity_slacks(f: Fan, D) -> dict:
    """``(cone, j) -> <m_cone, u_j> + b_j`` for rays ``j`` outside each maximal cone."""
    D, sf = _require_sf(f, D)
    out = {}
    for c in f.max_cones:
        m = sf.on(c)
        for j in range(f.nrays):
            if j not in c:
                out[(c, j)] = _pair(m, f.rays[j]) + D[j]
    return out


def is_nef(f: Fan, D) -> bool:
    return all(s >= 0 for s in convexity_slacks(f, D).values())


def is_ample(f: Fan, D) -> bool:
    D, sf = _require_sf(f, D)
    if not all(s > 0 for s in convexity_slacks(f, D).values()):
        return False
    ms = [sf.on(c) for c in f.max_cones]
    return len(set(ms)) == len(ms)


def canonical_divisor(f: Fan) -> InvariantDivisor:
    return InvariantDivisor.of([-1] * f.nrays)


def toric_boundary(f: Fan) -> InvariantDivisor:
    return InvariantDivisor.of([1] * f.nrays)


def locate(f: Fan, v: Sequence[int]) -> tuple[Cone, tuple[Fraction, ...]]:
    """Smallest cone containing ``v`` and the (nonnegative) coordinates of ``v`` on its rays.

    Requires a simplicial fan.
    """
    v = [int(x) for x in v]
    if len(v) != f.dim:
        raise ValueError("point has the wrong dimension")
    if not any(v):
        return (), ()
    for c in f.max_cones:
        if not c:
            continue
        coords = exactlin.solve_rational([list(col) for col in zip(*f.cone_rays(c))], v)
        if coords is None or any(x < 0 for x in coords):
            continue
        face = tuple(i for i, x in zip(c, coords) if x != 0)
        return face, tuple(x for x in coords if x != 0)
    raise OutsideSupport(f"{tuple(v)} is not in the support of the fan")


def _max_cone_over(f: Fan, face: Cone) -> Cone:
    for c in f.max_cones:
        if set(face) <= set(c):
            return c
    raise ConeNotInFan(f"{face} is not a face of a maximal cone")


def log_discrepancy(f: Fan, delta, v: Sequence[int]) -> Fraction:
    if not isinstance(delta, InvariantDivisor):
        delta = InvariantDivisor.of(delta)
    _check_rays(f, delta)
    if not is_simplicial(f):
        raise NotSimplicial("log discrepancies are computed on simplicial fans")
    cone, coords = locate(f, v)
    return sum((c * (1 - delta[i]) for i, c in zip(cone, coords)), Fraction(0))


def lc_check_invariant(f: Fan, delta) -> bool:
    if not isinstance(delta, InvariantDivisor):
        delta = InvariantDivisor.of(delta)
    _check_rays(f, delta)
    if not is_simplicial(f):
        raise NotSimplicial("log canonical test needs a simplicial fan")
    return all(a <= 1 for a in delta.coefficients)


def cox_presentation(f: Fan) -> GradedPresentation:
    cg = class_group(f)
    n = f.nrays
    degrees = tuple(cg.degree_map([int(i == j) for j in range(n)]) for i in range(n))
    return GradedPresentation(cg.group, tuple(f"x{i}" for i in range(n)), degrees, None)


# Lifting sections from an invariant subvariety.


@dataclass(frozen=True)
class Lift:
    B: InvariantDivisor
    A: InvariantDivisor
    quotient: StarQuotient
    w_cone: Cone  # cone of the quotient fan whose orbit closure is W
    very_ample_factor: int


def _ample_on(q: Fan) -> tuple[list[Fraction], dict]:
    """A strictly convex support function for a complete simplicial fan, by exact LP.

    On a simplicial maximal cone the covector is fixed by the ray values,
    ``m_sigma = -sum_i a_i m_i`` over the dual basis, so the unknowns are just
    the ``a`` (one per ray), normalised to vanish on the first maximal cone.
    Returns ``(a, {cone: m})`` or raises NoAmpleAvoidingW.
    """
    n, k = q.dim, q.nrays
    cones = list(q.max_cones)
    duals = {}
    for c in cones:
        rows = [list(q.rays[i]) for i in c]
        duals[c] = [exactlin.solve_rational(rows, [int(t == s) for s in range(n)]) for t in range(n)]
    A_ub, b_ub = [], []
    for c in cones:
        for j in range(k):
            if j in c:
                continue
            # <m_sigma, u_j> + a_j >= 1 with m_sigma = -sum_i a_i m_i
            row = [Fraction(0)] * k
            row[j] -= 1
            for t, i in enumerate(c):
                row[i] += sum(x * y for x, y in zip(duals[c][t], q.rays[j]))
            A_ub.append(row)
            b_ub.append(-1)
    A_eq = [[int(j == i) for j in range(k)] for i in cones[0]]
    sol = exactlin.find_feasible_point(A_ub, b_ub, A_eq, [0] * len(A_eq), nvars=k)
    if sol is None:
        raise NoAmpleAvoidingW("the quotient fan carries no strictly convex support function")
    a = list(sol)
    ms = {}
    for c in cones:
        ms[c] = tuple(-sum(a[i] * duals[c][t][s] for t, i in enumerate(c)) for s in range(n))
    return a, ms


def _smallest_cone_containing(q: Fan, w: Sequence[int]) -> Cone:
    if not any(w):
        return ()
    cone, _ = locate(q, w)
    return cone


def lift_from_invariant_subvariety(f: Fan, sigma: Sequence[int], rho: int) -> Lift:
    """Build ``A >= 0`` very ample on ``V = V(sigma)``, avoiding ``W``, and its lift ``B``.

    ``W`` is the orbit closure for the smallest quotient cone containing the
    image of ray ``rho``.  ``b_i = g(P u_i)`` where ``g`` is the piecewise
    linear function of ``A`` taking the value ``a_k`` on quotient ray ``k``.
    All four postconditions are re-checked before returning.
    """
    sigma = tuple(sorted(set(int(i) for i in sigma)))
    if not 0 <= rho < f.nrays:
        raise ConeNotInFan(f"ray {rho} does not exist")
    if not is_simplicial(f):
        raise NotSimplicial("lifting needs a simplicial fan")
    if not is_complete(f):
        raise NotComplete("lifting needs a complete fan")
    sq = star_quotient_data(f, sigma)
    q, P = sq.fan, sq.projection
    w_cone = _smallest_cone_containing(q, P.apply(f.rays[rho])) if q.dim else ()

    factor = 1
    if q.dim == 0:
        a: list[int] = []
        ms = {(): ()}
    else:
        a_q, ms_q = _ample_on(q)
        base = next(c for c in q.max_cones if set(w_cone) <= set(c))
        shift = ms_q[base]
        # translate so A vanishes on the cone containing W, then scale to a Cartier divisor
        a_q = [a_q[j] + _pair(shift, q.rays[j]) for j in range(q.nrays)]
        ms_q = {c: tuple(x - y for x, y in zip(m, shift)) for c, m in ms_q.items()}
        vals = list(a_q) + [x for m in ms_q.values() for x in m]
        L = exactlin.lcm_denominator(vals)
        ints = [int(x * L) for x in vals]
        g = 0
        for x in ints:
            g = gcd(g, x)
        scale = Fraction(L, g or 1)
        if q.dim >= 3 and not is_smooth(q):
            factor = q.dim - 1
            scale *= factor
        a = [int(x * scale) for x in a_q]
        ms = {c: tuple(x * scale for x in m) for c, m in ms_q.items()}

    A = InvariantDivisor.of(a)
    B = InvariantDivisor.of([_lift_value(q, ms, a, P.apply(u)) for u in f.rays])
    lift = Lift(B, A, sq, w_cone, factor)
    check_lift(f, sigma, rho, lift)
    return lift


def _lift_value(q: Fan, ms: dict, a: Sequence[int], w: Sequence[int]) -> Fraction:
    if q.dim == 0 or not any(w):
        return Fraction(0)
    cone, coords = locate(q, w)
    return sum((c * a[k] for k, c in zip(cone, coords)), Fraction(0))


def check_lift(f: Fan, sigma: Cone, rho: int, lift: Lift) -> None:
    """Independent re-check; raises PostconditionFailed."""
    B, A, sq = lift.B, lift.A, lift.quotient
    q, P = sq.fan, sq.projection
    if not B.is_effective():
        raise PostconditionFailed(f"B = {B} is not effective")
    if not A.is_effective():
        raise PostconditionFailed(f"A = {A} is not effective")
    for i in sigma:
        if B[i] != 0:
            raise PostconditionFailed(f"component D_{i} of B contains V")
    if B[rho] != 0:
        raise PostconditionFailed(f"B has coefficient {B[rho]} on ray {rho}")
    for k in lift.w_cone:
        if A[k] != 0:
            raise PostconditionFailed(f"A contains W through quotient ray {k}")
    # restriction: rays landing on quotient ray k satisfy b_i = lambda_i a_k
    for i, u in enumerate(f.rays):
        if i in sigma:
            continue
        w = P.apply(u)
        if not any(w):
            continue
        for k, r in enumerate(q.rays):
            lam = _multiple(w, r)
            if lam is not None and B[i] != lam * A[k]:
                raise PostconditionFailed(f"B restricted to V differs from A at quotient ray {k}")
    for k, i in enumerate(sq.ray_origin):
        if B[i] != _multiple(P.apply(f.rays[i]), q.rays[k]) * A[k]:
            raise PostconditionFailed(f"B restricted to V differs from A at quotient ray {k}")


def _multiple(w, r) -> int | None:
    """``lam > 0`` with ``w == lam * r``, if any."""
    t = next(t for t, x in enumerate(r) if x)
    if w[t] % r[t]:
        return None
    lam = w[t] // r[t]
    if lam <= 0 or any(x != lam * y for x, y in zip(w, r)):
        return None
    return lam


def parse_divisor_file(text: str, nrays: int | None = None) -> InvariantDivisor:
    """``divisor:`` then rationals, on the same line or the following ones."""
    vals: list[Fraction] = []
    seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.lower().startswith("divisor:"):
            if seen:
                raise ParseError("second 'divisor:' line", lineno)
            seen = True
            line = line.split(":", 1)[1]
        elif not seen:
            raise ParseError(f"expected 'divisor:', got {line!r}", lineno)
        for tok in line.split():
            try:
                vals.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {tok!r}", lineno) from None
    if not seen:
        raise ParseError("missing 'divisor:' line")
    if nrays is not None and len(vals) != nrays:
        raise ParseError(f"divisor has {len(vals)} coefficients, fan has {nrays} rays")
    return InvariantDivisor(tuple(vals))


def read_divisor(path, nrays: int | None = None) -> InvariantDivisor:
    with open(path, encoding="utf-8") as fh:
        return parse_divisor_file(fh.read(), nrays)
