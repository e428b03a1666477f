"""Rationality certificates for hypersurfaces in graded polynomial rings.

Given ``k[x_1..x_n] / (Q)`` graded by a finitely generated abelian group,
:func:`rationality_certificate` looks for a cross term ``x_i x_j`` of ``Q``,
changes variables until ``Q = c (x_i x_j - q)`` with ``q`` free of ``x_i``,
and reads off the degree-zero Laurent monomial ``mu = x_i x_j / nu``.  When
the quadratic part is diagonal it first rotates a pair ``x_i^2, x_j^2`` into
a product, passing to a double cover when their degrees differ by 2-torsion.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Sequence

from . import exactlin
from .errors import (
    EliminationStalled,
    NonzeroConstantTerm,
    NotHomogeneous,
    NotTwoTorsion,
    PostconditionFailed,
    ZeroQ,
)
from .grading import Element, GradedGroup, GradedPresentation, cokernel
from .poly import Poly, QuadraticNumber, parse_poly, rational_sqrt

Step = tuple[tuple[int, Poly], ...]  # one simultaneous substitution


class Verdict(str, Enum):
    TORIC = "Toric"
    RATIONAL = "Rational"
    DOUBLE_COVER = "DoubleCoverThenRational"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


class Germ(str, Enum):
    SMOOTH = "Smooth"
    CA = "cA"
    NOT_CA = "NotCA"

    def __str__(self):
        return self.value


def validate_homogeneous(p: GradedPresentation) -> bool:
    if not p.has_relation():
        return True
    return len({p.monomial_degree(e) for e in p.relation.terms}) == 1


def _field_rank(rows: list[list]) -> int:
    """Rank by Gaussian elimination over any exact field (Fractions or QuadraticNumbers)."""
    a = [list(r) for r in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(r + 1, m):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def quadratic_matrix(Q: Poly) -> list[list]:
    n = Q.nvars
    S = [[Fraction(0)] * n for _ in range(n)]
    for e, c in Q.homogeneous_part(2).items():
        idx = [i for i, k in enumerate(e) for _ in range(k)]
        i, j = idx
        if i == j:
            S[i][i] = c
        else:
            S[i][j] = S[j][i] = c / 2
    return S


def quadratic_rank(Q: Poly) -> int:
    return _field_rank(quadratic_matrix(Q))


def classify_germ(Q: Poly) -> Germ:
    """Type of the hypersurface germ ``Q = 0`` at the origin."""
    if Q.homogeneous_part(0):
        raise NonzeroConstantTerm("the germ does not pass through the origin")
    if Q.homogeneous_part(1):
        return Germ.SMOOTH
    return Germ.CA if quadratic_rank(Q) >= 2 else Germ.NOT_CA


def cross_terms(Q: Poly) -> list[tuple[int, int]]:
    out = []
    for e in Q.homogeneous_part(2).terms:
        idx = [i for i, k in enumerate(e) if k]
        if len(idx) == 2:
            out.append(tuple(idx))
    return sorted(out)


def find_cross_term(Q: Poly) -> tuple[int, int] | None:
    ct = cross_terms(Q)
    return ct[0] if ct else None


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(k == i) for k in range(n))


def eliminate_to_normal_form(Q: Poly, i: int, j: int) -> tuple[Poly, list[Step], object]:
    """Substitutions ``x_j -> x_j - q0/c`` until ``Q = c (x_i x_j - q)``, q free of ``x_i``.

    Returns ``(x_i x_j - q, steps, c)``.
    """
    n = Q.nvars
    xj = Poly.var(n, j)
    c = Q.coeff(tuple(a + b for a, b in zip(_unit(n, i), _unit(n, j))))
    if not c:
        raise ValueError(f"x{i}*x{j} is not a term of Q")
    steps: list[Step] = []
    for _ in range(max(1, Q.total_degree()) + 1):
        quo, rest = Q.split_by_divisibility(i)
        q0 = quo - xj * c
        if q0.is_zero():
            return Poly.monomial(tuple(a + b for a, b in zip(_unit(n, i), _unit(n, j)))) + rest / c, steps, c
        if q0.involves(j):
            raise EliminationStalled(f"the coefficient of x{i} is not linear in x{j}")
        step = ((j, xj - q0 / c),)
        steps.append(step)
        Q = Q.substitute(dict(step))
        if not Q.coeff(tuple(a + b for a, b in zip(_unit(n, i), _unit(n, j)))):
            raise EliminationStalled("the cross term cancelled")
    raise EliminationStalled(f"x{i} survives in q after {len(steps)} substitutions")


def build_mu(p: GradedPresentation, q: Poly, i: int, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``mu = x_i x_j / nu`` for the lexicographically first monomial ``nu`` of ``q``."""
    if q.is_zero():
        raise ZeroQ("the relation is x_i x_j: the hypersurface is reducible")
    nu = q.items()[0][0]
    mu = tuple(int(k == i) + int(k == j) - nu[k] for k in range(q.nvars))
    if not p.group.is_zero(p.monomial_degree(mu)):
        raise PostconditionFailed(f"mu = {mu} has nonzero degree")
    if mu[i] != 1:
        raise PostconditionFailed(f"mu = {mu} does not have exponent 1 at x{i}")
    return mu, nu


def degree_lattice(p: GradedPresentation) -> list[tuple[int, ...]]:
    """Basis of ``M``, the exponent vectors of degree-zero Laurent monomials."""
    g = p.group
    n = p.nvars
    f = g.free_rank
    rows = []
    for t in range(g.width):
        row = [p.degrees[k][t] for k in range(n)]
        row += [-g.torsion[t - f] if s == t - f else 0 for s in range(len(g.torsion))] if t >= f else [0] * len(g.torsion)
        rows.append(row)
    if not rows:
        return [_unit(n, k) for k in range(n)]
    K = exactlin.kernel_basis(exactlin.IntMatrix.from_rows(rows, n + len(g.torsion)))
    # project away the torsion multipliers and re-saturate
    proj = [v[:n] for v in K]
    H, _ = exactlin.hermite_rows(proj)
    return [tuple(r) for r in H if any(r)]


def primitive_in_lattice(v: Sequence[int], basis: list[tuple[int, ...]]) -> bool | None:
    """Is ``v`` a primitive element of the lattice spanned by ``basis``?  None if not in it."""
    if not basis:
        return None
    A = [list(col) for col in zip(*basis)]
    x = exactlin.solve_rational(A, v)
    if x is None or any(t.denominator != 1 for t in x):
        return None
    g = 0
    for t in x:
        g = gcd(g, int(t))
    return g == 1


@dataclass(frozen=True)
class RationalityCertificate:
    verdict: Verdict
    presentation: GradedPresentation
    pair: tuple[int, int] | None = None
    mu: tuple[int, ...] | None = None
    nu: tuple[int, ...] | None = None
    substitutions: tuple[Step, ...] = ()
    leading: object = None  # Q after all substitutions equals leading * normal_form
    normal_form: Poly | None = None
    q: Poly | None = None
    scaling: tuple[Fraction, Fraction] | None = None
    requires_sqrt: Fraction | None = None  # radicand when the scaling is irrational
    torsion_class: Element | None = None
    cover: RationalityCertificate | None = None
    reason: str = ""
    primitive_in_M: bool | None = None
    notes: tuple[str, ...] = field(default=(), compare=False)


def _diagonal_pair(p: GradedPresentation, Q: Poly) -> tuple[int, int] | None:
    diag = [i for i in range(Q.nvars) if Q.coeff(tuple(2 * int(k == i) for k in range(Q.nvars)))]
    pairs = list(combinations(diag, 2))
    if not pairs:
        return None
    same = [(i, j) for i, j in pairs if p.degrees[i] == p.degrees[j]]
    return (same or pairs)[0]


def _rotation(n: int, i: int, j: int, c1, c2) -> tuple[Step, object, Fraction | None]:
    """``c1 x_i^2 + c2 x_j^2 -> c1 x_i x_j`` via ``x_i -> (x_i + x_j)/2, x_j -> (x_i - x_j)/(2s)``, ``s^2 = -c2/c1``."""
    t = Fraction(-c2) / Fraction(c1)
    s = rational_sqrt(t)
    radicand = None
    if s is None:
        s = QuadraticNumber.sqrt(t)
        radicand = t
    xi, xj = Poly.var(n, i), Poly.var(n, j)
    half = Fraction(1, 2)
    step = ((i, (xi + xj) * half), (j, (xi - xj) * (1 / (2 * s))))
    return step, s, radicand


def _certify_cross(p: GradedPresentation, Q: Poly, prefix: tuple[Step, ...]) -> RationalityCertificate:
    first_error = None
    for a, b in cross_terms(Q):
        for i, j in ((a, b), (b, a)):
            try:
                nf, steps, c = eliminate_to_normal_form(Q, i, j)
                q = Poly.monomial(tuple(int(k == i) + int(k == j) for k in range(Q.nvars))) - nf
                mu, nu = build_mu(p, q, i, j)
            except (EliminationStalled, ZeroQ) as exc:
                first_error = first_error or exc
                continue
            return RationalityCertificate(
                Verdict.RATIONAL,
                p,
                pair=(i, j),
                mu=mu,
                nu=nu,
                substitutions=prefix + tuple(steps),
                leading=c,
                normal_form=nf,
                q=q,
                primitive_in_M=primitive_in_lattice(mu, degree_lattice(p)),
            )
    kind = "reducible" if isinstance(first_error, ZeroQ) else "elimination stalled"
    return RationalityCertificate(Verdict.INCONCLUSIVE, p, reason=f"{kind}: {first_error}")


def rationality_certificate(p: GradedPresentation) -> RationalityCertificate:
    if not validate_homogeneous(p):
        raise NotHomogeneous("the relation is not homogeneous for the grading")
    if not p.has_relation():
        return RationalityCertificate(Verdict.TORIC, p, reason="no relation: the ring is a polynomial ring")
    Q = p.relation
    if cross_terms(Q):
        return _certify_cross(p, Q, ())
    if quadratic_rank(Q) < 2:
        return RationalityCertificate(
            Verdict.INCONCLUSIVE, p, reason=f"quadratic rank {quadratic_rank(Q)} < 2"
        )
    i, j = _diagonal_pair(p, Q)
    n = Q.nvars
    c1 = Q.coeff(tuple(2 * int(k == i) for k in range(n)))
    c2 = Q.coeff(tuple(2 * int(k == j) for k in range(n)))
    if p.degrees[i] == p.degrees[j]:
        step, _, radicand = _rotation(n, i, j, c1, c2)
        cert = _certify_cross(p, Q.substitute(dict(step)), (step,))
        return replace(cert, scaling=(Fraction(c1), Fraction(c2)), requires_sqrt=radicand)
    tau = p.group.sub(p.degrees[i], p.degrees[j])
    cover_p = regrade_double_cover(p, tau)
    cover = rationality_certificate(cover_p)
    verdict = Verdict.DOUBLE_COVER if cover.verdict == Verdict.RATIONAL else Verdict.INCONCLUSIVE
    return RationalityCertificate(
        verdict,
        p,
        pair=(i, j),
        scaling=(Fraction(c1), Fraction(c2)),
        torsion_class=tau,
        cover=cover,
        reason="" if verdict == Verdict.DOUBLE_COVER else f"cover: {cover.reason}",
    )


def regrade_double_cover(p: GradedPresentation, tau: Sequence[int]) -> GradedPresentation:
    """Same ring and relation, graded by ``G / <tau>``."""
    g = p.group
    tau = g.normalize(tau)
    if g.is_zero(tau) or not g.is_zero(g.scale(tau, 2)):
        raise NotTwoTorsion(f"{tau} is not an element of order 2")
    f = g.free_rank
    cols = [[g.torsion[t - f] * int(s == t) for s in range(g.width)] for t in range(f, g.width)]
    cols.append(list(tau))
    R = exactlin.IntMatrix.from_rows([list(r) for r in zip(*cols)], len(cols))
    cmap = cokernel(R)
    degrees = tuple(cmap(d) for d in p.degrees)
    return GradedPresentation(cmap.group, p.names, degrees, p.relation, p.notes)


def _apply(Q: Poly, steps: Sequence[Step]) -> Poly:
    for step in steps:
        Q = Q.substitute(dict(step))
    return Q


def _homogeneous_of(p: GradedPresentation, poly: Poly, deg: Element) -> bool:
    return all(p.monomial_degree(e) == deg for e in poly.terms)


def parametrization_residual(cert: RationalityCertificate) -> Poly:
    """``x_j`` times the normal form evaluated at ``x_i = q / x_j``; zero when the parametrization holds."""
    i, j = cert.pair
    quo, rest = cert.normal_form.split_by_divisibility(i)
    return quo * cert.q + rest * Poly.var(cert.q.nvars, j)


def verify_certificate(cert: RationalityCertificate) -> None:
    """Re-check every claim of a certificate from scratch; raises PostconditionFailed."""
    p = cert.presentation
    if not validate_homogeneous(p):
        raise PostconditionFailed("presentation is not homogeneous")
    if cert.verdict == Verdict.TORIC:
        if p.has_relation():
            raise PostconditionFailed("toric verdict with a relation")
        return
    if cert.verdict == Verdict.RATIONAL:
        i, j = cert.pair
        mu = cert.mu
        if not p.group.is_zero(p.monomial_degree(mu)):
            raise PostconditionFailed("mu has nonzero degree")
        if abs(mu[i]) != 1:
            raise PostconditionFailed("mu has no unit coordinate at x_i")
        for step in cert.substitutions:
            for k, poly in step:
                if not _homogeneous_of(p, poly, p.degrees[k]):
                    raise PostconditionFailed(f"substitution for x{k} does not preserve degree")
        if _apply(p.relation, cert.substitutions) != cert.normal_form * cert.leading:
            raise PostconditionFailed("substitutions do not take Q to its normal form")
        if cert.q.involves(i):
            raise PostconditionFailed("q involves x_i")
        if not parametrization_residual(cert).is_zero():
            raise PostconditionFailed("parametrization does not satisfy the relation")
        return
    if cert.verdict == Verdict.DOUBLE_COVER:
        g = p.group
        tau = cert.torsion_class
        if g.is_zero(tau) or not g.is_zero(g.scale(tau, 2)):
            raise PostconditionFailed("torsion class is not of order 2")
        i, j = cert.pair
        cp = cert.cover.presentation
        if cp.degrees[i] != cp.degrees[j]:
            raise PostconditionFailed("cover does not identify the two degrees")
        if cert.cover.verdict != Verdict.RATIONAL:
            raise PostconditionFailed("cover is not certified rational")
        verify_certificate(cert.cover)


def _certificate_parts(cert: RationalityCertificate) -> tuple[list[str], list[tuple[str, str]]]:
    p = cert.presentation
    names = p.names
    lines = [f"verdict: {cert.verdict}"]
    if cert.reason:
        lines.append(f"reason: {cert.reason}")
    kv = [("verdict", str(cert.verdict))]
    if cert.scaling is not None:
        c1, c2 = cert.scaling
        lines.append(f"diagonal pair {names[cert.pair[0]]}, {names[cert.pair[1]]} with coefficients {c1}, {c2}")
        kv.append(("scaling", f"{c1},{c2}"))
    if cert.requires_sqrt is not None:
        lines.append(f"change of variables needs sqrt({cert.requires_sqrt})")
        kv.append(("requires_sqrt", str(cert.requires_sqrt)))
    if cert.verdict == Verdict.RATIONAL:
        i, j = cert.pair
        lines.append(f"normal form: {cert.normal_form.format(names)}")
        for step in cert.substitutions:
            lines.append("substitute " + ", ".join(f"{names[k]} -> {poly.format(names)}" for k, poly in step))
        lines.append(f"parametrization: {names[i]} = ({cert.q.format(names)}) / {names[j]}")
        kv += [
            ("pair", f"{names[i]},{names[j]}"),
            ("mu", ",".join(str(x) for x in cert.mu)),
            ("nu", ",".join(str(x) for x in cert.nu)),
            ("substitutions", str(len(cert.substitutions))),
            ("primitive_in_M", str(cert.primitive_in_M).lower()),
        ]
    if cert.torsion_class is not None and cert.cover is not None:
        tau = cert.torsion_class
        lines.append(
            f"torsion class {tau} of order {p.group.order(tau)}; cover graded by {cert.cover.presentation.group}"
        )
        kv.append(("torsion_class", ",".join(str(x) for x in tau)))
        kv.append(("torsion_order", str(p.group.order(tau))))
        kv.append(("cover_group", str(cert.cover.presentation.group)))
        sub_lines, sub_kv = _certificate_parts(cert.cover)
        lines.append("cover certificate:")
        lines += ["  " + s for s in sub_lines]
        kv += [("cover_" + k, v) for k, v in sub_kv]
    return lines, kv


def format_certificate(cert: RationalityCertificate) -> str:
    """Prose followed by a ``key = value`` block."""
    lines, kv = _certificate_parts(cert)
    return "\n".join(lines + [""] + [f"{k} = {v}" for k, v in kv]) + "\n"


# The threefold built as a quotient of a conic bundle over P^1 x P^1.

SECTION7_NAMES = ("y0", "y1", "z0", "z1", "x0", "x1", "x2")


def section7_q(d: int) -> Poly:
    """A fixed bidegree ``(2d, 2d)`` form in ``y_i^2, z_i^2, y_i z_i``.

    The certificate only uses its bidegree, so one representative suffices.
    """
    n = len(SECTION7_NAMES)
    y0, y1, z0, z1 = (Poly.var(n, k) for k in range(4))
    return (y0 * z0) ** (2 * d) + (y1 * z1) ** (2 * d) + (y0 * y0) ** d * (z1 * z1) ** d + (y1 * y1) ** d * (z0 * z0) ** d * 2


def section7_presentation(d: int) -> GradedPresentation:
    if d < 1:
        raise ValueError("d must be positive")
    g = GradedGroup(3, (2,))
    degrees = (
        g.element((1, 0, 0), (0,)),
        g.element((1, 0, 0), (1,)),
        g.element((0, 1, 0), (0,)),
        g.element((0, 1, 0), (1,)),
        g.element((0, 0, 1), (0,)),
        g.element((0, 0, 1), (1,)),
        g.element((-d, -d, 1), (0,)),
    )
    n = len(SECTION7_NAMES)
    x0, x1, x2 = (Poly.var(n, k) for k in (4, 5, 6))
    Q = x0 * x0 - x1 * x1 - section7_q(d) * x2 * x2
    return GradedPresentation(g, SECTION7_NAMES, degrees, Q)


def section7_pair():
    """Boundary data: two fibres of each ruling and the section ``x2 = 0``."""
    from .complexity import AbstractPairData

    items = [
        ((1, 0, 0), 1, "y0=0"),
        ((1, 0, 0), 1, "y1=0"),
        ((0, 1, 0), 1, "z0=0"),
        ((0, 1, 0), 1, "z1=0"),
        ((0, 0, 1), 1, "x2=0"),
    ]
    return AbstractPairData.build(3, 3, items)


@dataclass(frozen=True)
class Section7Report:
    d: int
    relation: str
    gamma: Fraction
    genus: int
    quotient_genus: int
    martens_bound: int
    gate: bool
    certificate: RationalityCertificate


def section7_report(d: int) -> Section7Report:
    from .complexity import absolute_complexity

    if d < 1:
        raise ValueError("d must be positive")
    p = section7_presentation(d)
    genus = (2 * d - 1) ** 2  # smooth curve of bidegree (2d, 2d) on P^1 x P^1
    bound = 2 * d
    return Section7Report(
        d=d,
        relation="x0^2 - x1^2 - q(y0,y1,z0,z1)*x2^2",
        gamma=absolute_complexity(section7_pair()),
        genus=genus,
        quotient_genus=(genus + 1) // 2,
        martens_bound=bound,
        # trigonal forces a g^1_6 on the double cover, so a bound above 6 rules it out
        gate=bound > 6,
        certificate=rationality_certificate(p),
    )


def format_section7(rep: Section7Report) -> str:
    cert = rep.certificate
    lines = [
        f"relation: {rep.relation} with q of bidegree ({2 * rep.d},{2 * rep.d})",
        "grading: Z^3 + Z/2; deg x0 and deg x1 differ by the torsion generator",
        f"absolute complexity gamma = {rep.gamma}",
        f"discriminant curve D on P^1 x P^1: genus {rep.genus}; quotient curve genus {rep.quotient_genus}",
        f"gonality of D is at least {rep.martens_bound}; irrationality gate {'passes' if rep.gate else 'fails'}",
        f"rationality verdict: {cert.verdict} (cover: {cert.cover.verdict if cert.cover else '-'})",
        "",
        f"d = {rep.d}",
        f"gamma = {rep.gamma}",
        f"genus = {rep.genus}",
        f"quotient_genus = {rep.quotient_genus}",
        f"martens_bound = {rep.martens_bound}",
        f"gate = {'pass' if rep.gate else 'fail'}",
        f"verdict = {cert.verdict}",
        f"cover_verdict = {cert.cover.verdict if cert.cover else 'none'}",
    ]
    if cert.torsion_class is not None:
        lines.append(f"torsion_class = {','.join(str(x) for x in cert.torsion_class)}")
    return "\n".join(lines) + "\n"


def presentation_from_text(group: GradedGroup, names: Sequence[str], degrees, relation: str | None) -> GradedPresentation:
    """Convenience constructor used by tests and the example runner."""
    degs = tuple(group.normalize(d) for d in degrees)
    rel = parse_poly(relation, names) if relation else None
    return GradedPresentation(group, tuple(names), degs, rel)
