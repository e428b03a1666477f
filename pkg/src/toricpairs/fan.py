"""Rational polyhedral fans in a lattice ``N = Z^n``.

A :class:`Fan` stores primitive ray generators and its maximal cones as sorted
tuples of ray indices.  Faces are derived on demand.  Validation checks that
every pair of maximal cones meets in a common face by looking for a
separating linear form with exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from . import exactlin
from .errors import (
    ConeNotInFan,
    EmptyFan,
    InvalidFan,
    NotPure,
    OverlappingCones,
    ParseError,
)

Cone = tuple[int, ...]


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[Cone, ...]

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def ray_matrix(self) -> exactlin.IntMatrix:
        """Rays as rows (``nrays x dim``)."""
        return exactlin.IntMatrix(self.nrays, self.dim, tuple(x for r in self.rays for x in r))

    def cone_rays(self, cone: Iterable[int]) -> list[tuple[int, ...]]:
        return [self.rays[i] for i in cone]

    def cone_dim(self, cone: Iterable[int]) -> int:
        rows = self.cone_rays(cone)
        return exactlin.rank(exactlin.IntMatrix.from_rows(rows, self.dim)) if rows else 0

    def __str__(self):
        return serialize_fan(self)


def _det(rows) -> int:
    return exactlin.IntMatrix.from_rows(rows).det()


def _separable(zero, pos, neg, dim) -> bool:
    """Is there ``m`` vanishing on ``zero``, positive on ``pos`` and negative on ``neg``?"""
    A_ub = [[-x for x in u] for u in pos] + [list(u) for u in neg]
    b_ub = [-1] * len(A_ub)
    if not A_ub:
        return True
    return exactlin.find_feasible_point(A_ub, b_ub, [list(u) for u in zero], [0] * len(zero), nvars=dim) is not None


def _is_simplicial_cone(rays, dim) -> bool:
    if not rays:
        return True
    return exactlin.rank(exactlin.IntMatrix.from_rows(rays, dim)) == len(rays)


def _check_cone(rays, dim, label):
    if _is_simplicial_cone(rays, dim):
        return
    # every listed generator must span a face, which also forces the cone to be pointed
    for k, u in enumerate(rays):
        others = rays[:k] + rays[k + 1:]
        if not _separable([u], others, [], dim):
            raise InvalidFan(f"cone {label}: generator {u} is not an extremal ray of a pointed cone")


def _dual_basis(f: Fan, cone: Cone):
    """Rows ``m_k`` with ``<m_k, u_l> = delta_kl`` for a full-dimensional simplicial cone."""
    rows = [list(r) for r in f.cone_rays(cone)]
    return [exactlin.solve_rational(rows, [int(k == j) for j in range(len(rows))]) for k in range(len(rows))]


def _dual_separates(f: Fan, s: Cone, only_s, only_t, duals: dict) -> bool:
    # sum of the dual covectors over only_s vanishes on s's other rays and is 1 on only_s
    if s not in duals:
        duals[s] = _dual_basis(f, s)
    basis = duals[s]
    pos = {i: k for k, i in enumerate(s)}
    m = [sum(basis[pos[i]][t] for i in only_s) for t in range(f.dim)]
    return all(sum(a * b for a, b in zip(m, f.rays[j])) < 0 for j in only_t)


def _meet_in_face(f: Fan, s: Cone, t: Cone, simplicial: dict, duals: dict | None = None) -> bool:
    common = sorted(set(s) & set(t))
    only_s = [i for i in s if i not in t]
    only_t = [i for i in t if i not in s]
    if simplicial[s] and simplicial[t]:
        union = common + only_s + only_t
        if _is_simplicial_cone(f.cone_rays(union), f.dim):
            return True
        n = f.dim
        if len(s) == n and len(t) == n and len(common) == n - 1:
            base = f.cone_rays(common)
            ds = _det(base + [f.rays[only_s[0]]])
            dt = _det(base + [f.rays[only_t[0]]])
            return (ds > 0) != (dt > 0)
        if duals is not None and len(s) == len(t) == f.dim:
            if _dual_separates(f, s, only_s, only_t, duals) or _dual_separates(f, t, only_t, only_s, duals):
                return True
    return _separable(f.cone_rays(common), f.cone_rays(only_s), f.cone_rays(only_t), f.dim)


def make_fan(dim: int, rays: Sequence[Sequence[int]], max_cones: Sequence[Iterable[int]]) -> Fan:
    """Normalise rays to primitive vectors and validate the cone structure.

    >>> make_fan(1, [[1], [-1]], [[0], [1]]).nrays
    2
    """
    dim = int(dim)
    if dim < 0:
        raise InvalidFan("negative dimension")
    prim = []
    for k, r in enumerate(rays):
        r = [int(x) for x in r]
        if len(r) != dim:
            raise InvalidFan(f"ray {k} has {len(r)} coordinates, expected {dim}")
        if not any(r):
            raise InvalidFan(f"ray {k} is zero")
        prim.append(exactlin.primitive(r))
    if len(set(prim)) != len(prim):
        raise InvalidFan("rays are not pairwise distinct after normalisation")
    cones = []
    for c in max_cones:
        c = [int(i) for i in c]
        if len(set(c)) != len(c):
            raise InvalidFan(f"cone {c} repeats a ray")
        for i in c:
            if not 0 <= i < len(prim):
                raise InvalidFan(f"cone {c} refers to missing ray {i}")
        cones.append(tuple(sorted(c)))
    if not cones:
        if dim == 0:
            cones = [()]
        else:
            raise EmptyFan("fan has no cones")
    if len(set(cones)) != len(cones):
        raise InvalidFan("duplicate cone")
    used = set(i for c in cones for i in c)
    missing = [i for i in range(len(prim)) if i not in used]
    if missing:
        raise InvalidFan(f"rays {missing} lie in no cone")
    f = Fan(dim, tuple(prim), tuple(cones))
    simplicial = {}
    duals: dict = {}
    for c in cones:
        _check_cone(f.cone_rays(c), dim, c)
        simplicial[c] = _is_simplicial_cone(f.cone_rays(c), dim)
    for s, t in combinations(cones, 2):
        if set(s) <= set(t) or set(t) <= set(s):
            raise InvalidFan(f"cone {s if len(s) < len(t) else t} is not maximal")
        if not _meet_in_face(f, s, t, simplicial, duals):
            raise OverlappingCones(f"cones {s} and {t} do not meet in a common face")
    return f


def is_simplicial(f: Fan) -> bool:
    return all(_is_simplicial_cone(f.cone_rays(c), f.dim) for c in f.max_cones)


def is_smooth(f: Fan) -> bool:
    """Every maximal cone is generated by part of a lattice basis."""
    for c in f.max_cones:
        rows = f.cone_rays(c)
        if not rows:
            continue
        snf = exactlin.smith_normal_form(exactlin.IntMatrix.from_rows(rows, f.dim))
        if any(d != 1 for d in snf.elementary_divisors):
            return False
    return True


def cone_facets(f: Fan, cone: Cone) -> list[Cone]:
    """Facets of a full-dimensional cone, as sorted ray-index tuples."""
    n = f.dim
    rays = f.cone_rays(cone)
    if len(cone) == n:
        return [tuple(i for i in cone if i != j) for j in cone]
    found = []
    for sub in combinations(range(len(cone)), n - 1):
        M = exactlin.IntMatrix.from_rows([rays[k] for k in sub], n)
        if exactlin.rank(M) != n - 1:
            continue
        (normal,) = exactlin.kernel_basis(M)
        vals = [sum(a * b for a, b in zip(normal, u)) for u in rays]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            facet = tuple(cone[k] for k, v in enumerate(vals) if v == 0)
            if facet not in found:
                found.append(facet)
    return found


def is_complete(f: Fan) -> bool:
    """Decided by facet pairing: each facet of a maximal cone lies in exactly two of them."""
    for c in f.max_cones:
        if f.cone_dim(c) < f.dim:
            raise NotPure(f"maximal cone {c} has dimension {f.cone_dim(c)} < {f.dim}")
    if f.dim == 0:
        return True
    count: dict[Cone, int] = {}
    for c in f.max_cones:
        for facet in cone_facets(f, c):
            count[facet] = count.get(facet, 0) + 1
    return all(v == 2 for v in count.values())


def is_face_of(f: Fan, sigma: Iterable[int], cone: Cone) -> bool:
    sigma = set(sigma)
    if not sigma <= set(cone):
        return False
    rays = f.cone_rays(cone)
    if _is_simplicial_cone(rays, f.dim):
        return True
    zero = [f.rays[i] for i in cone if i in sigma]
    pos = [f.rays[i] for i in cone if i not in sigma]
    return _separable(zero, pos, [], f.dim)


def cones_containing(f: Fan, sigma: Iterable[int]) -> list[Cone]:
    """Maximal cones having ``sigma`` as a face."""
    sigma = tuple(sorted(set(sigma)))
    return [c for c in f.max_cones if is_face_of(f, sigma, c)]


@dataclass(frozen=True)
class StarQuotient:
    """The fan of ``V(sigma)`` together with the projection that produced it."""

    fan: Fan
    projection: exactlin.IntMatrix  # (dim - dim sigma) x dim, maps N onto N / N_sigma
    ray_origin: tuple[int, ...]  # for each quotient ray, the first original ray mapping onto it


def star_quotient_data(f: Fan, sigma: Iterable[int]) -> StarQuotient:
    sigma = tuple(sorted(set(int(i) for i in sigma)))
    for i in sigma:
        if not 0 <= i < f.nrays:
            raise ConeNotInFan(f"ray {i} does not exist")
    star = cones_containing(f, sigma)
    if not star:
        raise ConeNotInFan(f"{sigma} is not a cone of the fan")
    S = exactlin.IntMatrix(len(sigma), f.dim, tuple(x for i in sigma for x in f.rays[i]))
    P = exactlin.IntMatrix.from_rows(exactlin.kernel_basis(S), f.dim)
    qdim = P.rows
    image: dict[int, tuple[int, ...]] = {}
    for c in star:
        for i in c:
            if i not in sigma and i not in image:
                image[i] = exactlin.primitive(P.apply(f.rays[i]))
    order: list[tuple[int, ...]] = []
    origin = []
    for i in sorted(image):
        if image[i] not in order:
            order.append(image[i])
            origin.append(i)
    index = {v: k for k, v in enumerate(order)}
    cones = [sorted(index[image[i]] for i in c if i not in sigma) for c in star]
    return StarQuotient(make_fan(qdim, order, cones), P, tuple(origin))


def star_quotient(f: Fan, sigma: Iterable[int]) -> Fan:
    """Fan of the invariant subvariety ``V(sigma)`` in ``N / span(sigma)``."""
    return star_quotient_data(f, sigma).fan


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_fan_file(text: str) -> Fan:
    dim = None
    rays: list[list[int]] = []
    cones: list[list[int]] = []
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        key = line.lower()
        if key.startswith("dim:"):
            try:
                dim = int(line.split(":", 1)[1])
            except ValueError:
                raise ParseError("dim must be an integer", lineno) from None
            section = None
            seen.add("dim")
            continue
        if key == "rays:":
            section = "rays"
            seen.add("rays")
            continue
        if key == "cones:":
            section = "cones"
            seen.add("cones")
            continue
        if section is None:
            raise ParseError(f"unexpected line {line!r}", lineno)
        try:
            vals = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if section == "rays":
            if dim is not None and len(vals) != dim:
                raise ParseError(f"ray has {len(vals)} coordinates, expected {dim}", lineno)
            rays.append(vals)
        else:
            cones.append(vals)
    for required in ("dim", "rays", "cones"):
        if required not in seen:
            raise ParseError(f"missing '{required}:' section")
    return make_fan(dim, rays, cones)


def serialize_fan(f: Fan) -> str:
    lines = [f"dim: {f.dim}", "rays:"]
    lines += [" ".join(str(x) for x in r) for r in f.rays]
    lines.append("cones:")
    lines += [" ".join(str(i) for i in c) for c in f.max_cones if c]
    return "\n".join(lines) + "\n"


def read_fan(path) -> Fan:
    with open(path, encoding="utf-8") as fh:
        return parse_fan_file(fh.read())
