"""Random and named fans shared by the test modules."""

from __future__ import annotations

import random
from itertools import combinations, product
from math import gcd

from toricpairs.fan import Fan, make_fan


def p2() -> Fan:
    return make_fan(2, [[1, 0], [0, 1], [-1, -1]], [[0, 1], [1, 2], [2, 0]])


def hirzebruch(n: int) -> Fan:
    # rays: fibre-ish (1,0), section (0,1), (-1,n), negative section (0,-1)
    return make_fan(2, [[1, 0], [0, 1], [-1, n], [0, -1]], [[0, 1], [1, 2], [2, 3], [3, 0]])


def p1xp1() -> Fan:
    return hirzebruch(0)


def p3() -> Fan:
    rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -1]]
    return make_fan(3, rays, list(combinations(range(4), 3)))


def p1cubed() -> Fan:
    rays = [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]]
    cones = [[a, 2 + b, 4 + c] for a, b, c in product((0, 1), repeat=3)]
    return make_fan(3, rays, cones)


def weighted_p3() -> Fan:
    """P(1,1,2,1): simplicial, not smooth."""
    rays = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [-1, -1, -2]]
    return make_fan(3, rays, list(combinations(range(4), 3)))


def _angle_key(v):
    x, y = v
    half = 0 if (y > 0 or (y == 0 and x > 0)) else 1
    return half


def _sort_by_angle(vs):
    from functools import cmp_to_key

    def cmp(a, b):
        ha, hb = _angle_key(a), _angle_key(b)
        if ha != hb:
            return ha - hb
        cross = a[0] * b[1] - a[1] * b[0]
        return -1 if cross > 0 else (1 if cross < 0 else 0)

    return sorted(vs, key=cmp_to_key(cmp))


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v)


def random_fan_2d(rng: random.Random, extra: int, bound: int = 4) -> Fan:
    """Complete simplicial fan in the plane: three spanning rays plus random primitive rays."""
    rays = {(1, 0), (0, 1), (-1, -1)}
    while len(rays) < 3 + extra:
        v = (rng.randint(-bound, bound), rng.randint(-bound, bound))
        if v != (0, 0):
            rays.add(_primitive(v))
    order = _sort_by_angle(list(rays))
    k = len(order)
    return make_fan(2, order, [[i, (i + 1) % k] for i in range(k)])


def star_subdivide(f: Fan, face) -> Fan:
    """Stellar subdivision at ``face`` with the new ray the primitive sum of its rays."""
    face = tuple(sorted(face))
    new = _primitive([sum(f.rays[i][t] for i in face) for t in range(f.dim)])
    if new in f.rays:
        return f
    idx = f.nrays
    cones = []
    for c in f.max_cones:
        if set(face) <= set(c):
            for r in face:
                cones.append(tuple(sorted([i for i in c if i != r] + [idx])))
        else:
            cones.append(c)
    return make_fan(f.dim, list(f.rays) + [new], cones)


def random_fan_3d(rng: random.Random, steps: int, base=None) -> Fan:
    f = base or rng.choice([p3, p1cubed, weighted_p3])()
    for _ in range(steps):
        c = rng.choice(f.max_cones)
        size = rng.choice([2, 3])
        f = star_subdivide(f, rng.sample(c, size))
    return f


def random_complete_simplicial(rng: random.Random, max_rays: int = 9) -> Fan:
    if rng.random() < 0.5:
        return random_fan_2d(rng, rng.randint(0, max_rays - 3))
    start = rng.choice([p3, p1cubed, weighted_p3])()
    return random_fan_3d(rng, rng.randint(0, max_rays - start.nrays), start)


def smooth_library() -> list[Fan]:
    """Smooth complete (projective) fans of dimensions 2 and 3."""
    lib = [p2(), p1xp1(), hirzebruch(1), hirzebruch(2), hirzebruch(3), p3(), p1cubed()]
    lib.append(star_subdivide(p2(), (0, 1)))
    lib.append(star_subdivide(star_subdivide(p2(), (0, 1)), (1, 2)))
    lib.append(star_subdivide(hirzebruch(2), (2, 3)))
    lib.append(star_subdivide(p3(), (0, 1, 2)))
    lib.append(star_subdivide(p3(), (0, 1)))
    lib.append(star_subdivide(p1cubed(), (0, 2, 4)))
    lib.append(star_subdivide(star_subdivide(p1cubed(), (0, 2)), (1, 3, 5)))
    return lib


def faces(f: Fan):
    """All cones of the fan (simplicial), as sorted tuples, zero cone included."""
    out = {()}
    for c in f.max_cones:
        for k in range(1, len(c) + 1):
            out.update(combinations(c, k))
    return sorted(out, key=lambda c: (len(c), c))
