import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import fangen
from toricpairs import toric
from toricpairs.errors import (
    NonIntegral,
    NotComplete,
    NotQCartier,
    NotSimplicial,
    OutsideSupport,
    ParseError,
    RaysDoNotSpan,
)
from toricpairs.fan import is_complete, make_fan, read_fan
from toricpairs.toric import InvariantDivisor

DATA = Path(__file__).parent / "data"
F = Fraction


def z2_cone():
    return read_fan(DATA / "z2cone.fan")


# class group


def test_class_group_p2():
    f = fangen.p2()
    cg = toric.class_group(f)
    assert cg.free_rank == 1 and cg.torsion == ()
    degs = {toric.divisor_class(f, cg, [int(i == j) for j in range(3)]) for i in range(3)}
    assert len(degs) == 1


def test_class_group_hirzebruch():
    for n in range(4):
        cg = toric.class_group(fangen.hirzebruch(n))
        assert cg.free_rank == 2 and cg.torsion == ()


def test_class_group_z2_cone():
    f = z2_cone()
    cg = toric.class_group(f)
    assert cg.free_rank == 0 and cg.torsion == (2,)
    g = toric.divisor_class(f, cg, [1, 0])
    assert g == (1,)
    assert cg.group.order(g) == 2


def test_class_group_weighted():
    cg = toric.class_group(fangen.weighted_p3())
    assert cg.free_rank == 1 and cg.torsion == ()
    f = fangen.weighted_p3()
    degs = [toric.divisor_class(f, cg, [int(i == j) for j in range(4)]) for i in range(4)]
    # P(1,1,2,1): the third ray has twice the degree of the others
    assert degs[2][0] == 2 * degs[0][0] and degs[0] == degs[1] == degs[3]


def test_rays_must_span():
    f = make_fan(2, [[1, 0], [-1, 0]], [[0], [1]])
    with pytest.raises(RaysDoNotSpan):
        toric.class_group(f)


def test_divisor_class_zero_and_integrality():
    f = fangen.p2()
    cg = toric.class_group(f)
    assert cg.group.is_zero(toric.divisor_class(f, cg, [0, 0, 0]))
    with pytest.raises(NonIntegral):
        toric.divisor_class(f, cg, [F(1, 2), 0, 0])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 60), st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_principal_divisors_have_zero_class(seed, m):
    f = fangen.random_complete_simplicial(random.Random(seed), max_rays=7)
    cg = toric.class_group(f)
    div = toric.principal_divisor(f, m[: f.dim])
    assert cg.group.is_zero(toric.divisor_class(f, cg, div))


def test_ray_count_identity_on_random_fans():
    rng = random.Random(11)
    for _ in range(25):
        f = fangen.random_complete_simplicial(rng)
        assert f.nrays == f.dim + toric.class_group(f).free_rank


# support functions and positivity


def test_support_function_on_smooth_fan():
    sf = toric.support_function(fangen.p2(), [1, 2, 3])
    assert not isinstance(sf, NotQCartier)
    for c, m in sf.covectors.items():
        for i in c:
            assert sum(a * b for a, b in zip(m, fangen.p2().rays[i])) == -[1, 2, 3][i]


def test_support_function_z2_cone():
    sf = toric.support_function(z2_cone(), [1, 0])
    (m,) = sf.covectors.values()
    assert m == (F(-1, 2), F(-1, 2))
    sf2 = toric.support_function(z2_cone(), [2, 0])
    assert list(sf2.covectors.values())[0] == (-1, -1)


def test_cone_over_square_is_not_q_cartier():
    f = read_fan(DATA / "square_cone.fan")
    assert isinstance(toric.support_function(f, [1, 0, 0, 0]), NotQCartier)
    # the hyperplane class is fine
    assert not isinstance(toric.support_function(f, [1, 1, 1, 1]), NotQCartier)


def test_support_function_evaluates():
    f = fangen.p2()
    sf = toric.support_function(f, [1, 1, 1])
    assert sf((1, 0)) == -1
    assert sf((-2, -2)) == -2
    assert sf((0, 0)) == 0


def test_fn_anticanonical_matches_hand_table():
    data = json.loads((DATA / "fn_convexity.json").read_text())
    for n_str, row in data["table"].items():
        f = fangen.hirzebruch(int(n_str))
        antiK = -toric.canonical_divisor(f)
        sf = toric.support_function(f, antiK)
        slacks = toric.convexity_slacks(f, antiK)
        for entry in row["cones"]:
            cone = tuple(entry["cone"])
            assert sf.on(cone) == tuple(entry["m"])
            for j, s in entry["slacks"].items():
                assert slacks[(cone, int(j))] == s
        assert toric.is_nef(f, antiK) is row["nef"]
        assert toric.is_ample(f, antiK) is row["ample"]


def test_p2_anticanonical_is_ample():
    f = fangen.p2()
    assert toric.is_nef(f, [1, 1, 1]) and toric.is_ample(f, [1, 1, 1])


def test_zero_divisor_nef_not_ample():
    f = fangen.p2()
    assert toric.is_nef(f, [0, 0, 0]) and not toric.is_ample(f, [0, 0, 0])


def test_positivity_needs_complete_fan():
    with pytest.raises(NotComplete):
        toric.is_nef(z2_cone(), [1, 0])


def test_nef_invariant_under_principal_shift():
    rng = random.Random(5)
    for _ in range(40):
        f = fangen.random_complete_simplicial(rng, max_rays=7)
        D = InvariantDivisor.of([rng.randint(-1, 2) for _ in range(f.nrays)])
        m = [rng.randint(-3, 3) for _ in range(f.dim)]
        D2 = D + toric.principal_divisor(f, m)
        assert toric.is_nef(f, D) == toric.is_nef(f, D2)
        assert toric.is_ample(f, D) == toric.is_ample(f, D2)
        if toric.is_ample(f, D):
            assert toric.is_nef(f, D)


def test_canonical_plus_boundary_is_zero():
    for f in fangen.smooth_library():
        K = toric.canonical_divisor(f)
        assert all(c == 0 for c in (K + toric.toric_boundary(f)).coefficients)
    assert toric.canonical_divisor(fangen.p2()).coefficients == (-1, -1, -1)


# discrepancies


def test_log_discrepancy_affine_plane():
    f = make_fan(2, [[1, 0], [0, 1]], [[0, 1]])
    assert toric.log_discrepancy(f, [0, 0], (1, 1)) == 2
    assert toric.log_discrepancy(f, [1, 1], (1, 1)) == 0
    assert toric.log_discrepancy(f, [F(1, 2), 0], (1, 0)) == F(1, 2)
    with pytest.raises(OutsideSupport):
        toric.log_discrepancy(f, [0, 0], (-1, 0))


def test_log_discrepancy_linear_in_cone():
    f = fangen.hirzebruch(2)
    delta = [F(1, 3), F(1, 2), 1, 0]
    a = toric.log_discrepancy(f, delta, (1, 1))
    b = toric.log_discrepancy(f, delta, (2, 2))
    assert b == 2 * a
    assert toric.log_discrepancy(f, delta, (1, 0)) == F(2, 3)


def test_log_discrepancy_requires_simplicial():
    with pytest.raises(NotSimplicial):
        toric.log_discrepancy(read_fan(DATA / "square_cone.fan"), [0] * 4, (0, 0, 1))


def test_lc_check():
    f = fangen.hirzebruch(2)
    assert toric.lc_check_invariant(f, [1, 1, 1, 1])
    assert toric.lc_check_invariant(f, [0, 0, 0, 0])
    # twice the negative section plus fibres
    assert not toric.lc_check_invariant(f, [1, 0, 1, 2])


# lifting


def test_lift_zero_cone_copies_a():
    f = fangen.p1xp1()
    L = toric.lift_from_invariant_subvariety(f, [], 2)
    assert L.B.coefficients == L.A.coefficients
    assert L.B[2] == 0


def test_lift_p1xp1_ray():
    f = fangen.p1xp1()
    L = toric.lift_from_invariant_subvariety(f, [0], 2)
    assert L.quotient.fan.dim == 1
    assert sorted(L.A.coefficients) == [0, 1]
    assert L.B[0] == 0 and L.B[2] == 0
    assert sorted([L.B[1], L.B[3]]) == [0, 1]


def test_lift_max_cone_is_trivial():
    L = toric.lift_from_invariant_subvariety(fangen.p3(), [0, 1, 2], 3)
    assert L.A.coefficients == ()
    assert all(b == 0 for b in L.B.coefficients)


def test_lift_postconditions_on_library():
    rng = random.Random(2)
    for _ in range(15):
        f = rng.choice(fangen.smooth_library())
        sigma = rng.choice(fangen.faces(f))
        rho = rng.randrange(f.nrays)
        L = toric.lift_from_invariant_subvariety(f, sigma, rho)
        toric.check_lift(f, sigma, rho, L)
        assert L.B.is_effective() and L.B[rho] == 0
        assert all(L.B[i] == 0 for i in sigma)


def test_lift_on_singular_quotient():
    f = fangen.weighted_p3()
    L = toric.lift_from_invariant_subvariety(f, [], 0)
    assert L.very_ample_factor == 2
    assert L.B[0] == 0


def test_lift_errors():
    with pytest.raises(NotComplete):
        toric.lift_from_invariant_subvariety(z2_cone(), [], 0)


# cox ring and files


def test_cox_presentation():
    p = toric.cox_presentation(fangen.p2())
    assert p.nvars == 3 and p.group.free_rank == 1 and len(set(p.degrees)) == 1
    assert not p.has_relation()
    p = toric.cox_presentation(fangen.hirzebruch(2))
    assert p.nvars == 4 and p.group.free_rank == 2
    assert p.degrees[0] == p.degrees[2]  # the two fibres
    p = toric.cox_presentation(z2_cone())
    assert p.nvars == 2 and p.group.free_rank == 0 and p.group.torsion == (2,)


def test_cox_variable_count_on_random_fans():
    rng = random.Random(4)
    for _ in range(20):
        f = fangen.random_complete_simplicial(rng, max_rays=8)
        p = toric.cox_presentation(f)
        assert p.nvars == f.dim + p.group.free_rank


def test_divisor_file_parsing():
    D = toric.read_divisor(DATA / "p2_three_quarters.div", 3)
    assert D.coefficients == (1, 1, F(3, 4))
    with pytest.raises(ParseError):
        toric.parse_divisor_file("divisor: 1 x\n")
    with pytest.raises(ParseError):
        toric.parse_divisor_file("1 2\n")
    with pytest.raises(ParseError):
        toric.parse_divisor_file("divisor: 1 2\n", nrays=3)
