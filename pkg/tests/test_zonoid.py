import math
import random
from fractions import Fraction

import numpy as np
import pytest

from src.errors import DegreeOverflowError, DimensionMismatchError
from src.exterior import ExteriorElement, SimpleVector, expand
from src.zonoid import (
    Atom,
    VirtualZonoid,
    crofton_evaluate,
    exp_truncated,
    hodge_dual,
    hodge_dual_parts,
    intrinsic_volume,
    length,
    mixed_volume,
    pairing,
    segment,
    support,
    wedge,
    zonotope_volume,
)
from tests.oracles import hull_volume, random_full_zonotope, random_generators


def test_support_of_segment_and_center():
    z = segment([2, 0])
    assert support(z, [1, 0]) == 1
    c = VirtualZonoid(2, 1, (), ExteriorElement(2, 1, {(0,): 1}))
    assert support(c, [1, 0]) == 1
    assert support(c, [0, 1]) == 0


def test_segment_with_start():
    z = segment([2, 0], start=[1, 1])
    assert support(z, [1, 0]) == 3
    assert support(z, [-1, 0]) == -1


def test_length_ignores_center(unit_square):
    assert length(unit_square) == 2
    shifted = unit_square + VirtualZonoid(2, 1, (), ExteriorElement(2, 1, {(0,): 5}))
    assert length(shifted) == 2
    assert zonotope_volume(shifted) == 1


def test_unit_square_volume(unit_square):
    assert zonotope_volume(unit_square) == 1
    assert mixed_volume([unit_square, unit_square]) == 1


def test_mixed_volume_of_segments():
    a = segment([1, 0])
    b = segment([0, 1])
    # единичный квадрат = a + b, vol = 2·MV(a, b)
    assert mixed_volume([a, b]) == Fraction(1, 2)


def test_mixed_volume_requires_n_zonoids(unit_square):
    with pytest.raises(DimensionMismatchError):
        mixed_volume([unit_square])


def test_wedge_degree_overflow():
    with pytest.raises(DegreeOverflowError):
        wedge([segment([1, 0]), segment([0, 1]), segment([1, 1])])


def test_wedge_center_rule():
    a = segment([1, 0], start=[0, 0])
    b = segment([0, 1], start=[0, 0])
    w = wedge([a, b])
    # центры ½e1 и ½e2, центр произведения 2·(½e1∧½e2)
    assert w.center == ExteriorElement(2, 2, {(0, 1): Fraction(1, 2)})


def test_zonotope_volume_against_hull(rng):
    for dim in (2, 3):
        for _ in range(5):
            gens, z = random_full_zonotope(rng, dim, dim + 2)
            assert float(zonotope_volume(z)) == pytest.approx(hull_volume(gens), rel=1e-10)


def test_intrinsic_volumes_of_unit_square(unit_square):
    assert intrinsic_volume(unit_square, 0) == 1
    assert intrinsic_volume(unit_square, 1) == 2
    assert intrinsic_volume(unit_square, 2) == 1


def test_intrinsic_volume_of_cube():
    cube = VirtualZonoid.from_generators([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert intrinsic_volume(cube, 1) == 3
    assert intrinsic_volume(cube, 2) == 3
    assert intrinsic_volume(cube, 3) == 1


def test_pairing_is_symmetric_and_bilinear():
    a = VirtualZonoid.from_generators([[1, 2], [0, 1]])
    b = VirtualZonoid.from_generators([[3, -1]])
    c = VirtualZonoid.from_generators([[1, 1]], weights=[Fraction(1, 2)])
    assert pairing(a, b) == pairing(b, a)
    assert pairing(a, b + c) == pairing(a, b) + pairing(a, c)
    assert pairing(a, b.scaled(3)) == 3 * pairing(a, b)


def test_virtual_difference_cancels_length():
    a = VirtualZonoid.from_generators([[1, 2], [0, 1]])
    assert length(a - a) == 0


def test_exp_truncated_parts(unit_square):
    parts = exp_truncated(unit_square)
    assert [p.degree for p in parts] == [0, 1, 2]
    assert length(parts[2]) == 1


def test_hodge_dual_preserves_length():
    z = VirtualZonoid(3, 2, (Atom(2, SimpleVector(3, [[1, 0, 0], [0, 2, 0]])),))
    dual = hodge_dual(z)
    assert dual.degree == 1
    assert length(dual) == length(z) == 4


def test_crofton_star_exp_of_segment_on_square(unit_square):
    m = segment([1, 0])
    parts = hodge_dual_parts(exp_truncated(m))
    # K + M - прямоугольник 2 x 1
    assert crofton_evaluate(parts, unit_square) == 2


def test_crofton_single_degree_is_scaled_pairing(unit_square):
    L = VirtualZonoid.from_generators([[0, 1]])
    assert crofton_evaluate(L, unit_square) == pairing(L, unit_square)


def test_convolution_identity(rng):
    for dim in (2, 3):
        for _ in range(25):
            k_gens = random_generators(rng, dim, 2)
            l_gens = random_generators(rng, dim, 2)
            l2_gens = random_generators(rng, dim, 2)
            K = VirtualZonoid.from_generators(k_gens)
            L = VirtualZonoid.from_generators(l_gens) + VirtualZonoid.from_generators(l2_gens)
            parts = hodge_dual_parts(exp_truncated(L))
            total = VirtualZonoid.from_generators(k_gens + l_gens + l2_gens)
            expected = zonotope_volume(total)
            assert float(crofton_evaluate(parts, K)) == pytest.approx(float(expected), rel=1e-10, abs=1e-10)
            if expected > 0:
                oracle = hull_volume(k_gens + l_gens + l2_gens)
                assert float(expected) == pytest.approx(oracle, rel=1e-10)


def test_support_is_additive_under_minkowski_sum(rng):
    a = VirtualZonoid.from_generators(random_generators(rng, 3, 4), center=[1, 0, Fraction(-1, 2)])
    b = VirtualZonoid.from_generators(random_generators(rng, 3, 3), weights=[Fraction(1, 3), 2, Fraction(5, 7)])
    total = a + b
    directions = random.Random(20240611)
    for _ in range(100):
        u = [Fraction(directions.randint(-9, 9), directions.randint(1, 9)) for _ in range(3)]
        assert support(total, u) == support(a, u) + support(b, u)


def test_self_pairing_of_genuine_zonoids_is_nonnegative(rng):
    zs = [VirtualZonoid.from_generators(random_generators(rng, 3, 3)) for _ in range(5)]
    gram = [[pairing(x, y) for y in zs] for x in zs]
    for z in zs:
        assert pairing(z, z) >= 0
    weights = random.Random(7)
    for _ in range(20):
        x = [Fraction(weights.randint(0, 5)) for _ in zs]
        assert sum(x[i] * gram[i][j] * x[j] for i in range(5) for j in range(5)) >= 0


def test_pairing_gram_of_segments_can_be_indefinite():
    angles = [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4]
    zs = [segment([math.cos(t), math.sin(t)]) for t in angles]
    gram = np.array([[float(pairing(x, y)) for y in zs] for x in zs])
    eigenvalues = np.linalg.eigvalsh(gram)
    assert eigenvalues[0] == pytest.approx(1 - math.sqrt(2), abs=1e-9)
    assert eigenvalues[-1] == pytest.approx(1 + math.sqrt(2), abs=1e-9)


def test_hodge_dual_drops_numerically_dependent_atom():
    z = VirtualZonoid(3, 2, (Atom(1.0, SimpleVector(3, [[0.1, 0.2, 0.3], [0.3, 0.6, 0.9]])),))
    dual = hodge_dual(z)
    assert dual.degree == 1
    assert dual.atoms == ()


def test_hodge_dual_of_float_atom():
    z = VirtualZonoid(3, 2, (Atom(2.0, SimpleVector(3, [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])),))
    dual = hodge_dual(z)
    assert len(dual.atoms) == 1
    assert length(dual) == pytest.approx(4.0)


def test_double_hodge_dual_returns_atoms_and_center():
    z = VirtualZonoid(
        3,
        2,
        (
            Atom(2, SimpleVector(3, [[1, 0, 0], [0, 2, 0]])),
            Atom(Fraction(1, 3), SimpleVector(3, [[1, 1, 0], [0, 1, 1]])),
        ),
        ExteriorElement(3, 2, {(0, 2): 1}),
    )
    twice = hodge_dual(hodge_dual(z))
    assert twice.degree == 2
    assert [a.weight for a in twice.atoms] == [a.weight for a in z.atoms]
    for before, after in zip(z.atoms, twice.atoms):
        original = expand(before.vector).coords
        restored = expand(after.vector).coords
        assert restored == original or restored == {k: -v for k, v in original.items()}
    assert twice.center.coords == z.center.coords
