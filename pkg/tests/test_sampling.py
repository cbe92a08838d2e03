import math
from fractions import Fraction

import numpy as np
import pytest
from scipy import stats

import config
from src.errors import DegreeOverflowError
from src.exterior import SimpleVector, span_rank, wedge_norm
from src.sampling import (
    Estimate,
    SamplerZonoid,
    atom_sampler,
    batch_wedge_norm,
    complex_line_sampler,
    complex_structure,
    fixed_sampler,
    gaussian_ball,
    haar_orthogonal,
    haar_unitary,
    haar_unitary_batch,
    mc_length,
    mc_pairing,
    mc_wedge_length,
    sample_complex_line,
    sample_schubert,
    schubert_sampler,
    sphere_ball,
    sphere_sampler,
    substream,
)
from src.schubert import BOX, COLUMN, ROW
from src.zonoid import VirtualZonoid, length, wedge


def test_substream_is_deterministic():
    a = substream(7, 0, 3, 1).standard_normal(5)
    b = substream(7, 0, 3, 1).standard_normal(5)
    c = substream(7, 0, 3, 2).standard_normal(5)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        substream(-1, 0)


def test_result_independent_of_workers(monkeypatch):
    monkeypatch.setattr(config, "MC_BLOCK_SIZE", 500)
    one = mc_length(gaussian_ball(3), samples=3000, seed=11, workers=1)
    four = mc_length(gaussian_ball(3), samples=3000, seed=11, workers=4)
    assert one == four


def test_estimate_ci():
    e = Estimate(mean=1.0, std_error=0.1, samples=10, seed=0)
    assert e.ci(2.0) == pytest.approx((0.8, 1.2))
    assert e.contains(1.25, 3.0)
    assert not e.contains(1.25, 2.0)
    with pytest.raises(ValueError):
        e.ci(0)


def test_haar_orthogonal_and_unitary():
    rng = substream(3, 0)
    q = haar_orthogonal(4, rng, size=10)
    for m in q:
        assert np.allclose(m.T @ m, np.eye(4), atol=1e-12)
    u = haar_unitary(3, rng)
    assert u.is_orthogonal()
    assert u.commutes_with_j()
    j = complex_structure(3)
    assert np.allclose(j @ j, -np.eye(6))


def test_batch_wedge_norm():
    x = np.array([[[3.0, 4.0]], [[1.0, 0.0]]])
    assert batch_wedge_norm(x) == pytest.approx([5.0, 1.0])
    y = np.array([[[1.0, 2.0, 0.0], [2.0, 4.0, 0.0]]])
    assert batch_wedge_norm(y)[0] < 1e-12


def test_gaussian_ball_length():
    est = mc_length(gaussian_ball(3), samples=20000, seed=1)
    assert est.contains(4.0, 4.0)


def test_sphere_ball_has_no_variance():
    est = mc_length(sphere_ball(4), samples=100, seed=1)
    # ℓ(B_4) = 2 sqrt(π) Γ(5/2) / Γ(2) = 3π/2
    assert est.mean == pytest.approx(1.5 * math.pi)
    assert est.std_error < 1e-12


def test_complex_line_length():
    est = mc_length(complex_line_sampler(3), samples=200, seed=2)
    assert est.mean == pytest.approx(3 / math.pi)


def test_atom_sampler_matches_exact_length():
    z = VirtualZonoid.from_generators([[1, 0], [0, 1]])
    est = mc_length(atom_sampler(z), samples=500, seed=4)
    assert est.mean == pytest.approx(2.0)


def test_mc_pairing_of_fixed_vectors():
    a = fixed_sampler(SimpleVector(2, [[1, 0]]))
    b = fixed_sampler(SimpleVector(2, [[3, 4]]), scale=2.0)
    est = mc_pairing(a, b, samples=10, seed=0)
    assert est.mean == pytest.approx(6.0)


def test_degree_overflow():
    with pytest.raises(DegreeOverflowError):
        mc_wedge_length([gaussian_ball(2)] * 3, samples=10)


def unit_gaussian(ambient_dim):
    return SamplerZonoid(1.0, 1, ambient_dim, gaussian_ball(ambient_dim).draw, "gauss")


def test_haar_orthogonal_n1_signs():
    q = haar_orthogonal(1, substream(5, 0), size=10_000).ravel()
    assert np.allclose(np.abs(q), 1.0)
    assert abs(np.mean(q > 0) - 0.5) < 3 * 0.5 / math.sqrt(len(q))


def test_haar_first_column_second_moment():
    n = 4
    q = haar_orthogonal(n, substream(6, 0), size=50_000)
    u = np.array([1.0, 2.0, 2.0, 0.0]) / 3.0
    values = (q[:, :, 0] @ u) ** 2
    se = values.std(ddof=1) / math.sqrt(len(values))
    assert abs(values.mean() - 1 / n) < 3 * se


def test_haar_invariance_ks():
    n = 3
    u = np.array([1.0, 0.0, 0.0])
    v = np.array([1.0, 1.0, 1.0]) / math.sqrt(3.0)
    first = haar_orthogonal(n, substream(8, 0), size=100_000)[:, :, 0] @ u
    second = haar_orthogonal(n, substream(8, 1), size=100_000)[:, :, 0] @ v
    assert stats.ks_2samp(first, second).pvalue > 0.01


def test_unitary_circle_angle_is_uniform():
    m = haar_unitary_batch(1, substream(9, 0), 20_000)
    angles = np.arctan2(m[:, 1, 0], m[:, 0, 0])
    assert np.allclose(m[:, 0, 0] ** 2 + m[:, 1, 0] ** 2, 1.0)
    assert stats.kstest(angles, "uniform", args=(-math.pi, 2 * math.pi)).pvalue > 0.01


def test_sample_complex_line():
    rng = substream(10, 0)
    line = sample_complex_line(1, rng)
    assert line.degree == 2
    assert wedge_norm([line]) == pytest.approx(1.0)
    line = sample_complex_line(3, rng)
    first, second = (np.array(f, dtype=float) for f in line.factors)
    assert np.allclose(complex_structure(3) @ first, second, atol=1e-12)
    assert wedge_norm([line]) == pytest.approx(1.0)


def test_complex_line_with_two_gaussians():
    zs = [complex_line_sampler(2, scale=1.0), unit_gaussian(4), unit_gaussian(4)]
    est = mc_wedge_length(zs, samples=50_000, seed=12)
    assert est.contains(1.0, 3.0)


def test_complex_line_with_two_balls():
    zs = [complex_line_sampler(2), gaussian_ball(4), gaussian_ball(4)]
    est = mc_wedge_length(zs, samples=50_000, seed=13)
    assert est.contains(4.0, 3.0)


def test_two_balls_in_plane():
    est = mc_wedge_length([gaussian_ball(2), gaussian_ball(2)], samples=50_000, seed=14)
    assert est.contains(2 * math.pi, 3.0)


def test_zero_scale_gives_zero():
    est = mc_wedge_length([sphere_sampler(3, scale=0.0), gaussian_ball(3)], samples=10, seed=0)
    assert est.mean == 0.0


def test_sample_schubert_box():
    rng = substream(15, 0)
    v = sample_schubert(BOX, 2, 2, rng)
    assert v.degree == 1
    assert wedge_norm([v]) == pytest.approx(1.0)
    matrix = np.array(v.factors[0], dtype=float).reshape(2, 2)
    assert abs(np.linalg.det(matrix)) < 1e-12
    samples = [sample_schubert(BOX, 2, 2, rng) for _ in range(200)]
    assert span_rank(samples) == 4


def test_sphere_pairing():
    est = mc_pairing(sphere_sampler(2), sphere_sampler(2), samples=50_000, seed=16)
    assert est.contains(2 / math.pi, 3.0)


def test_orthogonal_fixed_vectors_pair_to_zero():
    a = fixed_sampler(SimpleVector(2, [[0, 1]]))
    b = fixed_sampler(SimpleVector(2, [[1, 0]]))
    assert mc_pairing(a, b, samples=10, seed=0).mean == 0.0


def test_non_dual_schubert_pair_vanishes_every_sample():
    zs = [schubert_sampler(ROW, 2, 2), schubert_sampler(COLUMN, 2, 2)]
    est = mc_wedge_length(zs, samples=5_000, seed=17)
    assert est.max_value < 1e-10


def test_atom_samplers_match_exact_wedge_length():
    a = VirtualZonoid.from_generators([[1, 0, 0], [0, 2, 1], [1, 1, 1]])
    b = VirtualZonoid.from_generators([[0, 1, 0], [1, 0, 2]], weights=[2, Fraction(1, 2)])
    c = VirtualZonoid.from_generators([[0, 0, 1], [1, 1, 0]])
    for zs in ([a, b], [a, b, c]):
        exact = float(length(wedge(zs)))
        est = mc_wedge_length([atom_sampler(z) for z in zs], samples=60_000, seed=18)
        assert est.contains(exact, 4.0)
