"""
Сидированные генераторы и оценки Монте-Карло для сэмплерных зоноидов.

Схема случайности: счётчиковый генератор Philox, подпоток для каждого
(stream, block_index, slot) через SeedSequence(seed, spawn_key=...). Блоки фиксированного
размера (MC_BLOCK_SIZE) считаются независимо и склеиваются по порядку, поэтому результат
не зависит от числа потоков. Гауссовы величины - numpy standard_normal (ziggurat).
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

import config
from src.errors import ComputationError, ContainmentError, DegreeOverflowError, DimensionMismatchError
from src.exterior import SimpleVector
from src.sphere_ring import ball_length

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    samples: int
    seed: int
    max_value: Optional[float] = None

    def ci(self, z=None):
        z = config.CI_Z if z is None else z
        if z <= 0:
            raise ValueError(f"z должен быть > 0, получено {z}")
        return self.mean - z * self.std_error, self.mean + z * self.std_error

    def contains(self, value, z=None):
        low, high = self.ci(z)
        return low <= value <= high


@dataclass(frozen=True)
class RealifiedUnitary:
    n: int
    matrix: np.ndarray

    def is_orthogonal(self, tol=1e-12):
        m = self.matrix
        return bool(np.allclose(m.T @ m, np.eye(2 * self.n), atol=tol))

    def commutes_with_j(self, tol=1e-12):
        j = complex_structure(self.n)
        return bool(np.allclose(self.matrix @ j, j @ self.matrix, atol=tol))


@dataclass(frozen=True)
class SamplerZonoid:
    """scale·K(ξ), где draw(rng, count) возвращает массив факторов (count, degree, N)."""

    scale: float
    degree: int
    ambient_dim: int
    draw: Callable
    name: str = ""

    def __post_init__(self):
        if self.scale < 0:
            raise ComputationError(f"scale должен быть >= 0, получено {self.scale}")


def substream(seed, *key):
    if seed < 0:
        raise ValueError(f"seed должен быть >= 0, получено {seed}")
    sequence = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(sequence))


def run_trials(evaluate, slots, samples=None, seed=None, workers=None, stream=0, block_size=None):
    """
    Ядро всех оценок: блоки испытаний с собственными подпотоками на каждый слот.

    Args:
        evaluate: (rngs, count) -> массив значений длины count; rngs[i] - подпоток слота i
        slots: сколько независимых подпотоков нужно одному испытанию
        samples: число испытаний
        seed: сид
        workers: число потоков (на результат не влияет)
        stream: номер независимого семейства подпотоков при одном seed

    Returns:
        Estimate
    """
    samples = config.MC_SAMPLES if samples is None else int(samples)
    seed = config.ZONOID_SEED if seed is None else int(seed)
    workers = config.MC_WORKERS if workers is None else int(workers)
    block_size = config.MC_BLOCK_SIZE if block_size is None else int(block_size)
    if samples < 1:
        raise ValueError(f"samples должен быть >= 1, получено {samples}")
    blocks = math.ceil(samples / block_size)

    def _block(b):
        rngs = [substream(seed, stream, b, s) for s in range(slots)]
        count = min(block_size, samples - b * block_size)
        values = np.asarray(evaluate(rngs, count), dtype=float)
        logger.debug(f"[DEBUG] блок {b + 1}/{blocks}: {count} испытаний")
        return values

    logger.info(f"[LOG] Монте-Карло: samples={samples}, seed={seed}, stream={stream}, workers={workers}")
    if workers > 1 and blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_block, range(blocks)))
    else:
        parts = [_block(b) for b in range(blocks)]
    values = np.concatenate(parts)
    std = float(values.std(ddof=1)) if samples > 1 else 0.0
    return Estimate(
        mean=float(values.mean()),
        std_error=std / math.sqrt(samples),
        samples=samples,
        seed=seed,
        max_value=float(values.max()),
    )


def haar_orthogonal(n, rng, size=None):
    """Haar на O(n): QR гауссовой матрицы, столбец j умножается на sign(R_jj), sign(0) := +1."""
    if n < 1:
        raise ValueError(f"n должно быть >= 1, получено {n}")
    shape = (n, n) if size is None else (size, n, n)
    q, r = np.linalg.qr(rng.standard_normal(shape))
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    signs = np.where(diag < 0, -1.0, 1.0)
    return q * signs[..., None, :]


def complex_structure(n):
    """J в координатах (Re z1, Im z1, Re z2, ...): блоки [[0, -1], [1, 0]]."""
    return np.kron(np.eye(n), np.array([[0.0, -1.0], [1.0, 0.0]]))


def realify(u):
    """Комплексная матрица (..., n, n) -> вещественная (..., 2n, 2n)."""
    u = np.asarray(u)
    n = u.shape[-1]
    out = np.empty(u.shape[:-2] + (2 * n, 2 * n))
    out[..., 0::2, 0::2] = u.real
    out[..., 0::2, 1::2] = -u.imag
    out[..., 1::2, 0::2] = u.imag
    out[..., 1::2, 1::2] = u.real
    return out


def _haar_unitary_complex(n, rng, size=None):
    shape = (n, n) if size is None else (size, n, n)
    z = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    absd = np.abs(diag)
    phases = np.where(absd == 0, 1.0 + 0j, diag / np.where(absd == 0, 1.0, absd))
    return q * phases[..., None, :]


def haar_unitary(n, rng):
    if n < 1:
        raise ValueError(f"n должно быть >= 1, получено {n}")
    return RealifiedUnitary(n, realify(_haar_unitary_complex(n, rng)))


def haar_unitary_batch(n, rng, size):
    return realify(_haar_unitary_complex(n, rng, size))


def _single(sampler, rng):
    factors = sampler.draw(rng, 1)[0]
    return SimpleVector(sampler.ambient_dim, [list(map(float, row)) for row in factors])


def gaussian_ball(ambient_dim):
    """B_N = sqrt(2π)·K(ξ), ξ стандартный гауссов вектор."""
    return SamplerZonoid(
        scale=math.sqrt(2 * math.pi),
        degree=1,
        ambient_dim=ambient_dim,
        draw=lambda rng, count: rng.standard_normal((count, 1, ambient_dim)),
        name=f"gaussian_ball({ambient_dim})",
    )


def _sphere_draw(ambient_dim):
    def draw(rng, count):
        x = rng.standard_normal((count, 1, ambient_dim))
        return x / np.linalg.norm(x, axis=-1, keepdims=True)
    return draw


def sphere_sampler(ambient_dim, scale=1.0):
    return SamplerZonoid(float(scale), 1, ambient_dim, _sphere_draw(ambient_dim), f"sphere({ambient_dim})")


def sphere_ball(ambient_dim):
    """B_N через равномерный вектор на сфере, масштаб ℓ(B_N)."""
    return sphere_sampler(ambient_dim, scale=float(ball_length(ambient_dim)))


def complex_line_sampler(n, scale=None):
    """γ_n = (n/π)·K(g(e1∧√-1 e1)), g Haar на U(n)."""
    scale = n / math.pi if scale is None else scale

    def draw(rng, count):
        m = haar_unitary_batch(n, rng, count)
        return np.stack([m[:, :, 0], m[:, :, 1]], axis=1)

    return SamplerZonoid(float(scale), 2, 2 * n, draw, f"complex_line({n})")


def sample_complex_line(n, rng):
    return _single(complex_line_sampler(n), rng)


def schubert_sampler(diagram, k, m, scale=1.0):
    """∧_{(i,j)∈λ} (Q e_i ⊗ R f_j), (Q, R) Haar на O(k)×O(m); e_i⊗f_j имеет индекс i*m + j."""
    if not diagram.fits(k, m):
        raise ContainmentError(f"Диаграмма {diagram} не помещается в прямоугольник {k}x{m}")
    boxes = diagram.boxes()
    degree = len(boxes)

    def draw(rng, count):
        q = haar_orthogonal(k, rng, count)
        r = haar_orthogonal(m, rng, count)
        out = np.empty((count, degree, k * m))
        for b, (i, j) in enumerate(boxes):
            out[:, b, :] = np.einsum("sa,sb->sab", q[:, :, i - 1], r[:, :, j - 1]).reshape(count, k * m)
        return out

    return SamplerZonoid(float(scale), degree, k * m, draw, f"schubert({diagram}, {k}, {m})")


def sample_schubert(diagram, k, m, rng):
    return _single(schubert_sampler(diagram, k, m), rng)


def atom_sampler(z):
    """Дискретный зоноид как сэмплер: v_i с вероятностью w_i/W, масштаб W = Σw_i."""
    if not z.is_genuine:
        raise ComputationError("atom_sampler: веса должны быть >= 0")
    weights = np.array([float(a.weight) for a in z.atoms], dtype=float)
    total = float(weights.sum()) if len(weights) else 0.0
    n, d = z.ambient_dim, z.degree
    if total == 0.0:
        return SamplerZonoid(0.0, d, n, lambda rng, count: np.zeros((count, d, n)), "atoms(0)")
    vectors = np.stack([a.vector.to_array() for a in z.atoms])
    probs = weights / total

    def draw(rng, count):
        return vectors[rng.choice(len(probs), size=count, p=probs)]

    return SamplerZonoid(total, d, n, draw, f"atoms({len(probs)})")


def fixed_sampler(vector, scale=1.0):
    f = vector.to_array()
    return SamplerZonoid(
        float(scale), vector.degree, vector.ambient_dim,
        lambda rng, count: np.broadcast_to(f, (count,) + f.shape).copy(),
        "fixed",
    )


def batch_wedge_norm(x):
    """‖v1∧...∧vD‖ для массива (S, D, N) через |Π diag R| из QR (точнее, чем sqrt(det Gram))."""
    count, degree, _ = x.shape
    if degree == 0:
        return np.ones(count)
    _, r = np.linalg.qr(np.swapaxes(x, 1, 2))
    return np.abs(np.prod(np.diagonal(r, axis1=-2, axis2=-1), axis=-1))


def _check_common_space(zs):
    if not zs:
        raise DimensionMismatchError("Пустой список сэмплеров")
    n = zs[0].ambient_dim
    if any(z.ambient_dim != n for z in zs):
        raise DimensionMismatchError("Сэмплеры из пространств разной размерности")
    total = sum(z.degree for z in zs)
    if total > n:
        raise DegreeOverflowError(f"Суммарная степень {total} больше размерности {n}")
    return n, total


def mc_wedge_length(zs, samples=None, seed=None, workers=None, stream=0):
    """ℓ(Z1∧...∧Zs) ≈ Π scale_i · E‖ξ1∧...∧ξs‖ с независимыми подпотоками на каждый Z_i."""
    zs = list(zs)
    _check_common_space(zs)
    scale = float(np.prod([z.scale for z in zs]))
    if scale == 0.0:
        samples = config.MC_SAMPLES if samples is None else samples
        seed = config.ZONOID_SEED if seed is None else seed
        return Estimate(0.0, 0.0, samples, seed, 0.0)

    def evaluate(rngs, count):
        x = np.concatenate([z.draw(rng, count) for z, rng in zip(zs, rngs)], axis=1)
        return scale * batch_wedge_norm(x)

    return run_trials(evaluate, len(zs), samples, seed, workers, stream)


def mc_length(z, samples=None, seed=None, workers=None, stream=0):
    return mc_wedge_length([z], samples, seed, workers, stream)


def mc_pairing(a, b, samples=None, seed=None, workers=None, stream=0):
    """<K(ξ), K(ζ)> ≈ scale·scale'·E|<ξ, ζ>|."""
    if a.degree != b.degree or a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(
            f"mc_pairing: степени/размерности ({a.degree}, {a.ambient_dim}) и ({b.degree}, {b.ambient_dim})"
        )
    scale = a.scale * b.scale

    def evaluate(rngs, count):
        x = a.draw(rngs[0], count)
        y = b.draw(rngs[1], count)
        if a.degree == 0:
            return np.full(count, scale)
        return scale * np.abs(np.linalg.det(x @ np.swapaxes(y, 1, 2)))

    return run_trials(evaluate, 2, samples, seed, workers, stream)
