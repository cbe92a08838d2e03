"""
Замкнутые формулы для шаров и сфер и кольцо H_E(S^n) = R[β]/(β^{n+1}).

Все константы точные: Γ в целых и полуцелых точках раскладывается в рациональное * π^{1/2}.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from src.errors import ComputationError, DegreeOverflowError, DimensionMismatchError
from src.pi_scalar import PiScalar


def gamma_half(two_x):
    """Γ(two_x / 2) для two_x >= 1."""
    if two_x < 1:
        raise ValueError(f"Γ определена здесь только для положительных полуцелых, получено {two_x}/2")
    if two_x % 2 == 0:
        return PiScalar(math.factorial(two_x // 2 - 1))
    k = two_x // 2
    # Γ(k + 1/2) = (2k)! / (4^k k!) * sqrt(π)
    return PiScalar(Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), Fraction(1, 2))


def kappa(n):
    """Объём единичного шара B_n (κ_0 = 1)."""
    if n < 0:
        raise ValueError(f"kappa: n должно быть >= 0, получено {n}")
    if n % 2 == 0:
        m = n // 2
        return PiScalar(Fraction(1, math.factorial(m)), m)
    m = (n - 1) // 2
    return PiScalar(Fraction(2 ** n * math.factorial(m), math.factorial(n)), m)


def kappa_gamma(n):
    """Тот же κ_n через 2π^{n/2} / (n Γ(n/2))."""
    if n == 0:
        return PiScalar(1)
    return PiScalar(2, Fraction(n, 2)) / (gamma_half(n) * n)


def ball_length(n):
    """ℓ(B_n) = 2 sqrt(π) Γ((n+1)/2) / Γ(n/2)."""
    if n < 1:
        raise ValueError(f"ball_length: n должно быть >= 1, получено {n}")
    return PiScalar(2, Fraction(1, 2)) * gamma_half(n + 1) / gamma_half(n)


def ball_wedge_factor(ambient_dim, d, i):
    if min(ambient_dim, d, i) < 0:
        raise ValueError("ball_wedge_factor: отрицательные аргументы")
    if d + i > ambient_dim:
        raise DegreeOverflowError(f"d + i = {d + i} больше размерности {ambient_dim}")
    free = ambient_dim - d
    ratio = Fraction(math.factorial(free), math.factorial(free - i))
    return kappa(free) / kappa(free - i) * ratio


def ball_wedge_length(ambient_dim, d, i, ell_z=1):
    """ℓ(Z∧B^{∧i}) для Z степени d в Λ^d R^N по длине ℓ(Z)."""
    factor = ball_wedge_factor(ambient_dim, d, i)
    if isinstance(ell_z, float):
        return float(factor) * ell_z
    return factor * PiScalar.of(ell_z)


def sphere_volume(n):
    """vol(S^n) = (n+1) κ_{n+1}."""
    return kappa(n + 1) * (n + 1)


def ball_table(ambient_dim):
    rows = []
    for i in range(ambient_dim + 1):
        rows.append({
            "i": i,
            "kappa": kappa(i),
            "ball_wedge_length": ball_wedge_length(ambient_dim, 0, i),
        })
    return rows


@dataclass(frozen=True)
class SphereRingElement:
    """Элемент R[β]/(β^{n+1}): коэффициенты (PiScalar) при β^0..β^n."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(PiScalar.of(c) for c in self.coeffs)
        if len(coeffs) > self.n + 1:
            if any(not c.is_zero for c in coeffs[self.n + 1:]):
                raise DegreeOverflowError(f"Ненулевые степени β выше {self.n}")
            coeffs = coeffs[: self.n + 1]
        coeffs = coeffs + (PiScalar(0),) * (self.n + 1 - len(coeffs))
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def one(cls, n):
        return cls(n, (PiScalar(1),))

    @classmethod
    def beta(cls, n, power=1):
        if power > n:
            return cls(n, ())
        return cls(n, (PiScalar(0),) * power + (PiScalar(1),))

    def _check(self, other):
        if other.n != self.n:
            raise DimensionMismatchError(f"Кольца S^{self.n} и S^{other.n} различны")

    def __add__(self, other):
        self._check(other)
        return SphereRingElement(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        if isinstance(other, SphereRingElement):
            self._check(other)
            out = [PiScalar(0)] * (self.n + 1)
            for i, a in enumerate(self.coeffs):
                for j, b in enumerate(other.coeffs):
                    if i + j <= self.n and not (a.is_zero or b.is_zero):
                        out[i + j] = out[i + j] + a * b
            return SphereRingElement(self.n, tuple(out))
        scalar = PiScalar.of(other)
        return SphereRingElement(self.n, tuple(c * scalar for c in self.coeffs))

    __rmul__ = __mul__

    def length(self):
        """ℓ по степеням: список PiScalar, степень d даёт coeff_d * ℓ(β^d)."""
        return [c * ball_wedge_length(self.n, 0, d) for d, c in enumerate(self.coeffs)]


def sphere_class(n, d, vol_ratio):
    """Класс подмногообразия коразмерности d с vol(Y)/vol(M) = vol_ratio."""
    if not 0 <= d <= n:
        raise DegreeOverflowError(f"Коразмерность {d} вне [0, {n}]")
    coeffs = [PiScalar(0)] * (n + 1)
    coeffs[d] = PiScalar.of(vol_ratio) / ball_wedge_length(n, 0, d)
    return SphereRingElement(n, tuple(coeffs))


def _ambient_volume(n, projective):
    volume = sphere_volume(n)
    return volume * Fraction(1, 2) if projective else volume


def sphere_expected_volume(n, codims, vol_ratios, projective=False):
    """E vol_{n-d}(g1 Y1 ∩ ... ∩ gs Ys) на S^n (или RP^n) как vol(M) * ℓ(произведения классов)."""
    codims = list(codims)
    vol_ratios = list(vol_ratios)
    if len(codims) != len(vol_ratios):
        raise DimensionMismatchError(
            f"Число коразмерностей ({len(codims)}) и отношений объёмов ({len(vol_ratios)}) различно"
        )
    if not codims:
        raise ComputationError("Нужен хотя бы один Y_i")
    total = sum(codims)
    if total > n:
        raise DegreeOverflowError(f"Сумма коразмерностей {total} больше n = {n}")
    if any(v < 0 for v in vol_ratios):
        raise ComputationError(f"Отношения объёмов должны быть >= 0: {vol_ratios}")
    product = SphereRingElement.one(n)
    for d, v in zip(codims, vol_ratios):
        product = product * sphere_class(n, d, v)
    return _ambient_volume(n, projective) * product.length()[total]


def sphere_expected_count(n, codims, vol_ratios, projective=False):
    if sum(codims) != n:
        raise ComputationError(f"Сумма коразмерностей {sum(codims)} должна равняться n = {n}")
    return sphere_expected_volume(n, codims, vol_ratios, projective=projective)
