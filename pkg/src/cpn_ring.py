"""
Точная модель центрированного вероятностного кольца пересечений H_E(CP^n).

Арифметика ведётся в перемасштабированном базисе t = π^{-2/3}β, s = π^{2/3}γ: в нём
длины мономов старшей степени равны n!·binom(2(n-a), n-a)·π^{-n/3}, и все линейные
системы целочисленные (матрицы Ганкеля). Степени π возвращаются только в длинах и через
общий множитель pi_exp элемента (β = π^{2/3}t, γ = π^{-2/3}s).

Базис степени d: s^j t^{d-2j}, j ∈ J(n, d) = {0 .. min(⌊d/2⌋, ⌊(2n-d)/2⌋)}.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import integrate

from src.errors import ComputationError, DimensionMismatchError, PiExponentMismatchError
from src.exterior import ExteriorElement
from src.linalg import bareiss_determinant, bareiss_solve, rational_rank
from src.pi_scalar import PiScalar
from src.sampling import haar_unitary_batch, run_trials
from src.sphere_ring import ball_wedge_length

logger = logging.getLogger(__name__)

T_PI = Fraction(-2, 3)   # t = π^{-2/3} β
S_PI = Fraction(2, 3)    # s = π^{2/3} γ


def index_range(n, d):
    if d < 0 or d > 2 * n:
        return range(0)
    return range(min(d // 2, (2 * n - d) // 2) + 1)


def dimension(n, d):
    if not 0 <= d <= 2 * n:
        raise ValueError(f"Степень {d} вне [0, {2 * n}]")
    return len(index_range(n, d))


def _top_entry(n, a):
    """binom(2(n-a), n-a): длина s^a t^{2n-2a} без общего множителя n!·π^{-n/3}."""
    if a < 0 or a > n:
        return 0
    return math.comb(2 * (n - a), n - a)


def pairing_matrix(n, d):
    """Спаривание длиной между базисами степеней d и 2n-d (строки - J(n, d))."""
    rows = index_range(n, d)
    cols = index_range(n, 2 * n - d)
    return [[Fraction(_top_entry(n, j + k)) for k in cols] for j in rows]


def hankel_matrix(n, d):
    if not 0 <= d <= n:
        raise ValueError(f"hankel_matrix: d = {d} вне [0, {n}]")
    return pairing_matrix(n, d)


def monomial_length(n, j, i):
    """
    ℓ(γ^j β^i) в H_E(CP^n).

    ℓ(γ^j) = π^{-j} n!/(n-j)!, а умножение на β^i - это wedge с шаром в касательном R^{2n}.
    """
    if j < 0 or i < 0:
        raise ValueError(f"Отрицательные показатели: j={j}, i={i}")
    if j > n or 2 * j + i > 2 * n:
        return PiScalar(0)
    ell_gamma = PiScalar(Fraction(math.factorial(n), math.factorial(n - j)), -j)
    return ball_wedge_length(2 * n, 2 * j, i, ell_gamma)


def rescaled_length(n, j, i):
    """ℓ(s^j t^i) = π^{(2j - 2i)/3} ℓ(γ^j β^i)."""
    return PiScalar.pi(S_PI * j + T_PI * i) * monomial_length(n, j, i)


@lru_cache(maxsize=None)
def _reduction(n, j, i):
    degree = 2 * j + i
    if degree > 2 * n:
        return ()
    basis = index_range(n, degree)
    if j in basis:
        return (((degree, j), Fraction(1)),)
    complement = index_range(n, 2 * n - degree)
    matrix = [[Fraction(_top_entry(n, b + k)) for b in basis] for k in complement]
    rhs = [Fraction(_top_entry(n, j + k)) for k in complement]
    solution = bareiss_solve(matrix, rhs)
    logger.debug(f"[DEBUG] n={n}: s^{j} t^{i} -> {solution}")
    return tuple(((degree, b), c) for b, c in zip(basis, solution) if c != 0)


@dataclass(frozen=True, eq=False)
class RingElement:
    """Σ coeffs[(d, j)]·s^j t^{d-2j}, умноженное на π^{pi_exp}."""

    n: int
    coeffs: dict = field(default_factory=dict)
    pi_exp: Fraction = Fraction(0)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n должно быть >= 1, получено {self.n}")
        clean = {}
        for (d, j), c in dict(self.coeffs).items():
            if j not in index_range(self.n, d):
                raise ComputationError(f"Индекс (d={d}, j={j}) вне J({self.n}, {d})")
            c = Fraction(c)
            if c != 0:
                clean[(d, j)] = clean.get((d, j), Fraction(0)) + c
        clean = {k: v for k, v in clean.items() if v != 0}
        object.__setattr__(self, "coeffs", clean)
        object.__setattr__(self, "pi_exp", Fraction(self.pi_exp) if clean else Fraction(0))

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def one(cls, n):
        return cls(n, {(0, 0): 1})

    @property
    def is_zero(self):
        return not self.coeffs

    def degrees(self):
        return sorted({d for d, _ in self.coeffs})

    def homogeneous_part(self, d):
        return RingElement(self.n, {k: v for k, v in self.coeffs.items() if k[0] == d}, self.pi_exp)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return (self.n, self.coeffs, self.pi_exp) == (other.n, other.coeffs, other.pi_exp)

    def _check_ring(self, other):
        if other.n != self.n:
            raise DimensionMismatchError(f"Элементы колец CP^{self.n} и CP^{other.n}")

    def __add__(self, other):
        self._check_ring(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_exp != other.pi_exp:
            raise PiExponentMismatchError(
                f"Сложение элементов с множителями π^{self.pi_exp} и π^{other.pi_exp}"
            )
        coeffs = dict(self.coeffs)
        for k, v in other.coeffs.items():
            coeffs[k] = coeffs.get(k, Fraction(0)) + v
        return RingElement(self.n, coeffs, self.pi_exp)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, c):
        if isinstance(c, PiScalar):
            return RingElement(self.n, {k: c.coeff * v for k, v in self.coeffs.items()}, self.pi_exp + c.pi_exp)
        c = Fraction(c)
        return RingElement(self.n, {k: c * v for k, v in self.coeffs.items()}, self.pi_exp)

    def __mul__(self, other):
        if isinstance(other, RingElement):
            return multiply(self, other)
        return self.scaled(other)

    __rmul__ = scaled

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = RingElement.one(self.n)
        for _ in range(k):
            result = multiply(result, self)
        return result

    def __str__(self):
        if self.is_zero:
            return "0"
        terms = [f"{c}·s^{j}t^{d - 2 * j}" for (d, j), c in sorted(self.coeffs.items())]
        prefix = f"π^({self.pi_exp})·" if self.pi_exp else ""
        return prefix + "(" + " + ".join(terms) + ")"


def reduce_monomial(n, j, i):
    """s^j t^i в базисе: решается система Ганкеля против дополнительных мономов степени 2n - d."""
    return RingElement(n, dict(_reduction(n, j, i)))


def evaluate_polynomial(n, poly):
    """Многочлен {(j, i): coeff} от (s, t), приведённый в кольце n."""
    result = RingElement.zero(n)
    for (j, i), c in poly.items():
        result = result + reduce_monomial(n, j, i).scaled(c)
    return result


def multiply(a, b):
    a._check_ring(b)
    if a.is_zero or b.is_zero:
        return RingElement.zero(a.n)
    coeffs = {}
    for (d1, j1), c1 in a.coeffs.items():
        for (d2, j2), c2 in b.coeffs.items():
            j = j1 + j2
            i = (d1 - 2 * j1) + (d2 - 2 * j2)
            for key, c in _reduction(a.n, j, i):
                coeffs[key] = coeffs.get(key, Fraction(0)) + c1 * c2 * c
    return RingElement(a.n, coeffs, a.pi_exp + b.pi_exp)


def t(n):
    return reduce_monomial(n, 0, 1)


def s(n):
    return reduce_monomial(n, 1, 0)


def beta(n):
    return RingElement(n, t(n).coeffs, -T_PI)


def gamma(n):
    return RingElement(n, s(n).coeffs, -S_PI)


def length_by_degree(e):
    """ℓ по однородным компонентам: {d: PiScalar}."""
    out = {}
    for d in e.degrees():
        total = PiScalar(0)
        for (_, j), c in e.homogeneous_part(d).coeffs.items():
            total = total + rescaled_length(e.n, j, d - 2 * j) * c
        out[d] = total * PiScalar.pi(e.pi_exp)
    return out


def length(e):
    """
    ℓ(e) одним PiScalar.

    Для неоднородных элементов с разными показателями π сложение невозможно - тогда
    PiExponentMismatchError, и нужен length_by_degree.
    """
    total = PiScalar(0)
    for value in length_by_degree(e).values():
        total = total + value
    return total


def cpn_volume(n):
    """vol(CP^n) = π^n / n! (метрика Фубини-Штуди)."""
    return PiScalar(Fraction(1, math.factorial(n)), n)


@dataclass(frozen=True)
class Relation:
    n: int
    degree: int
    ts: dict
    beta_gamma: dict

    def vanishes_in(self, m):
        return evaluate_polynomial(m, self.ts).is_zero


def relation(n):
    """
    F_n: для n = 2p-1 - приведение s^p, для n = 2p - приведение s^p t.

    Старший член нормирован: γ^p (или γ^p β) с коэффициентом 1; в (β, γ) коэффициент при
    γ^j β^i равен c·π^{2(j - p)}.
    """
    if n < 1:
        raise ValueError(f"n должно быть >= 1, получено {n}")
    p = (n + 1) // 2
    lead_i = 0 if n % 2 else 1
    degree = 2 * p + lead_i
    ts = {(p, lead_i): Fraction(1)}
    for (d, j), c in _reduction(n, p, lead_i):
        ts[(j, d - 2 * j)] = ts.get((j, d - 2 * j), Fraction(0)) - c
    ts = {k: v for k, v in ts.items() if v != 0}
    beta_gamma = {(j, i): PiScalar(c, 2 * (j - p)) for (j, i), c in ts.items()}
    return Relation(n, degree, ts, beta_gamma)


def relations(n):
    """(F_n, F_{n+1}) - образующие идеала соотношений H_E(CP^n)."""
    return relation(n), relation(n + 1)


def lefschetz_matrix(n, d):
    """Матрица x -> t^{2(n-d)} x из степени d в степень 2n-d (строки - базис образа)."""
    if not 0 <= d <= n:
        raise ValueError(f"lefschetz_matrix: d = {d} вне [0, {n}]")
    power = t(n) ** (2 * (n - d))
    target = index_range(n, 2 * n - d)
    columns = []
    for j in index_range(n, d):
        image = multiply(RingElement(n, {(d, j): 1}), power)
        columns.append([image.coeffs.get((2 * n - d, k), Fraction(0)) for k in target])
    return [list(row) for row in zip(*columns)]


def hard_lefschetz(n, d):
    return bareiss_determinant(lefschetz_matrix(n, d)) != 0


def primitive_dims(n, d):
    """dim P_n^d как размерность ядра x -> t^{2(n-d)+1} x на степени d."""
    if not 0 <= d <= n:
        raise ValueError(f"primitive_dims: d = {d} вне [0, {n}]")
    source = index_range(n, d)
    target_degree = 2 * n - d + 1
    if target_degree > 2 * n:
        return len(source)
    power = t(n) ** (2 * (n - d) + 1)
    target = index_range(n, target_degree)
    rows = []
    for k in target:
        row = []
        for j in source:
            image = multiply(RingElement(n, {(d, j): 1}), power)
            row.append(image.coeffs.get((target_degree, k), Fraction(0)))
        rows.append(row)
    return len(source) - rational_rank(rows)


def class_codim2_coefficients(n, d_x, delta_x):
    """(x_R, x_C): x_R = -n/(2π²(n-1))·Δ_X, x_C = d_X + n/(n-1)·Δ_X."""
    if n < 2:
        raise ComputationError(f"Классы коразмерности 2 определены для n >= 2, получено {n}")
    d_x, delta_x = Fraction(d_x), Fraction(delta_x)
    x_real = PiScalar(-Fraction(n, 2 * (n - 1)) * delta_x, -2)
    x_complex = d_x + Fraction(n, n - 1) * delta_x
    return x_real, x_complex


def class_codim2(n, d_x, delta_x):
    """x_R β² + x_C γ = π^{-2/3}(-nΔ/(2(n-1)) t² + x_C s)."""
    x_real, x_complex = class_codim2_coefficients(n, d_x, delta_x)
    coeffs = {(2, 0): x_real.coeff, (2, 1): x_complex}
    return RingElement(n, coeffs, -S_PI)


def self_intersection_codim2(n, d_x, delta_x):
    """E#(g1 X ∩ ... ∩ gn X) в замкнутой форме."""
    if n < 2:
        raise ComputationError(f"n должно быть >= 2, получено {n}")
    d_x, delta_x = Fraction(d_x), Fraction(delta_x)
    ratio = Fraction(n, 2 * (n - 1))
    total = Fraction(0)
    for k in range(n // 2 + 1):
        total += (math.comb(n, 2 * k) * math.comb(2 * k, k) * ratio ** (2 * k)
                  * d_x ** (n - 2 * k) * delta_x ** (2 * k))
    return total


def self_intersection_via_ring(n, d_x, delta_x):
    """Тот же счёт как vol(CP^n)·ℓ(α^n) через умножение в кольце."""
    alpha = class_codim2(n, d_x, delta_x)
    return (cpn_volume(n) * length(alpha ** n)).to_fraction()


def f_k(k):
    if k < 0:
        raise ValueError(f"k должно быть >= 0, получено {k}")
    return sum(math.comb(k, j) * math.comb(2 * j, j) * (-1) ** j * 2 ** (k - j) for j in range(k + 1))


def intersection_number(alpha, j):
    """ℓ_j(α) = ℓ(α·γ^j)."""
    return length(multiply(alpha, gamma(alpha.n) ** j))


def degree_class(n, j, deg):
    """Класс комплексного подмногообразия коразмерности j и степени deg: deg·γ^j."""
    return (gamma(n) ** j).scaled(deg)


def hypersurface_class(n, vol_ratio):
    """Класс вещественной гиперповерхности: vol(Y)/vol(CP^n) · β/ℓ(β)."""
    return beta(n).scaled(PiScalar.of(vol_ratio) / monomial_length(n, 0, 1))


def expected_hypersurface_count(n, vol_ratios):
    vol_ratios = list(vol_ratios)
    if len(vol_ratios) != 2 * n:
        raise DimensionMismatchError(f"Нужно {2 * n} гиперповерхностей, получено {len(vol_ratios)}")
    product = RingElement.one(n)
    for v in vol_ratios:
        product = multiply(product, hypersurface_class(n, v))
    return cpn_volume(n) * length(product)


def tasaki_kernel_d2(n, x, y):
    """K_n²(x, y) = ¼((1+x)(1+y) + n/(n-1)(1-x)(1-y)), x = cos²θ."""
    if n < 2:
        raise ComputationError(f"Ядро Тасаки определено для n >= 2, получено {n}")
    for v in (x, y):
        if not 0 <= v <= 1:
            raise ValueError(f"x, y должны лежать в [0, 1], получено {v}")
    ratio = Fraction(n, n - 1)
    if isinstance(x, float) or isinstance(y, float):
        ratio = float(ratio)
    return ((1 + x) * (1 + y) + ratio * (1 - x) * (1 - y)) / 4


def tasaki_plane(n, x):
    """Факторы V_x = span{e1, cosθ·√-1 e1 + sinθ·e2} в R^{2n}, столбцы матрицы 2n x 2."""
    if n < 2:
        raise ComputationError(f"V_x требует n >= 2, получено {n}")
    frame = np.zeros((2 * n, 2))
    frame[0, 0] = 1.0
    frame[1, 1] = math.sqrt(float(x))
    frame[2, 1] = math.sqrt(1.0 - float(x))
    return frame


def mc_tasaki_kernel_d2(n, x, y, samples=None, seed=None, workers=None, stream=0):
    """
    Оценка ядра как n·E|<hV_x, V_y>|, h Haar на U(n).

    Множитель n - нормировка K_n² (при x = y = 1 матожидание равно 1/n).
    """
    tasaki_kernel_d2(n, x, y)
    vx = tasaki_plane(n, x)
    vy = tasaki_plane(n, y)

    def evaluate(rngs, count):
        h = haar_unitary_batch(n, rngs[0], count)
        moved = h @ vx
        return n * np.abs(np.linalg.det(np.swapaxes(moved, 1, 2) @ vy))

    return run_trials(evaluate, 1, samples, seed, workers, stream)


def omega_element(n, k):
    """ω^{∧k}/k! в R^{2n}, ω = Σ e_j ∧ √-1 e_j (индексы 2j и 2j+1)."""
    if not 0 <= k <= n:
        raise ValueError(f"omega_element: k = {k} вне [0, {n}]")
    omega = ExteriorElement(2 * n, 2, {(2 * j, 2 * j + 1): 1 for j in range(n)})
    result = ExteriorElement.scalar(2 * n)
    for _ in range(k):
        result = result.wedge(omega)
    return result.scaled(Fraction(1, math.factorial(k)))


def omega_norm_sq(n, k):
    return int(omega_element(n, k).norm_sq())


def beta_moment(n):
    """M_n = Π_{r<n} (½ + r)/(r + 1) - моменты Beta(½, ½); равно 4^{-n} binom(2n, n)."""
    value = Fraction(1)
    for r in range(n):
        value *= (Fraction(1, 2) + r) / (r + 1)
    return value


def central_moment_density(x):
    """p(x) = 1/(π sqrt(x(4 - x))) на (0, 4), вне интервала 0."""
    if not 0.0 < x < 4.0:
        return 0.0
    return 1.0 / (math.pi * math.sqrt(x * (4.0 - x)))


def central_moment_quadrature(n):
    """∫_0^4 x^n p(x) dx численно; замена x = 4 sin²θ снимает особенности на концах."""

    def integrand(theta):
        x = 4.0 * math.sin(theta) ** 2
        return x ** n * central_moment_density(x) * 8.0 * math.sin(theta) * math.cos(theta)

    value, _ = integrate.quad(integrand, 0.0, math.pi / 2, epsabs=0.0, epsrel=1e-12, limit=200)
    return value
