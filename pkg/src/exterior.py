"""
Внешняя алгебра над евклидовым R^N.

Простые векторы v1∧...∧vd хранятся списком факторов (SimpleVector), общие элементы -
разреженными координатами по базису e_I, I = возрастающий набор индексов (ExteriorElement).
Индексы внутри библиотеки с нуля; в JSON они сдвигаются на единицу (см. serialization).

Точный режим: все числа int/Fraction, определители считаются методом Bareiss.
Float-режим: numpy. Смешивать режимы в одной операции нельзя (ExactnessError).
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from numbers import Integral, Real

import numpy as np

import config
from src.errors import (
    CoordinateCapError,
    DegreeOverflowError,
    DimensionMismatchError,
    ExactnessError,
)
from src.linalg import bareiss_determinant


def normalize_scalar(x):
    if isinstance(x, bool):
        raise ExactnessError(f"bool не является скаляром: {x!r}")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, Integral):
        return Fraction(int(x))
    if isinstance(x, Real):
        return float(x)
    raise ExactnessError(f"Неподдерживаемый скаляр: {x!r}")


def is_exact_scalar(x):
    return isinstance(x, Fraction)


def _mode_of(values):
    """True - точный режим, False - float, None - нет значений (нейтрально)."""
    mode = None
    for v in values:
        exact = is_exact_scalar(v)
        if mode is None:
            mode = exact
        elif mode != exact:
            raise ExactnessError("Смешаны точные (Fraction) и float значения")
    return mode


def common_mode(modes):
    result = None
    for m in modes:
        if m is None:
            continue
        if result is None:
            result = m
        elif result != m:
            raise ExactnessError("Операция смешивает точные и float объекты")
    return True if result is None else result


def permutation_sign(seq):
    inversions = 0
    items = list(seq)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            if items[i] > items[j]:
                inversions += 1
    return -1 if inversions % 2 else 1


def sort_with_sign(indices):
    """(отсортированный кортеж, знак) или (None, 0), если индекс повторяется."""
    indices = tuple(indices)
    if len(set(indices)) != len(indices):
        return None, 0
    return tuple(sorted(indices)), permutation_sign(indices)


def check_coordinate_cap(ambient_dim, degree):
    count = math.comb(ambient_dim, degree)
    if count > config.COORDINATE_CAP:
        raise CoordinateCapError(
            f"binom({ambient_dim}, {degree}) = {count} координат превышает лимит {config.COORDINATE_CAP}"
        )
    return count


@dataclass(frozen=True)
class SimpleVector:
    """Разложимый элемент v1∧...∧vd; d = 0 означает скаляр 1."""

    ambient_dim: int
    factors: tuple = ()

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise DimensionMismatchError(f"ambient_dim должен быть >= 1, получено {self.ambient_dim}")
        rows = tuple(tuple(normalize_scalar(x) for x in f) for f in self.factors)
        for row in rows:
            if len(row) != self.ambient_dim:
                raise DimensionMismatchError(
                    f"Фактор длины {len(row)} в пространстве размерности {self.ambient_dim}"
                )
        if len(rows) > self.ambient_dim:
            raise DegreeOverflowError(f"Степень {len(rows)} больше размерности {self.ambient_dim}")
        _mode_of(x for row in rows for x in row)
        object.__setattr__(self, "factors", rows)

    @classmethod
    def scalar(cls, ambient_dim):
        return cls(ambient_dim, ())

    @classmethod
    def basis(cls, ambient_dim, *indices):
        rows = [[int(i == j) for j in range(ambient_dim)] for i in indices]
        return cls(ambient_dim, rows)

    @property
    def degree(self):
        return len(self.factors)

    @property
    def mode(self):
        return _mode_of(x for row in self.factors for x in row)

    @property
    def is_exact(self):
        return self.mode is not False

    def to_array(self):
        return np.array([[float(x) for x in row] for row in self.factors], dtype=float).reshape(
            self.degree, self.ambient_dim
        )

    def wedge(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError(f"Размерности {self.ambient_dim} и {other.ambient_dim} различны")
        if self.degree + other.degree > self.ambient_dim:
            raise DegreeOverflowError(
                f"Суммарная степень {self.degree + other.degree} больше {self.ambient_dim}"
            )
        common_mode([self.mode, other.mode])
        return SimpleVector(self.ambient_dim, self.factors + other.factors)

    def scaled(self, c):
        """Умножает первый фактор на c (для скаляра степени 0 не определено)."""
        if self.degree == 0:
            raise DegreeOverflowError("Скалярный простой вектор нельзя масштабировать фактором")
        c = normalize_scalar(c)
        common_mode([self.mode, is_exact_scalar(c)])
        first = tuple(c * x for x in self.factors[0])
        return SimpleVector(self.ambient_dim, (first,) + self.factors[1:])


def _concat(parts):
    if not parts:
        raise DimensionMismatchError("Пустой список частей")
    n = parts[0].ambient_dim
    for p in parts:
        if p.ambient_dim != n:
            raise DimensionMismatchError(f"Размерности {n} и {p.ambient_dim} различны")
    total = sum(p.degree for p in parts)
    if total > n:
        raise DegreeOverflowError(f"Суммарная степень {total} больше размерности {n}")
    exact = common_mode(p.mode for p in parts)
    rows = tuple(row for p in parts for row in p.factors)
    return n, rows, exact


def _float_wedge_norm(rows, n):
    if not rows:
        return 1.0
    x = np.array([[float(v) for v in row] for row in rows], dtype=float)
    r = np.linalg.qr(x.T, mode="r")
    return float(abs(np.prod(np.diag(r))))


def exact_sqrt(q):
    """Точный корень неотрицательного Fraction или None, если это не квадрат."""
    q = Fraction(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def gram_determinant(parts):
    n, rows, exact = _concat(parts)
    if not rows:
        return Fraction(1) if exact else 1.0
    if exact:
        gram = [[sum((a * b for a, b in zip(u, v)), Fraction(0)) for v in rows] for u in rows]
        return bareiss_determinant(gram)
    return _float_wedge_norm(rows, n) ** 2


def wedge_norm(parts):
    """
    ‖v1∧...∧vD‖ для конкатенации факторов всех частей.

    В точном режиме возвращает Fraction, если определитель Грама - рациональный квадрат,
    иначе float. Зависимые факторы дают ровно 0.
    """
    n, rows, exact = _concat(parts)
    if not exact:
        return _float_wedge_norm(rows, n)
    det = gram_determinant(parts)
    root = exact_sqrt(det)
    if root is not None:
        return root
    return math.sqrt(float(det))


def wedge_inner(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"Размерности {a.ambient_dim} и {b.ambient_dim} различны")
    if a.degree != b.degree:
        raise DimensionMismatchError(f"Степени {a.degree} и {b.degree} различны")
    exact = common_mode([a.mode, b.mode])
    if a.degree == 0:
        return Fraction(1) if exact else 1.0
    if exact:
        m = [[sum((x * y for x, y in zip(u, v)), Fraction(0)) for v in b.factors] for u in a.factors]
        return bareiss_determinant(m)
    return float(np.linalg.det(a.to_array() @ b.to_array().T))


@dataclass(frozen=True, eq=False)
class ExteriorElement:
    ambient_dim: int
    degree: int
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0 <= self.degree <= self.ambient_dim:
            raise DegreeOverflowError(f"Степень {self.degree} вне [0, {self.ambient_dim}]")
        clean = {}
        for key, value in dict(self.coords).items():
            key, sign = sort_with_sign(key)
            if key is None:
                continue
            if len(key) != self.degree:
                raise DimensionMismatchError(f"Индекс {key} не степени {self.degree}")
            if key and not (0 <= key[0] and key[-1] < self.ambient_dim):
                raise DimensionMismatchError(f"Индекс {key} вне диапазона 0..{self.ambient_dim - 1}")
            value = normalize_scalar(value) * sign
            clean[key] = clean.get(key, 0) + value
        clean = {k: v for k, v in clean.items() if v != 0}
        _mode_of(clean.values())
        object.__setattr__(self, "coords", clean)

    @classmethod
    def from_basis(cls, ambient_dim, indices, coeff=1):
        indices = tuple(indices)
        return cls(ambient_dim, len(indices), {indices: coeff})

    @classmethod
    def scalar(cls, ambient_dim, value=1):
        return cls(ambient_dim, 0, {(): value})

    @classmethod
    def zero(cls, ambient_dim, degree):
        return cls(ambient_dim, degree, {})

    @property
    def mode(self):
        return _mode_of(self.coords.values())

    @property
    def is_zero(self):
        return not self.coords

    def _check_same_space(self, other):
        if other.ambient_dim != self.ambient_dim or other.degree != self.degree:
            raise DimensionMismatchError(
                f"Элементы из разных пространств: Λ^{self.degree}R^{self.ambient_dim} "
                f"и Λ^{other.degree}R^{other.ambient_dim}"
            )
        common_mode([self.mode, other.mode])

    def dot(self, other):
        self._check_same_space(other)
        exact = common_mode([self.mode, other.mode])
        total = Fraction(0) if exact else 0.0
        for key, value in self.coords.items():
            if key in other.coords:
                total += value * other.coords[key]
        return total

    def norm_sq(self):
        return self.dot(self)

    def __add__(self, other):
        self._check_same_space(other)
        coords = dict(self.coords)
        for key, value in other.coords.items():
            coords[key] = coords.get(key, 0) + value
        return ExteriorElement(self.ambient_dim, self.degree, coords)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, ExteriorElement):
            return NotImplemented
        return (self.ambient_dim, self.degree, self.coords) == (other.ambient_dim, other.degree, other.coords)

    def scaled(self, c):
        c = normalize_scalar(c)
        if self.coords:
            common_mode([self.mode, is_exact_scalar(c)])
        return ExteriorElement(self.ambient_dim, self.degree, {k: c * v for k, v in self.coords.items()})

    def wedge(self, other):
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatchError(f"Размерности {self.ambient_dim} и {other.ambient_dim} различны")
        if self.degree + other.degree > self.ambient_dim:
            raise DegreeOverflowError(
                f"Суммарная степень {self.degree + other.degree} больше {self.ambient_dim}"
            )
        common_mode([self.mode, other.mode])
        coords = {}
        for i, a in self.coords.items():
            for j, b in other.coords.items():
                key, sign = sort_with_sign(i + j)
                if key is None:
                    continue
                coords[key] = coords.get(key, 0) + sign * a * b
        return ExteriorElement(self.ambient_dim, self.degree + other.degree, coords)


def expand(s):
    """Координаты простого вектора: миноры d x d матрицы факторов по столбцам I."""
    n, d = s.ambient_dim, s.degree
    check_coordinate_cap(n, d)
    if d == 0:
        return ExteriorElement.scalar(n, 1 if s.is_exact else 1.0)
    subsets = list(combinations(range(n), d))
    if s.is_exact:
        coords = {}
        for subset in subsets:
            minor = bareiss_determinant([[row[i] for i in subset] for row in s.factors])
            if minor != 0:
                coords[subset] = minor
        return ExteriorElement(n, d, coords)
    f = s.to_array()
    minors = np.linalg.det(np.stack([f[:, list(subset)] for subset in subsets]))
    return ExteriorElement(n, d, {subset: float(m) for subset, m in zip(subsets, minors) if m != 0.0})


def expand_batch(factors):
    """Float-координаты сразу для S простых векторов: массив (S, d, N) -> (S, binom(N, d))."""
    factors = np.asarray(factors, dtype=float)
    count, d, n = factors.shape
    check_coordinate_cap(n, d)
    if d == 0:
        return np.ones((count, 1))
    subsets = list(combinations(range(n), d))
    out = np.empty((count, len(subsets)))
    for c, subset in enumerate(subsets):
        out[:, c] = np.linalg.det(factors[:, :, list(subset)])
    return out


def volume_form(ambient_dim):
    return ExteriorElement.from_basis(ambient_dim, range(ambient_dim))


def hodge_star(x, orientation=1):
    """
    ⋆: Λ^d -> Λ^{N-d}, заданная тождеством x∧⋆y = <x, y>·ϖ (ϖ = e_1∧...∧e_N при orientation=+1).

    На базисе ⋆e_I = sgn(I, I^c)·e_{I^c}; отсюда ⋆⋆ = (-1)^{d(N-d)}.
    """
    if orientation not in (1, -1):
        raise ValueError(f"orientation должен быть +1 или -1, получено {orientation}")
    n = x.ambient_dim
    coords = {}
    for key, value in x.coords.items():
        complement = tuple(i for i in range(n) if i not in key)
        coords[complement] = orientation * permutation_sign(key + complement) * value
    return ExteriorElement(n, n - x.degree, coords)


def numeric_rank(matrix, rel_tol=None):
    rel_tol = config.RANK_REL_TOL if rel_tol is None else rel_tol
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0.0:
        return 0
    return int(np.sum(singular > rel_tol * singular[0]))


def span_rank(vs, rel_tol=None):
    """Численный ранг набора простых векторов (или ExteriorElement) одной степени."""
    if not vs:
        return 0
    n, d = vs[0].ambient_dim, vs[0].degree
    for v in vs:
        if v.ambient_dim != n or v.degree != d:
            raise DimensionMismatchError("span_rank: векторы разных степеней или размерностей")
    check_coordinate_cap(n, d)
    subsets = list(combinations(range(n), d))
    index = {subset: c for c, subset in enumerate(subsets)}
    rows = np.zeros((len(vs), len(subsets)))
    for r, v in enumerate(vs):
        element = v if isinstance(v, ExteriorElement) else expand(v)
        for key, value in element.coords.items():
            rows[r, index[key]] = float(value)
    return numeric_rank(rows, rel_tol)
