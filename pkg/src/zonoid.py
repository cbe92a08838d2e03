"""
Точное исчисление дискретных (виртуальных) зоноидов.

Зоноид хранится как Σ w_i·½[-v_i, v_i] + center: атомы (вес, простой вектор) и центр.
Отрицательные веса кодируют формальные разности. Длина, спаривание и wedge - конечные суммы,
поэтому для рациональных данных всё считается в Fraction.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.linalg import null_space

import config
from src.errors import ComputationError, DegreeOverflowError, DimensionMismatchError
from src.exterior import (
    ExteriorElement,
    SimpleVector,
    common_mode,
    expand,
    gram_determinant,
    hodge_star,
    is_exact_scalar,
    normalize_scalar,
    wedge_inner,
    wedge_norm,
)
from src.linalg import rational_nullspace
from src.sphere_ring import ball_wedge_factor, kappa

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Atom:
    weight: object
    vector: SimpleVector

    def __post_init__(self):
        object.__setattr__(self, "weight", normalize_scalar(self.weight))

    @property
    def mode(self):
        return common_mode([is_exact_scalar(self.weight), self.vector.mode])


@dataclass(frozen=True, eq=False)
class VirtualZonoid:
    ambient_dim: int
    degree: int
    atoms: tuple = ()
    center: ExteriorElement = None

    def __post_init__(self):
        atoms = tuple(a if isinstance(a, Atom) else Atom(*a) for a in self.atoms)
        for atom in atoms:
            v = atom.vector
            if v.ambient_dim != self.ambient_dim or v.degree != self.degree:
                raise DimensionMismatchError(
                    f"Атом степени {v.degree} в R^{v.ambient_dim} не подходит для "
                    f"Λ^{self.degree}R^{self.ambient_dim}"
                )
        if self.center is not None:
            if self.center.ambient_dim != self.ambient_dim or self.center.degree != self.degree:
                raise DimensionMismatchError("Центр из другого пространства")
        object.__setattr__(self, "atoms", atoms)
        center = self.center if self.center is not None and not self.center.is_zero else None
        object.__setattr__(self, "center", center)
        _ = self.is_exact

    @classmethod
    def zero(cls, ambient_dim, degree=1):
        return cls(ambient_dim, degree)

    @classmethod
    def unit(cls, ambient_dim, exact=True):
        """Единица кольца: атом (1, скаляр 1) степени 0."""
        weight = Fraction(1) if exact else 1.0
        return cls(ambient_dim, 0, (Atom(weight, SimpleVector.scalar(ambient_dim)),))

    @classmethod
    def from_generators(cls, vectors, weights=None, center=None):
        """Зонотоп Σ w_i·½[-v_i, v_i] + center из векторов R^N (степень 1)."""
        vectors = [list(v) for v in vectors]
        if not vectors:
            raise DimensionMismatchError("from_generators: нужен хотя бы один вектор")
        n = len(vectors[0])
        weights = [1] * len(vectors) if weights is None else list(weights)
        atoms = tuple(Atom(w, SimpleVector(n, (v,))) for w, v in zip(weights, vectors))
        if center is not None and not isinstance(center, ExteriorElement):
            center = ExteriorElement(n, 1, {(i,): c for i, c in enumerate(center)})
        return cls(n, 1, atoms, center)

    @property
    def is_exact(self):
        modes = [a.mode for a in self.atoms]
        if self.center is not None:
            modes.append(self.center.mode)
        return common_mode(modes)

    @property
    def is_genuine(self):
        return all(a.weight >= 0 for a in self.atoms)

    def _check_same_space(self, other):
        if (other.ambient_dim, other.degree) != (self.ambient_dim, self.degree):
            raise DimensionMismatchError(
                f"Зоноиды из разных пространств: Λ^{self.degree}R^{self.ambient_dim} "
                f"и Λ^{other.degree}R^{other.ambient_dim}"
            )

    def __add__(self, other):
        """Сумма Минковского."""
        self._check_same_space(other)
        if self.center is None:
            center = other.center
        elif other.center is None:
            center = self.center
        else:
            center = self.center + other.center
        return VirtualZonoid(self.ambient_dim, self.degree, self.atoms + other.atoms, center)

    def scaled(self, c):
        c = normalize_scalar(c)
        atoms = tuple(Atom(c * a.weight, a.vector) for a in self.atoms)
        center = self.center.scaled(c) if self.center is not None else None
        return VirtualZonoid(self.ambient_dim, self.degree, atoms, center)

    def __neg__(self):
        return self.scaled(-1)

    def __sub__(self, other):
        return self + (-other)


def segment(v, start=None):
    """[a, a+v] как ½[-v, v] + (a + ½v); без start - центрированный отрезок ½[-v, v]."""
    n = len(v)
    vector = SimpleVector(n, (tuple(v),))
    if start is None:
        return VirtualZonoid(n, 1, (Atom(1 if vector.is_exact else 1.0, vector),))
    half = Fraction(1, 2) if vector.is_exact else 0.5
    center = ExteriorElement(n, 1, {(i,): a + half * x for i, (a, x) in enumerate(zip(start, vector.factors[0]))})
    return VirtualZonoid(n, 1, (Atom(1 if vector.is_exact else 1.0, vector),), center)


def _half(exact):
    return Fraction(1, 2) if exact else 0.5


def _as_element(u, ambient_dim):
    if isinstance(u, ExteriorElement):
        return u
    if isinstance(u, SimpleVector):
        return expand(u)
    return ExteriorElement(ambient_dim, 1, {(i,): x for i, x in enumerate(u)})


def support(z, u):
    """h_z(u) = Σ w_i·½|<v_i, u>| + <center, u>."""
    u = _as_element(u, z.ambient_dim)
    if u.ambient_dim != z.ambient_dim or u.degree != z.degree:
        raise DimensionMismatchError(f"Направление степени {u.degree}, зоноид степени {z.degree}")
    exact = common_mode([z.is_exact if (z.atoms or z.center) else None, u.mode])
    total = Fraction(0) if exact else 0.0
    for atom in z.atoms:
        total += atom.weight * _half(exact) * abs(expand(atom.vector).dot(u))
    if z.center is not None:
        total += z.center.dot(u)
    return total


def length(z):
    """ℓ(z) = Σ w_i‖v_i‖; центр не влияет (инвариантность относительно сдвигов)."""
    total = Fraction(0) if z.is_exact else 0.0
    for atom in z.atoms:
        total += atom.weight * wedge_norm([atom.vector])
    return total


def _is_negligible(vector, exact):
    if exact:
        return gram_determinant([vector]) == 0
    return wedge_norm([vector]) < config.ATOM_PRUNE_TOL


def _wedge_pair(a, b):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatchError(f"Размерности {a.ambient_dim} и {b.ambient_dim} различны")
    n = a.ambient_dim
    degree = a.degree + b.degree
    if degree > n:
        raise DegreeOverflowError(f"Суммарная степень {degree} больше размерности {n}")
    exact = common_mode([a.is_exact if a.atoms or a.center else None,
                         b.is_exact if b.atoms or b.center else None])
    atoms = []
    for x in a.atoms:
        for y in b.atoms:
            weight = x.weight * y.weight
            if weight == 0:
                continue
            vector = x.vector.wedge(y.vector)
            if _is_negligible(vector, exact):
                continue
            atoms.append(Atom(weight, vector))
    return VirtualZonoid(n, degree, tuple(atoms))


def wedge(zs):
    """
    Произведение Z1∧...∧Zs.

    Центрированная часть - все попарные произведения атомов (вырожденные отбрасываются).
    Центр: Z(ξ) = K(ξ) + ½Eξ, поэтому центр произведения равен 2^{s-1}·c1∧...∧cs.
    """
    zs = list(zs)
    if not zs:
        raise DimensionMismatchError("wedge: пустой список зоноидов")
    if len(zs) == 1:
        return zs[0]
    result = zs[0]
    for z in zs[1:]:
        result = _wedge_pair(result, z)
    if any(z.center is None for z in zs):
        return result
    center = zs[0].center
    for z in zs[1:]:
        center = center.wedge(z.center)
    return VirtualZonoid(result.ambient_dim, result.degree, result.atoms, center.scaled(2 ** (len(zs) - 1)))


def mixed_volume(zs):
    """MV(Z1,...,Zn) = ℓ(Z1∧...∧Zn)/n! для n зоноидов степени 1 в R^n."""
    zs = list(zs)
    if not zs:
        raise DimensionMismatchError("mixed_volume: пустой список")
    n = zs[0].ambient_dim
    if len(zs) != n or any(z.degree != 1 or z.ambient_dim != n for z in zs):
        raise DimensionMismatchError(
            f"mixed_volume требует ровно {n} зоноидов степени 1 в R^{n}, получено {len(zs)}"
        )
    value = length(wedge(zs))
    return value / math.factorial(n)


def zonotope_volume(z):
    return mixed_volume([z] * z.ambient_dim)


def intrinsic_volume(z, d):
    """
    V_d(Z) = binom(n,d)/κ_{n-d}·MV(Z[d], B[n-d]).

    MV со шарами раскрывается через ℓ(Z^{∧d}∧B^{∧(n-d)}), так что остаётся ℓ(Z^{∧d}) с
    рациональным множителем (π сокращается точно).
    """
    n = z.ambient_dim
    if z.degree != 1:
        raise DimensionMismatchError(f"intrinsic_volume: нужен зоноид степени 1, степень {z.degree}")
    if not z.is_genuine:
        raise ComputationError("intrinsic_volume определён только для зоноидов с весами >= 0")
    if not 0 <= d <= n:
        raise DegreeOverflowError(f"d = {d} вне [0, {n}]")
    if d == 0:
        return Fraction(1) if z.is_exact else 1.0
    ell = length(wedge([z] * d))
    factor = (ball_wedge_factor(n, d, n - d) / kappa(n - d)
              * Fraction(math.comb(n, d), math.factorial(n))).to_fraction()
    if isinstance(ell, Fraction):
        return factor * ell
    return float(factor) * ell


def pairing(a, b):
    """<a, b> = Σ w_i w'_j |<v_i, v'_j>|."""
    a._check_same_space(b)
    exact = common_mode([a.is_exact if a.atoms else None, b.is_exact if b.atoms else None])
    total = Fraction(0) if exact else 0.0
    for x in a.atoms:
        for y in b.atoms:
            total += x.weight * y.weight * abs(wedge_inner(x.vector, y.vector))
    return total


def exp_truncated(z, max_degree=None):
    """e^L = Σ L^{∧d}/d!, список частей по степеням 0..max_degree."""
    if z.degree != 1:
        raise DimensionMismatchError(f"exp_truncated: нужен зоноид степени 1, степень {z.degree}")
    n = z.ambient_dim
    max_degree = n if max_degree is None else max_degree
    if max_degree > n:
        raise DegreeOverflowError(f"max_degree = {max_degree} больше размерности {n}")
    centered = VirtualZonoid(n, 1, z.atoms)
    exact = z.is_exact
    parts = [VirtualZonoid.unit(n, exact=exact)]
    power = None
    for d in range(1, max_degree + 1):
        power = centered if power is None else _wedge_pair(power, centered)
        inv = Fraction(1, math.factorial(d)) if exact else 1.0 / math.factorial(d)
        parts.append(power.scaled(inv))
    return parts


def crofton_evaluate(L, K):
    """
    φ_L(K) = <L, e^K> = Σ_d <L_d, K^{∧d}>/d!.

    L - зоноид степени d или список градуированных частей (как у exp_truncated/hodge_dual).
    """
    parts = [L] if isinstance(L, VirtualZonoid) else list(L)
    if K.degree != 1:
        raise DimensionMismatchError(f"crofton_evaluate: K должен иметь степень 1, степень {K.degree}")
    n = K.ambient_dim
    exact = K.is_exact
    powers = {0: VirtualZonoid.unit(n, exact=exact)}
    centered = VirtualZonoid(n, 1, K.atoms)
    total = Fraction(0) if exact else 0.0
    for part in parts:
        if part.ambient_dim != n:
            raise DimensionMismatchError(f"L в R^{part.ambient_dim}, K в R^{n}")
        d = part.degree
        if d > n:
            raise DegreeOverflowError(f"Степень {d} больше размерности {n}")
        if not part.atoms:
            continue
        for k in range(1, d + 1):
            if k not in powers:
                powers[k] = centered if k == 1 else _wedge_pair(powers[k - 1], centered)
        total += pairing(part, powers[d]) / math.factorial(d)
    return total


def _complement_basis(vector, exact):
    n = vector.ambient_dim
    if vector.degree == 0:
        one = Fraction(1) if exact else 1.0
        zero = Fraction(0) if exact else 0.0
        return [[one if i == j else zero for j in range(n)] for i in range(n)]
    if exact:
        return rational_nullspace([list(row) for row in vector.factors], cols=n)
    basis = null_space(vector.to_array())
    return [list(map(float, col)) for col in basis.T]


def _dual_atom(atom, exact, orientation):
    v = atom.vector
    n = v.ambient_dim
    if v.degree > 0 and _is_negligible(v, exact):
        return None
    target = hodge_star(expand(v), orientation)
    if target.is_zero:
        return None
    if target.degree == 0:
        return Atom(atom.weight * abs(target.coords[()]), SimpleVector.scalar(n))
    basis = _complement_basis(v, exact)
    if len(basis) != n - v.degree:
        raise ComputationError(
            f"hodge_dual: дополнение span(v) размерности {len(basis)}, ожидалось {n - v.degree}"
        )
    candidate = SimpleVector(n, basis)
    coords = expand(candidate).coords
    shared = [k for k in target.coords if k in coords and coords[k] != 0]
    if not shared:
        raise ComputationError("hodge_dual: не удалось восстановить множитель ⋆v")
    key = max(shared, key=lambda k: abs(coords[k]))
    scale = target.coords[key] / coords[key]
    return Atom(atom.weight, candidate.scaled(scale))


def hodge_dual(z, orientation=1):
    """⋆K(ξ) = K(⋆ξ): атомы отображаются через ⋆ и заново раскладываются на факторы.

    Ортогональное дополнение span(v) даёт факторы ⋆v с точностью до множителя,
    множитель восстанавливается по одной ненулевой координате.
    """
    exact = z.is_exact
    atoms = []
    for atom in z.atoms:
        dual = _dual_atom(atom, exact, orientation)
        if dual is not None:
            atoms.append(dual)
    center = hodge_star(z.center, orientation) if z.center is not None else None
    logger.debug(f"[DEBUG] hodge_dual: {len(z.atoms)} атомов -> {len(atoms)}")
    return VirtualZonoid(z.ambient_dim, z.ambient_dim - z.degree, tuple(atoms), center)


def hodge_dual_parts(parts, orientation=1):
    return [hodge_dual(p, orientation) for p in parts]
