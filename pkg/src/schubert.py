"""
Диаграммы Юнга, коэффициенты Литтлвуда-Ричардсона, проверки разложений Λ^d(R^k ⊗ R^m)
и вероятностное исчисление Шуберта для G(k, m) методом Монте-Карло.

Ячейки диаграмм нумеруются с единицы: (i, j) - строка i, столбец j. Вектор e_i ⊗ f_j имеет
в R^{km} индекс (i-1)*m + (j-1) (построчный порядок).
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

import config
from src.errors import ComputationError, ContainmentError, DegreeOverflowError
from src.exterior import SimpleVector, check_coordinate_cap, expand_batch, numeric_rank
from src.sampling import Estimate, mc_wedge_length, schubert_sampler, substream

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class YoungDiagram:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        if any(p < 0 for p in parts):
            raise ComputationError(f"Отрицательная часть в разбиении {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ComputationError(f"Разбиение не убывает: {parts}")
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        object.__setattr__(self, "parts", parts)

    @property
    def size(self):
        return sum(self.parts)

    @property
    def rows(self):
        return len(self.parts)

    @property
    def width(self):
        return self.parts[0] if self.parts else 0

    def part(self, i):
        """i-я строка (с нуля), 0 за пределами диаграммы."""
        return self.parts[i] if i < len(self.parts) else 0

    def boxes(self):
        return [(i + 1, j + 1) for i, p in enumerate(self.parts) for j in range(p)]

    def fits(self, k, m):
        return self.rows <= k and self.width <= m

    def contains(self, other):
        return all(other.part(i) <= self.part(i) for i in range(other.rows))

    def transpose(self):
        return YoungDiagram(tuple(sum(1 for p in self.parts if p > j) for j in range(self.width)))

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


def transpose(diagram):
    return diagram.transpose()


def _require_fits(diagram, k, m):
    if not diagram.fits(k, m):
        raise ContainmentError(f"Диаграмма {diagram} не помещается в прямоугольник {k}x{m}")


def dual(diagram, k, m):
    """∗λ: дополнение λ в прямоугольнике k x m, повёрнутое на 180°."""
    _require_fits(diagram, k, m)
    return YoungDiagram(tuple(m - diagram.part(k - 1 - i) for i in range(k)))


def outer_corners(diagram):
    return [(i + 1, p) for i, p in enumerate(diagram.parts) if p > diagram.part(i + 1)]


def partitions(size, max_rows=None, max_cols=None):
    """Все разбиения size с ограничениями на число строк и длину строки."""
    max_rows = size if max_rows is None else max_rows
    max_cols = size if max_cols is None else max_cols

    def _gen(remaining, rows_left, cap):
        if remaining == 0:
            yield ()
            return
        if rows_left == 0:
            return
        for first in range(min(remaining, cap), 0, -1):
            for rest in _gen(remaining - first, rows_left - 1, first):
                yield (first,) + rest

    return [YoungDiagram(p) for p in _gen(size, max_rows, max_cols)]


def diagrams_in_rectangle(k, m, size=None):
    sizes = range(k * m + 1) if size is None else [size]
    return [d for s in sizes for d in partitions(s, k, m)]


def parse_diagram(text):
    """'2,1' -> (2,1); '', '0', '()' и '∅' - пустая диаграмма."""
    raw = str(text).strip().strip("()").strip()
    if raw in ("", "0", "∅"):
        return YoungDiagram()
    try:
        return YoungDiagram(tuple(int(p) for p in raw.split(",") if p.strip()))
    except ValueError as e:
        raise ComputationError(f"Не удалось разобрать диаграмму {text!r}: {e}") from e


def parse_diagram_list(text):
    return [parse_diagram(p) for p in str(text).split("|")]


def v_lambda(diagram, k, m):
    """v_λ = ∧_{(i,j)∈λ} e_i ⊗ f_j в R^{km}, ячейки в построчном порядке."""
    _require_fits(diagram, k, m)
    rows = []
    for i, j in diagram.boxes():
        row = [0] * (k * m)
        row[(i - 1) * m + (j - 1)] = 1
        rows.append(row)
    return SimpleVector(k * m, rows)


def _count_lr_tableaux(outer, inner, content):
    """
    Число LR-таблиц формы outer/inner с содержимым content: строки не убывают, столбцы
    строго возрастают, слово чтения (справа налево, сверху вниз) - решёточное.
    """
    cells = [(r, c) for r in range(outer.rows) for c in range(outer.part(r) - 1, inner.part(r) - 1, -1)]
    limit = content.rows
    filling = {}
    counts = [0] * (limit + 1)

    def _place(pos):
        if pos == len(cells):
            return 1
        r, c = cells[pos]
        low = 1
        high = limit
        if (r, c + 1) in filling:
            high = min(high, filling[(r, c + 1)])
        if (r - 1, c) in filling:
            low = max(low, filling[(r - 1, c)] + 1)
        total = 0
        for v in range(low, high + 1):
            if counts[v] >= content.part(v - 1):
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue
            filling[(r, c)] = v
            counts[v] += 1
            total += _place(pos + 1)
            counts[v] -= 1
            del filling[(r, c)]
        return total

    return _place(0)


@lru_cache(maxsize=4096)
def _lr_cached(lam_parts, mu_parts):
    lam, mu = YoungDiagram(lam_parts), YoungDiagram(mu_parts)
    if mu.size == 0:
        return ((lam_parts, 1),)
    if lam.size == 0:
        return ((mu_parts, 1),)
    table = []
    size = lam.size + mu.size
    for nu in partitions(size, lam.rows + mu.rows, lam.width + mu.width):
        if not (nu.contains(lam) and nu.contains(mu)):
            continue
        c = _count_lr_tableaux(nu, lam, mu)
        if c:
            table.append((nu.parts, c))
    return tuple(table)


def lr_coefficients(lam, mu):
    """{ν: c^ν_{λμ}} - кратности S_ν в S_λ ⊗ S_μ."""
    return {YoungDiagram(nu): c for nu, c in _lr_cached(lam.parts, mu.parts)}


def lr_set(lam, mu, k, m):
    return {nu for nu in lr_coefficients(lam, mu) if nu.fits(k, m)}


def schur_dim(diagram, k):
    """dim S_λ(C^k) по формуле крюков и содержаний; 0, если строк больше k."""
    if diagram.rows > k:
        return 0
    conj = diagram.transpose()
    value = Fraction(1)
    for i, j in diagram.boxes():
        hook = diagram.part(i - 1) - j + conj.part(j - 1) - i + 1
        value *= Fraction(k + j - i, hook)
    return int(value)


def span_dim(diagram, k, m):
    return schur_dim(diagram, k) * schur_dim(diagram.transpose(), m)


@dataclass
class SpanReport:
    k: int
    m: int
    d: int
    samples: int
    orbit_ranks: dict = field(default_factory=dict)
    max_cross_inner: float = 0.0
    wedge_ranks: dict = field(default_factory=dict)
    tol: float = 1e-9

    @property
    def ok(self):
        ranks_ok = all(r == e for r, e in self.orbit_ranks.values())
        wedges_ok = all(r == e for r, e in self.wedge_ranks.values())
        return ranks_ok and wedges_ok and self.max_cross_inner < self.tol


def _orbit_coords(diagram, k, m, samples, seed, stream, index):
    rng = substream(seed, stream, index, 0)
    return expand_batch(schubert_sampler(diagram, k, m).draw(rng, samples))


def verify_span_decomposition(k, m, d, samples=None, tol=1e-9, seed=None, rel_tol=None):
    """
    Проверяет Λ^d(R^k⊗R^m) = ⊕ V_λ и V_λ∧V_μ = ⊕_{ν∈LR} V_ν на сэмплах орбит h·v_λ.

    Returns:
        SpanReport: ранги орбит (факт, ожидание), max |<·,·>| между разными орбитами,
        ранги wedge-пар (факт, ожидание)
    """
    seed = config.ZONOID_SEED if seed is None else seed
    coord_count = check_coordinate_cap(k * m, d)
    samples = 2 * coord_count + 10 if samples is None else samples
    report = SpanReport(k, m, d, samples, tol=tol)

    diagrams = diagrams_in_rectangle(k, m, d)
    orbits = {}
    for idx, lam in enumerate(diagrams):
        coords = _orbit_coords(lam, k, m, samples, seed, 0, idx)
        orbits[lam] = coords
        report.orbit_ranks[str(lam)] = (numeric_rank(coords, rel_tol), span_dim(lam, k, m))

    for a, lam in enumerate(diagrams):
        for mu in diagrams[a + 1:]:
            inner = float(np.max(np.abs(orbits[lam] @ orbits[mu].T)))
            report.max_cross_inner = max(report.max_cross_inner, inner)

    pair_index = 0
    for a in range(1, d):
        for lam in diagrams_in_rectangle(k, m, a):
            for mu in diagrams_in_rectangle(k, m, d - a):
                first = schubert_sampler(lam, k, m).draw(substream(seed, 1, pair_index, 0), samples)
                second = schubert_sampler(mu, k, m).draw(substream(seed, 1, pair_index, 1), samples)
                pair_index += 1
                coords = expand_batch(np.concatenate([first, second], axis=1))
                expected = sum(span_dim(nu, k, m) for nu in lr_set(lam, mu, k, m))
                report.wedge_ranks[f"{lam}^{mu}"] = (numeric_rank(coords, rel_tol), expected)

    logger.info(
        f"[LOG] Разложение Λ^{d}(R^{k}⊗R^{m}): орбит {len(diagrams)}, wedge-пар {pair_index}, "
        f"max cross = {report.max_cross_inner:.3e}, ok={report.ok}"
    )
    return report


def mc_schubert_shape(diagrams, k, m, samples=None, seed=None, workers=None, stream=0):
    """
    E‖h1 v_λ1 ∧ ... ∧ hs v_λs‖ при независимых h_i Haar на O(k)×O(m).

    Величина симметрична по λ_i; диаграммы сортируются, чтобы подпотоки слотов
    не зависели от порядка аргументов.
    """
    diagrams = sorted(diagrams)
    for lam in diagrams:
        _require_fits(lam, k, m)
    if sum(lam.size for lam in diagrams) > k * m:
        samples = config.MC_SAMPLES if samples is None else samples
        seed = config.ZONOID_SEED if seed is None else seed
        return Estimate(0.0, 0.0, samples, seed, 0.0)
    samplers = [schubert_sampler(lam, k, m) for lam in diagrams]
    return mc_wedge_length(samplers, samples, seed, workers, stream)


def duality_nonvanishing(lam, mu, k, m):
    """Произведение классов λ и μ дополнительных размерностей ненулевое тогда и только тогда, когда μ = ∗λ."""
    if lam.size + mu.size != k * m:
        raise DegreeOverflowError(f"|λ| + |μ| = {lam.size + mu.size}, ожидалось {k * m}")
    _require_fits(lam, k, m)
    _require_fits(mu, k, m)
    result = mu == dual(lam, k, m)
    if config.DEBUG_MODE:
        full = YoungDiagram((m,) * k)
        if result != (full in lr_set(lam, mu, k, m)):
            raise ComputationError(f"Двойственность {lam}, {mu} расходится с LR-множеством в {k}x{m}")
    return result


BOX = YoungDiagram((1,))
ROW = YoungDiagram((2,))
COLUMN = YoungDiagram((1, 1))

EDEG22_SHAPES = {
    "E4": (BOX, BOX, BOX, BOX),
    "D11": (COLUMN, COLUMN),
    "D22": (ROW, ROW),
    "D3": (COLUMN, BOX, BOX),
    "D4": (ROW, BOX, BOX),
}

# показатели в E4 * sqrt(D11 * D22) / (D3 * D4)
EDEG22_WEIGHTS = {"E4": 1.0, "D11": 0.5, "D22": 0.5, "D3": -1.0, "D4": -1.0}


def edeg22_components(samples=None, seed=None, workers=None):
    components = {}
    for stream, (name, shape) in enumerate(EDEG22_SHAPES.items(), start=1):
        components[name] = mc_schubert_shape(shape, 2, 2, samples, seed, workers, stream=stream)
        logger.info(f"[LOG] {name}: {components[name].mean:.6f} ± {components[name].std_error:.6f}")
    return components


def edeg22_calibrated(samples=None, seed=None, workers=None, components=None):
    """
    Ожидаемое число прямых в P^3, пересекающих 4 случайные прямые (edeg(2,4)).

    Четыре детерминированных счёта (α_{11}α_1² = α_2α_1² = α_2² = α_{11}² = 1) исключают
    неизвестные vol(Ω_λ)/vol(G), остаётся E4·sqrt(D11·D22)/(D3·D4). Ошибка - дельта-методом
    по независимым компонентам.
    """
    components = components or edeg22_components(samples, seed, workers)
    log_value = 0.0
    rel_var = 0.0
    for name, weight in EDEG22_WEIGHTS.items():
        est = components[name]
        if est.mean <= 0:
            raise ComputationError(f"Компонента {name} неположительна: {est.mean}")
        log_value += weight * math.log(est.mean)
        rel_var += (weight * est.std_error / est.mean) ** 2
    value = math.exp(log_value)
    first = components["E4"]
    return Estimate(value, value * math.sqrt(rel_var), first.samples, first.seed)


def asymptotic_edeg2(m):
    """Главный член асимптотики E(□,...,□) в G(2, m): (2/3) π^{-1/2} (π²/4)^m m^{-1/2}."""
    if m < 1:
        raise ValueError(f"m должно быть >= 1, получено {m}")
    return (2.0 / 3.0) / math.sqrt(math.pi) * (math.pi ** 2 / 4.0) ** m / math.sqrt(m)
