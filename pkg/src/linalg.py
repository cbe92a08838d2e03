"""Точная линейная алгебра над Fraction.

Исключение Гаусса без дробного роста (Bareiss) для определителей и решения систем,
плюс ранг и базис ядра через приведённую ступенчатую форму. Размеры у нас маленькие
(матрицы Ганкеля до 6x6, факторы простых векторов до ~20 столбцов).
"""

from fractions import Fraction

from src.errors import ComputationError, DimensionMismatchError


def to_fraction_matrix(matrix):
    return [[Fraction(x) for x in row] for row in matrix]


def _check_square(a):
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatchError(f"Матрица не квадратная: {n} строк, длины {[len(r) for r in a]}")
    return n


def bareiss_determinant(matrix):
    a = to_fraction_matrix(matrix)
    n = _check_square(a)
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def bareiss_solve(matrix, rhs):
    """
    Решает A x = b точно.

    Args:
        matrix: квадратная матрица (числа или Fraction)
        rhs: правая часть той же длины

    Returns:
        список Fraction
    """
    a = to_fraction_matrix(matrix)
    n = _check_square(a)
    if len(rhs) != n:
        raise DimensionMismatchError(f"Правая часть длины {len(rhs)}, ожидалось {n}")
    for row, b in zip(a, rhs):
        row.append(Fraction(b))

    prev = Fraction(1)
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                raise ComputationError("Вырожденная система: нет ведущего элемента в столбце %d" % k)
            a[k], a[swap] = a[swap], a[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]

    x = [Fraction(0)] * n
    for i in reversed(range(n)):
        s = a[i][n] - sum((a[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / a[i][i]
    return x


def leading_principal_minors(matrix):
    a = to_fraction_matrix(matrix)
    n = _check_square(a)
    return [bareiss_determinant([row[:k] for row in a[:k]]) for k in range(1, n + 1)]


def _rref(a):
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [y - f * x for x, y in zip(a[r], a[i])]
        pivots.append(c)
        r += 1
    return pivots


def rational_rank(matrix):
    a = to_fraction_matrix(matrix)
    if not a:
        return 0
    return len(_rref(a))


def rational_nullspace(matrix, cols=None):
    """Базис ядра {x : A x = 0} из Fraction-векторов (по одному на свободную переменную)."""
    a = to_fraction_matrix(matrix)
    if cols is None:
        if not a:
            raise DimensionMismatchError("Пустая матрица без явного числа столбцов")
        cols = len(a[0])
    if not a:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for row, pc in zip(a, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis
