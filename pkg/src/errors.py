"""Исключения вычислительного ядра.

Все наследуются от ComputationError (а он от ValueError), так что CLI ловит их одним
except и отдаёт код возврата 1; SchemaError означает кривой ввод и даёт код 2.
"""


class ComputationError(ValueError):
    pass


class DimensionMismatchError(ComputationError):
    pass


class DegreeOverflowError(ComputationError):
    pass


class CoordinateCapError(ComputationError):
    pass


class ContainmentError(ComputationError):
    pass


class PiExponentMismatchError(ComputationError):
    pass


class ExactnessError(ComputationError):
    """Смешение точных (Fraction) и float данных в одной операции."""


class SchemaError(ComputationError):
    pass
