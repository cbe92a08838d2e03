import math
from dataclasses import dataclass
from fractions import Fraction

from src.errors import PiExponentMismatchError


@dataclass(frozen=True)
class PiScalar:
    """
    Точное число вида coeff * π^pi_exp с рациональными coeff и pi_exp.

    Умножение складывает показатели; сложение разрешено только при равных показателях
    (ноль складывается с чем угодно). Ноль хранится канонично как (0, 0).
    """

    coeff: Fraction = Fraction(0)
    pi_exp: Fraction = Fraction(0)

    def __post_init__(self):
        coeff = Fraction(self.coeff)
        pi_exp = Fraction(self.pi_exp) if coeff != 0 else Fraction(0)
        object.__setattr__(self, "coeff", coeff)
        object.__setattr__(self, "pi_exp", pi_exp)

    @classmethod
    def of(cls, value):
        if isinstance(value, PiScalar):
            return value
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def pi(cls, exponent=1):
        return cls(Fraction(1), Fraction(exponent))

    @property
    def is_zero(self):
        return self.coeff == 0

    @property
    def is_rational(self):
        return self.pi_exp == 0

    def to_fraction(self):
        if not self.is_rational:
            raise PiExponentMismatchError(f"{self} не рационально (показатель π = {self.pi_exp})")
        return self.coeff

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiScalar.of(other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        return PiScalar(self.coeff * other.coeff, self.pi_exp + other.pi_exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiScalar.of(other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("Деление PiScalar на ноль")
        return PiScalar(self.coeff / other.coeff, self.pi_exp - other.pi_exp)

    def __rtruediv__(self, other):
        return PiScalar.of(other) / self

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PiScalar.of(other)
        if not isinstance(other, PiScalar):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_exp != other.pi_exp:
            raise PiExponentMismatchError(
                f"Нельзя сложить π^{self.pi_exp} и π^{other.pi_exp}: показатели различны"
            )
        return PiScalar(self.coeff + other.coeff, self.pi_exp)

    __radd__ = __add__

    def __neg__(self):
        return PiScalar(-self.coeff, self.pi_exp)

    def __sub__(self, other):
        return self + (-PiScalar.of(other))

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return PiScalar(1) / (self ** -k)
        return PiScalar(self.coeff ** k, self.pi_exp * k)

    def __float__(self):
        return float(self.coeff) * math.pi ** float(self.pi_exp)

    def __str__(self):
        if self.pi_exp == 0:
            return str(self.coeff)
        return f"{self.coeff}·π^({self.pi_exp})"

    def to_dict(self):
        return {"coeff": str(self.coeff), "pi_exp": str(self.pi_exp)}
