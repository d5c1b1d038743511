"""Exact Gaussian-rational arithmetic.

:class:`QComplex` is a complex number whose real and imaginary parts are
:class:`fractions.Fraction` values.  It supports the field operations plus
conjugation and squared modulus, which is all the exact backends of this
package need.  Values are immutable and hashable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

RationalLike = Union[int, Fraction]


def _coerce(value: RationalLike) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True)
class QComplex:
    """A complex number with exact rational real and imaginary parts.

    Examples
    --------
    >>> i = QComplex(0, 1)
    >>> (i * i).re
    Fraction(-1, 1)
    >>> QComplex(3, 4).abs2()
    Fraction(25, 1)
    """

    re: Fraction
    im: Fraction

    def __init__(self, re: RationalLike = 0, im: RationalLike = 0) -> None:
        object.__setattr__(self, "re", _coerce(re))
        object.__setattr__(self, "im", _coerce(im))

    def __add__(self, other: "QComplex") -> "QComplex":
        other = _as_qc(other)
        return QComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "QComplex") -> "QComplex":
        other = _as_qc(other)
        return QComplex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other: "QComplex") -> "QComplex":
        return _as_qc(other) - self

    def __mul__(self, other: "QComplex") -> "QComplex":
        other = _as_qc(other)
        return QComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: "QComplex") -> "QComplex":
        other = _as_qc(other)
        d = other.abs2()
        if d == 0:
            raise ZeroDivisionError("division by zero QComplex")
        num = self * other.conj()
        return QComplex(num.re / d, num.im / d)

    def __rtruediv__(self, other: "QComplex") -> "QComplex":
        return _as_qc(other) / self

    def __neg__(self) -> "QComplex":
        return QComplex(-self.re, -self.im)

    def conj(self) -> "QComplex":
        return QComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def to_complex(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"QComplex({self.re!s}, {self.im!s})"


def _as_qc(value) -> QComplex:
    if isinstance(value, QComplex):
        return value
    if isinstance(value, (int, Fraction)):
        return QComplex(value, 0)
    raise TypeError(f"cannot mix QComplex with {type(value).__name__}")


QC_ZERO = QComplex(0, 0)
QC_ONE = QComplex(1, 0)
QC_I = QComplex(0, 1)


def parse_fraction(text: Union[str, int]) -> Fraction:
    """Parse "p/q" or integer strings into an exact Fraction.

    >>> parse_fraction("3/4")
    Fraction(3, 4)
    >>> parse_fraction(7)
    Fraction(7, 1)
    """
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(text.strip())


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p/q" (or "p" when the denominator is 1)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
