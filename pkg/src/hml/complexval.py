from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

EPS = 2.0 ** -52


@dataclass(frozen=True)
class ComplexVal:
    """A double-precision complex number with an absolute error bound."""

    re: float
    im: float = 0.0
    err: float = 0.0

    def __post_init__(self):
        if not self.err >= 0.0:
            raise ValueError(f"error bound must be non-negative, got {self.err}")

    @classmethod
    def of(cls, z: complex, err: float = 0.0) -> "ComplexVal":
        z = complex(z)
        return cls(z.real, z.imag, float(err))

    @property
    def value(self) -> complex:
        return complex(self.re, self.im)

    def __abs__(self) -> float:
        return abs(self.value)

    def __complex__(self) -> complex:
        return self.value

    def rel_err(self) -> float:
        a = abs(self)
        return math.inf if a == 0 else self.err / a

    def _rounding(self, z: complex) -> float:
        return 2 * EPS * abs(z)

    def __add__(self, other):
        o = _lift(other)
        z = self.value + o.value
        return ComplexVal.of(z, self.err + o.err + self._rounding(z))

    __radd__ = __add__

    def __neg__(self):
        return ComplexVal(-self.re, -self.im, self.err)

    def __sub__(self, other):
        return self + (-_lift(other))

    def __rsub__(self, other):
        return _lift(other) - self

    def __mul__(self, other):
        o = _lift(other)
        z = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return ComplexVal.of(z, err + self._rounding(z))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _lift(other)
        if o.err >= abs(o.value):
            raise ZeroDivisionError("divisor not bounded away from zero")
        z = self.value / o.value
        denom = abs(o.value) - o.err
        err = (self.err + abs(z) * o.err) / denom
        return ComplexVal.of(z, err + self._rounding(z))

    def __rtruediv__(self, other):
        return _lift(other) / self

    def conj(self) -> "ComplexVal":
        return ComplexVal(self.re, -self.im, self.err)

    def close_to(self, other, tol: float = 0.0) -> bool:
        o = _lift(other)
        return abs(self.value - o.value) <= self.err + o.err + tol

    def as_dict(self) -> dict:
        return {"re": self.re, "im": self.im, "err": self.err}


def _lift(x) -> ComplexVal:
    if isinstance(x, ComplexVal):
        return x
    return ComplexVal.of(complex(x))


def csum(values: Iterable[complex]) -> complex:
    """Correctly rounded sum of complex values (order independent)."""
    vals = list(values)
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
