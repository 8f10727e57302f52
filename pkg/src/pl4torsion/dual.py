"""Forward-mode automatic differentiation with vector-valued dual parts."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np


class DualScalar:
    """A value together with its gradient with respect to a fixed seed set.

    Arithmetic follows the chain rule; mixing with plain floats treats them
    as constants.
    """

    __slots__ = ("value", "grad")

    def __init__(self, value: float, grad: np.ndarray):
        self.value = float(value)
        self.grad = grad

    @classmethod
    def constant(cls, value: float, n: int) -> "DualScalar":
        return cls(value, np.zeros(n))

    @classmethod
    def seeds(cls, values: Sequence[float]) -> list["DualScalar"]:
        """Independent variables: the i-th gets the i-th unit gradient."""
        n = len(values)
        eye = np.eye(n)
        return [cls(v, eye[i]) for i, v in enumerate(values)]

    def _lift(self, other) -> "DualScalar":
        if isinstance(other, DualScalar):
            return other
        return DualScalar(other, np.zeros_like(self.grad))

    def __add__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.value + other.value, self.grad + other.grad)
        return DualScalar(self.value + other, self.grad)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(self.value - other.value, self.grad - other.grad)
        return DualScalar(self.value - other, self.grad)

    def __rsub__(self, other):
        return DualScalar(other - self.value, -self.grad)

    def __neg__(self):
        return DualScalar(-self.value, -self.grad)

    def __mul__(self, other):
        if isinstance(other, DualScalar):
            return DualScalar(
                self.value * other.value,
                self.value * other.grad + other.value * self.grad,
            )
        return DualScalar(self.value * other, self.grad * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DualScalar):
            if other.value == 0.0:
                raise ZeroDivisionError("dual division by zero real part")
            q = self.value / other.value
            return DualScalar(q, (self.grad - q * other.grad) / other.value)
        return DualScalar(self.value / other, self.grad / other)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, p: float):
        return DualScalar(self.value**p, p * self.value ** (p - 1) * self.grad)

    def __abs__(self):
        return -self if self.value < 0 else self

    def __lt__(self, other):
        return self.value < _val(other)

    def __le__(self, other):
        return self.value <= _val(other)

    def __gt__(self, other):
        return self.value > _val(other)

    def __ge__(self, other):
        return self.value >= _val(other)

    def __float__(self):
        return self.value

    def __repr__(self) -> str:
        return f"DualScalar({self.value!r}, {self.grad!r})"


def _val(x) -> float:
    return x.value if isinstance(x, DualScalar) else x


def sqrt(x):
    if isinstance(x, DualScalar):
        r = math.sqrt(x.value)
        return DualScalar(r, x.grad / (2.0 * r))
    return math.sqrt(x)


def acos(x):
    if isinstance(x, DualScalar):
        return DualScalar(
            math.acos(x.value), -x.grad / math.sqrt(1.0 - x.value * x.value)
        )
    return math.acos(x)


def value(x) -> float:
    """Plain float value of a float or DualScalar."""
    return float(_val(x))
