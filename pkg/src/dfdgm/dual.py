# Copyright (c) 2024 The dfdgm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Forward-mode dual scalars.

Energy functions are written against the elementary functions of this module (sin, cos, exp,
log, sqrt) instead of math.*. Those dispatch to math for plain numbers and propagate
derivatives for Dual and Dual2.

Every seeded dual carries a tag. Components of a dual may themselves be duals with a smaller
tag, which gives nested (higher-order) differentiation. When two duals with different tags
meet, the one with the larger tag is the outer structure and the other one is treated as a
constant at that level.
"""

import math
import itertools

from typing import Any, Callable, Union

import numpy as np

from dfdgm.common import UnsupportedOperationError

_tags = itertools.count(1)


def new_tag() -> int:
    return next(_tags)


class _Jet:
    """Common behaviour of the dual types."""
    __slots__ = ('value', 'tag')

    # numpy scalars must hand mixed arithmetic over to the reflected jet operators
    __array_ufunc__ = None

    value: Any
    tag: int

    def _coerce(self, other: Any) -> Any:
        raise NotImplementedError()

    def _defer(self, other: Any) -> bool:
        """Whether the other operand is an inner jet that has to drive the operation."""
        return isinstance(other, _Jet) and other.tag > self.tag

    def __float__(self) -> float:
        raise UnsupportedOperationError(f'Cannot convert {type(self).__name__} to float; '
                                        f'use dfdgm.dual functions inside energy functions')

    def __lt__(self, other: Any) -> bool:
        return primal(self) < primal(other)

    def __le__(self, other: Any) -> bool:
        return primal(self) <= primal(other)

    def __gt__(self, other: Any) -> bool:
        return primal(self) > primal(other)

    def __ge__(self, other: Any) -> bool:
        return primal(self) >= primal(other)

    def __abs__(self) -> Any:
        if primal(self) < 0:
            return -self
        return self

    def __pos__(self) -> Any:
        return self

    def __neg__(self) -> Any:
        raise NotImplementedError()

    def __radd__(self, other: Any) -> Any:
        return self.__add__(other)

    def __add__(self, other: Any) -> Any:
        raise NotImplementedError()

    def __sub__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__rsub__(self)
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> Any:
        return (-self) + other

    def __rmul__(self, other: Any) -> Any:
        return self.__mul__(other)

    def __mul__(self, other: Any) -> Any:
        raise NotImplementedError()

    def __truediv__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__rtruediv__(self)
        return self * _reciprocal(self._coerce(other))

    def __rtruediv__(self, other: Any) -> Any:
        return _reciprocal(self) * other

    def __pow__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__rpow__(self)
        if isinstance(other, _Jet):
            return exp(other * log(self))
        p = other
        v = self.value
        if p == 0:
            return self._coerce(1.0)
        if p == 1:
            return self
        return self.chain(v ** p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2) if p != 2 else 2.0)

    def __rpow__(self, other: Any) -> Any:
        return exp(self * log(other))

    def chain(self, f: Any, df: Any, d2f: Any) -> Any:
        raise NotImplementedError()


class Dual(_Jet):
    """A first-order dual scalar: value + deriv·ε with ε² = 0.

    deriv may be a number, a numpy vector (several directions at once) or another jet.
    """
    __slots__ = ('deriv',)

    deriv: Any

    def __init__(self, value: Any, deriv: Any = 0.0, tag: int = 0) -> None:
        self.value = value
        self.deriv = deriv
        self.tag = tag

    def __repr__(self) -> str:
        return f'Dual({self.value!r}, {self.deriv!r}, tag={self.tag})'

    def _coerce(self, other: Any) -> 'Dual':
        if isinstance(other, Dual) and other.tag == self.tag:
            return other
        return Dual(other, 0.0, self.tag)

    def __neg__(self) -> 'Dual':
        return Dual(-self.value, -self.deriv, self.tag)

    def __add__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__radd__(self)
        o = self._coerce(other)
        return Dual(self.value + o.value, self.deriv + o.deriv, self.tag)

    def __mul__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__rmul__(self)
        o = self._coerce(other)
        return Dual(self.value * o.value, self.value * o.deriv + self.deriv * o.value, self.tag)

    def chain(self, f: Any, df: Any, d2f: Any) -> 'Dual':
        return Dual(f, df * self.deriv, self.tag)


class Dual2(_Jet):
    """A two-direction second-order jet.

    Tracks value, the two directional derivatives d1, d2 and the mixed second derivative d12.
    """
    __slots__ = ('d1', 'd2', 'd12')

    d1: Any
    d2: Any
    d12: Any

    def __init__(self, value: Any, d1: Any = 0.0, d2: Any = 0.0, d12: Any = 0.0, tag: int = 0) -> None:
        self.value = value
        self.d1 = d1
        self.d2 = d2
        self.d12 = d12
        self.tag = tag

    def __repr__(self) -> str:
        return f'Dual2({self.value!r}, {self.d1!r}, {self.d2!r}, {self.d12!r}, tag={self.tag})'

    def _coerce(self, other: Any) -> 'Dual2':
        if isinstance(other, Dual2) and other.tag == self.tag:
            return other
        return Dual2(other, 0.0, 0.0, 0.0, self.tag)

    def __neg__(self) -> 'Dual2':
        return Dual2(-self.value, -self.d1, -self.d2, -self.d12, self.tag)

    def __add__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__radd__(self)
        o = self._coerce(other)
        return Dual2(self.value + o.value, self.d1 + o.d1, self.d2 + o.d2, self.d12 + o.d12, self.tag)

    def __mul__(self, other: Any) -> Any:
        if self._defer(other):
            return other.__rmul__(self)
        o = self._coerce(other)
        a = self
        return Dual2(a.value * o.value,
                     a.d1 * o.value + a.value * o.d1,
                     a.d2 * o.value + a.value * o.d2,
                     a.d12 * o.value + a.d1 * o.d2 + a.d2 * o.d1 + a.value * o.d12,
                     self.tag)

    def chain(self, f: Any, df: Any, d2f: Any) -> 'Dual2':
        return Dual2(f, df * self.d1, df * self.d2, d2f * self.d1 * self.d2 + df * self.d12, self.tag)


Scalar = Union[float, Dual, Dual2]


def _reciprocal(x: Any) -> Any:
    v = x.value
    inv = 1.0 / v
    return x.chain(inv, -inv * inv, 2.0 * inv * inv * inv)


def primal(x: Any) -> float:
    """Strips all derivative parts."""
    while isinstance(x, _Jet):
        x = x.value
    return float(x)


def tangent(x: Any, tag: int) -> Any:
    """The derivative part of x with respect to the seed with the given tag."""
    if isinstance(x, Dual) and x.tag == tag:
        return x.deriv
    return 0.0


def is_jet(x: Any) -> bool:
    return isinstance(x, _Jet)


def sin(x: Any) -> Any:
    if isinstance(x, _Jet):
        v = x.value
        s = sin(v)
        return x.chain(s, cos(v), -s)
    return math.sin(x)


def cos(x: Any) -> Any:
    if isinstance(x, _Jet):
        v = x.value
        c = cos(v)
        return x.chain(c, -sin(v), -c)
    return math.cos(x)


def exp(x: Any) -> Any:
    if isinstance(x, _Jet):
        e = exp(x.value)
        return x.chain(e, e, e)
    return math.exp(x)


def log(x: Any) -> Any:
    if isinstance(x, _Jet):
        v = x.value
        inv = 1.0 / v
        return x.chain(log(v), inv, -inv * inv)
    return math.log(x)


def sqrt(x: Any) -> Any:
    if isinstance(x, _Jet):
        s = sqrt(x.value)
        return x.chain(s, 0.5 / s, -0.25 / (s * s * s))
    return math.sqrt(x)


def partial(fn: Callable[[np.ndarray], Any], point: np.ndarray, i: int) -> Any:
    """Exact partial derivative of fn with respect to coordinate i, at point."""
    tag = new_tag()
    seeded = np.array(point, dtype=object)
    seeded[i] = Dual(seeded[i], 1.0, tag)
    return tangent(fn(seeded), tag)


def result_dtype(*arrays: np.ndarray) -> Any:
    """float64 unless any input already carries jets."""
    for a in arrays:
        if a.dtype == object:
            return object
    return np.float64


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
