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


import math
import unittest
import parameterized

import numpy as np

import dfdgm.dual as ad

from dfdgm.common import UnsupportedOperationError


class DualTest(unittest.TestCase):

    def test_arithmetic(self) -> None:
        tag = ad.new_tag()
        x = ad.Dual(2.0, 1.0, tag)
        f = x * x + 3 * x - 1
        self.assertEqual(ad.primal(f), 9.0)
        self.assertEqual(ad.tangent(f, tag), 7.0)

        g = 1 / x
        self.assertAlmostEqual(ad.primal(g), 0.5)
        self.assertAlmostEqual(ad.tangent(g, tag), -0.25)

        h = (x - 5) / (2 - x * 3)
        # d/dx (x-5)/(2-3x) = (2-3x + 3(x-5)) / (2-3x)^2 = -13 / 16
        self.assertAlmostEqual(ad.tangent(h, tag), -13.0 / 16.0)

    @parameterized.parameterized.expand([
        ('square', 2, 1.21),
        ('negative', -6, 1.21),
        ('fractional', 0.5, 2.0),
        ('large', -12, 0.9),
    ])
    def test_pow(self, _: str, p: float, v: float) -> None:
        tag = ad.new_tag()
        f = ad.Dual(v, 1.0, tag) ** p
        self.assertAlmostEqual(ad.primal(f), v ** p)
        self.assertAlmostEqual(ad.tangent(f, tag), p * v ** (p - 1))

    @parameterized.parameterized.expand([
        ('sin', ad.sin, math.sin, math.cos),
        ('cos', ad.cos, math.cos, lambda v: -math.sin(v)),
        ('exp', ad.exp, math.exp, math.exp),
        ('log', ad.log, math.log, lambda v: 1 / v),
        ('sqrt', ad.sqrt, math.sqrt, lambda v: 0.5 / math.sqrt(v)),
    ])
    def test_elementary(self, _: str, fn, ref, dref) -> None:  # type: ignore
        v = 0.7
        tag = ad.new_tag()
        f = fn(ad.Dual(v, 1.0, tag))
        self.assertAlmostEqual(ad.primal(f), ref(v))
        self.assertAlmostEqual(ad.tangent(f, tag), dref(v))
        # Plain numbers go to math
        self.assertEqual(fn(v), ref(v))

    def test_nested_second_derivative(self) -> None:
        inner = ad.new_tag()
        outer = ad.new_tag()
        x = ad.Dual(ad.Dual(2.0, 1.0, inner), ad.Dual(1.0, 0.0, inner), outer)
        f = x * x * x
        self.assertEqual(ad.primal(f), 8.0)
        df = ad.tangent(f, outer)
        self.assertEqual(ad.primal(df), 12.0)
        self.assertEqual(ad.tangent(df, inner), 12.0)

    def test_mixed_tags(self) -> None:
        ta = ad.new_tag()
        tb = ad.new_tag()
        x = ad.Dual(3.0, 1.0, ta)
        y = ad.Dual(5.0, 1.0, tb)
        f = x * y
        # y has the larger tag and is the outer structure
        self.assertEqual(f.tag, tb)
        self.assertEqual(ad.primal(f), 15.0)
        self.assertEqual(ad.primal(ad.tangent(f, tb)), 3.0)
        self.assertEqual(ad.tangent(f.value, ta), 5.0)

    @parameterized.parameterized.expand([
        ('add', lambda a, b: a + b, 1.0, 1.0),
        ('sub', lambda a, b: a - b, 1.0, -1.0),
        ('mul', lambda a, b: a * b, 5.0, 3.0),
        ('div', lambda a, b: a / b, 0.2, -3.0 / 25.0),
        ('pow', lambda a, b: a ** b, 405.0, 243.0 * math.log(3.0)),
    ])
    def test_inner_operand_first(self, _: str, op, d_inner: float, d_outer: float) -> None:  # type: ignore
        ta = ad.new_tag()
        tb = ad.new_tag()
        x = ad.Dual(3.0, 1.0, ta)
        y = ad.Dual(5.0, 1.0, tb)
        f = op(x, y)
        self.assertEqual(f.tag, tb)
        self.assertAlmostEqual(ad.tangent(f.value, ta), d_inner, places=10)
        self.assertAlmostEqual(ad.primal(ad.tangent(f, tb)), d_outer, places=10)

    def test_dual2(self) -> None:
        tag = ad.new_tag()
        x = ad.Dual2(3.0, 1.0, 0.0, 0.0, tag)
        y = ad.Dual2(5.0, 0.0, 1.0, 0.0, tag)
        f = x * y + ad.sin(x)
        self.assertAlmostEqual(f.value, 15.0 + math.sin(3.0))
        self.assertAlmostEqual(f.d1, 5.0 + math.cos(3.0))
        self.assertAlmostEqual(f.d2, 3.0)
        self.assertAlmostEqual(f.d12, 1.0)

        # Diagonal second derivative of x^4: 12 x^2
        xx = ad.Dual2(2.0, 1.0, 1.0, 0.0, tag)
        self.assertAlmostEqual((xx ** 4).d12, 48.0)

    def test_vector_deriv(self) -> None:
        tag = ad.new_tag()
        x = ad.Dual(2.0, np.array([1.0, 0.0]), tag)
        y = ad.Dual(3.0, np.array([0.0, 1.0]), tag)
        np.testing.assert_array_equal(ad.tangent(x * y, tag), [3.0, 2.0])

    def test_numpy_scalars(self) -> None:
        tag = ad.new_tag()
        x = ad.Dual(1.0, 1.0, tag)
        f = np.float64(2.0) * x + np.float64(1.0)
        self.assertIsInstance(f, ad.Dual)
        self.assertEqual(ad.tangent(f, tag), 2.0)

    def test_float_conversion(self) -> None:
        with self.assertRaises(UnsupportedOperationError):
            float(ad.Dual(1.0, 1.0, ad.new_tag()))
        with self.assertRaises(UnsupportedOperationError):
            math.sin(ad.Dual(1.0, 1.0, ad.new_tag()))  # type: ignore

    def test_comparisons(self) -> None:
        x = ad.Dual(1.0, 5.0, ad.new_tag())
        self.assertTrue(x < 2)
        self.assertTrue(x >= 1.0)
        self.assertFalse(x > 1.0)
        self.assertEqual(ad.primal(abs(ad.Dual(-2.0, 1.0, 1))), 2.0)

    def test_partial(self) -> None:
        def fn(p):  # type: ignore
            return p[0] * p[0] * p[1] + ad.exp(p[1])

        point = np.array([2.0, 0.5])
        self.assertAlmostEqual(ad.partial(fn, point, 0), 2.0)
        self.assertAlmostEqual(ad.partial(fn, point, 1), 4.0 + math.exp(0.5))

    def test_result_dtype(self) -> None:
        self.assertEqual(ad.result_dtype(np.zeros(2), np.zeros(2)), np.float64)
        self.assertEqual(ad.result_dtype(np.zeros(2), np.zeros(2, dtype=object)), object)
