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


import unittest
import parameterized

import numpy as np

import dfdgm.autodiff
import dfdgm.discrete_gradient as dgm

from dfdgm import systems, testlib
from dfdgm.common import DimensionError
from dfdgm.systems import EvalCounter

KINDS = [
    ('IA_FD', dgm.IA_FD),
    ('SIA_FD', dgm.SIA_FD),
    ('IA_AD', dgm.IA_AD),
    ('SIA_AD', dgm.SIA_AD),
]


class DiscreteGradientTest(unittest.TestCase):

    @parameterized.parameterized.expand([
        ('ia', dgm.IA_FD, [3.0, 4.0]),
        ('sia', dgm.SIA_FD, [6.0, 2.5]),
    ])
    def test_cubic(self, _: str, kind: dgm.DiscreteGradientKind, expected: list[float]) -> None:
        sys_ = testlib.make_cubic()
        x = np.array([1.0, 1.0])
        xhat = np.array([2.0, 3.0])
        r = dgm.discrete_gradient(kind, sys_, x, xhat, EvalCounter())
        np.testing.assert_allclose(r.value, expected, rtol=1e-15)
        # H(2,3) - H(1,1) = 11
        self.assertAlmostEqual(float(r.value @ (xhat - x)), 11.0, places=13)

    def test_ia_sia_relation(self) -> None:
        sys_ = testlib.make_cubic()
        x = np.array([1.0, 1.0])
        xhat = np.array([2.0, 3.0])
        fwd = dgm.ia_dg(sys_, x, xhat, EvalCounter()).value
        bwd = dgm.ia_dg(sys_, xhat, x, EvalCounter()).value
        np.testing.assert_allclose(bwd, [9.0, 1.0])
        np.testing.assert_allclose(dgm.sia_dg(sys_, x, xhat, EvalCounter()).value, 0.5 * (fwd + bwd))

    @parameterized.parameterized.expand(KINDS)
    def test_quadratic_midpoint(self, _: str, kind: dgm.DiscreteGradientKind) -> None:
        sys_ = systems.make_harmonic(4)
        rng = np.random.default_rng(5)
        for _i in range(10):
            x = rng.standard_normal(4)
            xhat = rng.standard_normal(4)
            r = dgm.discrete_gradient(kind, sys_, x, xhat, EvalCounter())
            np.testing.assert_allclose(r.value.astype(float), 0.5 * (x + xhat), rtol=1e-10, atol=1e-12)

        r = dgm.ia_dg(systems.make_harmonic(), np.array([0.0, 0.0]), np.array([2.0, 4.0]), EvalCounter())
        np.testing.assert_allclose(r.value, [1.0, 2.0])

    @parameterized.parameterized.expand(KINDS)
    def test_consistency(self, _: str, kind: dgm.DiscreteGradientKind) -> None:
        sys_ = testlib.make_cubic()
        x = np.array([1.0, 1.0])
        r = dgm.discrete_gradient(kind, sys_, x, x.copy(), EvalCounter())
        if kind.derivatives == dgm.Derivatives.AD:
            np.testing.assert_array_equal(r.value, [2.0, 1.0])
        else:
            np.testing.assert_allclose(r.value, [2.0, 1.0], atol=1e-8)

    @parameterized.parameterized.expand([
        (name, kname, kind) for name in systems.SYSTEMS for kname, kind in KINDS
    ])
    def test_discrete_gradient_property(self, name: str, _: str, kind: dgm.DiscreteGradientKind) -> None:
        sys_ = systems.get_system(name)
        x0 = np.array(systems.INITIAL_STATES[name])
        rng = np.random.default_rng(11)
        count = 1000 if testlib.SLOW_TESTS else 100
        for _i in range(count):
            x = x0 + 0.1 * rng.standard_normal(sys_.n)
            xhat = x0 + 0.1 * rng.standard_normal(sys_.n)
            dg = dgm.discrete_gradient(kind, sys_, x, xhat, EvalCounter()).value
            e = systems.eval_energy(sys_, x, None)
            ehat = systems.eval_energy(sys_, xhat, None)
            lhs = float(dg @ (xhat - x))
            self.assertLessEqual(abs(lhs - (ehat - e)), 1e-12 * (1 + abs(e) + abs(ehat)))

    def test_symmetry(self) -> None:
        sys_ = systems.make_double_pendulum()
        rng = np.random.default_rng(2)
        x = rng.standard_normal(4)
        xhat = rng.standard_normal(4)
        a = dgm.sia_dg(sys_, x, xhat, EvalCounter()).value
        b = dgm.sia_dg(sys_, xhat, x, EvalCounter()).value
        np.testing.assert_array_equal(a, b)

    @parameterized.parameterized.expand([(2,), (4,), (6,)])
    def test_counts(self, n: int) -> None:
        sys_ = systems.make_harmonic(n)
        rng = np.random.default_rng(n)
        x = rng.standard_normal(n)
        xhat = rng.standard_normal(n)
        counter = EvalCounter()
        self.assertEqual(dgm.ia_dg(sys_, x, xhat, counter).evals_used, 2 * n)
        self.assertEqual(dgm.sia_dg(sys_, x, xhat, counter).evals_used, 4 * n)
        self.assertEqual(counter.count, 6 * n)

    def test_degenerate_coordinate(self) -> None:
        sys_ = testlib.make_cubic()
        x = np.array([1.0, 1.0])
        xhat = np.array([2.0, 1.0])
        counter = EvalCounter()
        r = dgm.ia_dg(sys_, x, xhat, counter)
        # Component 2 is the partial in x2 at Xhat_1 = [2, 1]
        np.testing.assert_allclose(r.value, [3.0, 4.0], atol=1e-8)
        self.assertEqual(r.evals_used, 4)
        self.assertTrue(dgm.is_degenerate(1.0, 1.0 + 1e-9))
        self.assertFalse(dgm.is_degenerate(1.0, 1.0 + 1e-7))

    def test_dimension_mismatch(self) -> None:
        with self.assertRaises(DimensionError):
            dgm.ia_dg(systems.make_harmonic(), np.zeros(2), np.zeros(3), EvalCounter())

    def test_jet_input(self) -> None:
        sys_ = testlib.make_cubic()
        x = np.array([1.0, 1.0])
        xhat = np.array([2.0, 3.0])
        # Derivative in xhat through the discrete gradient, against the dual-number Jacobian
        jac = dfdgm.autodiff.d2_dg_ad(dgm.SIA_AD, sys_, x, xhat)
        eps = 1e-6
        for j in range(2):
            step = np.zeros(2)
            step[j] = eps
            plus = dgm.sia_dg(sys_, x, xhat + step, EvalCounter()).value
            minus = dgm.sia_dg(sys_, x, xhat - step, EvalCounter()).value
            np.testing.assert_allclose(jac[:, j], (plus - minus) / (2 * eps), atol=1e-7)
