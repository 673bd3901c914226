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

from dfdgm import studies, terrain
from dfdgm.finite_diff import FDConfig
from dfdgm.integrators import MethodKind, NewtonConfig
from dfdgm.systems import make_double_pendulum, make_harmonic

DP_X0 = np.array([0.1, 0.2, 0.25, -0.3])


class HelpersTest(unittest.TestCase):

    def test_h_levels(self) -> None:
        self.assertEqual(studies.h_levels(0.1, 3), [0.1, 0.05, 0.025])
        self.assertEqual(studies.h_levels(0.5, 1), [0.5])

    @parameterized.parameterized.expand([
        (1.0, 0.1, 10),
        (1.0, 0.025, 40),
        (2.0, 0.5, 4),
    ])
    def test_steps_for(self, T: float, h: float, expected: int) -> None:
        self.assertEqual(studies.steps_for(T, h), expected)

    def test_steps_for_bad(self) -> None:
        with self.assertRaises(ValueError):
            studies.steps_for(1.0, 0.3)
        with self.assertRaises(ValueError):
            studies.steps_for(1.0, 4.0)

    def test_cell_config(self) -> None:
        cfg = NewtonConfig(tol=1e-9, seed=5)
        cell = studies.cell_config(cfg, 3)
        self.assertEqual(cell.seed, 8)
        self.assertEqual(cell.tol, 1e-9)

    def test_fit_slope(self) -> None:
        hs = [0.1, 0.05, 0.025, 0.0125]
        self.assertAlmostEqual(studies.fit_slope(hs, [h ** 2 for h in hs]), 2.0, places=10)
        self.assertAlmostEqual(studies.fit_slope(hs, [3 * h ** 4 for h in hs]), 4.0, places=10)
        # Points at the floor are left out
        errors = [1e-4, 6.25e-6, 1e-12, 1e-12]
        self.assertAlmostEqual(studies.fit_slope(hs, errors), 4.0, places=10)
        self.assertIsNone(studies.fit_slope(hs, [1e-4, 1e-12, 1e-12, 1e-12]))


class CountTest(unittest.TestCase):

    @parameterized.parameterized.expand([
        ('harmonic', make_harmonic, np.array([1.0, 0.3]), 0.1),
        ('double-pendulum', make_double_pendulum, DP_X0, 0.05),
    ])
    def test_counts(self, _: str, factory, x: np.ndarray, h: float) -> None:  # type: ignore
        rows = studies.count_table(factory(), x, h, NewtonConfig())
        for row in rows:
            self.assertTrue(row.ok, f'{row.quantity}: measured {row.measured}, expected {row.formula}')
        self.assertEqual(len(rows), 12)

    def test_formulas(self) -> None:
        rows = {r.quantity: r for r in studies.count_table(make_double_pendulum(), DP_X0, 0.05, NewtonConfig())}
        self.assertEqual(rows['iteration_IA_DF'].formula, 48)
        self.assertEqual(rows['iteration_SIA_DF'].formula, 96)
        self.assertEqual(rows['iteration_SIA4_DF'].formula, 221)
        self.assertEqual(rows['s4_tau'].measured, 125)
        self.assertEqual(rows['fd_hessian'].measured, 29)


class InexactnessTest(unittest.TestCase):

    def test_zero_step(self) -> None:
        rows = studies.inexactness_study(make_double_pendulum(), DP_X0, [0.0], NewtonConfig())
        self.assertLessEqual(rows[0].s_error, 1e-14)
        self.assertEqual(rows[0].f_error, 0.0)
        self.assertEqual(rows[0].jac_error, 0.0)

    def test_jacobian_error_is_second_order(self) -> None:
        hs = [0.1, 0.05, 0.025, 0.0125]
        rows = studies.inexactness_study(make_double_pendulum(), DP_X0, hs, NewtonConfig())
        slope = studies.fit_slope(hs, [r.jac_error for r in rows])
        assert slope is not None
        self.assertGreater(slope, 1.7)
        self.assertLess(slope, 2.3)
        for r in rows:
            self.assertLessEqual(r.s_error, 1e-6)
            self.assertLessEqual(r.f_error, 1e-7)
            self.assertAlmostEqual(r.s_theory, 1e-10 + r.h ** 2 * 10 ** -7.5)

    def test_noise(self) -> None:
        rows = studies.inexactness_study(make_double_pendulum(), DP_X0, [0.05, 0.025], NewtonConfig(),
                                         inject_noise=True)
        for r in rows:
            self.assertTrue(np.isfinite(r.jac_error))
            self.assertLessEqual(r.s_error, 1e-5)
            self.assertLessEqual(r.f_error, 1e-6)

    @parameterized.parameterized.expand([(1e-2,), (1e-3,)])
    def test_s4_error_tracks_precision(self, h: float) -> None:
        errors = []
        for eps in [1e-9, 1e-15]:
            cfg = NewtonConfig(fd=FDConfig.for_precision(eps))
            rows = studies.inexactness_study(make_double_pendulum(), DP_X0, [h], cfg, inject_noise=True)
            errors.append(rows[0].s_error)
        # The error scales as eps_bar^(2/3), 1e4 over six decades
        ratio = errors[0] / errors[1]
        self.assertGreater(ratio, 1e3)
        self.assertLess(ratio, 1e5)


class StudyTest(unittest.TestCase):

    def test_convergence(self) -> None:
        hs = [0.1, 0.05, 0.025]
        res = studies.convergence_study(make_harmonic(), [MethodKind.SIA_DF, MethodKind.RK4],
                                        np.array([1.0, 0.0]), 1.0, hs, NewtonConfig())
        self.assertEqual(len(res.rows), 6)
        self.assertEqual([r.steps for r in res.rows[:3]], [10, 20, 40])
        slope = res.slopes[MethodKind.SIA_DF]
        assert slope is not None
        self.assertAlmostEqual(slope, 2.0, delta=0.1)
        slope = res.slopes[MethodKind.RK4]
        assert slope is not None
        self.assertAlmostEqual(slope, 4.0, delta=0.2)

    def test_convergence_needs_levels(self) -> None:
        with self.assertRaises(ValueError):
            studies.convergence_study(make_harmonic(), [MethodKind.SIA_DF], np.array([1.0, 0.0]), 1.0,
                                      [0.1, 0.05], NewtonConfig())

    def test_error_series(self) -> None:
        series = studies.error_series(make_harmonic(), MethodKind.SIA_DF, np.array([1.0, 0.0]), 0.1, 10,
                                      NewtonConfig())
        self.assertEqual(len(series.errors), 11)
        self.assertEqual(series.errors[0], 0.0)
        self.assertTrue(np.all(series.errors[1:] > 0))

    def test_energy_drift(self) -> None:
        res = studies.energy_drift_study(make_harmonic(), [MethodKind.SIA_DF, MethodKind.RK4],
                                         np.array([1.0, 0.0]), 0.1, 50, NewtonConfig())
        self.assertEqual(list(res), [MethodKind.SIA_DF, MethodKind.RK4])
        self.assertEqual(len(res[MethodKind.SIA_DF]), 51)
        self.assertLessEqual(res[MethodKind.SIA_DF].energy_drift().max(), 1e-10)
        self.assertGreater(res[MethodKind.RK4].energy_drift().max(), 1e-8)

    def test_work_precision(self) -> None:
        rows = studies.work_precision_study(make_harmonic(), [MethodKind.SIA_DF, MethodKind.RK4],
                                            np.array([1.0, 0.0]), 1.0, [0.1, 0.05], NewtonConfig())
        self.assertEqual(len(rows), 4)
        sia = [r for r in rows if r.method == MethodKind.SIA_DF]
        self.assertLess(sia[0].evals, sia[1].evals)
        self.assertGreater(sia[0].error, sia[1].error)
        for r in rows:
            self.assertEqual(r.unconverged, 0)
            self.assertGreaterEqual(r.wall_time, 0.0)

    def test_terrain_needs_derivative_free(self) -> None:
        with self.assertRaises(ValueError):
            studies.terrain_study(terrain.synth_grid(0, size=8), np.zeros(4), 0.02, 10, NewtonConfig(),
                                  method=MethodKind.SIA4_AD)
