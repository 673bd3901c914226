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


import os
import tempfile
import unittest
import parameterized

from unittest import mock

import dfdgm.util.config
import dfdgm.util.counts
import dfdgm.util.runutil

from dfdgm.util import experiment
from dfdgm.util.common import read_csv


class RunTest(unittest.TestCase):

    def setUp(self) -> None:
        dfdgm.util.config.reset()
        self.tmpdir = tempfile.TemporaryDirectory()
        self.out = os.path.join(self.tmpdir.name, 'out.csv')

    def tearDown(self) -> None:
        self.tmpdir.cleanup()
        dfdgm.util.config.reset()

    def _read(self, fn: str) -> tuple[list[str], list[str], list[list[str]]]:
        with open(fn, encoding='utf-8') as f:
            lines = f.readlines()
        comments = [x.strip() for x in lines if x.startswith('#')]
        header, rows = read_csv(lines)
        return comments, header, rows

    def test_counts(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['counts', '--system', 'harmonic', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        comments, header, rows = self._read(self.out)
        self.assertEqual(header, ['quantity', 'n', 'measured', 'formula', 'ok'])
        self.assertEqual(len(rows), 12)
        self.assertTrue(all(r[4] == '1' for r in rows))
        self.assertIn('# system = harmonic', comments)

    def test_config_precedence(self) -> None:
        conf = os.path.join(self.tmpdir.name, 'run.conf')
        with open(conf, 'w', encoding='utf-8') as f:
            f.write('# a short harmonic run\nsystem = harmonic\nsteps = 5\nh = 0.1\n')

        ret = dfdgm.util.runutil.run(None, ['integrate', '--config', conf, '--steps', '3', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        comments, header, rows = self._read(self.out)
        self.assertEqual(header, ['t', 'x_1', 'x_2', 'H', 'newton_iters', 'residual', 'evals_cum'])
        self.assertEqual(len(rows), 4)
        self.assertIn('# steps = 3', comments)
        self.assertEqual(float(rows[-1][0]), 0.30000000000000004)

        cfg = experiment.get_experiment()
        self.assertEqual(cfg.system, 'harmonic')
        self.assertEqual(cfg.h, [0.1])

    def test_terrain(self) -> None:
        raster = os.path.join(self.tmpdir.name, 'raster.csv')
        ret = dfdgm.util.runutil.run(None, ['terrain', '--grid-size', '20', '--steps', '20', '--out', self.out,
                                            '--raster-out', raster, '--raster-resolution', '5'])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        comments, header, rows = self._read(self.out)
        self.assertEqual(header[:3], ['t', 'q_1', 'q_2'])
        self.assertEqual(len(rows), 21)
        self.assertIn('# violations = 0', comments)
        self.assertIn('# system = terrain', comments)
        _, header, rows = self._read(raster)
        self.assertEqual(header, ['x', 'y', 'U'])
        self.assertEqual(len(rows), 25)

    def test_converge(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['converge', '--system', 'harmonic', '--method', 'SIA_DF',
                                            '--h', '0.1,0.05,0.025', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        comments, header, rows = self._read(self.out)
        self.assertEqual(header, ['method', 'h', 'steps', 'global_error', 'evals', 'max_iters', 'unconverged'])
        self.assertEqual([r[2] for r in rows], ['10', '20', '40'])
        self.assertTrue(all(r[6] == '0' for r in rows))
        self.assertTrue(any(x.startswith('# slope SIA_DF = ') for x in comments))

    def test_energy_drift(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['energy-drift', '--system', 'harmonic', '--method', 'SIA_DF,RK4',
                                            '--steps', '20', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        _, header, rows = self._read(self.out)
        self.assertEqual(header, ['t', 'SIA_DF', 'RK4'])
        self.assertEqual(len(rows), 20)

    def test_inexactness(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['inexactness', '--levels', '2', '--zero-row', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        comments, header, rows = self._read(self.out)
        self.assertEqual(header, ['h', 's_error', 'f_error', 'jac_error', 's_theory', 'f_theory', 'jac_theory'])
        self.assertEqual([float(r[0]) for r in rows], [0.1, 0.05, 0.0])
        self.assertIn('# zero_row = 1', comments)

    def test_work_precision(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['work-precision', '--system', 'harmonic', '--levels', '2',
                                            '--method', 'SIA_DF,SIA4_AD,RK4', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_OK)
        _, header, rows = self._read(self.out)
        self.assertEqual(header, ['method', 'h', 'steps', 'global_error', 'energy_error', 'evals', 'wall_time',
                                  'unconverged'])
        self.assertEqual(len(rows), 6)
        self.assertEqual([r[0] for r in rows[:2]], ['SIA_DF', 'SIA_DF'])

    def test_rerun_is_identical(self) -> None:
        argv = ['integrate', '--method', 'SIA4_DF', '--steps', '5', '--out', self.out]
        self.assertEqual(dfdgm.util.runutil.run(None, argv), dfdgm.util.runutil.EXIT_OK)
        with open(self.out, 'rb') as f:
            first = f.read()

        dfdgm.util.config.reset()
        self.assertEqual(dfdgm.util.runutil.run(None, argv), dfdgm.util.runutil.EXIT_OK)
        with open(self.out, 'rb') as f:
            self.assertEqual(f.read(), first)

    @parameterized.parameterized.expand([
        ('system', ['--system', 'harmonic']),
        ('noise', ['--inject-noise']),
    ])
    def test_terrain_rejects(self, _: str, extra: list[str]) -> None:
        ret = dfdgm.util.runutil.run(None, ['terrain', '--grid-size', '20', '--steps', '2', '--out', self.out]
                                     + extra)
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_CONFIG)

    def test_unexpected_error(self) -> None:
        with mock.patch.object(dfdgm.util.counts, 'doit', side_effect=TypeError('bad operand')):
            with self.assertLogs(level='ERROR') as logs:
                ret = dfdgm.util.runutil.run(None, ['counts', '--system', 'harmonic', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_FAILED)
        exc_info = logs.records[-1].exc_info
        assert exc_info is not None
        self.assertIsInstance(exc_info[1], TypeError)

    def test_bad_system(self) -> None:
        with self.assertRaises(SystemExit) as cm:
            dfdgm.util.runutil.run(None, ['counts', '--system', 'pendulum'])
        self.assertEqual(cm.exception.code, 2)

    def test_too_few_levels(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['converge', '--system', 'harmonic', '--h', '0.1', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_CONFIG)

    def test_two_methods_for_integrate(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['integrate', '--method', 'SIA_DF,RK4', '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_CONFIG)

    def test_bad_config_file(self) -> None:
        conf = os.path.join(self.tmpdir.name, 'bad.conf')
        with open(conf, 'w', encoding='utf-8') as f:
            f.write('colour = red\n')
        ret = dfdgm.util.runutil.run(None, ['counts', '--config', conf])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_CONFIG)
        ret = dfdgm.util.runutil.run(None, ['counts', '--config', os.path.join(self.tmpdir.name, 'missing.conf')])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_CONFIG)

    def test_energy_domain(self) -> None:
        ret = dfdgm.util.runutil.run(None, ['integrate', '--system', 'lennard-jones', '--x0', '0,1', '--steps', '2',
                                            '--out', self.out])
        self.assertEqual(ret, dfdgm.util.runutil.EXIT_FAILED)
