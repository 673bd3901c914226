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


import io
import os
import tempfile
import unittest
import dataclasses as dc
import parameterized

from typing import Optional

import dfdgm.util.config

from dfdgm.common import ConfigError


@dc.dataclass
class _Settings:
    name: str = 'x'
    count: int = 1
    scale: float = 1.0
    flag: bool = False
    limit: Optional[float] = None
    values: list[float] = dc.field(default_factory=list)


class MergeConfigTest(unittest.TestCase):

    def test_merge(self) -> None:
        class Obj1:
            t1 = 1
            t2 = 1

        class Obj2:
            t1 = 2
            t3 = 2
            t4 = None

        o1 = Obj1()
        o2 = Obj2()

        mo = dfdgm.util.config.MergedConfig(o1, o2)

        self.assertEqual(mo.t1, 1)
        self.assertEqual(mo.t2, 1)
        self.assertEqual(mo.t3, 2)
        self.assertIsNone(mo.t4)

        mo.t1 = 9
        self.assertEqual(mo.t1, 9)
        self.assertEqual(o1.t1, 9)
        self.assertEqual(o2.t1, 2)

        mo.t3 = 9
        self.assertEqual(o2.t3, 9)

        with self.assertRaises(AttributeError):
            _ = mo.t5
        with self.assertRaises(AttributeError):
            mo.t5 = 1

    def test_registry(self) -> None:
        dfdgm.util.config.reset()
        first = _Settings(name='first')
        dfdgm.util.config.set_module_config('settings', first)
        dfdgm.util.config.set_module_config('settings', _Settings(name='second'))

        self.assertIs(dfdgm.util.config.get_module_config('settings'), first)
        self.assertEqual(dfdgm.util.config.get_config().name, 'first')
        self.assertFalse(dfdgm.util.config.get_config().debug)

        dfdgm.util.config.reset()
        self.assertIsNone(dfdgm.util.config.get_module_config('settings'))


class ConfigFileTest(unittest.TestCase):

    def test_parse(self) -> None:
        text = '# settings\n\nname = abc\nmax-iter = 7\nvalues = 0.1, 0.2\nempty =\n'
        values = dfdgm.util.config.parse_config_file(io.StringIO(text))
        self.assertEqual(values, {'name': 'abc', 'max_iter': '7', 'values': '0.1, 0.2', 'empty': ''})

    @parameterized.parameterized.expand([
        ('no equals', 'name abc\n'),
        ('no key', '= 3\n'),
        ('duplicate', 'count = 1\ncount = 2\n'),
    ])
    def test_parse_errors(self, _: str, text: str) -> None:
        with self.assertRaises(ConfigError):
            dfdgm.util.config.parse_config_file(io.StringIO(text))

    def test_apply(self) -> None:
        cfg = _Settings()
        dfdgm.util.config.apply_config_file(cfg, {'name': 'run', 'count': '3', 'scale': '2.5', 'flag': 'yes',
                                                  'limit': '0.5', 'values': '1, 2.5'})
        self.assertEqual(cfg, _Settings(name='run', count=3, scale=2.5, flag=True, limit=0.5, values=[1.0, 2.5]))

        dfdgm.util.config.apply_config_file(cfg, {'limit': 'none', 'flag': 'off'})
        self.assertIsNone(cfg.limit)
        self.assertFalse(cfg.flag)

    @parameterized.parameterized.expand([
        ('unknown', {'colour': 'red'}),
        ('bad int', {'count': '1.5'}),
        ('bad bool', {'flag': 'maybe'}),
        ('bad list', {'values': '1, x'}),
    ])
    def test_apply_errors(self, _: str, values: dict[str, str]) -> None:
        with self.assertRaises(ConfigError):
            dfdgm.util.config.apply_config_file(_Settings(), values)

    def test_load(self) -> None:
        with tempfile.TemporaryDirectory() as d:
            fn = os.path.join(d, 'run.conf')
            with open(fn, 'w', encoding='utf-8') as f:
                f.write('count = 4\n')
            self.assertEqual(dfdgm.util.config.load_config_file(fn), {'count': '4'})
            with self.assertRaises(ConfigError):
                dfdgm.util.config.load_config_file(os.path.join(d, 'missing.conf'))
