#!/usr/bin/env python3
# coding=UTF-8
#
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

from setuptools import setup

version='0.1.0'

packages=[
    'dfdgm',
    'dfdgm.util',
    'dfdgm.util.converge',
    'dfdgm.util.counts',
    'dfdgm.util.energy_drift',
    'dfdgm.util.inexactness',
    'dfdgm.util.integrate',
    'dfdgm.util.terrain',
    'dfdgm.util.work_precision',
]

package_dirs={'dfdgm': 'src/dfdgm'}

scripts=['src/bin/dfdgm.py']

install_requires=[
    'numpy>=1.24',
    'scipy>=1.10',
]

setup(
    name            = 'dfdgm',
    version         = version,
    description     = 'Derivative-free energy-preserving discrete gradient methods',
    packages        = packages,
    package_dir     = package_dirs,
    scripts         = scripts,
    install_requires = install_requires,
    python_requires = '>=3.10',
)

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
