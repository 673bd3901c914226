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


"""Small systems and switches shared by the tests."""

import os
import unittest

from typing import Any, Sequence

import numpy as np

from dfdgm.systems import HamiltonianSystem, canonical_structure

# Long runs only happen with DFDGM_SLOW_TESTS=1
SLOW_TESTS = os.environ.get('DFDGM_SLOW_TESTS', '') == '1'

slow = unittest.skipUnless(SLOW_TESTS, 'Set DFDGM_SLOW_TESTS=1 to run')


def make_cubic() -> HamiltonianSystem:
    """H = x1^2 x2"""
    return HamiltonianSystem(name='cubic', n=2, energy=lambda x: x[0] * x[0] * x[1],
                             structure=canonical_structure(2))


def make_quadratic(a: np.ndarray) -> HamiltonianSystem:
    """H = x^T A x / 2 for a symmetric A"""
    n = a.shape[0]
    rows = a.tolist()

    def energy(x: Sequence[Any]) -> Any:
        ret: Any = 0.0
        for i in range(n):
            for j in range(n):
                ret = ret + 0.5 * rows[i][j] * x[i] * x[j]
        return ret

    return HamiltonianSystem(name='quadratic', n=n, energy=energy, structure=canonical_structure(n))


def random_symmetric(n: int, seed: int = 0) -> np.ndarray:
    m = np.random.default_rng(seed).standard_normal((n, n))
    return 0.5 * (m + m.T)

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
