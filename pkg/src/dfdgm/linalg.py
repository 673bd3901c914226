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

import warnings

import numpy as np
import scipy.linalg

from dfdgm.common import SingularJacobianError

PIVOT_RTOL = 1e-14


def lu_solve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solves a x = b by LU with partial pivoting.

    Raises SingularJacobianError when a pivot is below PIVOT_RTOL * ||a||_inf.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if not np.all(np.isfinite(a)) or not np.all(np.isfinite(b)):
        raise SingularJacobianError('Non-finite entries in the linear system')

    norm = np.linalg.norm(a, np.inf)
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)

    pivots = np.abs(np.diag(lu))
    if norm == 0 or pivots.min() < PIVOT_RTOL * norm:
        raise SingularJacobianError(f'Pivot {pivots.min():.3e} below {PIVOT_RTOL:g} * {norm:.3e}')

    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
