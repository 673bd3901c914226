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

"""Exact derivatives through dual-number evaluation of the energy.

All functions accept float states as well as object arrays of jets, so they can be nested
inside an outer differentiation (see jacobian_ad).
"""

from typing import Any, Callable, Optional

import numpy as np

import dfdgm.dual as ad
import dfdgm.discrete_gradient as dgm

from dfdgm.systems import EvalCounter, System, eval_energy


def _seed(x: np.ndarray, i: int, tag: int) -> np.ndarray:
    ret = np.array(x, dtype=object)
    ret[i] = ad.Dual(ret[i], 1.0, tag)
    return ret


def grad_ad(system: System, x: np.ndarray, counter: Optional[EvalCounter] = None) -> np.ndarray:
    """Gradient, one dual evaluation per coordinate."""
    n = system.n
    ret = np.empty(n, dtype=ad.result_dtype(x))
    for i in range(n):
        tag = ad.new_tag()
        ret[i] = ad.tangent(eval_energy(system, _seed(x, i, tag), counter), tag)
    return ret


def hess_ad(system: System, x: np.ndarray, counter: Optional[EvalCounter] = None) -> np.ndarray:
    """Hessian from one second-order jet per direction pair (i, j), symmetrized."""
    n = system.n
    raw = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            tag = ad.new_tag()
            point = np.array(x, dtype=object)
            for k in range(n):
                point[k] = ad.Dual2(point[k], 1.0 if k == i else 0.0, 1.0 if k == j else 0.0, 0.0, tag)
            val = eval_energy(system, point, counter)
            if isinstance(val, ad.Dual2) and val.tag == tag:
                raw[i, j] = val.d12
            else:
                raw[i, j] = 0.0

    ret = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            ret[i, j] = 0.5 * (raw[i, j] + raw[j, i])

    if x.dtype == object:
        return ret
    return ret.astype(np.float64)


def d2_dg_ad(kind: dgm.DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray,
             counter: Optional[EvalCounter] = None) -> np.ndarray:
    """Jacobian of the discrete gradient in its second argument, one column per dual pass."""
    n = system.n
    ad_kind = dgm.DiscreteGradientKind(kind.dg, dgm.Derivatives.AD, kind.tau1)
    if counter is None:
        counter = EvalCounter()
    ret = np.empty((n, n), dtype=ad.result_dtype(x, xhat))
    for j in range(n):
        tag = ad.new_tag()
        value = dgm.discrete_gradient(ad_kind, system, x, _seed(xhat, j, tag), counter).value
        for i in range(n):
            ret[i, j] = ad.tangent(value[i], tag)
    return ret


def jacobian_ad(fn: Callable[[np.ndarray], np.ndarray], x: np.ndarray) -> np.ndarray:
    """Jacobian of a vector map evaluated in a single pass with vector-valued derivatives.

    fn must accept an object array and be built from jet-aware operations.
    """
    n = len(x)
    tag = ad.new_tag()
    seeded = np.empty(n, dtype=object)
    eye = np.eye(n)
    for i in range(n):
        seeded[i] = ad.Dual(float(x[i]), eye[i], tag)
    out = fn(seeded)
    ret = np.zeros((len(out), n))
    for i, v in enumerate(out):
        d: Any = ad.tangent(v, tag)
        ret[i] = d
    return ret


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
