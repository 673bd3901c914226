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

"""The Itoh-Abe (IA) and symmetrized Itoh-Abe (SIA) discrete gradients.

With h_i = xhat_i - x_i, the points visited are

    Xhat_m = [xhat_1 .. xhat_m, x_{m+1} .. x_n]
    X_m    = [x_1 .. x_m, xhat_{m+1} .. xhat_n]

IA component i is (H(Xhat_i) - H(Xhat_{i-1})) / h_i. SIA is the average of IA(x, xhat) and
IA(xhat, x); its component i is

    (H(Xhat_i) - H(Xhat_{i-1}) + H(X_{i-1}) - H(X_i)) / (2 h_i)

When |h_i| is below 1e-8 (1 + |x_i|) the quotient is replaced by the partial derivative of H
with respect to coordinate i at the point the quotient would have started from. Derivative-free
variants take a central difference with step tau1 there, dual-number variants the exact
partial. The rule is applied to each IA half of SIA on its own.
"""

import enum
import logging
import dataclasses as dc

from typing import Any, Optional

import numpy as np

import dfdgm.dual as ad

from dfdgm.common import DimensionError
from dfdgm.systems import EvalCounter, System, central_difference, eval_energy

DEFAULT_TAU1 = 1e-5
DEGENERATE_RTOL = 1e-8


class DGType(enum.Enum):
    IA = 'ia'
    SIA = 'sia'


class Derivatives(enum.Enum):
    FD = 'fd'  # Finite differences
    AD = 'ad'  # Dual numbers


@dc.dataclass(frozen=True)
class DiscreteGradientKind:
    dg: DGType
    derivatives: Derivatives = Derivatives.FD
    tau1: float = DEFAULT_TAU1


IA_FD = DiscreteGradientKind(DGType.IA)
SIA_FD = DiscreteGradientKind(DGType.SIA)
IA_AD = DiscreteGradientKind(DGType.IA, Derivatives.AD)
SIA_AD = DiscreteGradientKind(DGType.SIA, Derivatives.AD)


@dc.dataclass
class DGEval:
    value: np.ndarray
    evals_used: int


def is_degenerate(xi: Any, xhati: Any) -> bool:
    a = ad.primal(xi)
    return abs(ad.primal(xhati) - a) < DEGENERATE_RTOL * (1 + abs(a))


def shifted(x: np.ndarray, xhat: np.ndarray, m: int) -> np.ndarray:
    """The first m coordinates from xhat, the rest from x."""
    return np.concatenate((xhat[:m], x[m:]))


def fallback_partial(kind: DiscreteGradientKind, system: System, point: np.ndarray, i: int,
                     counter: Optional[EvalCounter]) -> Any:
    if kind.derivatives == Derivatives.FD:
        return central_difference(system, point, i, kind.tau1, counter)
    return ad.partial(lambda p: eval_energy(system, p, counter), point, i)


def ia_component(kind: DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray, i: int,
                 counter: Optional[EvalCounter]) -> Any:
    """Component i (zero based) of IA(x, xhat). Two evaluations."""
    start = shifted(x, xhat, i)
    if is_degenerate(x[i], xhat[i]):
        logging.debug('Degenerate coordinate %d in IA discrete gradient', i)
        return fallback_partial(kind, system, start, i, counter)
    end = shifted(x, xhat, i + 1)
    return (eval_energy(system, end, counter) - eval_energy(system, start, counter)) / (xhat[i] - x[i])


def sia_component(kind: DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray, i: int,
                  counter: Optional[EvalCounter]) -> Any:
    """Component i of SIA(x, xhat). Four evaluations."""
    return 0.5 * (ia_component(kind, system, x, xhat, i, counter)
                  + ia_component(kind, system, xhat, x, i, counter))


def _check_dims(system: System, x: np.ndarray, xhat: np.ndarray) -> None:
    if len(x) != system.n or len(xhat) != system.n:
        raise DimensionError(f'{system.name}: expected dimension {system.n}, got {len(x)} and {len(xhat)}')


def _evaluate(component: Any, kind: DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray,
              counter: EvalCounter) -> DGEval:
    _check_dims(system, x, xhat)
    start = counter.count
    value = np.empty(system.n, dtype=ad.result_dtype(x, xhat))
    for i in range(system.n):
        value[i] = component(kind, system, x, xhat, i, counter)
    return DGEval(value=value, evals_used=counter.count - start)


def ia_dg(system: System, x: np.ndarray, xhat: np.ndarray, counter: EvalCounter,
          kind: DiscreteGradientKind = IA_FD) -> DGEval:
    return _evaluate(ia_component, kind, system, x, xhat, counter)


def sia_dg(system: System, x: np.ndarray, xhat: np.ndarray, counter: EvalCounter,
           kind: DiscreteGradientKind = SIA_FD) -> DGEval:
    return _evaluate(sia_component, kind, system, x, xhat, counter)


def component_fn(kind: DiscreteGradientKind) -> Any:
    if kind.dg == DGType.IA:
        return ia_component
    return sia_component


def discrete_gradient(kind: DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray,
                      counter: EvalCounter) -> DGEval:
    return _evaluate(component_fn(kind), kind, system, x, xhat, counter)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
