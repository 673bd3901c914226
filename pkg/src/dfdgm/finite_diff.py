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

"""Derivative-free approximations of the Hessian and of the discrete gradient Jacobians.

Evaluation counts, with n the dimension:

    fd_hessian                  n^2 + 3n + 1
    fd_d2_sia                   4(n^2 + n), or 4(n^2 - n) without the diagonal
    fd_d2_ia                    2(n^2 + n)

These hold as long as no coordinate of xhat - x is degenerate. A degenerate row is obtained
by differencing the discrete gradient component itself, which costs more.
"""

import logging
import dataclasses as dc

from typing import Any, Callable, Optional

import numpy as np

import dfdgm.discrete_gradient as dgm

from dfdgm.systems import EvalCounter, System, central_difference, eval_energy

DEFAULT_EPS_BAR = 1e-15
DEFAULT_TAU1 = dgm.DEFAULT_TAU1
DEFAULT_TAU2 = 1e-4


def optimal_steps(eps_bar: float) -> tuple[float, float]:
    """Steps that balance truncation and evaluation error.

    eps_bar^(1/3) for first derivatives, eps_bar^(1/4) for second derivatives.
    """
    if eps_bar <= 0:
        raise ValueError(f'Precision must be positive, got {eps_bar}')
    return eps_bar ** (1.0 / 3.0), eps_bar ** 0.25


@dc.dataclass(frozen=True)
class FDConfig:
    tau1: float = DEFAULT_TAU1  # Step for derivatives of the discrete gradient
    tau2: float = DEFAULT_TAU2  # Step for the Hessian
    eps_bar: float = DEFAULT_EPS_BAR  # Assumed absolute precision of H

    def __post_init__(self) -> None:
        if self.tau1 <= 0 or self.tau2 <= 0:
            raise ValueError(f'Finite difference steps must be positive: tau1={self.tau1}, tau2={self.tau2}')
        if self.eps_bar < 0:
            raise ValueError(f'Negative precision: {self.eps_bar}')

    @classmethod
    def for_precision(cls, eps_bar: float) -> 'FDConfig':
        """Rounded steps for double precision, optimal_steps() for anything else."""
        if eps_bar == DEFAULT_EPS_BAR:
            return cls()
        tau1, tau2 = optimal_steps(eps_bar)
        return cls(tau1=tau1, tau2=tau2, eps_bar=eps_bar)


def _unit(n: int, *idx: int) -> np.ndarray:
    ret = np.zeros(n)
    for i in idx:
        ret[i] += 1.0
    return ret


def fd_hessian(system: System, x: np.ndarray, tau2: float, counter: EvalCounter) -> np.ndarray:
    """Second-order Hessian from sums of evaluations along e_i and e_i + e_j.

    H0 = H(x), D1_i = H(x + t e_i) + H(x - t e_i) and D2_ij = H(x + t(e_i + e_j)) + H(x - t(e_i + e_j))
    for i <= j, mirrored. Then Hess = (2 H0 - D1_i - D1_j + D2_ij) / (2 t^2).
    """
    n = system.n
    h0 = eval_energy(system, x, counter)

    d1 = np.empty(n, dtype=object)
    for i in range(n):
        e = tau2 * _unit(n, i)
        d1[i] = eval_energy(system, x + e, counter) + eval_energy(system, x - e, counter)

    d2 = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            e = tau2 * _unit(n, i, j)
            d2[i, j] = eval_energy(system, x + e, counter) + eval_energy(system, x - e, counter)
            d2[j, i] = d2[i, j]

    ret = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(i, n):
            ret[i, j] = (2 * h0 + d2[i, j] - d1[i] - d1[j]) / (2 * tau2 * tau2)
            ret[j, i] = ret[i, j]

    if x.dtype == object:
        return ret
    return ret.astype(np.float64)


PartialFn = Callable[[np.ndarray, int], Any]


def _partial_fn(system: System, tau1: float, counter: EvalCounter) -> PartialFn:
    return lambda p, j: central_difference(system, p, j, tau1, counter)


def _fallback_component(kind: dgm.DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray, i: int,
                        counter: EvalCounter) -> Any:
    """Component i on its degenerate branch, whatever the distance between x[i] and xhat[i]."""
    ret = dgm.fallback_partial(kind, system, dgm.shifted(x, xhat, i), i, counter)
    if kind.dg == dgm.DGType.IA:
        return ret
    return 0.5 * (ret + dgm.fallback_partial(kind, system, dgm.shifted(xhat, x, i), i, counter))


def _degenerate_row(kind: dgm.DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray, i: int,
                    tau1: float, counter: EvalCounter) -> np.ndarray:
    """Row i of the Jacobian by central differences of the fallback partial in each xhat_j.

    A step of tau1 in xhat_i leaves the degenerate band, so the component itself is not differenced.
    """
    row = np.empty(system.n, dtype=object)
    for j in range(system.n):
        xp = xhat.copy()
        xm = xhat.copy()
        xp[j] = xp[j] + tau1
        xm[j] = xm[j] - tau1
        row[j] = (_fallback_component(kind, system, x, xp, i, counter)
                  - _fallback_component(kind, system, x, xm, i, counter)) / (2 * tau1)
    return row


def fd_d2_sia(system: System, x: np.ndarray, xhat: np.ndarray, tau1: float, counter: EvalCounter,
              include_diagonal: bool = True) -> np.ndarray:
    """Jacobian of SIA(x, xhat) with respect to xhat, by the product rule on the component formula.

    Row i, with partials d_j H taken by central differences:
        j < i:  (d_j H(Xhat_i) - d_j H(Xhat_{i-1})) / (2 h_i)
        j > i:  (d_j H(X_{i-1}) - d_j H(X_i)) / (2 h_i)
        j = i:  (d_i H(Xhat_i) + d_i H(X_{i-1})) / (2 h_i) - SIA_i / h_i

    Without the diagonal the entries j = i are left at zero.
    """
    n = system.n
    kind = dgm.DiscreteGradientKind(dgm.DGType.SIA, dgm.Derivatives.FD, tau1)
    partial = _partial_fn(system, tau1, counter)
    ret = np.zeros((n, n), dtype=object)

    sia: Optional[np.ndarray] = None
    if include_diagonal:
        sia = dgm.sia_dg(system, x, xhat, counter, kind).value

    for i in range(n):
        if dgm.is_degenerate(x[i], xhat[i]):
            logging.debug('Degenerate row %d in SIA Jacobian', i)
            row = _degenerate_row(kind, system, x, xhat, i, tau1, counter)
            if not include_diagonal:
                row[i] = 0.0
            ret[i] = row
            continue

        hi = xhat[i] - x[i]
        hat_i = dgm.shifted(x, xhat, i + 1)  # Xhat_i
        hat_prev = dgm.shifted(x, xhat, i)  # Xhat_{i-1}
        plain_i = dgm.shifted(xhat, x, i + 1)  # X_i
        plain_prev = dgm.shifted(xhat, x, i)  # X_{i-1}
        for j in range(n):
            if j < i:
                ret[i, j] = (partial(hat_i, j) - partial(hat_prev, j)) / (2 * hi)
            elif j > i:
                ret[i, j] = (partial(plain_prev, j) - partial(plain_i, j)) / (2 * hi)
            elif include_diagonal:
                assert sia is not None
                ret[i, j] = (partial(hat_i, i) + partial(plain_prev, i)) / (2 * hi) - sia[i] / hi

    return _as_result(ret, x, xhat)


def fd_d2_ia(system: System, x: np.ndarray, xhat: np.ndarray, tau1: float, counter: EvalCounter) -> np.ndarray:
    """Jacobian of IA(x, xhat) with respect to xhat. Lower triangular.

    Row i:
        j < i:  (d_j H(Xhat_i) - d_j H(Xhat_{i-1})) / h_i
        j = i:  d_i H(Xhat_i) / h_i - IA_i / h_i
    """
    n = system.n
    kind = dgm.DiscreteGradientKind(dgm.DGType.IA, dgm.Derivatives.FD, tau1)
    partial = _partial_fn(system, tau1, counter)
    ret = np.zeros((n, n), dtype=object)
    ia = dgm.ia_dg(system, x, xhat, counter, kind).value

    for i in range(n):
        if dgm.is_degenerate(x[i], xhat[i]):
            logging.debug('Degenerate row %d in IA Jacobian', i)
            ret[i] = _degenerate_row(kind, system, x, xhat, i, tau1, counter)
            continue

        hi = xhat[i] - x[i]
        hat_i = dgm.shifted(x, xhat, i + 1)
        hat_prev = dgm.shifted(x, xhat, i)
        for j in range(i):
            ret[i, j] = (partial(hat_i, j) - partial(hat_prev, j)) / hi
        ret[i, i] = partial(hat_i, i) / hi - ia[i] / hi

    return _as_result(ret, x, xhat)


def fd_d2(kind: dgm.DiscreteGradientKind, system: System, x: np.ndarray, xhat: np.ndarray, counter: EvalCounter,
          include_diagonal: bool = True) -> np.ndarray:
    if kind.dg == dgm.DGType.IA:
        return fd_d2_ia(system, x, xhat, kind.tau1, counter)
    return fd_d2_sia(system, x, xhat, kind.tau1, counter, include_diagonal)


def _as_result(m: np.ndarray, x: np.ndarray, xhat: np.ndarray) -> np.ndarray:
    if x.dtype == object or xhat.dtype == object:
        return m
    return m.astype(np.float64)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
