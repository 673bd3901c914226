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

"""Time stepping for x' = S grad H(x).

A discrete gradient step solves F(xhat) = xhat - x - h Sbar(x, xhat) DG(x, xhat) = 0 by Newton's
method, where Sbar is S for the first and second order methods and the corrected matrix S3 or
S4 for the higher order ones. Derivative-free (_DF) methods build S3/S4 and the Newton Jacobian
from finite differences and leave out the derivative of Sbar; dual-number (_AD) methods use the
exact matrices and, for S3/S4, the full Jacobian of F.
"""

import math
import enum
import logging
import dataclasses as dc

from typing import Callable, Optional

import numpy as np

import dfdgm.linalg
import dfdgm.autodiff
import dfdgm.finite_diff
import dfdgm.discrete_gradient as dgm

from dfdgm.common import DimensionError, MaxIterationsExceededError, NumericalError, ReferenceNotConvergedError
from dfdgm.common import StepFailedError
from dfdgm.systems import EvalCounter, System, eval_energy

D2Provider = Callable[[np.ndarray, np.ndarray], np.ndarray]
HessProvider = Callable[[np.ndarray], np.ndarray]

DEFAULT_TOL = 1e-11
DEFAULT_MAX_ITER = 20
DEFAULT_STALL_FACTOR = 100.0
DEFAULT_STALL_ITERS = 2


class MethodKind(enum.Enum):
    IA_DF = 'IA_DF'
    SIA_DF = 'SIA_DF'
    SIA3_DF = 'SIA3_DF'
    SIA4_DF = 'SIA4_DF'
    IA_AD = 'IA_AD'
    SIA_AD = 'SIA_AD'
    SIA3_AD = 'SIA3_AD'
    SIA4_AD = 'SIA4_AD'
    RK4 = 'RK4'

    @classmethod
    def parse(cls, name: str) -> 'MethodKind':
        key = name.strip().upper().replace('-', '_')
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f'Unknown method: {name} (known: {", ".join(x.value for x in cls)})') from None

    @property
    def order(self) -> int:
        return {
            MethodKind.IA_DF: 1, MethodKind.IA_AD: 1,
            MethodKind.SIA_DF: 2, MethodKind.SIA_AD: 2,
            MethodKind.SIA3_DF: 3, MethodKind.SIA3_AD: 3,
            MethodKind.SIA4_DF: 4, MethodKind.SIA4_AD: 4,
            MethodKind.RK4: 4,
        }[self]

    @property
    def is_dgm(self) -> bool:
        return self != MethodKind.RK4

    @property
    def derivative_free(self) -> bool:
        return self.value.endswith('_DF')

    def dg_kind(self, tau1: float) -> dgm.DiscreteGradientKind:
        if not self.is_dgm:
            raise ValueError(f'{self.value} is not a discrete gradient method')
        dg = dgm.DGType.IA if self.order == 1 else dgm.DGType.SIA
        derivs = dgm.Derivatives.FD if self.derivative_free else dgm.Derivatives.AD
        return dgm.DiscreteGradientKind(dg, derivs, tau1)


@dc.dataclass(frozen=True)
class NewtonConfig:
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    seed: int = 0
    fd: dfdgm.finite_diff.FDConfig = dc.field(default_factory=dfdgm.finite_diff.FDConfig)
    # Raise on max_iter. Otherwise accept the best iterate, as a plain "stop after max_iter" rule would.
    strict: bool = True
    # A residual that stops decreasing for stall_iters iterations below stall_factor * tol is at the
    # noise floor of the finite differences and counts as converged. stall_factor = 0 disables this.
    stall_factor: float = DEFAULT_STALL_FACTOR
    stall_iters: int = DEFAULT_STALL_ITERS

    def __post_init__(self) -> None:
        if self.tol <= 0:
            raise ValueError(f'Tolerance must be positive, got {self.tol}')
        if self.max_iter < 1:
            raise ValueError(f'max_iter must be at least 1, got {self.max_iter}')
        if self.stall_factor < 0 or self.stall_iters < 1:
            raise ValueError(f'Bad stagnation settings: stall_factor={self.stall_factor}, '
                             f'stall_iters={self.stall_iters}')


@dc.dataclass
class StepResult:
    xnext: np.ndarray
    iterations: int
    residual: float
    evals: int
    converged: bool = True


@dc.dataclass
class Trajectory:
    h: float
    times: np.ndarray
    states: np.ndarray
    iterations: np.ndarray
    residuals: np.ndarray
    evals_cum: np.ndarray
    energies: np.ndarray
    converged: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    @classmethod
    def empty(cls, n: int, h: float = 0.0) -> 'Trajectory':
        return cls(h=h, times=np.zeros(0), states=np.zeros((0, n)), iterations=np.zeros(0, dtype=int),
                   residuals=np.zeros(0), evals_cum=np.zeros(0, dtype=int), energies=np.zeros(0),
                   converged=np.zeros(0, dtype=bool))

    def energy_drift(self) -> np.ndarray:
        if len(self) == 0:
            return np.zeros(0)
        return np.abs(self.energies - self.energies[0])

    @property
    def unconverged_steps(self) -> int:
        return int(np.count_nonzero(~self.converged))


def skew_part(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - m.T)


def q_matrix(d2: np.ndarray) -> np.ndarray:
    """Q = (D2^T - D2) / 2 for a Jacobian D2 of a discrete gradient."""
    d2 = np.asarray(d2)
    if d2.ndim != 2 or d2.shape[0] != d2.shape[1]:
        raise DimensionError(f'Expected a square matrix, got shape {d2.shape}')
    return 0.5 * (d2.T - d2)


def _sandwich_terms(system: System, x: np.ndarray, xhat: np.ndarray, hess_provider: HessProvider) -> np.ndarray:
    s = system.structure
    hs = hess_provider(0.5 * (x + xhat))
    return s @ hs @ s @ hs @ s


def s4(system: System, x: np.ndarray, xhat: np.ndarray, h: float, d2_provider: D2Provider,
       hess_provider: HessProvider) -> np.ndarray:
    """S + h/2 S [Q(x, (x+2xhat)/3) - Q(xhat, (2x+xhat)/3)] S - h^2/12 S Hess S Hess S.

    Hess is taken at the midpoint. The result is projected on its skew part, which only
    removes rounding.
    """
    s = system.structure
    q = q_matrix(d2_provider(x, (x + 2 * xhat) / 3)) - q_matrix(d2_provider(xhat, (2 * x + xhat) / 3))
    m = s + (h / 2) * (s @ q @ s) - (h * h / 12) * _sandwich_terms(system, x, xhat, hess_provider)
    return skew_part(m)


def s3(system: System, x: np.ndarray, xhat: np.ndarray, h: float, d2_provider: D2Provider,
       hess_provider: HessProvider) -> np.ndarray:
    """Third order: S + h S Q(x, (x+2xhat)/3) S - h^2/12 S Hess S Hess S.

    S4(x, xhat, h) is the average of this and its adjoint S3(xhat, x, -h).
    """
    s = system.structure
    q = q_matrix(d2_provider(x, (x + 2 * xhat) / 3))
    m = s + h * (s @ q @ s) - (h * h / 12) * _sandwich_terms(system, x, xhat, hess_provider)
    return skew_part(m)


def fd_providers(system: System, fdc: dfdgm.finite_diff.FDConfig, counter: EvalCounter) -> tuple[D2Provider, HessProvider]:
    # Q only needs the off-diagonal part of D2
    return (lambda a, b: dfdgm.finite_diff.fd_d2_sia(system, a, b, fdc.tau1, counter, include_diagonal=False),
            lambda p: dfdgm.finite_diff.fd_hessian(system, p, fdc.tau2, counter))


def ad_providers(system: System, counter: Optional[EvalCounter] = None) -> tuple[D2Provider, HessProvider]:
    return (lambda a, b: dfdgm.autodiff.d2_dg_ad(dgm.SIA_AD, system, a, b, counter),
            lambda p: dfdgm.autodiff.hess_ad(system, p, counter))


def s4_tau(system: System, x: np.ndarray, xhat: np.ndarray, h: float, fdc: dfdgm.finite_diff.FDConfig,
           counter: EvalCounter) -> np.ndarray:
    """S4 from finite differences; 9n^2 - 5n + 1 evaluations."""
    d2p, hp = fd_providers(system, fdc, counter)
    return s4(system, x, xhat, h, d2p, hp)


def s3_tau(system: System, x: np.ndarray, xhat: np.ndarray, h: float, fdc: dfdgm.finite_diff.FDConfig,
           counter: EvalCounter) -> np.ndarray:
    """S3 from finite differences; 5n^2 - n + 1 evaluations."""
    d2p, hp = fd_providers(system, fdc, counter)
    return s3(system, x, xhat, h, d2p, hp)


class NewtonSystem:
    """Residual and Jacobian of one implicit step from x."""

    def __init__(self, system: System, method: MethodKind, x: np.ndarray, h: float, cfg: NewtonConfig,
                 counter: EvalCounter) -> None:
        self.system = system
        self.method = method
        self.x = x
        self.h = h
        self.cfg = cfg
        self.counter = counter
        self.kind = method.dg_kind(cfg.fd.tau1)

    def sbar(self, xhat: np.ndarray) -> np.ndarray:
        m = self.method
        if m.order <= 2:
            return self.system.structure
        if m.derivative_free:
            providers = fd_providers(self.system, self.cfg.fd, self.counter)
        else:
            providers = ad_providers(self.system, self.counter)
        build = s4 if m.order == 4 else s3
        return build(self.system, self.x, xhat, self.h, *providers)

    def _residual(self, xhat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        sbar = self.sbar(xhat)
        dg = dgm.discrete_gradient(self.kind, self.system, self.x, xhat, self.counter).value
        return xhat - self.x - self.h * (sbar @ dg), sbar

    def residual(self, xhat: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Returns F(xhat) and the Sbar it was built with."""
        f, sbar = self._residual(xhat)
        return f.astype(np.float64), sbar.astype(np.float64)

    def jacobian(self, xhat: np.ndarray, sbar: np.ndarray) -> np.ndarray:
        n = self.system.n
        eye = np.eye(n)
        if self.method.derivative_free:
            d2 = dfdgm.finite_diff.fd_d2(self.kind, self.system, self.x, xhat, self.counter)
            return eye - self.h * (sbar @ d2)
        if self.method.order <= 2:
            d2 = dfdgm.autodiff.d2_dg_ad(self.kind, self.system, self.x, xhat, self.counter)
            return eye - self.h * (sbar @ d2)
        # Includes the derivative of Sbar with respect to xhat
        return dfdgm.autodiff.jacobian_ad(lambda v: self._residual(v)[0], xhat)


def initial_guess(step_index: int, x_n: np.ndarray, x_prev: Optional[np.ndarray], h: float,
                  seed: int) -> np.ndarray:
    """x_n + h delta with a seeded standard normal delta for the first step, 2 x_n - x_{n-1} later."""
    if step_index == 0:
        if x_prev is not None:
            raise ValueError('No previous state exists at step 0')
        rng = np.random.default_rng(seed)
        return x_n + h * rng.standard_normal(len(x_n))
    if x_prev is None:
        raise ValueError(f'Step {step_index} needs the previous state')
    return 2 * x_n - x_prev


def newton_solve(system: System, method: MethodKind, x: np.ndarray, h: float, cfg: NewtonConfig,
                 counter: EvalCounter, guess: Optional[np.ndarray] = None) -> StepResult:
    if h == 0:
        raise ValueError('Step size must be non-zero')
    if guess is None:
        guess = initial_guess(0, x, None, h, cfg.seed)

    ns = NewtonSystem(system, method, x, h, cfg, counter)
    start = counter.count
    xk = np.array(guess, dtype=np.float64)
    best_res = math.inf
    best_x = xk
    stalled = 0

    for it in range(cfg.max_iter + 1):
        f, sbar = ns.residual(xk)
        res = float(np.linalg.norm(f))
        logging.debug('Newton iteration %d: residual %.3e', it, res)
        if not math.isfinite(res):
            raise NumericalError(f'Non-finite residual at iteration {it}')
        if res <= cfg.tol:
            return StepResult(xnext=xk, iterations=it, residual=res, evals=counter.count - start)
        if res < 0.5 * best_res:
            stalled = 0
        else:
            stalled += 1
        if res < best_res:
            best_res = res
            best_x = xk
        if stalled >= cfg.stall_iters and best_res <= cfg.stall_factor * cfg.tol:
            logging.debug('Newton stagnated at residual %.3e after %d iterations', best_res, it)
            return StepResult(xnext=best_x, iterations=it, residual=best_res, evals=counter.count - start)
        if it == cfg.max_iter:
            break
        jac = ns.jacobian(xk, sbar)
        xk = xk - dfdgm.linalg.lu_solve(jac, f)

    if cfg.strict:
        raise MaxIterationsExceededError(best_res, cfg.max_iter)

    logging.warning('Accepting unconverged step after %d iterations, residual %.3e', cfg.max_iter, best_res)
    return StepResult(xnext=best_x, iterations=cfg.max_iter, residual=best_res, evals=counter.count - start,
                      converged=False)


def vector_field(system: System, x: np.ndarray, counter: Optional[EvalCounter] = None) -> np.ndarray:
    if system.analytic_gradient is not None:
        grad = system.analytic_gradient(x)
    else:
        grad = dfdgm.autodiff.grad_ad(system, x, counter)
    return system.structure @ np.asarray(grad, dtype=np.float64)


def rk4_step(system: System, x: np.ndarray, h: float, counter: Optional[EvalCounter] = None) -> np.ndarray:
    k1 = vector_field(system, x, counter)
    k2 = vector_field(system, x + (h / 2) * k1, counter)
    k3 = vector_field(system, x + (h / 2) * k2, counter)
    k4 = vector_field(system, x + h * k3, counter)
    return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def _energy(system: System, x: np.ndarray) -> float:
    return float(eval_energy(system, x, None))


def integrate(system: System, method: MethodKind, x0: np.ndarray, h: float, steps: int, cfg: NewtonConfig,
              counter: Optional[EvalCounter] = None) -> Trajectory:
    if steps < 1:
        raise ValueError(f'Number of steps must be at least 1, got {steps}')
    if counter is None:
        counter = EvalCounter()

    n = system.n
    x0 = np.array(x0, dtype=np.float64)
    if len(x0) != n:
        raise DimensionError(f'{system.name}: initial state has dimension {len(x0)}, expected {n}')

    states = np.empty((steps + 1, n))
    iterations = np.zeros(steps + 1, dtype=int)
    residuals = np.zeros(steps + 1)
    evals_cum = np.zeros(steps + 1, dtype=int)
    energies = np.empty(steps + 1)
    converged = np.ones(steps + 1, dtype=bool)

    states[0] = x0
    energies[0] = _energy(system, x0)
    evals_cum[0] = counter.count
    prev: Optional[np.ndarray] = None

    logging.info('Integrating %s with %s, h=%g, %d steps', system.name, method.value, h, steps)

    for k in range(steps):
        x = states[k]
        try:
            if method == MethodKind.RK4:
                xnext = rk4_step(system, x, h, counter)
            else:
                guess = initial_guess(k, x, prev, h, cfg.seed)
                r = newton_solve(system, method, x, h, cfg, counter, guess)
                xnext = r.xnext
                iterations[k + 1] = r.iterations
                residuals[k + 1] = r.residual
                converged[k + 1] = r.converged
        except (NumericalError, ArithmeticError, ValueError) as e:
            raise StepFailedError(k, e) from e

        states[k + 1] = xnext
        energies[k + 1] = _energy(system, xnext)
        evals_cum[k + 1] = counter.count
        prev = x

    times = h * np.arange(steps + 1)
    return Trajectory(h=h, times=times, states=states, iterations=iterations, residuals=residuals,
                      evals_cum=evals_cum, energies=energies, converged=converged)


REFERENCE_TOL = 1e-12
REFERENCE_BASE_STEP = 0.01
REFERENCE_MAX_REFINEMENTS = 14


def _rk4_series(system: System, x0: np.ndarray, h: float, steps: int, substeps: int) -> np.ndarray:
    """States at multiples of h, each interval covered by substeps RK4 steps."""
    out = np.empty((steps + 1, system.n))
    x = np.array(x0, dtype=np.float64)
    out[0] = x
    dt = h / substeps
    for k in range(steps):
        for _ in range(substeps):
            x = rk4_step(system, x, dt)
        out[k + 1] = x
    return out


def reference_trajectory(system: System, x0: np.ndarray, h: float, steps: int,
                         tol: float = REFERENCE_TOL) -> np.ndarray:
    """Accurate states at t_k = k h, k = 0..steps, by RK4 with repeated halving of the substep."""
    if h <= 0:
        raise ValueError(f'Step must be positive, got {h}')
    substeps = max(1, math.ceil(h / REFERENCE_BASE_STEP))
    prev = _rk4_series(system, x0, h, steps, substeps)
    for _ in range(REFERENCE_MAX_REFINEMENTS):
        substeps *= 2
        cur = _rk4_series(system, x0, h, steps, substeps)
        diff = float(np.max(np.linalg.norm(cur - prev, axis=1)))
        logging.debug('Reference with %d substeps: change %.3e', substeps, diff)
        if diff < tol:
            return cur
        prev = cur
    raise ReferenceNotConvergedError(f'Reference solution did not settle below {tol:g} with {substeps} substeps')


def reference_solution(system: System, x0: np.ndarray, T: float) -> np.ndarray:
    """x(T) by RK4, halving the step until two refinements differ by less than 1e-12."""
    if T <= 0:
        raise ValueError(f'End time must be positive, got {T}')
    return reference_trajectory(system, x0, T, 1)[-1]


def l2_error_series(trajectory: Trajectory, reference: np.ndarray) -> np.ndarray:
    """||x_n - x(t_n)||_2 for every step."""
    if reference.shape != trajectory.states.shape:
        raise DimensionError(f'Reference has shape {reference.shape}, trajectory {trajectory.states.shape}')
    return np.linalg.norm(trajectory.states - reference, axis=1)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
