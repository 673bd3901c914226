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

"""The numerical experiments behind the command line utilities.

Every study cell (one method and one step size) gets its own counter and the RNG seed
base_seed + cell index, so cells are independent of the order they run in.
"""

import time
import logging
import dataclasses as dc

from typing import Callable, Optional, Sequence

import numpy as np

import dfdgm.finite_diff as fdiff
import dfdgm.discrete_gradient as dgm

from dfdgm.systems import EvalCounter, HamiltonianSystem, NoisyHamiltonian, System
from dfdgm.integrators import MethodKind, NewtonConfig, NewtonSystem, Trajectory
from dfdgm.integrators import ad_providers, integrate, l2_error_series, reference_solution, reference_trajectory
from dfdgm.integrators import rk4_step, s3_tau, s4, s4_tau
from dfdgm import terrain

ERROR_FLOOR = 1e-11
FLOOR_FACTOR = 10


def h_levels(h_max: float, levels: int) -> list[float]:
    """h_max, h_max/2, ..., h_max/2^(levels-1)"""
    return [h_max * 2.0 ** -k for k in range(levels)]


def steps_for(T: float, h: float) -> int:
    steps = int(round(T / h))
    if steps < 1 or abs(steps * h - T) > 1e-9 * T:
        raise ValueError(f'End time {T} is not a multiple of h={h}')
    return steps


def cell_config(cfg: NewtonConfig, index: int) -> NewtonConfig:
    return dc.replace(cfg, seed=cfg.seed + index)


def fit_slope(hs: Sequence[float], errors: Sequence[float], floor: float = ERROR_FLOOR,
              factor: float = FLOOR_FACTOR) -> Optional[float]:
    """Least squares slope of log(error) against log(h) over errors above factor * floor."""
    pts = [(h, e) for h, e in zip(hs, errors) if e > factor * floor]
    if len(pts) < 2:
        return None
    lh = np.log([p[0] for p in pts])
    le = np.log([p[1] for p in pts])
    return float(np.polyfit(lh, le, 1)[0])


@dc.dataclass
class ConvergenceRow:
    method: MethodKind
    h: float
    steps: int
    error: float
    evals: int
    max_iterations: int
    unconverged: int


@dc.dataclass
class ConvergenceResult:
    rows: list[ConvergenceRow]
    slopes: dict[MethodKind, Optional[float]]


def convergence_study(system: System, methods: Sequence[MethodKind], x0: np.ndarray, T: float,
                      hs: Sequence[float], cfg: NewtonConfig, floor: float = ERROR_FLOOR) -> ConvergenceResult:
    """Global error ||x_N - x(T)||_2 against h for every method."""
    if len(hs) < 3:
        raise ValueError(f'A convergence study needs at least 3 step sizes, got {len(hs)}')
    ref = reference_solution(system, x0, T)
    rows: list[ConvergenceRow] = []
    slopes: dict[MethodKind, Optional[float]] = {}
    index = 0
    for method in methods:
        errors = []
        for h in hs:
            steps = steps_for(T, h)
            traj = integrate(system, method, x0, h, steps, cell_config(cfg, index))
            index += 1
            err = float(np.linalg.norm(traj.states[-1] - ref))
            logging.info('%s h=%g: error %.3e, %d evaluations', method.value, h, err, traj.evals_cum[-1])
            rows.append(ConvergenceRow(method=method, h=h, steps=steps, error=err, evals=int(traj.evals_cum[-1]),
                                       max_iterations=int(traj.iterations.max()),
                                       unconverged=traj.unconverged_steps))
            errors.append(err)
        slopes[method] = fit_slope(hs, errors, floor)
    return ConvergenceResult(rows=rows, slopes=slopes)


@dc.dataclass
class ErrorSeries:
    trajectory: Trajectory
    errors: np.ndarray  # ||x_n - x(t_n)||_2


def error_series(system: System, method: MethodKind, x0: np.ndarray, h: float, steps: int,
                 cfg: NewtonConfig) -> ErrorSeries:
    traj = integrate(system, method, x0, h, steps, cfg)
    ref = reference_trajectory(system, x0, h, steps)
    return ErrorSeries(trajectory=traj, errors=l2_error_series(traj, ref))


def energy_drift_study(system: System, methods: Sequence[MethodKind], x0: np.ndarray, h: float, steps: int,
                       cfg: NewtonConfig) -> dict[MethodKind, Trajectory]:
    ret = {}
    for index, method in enumerate(methods):
        traj = integrate(system, method, x0, h, steps, cell_config(cfg, index))
        logging.info('%s: max energy drift %.3e', method.value, traj.energy_drift().max())
        ret[method] = traj
    return ret


@dc.dataclass
class CountRow:
    quantity: str
    n: int
    measured: int
    formula: int

    @property
    def ok(self) -> bool:
        return self.measured == self.formula


ITERATION_FORMULAS: dict[MethodKind, Callable[[int], int]] = {
    MethodKind.IA_DF: lambda n: 2 * n * n + 4 * n,
    MethodKind.SIA_DF: lambda n: 4 * n * n + 8 * n,
    MethodKind.SIA3_DF: lambda n: 9 * n * n + 7 * n + 1,
    MethodKind.SIA4_DF: lambda n: 13 * n * n + 3 * n + 1,
}


def _measure(fn: Callable[[EvalCounter], object]) -> int:
    counter = EvalCounter()
    fn(counter)
    return counter.count


def count_table(system: System, x: np.ndarray, h: float, cfg: NewtonConfig) -> list[CountRow]:
    """Energy evaluations of the building blocks and of one Newton iteration per method.

    Everything is measured at (x, xhat) with xhat the first-step initial guess.
    """
    n = system.n
    tau1 = cfg.fd.tau1
    tau2 = cfg.fd.tau2
    xhat = x + h * np.random.default_rng(cfg.seed).standard_normal(n)

    def iteration(method: MethodKind) -> Callable[[EvalCounter], object]:
        def run(counter: EvalCounter) -> object:
            ns = NewtonSystem(system, method, x, h, cfg, counter)
            _, sbar = ns.residual(xhat)
            return ns.jacobian(xhat, sbar)
        return run

    ia = dgm.DiscreteGradientKind(dgm.DGType.IA, tau1=tau1)
    sia = dgm.DiscreteGradientKind(dgm.DGType.SIA, tau1=tau1)
    components: list[tuple[str, Callable[[EvalCounter], object], int]] = [
        ('ia_dg', lambda c: dgm.ia_dg(system, x, xhat, c, ia), 2 * n),
        ('sia_dg', lambda c: dgm.sia_dg(system, x, xhat, c, sia), 4 * n),
        ('fd_d2_ia', lambda c: fdiff.fd_d2_ia(system, x, xhat, tau1, c), 2 * (n * n + n)),
        ('fd_d2_sia', lambda c: fdiff.fd_d2_sia(system, x, xhat, tau1, c), 4 * (n * n + n)),
        ('fd_d2_sia_offdiag', lambda c: fdiff.fd_d2_sia(system, x, xhat, tau1, c, include_diagonal=False),
         4 * (n * n - n)),
        ('fd_hessian', lambda c: fdiff.fd_hessian(system, x, tau2, c), n * n + 3 * n + 1),
        ('s3_tau', lambda c: s3_tau(system, x, xhat, h, cfg.fd, c), 5 * n * n - n + 1),
        ('s4_tau', lambda c: s4_tau(system, x, xhat, h, cfg.fd, c), 9 * n * n - 5 * n + 1),
    ]

    rows = [CountRow(quantity=name, n=n, measured=_measure(fn), formula=formula) for name, fn, formula in components]
    for method, formula_fn in ITERATION_FORMULAS.items():
        rows.append(CountRow(quantity=f'iteration_{method.value}', n=n, measured=_measure(iteration(method)),
                             formula=formula_fn(n)))
    return rows


@dc.dataclass
class InexactnessRow:
    h: float
    s_error: float  # ||S4_tau - S4||
    f_error: float  # ||F_tau - F||
    jac_error: float  # ||F'_tau - F'||
    s_theory: float
    f_theory: float
    jac_theory: float


def _max_entry(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64))))


def inexactness_study(system: HamiltonianSystem, x: np.ndarray, hs: Sequence[float], cfg: NewtonConfig,
                      inject_noise: bool = False) -> list[InexactnessRow]:
    """Finite difference S4, F and F' against their dual-number counterparts.

    xhat is one RK4 step of size h from x. With inject_noise the finite difference side sees
    the energy perturbed by up to cfg.fd.eps_bar. Norms are the maximum absolute entry.
    """
    eps = cfg.fd.eps_bar
    fd_system: System = system
    if inject_noise:
        fd_system = NoisyHamiltonian(system, eps, cfg.seed)

    rows = []
    for h in hs:
        xhat = rk4_step(system, x, h) if h != 0 else x.copy()

        s_exact = s4(system, x, xhat, h, *ad_providers(system))
        s_fd = s4_tau(fd_system, x, xhat, h, cfg.fd, EvalCounter())

        exact = NewtonSystem(system, MethodKind.SIA4_AD, x, h, cfg, EvalCounter())
        f_exact, sbar_exact = exact.residual(xhat)
        jac_exact = exact.jacobian(xhat, sbar_exact)

        approx = NewtonSystem(fd_system, MethodKind.SIA4_DF, x, h, cfg, EvalCounter())
        f_fd, sbar_fd = approx.residual(xhat)
        jac_fd = approx.jacobian(xhat, sbar_fd)

        e23 = eps ** (2.0 / 3.0)
        e12 = eps ** 0.5
        row = InexactnessRow(h=h,
                             s_error=_max_entry(s_fd, s_exact),
                             f_error=_max_entry(f_fd, f_exact),
                             jac_error=_max_entry(jac_fd, jac_exact),
                             s_theory=e23 + h * h * e12,
                             f_theory=abs(h) * e23 + abs(h) ** 3 * e12,
                             jac_theory=e23 + h * h + abs(h) ** 3 * e12)
        logging.info('h=%g: S %.3e, F %.3e, Jacobian %.3e', h, row.s_error, row.f_error, row.jac_error)
        rows.append(row)
    return rows


@dc.dataclass
class WorkRow:
    method: MethodKind
    h: float
    steps: int
    error: float
    energy_error: float
    evals: int
    wall_time: float
    unconverged: int


def work_precision_study(system: System, methods: Sequence[MethodKind], x0: np.ndarray, T: float,
                         hs: Sequence[float], cfg: NewtonConfig) -> list[WorkRow]:
    ref = reference_solution(system, x0, T)
    rows = []
    index = 0
    for method in methods:
        for h in hs:
            steps = steps_for(T, h)
            start = time.perf_counter()
            traj = integrate(system, method, x0, h, steps, cell_config(cfg, index))
            elapsed = time.perf_counter() - start
            index += 1
            rows.append(WorkRow(method=method, h=h, steps=steps,
                                error=float(np.linalg.norm(traj.states[-1] - ref)),
                                energy_error=float(traj.energy_drift().max()),
                                evals=int(traj.evals_cum[-1]),
                                wall_time=elapsed,
                                unconverged=traj.unconverged_steps))
    return rows


@dc.dataclass
class TerrainRun:
    potential: terrain.TerrainPotential
    trajectory: Trajectory
    report: terrain.ContainmentReport

    @property
    def h0(self) -> float:
        return self.report.h0


def terrain_study(grid: terrain.ElevationGrid, x0: np.ndarray, h: float, steps: int, cfg: NewtonConfig,
                  method: MethodKind = MethodKind.SIA_DF) -> TerrainRun:
    if not method.derivative_free:
        raise ValueError(f'The terrain potential cannot be differentiated; {method.value} needs derivatives')
    potential = terrain.build_potential(grid)
    system = terrain.make_topographic(potential)
    traj = integrate(system, method, x0, h, steps, cfg)
    report = terrain.containment_check(traj, float(traj.energies[0]), potential)
    logging.info('Terrain run: H0=%.6f, %d violations, max drift %.3e', report.h0, len(report.violations),
                 report.max_drift)
    return TerrainRun(potential=potential, trajectory=traj, report=report)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
