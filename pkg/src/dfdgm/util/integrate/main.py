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


import logging

from dfdgm.integrators import Trajectory, integrate
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit


def trajectory_table(traj: Trajectory, echo: list) -> CsvTable:
    n = traj.states.shape[1]
    header = ['t'] + [f'x_{i + 1}' for i in range(n)] + ['H', 'newton_iters', 'residual', 'evals_cum']
    table = CsvTable(header=header, echo=echo)
    for k in range(len(traj)):
        table.add(traj.times[k], *traj.states[k], traj.energies[k], traj.iterations[k], traj.residuals[k],
                  traj.evals_cum[k])
    return table


def doit() -> int:
    cfg = experiment.get_experiment()
    method = cfg.method_kinds()[0]
    h = cfg.step_sizes()[0]

    traj = integrate(cfg.make_system(), method, cfg.initial_state(), h, cfg.steps, cfg.newton_config())
    logging.info('Max energy drift: %.3e', traj.energy_drift().max())
    if traj.unconverged_steps:
        logging.warning('%d steps did not converge', traj.unconverged_steps)

    emit(trajectory_table(traj, config_echo(cfg)), cfg.out)
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
