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

import dfdgm.util.config

from dfdgm import studies
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit


def convergence_table(result: studies.ConvergenceResult, echo: list) -> CsvTable:
    table = CsvTable(header=['method', 'h', 'steps', 'global_error', 'evals', 'max_iters', 'unconverged'], echo=echo)
    for row in result.rows:
        table.add(row.method, row.h, row.steps, row.error, row.evals, row.max_iterations, row.unconverged)
    for method, slope in result.slopes.items():
        table.trailer.append((f'slope {method.value}', slope))
    return table


def series_table(cfg: experiment.ExperimentConfig, echo: list) -> CsvTable:
    h = cfg.step_sizes()[0]
    steps = studies.steps_for(cfg.time, h)
    system = cfg.make_system()
    x0 = cfg.initial_state()
    table = CsvTable(header=['method', 't', 'error'], echo=echo)
    for index, method in enumerate(cfg.method_kinds()):
        series = studies.error_series(system, method, x0, h, steps, studies.cell_config(cfg.newton_config(), index))
        for t, err in zip(series.trajectory.times, series.errors):
            table.add(method, t, err)
    return table


def doit() -> int:
    cfg = experiment.get_experiment()
    module_cfg = dfdgm.util.config.get_module_config('converge')
    echo = config_echo(cfg, module_cfg)

    if dfdgm.util.config.get_config().series:
        emit(series_table(cfg, echo), cfg.out)
        return 0

    result = studies.convergence_study(cfg.make_system(), cfg.method_kinds(), cfg.initial_state(), cfg.time,
                                       cfg.step_sizes(), cfg.newton_config())
    for method, slope in result.slopes.items():
        if slope is None:
            logging.warning('%s: too few points above the error floor for a slope', method.value)
        else:
            logging.info('%s: slope %.3f', method.value, slope)
    emit(convergence_table(result, echo), cfg.out)
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
