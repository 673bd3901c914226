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

import numpy as np

import dfdgm.util.config

from dfdgm import studies, terrain
from dfdgm.systems import state_vector
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit, write_file


def get_grid() -> terrain.ElevationGrid:
    config = dfdgm.util.config.get_config()
    if config.grid_file:
        logging.info('Loading grid from %s', config.grid_file)
        return terrain.load_grid(config.grid_file)
    logging.info('Using a synthetic %dx%d grid with seed %d', config.grid_size, config.grid_size, config.grid_seed)
    return terrain.synth_grid(config.grid_seed, config.grid_size)


def trajectory_table(run: studies.TerrainRun, echo: list) -> CsvTable:
    traj = run.trajectory
    report = run.report
    violations = set(report.violations)
    table = CsvTable(header=['t', 'q_1', 'q_2', 'p_1', 'p_2', 'H', 'U', 'violation'], echo=echo)
    for k in range(len(traj)):
        x = traj.states[k]
        table.add(traj.times[k], *x, traj.energies[k], terrain.total_potential(run.potential, x[:2]),
                  k in violations)
    table.trailer.extend([
        ('H0', report.h0),
        ('violations', len(report.violations)),
        ('max_excess', report.max_excess),
        ('max_drift', report.max_drift),
    ])
    return table


def raster_table(potential: terrain.TerrainPotential, resolution: int) -> CsvTable:
    r = terrain.raster(potential, resolution)
    table = CsvTable(header=['x', 'y', 'U'])
    for i, y in enumerate(r.ys):
        for j, x in enumerate(r.xs):
            table.add(x, y, r.values[i, j])
    return table


def doit() -> int:
    cfg = experiment.get_experiment()
    config = dfdgm.util.config.get_config()

    grid = get_grid()
    if config.save_grid:
        comment = None if config.grid_file else f'synthetic grid, seed {config.grid_seed}'
        terrain.save_grid(grid, config.save_grid, comment)

    x0 = state_vector(np.array(cfg.x0))
    run = studies.terrain_study(grid, x0, cfg.step_sizes()[0], cfg.steps, cfg.newton_config(), cfg.method_kinds()[0])

    echo = [(k, 'terrain' if k == 'system' else v)
            for k, v in config_echo(cfg, dfdgm.util.config.get_module_config('terrain'))]
    emit(trajectory_table(run, echo), cfg.out)
    if config.raster_out:
        write_file(config.raster_out, raster_table(run.potential, config.raster_resolution).text())

    if not run.report.ok:
        logging.error('%d steps left the sublevel set of H0=%.6f, first at step %d', len(run.report.violations),
                      run.report.h0, run.report.violations[0])
        return 1
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
