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


import argparse

import dfdgm.util.config
import dfdgm.util.terrain.config

from dfdgm.common import ConfigError
from dfdgm.util import experiment

TERRAIN_TOL = 1e-7
TERRAIN_START = [0.0, 0.0, -0.1, 0.2]


def add_args(parser: argparse.ArgumentParser) -> None:
    config = dfdgm.util.terrain.config.Config()
    dfdgm.util.config.set_module_config('terrain', config)

    experiment.add_common_args(parser)
    parser.add_argument('--grid', dest='grid_file', default=config.grid_file,
                        help='Elevation grid file (def: a synthetic grid)')
    parser.add_argument('--grid-seed', type=int, default=config.grid_seed,
                        help='Seed of the synthetic grid (def: %(default)s)')
    parser.add_argument('--grid-size', type=int, default=config.grid_size,
                        help='Size of the synthetic grid (def: %(default)s)')
    parser.add_argument('--save-grid', default=config.save_grid, help='Write the grid used to this file')
    parser.add_argument('--raster-out', default=config.raster_out,
                        help='Write the total potential on a raster to this CSV file')
    parser.add_argument('--raster-resolution', type=int, default=config.raster_resolution,
                        help='Raster points per axis (def: %(default)s)')


def handle_args(args: argparse.Namespace) -> None:
    config = dfdgm.util.config.get_config()
    config.grid_file = args.grid_file
    config.grid_seed = args.grid_seed
    config.grid_size = args.grid_size
    config.save_grid = args.save_grid
    config.raster_out = args.raster_out
    config.raster_resolution = args.raster_resolution

    # The system is the terrain model built from the grid
    if args.system is not None:
        raise ConfigError('terrain does not take --system')
    if args.inject_noise:
        raise ConfigError('terrain does not take --inject-noise')

    defaults = experiment.ExperimentConfig(methods=['SIA_DF'], h=[0.02], steps=5000, tol=TERRAIN_TOL,
                                           x0=list(TERRAIN_START))
    cfg = experiment.handle_common_args(args, defaults)
    if cfg.system != defaults.system or cfg.inject_noise:
        raise ConfigError('The config file sets system or inject_noise, which terrain does not use')
    if len(cfg.x0) != 4:
        raise ConfigError(f'The terrain system has dimension 4, got an initial state of dimension {len(cfg.x0)}')


def init() -> None:
    pass

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
