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
import dfdgm.util.converge.config

from dfdgm.util import experiment

DEFAULT_METHODS = ['IA_DF', 'SIA_DF', 'SIA4_DF', 'RK4']


def add_args(parser: argparse.ArgumentParser) -> None:
    config = dfdgm.util.converge.config.Config()
    dfdgm.util.config.set_module_config('converge', config)

    experiment.add_common_args(parser)
    parser.add_argument('--series', action='store_true', default=config.series,
                        help='Write ||x_n - x(t_n)|| for every step at the first h')


def handle_args(args: argparse.Namespace) -> None:
    config = dfdgm.util.config.get_config()
    config.series = args.series
    experiment.handle_common_args(args, experiment.ExperimentConfig(methods=list(DEFAULT_METHODS)))


def init() -> None:
    pass

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
