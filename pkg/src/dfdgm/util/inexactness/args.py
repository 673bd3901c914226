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
import dfdgm.util.inexactness.config

from dfdgm.util import experiment


def add_args(parser: argparse.ArgumentParser) -> None:
    config = dfdgm.util.inexactness.config.Config()
    dfdgm.util.config.set_module_config('inexactness', config)

    experiment.add_common_args(parser)
    parser.add_argument('--zero-row', action='store_true', default=config.zero_row,
                        help='Also evaluate at h = 0')


def handle_args(args: argparse.Namespace) -> None:
    config = dfdgm.util.config.get_config()
    config.zero_row = args.zero_row
    experiment.handle_common_args(args, experiment.ExperimentConfig(methods=['SIA4_DF'], levels=8))


def init() -> None:
    pass

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
