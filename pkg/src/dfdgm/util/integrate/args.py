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

from dfdgm.common import ConfigError
from dfdgm.util import experiment


def add_args(parser: argparse.ArgumentParser) -> None:
    experiment.add_common_args(parser)


def handle_args(args: argparse.Namespace) -> None:
    cfg = experiment.handle_common_args(args, experiment.ExperimentConfig())
    if len(cfg.methods) != 1:
        raise ConfigError(f'integrate takes exactly one method, got {len(cfg.methods)}')


def init() -> None:
    pass

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
