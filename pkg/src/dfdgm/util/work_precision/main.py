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


from dfdgm import studies
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit

HEADER = ['method', 'h', 'steps', 'global_error', 'energy_error', 'evals', 'wall_time', 'unconverged']


def doit() -> int:
    cfg = experiment.get_experiment()
    rows = studies.work_precision_study(cfg.make_system(), cfg.method_kinds(), cfg.initial_state(), cfg.time,
                                        cfg.step_sizes(), cfg.newton_config())

    table = CsvTable(header=HEADER, echo=config_echo(cfg))
    for r in rows:
        table.add(r.method, r.h, r.steps, r.error, r.energy_error, r.evals, r.wall_time, r.unconverged)
    emit(table, cfg.out)
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
