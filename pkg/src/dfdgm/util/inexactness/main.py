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


import dfdgm.util.config

from dfdgm import studies
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit

HEADER = ['h', 's_error', 'f_error', 'jac_error', 's_theory', 'f_theory', 'jac_theory']


def doit() -> int:
    cfg = experiment.get_experiment()
    hs = cfg.step_sizes()
    if dfdgm.util.config.get_config().zero_row:
        hs = hs + [0.0]

    # The dual-number side always sees the clean energy
    rows = studies.inexactness_study(cfg.clean_system(), cfg.initial_state(), hs, cfg.newton_config(),
                                     inject_noise=cfg.inject_noise)

    table = CsvTable(header=HEADER, echo=config_echo(cfg, dfdgm.util.config.get_module_config('inexactness')))
    for r in rows:
        table.add(r.h, r.s_error, r.f_error, r.jac_error, r.s_theory, r.f_theory, r.jac_theory)
    emit(table, cfg.out)
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
