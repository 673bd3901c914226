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

from dfdgm import studies
from dfdgm.util import experiment
from dfdgm.util.common import CsvTable, config_echo, emit


def doit() -> int:
    cfg = experiment.get_experiment()
    rows = studies.count_table(cfg.make_system(), cfg.initial_state(), cfg.step_sizes()[0], cfg.newton_config())

    table = CsvTable(header=['quantity', 'n', 'measured', 'formula', 'ok'], echo=config_echo(cfg))
    failed = 0
    for row in rows:
        table.add(row.quantity, row.n, row.measured, row.formula, row.ok)
        if not row.ok:
            logging.error('%s: measured %d evaluations, expected %d', row.quantity, row.measured, row.formula)
            failed += 1

    emit(table, cfg.out)
    return 1 if failed else 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
