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


def doit() -> int:
    cfg = experiment.get_experiment()
    methods = cfg.method_kinds()
    h = cfg.step_sizes()[0]

    runs = studies.energy_drift_study(cfg.make_system(), methods, cfg.initial_state(), h, cfg.steps,
                                      cfg.newton_config())

    table = CsvTable(header=['t'] + [m.value for m in methods], echo=config_echo(cfg))
    drifts = [runs[m].energy_drift() for m in methods]
    times = runs[methods[0]].times
    # Step 0 has no drift by definition
    for k in range(1, len(times)):
        table.add(times[k], *(d[k] for d in drifts))
    for m, d in zip(methods, drifts):
        table.trailer.append((f'max_drift {m.value}', float(d.max())))

    emit(table, cfg.out)
    return 0

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
