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


import dataclasses as dc

from typing import Optional


@dc.dataclass
class Config:
    grid_file: Optional[str] = None  # Elevation grid; synthetic when unset
    grid_seed: int = 0
    grid_size: int = 122
    save_grid: Optional[str] = None  # Where to store the grid used
    raster_out: Optional[str] = None  # Where to write U(q) on a raster
    raster_resolution: int = 101

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
