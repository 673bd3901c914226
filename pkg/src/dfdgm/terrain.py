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

"""Motion on an interpolated elevation grid.

The grid covers [-1, 1]^2 with uniform spacing. Node (i, j), row i and column j, sits at
(x, y) = (-1 + 2j/(cols-1), -1 + 2i/(rows-1)).

Grid file format (UTF-8 text):
    line 1:     rows cols
    next rows:  cols decimal numbers separated by single spaces
Lines starting with '#' are comments and are ignored everywhere.
"""

import io
import math
import logging
import dataclasses as dc

from typing import Any, Optional, Sequence, TextIO

import numpy as np
import scipy.interpolate

import dfdgm.integrators

from dfdgm.common import EnergyDomainError, GridFormatError
from dfdgm.systems import HamiltonianSystem, canonical_structure

MIN_GRID = 4


@dc.dataclass(frozen=True)
class ElevationGrid:
    values: np.ndarray

    def __post_init__(self) -> None:
        v = self.values
        if v.ndim != 2:
            raise GridFormatError(f'Grid must be two-dimensional, got shape {v.shape}')
        if v.shape[0] != v.shape[1]:
            raise GridFormatError(f'Grid must be square, got {v.shape[0]}x{v.shape[1]}')
        if v.shape[0] < MIN_GRID:
            raise GridFormatError(f'Grid must be at least {MIN_GRID}x{MIN_GRID}, got {v.shape[0]}x{v.shape[1]}')
        if not np.all(np.isfinite(v)):
            raise GridFormatError('Grid has non-finite values')

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def cols(self) -> int:
        return int(self.values.shape[1])


def parse_grid(f: TextIO) -> ElevationGrid:
    header: Optional[tuple[int, int]] = None
    rows: list[list[float]] = []

    for lineno, line in enumerate(f, start=1):
        st = line.strip()
        if not st or st.startswith('#'):
            continue
        items = st.split()
        if header is None:
            if len(items) != 2:
                raise GridFormatError(f'Expected "rows cols", got: {st}', lineno)
            try:
                header = (int(items[0]), int(items[1]))
            except ValueError:
                raise GridFormatError(f'Bad dimensions: {st}', lineno) from None
            if header[0] != header[1]:
                raise GridFormatError(f'Grid must be square, got {header[0]}x{header[1]}', lineno)
            continue
        if len(rows) == header[0]:
            raise GridFormatError(f'More than {header[0]} data rows', lineno)
        if len(items) != header[1]:
            raise GridFormatError(f'Expected {header[1]} values, got {len(items)}', lineno)
        try:
            rows.append([float(x) for x in items])
        except ValueError as e:
            raise GridFormatError(f'Bad number: {e}', lineno) from None

    if header is None:
        raise GridFormatError('Empty grid file')
    if len(rows) != header[0]:
        raise GridFormatError(f'Expected {header[0]} data rows, got {len(rows)}')

    return ElevationGrid(np.array(rows, dtype=np.float64))


def load_grid(path: str) -> ElevationGrid:
    with open(path, encoding='utf-8') as f:
        return parse_grid(f)


def format_grid(grid: ElevationGrid, comment: Optional[str] = None) -> str:
    out = io.StringIO()
    if comment:
        out.write(f'# {comment}\n')
    out.write(f'{grid.rows} {grid.cols}\n')
    for row in grid.values:
        out.write(' '.join(repr(float(x)) for x in row))
        out.write('\n')
    return out.getvalue()


def save_grid(grid: ElevationGrid, path: str, comment: Optional[str] = None) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        f.write(format_grid(grid, comment))


def node_coords(size: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, size)


def synth_grid(seed: int, size: int = 122, n_bumps: int = 8, basin_width: float = 0.3) -> ElevationGrid:
    """Random Gaussian bumps, flattened to zero at the origin, sampled on the grid nodes.

    The factor 1 - exp(-|q|^2 / (2 basin_width^2)) makes the origin the lowest point, so that
    motion started there with small momentum stays well inside [-1, 1]^2.
    """
    if size < MIN_GRID:
        raise GridFormatError(f'Grid must be at least {MIN_GRID}x{MIN_GRID}, got {size}')
    rng = np.random.default_rng(seed)
    c = node_coords(size)
    xs, ys = np.meshgrid(c, c)
    values = np.zeros((size, size))
    for _ in range(n_bumps):
        cx, cy = rng.uniform(-1.0, 1.0, 2)
        width = rng.uniform(0.15, 0.5)
        height = rng.uniform(0.2, 1.0)
        values += height * np.exp(-((xs - cx) ** 2 + (ys - cy) ** 2) / (2 * width * width))
    if basin_width > 0:
        values *= 1.0 - np.exp(-(xs * xs + ys * ys) / (2 * basin_width * basin_width))
    return ElevationGrid(values)


class TerrainPotential:
    """Natural bicubic spline through the normalized grid values.

    Per cell the spline is sum_{k,l} c[l, iy, k, ix] ty^(3-l) tx^(3-k) with tx, ty the offsets
    from the lower left node of the cell.
    """

    vmin: float
    vmax: float
    degenerate: bool

    def __init__(self, grid: ElevationGrid) -> None:
        values = grid.values
        self.vmin = float(values.min())
        self.vmax = float(values.max())
        self.degenerate = self.vmax == self.vmin
        self.nodes_x = node_coords(grid.cols)
        self.nodes_y = node_coords(grid.rows)
        self.dx = float(self.nodes_x[1] - self.nodes_x[0])
        self.dy = float(self.nodes_y[1] - self.nodes_y[0])

        if self.degenerate:
            logging.warning('Elevation grid is constant; the terrain potential is zero')
            self.coefs = np.zeros((4, grid.rows - 1, 4, grid.cols - 1))
            return

        norm = (values - self.vmin) / (self.vmax - self.vmin)
        # Along x, for every row: shape (4, cols-1, rows)
        cx = scipy.interpolate.CubicSpline(self.nodes_x, norm, axis=1, bc_type='natural').c
        flat = cx.reshape(4 * (grid.cols - 1), grid.rows).T
        # Along y, for every x-coefficient: shape (4, rows-1, 4 * (cols-1))
        cy = scipy.interpolate.CubicSpline(self.nodes_y, flat, axis=0, bc_type='natural').c
        self.coefs = cy.reshape(4, grid.rows - 1, 4, grid.cols - 1)

    def _locate(self, q: Sequence[Any]) -> tuple[int, int, float, float]:
        qx = float(q[0])
        qy = float(q[1])
        if not (-1.0 <= qx <= 1.0 and -1.0 <= qy <= 1.0) or math.isnan(qx) or math.isnan(qy):
            raise EnergyDomainError(f'Terrain potential is undefined outside [-1,1]^2: q=({qx}, {qy})')
        ix = min(int((qx + 1.0) / self.dx), len(self.nodes_x) - 2)
        iy = min(int((qy + 1.0) / self.dy), len(self.nodes_y) - 2)
        return ix, iy, qx - self.nodes_x[ix], qy - self.nodes_y[iy]

    def cell_value(self, ix: int, iy: int, tx: float, ty: float, dx_order: int = 0, dy_order: int = 0) -> float:
        """Evaluates the polynomial of cell (ix, iy) or one of its derivatives at the offsets."""
        c = self.coefs[:, iy, :, ix]
        return float(_powers(ty, dy_order) @ c @ _powers(tx, dx_order))

    def __call__(self, q: Sequence[Any]) -> float:
        ix, iy, tx, ty = self._locate(q)
        return self.cell_value(ix, iy, tx, ty)


def _powers(t: float, order: int) -> np.ndarray:
    """[t^3, t^2, t, 1] differentiated order times."""
    if order == 0:
        return np.array([t * t * t, t * t, t, 1.0])
    if order == 1:
        return np.array([3 * t * t, 2 * t, 1.0, 0.0])
    if order == 2:
        return np.array([6 * t, 2.0, 0.0, 0.0])
    raise ValueError(f'Unsupported derivative order {order}')


def build_potential(grid: ElevationGrid) -> TerrainPotential:
    return TerrainPotential(grid)


def total_potential(potential: TerrainPotential, q: Sequence[Any]) -> float:
    """U(q) = U_top(q) + q.q / 2"""
    qx = float(q[0])
    qy = float(q[1])
    return potential((qx, qy)) + 0.5 * (qx * qx + qy * qy)


def make_topographic(potential: TerrainPotential) -> HamiltonianSystem:
    def energy(x: Sequence[Any]) -> float:
        q1, q2, p1, p2 = (float(v) for v in x)
        return total_potential(potential, (q1, q2)) + 0.5 * (p1 * p1 + p2 * p2)

    return HamiltonianSystem(name='terrain', n=4, energy=energy, structure=canonical_structure(4))


@dc.dataclass
class ContainmentReport:
    h0: float
    steps: int = 0
    violations: list[int] = dc.field(default_factory=list)
    max_excess: Optional[float] = None  # max over steps of U(q_n) - H0
    max_drift: Optional[float] = None  # max over steps of |H(x_n) - H(x_0)|

    @property
    def ok(self) -> bool:
        return not self.violations


CONTAINMENT_TOL = 1e-6


def containment_check(trajectory: dfdgm.integrators.Trajectory, h0: float, potential: TerrainPotential,
                      tolerance: float = CONTAINMENT_TOL) -> ContainmentReport:
    """Flags the steps whose position leaves the sublevel set {q : U(q) <= H0}."""
    report = ContainmentReport(h0=h0, steps=len(trajectory))
    if len(trajectory) == 0:
        return report

    excess = np.array([total_potential(potential, x[:2]) - h0 for x in trajectory.states])
    report.violations = [int(k) for k in np.nonzero(excess > tolerance)[0]]
    report.max_excess = float(excess.max())
    report.max_drift = float(np.max(np.abs(trajectory.energies - trajectory.energies[0])))
    return report


@dc.dataclass
class Raster:
    xs: np.ndarray
    ys: np.ndarray
    values: np.ndarray  # values[i, j] = U(xs[j], ys[i])


def raster(potential: TerrainPotential, resolution: int) -> Raster:
    """Samples the total potential on a uniform raster for level-set plots."""
    if resolution < 2:
        raise ValueError(f'Raster resolution must be at least 2, got {resolution}')
    c = np.linspace(-1.0, 1.0, resolution)
    values = np.empty((resolution, resolution))
    for i, y in enumerate(c):
        for j, x in enumerate(c):
            values[i, j] = total_potential(potential, (x, y))
    return Raster(xs=c, ys=c, values=values)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
