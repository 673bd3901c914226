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

import struct
import hashlib
import dataclasses as dc

from typing import Any, Callable, Optional, Sequence, Union

import numpy as np

import dfdgm.dual as ad

from dfdgm.common import DimensionError, EnergyDomainError

EnergyFn = Callable[[Sequence[Any]], Any]
GradientFn = Callable[[np.ndarray], np.ndarray]


def state_vector(entries: Any) -> np.ndarray:
    """Validates and converts to a float state vector."""
    x = np.array(entries, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionError(f'State must be one-dimensional, got shape {x.shape}')
    if not np.all(np.isfinite(x)):
        raise ValueError(f'State has non-finite entries: {x}')
    return x


def canonical_structure(n: int) -> np.ndarray:
    """[[0, I], [-I, 0]] for an even n."""
    if n <= 0 or n % 2 != 0:
        raise DimensionError(f'Canonical structure needs a positive even dimension, got {n}')
    m = n // 2
    eye = np.eye(m)
    zero = np.zeros((m, m))
    return np.block([[zero, eye], [-eye, zero]])


def check_skew(s: np.ndarray) -> None:
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f'Structure matrix must be square, got shape {s.shape}')
    if not np.array_equal(s.T, -s):
        raise ValueError('Structure matrix is not skew-symmetric')


@dc.dataclass(frozen=True)
class HamiltonianSystem:
    name: str
    n: int
    energy: EnergyFn
    structure: np.ndarray
    analytic_gradient: Optional[GradientFn] = None

    def __post_init__(self) -> None:
        if self.structure.shape != (self.n, self.n):
            raise DimensionError(f'{self.name}: structure has shape {self.structure.shape}, expected {(self.n, self.n)}')
        check_skew(self.structure)
        self.structure.setflags(write=False)


@dc.dataclass(frozen=True)
class NoisyHamiltonian:
    """A system whose energy is only known to an absolute precision noise_bound.

    The perturbation is a fixed function of (seed, x), so that repeated evaluations at the same
    point agree and difference quotients see one perturbed energy.
    """
    base: HamiltonianSystem
    noise_bound: float
    seed: int = 0

    def __post_init__(self) -> None:
        if self.noise_bound < 0:
            raise ValueError(f'Negative noise bound: {self.noise_bound}')

    @property
    def name(self) -> str:
        return f'{self.base.name}+noise({self.noise_bound:g})'

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def structure(self) -> np.ndarray:
        return self.base.structure

    @property
    def analytic_gradient(self) -> Optional[GradientFn]:
        return self.base.analytic_gradient

    def noise(self, x: Sequence[Any]) -> float:
        bits = np.array([ad.primal(v) for v in x], dtype=np.float64).tobytes()
        digest = hashlib.blake2b(struct.pack('<q', self.seed) + bits, digest_size=8).digest()
        u = struct.unpack('<Q', digest)[0] / float(2 ** 64 - 1)
        return self.noise_bound * (2.0 * u - 1.0)

    def energy(self, x: Sequence[Any]) -> Any:
        return self.base.energy(x) + self.noise(x)


System = Union[HamiltonianSystem, NoisyHamiltonian]


@dc.dataclass
class EvalCounter:
    count: int = 0

    def tick(self) -> None:
        self.count += 1


def eval_energy(system: System, x: np.ndarray, counter: Optional[EvalCounter]) -> Any:
    """Instrumented access to H: every call is one energy evaluation."""
    if len(x) != system.n:
        raise DimensionError(f'{system.name}: state has dimension {len(x)}, expected {system.n}')
    if counter is not None:
        counter.tick()
    if isinstance(x, np.ndarray):
        point = x.tolist()
    else:
        point = list(x)
    return system.energy(point)


def central_difference(system: System, x: np.ndarray, i: int, tau: float,
                       counter: Optional[EvalCounter]) -> Any:
    """(H(x + tau e_i) - H(x - tau e_i)) / (2 tau); two evaluations."""
    xp = x.copy()
    xm = x.copy()
    xp[i] = xp[i] + tau
    xm[i] = xm[i] - tau
    return (eval_energy(system, xp, counter) - eval_energy(system, xm, counter)) / (2 * tau)


def _harmonic_energy(x: Sequence[Any]) -> Any:
    ret: Any = 0.0
    for v in x:
        ret = ret + v * v
    return 0.5 * ret


def make_harmonic(n: int = 2) -> HamiltonianSystem:
    if n % 2 != 0:
        raise DimensionError(f'Harmonic oscillator needs an even dimension, got {n}')
    return HamiltonianSystem(name='harmonic', n=n, energy=_harmonic_energy,
                             structure=canonical_structure(n),
                             analytic_gradient=lambda x: np.array(x, dtype=np.float64))


def _lennard_jones_energy(x: Sequence[Any]) -> Any:
    q, p = x
    if ad.primal(q) == 0:
        raise EnergyDomainError('Lennard-Jones potential is singular at q=0')
    q6 = q ** -6
    return 0.5 * p * p + 0.25 * (q6 * q6 - 2 * q6)


def _lennard_jones_gradient(x: np.ndarray) -> np.ndarray:
    q, p = float(x[0]), float(x[1])
    if q == 0:
        raise EnergyDomainError('Lennard-Jones potential is singular at q=0')
    return np.array([0.25 * (-12 * q ** -13 + 12 * q ** -7), p])


def make_lennard_jones() -> HamiltonianSystem:
    return HamiltonianSystem(name='lennard-jones', n=2, energy=_lennard_jones_energy,
                             structure=canonical_structure(2),
                             analytic_gradient=_lennard_jones_gradient)


def _double_pendulum_energy(x: Sequence[Any]) -> Any:
    q1, q2, p1, p2 = x
    d = q1 - q2
    sd = ad.sin(d)
    kinetic = (0.5 * p1 * p1 + p2 * p2 - p1 * p2 * ad.cos(d)) / (1 + sd * sd)
    return kinetic - 2 * ad.cos(q1) - ad.cos(q2)


def make_double_pendulum() -> HamiltonianSystem:
    return HamiltonianSystem(name='double-pendulum', n=4, energy=_double_pendulum_energy,
                             structure=canonical_structure(4))


# The built-in systems and their default initial states
SYSTEMS: dict[str, Callable[[], HamiltonianSystem]] = {
    'harmonic': make_harmonic,
    'lennard-jones': make_lennard_jones,
    'double-pendulum': make_double_pendulum,
}

INITIAL_STATES: dict[str, tuple[float, ...]] = {
    'harmonic': (1.0, 0.0),
    'lennard-jones': (1.21, 0.34),
    'double-pendulum': (0.1, 0.2, 0.25, -0.3),
}


def get_system(name: str) -> HamiltonianSystem:
    try:
        return SYSTEMS[name]()
    except KeyError:
        raise ValueError(f'Unknown system: {name} (known: {", ".join(SYSTEMS)})') from None


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
