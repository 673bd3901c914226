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


"""Settings shared by all experiment commands.

Every command registers the same ExperimentConfig (under 'experiment') and passes its own
defaults to handle_common_args(). Values are taken from, in increasing priority: the command
defaults, the --config file and the command line.
"""

import argparse
import logging
import dataclasses as dc

from typing import Optional

import numpy as np

import dfdgm.finite_diff
import dfdgm.util.config

from dfdgm import systems
from dfdgm.common import ConfigError, DataclassValidationError, validate_dataclass
from dfdgm.integrators import DEFAULT_MAX_ITER, DEFAULT_TOL, MethodKind, NewtonConfig
from dfdgm.studies import h_levels


@dc.dataclass
class ExperimentConfig:
    system: str = 'double-pendulum'
    methods: list[str] = dc.field(default_factory=lambda: ['SIA_DF'])
    h: list[float] = dc.field(default_factory=list)  # Explicit step sizes; h_max/levels when empty
    h_max: float = 0.1
    levels: int = 6
    steps: int = 100
    time: float = 1.0  # End time T
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    tau1: Optional[float] = None  # None: from noise
    tau2: Optional[float] = None
    noise: float = dfdgm.finite_diff.DEFAULT_EPS_BAR
    inject_noise: bool = False
    lenient: bool = False
    seed: int = 0
    x0: list[float] = dc.field(default_factory=list)  # The system's default state when empty
    out: Optional[str] = None

    def validate(self) -> None:
        try:
            validate_dataclass(self)
        except DataclassValidationError as e:
            raise ConfigError(str(e)) from None

        if self.system not in systems.SYSTEMS:
            raise ConfigError(f'Unknown system: {self.system} (known: {", ".join(systems.SYSTEMS)})')
        if not self.methods:
            raise ConfigError('No methods given')
        for m in self.methods:
            try:
                MethodKind.parse(m)
            except ValueError as e:
                raise ConfigError(str(e)) from None
        if any(h <= 0 for h in self.h) or self.h_max <= 0:
            raise ConfigError('Step sizes must be positive')
        if self.levels < 1:
            raise ConfigError(f'levels must be at least 1, got {self.levels}')
        if self.steps < 1:
            raise ConfigError(f'steps must be at least 1, got {self.steps}')
        if self.time <= 0:
            raise ConfigError(f'End time must be positive, got {self.time}')
        if self.noise <= 0:
            raise ConfigError(f'noise must be positive, got {self.noise}')
        if self.tol <= 0 or self.max_iter < 1:
            raise ConfigError(f'Bad Newton settings: tol={self.tol}, max_iter={self.max_iter}')
        if (self.tau1 is not None and self.tau1 <= 0) or (self.tau2 is not None and self.tau2 <= 0):
            raise ConfigError(f'Finite difference steps must be positive: tau1={self.tau1}, tau2={self.tau2}')

    def method_kinds(self) -> list[MethodKind]:
        return [MethodKind.parse(m) for m in self.methods]

    def step_sizes(self) -> list[float]:
        if self.h:
            return list(self.h)
        return h_levels(self.h_max, self.levels)

    def fd_config(self) -> dfdgm.finite_diff.FDConfig:
        fdc = dfdgm.finite_diff.FDConfig.for_precision(self.noise)
        if self.tau1 is not None:
            fdc = dc.replace(fdc, tau1=self.tau1)
        if self.tau2 is not None:
            fdc = dc.replace(fdc, tau2=self.tau2)
        return fdc

    def newton_config(self) -> NewtonConfig:
        return NewtonConfig(tol=self.tol, max_iter=self.max_iter, seed=self.seed, fd=self.fd_config(),
                            strict=not self.lenient)

    def clean_system(self) -> systems.HamiltonianSystem:
        return systems.get_system(self.system)

    def make_system(self) -> systems.System:
        """The configured system, wrapped in the noise model with --inject-noise."""
        base = self.clean_system()
        if self.inject_noise:
            return systems.NoisyHamiltonian(base, self.noise, self.seed)
        return base

    def initial_state(self) -> np.ndarray:
        if self.x0:
            x0 = systems.state_vector(self.x0)
        else:
            x0 = systems.state_vector(systems.INITIAL_STATES[self.system])
        n = self.clean_system().n
        if len(x0) != n:
            raise ConfigError(f'{self.system}: initial state has dimension {len(x0)}, expected {n}')
        return x0


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'Expected comma separated numbers: {text}') from None


def add_common_args(parser: argparse.ArgumentParser) -> None:
    """Adds the experiment flags. Their defaults are None so that unset flags can be told apart."""
    dfdgm.util.config.set_module_config('experiment', ExperimentConfig())

    parser.add_argument('--config', default=None, help='A "key = value" config file')
    parser.add_argument('--system', default=None, choices=list(systems.SYSTEMS), help='The Hamiltonian system')
    parser.add_argument('--method', dest='methods', action='append', default=None,
                        help='A method (repeat or separate with commas): '
                             + ', '.join(x.value for x in MethodKind))
    parser.add_argument('--h', type=_floats, action='append', default=None, help='Step size(s)')
    parser.add_argument('--h-max', type=float, default=None, help='Largest step size of the h grid')
    parser.add_argument('--levels', type=int, default=None, help='Number of halvings in the h grid')
    parser.add_argument('--steps', type=int, default=None, help='Number of steps')
    parser.add_argument('--time', type=float, default=None, help='End time T')
    parser.add_argument('--tol', type=float, default=None, help='Newton tolerance on ||F||')
    parser.add_argument('--max-iter', type=int, default=None, help='Newton iteration limit')
    parser.add_argument('--tau1', type=float, default=None, help='Finite difference step for first derivatives')
    parser.add_argument('--tau2', type=float, default=None, help='Finite difference step for the Hessian')
    parser.add_argument('--noise', type=float, default=None, help='Assumed precision of the energy')
    parser.add_argument('--inject-noise', action='store_true', default=None,
                        help='Perturb the energy by up to --noise')
    parser.add_argument('--lenient', action='store_true', default=None,
                        help='Accept the best iterate after --max-iter instead of failing')
    parser.add_argument('--seed', type=int, default=None, help='RNG seed')
    parser.add_argument('--x0', type=_floats, default=None, help='Initial state, comma separated')
    parser.add_argument('--out', default=None, help='Output CSV file (def: stdout)')


def get_experiment() -> ExperimentConfig:
    cfg = dfdgm.util.config.get_module_config('experiment')
    assert isinstance(cfg, ExperimentConfig)
    return cfg


def handle_common_args(args: argparse.Namespace, defaults: ExperimentConfig) -> ExperimentConfig:
    """Fills the registered ExperimentConfig from defaults, the config file and the flags."""
    cfg = dc.replace(defaults)

    if args.config:
        logging.debug('Loading config file %s', args.config)
        dfdgm.util.config.apply_config_file(cfg, dfdgm.util.config.load_config_file(args.config))

    flags = vars(args)
    for field in dc.fields(ExperimentConfig):
        value = flags.get(field.name)
        if value is None:
            continue
        if field.name == 'methods':
            value = [m.strip() for x in value for m in x.split(',') if m.strip()]
        elif field.name == 'h':
            value = [h for x in value for h in x]
        setattr(cfg, field.name, value)

    cfg.validate()

    target = get_experiment()
    for field in dc.fields(ExperimentConfig):
        setattr(target, field.name, getattr(cfg, field.name))
    return target

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
