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
import dataclasses as dc

from typing import Any, NoReturn, Optional, Sequence, Type, get_args, get_origin


class AbortError(Exception):
    excode: int
    error_shown: bool

    def __init__(self, *args: Any, excode: int = 1, error_shown: bool = False, **kwargs: Any):
        """Indicates a program abort with exit code."""
        self.excode = excode
        self.error_shown = error_shown
        super().__init__(*args, **kwargs)


class DataclassValidationError(Exception):
    def __init__(self, field: dc.Field, value: object, data: object) -> None:
        super().__init__(f'Field {field.name} has type {type(value).__name__}, value {value} '
                         f'which is not of type {field.type} in: {data}')


class DimensionError(ValueError):
    """A vector or matrix has the wrong shape for the system at hand."""


class EnergyDomainError(ValueError):
    """The energy is not defined at the requested point."""


class UnsupportedOperationError(TypeError):
    """A dual scalar reached a function that cannot propagate derivatives."""


class ConfigError(ValueError):
    """Bad configuration file contents or option values."""


class GridFormatError(ValueError):
    lineno: Optional[int]

    def __init__(self, msg: str, lineno: Optional[int] = None) -> None:
        self.lineno = lineno
        if lineno is not None:
            msg = f'line {lineno}: {msg}'
        super().__init__(msg)


class NumericalError(Exception):
    """Base class for failures of the numerical machinery."""


class MaxIterationsExceededError(NumericalError):
    residual: float
    iterations: int

    def __init__(self, residual: float, iterations: int) -> None:
        self.residual = residual
        self.iterations = iterations
        super().__init__(f'Newton did not converge in {iterations} iterations (best residual {residual:.3e})')


class SingularJacobianError(NumericalError):
    pass


class StepFailedError(NumericalError):
    step: int

    def __init__(self, step: int, cause: Exception) -> None:
        self.step = step
        super().__init__(f'Step {step} failed: {cause}')


class ReferenceNotConvergedError(NumericalError):
    pass


def abort(reason: str, excode: int = 1) -> NoReturn:
    logging.error('%s', reason)
    raise AbortError(reason, excode=excode, error_shown=True)


def _validate_value_type(value: Any, expected: Sequence[Type]) -> bool:
    """Implements strict type checking (no subclasses). An int does not pass for a float."""

    for entry in expected:
        origin = get_origin(entry)
        if origin is None:
            if type(value) == entry:  # pylint: disable=unidiomatic-typecheck
                return True
            continue
        if origin in (list, tuple):
            if type(value) != origin:  # pylint: disable=unidiomatic-typecheck
                continue
            item_types = [x for x in get_args(entry) if x is not Ellipsis]
            if all(_validate_value_type(x, item_types) for x in value):
                return True
            continue
        if _validate_value_type(value, get_args(entry)):
            return True
    return False


def validate_dataclass(d: object) -> None:
    assert dc.is_dataclass(d)
    fields = dc.fields(d)
    for field in fields:
        value = getattr(d, field.name)
        isok = _validate_value_type(value, [field.type])
        if not isok:
            raise DataclassValidationError(field, value, d)


# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
