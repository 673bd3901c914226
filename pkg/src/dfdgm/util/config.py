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


# - There are two configs: The global(util) config and the per-module
#   config. get_config() returns a MergedConfig that looks an attribute up
#   in the global config first and then in each module config, in the
#   order they were registered.
# - Each module calls set_module_config() in its add_args(). Modules that
#   share a config (e.g. the experiment settings) register it under the
#   same name; only the first registration counts.
# - Config files are flat "key = value" text and are loaded with
#   load_config_file(), then applied with apply_config_file().

__all__ = ['get_config', 'set_module_config', 'load_config_file', 'apply_config_file']

import types
import collections
import dataclasses as dc

from typing import Any, Optional, TextIO, Union, get_args, get_origin

from dfdgm.common import ConfigError, DataclassValidationError, validate_dataclass


@dc.dataclass
class Config:
    util: Optional[str] = None  # The pre-set utility

    debug: bool = False  # Enable debugging
    info: bool = False  # Enable informational messages
    what: Optional[str] = None  # The action
    module: Any = None  # The acting module


class MergedConfig:
    cfgs: tuple[object, ...]

    def __init__(self, *cfgs: object):
        self.cfgs = cfgs

    def __locate_object(self, name: str) -> Optional[object]:
        """Locates the object that holds the attribute name

        @param name     The attribute to lookup
        @return The object or None
        """
        for cfg in self.cfgs:
            if hasattr(cfg, name):
                return cfg
        return None

    def __getattr__(self, name: str) -> Any:
        obj = self.__locate_object(name)

        if not obj:
            raise AttributeError(name)

        return getattr(obj, name)

    def __setattr__(self, name: str, value: Any) -> None:
        if name == 'cfgs':
            object.__setattr__(self, name, value)
            return

        obj = self.__locate_object(name)

        if not obj:
            raise AttributeError(name)

        setattr(obj, name, value)

    def __str__(self) -> str:
        args = ', '.join([str(x) for x in self.cfgs])
        return f'MergedConfig({args})'


_config: Config = Config()
_module_configs: collections.OrderedDict[str, object] = collections.OrderedDict()
_merged_config: MergedConfig = MergedConfig(_config)


def set_module_config(module: str, cfg: object) -> None:
    """! Point to the module config

    @param module   The name to register the config under
    @param cfg      The config object
    """
    global _merged_config

    if module in _module_configs:
        return

    _module_configs[module] = cfg
    _merged_config = MergedConfig(_config, *_module_configs.values())


def get_module_config(module: str) -> Optional[object]:
    return _module_configs.get(module)


def get_config() -> MergedConfig:
    return _merged_config


def reset() -> None:
    """Drops all module configs and restores the global defaults."""
    global _config, _merged_config
    _config = Config()
    _module_configs.clear()
    _merged_config = MergedConfig(_config)


def parse_config_file(f: TextIO) -> dict[str, str]:
    """Reads "key = value" lines. Blank lines and lines starting with '#' are skipped.

    Keys may use dashes or underscores.
    """
    ret: dict[str, str] = {}
    for lineno, line in enumerate(f, start=1):
        st = line.strip()
        if not st or st.startswith('#'):
            continue
        key, sep, value = st.partition('=')
        key = key.strip().replace('-', '_')
        if not sep or not key:
            raise ConfigError(f'line {lineno}: expected "key = value", got: {st}')
        if key in ret:
            raise ConfigError(f'line {lineno}: duplicate key {key}')
        ret[key] = value.strip()
    return ret


def load_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, encoding='utf-8') as f:
            return parse_config_file(f)
    except OSError as e:
        raise ConfigError(f'Cannot read config file {path}: {e.strerror}') from e


def _is_optional(tp: Any) -> bool:
    return get_origin(tp) in (Union, types.UnionType) and type(None) in get_args(tp)


def convert_value(tp: Any, text: str) -> Any:
    """Converts the text of a config value to the field type tp."""
    if _is_optional(tp):
        if text.lower() in ('', 'none'):
            return None
        inner = [x for x in get_args(tp) if x is not type(None)]
        return convert_value(inner[0], text)

    origin = get_origin(tp)
    if origin is list:
        item = get_args(tp)[0]
        return [convert_value(item, x.strip()) for x in text.split(',') if x.strip()]

    if tp is bool:
        low = text.lower()
        if low in ('1', 'true', 'yes', 'on'):
            return True
        if low in ('0', 'false', 'no', 'off'):
            return False
        raise ValueError(f'Not a boolean: {text}')
    if tp in (int, float, str):
        return tp(text)
    raise ValueError(f'Unsupported field type {tp}')


def apply_config_file(cfg: object, values: dict[str, str]) -> None:
    """Sets the dataclass fields of cfg from parsed config file values.

    Unknown keys and values that do not convert are ConfigErrors.
    """
    assert dc.is_dataclass(cfg)
    fields = {f.name: f for f in dc.fields(cfg)}
    for key, text in values.items():
        field = fields.get(key)
        if field is None:
            raise ConfigError(f'Unknown config key: {key}')
        try:
            setattr(cfg, key, convert_value(field.type, text))
        except ValueError as e:
            raise ConfigError(f'Bad value for {key}: {text} ({e})') from None

    try:
        validate_dataclass(cfg)
    except DataclassValidationError as e:
        raise ConfigError(str(e)) from None

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
