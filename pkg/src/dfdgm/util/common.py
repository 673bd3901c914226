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


import io
import os
import sys
import csv
import logging
import dataclasses as dc

from typing import Any, Iterable, Optional, Sequence, TextIO


def write_file(fn: str, contents: str, perms: Optional[int] = None) -> None:
    if perms:
        perms2 = perms
    else:
        perms2 = 0o666

    fd = os.open(fn, os.O_CREAT | os.O_RDWR | os.O_TRUNC, perms2)

    # Bypass umask
    if perms:
        os.fchmod(fd, perms)

    with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
        f.write(contents)

    logging.debug('Wrote %d bytes to %s', len(contents), fn)


def format_value(v: Any) -> str:
    """Shortest text that reads back to the same value."""
    if v is None:
        return ''
    if hasattr(v, 'item') and hasattr(v, 'dtype'):
        # numpy scalars
        return format_value(v.item())
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return ','.join(format_value(x) for x in v)
    if hasattr(v, 'value') and isinstance(getattr(v, 'value'), str):
        # enums
        return str(v.value)
    return str(v)


def config_echo(*cfgs: object) -> list[tuple[str, Any]]:
    """The (name, value) pairs of the dataclass configs, in field order."""
    ret: list[tuple[str, Any]] = []
    for cfg in cfgs:
        assert dc.is_dataclass(cfg)
        ret.extend((f.name, getattr(cfg, f.name)) for f in dc.fields(cfg))
    return ret


@dc.dataclass
class CsvTable:
    header: Sequence[str]
    rows: list[Sequence[Any]] = dc.field(default_factory=list)
    echo: list[tuple[str, Any]] = dc.field(default_factory=list)  # '# key = value' lines before the header
    trailer: list[tuple[str, Any]] = dc.field(default_factory=list)  # Same, after the rows

    def add(self, *row: Any) -> None:
        if len(row) != len(self.header):
            raise ValueError(f'Row has {len(row)} columns, header has {len(self.header)}')
        self.rows.append(row)

    def write(self, f: TextIO) -> None:
        for k, v in self.echo:
            f.write(f'# {k} = {format_value(v)}\n')
        w = csv.writer(f, lineterminator='\n')
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([format_value(x) for x in row])
        for k, v in self.trailer:
            f.write(f'# {k} = {format_value(v)}\n')

    def text(self) -> str:
        out = io.StringIO()
        self.write(out)
        return out.getvalue()


def emit(table: CsvTable, path: Optional[str]) -> None:
    """Writes the table to path, or to stdout without one."""
    if path is None:
        table.write(sys.stdout)
        sys.stdout.flush()
        return
    write_file(path, table.text())


def read_csv(lines: Iterable[str]) -> tuple[list[str], list[list[str]]]:
    """Header and rows of CSV text, skipping '#' comment lines."""
    data = [x for x in lines if not x.startswith('#')]
    reader = csv.reader(data)
    header = next(reader)
    return header, [row for row in reader]

# vim: set ts=8 sts=4 sw=4 et formatoptions=r ai nocindent:
