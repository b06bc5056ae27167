# -*- coding: utf-8 -*-
import csv
import enum
import logging
import math
from pathlib import Path
import sys
from typing import Any, Dict, Iterable, List, Optional, Sequence, TextIO, Union

import numpy as np

from . import CSV_SIGNIFICANT_DIGITS, VERSION
from .enums import GrowthKind, PotentialKind
from .models.potentials import GrowthRate, Potential
from .warning import ConfigError, DomainError


logger = logging.getLogger(__name__)

_VALUE_FORMAT = '{{:.{}g}}'.format(CSV_SIGNIFICANT_DIGITS)

POTENTIAL_PREFIXES: Dict[str, PotentialKind] = {
    'power': PotentialKind.POWER_LAW,
    'logpower': PotentialKind.LOG_POWER,
    'stretched': PotentialKind.STRETCHED_EXP}
GROWTH_PREFIXES: Dict[str, GrowthKind] = {
    'polyexp': GrowthKind.POLY_EXP,
    'superexp': GrowthKind.SUPER_EXP,
    'doubleexp': GrowthKind.DOUBLE_EXP}


def format_value(value: Any) -> str:
    """
    CSV text for one field: floats with 12 significant digits, None and nan
    as the empty string, enum members by name.
    """
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, enum.Enum):
        return value.name
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return ''
        return _VALUE_FORMAT.format(float(value))
    return str(value)


class CsvReportWriter(object):
    """
    Writes a CSV report: '#'-prefixed metadata lines (version first, then the
    run configuration in key order), one header row, then data rows.

    Parameters
    ------------
    destination : str, Path or text stream
        A path is opened (and closed) by the writer; a stream is left open.

    columns : Sequence[str]

    metadata : Dict[str, Any], optional
        Echoed as '# key=value' lines.
    """
    def __init__(self, destination: Union[str, Path, TextIO],
                 columns: Sequence[str],
                 metadata: Optional[Dict[str, Any]] = None) -> None:
        self.columns = tuple(columns)
        self.metadata = dict(metadata or {})
        self._owns_stream = isinstance(destination, (str, Path))
        if self._owns_stream:
            self.filename: Optional[str] = str(destination)
            self._stream: TextIO = open(self.filename, 'w', newline='')
        else:
            self.filename = None
            self._stream = destination
        self._writer = csv.writer(self._stream, lineterminator='\n')
        self.rows_written = 0
        self._write_header()

    def __enter__(self) -> 'CsvReportWriter':
        return self

    def __exit__(self, *args, **kwargs) -> None:
        self.close()

    def _write_header(self) -> None:
        self._stream.write('# gausslike {}\n'.format(VERSION))
        for key in sorted(self.metadata):
            self._stream.write('# {}={}\n'.format(
                key, format_value(self.metadata[key])))
        self._writer.writerow(self.columns)

    def write(self, row: Union[Dict[str, Any], Sequence[Any]]) -> None:
        if isinstance(row, dict):
            row = [row[column] for column in self.columns]
        if len(row) != len(self.columns):
            raise ValueError('Expected {} fields, got {}.'.format(
                len(self.columns), len(row)))
        self._writer.writerow([format_value(value) for value in row])
        self.rows_written += 1

    def write_rows(self, rows: Iterable[Union[Dict[str, Any],
                                              Sequence[Any]]]) -> None:
        for row in rows:
            self.write(row)

    def close(self) -> None:
        if self._owns_stream:
            self._stream.close()
            logger.info('wrote %d rows to %s', self.rows_written,
                        self.filename)
        else:
            self._stream.flush()


def open_report(output: Optional[str], columns: Sequence[str],
                metadata: Dict[str, Any]) -> CsvReportWriter:
    """
    A CsvReportWriter on `output`, or on stdout when output is None or '-'.
    """
    if output is None or output == '-':
        return CsvReportWriter(sys.stdout, columns, metadata)
    return CsvReportWriter(output, columns, metadata)


def read_report(filename: Union[str, Path]):
    """
    Read a report written by CsvReportWriter.

    Returns
    ------------
    metadata : Dict[str, str]

    rows : List[Dict[str, str]]
    """
    metadata: Dict[str, str] = {}
    body: List[str] = []
    with open(str(filename), newline='') as f:
        for line in f:
            if line.startswith('#'):
                key, sep, value = line[1:].strip().partition('=')
                if sep:
                    metadata[key] = value
            else:
                body.append(line)
    return metadata, list(csv.DictReader(body))


def parse_config_file(filename: Union[str, Path]) -> Dict[str, str]:
    """
    Read a flat key=value config file. Blank lines and lines starting with '#'
    are skipped; keys use underscores, like the option names.

    Raises
    ------------
    ConfigError
        A line without '=', an empty key, or a key given twice.
    """
    path = Path(filename)
    if not path.is_file():
        raise ConfigError('{} is not a file.'.format(str(path)))
    config: Dict[str, str] = {}
    with path.open() as f:
        for number, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            key, sep, value = line.partition('=')
            key = key.strip().replace('-', '_')
            if not sep or not key:
                raise ConfigError(
                    '{}:{}: expected key=value, got "{}".'.format(
                        path.name, number, line))
            if key in config:
                raise ConfigError('{}:{}: duplicate key "{}".'.format(
                    path.name, number, key))
            config[key] = value.strip()
    return config


def _parse_spec(text: str, prefixes: Dict[str, Any]):
    prefix, sep, parameter = text.strip().partition(':')
    if not sep or prefix not in prefixes:
        raise ConfigError('"{}" is not of the form <{}>:<value>.'.format(
            text, '|'.join(prefixes)))
    try:
        return prefixes[prefix], float(parameter)
    except ValueError:
        raise ConfigError('"{}" has a non-numeric parameter.'.format(text))


def parse_potential_spec(text: str) -> Potential:
    """
    'power:1', 'logpower:2' or 'stretched:0.5'.
    """
    kind, parameter = _parse_spec(text, POTENTIAL_PREFIXES)
    try:
        return Potential(kind, parameter)
    except DomainError as error:
        raise ConfigError(str(error))


def parse_growth_spec(text: str) -> GrowthRate:
    """
    'polyexp:0.5', 'superexp:2' or 'doubleexp:2'.
    """
    kind, parameter = _parse_spec(text, GROWTH_PREFIXES)
    try:
        return GrowthRate(kind, parameter)
    except DomainError as error:
        raise ConfigError(str(error))


def parse_range(text: str) -> np.ndarray:
    """
    'start:stop:step' (stop included when it lies on the grid) or a comma
    separated list of values.

    Raises
    ------------
    ConfigError
        Malformed text or an empty range.
    """
    try:
        if ':' in text:
            start, stop, step = (float(part) for part in text.split(':'))
        else:
            values = np.array([float(part) for part in text.split(',')
                               if part.strip()])
    except ValueError:
        raise ConfigError('"{}" is not a range.'.format(text))
    if ':' in text:
        if step <= 0:
            raise ConfigError('Range step must be positive: "{}".'.format(
                text))
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = start + step * np.arange(max(count, 0))
    if values.size == 0:
        raise ConfigError('Range "{}" is empty.'.format(text))
    return values
