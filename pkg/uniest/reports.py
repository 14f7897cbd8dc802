"""
Run configuration and the machine-readable reports every experiment emits.
"""
import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from uniest.errors import UniestInputError
from uniest.serialization import finite_or_none
from uniest.strategies import DEFAULT_MAX_ATTEMPTS

Logger = logging.getLogger('uniest.reports')

SCHEMA = 1
OUTPUT_FORMATS = ('json', 'csv')
MIN_SAMPLES = 100
MIN_D = 2
MAX_D = 8
MAX_SEED = 2**63


def parse_grid(text):
    """A comma list ``0,0.5,1`` or an inclusive range ``start:stop:step``."""
    text = text.strip()
    try:
        if ':' in text:
            start, stop, step = (float(part) for part in text.split(':'))
            if step <= 0:
                raise UniestInputError(f'Grid step must be positive, got {step}.')
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(max(count, 0))]
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError as e:
        raise UniestInputError(f'Cannot parse grid {text!r}: {e}') from e


def parse_vector(text):
    try:
        return tuple(float(part) for part in text.split(','))
    except ValueError as e:
        raise UniestInputError(f'Cannot parse vector {text!r}: {e}') from e


def grid_spacing(grid):
    if len(grid) < 2:
        return 0.0
    return float(np.max(np.diff(sorted(grid))))


@dataclass
class RunConfig:
    command: str
    d: int
    samples: int
    seed: int
    output_format: str = 'json'
    output_path: str = None
    grid: list = None
    workers: int = 1
    explore: bool = False
    max_attempts: int = DEFAULT_MAX_ATTEMPTS
    timestamp: bool = True
    record: bool = False
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.samples < MIN_SAMPLES:
            raise UniestInputError(f'--samples must be at least {MIN_SAMPLES}, got {self.samples}.')
        if not MIN_D <= self.d <= MAX_D:
            raise UniestInputError(f'--d must lie in [{MIN_D}, {MAX_D}], got {self.d}.')
        if not 0 <= self.seed < MAX_SEED:
            raise UniestInputError(f'--seed must lie in [0, 2^63), got {self.seed}.')
        if self.output_format not in OUTPUT_FORMATS:
            raise UniestInputError(f'--format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}.')
        if self.workers < 1:
            raise UniestInputError(f'--workers must be positive, got {self.workers}.')
        if self.max_attempts < 1:
            raise UniestInputError(f'--max-attempts must be positive, got {self.max_attempts}.')
        if self.grid is not None:
            if not self.grid:
                raise UniestInputError('--grid is empty.')
            outside = [a for a in self.grid if not 0 <= a <= 1]
            if outside:
                raise UniestInputError(f'Grid values outside [0, 1]: {outside}.')
        return self

    def as_dict(self):
        # workers, attempt cap, output path, timestamp and record flags stay out of reports
        data = {
            'command': self.command,
            'd': self.d,
            'samples': self.samples,
            'seed': self.seed,
            'format': self.output_format,
            'explore': self.explore,
        }
        if self.grid is not None:
            data['grid'] = list(self.grid)
        data.update(self.options)
        return data


@dataclass
class CheckResult:
    name: str
    value: float
    reference: float
    tolerance: float
    passed: bool

    @classmethod
    def within(cls, name, value, reference, tolerance):
        return cls(name, float(value), float(reference), float(tolerance), bool(abs(value - reference) <= tolerance))

    @classmethod
    def at_most(cls, name, value, bound, tolerance=0.0):
        return cls(name, float(value), float(bound), float(tolerance), bool(value <= bound + tolerance))

    @classmethod
    def at_least(cls, name, value, bound, tolerance=0.0):
        return cls(name, float(value), float(bound), float(tolerance), bool(value >= bound - tolerance))

    def as_dict(self):
        return {
            'name': self.name,
            'value': finite_or_none(self.value),
            'reference': finite_or_none(self.reference),
            'tolerance': finite_or_none(self.tolerance),
            'pass': self.passed,
        }


def _clean(value):
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    if isinstance(value, np.generic):
        value = value.item()
    return finite_or_none(value)


@dataclass
class Report:
    command: str
    config: dict
    results: dict
    checks: list
    timestamp: str = None

    @property
    def failures(self):
        return [check.name for check in self.checks if not check.passed]

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        data = {
            'schema': SCHEMA,
            'command': self.command,
            'config': _clean(self.config),
            'results': _clean(self.results),
            'checks': [check.as_dict() for check in self.checks],
            'failures': self.failures,
        }
        if self.timestamp is not None:
            data['timestamp'] = self.timestamp
        return data

    def to_json(self, ensure_ascii=True):
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=ensure_ascii)

    def to_csv(self):
        """
        A table when the results carry one (``results['table']``), otherwise one
        row per summary metric followed by one row per check.
        """
        out = io.StringIO()
        writer = csv.writer(out, lineterminator='\n')
        table = self.results.get('table')
        if table:
            columns = list(table[0])
            writer.writerow(columns)
            for row in table:
                writer.writerow([_csv_value(row[column]) for column in columns])
            return out.getvalue()

        writer.writerow(['metric', 'value', 'reference', 'tolerance', 'pass'])
        for name, value in flatten(self.results):
            writer.writerow([name, _csv_value(value), '', '', ''])
        for check in self.checks:
            writer.writerow([
                f'check.{check.name}',
                _csv_value(check.value),
                _csv_value(check.reference),
                _csv_value(check.tolerance),
                check.passed,
            ])
        return out.getvalue()

    def render(self, output_format, ensure_ascii=True):
        if output_format == 'csv':
            return self.to_csv()
        return self.to_json(ensure_ascii=ensure_ascii)


def flatten(results, prefix=''):
    """(dotted key, scalar) pairs of a nested results dict, lists skipped."""
    for key, value in results.items():
        name = f'{prefix}{key}'
        if isinstance(value, dict):
            yield from flatten(value, f'{name}.')
        elif isinstance(value, (list, tuple)):
            continue
        else:
            yield name, value


def _csv_value(value):
    value = _clean(value)
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return value
