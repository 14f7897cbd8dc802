"""
Shared plumbing of the experiment commands: flag handling, ``--config`` files,
report output, the run log and exit codes.
"""
import json
import logging

from django.core.management.base import BaseCommand, CommandError
from django.utils import timezone

import uniest.models
from uniest.config import UniestConfig
from uniest.errors import UniestError, UniestInputError
from uniest.experiments import EXPERIMENTS
from uniest.reports import OUTPUT_FORMATS, Report, RunConfig, parse_grid, parse_vector

Logger = logging.getLogger('uniest.commands')

DEFAULT_D = 2
USAGE_ERROR = 1
CHECKS_FAILED = 2


def read_config_file(path):
    try:
        with open(path, encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, ValueError) as e:
        raise UniestInputError(f'Cannot read config file {path}: {e}') from e
    if not isinstance(data, dict):
        raise UniestInputError(f'Config file {path} must hold a JSON object.')
    return {key.replace('-', '_'): value for key, value in data.items()}


def as_int(value):
    if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
        raise ValueError(f'{value!r} is not an integer')
    return int(value)


def as_flag(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, str) and value.lower() in ('true', 'false'):
        return value.lower() == 'true'
    raise ValueError(f'{value!r} is not a boolean')


def as_vector(value):
    if isinstance(value, str):
        return parse_vector(value)
    return tuple(float(x) for x in value)


def as_grid(value):
    if isinstance(value, str):
        return parse_grid(value)
    return [float(a) for a in value]


def convert(name, value, kind):
    """Apply ``kind`` to a resolved option value, reporting failures as usage errors."""
    if value is None:
        return None
    try:
        return kind(value)
    except (TypeError, ValueError) as e:
        raise UniestInputError(f'Invalid value {value!r} for {name}: {e}') from e


class ExperimentCommand(BaseCommand):
    """
    Base class of the ``uniest_*`` experiment commands.

    Subclasses name their experiment, add their own flags in
    ``add_experiment_arguments`` and list them in ``option_defaults``, with a
    converter in ``option_types`` where the value is not a plain string;
    values come from the flag, then the ``--config`` file, then Django
    settings, then the built-in default.
    """
    experiment = None
    option_defaults = {}
    option_types = {}

    def add_arguments(self, parser):
        parser.add_argument("--d", type=int, help="Dimension of the unknown unitary.")
        parser.add_argument("--samples", type=int, help="Monte Carlo trials (or samples) per estimate.")
        parser.add_argument("--seed", type=int, help="Seed; defaults to UNIEST_SEED or UNIEST_DEFAULT_SEED.")
        parser.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, help="Report format.")
        parser.add_argument("--output", help="Write the report to this file instead of stdout.")
        parser.add_argument("--workers", type=int, help="Worker processes; results do not depend on it.")
        parser.add_argument("--max-attempts", type=int, help="Rejection sampling attempt cap.")
        parser.add_argument("--config", help="JSON file mirroring these flags; flags win.")
        parser.add_argument(
            "--no-timestamp", action="store_true", default=None, help="Leave the timestamp out of the report.",
        )
        parser.add_argument(
            "--explore", action="store_true", default=None, help="Report checks without failing on them.",
        )
        parser.add_argument("--record", action="store_true", default=None, help="Store the report in the run log.")
        self.add_experiment_arguments(parser)

    def add_experiment_arguments(self, parser):
        pass

    def resolve(self, options, file_options, name, fallback, kind=str):
        value = options.get(name)
        if value is None:
            value = file_options.get(name)
        if value is None:
            value = fallback
        return convert(name, value, kind)

    def build_config(self, options):
        file_options = read_config_file(options["config"]) if options.get("config") else {}
        if "format" in file_options:
            file_options.setdefault("output_format", file_options.pop("format"))
        uniest_config = UniestConfig()

        def resolve(name, fallback, kind=str):
            return self.resolve(options, file_options, name, fallback, kind)

        config = RunConfig(
            command=self.experiment,
            d=resolve("d", DEFAULT_D, as_int),
            samples=resolve("samples", uniest_config.UNIEST_DEFAULT_SAMPLES, as_int),
            seed=resolve("seed", uniest_config.UNIEST_DEFAULT_SEED, as_int),
            output_format=resolve("output_format", uniest_config.UNIEST_OUTPUT_FORMAT),
            output_path=resolve("output", None),
            grid=resolve("grid", None, as_grid),
            workers=resolve("workers", uniest_config.UNIEST_WORKERS, as_int),
            explore=resolve("explore", False, as_flag),
            max_attempts=resolve("max_attempts", uniest_config.UNIEST_MAX_ATTEMPTS, as_int),
            timestamp=not resolve("no_timestamp", False, as_flag),
            record=resolve("record", uniest_config.UNIEST_RECORD_RUNS, as_flag),
            options={
                name: resolve(name, default, self.option_types.get(name, str))
                for name, default in self.option_defaults.items()
            },
        )
        return config.validate()

    def handle(self, *args, **options):
        start_time = timezone.now()
        try:
            config = self.build_config(options)
            results, checks = EXPERIMENTS[self.experiment](config)
        except UniestError as e:
            Logger.error('%s failed: %s', self.experiment, e)
            raise CommandError(str(e), returncode=USAGE_ERROR) from e

        report = Report(
            command=self.experiment,
            config=config.as_dict(),
            results=results,
            checks=checks,
            timestamp=start_time.isoformat() if config.timestamp else None,
        )
        self.write_report(report, config)

        if config.record:
            run = uniest.models.Run.record(report, start_time)
            Logger.info('Recorded %s run %s', self.experiment, run.pk)

        if report.failures:
            if config.explore:
                Logger.info('%s: failing checks ignored in explore mode: %s', self.experiment, report.failures)
                return
            Logger.warning('%s: checks failed: %s', self.experiment, report.failures)
            raise CommandError(
                f"Checks failed: {', '.join(report.failures)}", returncode=CHECKS_FAILED,
            )

    def write_report(self, report, config):
        text = report.render(config.output_format, ensure_ascii=UniestConfig().UNIEST_JSON_ENSURE_ASCII)
        if config.output_path:
            with open(config.output_path, "w", encoding="utf-8") as f:
                f.write(text)
                if not text.endswith("\n"):
                    f.write("\n")
        else:
            self.stdout.write(text, ending="" if text.endswith("\n") else "\n")
