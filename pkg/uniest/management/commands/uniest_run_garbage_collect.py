from django.core.management.base import BaseCommand

import uniest.models
from uniest.config import UniestConfig


class Command(BaseCommand):
    help = (
        "Trims the run log command by command. Failed runs are kept unless --include-failed "
        "is given."
    )

    def add_arguments(self, parser):
        parser.add_argument(
            "-m",
            "--max-runs",
            type=int,
            help="Passing runs to keep per command (defaults to UNIEST_MAX_RECORDED_RUNS).",
        )
        parser.add_argument(
            "--mode",
            choices=["count", "time", "both"],
            help="Retention rule (defaults to UNIEST_GARBAGE_COLLECT_MODE).",
        )
        parser.add_argument(
            "--max-time",
            type=int,
            help="Maximum age in minutes for the 'time' and 'both' modes.",
        )
        parser.add_argument(
            "--command",
            action="append",
            dest="commands",
            help="Only trim the runs of this experiment (e.g. fidelity-n2); repeatable.",
        )
        parser.add_argument(
            "--include-failed",
            action="store_true",
            help="Let failed runs be collected too.",
        )

    def handle(self, *args, **options):
        config = UniestConfig()
        overrides = {
            "UNIEST_MAX_RECORDED_RUNS": options.get("max_runs"),
            "UNIEST_GARBAGE_COLLECT_MODE": options.get("mode"),
            "UNIEST_MAX_RECORDED_TIME": options.get("max_time"),
        }
        for name, value in overrides.items():
            if value is not None:
                setattr(config, name, value)
        if options.get("include_failed"):
            config.UNIEST_KEEP_FAILED_RUNS = False

        deleted = uniest.models.Run.garbage_collect(force=True, commands=options.get("commands"))
        if options["verbosity"] >= 1:
            if not deleted:
                self.stdout.write("Nothing to collect.")
            for command, count in deleted.items():
                self.stdout.write(f"{command}: deleted {count} run(s)")
