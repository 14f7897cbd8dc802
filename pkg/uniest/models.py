import json
import logging
import random
from datetime import timedelta
from uuid import uuid4

from django.db import models, router, transaction
from django.db.models import (
    BigIntegerField,
    BooleanField,
    CharField,
    DateTimeField,
    FloatField,
    ForeignKey,
    IntegerField,
    TextField,
)
from django.utils import timezone

from uniest.config import UniestConfig

Logger = logging.getLogger('uniest.models')


class Run(models.Model):
    id = CharField(max_length=36, default=uuid4, primary_key=True)
    command = CharField(max_length=40, db_index=True)
    d = IntegerField(null=True, blank=True)
    samples = IntegerField()
    seed = BigIntegerField()
    start_time = DateTimeField(default=timezone.now, db_index=True)
    end_time = DateTimeField(null=True, blank=True)
    time_taken = FloatField(blank=True, null=True)  # milliseconds
    passed = BooleanField(default=True)
    encoded_config = TextField(blank=True, default='')  # stores json
    encoded_results = TextField(blank=True, default='')  # stores json

    class Meta:
        ordering = ['-start_time']

    def __str__(self):
        return f'{self.command} seed={self.seed} ({"pass" if self.passed else "fail"})'

    @property
    def config(self):
        return json.loads(self.encoded_config) if self.encoded_config else {}

    @property
    def results(self):
        return json.loads(self.encoded_results) if self.encoded_results else {}

    @property
    def failures(self):
        return list(self.checks.filter(passed=False).values_list('name', flat=True))

    @classmethod
    def record(cls, report, start_time, end_time=None):
        """Store a report and its checks, then give the garbage collector a chance to run."""
        data = report.as_dict()
        config = data['config']
        with transaction.atomic(using=router.db_for_write(cls)):
            run = cls.objects.create(
                command=report.command,
                d=config.get('d'),
                samples=config['samples'],
                seed=config['seed'],
                start_time=start_time,
                end_time=end_time or timezone.now(),
                passed=report.passed,
                encoded_config=json.dumps(config),
                encoded_results=json.dumps(data['results']),
            )
            Check.objects.bulk_create([
                Check(
                    run=run,
                    name=check['name'],
                    value=check['value'],
                    reference=check['reference'],
                    tolerance=check['tolerance'],
                    passed=check['pass'],
                )
                for check in data['checks']
            ])
        cls.garbage_collect()
        return run

    @classmethod
    def collectable(cls):
        """Runs the garbage collector may delete: failed runs are kept unless UNIEST_KEEP_FAILED_RUNS is off."""
        runs = cls.objects.all()
        if UniestConfig().UNIEST_KEEP_FAILED_RUNS:
            runs = runs.filter(passed=True)
        return runs

    @classmethod
    def garbage_collect(cls, force=False, commands=None):
        """
        Trim the run log and return the number of deleted runs per command.

        Each command is trimmed on its own. UNIEST_GARBAGE_COLLECT_MODE 'count'
        keeps its newest UNIEST_MAX_RECORDED_RUNS collectable runs, 'time' drops
        collectable runs older than UNIEST_MAX_RECORDED_TIME minutes and 'both'
        does both. Unless forced, a call only collects with probability
        UNIEST_MAX_RECORDED_RUNS_CHECK_PERCENT.
        """
        config = UniestConfig()
        if not force and random.random() * 100 >= config.UNIEST_MAX_RECORDED_RUNS_CHECK_PERCENT:
            return {}

        if commands is None:
            commands = cls.objects.order_by().values_list('command', flat=True).distinct()
        deleted = {}
        for command in sorted(set(commands)):
            doomed = cls._expired(cls.collectable().filter(command=command), config)
            if doomed:
                cls.objects.filter(pk__in=doomed).delete()
                deleted[command] = len(doomed)
        if deleted:
            Logger.info('Garbage collected runs: %s', deleted)
        return deleted

    @staticmethod
    def _expired(runs, config):
        mode = config.UNIEST_GARBAGE_COLLECT_MODE
        doomed = set()
        if mode in ('time', 'both') and config.UNIEST_MAX_RECORDED_TIME:
            cutoff = timezone.now() - timedelta(minutes=config.UNIEST_MAX_RECORDED_TIME)
            doomed.update(runs.filter(start_time__lt=cutoff).values_list('pk', flat=True))
        if mode in ('count', 'both'):
            keep = max(0, int(config.UNIEST_MAX_RECORDED_RUNS))
            doomed.update(runs.order_by('-start_time').values_list('pk', flat=True)[keep:])
        return doomed

    def save(self, *args, **kwargs):
        if self.end_time and self.start_time:
            interval = self.end_time - self.start_time
            self.time_taken = interval.total_seconds() * 1000
        super().save(*args, **kwargs)


class Check(models.Model):
    run = ForeignKey(
        Run, related_name='checks', db_index=True, on_delete=models.CASCADE,
    )
    name = CharField(max_length=80)
    value = FloatField(null=True, blank=True)
    reference = FloatField(null=True, blank=True)
    tolerance = FloatField(null=True, blank=True)
    passed = BooleanField(default=True)

    def __str__(self):
        return f'{self.name}: {"pass" if self.passed else "fail"}'
