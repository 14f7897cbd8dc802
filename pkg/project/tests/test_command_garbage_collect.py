import datetime
from io import StringIO

from django.core import management
from django.test import TestCase
from freezegun import freeze_time

from uniest import models
from uniest.config import UniestConfig

from .factories import RunFactory


class TestRunGarbageCollect(TestCase):

    def test_garbage_collect_command(self):
        UniestConfig().UNIEST_MAX_RECORDED_RUNS = 2
        RunFactory.create_batch(3, command='fidelity-n1')
        management.call_command("uniest_run_garbage_collect", stdout=StringIO())
        self.assertEqual(models.Run.objects.count(), 2)
        management.call_command("uniest_run_garbage_collect", max_runs=1, stdout=StringIO())
        self.assertEqual(models.Run.objects.count(), 1)
        out = StringIO()
        management.call_command("uniest_run_garbage_collect", max_runs=0, stdout=out)
        self.assertEqual(models.Run.objects.count(), 0)
        self.assertIn("fidelity-n1: deleted 1 run(s)", out.getvalue())

    def test_nothing_to_collect(self):
        RunFactory.create(command='bfield')
        out = StringIO()
        management.call_command("uniest_run_garbage_collect", stdout=out)
        self.assertIn("Nothing to collect.", out.getvalue())

    def test_only_named_commands(self):
        RunFactory.create_batch(2, command='bfield')
        RunFactory.create_batch(2, command='channel-tune')
        management.call_command(
            "uniest_run_garbage_collect", max_runs=0, commands=['channel-tune'], stdout=StringIO(),
        )
        self.assertEqual(list(models.Run.objects.order_by().values_list('command', flat=True).distinct()), ['bfield'])

    def test_include_failed(self):
        RunFactory.create(command='fidelity-n2', passed=False)
        management.call_command("uniest_run_garbage_collect", max_runs=0, stdout=StringIO())
        self.assertEqual(models.Run.objects.count(), 1)
        management.call_command("uniest_run_garbage_collect", max_runs=0, include_failed=True, stdout=StringIO())
        self.assertEqual(models.Run.objects.count(), 0)

    def test_garbage_collect_command_time_mode(self):
        now = datetime.datetime(2016, 1, 1, 12, 0, 0, tzinfo=datetime.timezone.utc)
        old = RunFactory.create(start_time=now - datetime.timedelta(minutes=120))
        recent = RunFactory.create(start_time=now - datetime.timedelta(minutes=5))
        with freeze_time(now):
            management.call_command("uniest_run_garbage_collect", mode="time", max_time=60, stdout=StringIO())
        self.assertFalse(models.Run.objects.filter(id=old.id).exists())
        self.assertTrue(models.Run.objects.filter(id=recent.id).exists())
