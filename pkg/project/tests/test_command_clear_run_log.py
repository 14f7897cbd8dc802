from io import StringIO

from django.core import management
from django.test import TestCase

from uniest import models
from uniest.utils import data_deletion

from .factories import CheckFactory, RunFactory


class TestClearRunLog(TestCase):

    def test_clear_all(self):
        CheckFactory.create_batch(3)
        self.assertEqual(models.Run.objects.count(), 3)
        out = StringIO()
        management.call_command("uniest_clear_run_log", verbosity=2, stdout=out)
        self.assertEqual(models.Run.objects.count(), 0)
        self.assertEqual(models.Check.objects.count(), 0)
        self.assertIn("Deleted 3 runs.", out.getvalue())

    def test_batches(self):
        RunFactory.create_batch(5)
        original = data_deletion.BATCH_SIZE
        data_deletion.BATCH_SIZE = 2
        try:
            data_deletion.clear_tables(models.Check, models.Run)
        finally:
            data_deletion.BATCH_SIZE = original
        self.assertEqual(models.Run.objects.count(), 0)
