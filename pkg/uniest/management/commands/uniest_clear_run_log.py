from django.core.management.base import BaseCommand

import uniest.models
from uniest.utils.data_deletion import clear_tables


class Command(BaseCommand):
    help = "Clears the log of recorded experiment runs."

    def handle(self, *args, **options):
        count = uniest.models.Run.objects.count()
        clear_tables(uniest.models.Check, uniest.models.Run)
        if options["verbosity"] >= 2:
            self.stdout.write(f"Deleted {count} runs.")
