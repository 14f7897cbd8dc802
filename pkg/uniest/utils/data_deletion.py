import logging

from django.conf import settings
from django.db import connections

Logger = logging.getLogger('uniest.data_deletion')

BATCH_SIZE = 800


def clear_tables(*models):
    """
    Empty the tables of ``models`` in the given order.

    Children must come before their parents: on sqlite and oracle rows are
    deleted in batches, and following foreign keys back is slow in Django.
    """
    for model in models:
        engine = settings.DATABASES[model.objects.db]['ENGINE']
        table = model._meta.db_table
        if 'postgresql' in engine:
            with connections[model.objects.db].cursor() as cursor:
                cursor.execute(f'TRUNCATE TABLE {table} CASCADE')
        elif 'mysql' in engine:
            with connections[model.objects.db].cursor() as cursor:
                cursor.execute('SET FOREIGN_KEY_CHECKS=0;')
                cursor.execute(f'TRUNCATE TABLE {table}')
                cursor.execute('SET FOREIGN_KEY_CHECKS=1;')
        else:
            _delete_in_batches(model)
        Logger.debug('Cleared %s', table)


def _delete_in_batches(model):
    while True:
        batch = list(model.objects.values_list('pk', flat=True)[:BATCH_SIZE])
        if not batch:
            break
        model.objects.filter(pk__in=batch).delete()
