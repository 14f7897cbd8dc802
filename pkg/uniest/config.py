import os
from copy import copy

from uniest.errors import UniestInputError
from uniest.singleton import Singleton


def default_seed():
    seed = os.environ.get('UNIEST_SEED')
    if seed in (None, ''):
        return 0
    try:
        return int(seed)
    except ValueError as e:
        raise UniestInputError(f'UNIEST_SEED must be an integer, got {seed!r}.') from e


class UniestConfig(metaclass=Singleton):
    defaults = {
        'UNIEST_DEFAULT_SAMPLES': 10**5,
        'UNIEST_DEFAULT_SEED': None,
        'UNIEST_WORKERS': None,
        'UNIEST_MAX_ATTEMPTS': 10**6,
        'UNIEST_OUTPUT_FORMAT': 'json',
        'UNIEST_JSON_ENSURE_ASCII': True,
        'UNIEST_RECORD_RUNS': False,
        'UNIEST_MAX_RECORDED_RUNS': 10**4,
        'UNIEST_MAX_RECORDED_RUNS_CHECK_PERCENT': 10,
        'UNIEST_GARBAGE_COLLECT_MODE': 'count',
        'UNIEST_KEEP_FAILED_RUNS': True,
        'UNIEST_MAX_RECORDED_TIME': None,
    }

    def _setup(self):
        from django.conf import settings

        options = {option: getattr(settings, option) for option in dir(settings) if option.startswith('UNIEST')}
        self.attrs = copy(self.defaults)
        self.attrs.update(options)
        # the environment wins over settings for the seed only
        if os.environ.get('UNIEST_SEED') not in (None, '') or self.attrs['UNIEST_DEFAULT_SEED'] is None:
            self.attrs['UNIEST_DEFAULT_SEED'] = default_seed()
        if self.attrs['UNIEST_WORKERS'] is None:
            self.attrs['UNIEST_WORKERS'] = os.cpu_count() or 1

    def __init__(self):
        super().__init__()
        self._setup()

    def __getattr__(self, item):
        return self.attrs.get(item, None)
