import os
from unittest import mock

from django.test import SimpleTestCase, override_settings

from uniest.config import UniestConfig, default_seed
from uniest.errors import UniestInputError


class TestUniestConfig(SimpleTestCase):

    def test_defaults(self):
        config = UniestConfig()
        self.assertEqual(config.UNIEST_DEFAULT_SAMPLES, 10**5)
        self.assertEqual(config.UNIEST_DEFAULT_SEED, 0)
        self.assertEqual(config.UNIEST_OUTPUT_FORMAT, 'json')
        self.assertIsNone(config.UNIEST_NOT_A_SETTING)

    def test_singleton(self):
        self.assertIs(UniestConfig(), UniestConfig())

    def test_settings_override_defaults(self):
        self.assertEqual(UniestConfig().UNIEST_WORKERS, 1)
        UniestConfig.reset()
        with override_settings(UNIEST_DEFAULT_SAMPLES=500, UNIEST_DEFAULT_SEED=9):
            config = UniestConfig()
            self.assertEqual(config.UNIEST_DEFAULT_SAMPLES, 500)
            self.assertEqual(config.UNIEST_DEFAULT_SEED, 9)

    @override_settings(UNIEST_DEFAULT_SEED=9)
    def test_environment_seed_wins(self):
        with mock.patch.dict(os.environ, {'UNIEST_SEED': '42'}):
            self.assertEqual(default_seed(), 42)
            self.assertEqual(UniestConfig().UNIEST_DEFAULT_SEED, 42)

    def test_empty_environment_seed(self):
        with mock.patch.dict(os.environ, {'UNIEST_SEED': ''}):
            self.assertEqual(default_seed(), 0)

    def test_bad_environment_seed(self):
        with mock.patch.dict(os.environ, {'UNIEST_SEED': 'abc'}):
            with self.assertRaises(UniestInputError):
                default_seed()
            with self.assertRaises(UniestInputError):
                UniestConfig()
