from django.apps import apps as proj_apps
from django.test import TestCase

from uniest.apps import UniestAppConfig


class TestAppConfig(TestCase):
    """
    Test if correct AppConfig class is loaded by Django.
    """

    def test_app_config_loaded(self):
        uniest_app_config = proj_apps.get_app_config("uniest")
        self.assertIsInstance(uniest_app_config, UniestAppConfig)
