from django.apps import AppConfig


class UniestAppConfig(AppConfig):
    default_auto_field = "django.db.models.AutoField"
    name = "uniest"
    verbose_name = "Unitary estimation"
