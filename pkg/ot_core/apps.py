from django.apps import AppConfig


class OtCoreConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'ot_core'
