from django.apps import AppConfig


class ExactOtConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'exact_ot'
