from django.apps import AppConfig


class GpiAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gpi'
    verbose_name = 'Generalized power iteration'
