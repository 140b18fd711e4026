from django.apps import AppConfig


class FreudConfig(AppConfig):
    name = "freud"
    verbose_name = "Freud weight"
