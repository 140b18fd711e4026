from django.apps import AppConfig


class TodaConfig(AppConfig):
    name = "toda"
    verbose_name = "Toda flow"
