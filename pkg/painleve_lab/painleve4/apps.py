from django.apps import AppConfig


class Painleve4Config(AppConfig):
    name = "painleve4"
    verbose_name = "Fourth Painlevé equation"
