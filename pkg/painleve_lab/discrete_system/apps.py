from django.apps import AppConfig


class DiscreteSystemConfig(AppConfig):
    name = "discrete_system"
    verbose_name = "Discrete system orbit"
