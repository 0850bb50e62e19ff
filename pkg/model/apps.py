from django.apps import AppConfig


class ModelConfig(AppConfig):
    """Physical scenario: Hamiltonian, initial state, observable and final subspaces."""
    default_auto_field = "django.db.models.BigAutoField"
    name = "model"
