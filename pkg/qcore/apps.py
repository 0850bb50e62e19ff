from django.apps import AppConfig


class QcoreConfig(AppConfig):
    """Dense complex linear algebra primitives."""
    default_auto_field = "django.db.models.BigAutoField"
    name = "qcore"
