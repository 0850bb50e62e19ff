from django.apps import AppConfig


class TwolevelConfig(AppConfig):
    """Closed-form reference for the driven two-level system."""
    default_auto_field = "django.db.models.BigAutoField"
    name = "twolevel"
