from django.apps import AppConfig


class TimefuncConfig(AppConfig):
    """Dwell times, conditional times and their sum rules."""
    default_auto_field = "django.db.models.BigAutoField"
    name = "timefunc"
