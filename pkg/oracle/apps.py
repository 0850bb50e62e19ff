from django.apps import AppConfig


class OracleConfig(AppConfig):
    """Exact system and pointer simulation at finite coupling."""
    default_auto_field = "django.db.models.BigAutoField"
    name = "oracle"
