from django.apps import AppConfig


class AnalysisConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "bautinkit.analysis"
    verbose_name = "Bautin analysis"
