from django.apps import AppConfig

class DifferentialsConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "differentials"
