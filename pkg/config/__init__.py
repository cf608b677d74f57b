# Importing the app here binds shared_task in bautinkit.analysis.tasks to it
# whenever Django starts, including under `manage.py bautin --on-worker`.
from .celery_app import app as celery_app

__all__ = ("celery_app",)
