"""Configure Django before pytest collects the tests.py modules."""
import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "fibred.settings")
django.setup()
