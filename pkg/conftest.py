import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "WeakTime.settings")
django.setup()
