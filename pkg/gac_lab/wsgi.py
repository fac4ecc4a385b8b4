"""
WSGI config for gac_lab project.

Serves the experiment REST surface (``gunicorn gac_lab.wsgi``).
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'gac_lab.settings')

application = get_wsgi_application()
