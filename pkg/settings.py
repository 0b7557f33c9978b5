"""Process-level settings, read once from the environment (and a local .env file).

Nothing here changes what the kernel computes or prints on stdout.
"""

import os

from dotenv import load_dotenv

load_dotenv()

# Root log level; logs always go to stderr
LOG_LEVEL = os.environ.get("LOG_LEVEL", "WARNING").upper()

# Worker processes for audit and countermodel search when --workers is not given
AUDIT_WORKERS = int(os.environ.get("AUDIT_WORKERS", 1))

# Opt-in for the acceptance-scale test runs
FULL_BOUNDS = bool(os.environ.get("KERNEL_FULL_BOUNDS"))
