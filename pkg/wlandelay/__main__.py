"""Allow ``python -m wlandelay``."""

import sys

from wlandelay.cli import main

sys.exit(main())
