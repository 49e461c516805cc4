"""src/levyscope/__main__.py

``python -m levyscope``.
"""

import sys

from levyscope.cli.main import main

sys.exit(main())
