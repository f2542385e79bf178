"""Allow ``python -m mzx`` as an alias for the ``mzx`` console script."""

import sys

from .cli import main

if __name__ == "__main__":
    sys.exit(main())
