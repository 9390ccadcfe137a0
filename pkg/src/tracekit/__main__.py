"""Allow ``python -m tracekit ...`` as an alternative to the console script."""

import sys

from tracekit.cli import main

if __name__ == "__main__":
    sys.exit(main())
