"""Entry point for `python -m vdec`."""

import sys

from vdec.cli import main

if __name__ == "__main__":
    sys.exit(main())
