import sys

from permcycle.cli import main

sys.exit(main())
