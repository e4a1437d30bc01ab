import sys

from wallforge.cli import main

sys.exit(main())
