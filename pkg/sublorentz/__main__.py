import sys

from sublorentz.cli import main

sys.exit(main())
