import sys

from torus_scar.cli import main

sys.exit(main())
