import sys

from dnp_control.cli import main

sys.exit(main())
