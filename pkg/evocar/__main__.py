import sys

from evocar.cli import main

sys.exit(main())
