import sys

from torimod.cli import main

sys.exit(main())
