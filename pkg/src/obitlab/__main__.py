import sys

from obitlab.cli import main

sys.exit(main())
