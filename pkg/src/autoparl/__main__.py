import sys

from autoparl.cli import main

sys.exit(main())
