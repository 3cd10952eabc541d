import sys

from factorcolor.cli import main

sys.exit(main())
