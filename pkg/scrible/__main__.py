import sys
from scrible.cli import main

sys.exit(main())
