import sys
from statusnet.cli import main

sys.exit(main())
