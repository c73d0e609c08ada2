#!/usr/bin/env python3
"""
Startup script for the statusnet command line
"""

import sys
from statusnet.cli import main

if __name__ == "__main__":
    sys.exit(main())
