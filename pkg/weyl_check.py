#!/usr/bin/env python3
"""
weylcheck command-line entry point.

Usage:
    python weyl_check.py check geometry.toml [--task NAME]... [--json]
    python weyl_check.py examples list | emit <name>
    python weyl_check.py identity <name> geometry.toml
    python weyl_check.py tasks

Author: weylcheck maintainers
Date: 2025
Version: 1.0.0
"""

import sys

from weylcheck.cli import main


if __name__ == "__main__":
    sys.exit(main())
