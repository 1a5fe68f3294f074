#!/usr/bin/env python3
"""
Schroeder-Bernstein chain tool - build and verify the bijection from two injections
Run as `python sb.py <command>`; see `python sb.py --help`
"""
import sys

from sb_engine.cli import main

if __name__ == "__main__":
    sys.exit(main())
