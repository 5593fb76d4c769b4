#!/usr/bin/env python3
"""Run the autree command line from a source checkout"""
from autree.cli import main

if __name__ == "__main__":
    main()
