#!/usr/bin/env python3
"""Convenience launcher for the sdom tool.

Usage:
  python run.py [-v] [--config PATH] [--threads K]
                {gen,construct,label,verify,solve,table,check-lemmas,init-config} [options]
"""
import sys
from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
