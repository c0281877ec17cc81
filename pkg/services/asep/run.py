#!/usr/bin/env python3
"""
CLI runner for the ASEP harness.

Usage:
    python run.py params --alpha 1 --beta 1
    python run.py validate --level quick
"""
import logging
import os
import sys

# Add the services/asep directory to path
sys.path.insert(0, os.path.dirname(__file__))

from dotenv import load_dotenv  # noqa: E402

load_dotenv()

from app.cli import main  # noqa: E402
from app.config import get_settings  # noqa: E402


if __name__ == "__main__":
    logging.basicConfig(
        stream=sys.stderr,
        level=get_settings().log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(main())
