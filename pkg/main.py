"""
PoissonProphet
Prophet inequalities for i.i.d. offers arriving at Poisson and renewal times.
"""
import sys
import logging
from pathlib import Path

from config import LOG_FORMAT, LOG_LEVEL

# Set up logging
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
    format=LOG_FORMAT,
    stream=sys.stderr,
)

# Add the project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from cli import run


def main():
    """Main entry point for the application."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
