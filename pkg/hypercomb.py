"""
Entry script for the hypercomb command line.

    python hypercomb.py density "periodic p=2 r=0"
    python hypercomb.py pr search --c 1,1,-1 -r 2 -N 5
"""
import sys
from pathlib import Path

# Ensure the project root (which contains the `modules` package) is on sys.path,
# wherever the script is started from.
PROJECT_ROOT = Path(__file__).resolve().parent
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from modules import cli

if __name__ == "__main__":
    sys.exit(cli.main())
