"""Script entry point: python main.py run --scenario ... """
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
