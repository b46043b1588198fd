"""Run the cvwitness CLI with ``python -m cvwitness``."""

from cvwitness.cli.main import main

if __name__ == "__main__":
    main()
