import sys

from dmetrics.main import main

if __name__ == "__main__":
    sys.exit(main())
