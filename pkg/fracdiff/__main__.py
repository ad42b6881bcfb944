import sys

from fracdiff.fracdiff import main

if __name__ == "__main__":
    sys.exit(main())
