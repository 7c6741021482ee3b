import os
import sys

import pytest


def main():
    base = os.path.dirname(os.path.dirname(__file__))

    args = [base, "--doctest-modules"] + sys.argv[1:]

    sys.exit(pytest.main(args))


if __name__ == "__main__":
    main()
