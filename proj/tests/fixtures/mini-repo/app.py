"""Entry point for the demo pipeline."""

import sys

from pipeline import run_pipeline


def main(argv):
    if len(argv) < 2:
        print("usage: app <count>")
        return 1
    count = int(argv[1])
    result = run_pipeline(count)
    print(f"processed {result} records")
    return 0


if __name__ == '__main__':
    sys.exit(main(sys.argv))
