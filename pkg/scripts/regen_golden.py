#!/usr/bin/env python3
'''
Compares or rewrites the stored chain limits.
'''

import argparse
import logging
import sys

from simplehiggs.golden import CHAIN_LIMITS, compare_golden, load_golden, regenerate_golden


def main() -> int:
    parser = argparse.ArgumentParser(description='Regenerate the stored limits of the blow-up chain.')
    parser.add_argument('--path', default=CHAIN_LIMITS, help='golden file to work on')
    parser.add_argument('--check', action='store_true', help='only compare, do not write')
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format='%(levelname)s %(name)s: %(message)s')

    if args.check:
        mismatches = compare_golden(load_golden(args.path))
        return 1 if mismatches else 0
    regenerate_golden(args.path)
    return 0


if __name__ == '__main__':
    sys.exit(main())
