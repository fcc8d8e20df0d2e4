#!/usr/bin/env python3
"""Write the first N nontrivial zeta-zero ordinates, one per line.

Usage: gen_zeros.py N OUT
"""
import sys

import mpmath


def main():
    count = int(sys.argv[1])
    out = sys.argv[2]
    mpmath.mp.dps = 20
    with open(out, "w") as fh:
        fh.write(f"# first {count} ordinates of nontrivial zeros of zeta (mpmath.zetazero)\n")
        for k in range(1, count + 1):
            fh.write(mpmath.nstr(mpmath.zetazero(k).imag, 15, strip_zeros=False) + "\n")


if __name__ == "__main__":
    main()
