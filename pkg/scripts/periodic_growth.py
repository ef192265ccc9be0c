"""Periodic census growth (1/n) ln|Per_n| against h_N / (1 + tau).

    python scripts/periodic_growth.py --alphabet 1 --tau 1 --n-max 12 --threads 1
"""
import argparse

from gapshift.counting import growth_profile
from gapshift.gapped import GappedSubshift


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphabet", type=int, default=1)
    ap.add_argument("--tau", default="1")
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()

    rows = growth_profile(GappedSubshift.full(args.alphabet, args.tau), args.n_max, threads=args.threads)
    print(f"{'n':>3} {'|Per_n|':>10} {'growth':>9} {'ref':>9}")
    for n, count, growth, ref in rows:
        print(f"{n:>3} {count:>10} {growth:9.5f} {ref:9.5f}")


if __name__ == "__main__":
    main()
