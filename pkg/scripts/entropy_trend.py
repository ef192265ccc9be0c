"""Print h_n - ln A for several tau, showing the slow decrease toward ln A.

    python scripts/entropy_trend.py --alphabet 5 --n-max 14 --taus 1/2 1 2
"""
import argparse
import math

from gapshift.counting import entropy_profile
from gapshift.gapped import GappedSubshift


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alphabet", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=14)
    ap.add_argument("--taus", nargs="+", default=["1/2", "1", "2"])
    args = ap.parse_args()

    profiles = {t: entropy_profile(GappedSubshift.full(args.alphabet, t), args.n_max) for t in args.taus}
    log_a = math.log(args.alphabet)
    print("n  " + "  ".join(f"tau={t:>5}" for t in args.taus))
    for n in range(1, args.n_max + 1):
        print(f"{n:<3}" + "  ".join(f"{profiles[t].h(n) - log_a:9.5f}" for t in args.taus))
    for t, prof in profiles.items():
        print(f"tau={t}: reference ln 2 + ln A/(1+tau) - ln A = {prof.ref_thm_b5 - log_a:+.5f}")


if __name__ == "__main__":
    main()
