"""Smallest gap admitting a shadowing witness for u = 1^n, v = 0 1, compared with M(n, 2^-m).

    python scripts/gap_minimality_sweep.py --taus 1 2 1/2 --n-max 3 --m-max 2
"""
import argparse

from gapshift.gapped import GappedSubshift, gap_function, min_gap_witness_search
from gapshift.symbolic import format_word


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--taus", nargs="+", default=["1", "2"])
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--m-max", type=int, default=2)
    args = ap.parse_args()

    print("tau  n  m   M  first_gap  witness")
    for t in args.taus:
        spec = GappedSubshift.full(1, t)
        for n in range(1, args.n_max + 1):
            for m in range(0, args.m_max + 1):
                M = gap_function(spec, n, m)
                first, wit = None, None
                for g in range(1, M + 1):
                    wit = min_gap_witness_search(spec, (1,) * n, (0, 1), m, g)
                    if wit is not None:
                        first = g
                        break
                print(f"{t:<4} {n:<2} {m:<2} {M:>3}  {first!s:>9}  {format_word(wit) if wit else '-'}")


if __name__ == "__main__":
    main()
