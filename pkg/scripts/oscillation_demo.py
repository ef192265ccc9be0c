"""Zero-frequency averages of a scheduled oscillating point at its checkpoints.

    python scripts/oscillation_demo.py --tau 1 --factor 4 --phases 6
"""
import argparse

from gapshift.gapped import GappedSubshift, OscillationSchedule, build_oscillating_point
from gapshift.measures import birkhoff_average, oscillation
from gapshift.symbolic import Observable


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--tau", default="1")
    ap.add_argument("--factor", type=int, default=4)
    ap.add_argument("--phases", type=int, default=4)
    args = ap.parse_args()

    spec = GappedSubshift.full(1, args.tau)
    sched = OscillationSchedule.geometric((1,), args.factor, args.phases)
    x = build_oscillating_point(spec, sched, sched.total)
    chi0 = Observable.indicator((0,), spec.size)
    for c in sched.checkpoints:
        print(f"n={c:>8}  zero frequency {float(birkhoff_average(x, chi0, c)):.5f}")
    lo, hi, gap = oscillation(x, chi0, sched.checkpoints)
    print(f"range [{float(lo):.5f}, {float(hi):.5f}], gap {gap} (floor tau/(1+tau) = {spec.zero_density_floor})")


if __name__ == "__main__":
    main()
