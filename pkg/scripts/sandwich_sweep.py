"""Sweep random stoquastic instances and summarize how tight the gap sandwich is.

Prints, per vertex count, the worst and median ratio gamma / (2h) and
lower / gamma, and exits nonzero if any certificate fails.
"""
import argparse
import sys
from collections import defaultdict

import numpy as np

from cheegerkit.bounds import verify_lower_stoquastic, verify_upper
from cheegerkit.instances import random_stoquastic
from cheegerkit.spectral import spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--q-mode", choices=["relaxed", "exact"], default="exact")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    upper_tight = defaultdict(list)
    lower_tight = defaultdict(list)
    failures = 0
    for _ in range(args.count):
        h = random_stoquastic(rng)
        es = spectrum(h)
        up = verify_upper(h, es)
        low = verify_lower_stoquastic(h, args.q_mode, es)
        failures += len(up.failures()) + len(low.failures())
        upper_tight[h.n].append(up.rhs / up.lhs)
        lower_tight[h.n].append(low.rhs / low.lhs)

    print(f"{'n':>3} {'count':>6} {'gamma/2h max':>13} {'median':>8} {'lower/gamma max':>16} {'median':>8}")
    for n in sorted(upper_tight):
        u, lo = np.array(upper_tight[n]), np.array(lower_tight[n])
        print(f"{n:>3} {u.size:>6} {u.max():>13.4f} {np.median(u):>8.4f} {lo.max():>16.4f} {np.median(lo):>8.4f}")
    print(f"failures: {failures}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
