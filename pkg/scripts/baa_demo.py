"""Run the adaptive schedule on the two built-in families and print the traces."""
import argparse

from cheegerkit.baa import BAAConfig, run_baa
from cheegerkit.errors import GapCollapse
from cheegerkit.instances import bottleneck_path, two_level


def show(title, run, every):
    print(f"== {title}")
    print(f"{'tau':>9} {'h_hat':>10} {'gap_lb':>10} {'dtau':>9} {'fidelity':>9} limit")
    cps = run.checkpoints
    for c in cps[::every] + ([cps[-1]] if (len(cps) - 1) % every else []):
        print(f"{c.tau:>9.5f} {c.h_hat:>10.4g} {c.gap_bound:>10.4g} {c.delta_tau:>9.2e} {c.fidelity:>9.5f} {c.limited_by}")
    state = "collapsed" if run.collapsed else f"final fidelity {run.final_fidelity:.5f}"
    print(f"{len(cps)} checkpoints, T = {run.total_time:.4g}, cost = {run.cost:.4g}, {state}\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--samples", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--theta", type=float, default=0.1)
    args = ap.parse_args()

    cfg = BAAConfig(n_samples=args.samples, seed=args.seed, theta=args.theta)
    show("two-level avoided crossing", run_baa(two_level(3.0, 1.0, 0.0), two_level(3.0, 1.0, 1.0), cfg), 1)

    cfg = BAAConfig(n_samples=2 * args.samples, seed=args.seed, theta=args.theta,
                    gamma_min=1e-5, max_checkpoints=20_000)
    try:
        run = run_baa(bottleneck_path(8, 0.1, 0.02), bottleneck_path(8, 0.1, 1.0), cfg)
    except GapCollapse as exc:
        print(f"GapCollapse: {exc}")
        run = exc.run
    show("path graph with a closing bottleneck", run, max(1, len(run.checkpoints) // 15))


if __name__ == "__main__":
    main()
