"""Full pipeline: a packet meets a barrier of extra scattering events.

This reproduces the shape of the big validation run at a friendlier size:
a slow packet starts left of a region where the per-block event count is
raised above the background mass density, the automaton and the
one-component reference evolve side by side, and the reflected and
transmitted shares are tallied per spatial block. The point of the exercise
is the comparison itself: at accessible lattice sizes the pointlike events
scatter much harder than the smooth barrier they stand for, and this demo
makes that visible seed by seed.

Run:  python3 demos/tunneling_run.py [--seed 0] [--plot out.png]
"""

import argparse
import tempfile

import numpy as np

from dirac_automaton import ExperimentConfig, run_experiment


def main():
    parser = argparse.ArgumentParser(
        description="packet against a raised-count barrier, both pictures")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trajectories", type=int, default=500,
                        help="sampled walkers (0 to skip)")
    parser.add_argument("--plot", default=None, metavar="PNG")
    args = parser.parse_args()

    config = ExperimentConfig(
        m_x=400, m_t=2000,
        n_t_block=100, n_x_block=40,
        counts_row=[38, 38, 38, 38, 48, 48, 38, 38, 38, 38],
        seed=args.seed,
        center=120.0, sigma=40.0, momentum_over_m=0.1,
        support_blocks=(1, 2, 3, 4, 5),
        solvers=("automaton", "schrodinger"),
        steps=2000, snapshot_every=500,
        coarse_width=40, regions=10,
        trajectories=args.trajectories,
    )

    with tempfile.TemporaryDirectory() as tmp:
        report, field, tables = run_experiment(config, out_dir=tmp,
                                               seed=args.seed)

    print(f"{config.m_x} sites, {config.steps} steps, barrier blocks 5-6 "
          f"run 48 events against a 38-event background")
    print(f"automaton finished in {report.automaton_seconds:.2f} s "
          f"({report.steps_per_second:.0f} steps/s)")
    if args.trajectories:
        print(f"{args.trajectories} sampled walkers deviate from the wave "
              f"by at most {report.trajectory_max_dev:.1e}")

    print("\n  t      L1     reflected(a/s)   transmitted(a/s)")
    for t, pairs in report.snapshots:
        rep = pairs["automaton_vs_schrodinger"]
        print(f"{t:6d}  {rep.l1:.4f}   {rep.reflected_a:.3f} / "
              f"{rep.reflected_b:.3f}    {rep.transmitted_a:.3f} / "
              f"{rep.transmitted_b:.3f}")
    print("\nthe automaton reflects far more than the smooth-barrier "
          "reference: every event is a full quarter-turn scatterer, so at "
          "this lattice size the distributions agree only coarsely")

    if args.plot:
        import matplotlib
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
        x = np.arange(config.m_x)
        fig, ax = plt.subplots(figsize=(8, 4))
        last = config.steps
        ax.plot(x, tables["automaton"][last].p, label="automaton",
                alpha=0.7)
        ax.plot(x, tables["schrodinger"][last].p, label="reference")
        ax.axvspan(200, 280, color="grey", alpha=0.2, label="barrier")
        ax.set_title(f"occupation after {last} steps, seed {args.seed}")
        ax.legend()
        fig.tight_layout()
        fig.savefig(args.plot, dpi=120)
        print(f"figure saved to {args.plot}")


if __name__ == "__main__":
    main()
