"""Command line front end.

Thin argparse layer over the library; every subcommand does its work through
the same public functions the demos use, so scripted and programmatic runs
stay bit-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .automaton import load_wave
from .disorder import DisorderPlan, load_field, save_field, synthesize_disorder
from .experiments import inspect_field, load_config, run_experiment
from .lattice import LatticeConfig
from .observables import (
    SmoothingKernel,
    coarse_grain,
    compare_distributions,
    occupation_probabilities,
)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, required=True,
                   help="experiment config (INI)")
    p.add_argument("--seed", type=int, default=None,
                   help="override the disorder seed")
    p.add_argument("--out", type=Path, default=None,
                   help="override the output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirac-automaton",
        description="scattering automaton on a lattice ring, with reference "
                    "wave-equation solvers")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate-disorder",
                         help="synthesize a disorder field and save it")
    _add_common(gen)

    ins = sub.add_parser("inspect",
                         help="summarize a saved disorder field")
    ins.add_argument("field", type=Path, help="disorder field file")
    ins.add_argument("--n-t-block", type=int, default=100)
    ins.add_argument("--n-x-block", type=int, default=100)

    run = sub.add_parser("run", help="run a configured experiment")
    _add_common(run)
    run.add_argument("--threads", type=int, default=1,
                     help="worker threads to record (results are "
                          "thread-count independent)")
    run.add_argument("--snapshot-every", type=int, default=None,
                     help="override the snapshot cadence")

    cmp_ = sub.add_parser("compare",
                          help="compare two saved wave snapshots")
    cmp_.add_argument("wave_a", type=Path)
    cmp_.add_argument("wave_b", type=Path)
    cmp_.add_argument("--coarse-width", type=int, default=1,
                      help="triangular smoothing width (1 = none)")
    cmp_.add_argument("--regions", type=int, default=10)
    return parser


def _cmd_generate(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config.seed = args.seed
    if args.out is not None:
        config.out_dir = str(args.out)
    cfg = LatticeConfig(eps=1.0, m_x=config.m_x, m_t=config.m_t)
    plan = DisorderPlan.static(config.n_t_block, config.n_x_block,
                               config.counts_row,
                               config.m_t // config.n_t_block, config.seed)
    field = synthesize_disorder(plan, cfg)
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "disorder.txt"
    save_field(field, path)
    print(f"wrote {path} ({field.total_events} events, seed {config.seed})")
    return 0


def _cmd_inspect(args) -> int:
    field = load_field(args.field)
    sys.stdout.write(inspect_field(field, args.n_t_block, args.n_x_block))
    return 0


def _cmd_run(args) -> int:
    config = load_config(args.config)
    report, _, _ = run_experiment(config, out_dir=args.out, seed=args.seed,
                                  snapshot_every=args.snapshot_every,
                                  threads=args.threads)
    last_t, pairs = report.snapshots[-1]
    print(f"ran {config.steps} steps in {report.automaton_seconds:.2f} s "
          f"({report.steps_per_second:.0f} steps/s)")
    for pair, rep in sorted(pairs.items()):
        print(f"t={last_t} {pair}: l1={rep.l1:.6f} max={rep.max_abs:.6f}")
    for name, path in sorted(report.files.items()):
        print(f"{name}: {path}")
    return 0


def _cmd_compare(args) -> int:
    wave_a = load_wave(args.wave_a)
    wave_b = load_wave(args.wave_b)
    pa = occupation_probabilities(wave_a)
    pb = occupation_probabilities(wave_b)
    if args.coarse_width > 1:
        kernel = SmoothingKernel.triangular(args.coarse_width)
        pa, pb = coarse_grain(pa, kernel), coarse_grain(pb, kernel)
    n_regions = args.regions
    if pa.p.size % n_regions:
        n_regions = 1
    rep = compare_distributions(pa, pb, n_regions=n_regions,
                                label=f"{args.wave_a.name}_vs_{args.wave_b.name}")
    sys.stdout.write(rep.to_kv_text() + "\n")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"generate-disorder": _cmd_generate,
                "inspect": _cmd_inspect,
                "run": _cmd_run,
                "compare": _cmd_compare}
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
