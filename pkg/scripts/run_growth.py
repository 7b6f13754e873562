"""Growth experiment over a B grid: N(B), N/B^2, N/(B^2 log B) and N/rhs per form.

Usage: python3 scripts/run_growth.py [config.json] [--out rows.csv] [--workers N]

Without a config file a small default run is used (5 random forms, B up to 40).
"""

import argparse
import json
import sys
from dataclasses import replace

from quadcount.config import ExperimentConfig
from quadcount.experiment import experiment_forms, growth_experiment


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config", nargs="?")
    ap.add_argument("--out")
    ap.add_argument("--workers", type=int)
    ap.add_argument("--seed", type=int)
    args = ap.parse_args(argv)

    cfg = ExperimentConfig.load(args.config) if args.config else ExperimentConfig(B_grid=(1, 2, 5, 10, 20, 40))
    over = {k: v for k, v in (("out", args.out), ("workers", args.workers), ("seed", args.seed)) if v is not None}
    cfg = replace(cfg, **over)

    res = growth_experiment(experiment_forms(cfg), cfg.B_grid, cfg)
    if not cfg.out:
        sys.stdout.write(res.csv_text)
    summary = {"rows": len(res.rows), "skipped": res.skipped,
               "max_N_over_B2_nonsquare": res.max_N_over_B2_nonsquare,
               "max_N_over_B2logB_square": res.max_N_over_B2logB_square}
    print(json.dumps(summary, indent=2), file=sys.stderr)


if __name__ == "__main__":
    main()
