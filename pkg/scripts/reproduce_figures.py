"""Write the CSV data behind every figure into one directory.

Usage::

    python3 scripts/reproduce_figures.py --out results/
    python3 scripts/reproduce_figures.py --figures 9 10 --trials 20000
"""

import argparse
import logging
import time
from pathlib import Path

from fdrelay.experiments import FIGURES, figure

log = logging.getLogger("reproduce_figures")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"), help="output directory")
    parser.add_argument("--figures", type=int, nargs="+", choices=sorted(FIGURES), default=sorted(FIGURES))
    parser.add_argument("--seed", type=int, help="override every figure's seed")
    parser.add_argument("--trials", type=int, help="override every figure's Monte Carlo trial count")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")

    overrides = {k: v for k, v in (("seed", args.seed), ("trials", args.trials)) if v is not None}
    args.out.mkdir(parents=True, exist_ok=True)
    for fig_id in args.figures:
        started = time.perf_counter()
        path, rows = figure(fig_id, overrides, out=args.out / f"fig{fig_id}.csv")
        log.info("fig%d: %d rows -> %s (%.1fs)", fig_id, len(rows), path, time.perf_counter() - started)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
