"""Roda as varreduras de aceitação e grava os relatórios."""

import argparse
import logging
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from src.config import Config
from src.harness import CONJECTURE, THEOREM, SweepConfig, SweepMode, run_pair_sweep, verify_lemma_suite
from src.report_store import ReportStore

logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
)
logger = logging.getLogger(__name__)


def main() -> int:
    parser = argparse.ArgumentParser(
        description="Run the desk-scale theorem, conjecture and lemma sweeps"
    )
    parser.add_argument(
        "--seed",
        type=int,
        default=Config.DEFAULT_SEED,
        help=f"Seed for sampled sweeps (default: {Config.DEFAULT_SEED})"
    )
    parser.add_argument(
        "--samples",
        type=int,
        default=Config.DEFAULT_SAMPLES,
        help=f"Pairs per sampled sweep (default: {Config.DEFAULT_SAMPLES})"
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=Config.DEFAULT_JOBS,
        help="Worker processes"
    )
    parser.add_argument(
        "--max-depth",
        type=int,
        default=4,
        help="Deepest sampled sweep (default: 4)"
    )
    parser.add_argument(
        "--out",
        default=Config.REPORTS_DIR,
        help=f"Reports directory (default: {Config.REPORTS_DIR})"
    )

    args = parser.parse_args()
    store = ReportStore(args.out)
    exit_code = 0

    runs = []
    for n in range(2, Config.EXHAUSTIVE_MAX_DEPTH + 1):
        exhaustive = SweepConfig(depth=n, mode=SweepMode.EXHAUSTIVE, seed=args.seed, jobs=args.jobs)
        runs.append((THEOREM, exhaustive))
        runs.append((CONJECTURE, exhaustive))
    for n in range(Config.EXHAUSTIVE_MAX_DEPTH + 1, args.max_depth + 1):
        sampled = SweepConfig(depth=n, mode=SweepMode.SAMPLED, seed=args.seed,
                              samples=args.samples, jobs=args.jobs)
        runs.append((THEOREM, sampled))
        runs.append((CONJECTURE, sampled))
        runs.append((CONJECTURE, sampled.model_copy(update={"markov_target": True})))

    unsaved = 0
    try:
        for experiment, config in runs:
            logger.info(f"Running {experiment} sweep at n={config.depth} ({config.mode.value})")
            report, records = run_pair_sweep(experiment, config)
            if store.save_run(report, records) is None:
                unsaved += 1
            exit_code = max(exit_code, report.exit_code)

        for n in range(1, Config.EXHAUSTIVE_MAX_DEPTH + 1):
            logger.info(f"Running lemma suite at n={n}")
            config = SweepConfig(depth=n, seed=args.seed, samples=args.samples)
            report, records = verify_lemma_suite(n, config)
            if store.save_run(report, records) is None:
                unsaved += 1
            exit_code = max(exit_code, report.exit_code)
    except Exception as e:
        logger.error(f"Error running acceptance sweeps: {e}")
        return 1

    if unsaved:
        logger.error(f"{unsaved} reports could not be saved under {store.root}")
        return 1
    if exit_code:
        logger.warning("Counterexamples or violations found; see the stored reports")
    else:
        logger.info("All acceptance sweeps finished without counterexamples")
    return exit_code


if __name__ == "__main__":
    sys.exit(main())
