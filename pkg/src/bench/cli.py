"""Command-line entry point: `python -m src.bench kernel|synthetic|singularity ...`."""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from src import config
from src.bench.experiments import run_experiment
from src.bench.models import (
    DEFAULT_SAMPLERS,
    EXPERIMENTS,
    ExperimentSpec,
    KERNEL,
    OutputError,
    SINGULARITY,
    SYNTHETIC,
)
from src.bench.outputs import emit_outputs, summarize_rows
from src.data import DataLoadError, DatasetNotFoundError, DegenerateDatasetError
from src.sampling import EXACT_SVD, LINEAR_TIME_SVD


logger = logging.getLogger(__name__)

DEFAULT_RATIOS = "0.01:0.10:0.01"

# Per-experiment defaults that differ from the shared ones
EXPERIMENT_DEFAULTS = {
    KERNEL: {"norm": "fro", "decays": "exponential,linear", "size": 500, "ratios": DEFAULT_RATIOS},
    SYNTHETIC: {"norm": "l2", "decays": "exponential,linear", "size": 500, "ratios": DEFAULT_RATIOS},
    SINGULARITY: {"norm": "l2", "decays": "exponential", "size": 300, "ratios": "0.05", "trials": 100},
}


def parse_ratios(text: str) -> List[float]:
    """`start:stop:step` (stop inclusive) or a comma list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Expected start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"Invalid ratio range {text!r}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    return [float(p) for p in text.split(",") if p.strip()]


def parse_blobs(text: str) -> Tuple[int, int, int]:
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"Expected --blobs n,d,k, got {text!r}")
    return parts[0], parts[1], parts[2]


def _split(text: str) -> List[str]:
    return [p.strip() for p in text.split(",") if p.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src.bench",
        description="Nystrom sample-selection benchmarks",
    )
    parser.add_argument("experiment", choices=EXPERIMENTS, help="which experiment to run")

    source = parser.add_mutually_exclusive_group()
    source.add_argument("--input", type=Path, help="LIBSVM file for the kernel experiment")
    source.add_argument("--dataset", help="benchmark dataset name, read from NYSTROMITE_DATA_DIR")
    source.add_argument("--blobs", default="300,2,3", help="gaussian blobs n,d,k (kernel fallback)")

    parser.add_argument("--size", type=int, help="synthetic matrix size")
    parser.add_argument("--decay", help="comma list of linear,exponential")
    parser.add_argument("--rank", type=int, help="zero the synthetic spectrum past this rank")
    parser.add_argument("--ratios", help="start:stop:step or comma list of sample ratios")
    parser.add_argument("--trials", type=int, help="trials per random sampler")
    parser.add_argument("--seed", type=int, default=config.NYSTROMITE_SEED, help="master seed")
    parser.add_argument("--samplers", help="comma list of samplers")
    parser.add_argument("--norm", choices=["l2", "fro"], help="error norm")
    parser.add_argument("--front-end", choices=[LINEAR_TIME_SVD, EXACT_SVD], default=LINEAR_TIME_SVD,
                        help="thin decomposition used by algorithm1")
    parser.add_argument("--out", type=Path, default=config.NYSTROMITE_OUTPUT_DIR, help="output directory")
    parser.add_argument("--plot", action="store_true", help="also write a matplotlib script")
    parser.add_argument("--workers", type=int, default=config.NYSTROMITE_WORKERS, help="parallel cells")
    parser.add_argument("--log-level", default=config.NYSTROMITE_LOG_LEVEL, help="logging level")
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    """ExperimentSpec from parsed flags, filling per-experiment defaults."""
    defaults = EXPERIMENT_DEFAULTS[args.experiment]
    trials = args.trials if args.trials is not None else defaults.get("trials", config.NYSTROMITE_TRIALS)

    return ExperimentSpec(
        experiment=args.experiment,
        samplers=_split(args.samplers) if args.samplers is not None else list(DEFAULT_SAMPLERS[args.experiment]),
        ratios=parse_ratios(args.ratios or defaults["ratios"]),
        trials=trials,
        seed=args.seed,
        norm=args.norm or defaults["norm"],
        output_dir=args.out,
        input_path=args.input,
        dataset=args.dataset,
        blobs=parse_blobs(args.blobs),
        size=args.size if args.size is not None else defaults["size"],
        decays=_split(args.decay or defaults["decays"]),
        rank=args.rank,
        front_end=args.front_end,
        workers=args.workers,
        plot=args.plot,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

    try:
        spec = spec_from_args(args)
    except ValueError as e:
        parser.error(str(e))

    logger.info(f"Configuration: {config.get_config_summary()}")

    try:
        result = run_experiment(spec, data_dir=config.NYSTROMITE_DATA_DIR)
        written = emit_outputs(result, spec.output_dir, plot=spec.plot, norm=spec.norm)
    except (DataLoadError, DatasetNotFoundError, DegenerateDatasetError, OutputError) as e:
        logger.error(str(e))
        return 1

    summary = summarize_rows(result.rows)
    print(summary.to_string(index=False))
    if "correlation" in result.summary:
        corr = result.summary["correlation"]
        print(f"log-log correlation: {'n/a' if corr is None else f'{corr:.3f}'}")
    for path in written.values():
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
