"""Multi-run experiments, aggregation and delimited result files."""

from __future__ import annotations

import csv
import io
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .algorithms import run_gai
from .bounds import lil_params
from .core import (
    AggregateStats,
    Algorithm,
    AlgoConfig,
    BanditInstance,
    ConfigError,
    RunOutcome,
    load_instance,
    mean_std,
)

log = logging.getLogger(__name__)

RAW_COLUMNS = ["run_id", "algorithm", "lambda", "tau_lambda", "tau_stop", "misclassified", "truncated"]
AGG_COLUMNS = ["algorithm", "lambda", "mean", "stddev", "runs"]
PLOT_COLUMNS = ["algorithm", "lambda", "mean_samples", "stddev"]


@dataclass
class ExperimentPlan:
    instance_path: Optional[str]
    algorithms: List[Algorithm]
    runs: int = 10
    delta: float = 0.01
    seed: int = 0
    budget: int = 500_000_000
    out_dir: Optional[str] = None
    workers: int = 1
    instance: Optional[BanditInstance] = None
    scale_divisor: float = 1e5

    def __post_init__(self):
        self.algorithms = [Algorithm.parse(a) if isinstance(a, str) else a for a in self.algorithms]
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")
        if not self.algorithms:
            raise ConfigError("algorithm list is empty")
        if self.instance is None:
            if self.instance_path is None:
                raise ConfigError("plan needs an instance or an instance path")
            self.instance = load_instance(self.instance_path)


@dataclass
class ExperimentResult:
    plan: ExperimentPlan
    outcomes: Dict[Algorithm, List[RunOutcome]]
    aggregates: Dict[Algorithm, AggregateStats]
    files: Dict[str, Path] = field(default_factory=dict)


def _n_lambda(instance: BanditInstance, outcomes: Sequence[RunOutcome]) -> int:
    return max([instance.m] + [len(o.tau_lambda) for o in outcomes])


def aggregate(algorithm, outcomes: Sequence[RunOutcome], instance: BanditInstance,
              scale_divisor: float = 1.0) -> AggregateStats:
    """Per-lambda statistics over the runs that reached that lambda."""
    L = _n_lambda(instance, outcomes)
    lam_stats = []
    for lam in range(1, L + 1):
        vals = [o.tau(lam) for o in outcomes if o.tau(lam) is not None]
        lam_stats.append(mean_std(vals))
    stops = [o.tau_stop for o in outcomes if o.tau_stop is not None]
    return AggregateStats(
        algorithm=Algorithm.parse(algorithm).value if isinstance(algorithm, str) else algorithm.value,
        lambda_stats=lam_stats,
        stop_stats=mean_std(stops),
        runs=len(outcomes),
        truncated_runs=sum(o.truncated for o in outcomes),
        misclassified_runs=sum(o.misclassified for o in outcomes),
        scale_divisor=scale_divisor,
    )


def run_all(plan: ExperimentPlan) -> Dict[Algorithm, List[RunOutcome]]:
    inst = plan.instance
    configs = {a: AlgoConfig(a, plan.delta, plan.seed, plan.budget) for a in plan.algorithms}
    for cfg in configs.values():
        cfg.validate_for(inst)
        if cfg.algorithm is Algorithm.LILHDOC:
            lil_params(inst.K, cfg.delta)  # surface parameter errors before sampling

    jobs = [(a, i) for a in plan.algorithms for i in range(plan.runs)]

    def work(job):
        algo, run_index = job
        return run_gai(inst, configs[algo], run_index=run_index)

    if plan.workers > 1:
        # the kernel releases the GIL, so threads run in parallel
        with ThreadPoolExecutor(max_workers=plan.workers) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]

    out: Dict[Algorithm, List[RunOutcome]] = {a: [] for a in plan.algorithms}
    for (algo, _), res in zip(jobs, results):
        out[algo].append(res)
    return out


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return "" if x != x else repr(x)
    return str(x)


def _write_rows(path: Path, header: List[str], rows) -> None:
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def raw_rows(outcomes: Dict[Algorithm, List[RunOutcome]], instance: BanditInstance):
    for algo, runs in outcomes.items():
        L = _n_lambda(instance, runs)
        for run_id, o in enumerate(runs):
            for lam in range(1, L + 1) if L else [0]:
                yield (run_id, algo.value, lam, o.tau(lam) if lam else None, o.tau_stop,
                       o.misclassified, o.truncated)


def aggregate_rows(aggregates: Dict[Algorithm, AggregateStats]):
    for agg in aggregates.values():
        for lam, (mu, sd, n) in enumerate(agg.lambda_stats, start=1):
            yield (agg.algorithm, lam, mu, sd, n)
        mu, sd, n = agg.stop_stats
        yield (agg.algorithm, "stop", mu, sd, n)


def emit_plot_data(aggregates: Dict[Algorithm, AggregateStats], path) -> Path:
    if not aggregates:
        raise ConfigError("no aggregates to emit")
    path = Path(path)
    _write_rows(path, PLOT_COLUMNS, (row[:4] for row in aggregate_rows(aggregates)))
    return path


def run_experiment(plan: ExperimentPlan) -> ExperimentResult:
    outcomes = run_all(plan)
    aggregates = {a: aggregate(a, runs, plan.instance, plan.scale_divisor) for a, runs in outcomes.items()}
    result = ExperimentResult(plan, outcomes, aggregates)
    if plan.out_dir is not None:
        out = Path(plan.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        result.files["raw"] = out / "raw.csv"
        result.files["aggregate"] = out / "aggregate.csv"
        _write_rows(result.files["raw"], RAW_COLUMNS, raw_rows(outcomes, plan.instance))
        _write_rows(result.files["aggregate"], AGG_COLUMNS, aggregate_rows(aggregates))
        result.files["plot"] = emit_plot_data(aggregates, out / "plot_data.csv")
        log.info("wrote %s", ", ".join(str(p) for p in result.files.values()))
    return result


def format_summary(aggregates: Dict[Algorithm, AggregateStats]) -> str:
    """Human table: mean +- stddev per row, divided by the display divisor."""
    aggs = list(aggregates.values())
    if not aggs:
        return ""
    div = aggs[0].scale_divisor
    L = max(len(a.lambda_stats) for a in aggs)
    labels = [f"tau_{lam}" for lam in range(1, L + 1)] + ["tau_stop"]

    def cell(stats):
        mu, sd, n = stats
        if n == 0:
            return "n/a"
        return f"{mu / div:.2f} +- {sd / div:.2f}"

    cols = [a.algorithm for a in aggs]
    table = []
    for li, lab in enumerate(labels):
        row = [lab]
        for a in aggs:
            st = a.stop_stats if lab == "tau_stop" else (
                a.lambda_stats[li] if li < len(a.lambda_stats) else (0, 0, 0))
            row.append(cell(st))
        table.append(row)
    widths = [max(len(r[j]) for r in table + [["", *cols]]) for j in range(len(cols) + 1)]
    buf = io.StringIO()
    buf.write("  ".join(h.ljust(w) for h, w in zip(["", *cols], widths)).rstrip() + "\n")
    for r in table:
        buf.write("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")
    buf.write(f"(all values divided by {div:g}; runs: "
              + ", ".join(f"{a.algorithm}={a.runs}" for a in aggs))
    flagged = [f"{a.algorithm}: {a.truncated_runs} truncated, {a.misclassified_runs} misclassified"
               for a in aggs if a.truncated_runs or a.misclassified_runs]
    buf.write(")\n" + ("".join(f"note: {f}\n" for f in flagged)))
    return buf.getvalue()
