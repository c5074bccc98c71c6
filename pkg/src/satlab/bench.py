"""Benchmark harness: trial execution, PAR2 scoring, summaries, CSV output.

A trial is one (instance, solver, seed) run under a flip or wall-clock
budget.  The per-trial CSV is the source of truth; summaries (solved
counts, PAR2 scores, pairwise statistics) are derived artifacts and can
always be recomputed from it.  Trials are independent and may run in a
process pool; records are merged in sorted order so results do not
depend on scheduling.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .cnf import Formula
from .pipeline import run_hybrid
from .sls import ScoringFunction, probsat_run
from .stats import DegenerateInputError, cohens_d, paired_t_test, wilcoxon_signed_rank

FLIP_TIMEOUTS = {3: 1_000_000_000, 5: 500_000_000, 7: 250_000_000}

_HUGE_FLIPS = 1 << 62


@dataclass(frozen=True)
class TrialRecord:
    instance_id: str
    solver_id: str
    seed: int
    solved: bool
    flips: int
    seconds: float
    note: str = ""

    def key(self) -> tuple:
        """Timing-free projection used for determinism comparisons."""
        return (self.instance_id, self.solver_id, self.seed, self.solved, self.flips)


def par2(record: TrialRecord, timeout: float, currency: str = "flips") -> float:
    """Measured cost if solved, twice the timeout otherwise."""
    if currency not in ("flips", "seconds"):
        raise ValueError(f"unknown PAR2 currency {currency!r}")
    if timeout <= 0:
        raise ValueError("timeout must be positive")
    if not record.solved:
        return 2.0 * timeout
    return float(record.flips) if currency == "flips" else record.seconds


def default_flip_timeout(k: int) -> int:
    """Flip timeouts by clause width: 1e9 / 5e8 / 2.5e8 for k = 3 / 5 / 7."""
    try:
        return FLIP_TIMEOUTS[k]
    except KeyError:
        raise ValueError(f"no default flip timeout for k={k}") from None


@dataclass(frozen=True)
class SolverConfig:
    """One named solver configuration for the harness."""

    solver_id: str
    algorithm: str = "sls"  # sls | hybrid
    scoring: ScoringFunction | None = None
    initial_flips: int | None = None
    miner_seconds: float | None = None
    miner_conflict_limit: int | None = None
    width_limit: int | None = None
    count_cap_percent: float | None = None

    def __post_init__(self):
        if self.algorithm not in ("sls", "hybrid"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "SolverConfig":
        scoring = data.get("scoring")
        if scoring is not None:
            scoring = ScoringFunction(
                kind=scoring["kind"],
                cb=scoring["cb"],
                epsilon=scoring.get("epsilon", 0.9),
            )
        return cls(
            solver_id=data["id"],
            algorithm=data.get("algorithm", "sls"),
            scoring=scoring,
            initial_flips=data.get("initial_flips"),
            miner_seconds=data.get("miner_seconds"),
            miner_conflict_limit=data.get("miner_conflict_limit"),
            width_limit=data.get("width_limit"),
            count_cap_percent=data.get("count_cap_percent"),
        )


def run_trial(
    instance_id: str,
    formula: Formula,
    config: SolverConfig,
    seed: int,
    budget_flips: int | None = None,
    budget_seconds: float | None = None,
) -> TrialRecord:
    """Execute one trial; solver crashes become unsolved records with a note."""
    try:
        if config.algorithm == "sls":
            res = probsat_run(
                formula,
                budget_flips if budget_flips is not None else _HUGE_FLIPS,
                seed,
                config.scoring,
                wall_limit=budget_seconds,
            )
            return TrialRecord(
                instance_id, config.solver_id, seed, res.solved, res.flips_used, res.wall_seconds
            )
        result = run_hybrid(
            formula,
            wall_budget=budget_seconds if budget_seconds is not None else 5000.0,
            seed=seed,
            miner_seconds=config.miner_seconds,
            miner_conflict_limit=config.miner_conflict_limit,
            width_limit=config.width_limit,
            count_cap_percent=config.count_cap_percent,
            initial_flips=config.initial_flips,
            final_flips=budget_flips,
        )
        total_flips = sum(result.phase_flips.values())
        total_seconds = sum(result.phase_seconds.values())
        return TrialRecord(
            instance_id, config.solver_id, seed, result.status == "sat", total_flips, total_seconds
        )
    except Exception as exc:  # crash containment: the suite must go on
        return TrialRecord(instance_id, config.solver_id, seed, False, 0, 0.0, note=repr(exc))


def _run_trial_packed(args) -> TrialRecord:
    return run_trial(*args)


def run_suite(
    instances,
    solvers,
    seeds,
    budget_flips: int | None = None,
    budget_seconds: float | None = None,
    workers: int = 1,
) -> list[TrialRecord]:
    """All (instance, solver, seed) trials, optionally in a process pool.

    Records come back sorted by (instance, solver, seed) regardless of
    worker count or scheduling.
    """
    if not instances or not solvers:
        raise ValueError("need at least one instance and one solver configuration")
    tasks = [
        (iid, formula, config, seed, budget_flips, budget_seconds)
        for iid, formula in instances
        for config in solvers
        for seed in seeds
    ]
    if workers <= 1:
        records = [_run_trial_packed(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_trial_packed, tasks, chunksize=1))
    records.sort(key=lambda r: (r.instance_id, r.solver_id, r.seed))
    return records


@dataclass
class SolverSummary:
    solver_id: str
    solved_count: int
    score: float
    per_instance_par2: dict[str, float] = field(default_factory=dict)


@dataclass
class PairwiseStats:
    solver_a: str
    solver_b: str
    t: float | None
    t_p: float | None
    w: float | None
    w_p: float | None
    d: float | None


@dataclass
class BenchmarkSummary:
    timeout: float
    currency: str
    per_solver: dict[str, SolverSummary]
    pairwise: list[PairwiseStats]


def summarize(records, timeout: float, currency: str = "flips") -> BenchmarkSummary:
    """Aggregate trials: per-instance mean PAR2, per-solver score (the sum
    of instance means), and pairwise paired statistics on those means."""
    solvers = sorted({r.solver_id for r in records})
    instances = sorted({r.instance_id for r in records})
    per_solver: dict[str, SolverSummary] = {}
    for sid in solvers:
        per_instance = {}
        solved = 0
        for iid in instances:
            values = [par2(r, timeout, currency) for r in records
                      if r.solver_id == sid and r.instance_id == iid]
            if values:
                per_instance[iid] = sum(values) / len(values)
        solved = sum(1 for r in records if r.solver_id == sid and r.solved)
        score = sum(per_instance.values())
        per_solver[sid] = SolverSummary(sid, solved, score, per_instance)
    pairwise = []
    for i, sa in enumerate(solvers):
        for sb in solvers[i + 1 :]:
            common = [iid for iid in instances
                      if iid in per_solver[sa].per_instance_par2
                      and iid in per_solver[sb].per_instance_par2]
            va = [per_solver[sa].per_instance_par2[iid] for iid in common]
            vb = [per_solver[sb].per_instance_par2[iid] for iid in common]
            t = t_p = w = w_p = d = None
            try:
                t, t_p = paired_t_test(va, vb)
            except DegenerateInputError:
                pass
            try:
                w, w_p = wilcoxon_signed_rank(va, vb)
            except DegenerateInputError:
                pass
            try:
                d = cohens_d(va, vb)
            except DegenerateInputError:
                pass
            pairwise.append(PairwiseStats(sa, sb, t, t_p, w, w_p, d))
    return BenchmarkSummary(timeout, currency, per_solver, pairwise)


TRIALS_HEADER = ["instance_id", "solver_id", "seed", "solved", "flips", "seconds", "note"]


def trials_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(TRIALS_HEADER)
    for r in records:
        writer.writerow([r.instance_id, r.solver_id, r.seed, int(r.solved), r.flips,
                         f"{r.seconds:.6f}", r.note])
    return buf.getvalue()


def trials_from_csv(text: str) -> list[TrialRecord]:
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        out.append(TrialRecord(
            instance_id=row["instance_id"],
            solver_id=row["solver_id"],
            seed=int(row["seed"]),
            solved=bool(int(row["solved"])),
            flips=int(row["flips"]),
            seconds=float(row["seconds"]),
            note=row.get("note", ""),
        ))
    return out


def summary_to_csv(summary: BenchmarkSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["solver_id", "solved", "score", "timeout", "currency"])
    for sid in sorted(summary.per_solver):
        s = summary.per_solver[sid]
        writer.writerow([sid, s.solved_count, f"{s.score:.6f}", summary.timeout, summary.currency])
    writer.writerow([])
    writer.writerow(["solver_a", "solver_b", "t", "t_p", "wilcoxon_w", "wilcoxon_p", "cohens_d"])
    fmt = lambda x: "" if x is None else f"{x:.9g}"
    for p in summary.pairwise:
        writer.writerow([p.solver_a, p.solver_b, fmt(p.t), fmt(p.t_p), fmt(p.w), fmt(p.w_p), fmt(p.d)])
    return buf.getvalue()


def cactus_to_csv(records, solver_id: str, currency: str = "seconds") -> str:
    """Sorted solve costs for one solver: the cactus-plot data series."""
    costs = sorted(
        (r.flips if currency == "flips" else r.seconds) for r in records
        if r.solver_id == solver_id and r.solved
    )
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["solved", currency])
    for i, cost in enumerate(costs, start=1):
        writer.writerow([i, f"{cost:.6f}" if currency == "seconds" else int(cost)])
    return buf.getvalue()
