"""Minimal complete CDCL solver doubling as a learned-clause miner.

Standard machinery: two-watched-literal propagation, 1-UIP conflict
analysis, VSIDS-style activity decisions with phase saving, Luby
restarts (base 64), and periodic learned-clause database reduction
(locked clauses kept; otherwise clauses of width <= 12 in the most
recently used half survive).  No clause minimization, no preprocessing,
no proof logging: the contract here is sound learned clauses under a
budget, not competition performance.

Budgets come in two currencies: wall seconds for production runs and
conflict counts for deterministic tests.  Every learned clause is
recorded; mining exports the width-filtered prefix (or a seeded random
subset) of the record stream.

The solver also accepts assumption literals.  Assumptions are injected
as forced decisions, so all learned clauses remain logical consequences
of the formula alone, which lets a caller reuse one solver instance
across many assumption-driven queries (`compute_backbone` does exactly
that).
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from heapq import heapify, heappop, heappush

from .cnf import Assignment, Clause, Formula, canonical_clause, eval_formula

SAT = "sat"
UNSAT = "unsat"
BUDGET = "budget-exhausted"

_TRUE, _UNDEF, _FALSE = 1, 0, -1

_RESCALE_LIMIT = 1e100
_ACTIVITY_DECAY = 0.95
_LUBY_BASE = 64
_WALL_CHECK_EVERY = 64


@dataclass(frozen=True)
class LearnedClauseRecord:
    """One clause produced by conflict analysis, in learn order."""

    clause: Clause
    width: int
    learn_index: int


@dataclass(frozen=True)
class MiningBudget:
    """Stop conditions for a mining run.

    `width_limit` and `count_cap` define which learned clauses qualify
    for export; with `early_stop` the run ends as soon as `count_cap`
    distinct qualifying clauses exist.
    """

    wall_seconds: float = 300.0
    conflict_limit: int | None = None
    width_limit: int = 4
    count_cap: int | None = None
    early_stop: bool = False

    def __post_init__(self):
        if self.wall_seconds <= 0:
            raise ValueError("wall_seconds must be positive")
        if self.width_limit < 1:
            raise ValueError("width_limit must be >= 1")
        if self.count_cap is not None and self.count_cap < 0:
            raise ValueError("count_cap must be >= 0 when present")
        if self.conflict_limit is not None and self.conflict_limit < 0:
            raise ValueError("conflict_limit must be >= 0 when present")


@dataclass
class MiningOutcome:
    status: str
    model: Assignment | None
    learned: list[Clause]
    total_learned_seen: int
    conflicts: int
    records: list[LearnedClauseRecord] = field(repr=False, default_factory=list)


def luby(i: int) -> int:
    """The Luby restart sequence 1,1,2,1,1,2,4,... (1-indexed)."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        k -= 1
        i -= (1 << k) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class _WatchedClause:
    __slots__ = ("lits", "learned", "stamp")

    def __init__(self, lits: list[int], learned: bool, stamp: int = 0):
        self.lits = lits
        self.learned = learned
        self.stamp = stamp


class CdclSolver:
    """Incremental CDCL over one immutable formula.

    Repeated `solve` calls keep the learned-clause database, so a
    sequence of assumption queries gets progressively cheaper.
    """

    def __init__(self, formula: Formula, seed: int = 0):
        self.formula = formula
        n = formula.num_vars
        self.n = n
        rng = random.Random(seed)
        self.assigns = [_UNDEF] * (n + 1)
        self.level = [0] * (n + 1)
        self.reason: list[_WatchedClause | None] = [None] * (n + 1)
        self.saved_phase = [False] + [rng.random() < 0.5 for _ in range(n)]
        self.activity = [0.0] * (n + 1)
        self.var_inc = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        # watches[code(l)] = clauses currently watching literal l
        self.watches: list[list[_WatchedClause]] = [[] for _ in range(2 * n + 2)]
        self.learned_db: list[_WatchedClause] = []
        self.conflicts = 0
        self.records: list[LearnedClauseRecord] = []
        self._qualifying: set[Clause] = set()
        self._heap: list[tuple[float, int]] = [(0.0, v) for v in range(1, n + 1)]
        heapify(self._heap)
        self._unsat = False
        self._reduce_cap = max(2000, formula.num_clauses)
        self._restart_idx = 1
        self._restart_at = _LUBY_BASE * luby(1)
        for clause in formula.clauses:
            if not self._attach_input_clause(list(clause)):
                self._unsat = True
                return
        if self._propagate() is not None:
            self._unsat = True

    # -- literal/value plumbing ------------------------------------------

    @staticmethod
    def _code(lit: int) -> int:
        return (lit << 1) if lit > 0 else ((-lit << 1) | 1)

    def _value(self, lit: int) -> int:
        v = self.assigns[lit] if lit > 0 else -self.assigns[-lit]
        return v

    def _attach_input_clause(self, lits: list[int]) -> bool:
        """Add an original clause; False means immediate unsatisfiability."""
        if len(lits) == 0:
            return False
        if len(lits) == 1:
            val = self._value(lits[0])
            if val == _FALSE:
                return False
            if val == _UNDEF:
                self._enqueue(lits[0], None)
            return True
        clause = _WatchedClause(lits, learned=False)
        self.watches[self._code(lits[0])].append(clause)
        self.watches[self._code(lits[1])].append(clause)
        return True

    def _enqueue(self, lit: int, reason: _WatchedClause | None) -> None:
        v = abs(lit)
        self.assigns[v] = _TRUE if lit > 0 else _FALSE
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    # -- propagation ------------------------------------------------------

    def _propagate(self) -> _WatchedClause | None:
        watches = self.watches
        assigns = self.assigns
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -lit
            code = self._code(false_lit)
            watchers = watches[code]
            kept: list[_WatchedClause] = []
            i = 0
            total = len(watchers)
            while i < total:
                clause = watchers[i]
                i += 1
                lits = clause.lits
                if lits[0] == false_lit:
                    lits[0], lits[1] = lits[1], lits[0]
                first = lits[0]
                fval = assigns[first] if first > 0 else -assigns[-first]
                if fval == _TRUE:
                    kept.append(clause)
                    continue
                moved = False
                for j in range(2, len(lits)):
                    other = lits[j]
                    oval = assigns[other] if other > 0 else -assigns[-other]
                    if oval != _FALSE:
                        lits[1], lits[j] = lits[j], lits[1]
                        watches[self._code(other)].append(clause)
                        moved = True
                        break
                if moved:
                    continue
                kept.append(clause)
                if fval == _FALSE:
                    kept.extend(watchers[i:])
                    watches[code] = kept
                    return clause
                self._enqueue(first, clause)
            watches[code] = kept
        return None

    # -- decisions ---------------------------------------------------------

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > _RESCALE_LIMIT:
            inv = 1.0 / _RESCALE_LIMIT
            for u in range(1, self.n + 1):
                self.activity[u] *= inv
            self.var_inc *= inv
            self._heap = [(-self.activity[u], u) for u in range(1, self.n + 1) if self.assigns[u] == _UNDEF]
            heapify(self._heap)
            return
        heappush(self._heap, (-self.activity[v], v))

    def _pick_branch_var(self) -> int | None:
        heap = self._heap
        activity = self.activity
        assigns = self.assigns
        while heap:
            negact, v = heappop(heap)
            if assigns[v] == _UNDEF and -negact == activity[v]:
                return v
        for v in range(1, self.n + 1):
            if assigns[v] == _UNDEF:
                heappush(heap, (-activity[v], v))
        while heap:
            negact, v = heappop(heap)
            if assigns[v] == _UNDEF and -negact == activity[v]:
                return v
        return None

    # -- backtracking -------------------------------------------------------

    def _backjump(self, target_level: int) -> None:
        if len(self.trail_lim) <= target_level:
            return
        bound = self.trail_lim[target_level]
        for idx in range(len(self.trail) - 1, bound - 1, -1):
            lit = self.trail[idx]
            v = abs(lit)
            self.saved_phase[v] = lit > 0
            self.assigns[v] = _UNDEF
            self.reason[v] = None
            heappush(self._heap, (-self.activity[v], v))
        del self.trail[bound:]
        del self.trail_lim[target_level:]
        self.qhead = len(self.trail)

    # -- conflict analysis ---------------------------------------------------

    def _analyze(self, conflict: _WatchedClause) -> tuple[list[int], int]:
        """First-UIP learned clause and its backjump level.

        The learned clause comes back with the asserting literal at index
        0 and (when binary or longer) a highest-level literal at index 1,
        ready to be watched.
        """
        n_curr = 0
        learnt: list[int] = [0]
        seen = [False] * (self.n + 1)
        current = len(self.trail_lim)
        idx = len(self.trail) - 1
        p = None
        clause = conflict
        while True:
            clause.stamp = self.conflicts
            start = 0 if p is None else 1
            for lit in clause.lits[start:]:
                v = abs(lit)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= current:
                        n_curr += 1
                    else:
                        learnt.append(lit)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            v = abs(p)
            seen[v] = False
            n_curr -= 1
            idx -= 1
            if n_curr == 0:
                break
            clause = self.reason[v]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        max_i = 1
        for i in range(2, len(learnt)):
            if self.level[abs(learnt[i])] > self.level[abs(learnt[max_i])]:
                max_i = i
        learnt[1], learnt[max_i] = learnt[max_i], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    # -- learned clause database ----------------------------------------------

    def _add_learned(self, lits: list[int]) -> _WatchedClause | None:
        if len(lits) == 1:
            return None
        clause = _WatchedClause(lits, learned=True, stamp=self.conflicts)
        self.watches[self._code(lits[0])].append(clause)
        self.watches[self._code(lits[1])].append(clause)
        self.learned_db.append(clause)
        return clause

    def _reduce_db(self) -> None:
        locked = {id(self.reason[abs(l)]) for l in self.trail if self.reason[abs(l)] is not None}
        keep, drop = [], []
        for clause in self.learned_db:
            if id(clause) in locked:
                keep.append(clause)
            else:
                drop.append(clause)
        drop.sort(key=lambda c: c.stamp, reverse=True)
        half = len(drop) // 2
        survivors = [c for c in drop[:half] if len(c.lits) <= 12]
        dead = set(map(id, drop)) - set(map(id, survivors))
        for code in range(len(self.watches)):
            self.watches[code] = [c for c in self.watches[code] if not (c.learned and id(c) in dead)]
        self.learned_db = keep + survivors
        self._reduce_cap += self._reduce_cap // 2

    # -- main search -------------------------------------------------------------

    def solve(
        self,
        assumptions: tuple[int, ...] = (),
        conflict_limit: int | None = None,
        wall_seconds: float | None = None,
        width_limit: int | None = None,
        count_cap: int | None = None,
        early_stop: bool = False,
    ) -> str:
        """Search until sat/unsat/budget; returns a status string.

        With assumptions, `unsat` means unsatisfiable under the given
        assumptions (the formula itself may be satisfiable).
        """
        if self._unsat:
            return UNSAT
        start = time.perf_counter()
        conflict_budget = None if conflict_limit is None else self.conflicts + conflict_limit
        self._backjump(0)
        for a in assumptions:
            if abs(a) > self.n:
                raise ValueError(f"assumption literal {a} out of range")
        while True:
            conflict = self._propagate()
            if conflict is not None:
                if not self.trail_lim:
                    self._unsat = True
                    return UNSAT
                self.conflicts += 1
                learnt, bj_level = self._analyze(conflict)
                self._record(learnt, width_limit)
                self._backjump(bj_level)
                added = self._add_learned(learnt)
                self._enqueue(learnt[0], added)
                self.var_inc /= _ACTIVITY_DECAY
                if (
                    early_stop
                    and count_cap is not None
                    and len(self._qualifying) >= count_cap
                ):
                    self._backjump(0)
                    return BUDGET
                if conflict_budget is not None and self.conflicts >= conflict_budget:
                    self._backjump(0)
                    return BUDGET
                if wall_seconds is not None and self.conflicts % _WALL_CHECK_EVERY == 0:
                    if time.perf_counter() - start > wall_seconds:
                        self._backjump(0)
                        return BUDGET
                if len(self.learned_db) > self._reduce_cap:
                    self._reduce_db()
                if self.conflicts >= self._restart_at:
                    self._restart_idx += 1
                    self._restart_at += _LUBY_BASE * luby(self._restart_idx)
                    self._backjump(0)
                continue
            level = len(self.trail_lim)
            if level < len(assumptions):
                a = assumptions[level]
                val = self._value(a)
                if val == _FALSE:
                    return UNSAT
                self.trail_lim.append(len(self.trail))
                if val == _UNDEF:
                    self._enqueue(a, None)
                continue
            v = self._pick_branch_var()
            if v is None:
                return SAT
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.saved_phase[v] else -v, None)

    def _record(self, lits: list[int], width_limit: int | None) -> None:
        clause = canonical_clause(lits)
        self.records.append(LearnedClauseRecord(clause, len(clause), len(self.records)))
        if width_limit is not None and len(clause) <= width_limit:
            self._qualifying.add(clause)

    def model(self) -> Assignment:
        model = [False] * (self.n + 1)
        for v in range(1, self.n + 1):
            if self.assigns[v] == _UNDEF:
                raise RuntimeError("model requested but assignment incomplete")
            model[v] = self.assigns[v] == _TRUE
        return model


def filter_learned(
    records: list[LearnedClauseRecord],
    width_limit: int,
    count_cap: int | None = None,
    mode: str = "chronological",
    seed: int | None = None,
) -> list[Clause]:
    """Width filter, dedup (first occurrence wins), then cap.

    Chronological mode keeps the first `count_cap` clauses in learn
    order; random mode draws a uniform seeded subset.
    """
    if mode not in ("chronological", "random"):
        raise ValueError(f"unknown filter mode {mode!r}")
    seen: set[Clause] = set()
    qualifying: list[Clause] = []
    for rec in records:
        if rec.width <= width_limit and rec.clause not in seen:
            seen.add(rec.clause)
            qualifying.append(rec.clause)
    if count_cap is None or len(qualifying) <= count_cap:
        return qualifying
    if mode == "chronological":
        return qualifying[:count_cap]
    rng = random.Random(seed)
    picked = rng.sample(range(len(qualifying)), count_cap)
    return [qualifying[i] for i in sorted(picked)]


def cdcl_solve_and_mine(formula: Formula, budget: MiningBudget, seed: int = 0) -> MiningOutcome:
    """Run CDCL under a budget and export width-filtered learned clauses.

    The solver may finish first: `sat` outcomes carry a verified model,
    `unsat` means the formula is unsatisfiable.  Otherwise the status is
    budget-exhausted and the learned clauses are the harvest.
    """
    solver = CdclSolver(formula, seed)
    status = solver.solve(
        conflict_limit=budget.conflict_limit,
        wall_seconds=budget.wall_seconds,
        width_limit=budget.width_limit,
        count_cap=budget.count_cap,
        early_stop=budget.early_stop,
    )
    model = None
    if status == SAT:
        model = solver.model()
        if not eval_formula(formula, model):
            raise AssertionError("internal error: CDCL produced an invalid model")
    exported = filter_learned(solver.records, budget.width_limit, budget.count_cap)
    return MiningOutcome(
        status=status,
        model=model,
        learned=exported,
        total_learned_seen=len(solver.records),
        conflicts=solver.conflicts,
        records=solver.records,
    )
