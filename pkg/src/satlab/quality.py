"""Backbone computation, synthetic clause models, and clause quality.

The backbone of a satisfiable formula is the set of literals true in
every satisfying assignment.  It is computed exactly with one CDCL
solver instance and one assumption query per candidate literal: only
literals agreeing with a reference model can be backbone, and every
satisfying assignment found along the way prunes further candidates.

Two synthetic clause models measure how clause quality steers local
search.  Both build 3-clauses around a backbone literal:

    deceptive: one backbone literal plus two complements of backbone
               literals -- exactly one correct literal per solution.
    general:   one backbone literal plus two uniformly random literals.

Quality of a clause against a fixed solution is the fraction of its
literals the solution satisfies.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cdcl import SAT, UNSAT, CdclSolver
from .cnf import Assignment, Clause, Formula, canonical_clause, count_satisfied_literals

Backbone = frozenset[int]


class FormulaUnsatisfiableError(ValueError):
    """Backbone requested for an unsatisfiable formula."""


class BackboneBudgetError(RuntimeError):
    """Budget ran out mid-computation; partial backbones are not usable."""

    def __init__(self, message: str, confirmed: set[int]):
        super().__init__(message)
        self.confirmed = frozenset(confirmed)


def compute_backbone(
    formula: Formula,
    seed: int = 0,
    conflict_limit: int | None = None,
    wall_seconds: float | None = None,
) -> Backbone:
    """Exact backbone via iterated assumption queries.

    `conflict_limit` and `wall_seconds` bound each individual solver
    call; exhausting either raises `BackboneBudgetError`.
    """
    solver = CdclSolver(formula, seed)
    status = solver.solve(conflict_limit=conflict_limit, wall_seconds=wall_seconds)
    if status == UNSAT:
        raise FormulaUnsatisfiableError("formula has no satisfying assignment")
    if status != SAT:
        raise BackboneBudgetError("budget exhausted before a first model was found", set())
    model = solver.model()
    candidates = {v if model[v] else -v for v in range(1, formula.num_vars + 1)}
    backbone: set[int] = set()
    for v in range(1, formula.num_vars + 1):
        lit = v if model[v] else -v
        if lit not in candidates:
            continue
        status = solver.solve(
            assumptions=(-lit,), conflict_limit=conflict_limit, wall_seconds=wall_seconds
        )
        if status == UNSAT:
            backbone.add(lit)
        elif status == SAT:
            other = solver.model()
            candidates &= {u if other[u] else -u for u in range(1, formula.num_vars + 1)}
        else:
            raise BackboneBudgetError(f"budget exhausted while testing literal {lit}", backbone)
    return frozenset(backbone)


@dataclass(frozen=True)
class QualityReport:
    """Per-clause satisfied-literal counts against one fixed solution."""

    rows: tuple[tuple[int, int, int, float], ...]  # (clause_id, correct, width, quality)
    mean_quality: float
    mean_correct: float

    @classmethod
    def empty(cls) -> "QualityReport":
        return cls((), 0.0, 0.0)


def quality_report(clauses, solution: Assignment) -> QualityReport:
    rows = []
    for cid, clause in enumerate(clauses):
        for lit in clause:
            if abs(lit) >= len(solution):
                raise ValueError(f"solution does not cover variable {abs(lit)}")
        correct = count_satisfied_literals(clause, solution)
        width = len(clause)
        rows.append((cid, correct, width, correct / width if width else 0.0))
    if not rows:
        return QualityReport.empty()
    return QualityReport(
        rows=tuple(rows),
        mean_quality=sum(r[3] for r in rows) / len(rows),
        mean_correct=sum(r[1] for r in rows) / len(rows),
    )


def _distinct_backbone_triple(bb: list[int], rng: random.Random) -> tuple[int, int, int]:
    x = rng.choice(bb)
    while True:
        y = rng.choice(bb)
        if abs(y) != abs(x):
            break
    while True:
        z = rng.choice(bb)
        if abs(z) != abs(x) and abs(z) != abs(y):
            break
    return x, y, z


def gen_deceptive(backbone: Backbone, t: int, seed: int) -> list[Clause]:
    """t clauses, each one backbone literal plus two complements of backbone
    literals over three distinct variables.  Sampled independently, so
    duplicates across the t clauses are possible."""
    bb = sorted(backbone, key=abs)
    if len(bb) < 3:
        raise ValueError(f"deceptive model needs a backbone over >= 3 variables, got {len(bb)}")
    rng = random.Random(seed)
    out = []
    for _ in range(t):
        x, y, z = _distinct_backbone_triple(bb, rng)
        out.append(canonical_clause((x, -y, -z)))
    return out


def gen_general(solution: Assignment, backbone: Backbone, t: int, seed: int) -> list[Clause]:
    """t clauses, each one backbone literal plus two uniformly random
    literals over distinct remaining variables."""
    bb = sorted(backbone, key=abs)
    if not bb:
        raise ValueError("general model needs a non-empty backbone")
    n = len(solution) - 1
    if n < 3:
        raise ValueError("general model needs at least 3 variables")
    rng = random.Random(seed)
    out = []
    for _ in range(t):
        x = rng.choice(bb)
        while True:
            v2 = rng.randrange(1, n + 1)
            if v2 != abs(x):
                break
        while True:
            v3 = rng.randrange(1, n + 1)
            if v3 != abs(x) and v3 != v2:
                break
        y = v2 if rng.random() < 0.5 else -v2
        z = v3 if rng.random() < 0.5 else -v3
        out.append(canonical_clause((x, y, z)))
    return out
