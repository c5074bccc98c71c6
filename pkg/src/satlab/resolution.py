"""Resolvent enumeration: level-1 and level-2 pools, ternary saturation.

A level-1 resolvent comes from two clauses of the base formula; a
level-2 resolvent has at least one level-1 parent.  Pools are width
filtered, deduplicated, tautology-free, and never contain clauses of
the base formula, so adding any subset of a pool preserves the solution
set exactly.  Tautological input clauses are excluded from enumeration.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

from .cnf import Clause, Formula, resolve

PAIR_BUDGET_DEFAULT = 10_000_000


@dataclass(frozen=True)
class ResolventPool:
    level: int
    clauses: frozenset[Clause]
    max_width: int

    def __len__(self) -> int:
        return len(self.clauses)


def _level1_stream(formula: Formula):
    """All non-tautological resolvents of base-clause pairs, any width."""
    clauses = formula.clauses
    taut = formula.tautology_ids
    for v in range(1, formula.num_vars + 1):
        for i in formula.occurrence(v):
            if i in taut:
                continue
            a = clauses[i]
            for j in formula.occurrence(-v):
                if j in taut:
                    continue
                r = resolve(a, clauses[j], v)
                if r is not None:
                    yield r


def level1_resolvents(formula: Formula, max_width: int) -> ResolventPool:
    """Resolvents of pairs of original clauses, width-capped."""
    base = formula.clause_set()
    pool = {r for r in _level1_stream(formula) if len(r) <= max_width and r not in base}
    return ResolventPool(1, frozenset(pool), max_width)


def level2_resolvents(
    formula: Formula, max_width: int, pair_budget: int = PAIR_BUDGET_DEFAULT
) -> ResolventPool:
    """Resolvents with at least one level-1 parent (other parent original
    or level-1), width-capped, excluding base clauses and level-1 resolvents.

    Enumeration is capped at `pair_budget` resolution attempts, walked in
    a deterministic order, so results are reproducible even when truncated.
    """
    base = formula.clause_set()
    level1_all = sorted({r for r in _level1_stream(formula)} - base)
    taut = formula.tautology_ids
    originals = [formula.clauses[i] for i in range(formula.num_clauses) if i not in taut]
    # occurrence map over originals and level-1 resolvents together
    occ: dict[int, list[Clause]] = {}
    for clause in originals + level1_all:
        for lit in clause:
            occ.setdefault(lit, []).append(clause)
    exclude = base | set(level1_all)
    pool: set[Clause] = set()
    attempts = 0
    for a in level1_all:
        for lit in a:
            partners = occ.get(-lit)
            if not partners:
                continue
            for b in partners:
                attempts += 1
                if attempts > pair_budget:
                    return ResolventPool(2, frozenset(pool), max_width)
                r = resolve(a, b, abs(lit))
                if r is not None and len(r) <= max_width and r not in exclude:
                    pool.add(r)
    return ResolventPool(2, frozenset(pool), max_width)


def ternary_saturate(formula: Formula) -> set[Clause]:
    """Close clauses of width <= 3 under resolution, keeping resolvents of
    width <= 3, until fixpoint; returns the derived clauses only."""
    base = formula.clause_set()
    taut = formula.tautology_ids
    known: set[Clause] = {
        formula.clauses[i]
        for i in range(formula.num_clauses)
        if i not in taut and len(formula.clauses[i]) <= 3
    }
    occ: dict[int, list[Clause]] = {}
    for clause in known:
        for lit in clause:
            occ.setdefault(lit, []).append(clause)
    queue = deque(sorted(known))
    derived: set[Clause] = set()
    while queue:
        a = queue.popleft()
        for lit in a:
            # snapshot: clauses added later pair with `a` on their own turn
            for b in list(occ.get(-lit, ())):
                r = resolve(a, b, abs(lit))
                if r is None or len(r) > 3 or r in known:
                    continue
                known.add(r)
                derived.add(r)
                for l2 in r:
                    occ.setdefault(l2, []).append(r)
                queue.append(r)
    return derived - base


def sample_pool(pool: ResolventPool, cap: int, seed: int) -> list[Clause]:
    """Uniform random subset of size min(cap, |pool|), seed-deterministic.

    The pool is sorted canonically before sampling so the result does not
    depend on set iteration order; the sample itself is returned sorted.
    """
    if cap < 0:
        raise ValueError("cap must be >= 0")
    ordered = sorted(pool.clauses)
    k = min(cap, len(ordered))
    return sorted(random.Random(seed).sample(ordered, k))
