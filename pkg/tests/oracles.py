"""Independent brute-force oracles used by the test suite.

Everything here works on raw clause lists (iterables of signed-int
literals) with a bitmask representation of assignments, deliberately
sharing no code path with the package implementations it checks.
Feasible up to ~20 variables.
"""

import numpy as np


def _clause_masks(clauses):
    pos = np.zeros(len(clauses), dtype=np.uint32)
    neg = np.zeros(len(clauses), dtype=np.uint32)
    for i, clause in enumerate(clauses):
        for lit in clause:
            if lit > 0:
                pos[i] |= np.uint32(1 << (lit - 1))
            else:
                neg[i] |= np.uint32(1 << (-lit - 1))
    return pos, neg


def solution_masks(num_vars, clauses):
    """All satisfying assignments as bitmasks (bit v-1 = value of var v)."""
    assert num_vars <= 20
    a = np.arange(1 << num_vars, dtype=np.uint32)
    ok = np.ones(a.shape, dtype=bool)
    pos, neg = _clause_masks(clauses)
    for p, q in zip(pos, neg):
        ok &= ((a & p) != 0) | ((~a & q) != 0)
    return a[ok]


def is_satisfiable(num_vars, clauses):
    return solution_masks(num_vars, clauses).size > 0


def is_implied(num_vars, clauses, clause):
    """True iff every satisfying assignment of the clause list satisfies `clause`."""
    return implied_checker(num_vars, clauses)(clause)


def implied_checker(num_vars, clauses):
    """Closure testing implication against precomputed solutions; use this
    when checking many clauses against one formula."""
    sols = solution_masks(num_vars, clauses)

    def check(clause):
        p, q = _clause_masks([clause])
        return bool(np.all(((sols & p[0]) != 0) | ((~sols & q[0]) != 0)))

    return check


def brute_backbone(num_vars, clauses):
    """Set of literals true in every satisfying assignment (empty if unsat)."""
    sols = solution_masks(num_vars, clauses)
    if sols.size == 0:
        return set()
    backbone = set()
    for v in range(1, num_vars + 1):
        bits = (sols >> np.uint32(v - 1)) & np.uint32(1)
        if np.all(bits == 1):
            backbone.add(v)
        elif np.all(bits == 0):
            backbone.add(-v)
    return backbone


def assignment_to_mask(alpha):
    """Pack a bool list (index 0 unused) into a bitmask."""
    mask = 0
    for v in range(1, len(alpha)):
        if alpha[v]:
            mask |= 1 << (v - 1)
    return mask


def scratch_break_counts(num_vars, clauses, alpha):
    """Recompute break counts and the falsified clause set from scratch.

    break(v) = number of clauses with exactly one satisfied literal whose
    satisfied literal is over v.
    """
    breaks = [0] * (num_vars + 1)
    falsified = set()
    for cid, clause in enumerate(clauses):
        sat_lits = [l for l in clause if (l > 0) == alpha[abs(l)]]
        if not sat_lits:
            falsified.add(cid)
        elif len(sat_lits) == 1:
            breaks[abs(sat_lits[0])] += 1
    return breaks, falsified
