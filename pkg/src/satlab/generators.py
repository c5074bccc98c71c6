"""Random k-SAT instance generators: uniform and hidden-solution (planted).

All generators are pure functions of a `GenSpec`; the seeded Mersenne
Twister (`random.Random`) makes them bit-reproducible across platforms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cnf import Assignment, Formula

# Clause-to-variable ratios near the satisfiability threshold, used when a
# spec gives neither ratio nor m.
THRESHOLD_RATIOS = {3: 4.267, 5: 21.117, 7: 87.79}


@dataclass(frozen=True)
class GenSpec:
    """Parameters for one generated instance.

    Exactly one of `ratio` / `m` must be given.  `planted`, when present,
    is a complete assignment (index 0 unused) that every generated clause
    must satisfy.  `bias` shapes the planted polarity distribution: a
    polarity vector with c solution-agreeing literals is accepted with
    probability bias**c, so bias=1 keeps every satisfying vector (the
    plain rejection model) while bias<1 hides the solution deceptively
    (fewer agreeing literals, much harder for local search).
    """

    n: int
    k: int
    seed: int
    ratio: float | None = None
    m: int | None = None
    planted: Assignment | None = None
    bias: float = 1.0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError(f"clause width k={self.k} < 2")
        if self.k > self.n:
            raise ValueError(f"clause width k={self.k} exceeds n={self.n}")
        if (self.ratio is None) == (self.m is None):
            raise ValueError("exactly one of ratio / m must be given")
        if self.planted is not None and len(self.planted) != self.n + 1:
            raise ValueError("planted assignment length must be n+1 (index 0 unused)")
        if not 0.0 < self.bias <= 1.0:
            raise ValueError(f"bias must lie in (0, 1], got {self.bias}")

    @property
    def num_clauses(self) -> int:
        return self.m if self.m is not None else int(round(self.ratio * self.n))


def default_ratio(k: int) -> float:
    """Threshold-ratio default for k in {3, 5, 7}."""
    try:
        return THRESHOLD_RATIOS[k]
    except KeyError:
        raise ValueError(f"no default ratio for k={k}; pass an explicit ratio") from None


def gen_uniform(spec: GenSpec) -> Formula:
    """Uniform random k-SAT: per clause, k distinct variables drawn without
    replacement and independent uniform polarities.  Duplicate clauses are
    permitted, as in the uniform model."""
    if spec.planted is not None:
        raise ValueError("uniform generation takes no planted assignment")
    rng = random.Random(spec.seed)
    variables = range(1, spec.n + 1)
    clauses = []
    for _ in range(spec.num_clauses):
        vs = rng.sample(variables, spec.k)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula(spec.n, clauses)


def gen_planted(spec: GenSpec) -> tuple[Formula, Assignment]:
    """Hidden-solution k-SAT: every clause satisfies the planted assignment.

    The hidden assignment is `spec.planted` or drawn uniformly from the
    seed.  Each clause keeps its variable set and redraws the polarity
    vector until at least one literal agrees with the hidden assignment
    (rejection sampling; for k=3 and bias=1 the expected number of draws
    is 8/7).  With bias<1 vectors are additionally thinned by bias**c
    where c counts agreeing literals, which concentrates mass on barely
    satisfying clauses and hides the solution from local search.
    """
    rng = random.Random(spec.seed)
    if spec.planted is not None:
        hidden = list(spec.planted)
    else:
        hidden = [False] + [rng.random() < 0.5 for _ in range(spec.n)]
    variables = range(1, spec.n + 1)
    bias = spec.bias
    clauses = []
    for _ in range(spec.num_clauses):
        vs = rng.sample(variables, spec.k)
        while True:
            clause = [v if rng.random() < 0.5 else -v for v in vs]
            correct = sum(1 for l in clause if (l > 0) == hidden[abs(l)])
            if correct == 0:
                continue
            if bias == 1.0 or rng.random() < bias**correct:
                break
        clauses.append(clause)
    return Formula(spec.n, clauses), hidden
