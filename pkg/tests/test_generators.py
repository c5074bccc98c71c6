import pytest

import oracles
from satlab.cnf import eval_clause
from satlab.generators import GenSpec, default_ratio, gen_planted, gen_uniform


def test_uniform_structure():
    f = gen_uniform(GenSpec(n=100, k=3, ratio=4.267, seed=11))
    assert f.num_clauses == 427  # round(4.267 * 100)
    for clause in f.clauses:
        assert len(clause) == 3
        assert len({abs(l) for l in clause}) == 3
        assert all(1 <= abs(l) <= 100 for l in clause)


def test_uniform_seed_determinism():
    a = gen_uniform(GenSpec(n=50, k=3, ratio=4.2, seed=5))
    b = gen_uniform(GenSpec(n=50, k=3, ratio=4.2, seed=5))
    assert a.clauses == b.clauses
    c = gen_uniform(GenSpec(n=50, k=3, ratio=4.2, seed=6))
    assert c.clauses != a.clauses


def test_uniform_polarity_balance():
    # Monte Carlo: over 1e5 literals the positive fraction is 0.5 +- 0.01.
    total = 0
    positive = 0
    for seed in range(7):
        f = gen_uniform(GenSpec(n=200, k=5, m=3000, seed=seed))
        for clause in f.clauses:
            total += len(clause)
            positive += sum(1 for l in clause if l > 0)
    assert total >= 100_000
    assert abs(positive / total - 0.5) < 0.01


def test_planted_every_clause_satisfied():
    f, hidden = gen_planted(GenSpec(n=60, k=3, ratio=4.2, seed=3))
    for clause in f.clauses:
        assert eval_clause(clause, hidden)


def test_planted_hidden_is_solution_by_enumeration():
    f, hidden = gen_planted(GenSpec(n=15, k=3, ratio=4.0, seed=9))
    sols = oracles.solution_masks(f.num_vars, f.clauses)
    assert oracles.assignment_to_mask(hidden) in set(sols.tolist())


def test_planted_seed_determinism():
    a_f, a_h = gen_planted(GenSpec(n=40, k=3, ratio=4.2, seed=17))
    b_f, b_h = gen_planted(GenSpec(n=40, k=3, ratio=4.2, seed=17))
    assert a_f.clauses == b_f.clauses
    assert a_h == b_h


def test_planted_respects_given_assignment():
    hidden = [False] + [True] * 20
    f, h = gen_planted(GenSpec(n=20, k=3, ratio=4.0, seed=1, planted=hidden))
    assert h == hidden
    for clause in f.clauses:
        assert any(l > 0 for l in clause)  # all-true assignment needs a positive literal


def test_genspec_validation():
    with pytest.raises(ValueError):
        GenSpec(n=2, k=3, ratio=4.0, seed=0)  # k > n
    with pytest.raises(ValueError):
        GenSpec(n=10, k=1, ratio=4.0, seed=0)  # k < 2
    with pytest.raises(ValueError):
        GenSpec(n=10, k=3, seed=0)  # neither ratio nor m
    with pytest.raises(ValueError):
        GenSpec(n=10, k=3, ratio=4.0, m=42, seed=0)  # both


def test_default_ratios():
    assert default_ratio(3) == 4.267
    assert default_ratio(5) == 21.117
    assert default_ratio(7) == 87.79
    with pytest.raises(ValueError):
        default_ratio(4)
