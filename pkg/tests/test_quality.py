import pytest

import oracles
from satlab.cnf import Formula, count_satisfied_literals, eval_clause
from satlab.generators import GenSpec, gen_planted, gen_uniform
from satlab.quality import (
    BackboneBudgetError,
    FormulaUnsatisfiableError,
    compute_backbone,
    gen_deceptive,
    gen_general,
    quality_report,
)


def test_backbone_unit():
    assert compute_backbone(Formula(1, [(1,)])) == {1}


def test_backbone_free_variable():
    assert compute_backbone(Formula(2, [(1, 2)])) == frozenset()


def test_backbone_mixed():
    # x1 forced true, x2 forced false, x3 free
    f = Formula(3, [(1,), (-2,), (1, 3), (1, -3)])
    assert compute_backbone(f) == {1, -2}


def test_backbone_unsat_raises():
    with pytest.raises(FormulaUnsatisfiableError):
        compute_backbone(Formula(1, [(1,), (-1,)]))


def test_backbone_budget_error_carries_partial():
    f = gen_uniform(GenSpec(n=40, k=3, ratio=4.2, seed=123))
    sols = oracles.solution_masks(20, gen_uniform(GenSpec(n=20, k=3, ratio=3.0, seed=1)).clauses)
    try:
        compute_backbone(f, conflict_limit=1)
    except BackboneBudgetError as e:
        assert isinstance(e.confirmed, frozenset)
    except FormulaUnsatisfiableError:
        pass


def test_backbone_matches_enumeration_on_planted():
    for seed in range(8):
        f, _ = gen_planted(GenSpec(n=15, k=3, ratio=4.0, seed=seed))
        expected = oracles.brute_backbone(f.num_vars, f.clauses)
        assert compute_backbone(f, seed=seed) == expected


def test_backbone_matches_enumeration_on_uniform_sat():
    checked = 0
    for seed in range(12):
        f = gen_uniform(GenSpec(n=12, k=3, ratio=4.0, seed=seed + 40))
        if not oracles.is_satisfiable(f.num_vars, f.clauses):
            continue
        assert compute_backbone(f, seed=seed) == oracles.brute_backbone(f.num_vars, f.clauses)
        checked += 1
    assert checked >= 5


def test_deceptive_structure():
    backbone = frozenset({1, -2, 3, 4, -5})
    clauses = gen_deceptive(backbone, 50, seed=7)
    assert len(clauses) == 50
    for c in clauses:
        assert len(c) == 3
        assert len({abs(l) for l in c}) == 3
        in_bb = [l for l in c if l in backbone]
        anti_bb = [l for l in c if -l in backbone]
        assert len(in_bb) == 1
        assert len(anti_bb) == 2


def test_deceptive_exactly_one_correct_literal():
    # under any solution, backbone literals hold and their complements fail
    f, hidden = gen_planted(GenSpec(n=15, k=3, ratio=4.2, seed=1))
    backbone = compute_backbone(f)
    if len({abs(l) for l in backbone}) < 3:
        pytest.skip("instance backbone too small for the deceptive model")
    clauses = gen_deceptive(backbone, 30, seed=1)
    sols = oracles.solution_masks(f.num_vars, f.clauses)
    for mask in sols.tolist():
        alpha = [False] + [(mask >> (v - 1)) & 1 == 1 for v in range(1, 16)]
        for c in clauses:
            assert count_satisfied_literals(c, alpha) == 1


def test_deceptive_preserves_solutions():
    f, hidden = gen_planted(GenSpec(n=14, k=3, ratio=4.2, seed=1))
    backbone = compute_backbone(f)
    if len(backbone) < 3:
        pytest.skip("instance backbone too small for the deceptive model")
    clauses = gen_deceptive(backbone, 25, seed=2)
    before = set(oracles.solution_masks(f.num_vars, f.clauses).tolist())
    after = set(oracles.solution_masks(f.num_vars, list(f.clauses) + clauses).tolist())
    assert before == after


def test_deceptive_validation():
    with pytest.raises(ValueError):
        gen_deceptive(frozenset({1, 2}), 5, seed=0)
    assert gen_deceptive(frozenset({1, 2, 3}), 0, seed=0) == []


def test_general_structure_and_correctness():
    f, hidden = gen_planted(GenSpec(n=20, k=3, ratio=4.0, seed=5))
    backbone = compute_backbone(f)
    if not backbone:
        pytest.skip("empty backbone")
    clauses = gen_general(hidden, backbone, 40, seed=3)
    assert len(clauses) == 40
    for c in clauses:
        assert len(c) == 3
        assert len({abs(l) for l in c}) == 3
        assert count_satisfied_literals(c, hidden) >= 1
        assert eval_clause(c, hidden)


def test_general_preserves_solutions():
    f, hidden = gen_planted(GenSpec(n=14, k=3, ratio=4.0, seed=19))
    backbone = compute_backbone(f)
    if not backbone:
        pytest.skip("empty backbone")
    clauses = gen_general(hidden, backbone, 25, seed=4)
    before = set(oracles.solution_masks(f.num_vars, f.clauses).tolist())
    after = set(oracles.solution_masks(f.num_vars, list(f.clauses) + clauses).tolist())
    assert before == after


def test_general_expected_correct_count():
    # backbone literal always correct; each random literal correct w.p. 1/2,
    # so the mean correct count over many clauses approaches 2.
    f, hidden = gen_planted(GenSpec(n=50, k=3, ratio=4.2, seed=8))
    backbone = compute_backbone(f)
    clauses = gen_general(hidden, backbone, 10_000, seed=6)
    mean_correct = sum(count_satisfied_literals(c, hidden) for c in clauses) / len(clauses)
    assert abs(mean_correct - 2.0) < 0.05


def test_general_validation():
    with pytest.raises(ValueError):
        gen_general([False, True, True, True], frozenset(), 3, seed=0)
    with pytest.raises(ValueError):
        gen_general([False, True], frozenset({1}), 3, seed=0)
    assert gen_general([False, True, True, True], frozenset({1}), 0, seed=0) == []


def test_quality_report_all_true():
    report = quality_report([(1, 2, 3)], [False, True, True, True])
    assert report.mean_quality == 1.0
    assert report.mean_correct == 3.0
    assert report.rows == ((0, 3, 3, 1.0),)


def test_quality_report_deceptive_exactly_one():
    f, hidden = gen_planted(GenSpec(n=15, k=3, ratio=4.2, seed=1))
    backbone = compute_backbone(f)
    if len(backbone) < 3:
        pytest.skip("instance backbone too small")
    clauses = gen_deceptive(backbone, 20, seed=5)
    report = quality_report(clauses, hidden)
    assert report.mean_correct == 1.0
    assert report.mean_quality == pytest.approx(1 / 3)


def test_quality_report_aggregates_match_rows():
    f, hidden = gen_planted(GenSpec(n=20, k=3, ratio=4.0, seed=2))
    report = quality_report(f.clauses, hidden)
    assert report.mean_quality == pytest.approx(
        sum(r[3] for r in report.rows) / len(report.rows)
    )
    assert report.mean_correct == pytest.approx(
        sum(r[1] for r in report.rows) / len(report.rows)
    )
    assert all(0.0 <= r[3] <= 1.0 for r in report.rows)


def test_quality_report_incomplete_solution():
    with pytest.raises(ValueError):
        quality_report([(1, 5)], [False, True, True])
