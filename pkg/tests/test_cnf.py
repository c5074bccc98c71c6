import random

import pytest

import oracles
from satlab.cnf import (
    DimacsError,
    DimacsWarning,
    Formula,
    canonical_clause,
    count_satisfied_literals,
    emit_dimacs,
    eval_clause,
    eval_formula,
    format_solution,
    is_tautology,
    max_clause_width,
    parse_dimacs,
    parse_solution,
    resolve,
)
from satlab.generators import GenSpec, gen_uniform


def test_parse_basic():
    f = parse_dimacs("p cnf 3 2\n1 -2 0\n2 3 0\n")
    assert f.num_vars == 3
    assert f.num_clauses == 2
    assert f.clauses == ((1, -2), (2, 3))


def test_parse_empty_clause_set():
    f = parse_dimacs("p cnf 1 0\n")
    assert f.num_vars == 1
    assert f.num_clauses == 0


def test_parse_duplicate_literal_normalized():
    f = parse_dimacs("p cnf 2 1\n1 1 -2 0\n")
    assert f.clauses == ((1, -2),)


def test_parse_comments_and_multiline_clauses():
    f = parse_dimacs("c hello\nc world\np cnf 4 2\n1 2\n3 0 -4\n1 0\n")
    assert f.clauses == ((1, 2, 3), (1, -4))


def test_parse_tautology_retained_and_flagged():
    f = parse_dimacs("p cnf 2 2\n1 -1 2 0\n1 2 0\n")
    assert f.num_clauses == 2
    assert f.tautology_ids == {0}


def test_parse_count_mismatch_warns():
    with pytest.warns(DimacsWarning):
        f = parse_dimacs("p cnf 2 5\n1 0\n")
    assert f.num_clauses == 1


def test_parse_errors():
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf x 2\n")
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 2 1\n3 0\n")  # literal out of range
    with pytest.raises(DimacsError):
        parse_dimacs("p cnf 2 1\n1 2\n")  # missing terminating 0
    with pytest.raises(DimacsError):
        parse_dimacs("1 2 0\n")  # clause before header
    with pytest.raises(DimacsError):
        parse_dimacs("")


def test_parse_satlib_percent_footer():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n")
    assert f.clauses == ((1, 2),)


def test_emit_basic():
    f = Formula(3, [(1, -2), (2, 3)])
    assert emit_dimacs(f) == "p cnf 3 2\n1 -2 0\n2 3 0\n"
    assert emit_dimacs(Formula(1, [])) == "p cnf 1 0\n"


def test_parse_emit_roundtrip_random_instances():
    for seed in range(25):
        f = gen_uniform(GenSpec(n=30, k=3, ratio=4.2, seed=seed))
        g = parse_dimacs(emit_dimacs(f))
        assert g.num_vars == f.num_vars
        assert g.clause_set() == f.clause_set()


def test_occurrence_index_mirrors_membership():
    f = gen_uniform(GenSpec(n=25, k=3, ratio=4.0, seed=7))
    for lit in range(-f.num_vars, f.num_vars + 1):
        if lit == 0:
            continue
        for cid in f.occurrence(lit):
            assert lit in f.clauses[cid]
    for cid, clause in enumerate(f.clauses):
        for lit in clause:
            assert cid in f.occurrence(lit)


def test_eval_clause():
    alpha = [False, False, False]  # x1=0, x2=0
    assert eval_clause((1, -2), alpha) is True
    assert eval_clause((1, 2), alpha) is False
    assert eval_clause((), alpha) is False


def test_count_satisfied_literals():
    all_true = [False, True, True, True]
    assert count_satisfied_literals((1, 2, 3), all_true) == 3
    assert count_satisfied_literals((-1, -2), all_true) == 0
    assert count_satisfied_literals((1, -2, 3), all_true) == 2


def test_count_iff_eval_property():
    rng = random.Random(42)
    for _ in range(200):
        n = 6
        clause = canonical_clause(
            rng.sample(range(1, n + 1), 3)[i] * rng.choice([-1, 1]) for i in range(3)
        )
        alpha = [False] + [rng.random() < 0.5 for _ in range(n)]
        assert (count_satisfied_literals(clause, alpha) >= 1) == eval_clause(clause, alpha)


def test_resolve_basic():
    assert resolve((1, 2), (-1, 3), 1) == (2, 3)
    assert resolve((1, 2), (-1, -2), 1) is None  # tautology
    assert resolve((1,), (-1,), 1) == ()


def test_resolve_errors():
    with pytest.raises(ValueError):
        resolve((1, 2), (1, 3), 1)
    with pytest.raises(ValueError):
        resolve((1, 2), (-1, 3), 2)


def test_resolve_is_implied():
    rng = random.Random(3)
    checked = 0
    for _ in range(300):
        n = 8
        a = [rng.choice([-1, 1]) * v for v in rng.sample(range(1, n + 1), 3)]
        b = [rng.choice([-1, 1]) * v for v in rng.sample(range(1, n + 1), 3)]
        pivots = [abs(l) for l in a if -l in b]
        if not pivots:
            continue
        r = resolve(a, b, pivots[0])
        if r is None:
            continue
        assert oracles.is_implied(n, [a, b], r)
        checked += 1
    assert checked > 50


def test_max_clause_width():
    assert max_clause_width(Formula(5, [(1,), (1, 2, 3, 4, 5)])) == 5
    assert max_clause_width(gen_uniform(GenSpec(n=20, k=3, ratio=4.0, seed=1))) == 3
    assert max_clause_width(gen_uniform(GenSpec(n=20, k=7, ratio=2.0, seed=1))) == 7
    with pytest.raises(ValueError):
        max_clause_width(Formula(3, []))


def test_formula_rejects_out_of_range_literal():
    with pytest.raises(ValueError):
        Formula(2, [(1, 3)])


def test_tautology_helpers():
    assert is_tautology((1, -1, 2))
    assert not is_tautology((1, 2))
    assert canonical_clause((3, 1, -2, 1)) == (1, -2, 3)


def test_solution_format_roundtrip():
    alpha = [False, True, False, True, True]
    text = format_solution(alpha, width=3)
    assert text.endswith("0\n")
    assert parse_solution(text, 4) == alpha
    with pytest.raises(ValueError):
        parse_solution("v 1 0\n", 2)  # incomplete


def test_eval_formula():
    f = Formula(2, [(1,), (-2,)])
    assert eval_formula(f, [False, True, False])
    assert not eval_formula(f, [False, True, True])
