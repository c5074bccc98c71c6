"""CNF formula representation, DIMACS I/O, and the resolution rule.

Literals follow the DIMACS convention used throughout this package: a
literal is a signed integer, `v` for the positive literal of variable v
(1-based) and `-v` for its negation.  Clauses are stored canonically as
tuples of literals sorted by variable index, which makes deduplication
and set operations exact.  Assignments are lists of booleans of length
n+1 with index 0 unused, so `assignment[v]` is the value of variable v.
"""

from __future__ import annotations

import warnings
from typing import Iterable, Iterator, Sequence

Clause = tuple[int, ...]
Assignment = list[bool]


class DimacsError(ValueError):
    """Raised on malformed DIMACS input."""


class DimacsWarning(UserWarning):
    """Raised for recoverable DIMACS oddities (e.g. header count mismatch)."""


def neg(lit: int) -> int:
    """Complement of a literal."""
    return -lit


def variable(lit: int) -> int:
    """Variable index of a literal."""
    return abs(lit)


def canonical_clause(lits: Iterable[int]) -> Clause:
    """Deduplicate and sort literals by variable index (sign breaks ties).

    Tautological clauses are preserved as-is (both polarities kept); it is
    the caller's job to check `is_tautology` where tautologies matter.
    """
    return tuple(sorted(set(lits), key=lambda l: (abs(l), l)))


def is_tautology(clause: Iterable[int]) -> bool:
    """True iff the clause contains a complementary literal pair."""
    seen = set(clause)
    return any(-l in seen for l in seen)


class Formula:
    """Immutable clause database with a literal occurrence index.

    Shared by every solver in the package; safe to share across threads
    and to pickle into worker processes.
    """

    __slots__ = ("num_vars", "clauses", "tautology_ids", "_occ", "_max_width")

    def __init__(self, num_vars: int, clauses: Iterable[Sequence[int]], normalize: bool = True):
        if num_vars < 0:
            raise ValueError(f"negative variable count: {num_vars}")
        self.num_vars = num_vars
        if normalize:
            self.clauses: tuple[Clause, ...] = tuple(canonical_clause(c) for c in clauses)
        else:
            self.clauses = tuple(tuple(c) for c in clauses)
        occ: dict[int, list[int]] = {}
        taut = []
        for cid, clause in enumerate(self.clauses):
            seen = set()
            for lit in clause:
                v = abs(lit)
                if v < 1 or v > num_vars:
                    raise ValueError(f"literal {lit} out of range 1..{num_vars} in clause {cid}")
                occ.setdefault(lit, []).append(cid)
                seen.add(lit)
            if any(-l in seen for l in seen):
                taut.append(cid)
        self.tautology_ids = frozenset(taut)
        self._occ = {lit: tuple(ids) for lit, ids in occ.items()}
        self._max_width = max((len(c) for c in self.clauses), default=0)

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    @property
    def max_width(self) -> int:
        """Maximum clause length (0 for an empty clause list)."""
        return self._max_width

    def occurrence(self, lit: int) -> tuple[int, ...]:
        """Ids of clauses containing `lit` (empty if it occurs nowhere)."""
        return self._occ.get(lit, ())

    def clause_set(self) -> frozenset[Clause]:
        return frozenset(self.clauses)

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __repr__(self) -> str:
        return f"Formula(n={self.num_vars}, m={self.num_clauses})"


def parse_dimacs(text: str | bytes) -> Formula:
    """Parse DIMACS CNF: `c` comments, one `p cnf n m` header, 0-terminated clauses.

    Clauses are normalized (duplicate literals dropped, sorted by variable);
    tautological clauses are retained and flagged in `Formula.tautology_ids`.
    A clause-count mismatch against the header is a `DimacsWarning`, not an
    error, and the actual count is used.  A `%` line ends the clause section
    (SATLIB convention).
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    header = None
    clauses: list[list[int]] = []
    current: list[int] = []
    ended = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            ended = True
            break
        if line.startswith("p"):
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause data before header")
        try:
            tokens = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsError(f"line {lineno}: non-integer token in {line!r}") from None
        for tok in tokens:
            if tok == 0:
                clauses.append(current)
                current = []
            else:
                if abs(tok) > header[0]:
                    raise DimacsError(f"line {lineno}: literal {tok} exceeds declared {header[0]} variables")
                current.append(tok)
    if header is None:
        raise DimacsError("missing `p cnf` header")
    if current and not ended:
        raise DimacsError("last clause not terminated by 0")
    n, declared_m = header
    if len(clauses) != declared_m:
        warnings.warn(
            f"header declares {declared_m} clauses but {len(clauses)} parsed; using actual count",
            DimacsWarning,
            stacklevel=2,
        )
    return Formula(n, clauses)


def emit_dimacs(formula: Formula, comments: Sequence[str] = ()) -> str:
    """Serialize to DIMACS CNF.  Inverse of `parse_dimacs` up to clause-set equality."""
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def eval_clause(clause: Sequence[int], alpha: Assignment) -> bool:
    """True iff at least one literal is satisfied under `alpha`."""
    for lit in clause:
        if alpha[lit] if lit > 0 else not alpha[-lit]:
            return True
    return False


def eval_formula(formula: Formula, alpha: Assignment) -> bool:
    """True iff every clause is satisfied under `alpha`."""
    return all(eval_clause(c, alpha) for c in formula.clauses)


def count_satisfied_literals(clause: Sequence[int], alpha: Assignment) -> int:
    """Number of literals of `clause` satisfied under `alpha` (0..len)."""
    count = 0
    for lit in clause:
        if alpha[lit] if lit > 0 else not alpha[-lit]:
            count += 1
    return count


def resolve(a: Sequence[int], b: Sequence[int], pivot: int) -> Clause | None:
    """Resolvent of `a` and `b` on variable `pivot`, or None if tautological.

    `pivot` must occur positively in exactly one clause and negatively in
    the other; otherwise ValueError.  The resolvent is the deduplicated
    union of the remaining literals in canonical order; the empty clause
    is returned as `()`.
    """
    if pivot in a and -pivot in b:
        pos, negc = a, b
    elif pivot in b and -pivot in a:
        pos, negc = b, a
    else:
        raise ValueError(f"pivot {pivot} does not clash between clauses {a!r} and {b!r}")
    if -pivot in pos or pivot in negc:
        raise ValueError(f"pivot {pivot} occurs in both polarities within one clause")
    merged = {l for l in pos if l != pivot}
    merged.update(l for l in negc if l != -pivot)
    if any(-l in merged for l in merged):
        return None
    return canonical_clause(merged)


def max_clause_width(formula: Formula) -> int:
    """Maximum clause length; drives strategy dispatch.  Errors on empty formulas."""
    if formula.num_clauses == 0:
        raise ValueError("max_clause_width of a formula with no clauses")
    return formula.max_width


def format_solution(alpha: Assignment, width: int = 20) -> str:
    """SAT-competition `v` lines for a complete assignment, 0-terminated."""
    lits = [v if alpha[v] else -v for v in range(1, len(alpha))]
    lines = []
    for i in range(0, len(lits), width):
        chunk = lits[i : i + width]
        lines.append("v " + " ".join(str(l) for l in chunk))
    if lines:
        lines[-1] += " 0"
    else:
        lines.append("v 0")
    return "\n".join(lines) + "\n"


def parse_clause_lines(text: str) -> list[Clause]:
    """Parse 0-terminated clause lines, tolerating `c` comments and an
    optional `p cnf` header; the lenient reader for mined-clause files."""
    clauses: list[Clause] = []
    current: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line[0] in "cp%":
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(canonical_clause(current))
                current = []
            else:
                current.append(lit)
    if current:
        raise DimacsError("last clause not terminated by 0")
    return clauses


def parse_solution(text: str, num_vars: int | None = None) -> Assignment:
    """Parse `v <lit> ... 0` lines into a complete assignment.

    With `num_vars` omitted, the variable count is inferred from the
    largest index present.
    """
    lits = []
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("v"):
            continue
        lits.extend(int(tok) for tok in line[1:].split() if int(tok) != 0)
    if num_vars is None:
        num_vars = max((abs(l) for l in lits), default=0)
    alpha: Assignment = [False] * (num_vars + 1)
    seen = set()
    for lit in lits:
        v = abs(lit)
        if v > num_vars:
            raise ValueError(f"solution literal {lit} exceeds {num_vars} variables")
        alpha[v] = lit > 0
        seen.add(v)
    missing = set(range(1, num_vars + 1)) - seen
    if missing:
        raise ValueError(f"solution incomplete: variables {sorted(missing)[:5]}... unassigned")
    return alpha
