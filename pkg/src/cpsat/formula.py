"""CNF data model, DIMACS I/O, unit simplification and random instances.

Variables are 0-based internally (``x0, x1, ...``); DIMACS is 1-based and the
shift lives only in :func:`parse_dimacs` / :func:`serialize_dimacs`.
"""

from __future__ import annotations

import io
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def satisfied_by(self, value: bool) -> bool:
        return value != self.negated

    def to_dimacs(self) -> int:
        return -(self.var + 1) if self.negated else self.var + 1

    def __str__(self):
        return f"{'~' if self.negated else ''}x{self.var}"


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals, sorted by variable, one literal per variable.

    A clause mentioning both polarities of a variable collapses to a
    *tautology*: it keeps its remaining literals for display but is always
    satisfied.
    """

    literals: tuple[Literal, ...] = ()
    tautology: bool = False

    def __post_init__(self):
        vars_ = [lit.var for lit in self.literals]
        if any(b <= a for a, b in zip(vars_, vars_[1:])):
            raise ValueError("clause literals must have strictly increasing variables")

    @classmethod
    def of(cls, literals: Iterable[Literal | int]) -> "Clause":
        """Normalize an arbitrary literal collection.

        Ints are read as DIMACS-style signed 1-based literals.
        """
        by_var: dict[int, set[bool]] = {}
        for lit in literals:
            if isinstance(lit, int):
                if lit == 0:
                    raise ValueError("0 is not a literal")
                lit = Literal(abs(lit) - 1, lit < 0)
            by_var.setdefault(lit.var, set()).add(lit.negated)
        taut = any(len(pols) == 2 for pols in by_var.values())
        lits = tuple(Literal(v, next(iter(pols)))
                     for v, pols in sorted(by_var.items()) if len(pols) == 1)
        return cls(lits, taut)

    @classmethod
    def true(cls) -> "Clause":
        return cls((), True)

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(lit.var for lit in self.literals)

    def is_empty(self) -> bool:
        return not self.literals and not self.tautology

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        if self.tautology:
            return True
        return any(lit.satisfied_by(assignment[lit.var]) for lit in self.literals)

    def satisfied_by_index(self, t: int) -> bool:
        """Truth value for assignment index ``t`` (bit i of t is x_i)."""
        if self.tautology:
            return True
        return any(((t >> lit.var) & 1) != lit.negated for lit in self.literals)

    def __str__(self):
        if self.tautology:
            return "TRUE"
        if not self.literals:
            return "FALSE"
        return "|".join(str(lit) for lit in self.literals)


@dataclass(frozen=True)
class Formula:
    num_vars: int
    clauses: tuple[Clause, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.num_vars < 0:
            raise ValueError("variable count must be non-negative")
        for c in self.clauses:
            if c.literals and c.literals[-1].var >= self.num_vars:
                raise ValueError(f"clause {c} mentions a variable >= {self.num_vars}")

    @property
    def n(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.num_vars:
            raise ValueError("assignment length must equal the variable count")
        return all(c.satisfied_by(assignment) for c in self.clauses)

    def __str__(self):
        return " & ".join(f"({c})" for c in self.clauses) or "TRUE"


class Contradiction:
    """Result of simplifying a formula into an empty clause."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "CONTRADICTION"


CONTRADICTION = Contradiction()


def parse_dimacs(text: str | bytes | io.IOBase) -> Formula:
    if isinstance(text, bytes):
        text = text.decode()
    elif not isinstance(text, str):
        text = text.read()
        if isinstance(text, bytes):
            text = text.decode()

    num_vars = expected = None
    clauses: list[Clause] = []
    pending: list[int] = []
    pending_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break  # SATLIB trailer
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise ParseError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                num_vars, expected = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if num_vars < 0 or expected < 0:
                raise ParseError("negative counts in header", lineno)
            continue
        if num_vars is None:
            raise ParseError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                clauses.append(Clause.of(pending))
                pending, pending_line = [], None
                continue
            if abs(lit) > num_vars:
                raise ParseError(f"literal {lit} exceeds declared {num_vars} variables", lineno)
            pending.append(lit)
            pending_line = pending_line or lineno
    if num_vars is None:
        raise ParseError("missing 'p cnf' header")
    if pending:
        raise ParseError("clause not terminated by 0", pending_line)
    if len(clauses) != expected:
        raise ParseError(f"header declares {expected} clauses, found {len(clauses)}")
    return Formula(num_vars, clauses)


def serialize_dimacs(f: Formula) -> str:
    lines = [f"p cnf {f.num_vars} {f.n}"]
    for c in f.clauses:
        lits = [lit.to_dimacs() for lit in c.literals]
        if c.tautology:
            # re-expand through a variable the clause does not mention, so the
            # parser collapses it back to the same clause
            if f.num_vars == 0:
                raise ValueError("a tautology needs at least one variable to serialize")
            free = [w for w in range(f.num_vars) if w not in c.variables]
            w = free[0] if free else c.literals[0].var
            lits = [x for x in lits if abs(x) != w + 1] + [w + 1, -(w + 1)]
            lits.sort(key=lambda x: (abs(x), x))
        lines.append(" ".join(str(x) for x in lits + [0]))
    return "\n".join(lines) + "\n"


def assign_and_simplify(f: Formula, v: int, value: bool) -> Formula | Contradiction:
    """Fix ``x_v := value`` and drop it from the variable space.

    Satisfied clauses vanish, the falsified literal is removed elsewhere, and
    variables above ``v`` shift down by one.
    """
    if not 0 <= v < f.num_vars:
        raise IndexError(f"variable {v} out of range for {f.num_vars} variables")

    def shift(lit: Literal) -> Literal:
        return Literal(lit.var - 1, lit.negated) if lit.var > v else lit

    out = []
    for c in f.clauses:
        if c.tautology:
            out.append(Clause(tuple(shift(l) for l in c.literals if l.var != v), True))
            continue
        hit = next((l for l in c.literals if l.var == v), None)
        if hit is not None and hit.satisfied_by(value):
            continue
        rest = tuple(shift(l) for l in c.literals if l.var != v)
        if not rest:
            return CONTRADICTION
        out.append(Clause(rest))
    return Formula(f.num_vars - 1, out)


def random_ksat(num_vars: int, n: int, k: int, seed: int) -> Formula:
    if k > num_vars:
        raise ValueError(f"k={k} exceeds the {num_vars} available variables")
    if k < 1 or n < 0:
        raise ValueError("need k >= 1 and n >= 0")
    rng = random.Random(seed)
    clauses = []
    for _ in range(n):
        vars_ = rng.sample(range(num_vars), k)
        clauses.append(Clause.of(Literal(v, rng.random() < 0.5) for v in vars_))
    return Formula(num_vars, clauses)


def parse_clause_spec(spec: str, num_vars: int) -> Clause:
    """Parse the CLI grammar: ``x0|~x3|x5``."""
    lits = []
    for tok in spec.split("|"):
        tok = tok.strip()
        neg = tok.startswith("~")
        name = tok[1:] if neg else tok
        if not name.startswith("x") or not name[1:].isdigit():
            raise ValueError(f"bad literal {tok!r} in clause {spec!r}")
        var = int(name[1:])
        if var >= num_vars:
            raise ValueError(f"variable x{var} out of range for {num_vars} variables")
        lits.append(Literal(var, neg))
    return Clause.of(lits)
