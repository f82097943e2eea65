"""Shared hypothesis strategies and small brute-force helpers."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from cpsat.field import is_prime
from cpsat.formula import Clause, Formula, Literal

SMALL_PRIMES = [p for p in range(17, 10_000) if is_prime(p)]


def primes(lo: int = 17, hi: int = 10_000):
    return st.sampled_from([p for p in SMALL_PRIMES if lo <= p <= hi])


@st.composite
def clauses(draw, num_vars: int, max_len: int = 3, allow_empty: bool = False):
    lo = 0 if allow_empty else 1
    vars_ = draw(st.lists(st.integers(0, num_vars - 1), min_size=lo,
                          max_size=min(max_len, num_vars), unique=True))
    pols = draw(st.lists(st.booleans(), min_size=len(vars_), max_size=len(vars_)))
    return Clause.of(Literal(v, n) for v, n in zip(vars_, pols))


@st.composite
def formulas(draw, max_vars: int = 4, max_clauses: int = 6, min_clauses: int = 0):
    V = draw(st.integers(1, max_vars))
    n = draw(st.integers(min_clauses, max_clauses))
    cs = draw(st.lists(clauses(V), min_size=n, max_size=n))
    return Formula(V, cs)


@st.composite
def clause_pairs(draw, max_vars: int = 8):
    V = draw(st.integers(1, max_vars))
    return V, draw(clauses(V, max_len=V)), draw(clauses(V, max_len=V))


def brute_indicator(c: Clause, num_vars: int) -> list[int]:
    """Per-assignment satisfaction, written out bit by bit."""
    out = []
    for t in range(1 << num_vars):
        bits = [(t >> i) & 1 for i in range(num_vars)]
        out.append(int(c.tautology or any(bits[l.var] != l.negated for l in c.literals)))
    return out


def random_clause(rng: random.Random, num_vars: int, max_len: int = 3) -> Clause:
    k = rng.randint(1, min(max_len, num_vars))
    return Clause.of(Literal(v, rng.random() < 0.5) for v in rng.sample(range(num_vars), k))
