"""Ground truth by brute force.

Nothing here is clever on purpose: satisfaction is enumerated assignment by
assignment and the off-diagonal class masses come from an explicit loop over
ordered index pairs.  Everything else in the package is checked against it.
"""

from __future__ import annotations

import itertools

import numpy as np

from .clausepoly import DENSE_CAP, DenseCapExceeded, DensePoly
from .field import FieldElement
from .formula import Formula


class CapExceeded(DenseCapExceeded):
    pass


def _require_cap(num_vars: int, cap: int) -> None:
    if num_vars > cap:
        raise CapExceeded(f"enumeration over V={num_vars} exceeds cap {cap}")


def satisfaction_matrix(f: Formula, cap: int = DENSE_CAP) -> np.ndarray:
    """Boolean array ``[clause, t]``: does assignment ``t`` satisfy the clause."""
    _require_cap(f.num_vars, cap)
    t = np.arange(1 << f.num_vars, dtype=np.int64)
    rows = []
    for c in f.clauses:
        if c.tautology:
            rows.append(np.ones_like(t, dtype=bool))
            continue
        sat = np.zeros_like(t, dtype=bool)
        for lit in c.literals:
            bit = ((t >> lit.var) & 1).astype(bool)
            sat |= ~bit if lit.negated else bit
        rows.append(sat)
    if not rows:
        return np.zeros((0, len(t)), dtype=bool)
    return np.vstack(rows)


def enumerate_profile(f: Formula, cap: int = DENSE_CAP) -> list[int]:
    """``counts[s]`` = number of assignments satisfying exactly ``s`` clauses."""
    sat = satisfaction_matrix(f, cap)
    per_assignment = sat.sum(axis=0) if f.n else np.zeros(1 << f.num_vars, dtype=np.int64)
    return [int(c) for c in np.bincount(per_assignment, minlength=f.n + 1)]


def model_count(f: Formula, cap: int = DENSE_CAP) -> int:
    return enumerate_profile(f, cap)[f.n]


def models(f: Formula, cap: int = DENSE_CAP) -> list[tuple[bool, ...]]:
    _require_cap(f.num_vars, cap)
    out = []
    for values in itertools.product((False, True), repeat=f.num_vars):
        assignment = values[::-1]  # x0 varies fastest, matching index order
        if all(c.satisfied_by(assignment) for c in f.clauses):
            out.append(assignment)
    return out


def is_satisfiable(f: Formula, cap: int = DENSE_CAP) -> bool:
    _require_cap(f.num_vars, cap)
    return any(all(c.satisfied_by(values) for c in f.clauses)
               for values in itertools.product((False, True), repeat=f.num_vars))


def _powers(x: FieldElement, count: int) -> list[int]:
    out, acc = [], 1
    for _ in range(count):
        out.append(acc)
        acc = acc * x.residue % x.modulus
    return out


def exact_b_values(fA: DensePoly, fB: DensePoly, x: FieldElement,
                   cap: int = DENSE_CAP) -> tuple[FieldElement, FieldElement, FieldElement]:
    """``b_s`` = sum of ``x**(i+j)`` over ordered pairs ``i != j`` of class ``s``."""
    if len(fA) != len(fB):
        raise ValueError("polynomials over different variable counts")
    _require_cap(fA.num_vars, cap)
    p = x.modulus
    size = len(fA)
    pw = np.array(_powers(x, 2 * size), dtype=np.int64)
    a = fA.coeffs.astype(np.int64)
    b = fB.coeffs.astype(np.int64)
    totals = [0, 0, 0]
    j = np.arange(size)
    for i in range(size):
        cls = a[i] + b
        terms = pw[i + j]
        off = j != i
        for s in range(3):
            totals[s] += int(terms[off & (cls == s)].sum())
    return tuple(FieldElement(v, p) for v in totals)


def exact_diag_value(fA: DensePoly, fB: DensePoly, x: FieldElement) -> FieldElement:
    p = x.modulus
    pw = _powers(x, 2 * len(fA))
    total = 0
    for t in range(len(fA)):
        if fA.coeffs[t] and fB.coeffs[t]:
            total += int(fA.coeffs[t]) * int(fB.coeffs[t]) * pw[2 * t]
    return FieldElement(total, p)


def scan_marker_coefficient(a0: FieldElement, a1: FieldElement,
                            c1: int = 1) -> FieldElement | None:
    """Table scan over ``c0 = 0..p-1`` for cancelling second differences."""
    p = a0.modulus
    target = (-(c1 * (a1.residue - 1) ** 2)) % p
    for c0 in range(p):
        row = [c0 % p, c0 * a0.residue % p, c0 * a0.residue ** 2 % p]
        if ((row[2] - row[1]) - (row[1] - row[0])) % p == target:
            return FieldElement(c0, p)
    return None
