"""Clause polynomials: dense coefficient vectors and scalar evaluations.

The coefficient of ``x**t`` records whether assignment ``t`` satisfies the
clause, where bit ``i`` of ``t`` is the value of ``x_i`` (x0 is the least
significant bit).  The dense form has ``2**V`` coefficients and is only used
as ground truth; the scalar form evaluates the same polynomial at a field
point in O(V) multiplications.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import FieldElement
from .formula import Clause

DENSE_CAP = 24


class DenseCapExceeded(ValueError):
    pass


def _check_cap(num_vars: int, cap: int = DENSE_CAP) -> None:
    if num_vars > cap:
        raise DenseCapExceeded(f"dense polynomials are capped at V={cap}, got V={num_vars}")


@dataclass(frozen=True, eq=False)
class DensePoly:
    """``coeffs[t]`` is the coefficient of ``x**t``; reduced mod ``p`` when set."""

    coeffs: np.ndarray
    p: int | None = None

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64)
        if self.p is not None:
            c = c % self.p
        size = len(c)
        if size == 0 or size & (size - 1):
            raise ValueError(f"coefficient count must be a power of two, got {size}")
        object.__setattr__(self, "coeffs", c)

    @property
    def num_vars(self) -> int:
        return len(self.coeffs).bit_length() - 1

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, DensePoly):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.coeffs, other.coeffs)

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def is_indicator(self) -> bool:
        return bool(np.all((self.coeffs == 0) | (self.coeffs == 1)))

    def support(self) -> list[int]:
        return [int(t) for t in np.flatnonzero(self.coeffs)]

    def __repr__(self):
        body = self.tolist() if len(self) <= 32 else f"<{len(self)} coeffs>"
        return f"DensePoly(V={self.num_vars}, {body}, p={self.p})"


@dataclass(frozen=True)
class ScalarEval:
    """A polynomial evaluated at ``base_point ** (2 ** doubling)``."""

    value: FieldElement
    base_point: FieldElement
    doubling: int = 0

    @property
    def point(self) -> FieldElement:
        return self.base_point ** (1 << self.doubling)


# -- dense construction ------------------------------------------------------

def _times_binomial(coeffs: np.ndarray, shift: int) -> np.ndarray:
    """Multiply by ``(1 + x**shift)``, growing the vector to fit."""
    out = np.zeros(len(coeffs) + shift, dtype=np.int64)
    out[: len(coeffs)] += coeffs
    out[shift:] += coeffs
    return out


def _monomial_times(coeffs: np.ndarray, shift: int) -> np.ndarray:
    return np.concatenate([np.zeros(shift, dtype=np.int64), coeffs])


def _fit(coeffs: np.ndarray, size: int) -> np.ndarray:
    out = np.zeros(size, dtype=np.int64)
    out[: len(coeffs)] = coeffs[:size]
    if np.any(coeffs[size:]):
        raise AssertionError("polynomial degree exceeds the assignment space")
    return out


def var_poly(m: int, num_vars: int, negated: bool = False) -> DensePoly:
    """Single-variable clause polynomial from its factored product form."""
    if not 0 <= m < num_vars:
        raise ValueError(f"variable {m} out of range for V={num_vars}")
    _check_cap(num_vars)
    acc = np.ones(1, dtype=np.int64)
    for k in range(num_vars):
        if k == m:
            if not negated:
                acc = _monomial_times(acc, 1 << k)
        else:
            acc = _times_binomial(acc, 1 << k)
    return DensePoly(_fit(acc, 1 << num_vars))


def ones_poly(num_vars: int, p: int | None = None) -> DensePoly:
    """The function of ones, built as the product of ``(1 + x**(2**k))``."""
    _check_cap(num_vars)
    acc = np.ones(1, dtype=np.int64)
    for k in range(num_vars):
        acc = _times_binomial(acc, 1 << k)
    return DensePoly(acc, p)


def clause_poly(c: Clause, num_vars: int) -> DensePoly:
    """Dense clause polynomial via the ascending accumulation loop.

    After step ``h`` the running result covers the ``2**(h+1)`` assignments of
    ``x0..xh``.  A positive literal adds ``g(x_h)``, a negated one shifts by
    ``x**(2**h)`` and adds the prefix of ones, an absent variable multiplies
    by ``(1 + x**(2**h))``.
    """
    if c.literals and c.literals[-1].var >= num_vars:
        raise ValueError(f"clause {c} does not fit in V={num_vars}")
    _check_cap(num_vars)
    if c.tautology:
        return ones_poly(num_vars)
    polarity = {lit.var: lit.negated for lit in c.literals}
    result = np.zeros(1, dtype=np.int64)
    prefix_ones = np.ones(1, dtype=np.int64)
    for h in range(num_vars):
        half = 1 << h
        if h not in polarity:
            result = _times_binomial(result, half)
        elif polarity[h]:
            result = _monomial_times(result, half)
            result[:half] += prefix_ones
        else:
            g = _monomial_times(prefix_ones, half)
            result = _fit(result, 2 * half) + g
        prefix_ones = _times_binomial(prefix_ones, half)
    return DensePoly(_fit(result, 1 << num_vars))


def formula_poly(clauses: Sequence[Clause], num_vars: int) -> DensePoly:
    """Indicator of the conjunction, as the Hadamard product of its clauses."""
    acc = np.ones(1 << num_vars, dtype=np.int64)
    for c in clauses:
        acc = acc * clause_poly(c, num_vars).coeffs
    return DensePoly(acc)


# -- transforms --------------------------------------------------------------

def premult_transform(f: DensePoly, a: FieldElement) -> DensePoly:
    """``a*f + (ones - f)``: coefficient 1 becomes ``a``, 0 becomes 1."""
    if not f.is_indicator():
        raise ValueError("pre-multiplication needs a 0/1 polynomial")
    ones = ones_poly(f.num_vars).coeffs
    return DensePoly(a.residue * f.coeffs + (ones - f.coeffs), a.modulus)


def preadd_transform(f: DensePoly) -> DensePoly:
    """Double every power of x: the result at ``x`` equals ``f`` at ``x**2``."""
    out = np.zeros(2 * len(f), dtype=np.int64)
    out[::2] = f.coeffs
    return DensePoly(out, f.p)


# -- products ----------------------------------------------------------------

def _same_size(f: DensePoly, g: DensePoly) -> int | None:
    if len(f) != len(g):
        raise ValueError(f"size mismatch: {len(f)} vs {len(g)} coefficients")
    if f.p is not None and g.p is not None and f.p != g.p:
        raise ValueError(f"modulus mismatch: {f.p} vs {g.p}")
    return f.p if f.p is not None else g.p


def poly_mul(f: DensePoly, g: DensePoly) -> DensePoly:
    """Schoolbook product, padded to ``2 * len(f)`` coefficients."""
    p = _same_size(f, g)
    size = len(f)
    out = np.zeros(2 * size, dtype=np.int64)
    for i in np.flatnonzero(f.coeffs):
        out[i: i + size] += int(f.coeffs[i]) * g.coeffs
        if p is not None:
            out %= p
    return DensePoly(out, p)


def hadamard_diag(f: DensePoly, g: DensePoly) -> DensePoly:
    """Diagonal of the product grid: ``f[t]*g[t]`` placed at ``x**(2t)``."""
    p = _same_size(f, g)
    out = np.zeros(2 * len(f), dtype=np.int64)
    prod = f.coeffs * g.coeffs
    out[::2] = prod % p if p is not None else prod
    return DensePoly(out, p)


# -- evaluation --------------------------------------------------------------

def power_table(y: int, size: int, p: int) -> np.ndarray:
    """``[y**0, y**1, ..., y**(size-1)] mod p`` for a power-of-two ``size``."""
    out = np.ones(1, dtype=np.int64)
    step = y % p
    while len(out) < size:
        out = np.concatenate([out, out * step % p])
        step = step * step % p
    return out[:size]


def poly_eval(f: DensePoly, x: FieldElement) -> FieldElement:
    p = x.modulus
    coeffs = f.coeffs % p
    terms = coeffs * power_table(x.residue, len(f), p) % p
    return FieldElement(int(terms.sum() % p), p)


def clause_value(c: Clause, num_vars: int, y: int, p: int) -> int:
    """Scalar run of the construction loop at the point ``y`` (ints mod p)."""
    if c.tautology:
        return ones_value(num_vars, y, p)
    polarity = {lit.var: lit.negated for lit in c.literals}
    result, prefix, pw = 0, 1, y % p
    for h in range(num_vars):
        neg = polarity.get(h)
        if neg is None:
            result = result * (1 + pw) % p
        elif neg:
            result = (result * pw + prefix) % p
        else:
            result = (result + prefix * pw) % p
        prefix = prefix * (1 + pw) % p
        pw = pw * pw % p
    return result


def ones_value(num_vars: int, y: int, p: int) -> int:
    acc, pw = 1, y % p
    for _ in range(num_vars):
        acc = acc * (1 + pw) % p
        pw = pw * pw % p
    return acc


def eval_clause_at(c: Clause, num_vars: int, x: FieldElement, doubling: int = 0) -> ScalarEval:
    if c.literals and c.literals[-1].var >= num_vars:
        raise ValueError(f"clause {c} does not fit in V={num_vars}")
    y = pow(x.residue, 1 << doubling, x.modulus)
    return ScalarEval(FieldElement(clause_value(c, num_vars, y, x.modulus), x.modulus),
                      x, doubling)


def eval_ones_at(num_vars: int, x: FieldElement, doubling: int = 0) -> ScalarEval:
    y = pow(x.residue, 1 << doubling, x.modulus)
    return ScalarEval(FieldElement(ones_value(num_vars, y, x.modulus), x.modulus), x, doubling)


# -- pattern tables ----------------------------------------------------------

def pattern_table(clauses: Sequence[Clause], num_vars: int, header: bool = True) -> str:
    """TSV with one row per assignment and one 0/1 column per clause."""
    cols = [clause_poly(c, num_vars).coeffs for c in clauses]
    lines = []
    if header:
        lines.append("\t".join(["t"] + [str(c) for c in clauses]))
    for t in range(1 << num_vars):
        lines.append("\t".join([str(t)] + [str(int(col[t])) for col in cols]))
    return "\n".join(lines) + "\n"
