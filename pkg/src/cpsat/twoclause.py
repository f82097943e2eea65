"""The two-clause combiner.

Two clauses A and B are known only through scalar evaluations at a point
``x`` (multiplication role) and at ``x**2`` (addition role).  Pre-multiplying
with a marker ``a`` turns the product ``H_A(a) * H_B(a)`` into a sum of
``a**s * x**(i+j)`` where ``s`` counts how many of the two clauses the pair
``(i, j)`` satisfies.  Two markers weighted by matched coefficients make the
diagonal (``i == j``) contributions affine in ``s``, so one addition-role
term cancels them exactly and only the off-diagonal class masses
``b0, b1, b2`` remain.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .field import FieldElement


class InvalidMarker(ValueError):
    pass


class InconsistentSystem(ArithmeticError):
    """Both elimination equations should agree on ``b1 + 2*b2``; they did not."""


class Status(enum.Enum):
    UNIQUE = "unique"
    SINGULAR = "singular"


@dataclass(frozen=True)
class MarkerPair:
    a0: FieldElement
    c0: FieldElement
    a1: FieldElement
    c1: FieldElement
    d: FieldElement
    e: FieldElement

    @property
    def modulus(self) -> int:
        return self.a0.modulus

    def weight(self, s: int) -> FieldElement:
        return self.d + self.e * s

    def weights(self) -> tuple[FieldElement, FieldElement, FieldElement]:
        return self.weight(0), self.weight(1), self.weight(2)


@dataclass(frozen=True)
class PairEquation:
    """``rhs == w[0]*b0 + w[1]*b1 + w[2]*b2``."""

    w: tuple[FieldElement, FieldElement, FieldElement]
    rhs: FieldElement
    marker: MarkerPair | None = None

    def reduced_row(self, total: FieldElement) -> tuple[FieldElement, FieldElement, FieldElement]:
        """Row over ``(b0, b1)`` after substituting ``b2 = T - b0 - b1``."""
        w0, w1, w2 = self.w
        return w0 - w2, w1 - w2, self.rhs - w2 * total


@dataclass(frozen=True)
class SatisfactionSplit:
    status: Status
    total: FieldElement
    u: FieldElement  # b1 + 2*b2, fixed by either equation
    determinant: FieldElement
    b0: FieldElement | None = None
    b1: FieldElement | None = None
    b2: FieldElement | None = None

    @property
    def singular(self) -> bool:
        return self.status is Status.SINGULAR


def second_difference(c: FieldElement, a: FieldElement) -> FieldElement:
    """Second difference of ``c, c*a, c*a**2``, i.e. ``c*(a-1)**2``."""
    first = c * a - c
    second = c * a * a - c * a
    return second - first


def match_marker_pair(a0: FieldElement, a1: FieldElement) -> MarkerPair:
    """Pick ``c0`` (with ``c1 = 1``) so the two second differences cancel."""
    if a0.modulus != a1.modulus:
        raise InvalidMarker("markers from different fields")
    for a in (a0, a1):
        if a.residue in (0, 1):
            raise InvalidMarker(f"marker {a.residue} is degenerate")
    if a0 == a1:
        raise InvalidMarker("markers must differ")
    one = FieldElement(1, a0.modulus)
    c1 = one
    c0 = -(second_difference(c1, a1) * second_difference(one, a0).inverse())
    d = c0 + c1
    e = (c0 * a0 + c1 * a1) - d
    if e.is_zero():
        raise InvalidMarker(f"markers ({a0.residue}, {a1.residue}) give a zero increment")
    return MarkerPair(a0, c0, a1, c1, d, e)


def marker_schedule(p: int, count: int = 2, a0: int = 2) -> list[MarkerPair]:
    """First ``count`` usable marker pairs ``(a0, 3), (a0, 4), ...``.

    Values that repeat an earlier ``(d, e)`` are skipped so the pairs give
    distinct equations.
    """
    base = FieldElement(a0, p)
    pairs: list[MarkerPair] = []
    seen = set()
    for a1 in range(a0 + 1, p):
        try:
            mp = match_marker_pair(base, FieldElement(a1, p))
        except InvalidMarker:
            continue
        key = (mp.d.residue, mp.e.residue)
        if key in seen:
            continue
        seen.add(key)
        pairs.append(mp)
        if len(pairs) == count:
            return pairs
    raise InvalidMarker(f"GF({p}) has fewer than {count} usable marker pairs")


def premultiplied(a: FieldElement, f_x: FieldElement, ones_x: FieldElement) -> FieldElement:
    """Scalar form of ``a*f + (ones - f)``."""
    return a * f_x + (ones_x - f_x)


def eliminated_evaluation(fA_x: FieldElement, fB_x: FieldElement,
                          fA_x2: FieldElement, fB_x2: FieldElement,
                          ones_x: FieldElement, ones_x2: FieldElement,
                          mp: MarkerPair) -> PairEquation:
    moduli = {v.modulus for v in (fA_x, fB_x, fA_x2, fB_x2, ones_x, ones_x2)}
    if moduli != {mp.modulus}:
        raise ValueError(f"modulus mismatch among inputs: {sorted(moduli | {mp.modulus})}")
    products = FieldElement(0, mp.modulus)
    for a, c in ((mp.a0, mp.c0), (mp.a1, mp.c1)):
        products = products + c * premultiplied(a, fA_x, ones_x) * premultiplied(a, fB_x, ones_x)
    addition = mp.d * ones_x2 + mp.e * (fA_x2 + fB_x2)
    return PairEquation(mp.weights(), products - addition, mp)


def off_diagonal_total(ones_x: FieldElement, ones_x2: FieldElement) -> FieldElement:
    return ones_x * ones_x - ones_x2


def solve_linear(matrix: Sequence[Sequence[FieldElement]],
                 rhs: Sequence[FieldElement]) -> list[FieldElement] | None:
    """Gauss-Jordan elimination over GF(p); ``None`` when the matrix is singular."""
    n = len(matrix)
    rows = [list(r) + [b] for r, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if pivot is None:
            return None
        rows[col], rows[pivot] = rows[pivot], rows[col]
        scale = rows[col][col].inverse()
        rows[col] = [v * scale for v in rows[col]]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                factor = rows[r][col]
                rows[r] = [v - factor * pv for v, pv in zip(rows[r], rows[col])]
    return [row[n] for row in rows]


def solve_two_clause(eqs: Sequence[PairEquation], total: FieldElement,
                     num_vars: int | None = None) -> SatisfactionSplit:
    """Solve for the class masses with ``b2`` eliminated through the total.

    The reduced rows are ``(w0 - w2, w1 - w2) = -e * (2, 1)`` for every marker
    pair, so in practice the 2x2 system is singular and only
    ``b1 + 2*b2 = (E - d*T) / e`` is determined.
    """
    if len(eqs) != 2:
        raise ValueError("exactly two equations are required")
    first, second = eqs
    zero = FieldElement(0, total.modulus)
    if num_vars == 0:
        # a single assignment has no off-diagonal pairs at all
        return SatisfactionSplit(Status.UNIQUE, total, zero, zero, zero, zero, zero)
    if (first.w[0], first.w[1]) == (second.w[0], second.w[1]):
        raise ValueError("equations must come from marker pairs with distinct (d, e)")

    r1, r2 = first.reduced_row(total), second.reduced_row(total)
    det = r1[0] * r2[1] - r1[1] * r2[0]
    solution = solve_linear([r1[:2], r2[:2]], [r1[2], r2[2]])
    if solution is not None:
        b0, b1 = solution
        b2 = total - b0 - b1
        return SatisfactionSplit(Status.UNIQUE, total, b1 + b2 * 2, det, b0, b1, b2)

    aggregates = []
    for eq in eqs:
        d, e = eq.w[0], eq.w[1] - eq.w[0]
        aggregates.append((eq.rhs - d * total) * e.inverse())
    if aggregates[0] != aggregates[1]:
        raise InconsistentSystem(
            f"equations disagree on b1 + 2*b2: {aggregates[0].residue} vs {aggregates[1].residue}")
    return SatisfactionSplit(Status.SINGULAR, total, aggregates[0], det)


def diagonal_value(fA_x: FieldElement, fB_x: FieldElement, b2: FieldElement) -> FieldElement:
    """Diagonal of the plain product: the conjunction polynomial at ``x**2``."""
    return fA_x * fB_x - b2


@dataclass
class CombinerResult:
    split: SatisfactionSplit
    equations: tuple[PairEquation, PairEquation]
    diagonal: FieldElement | None = None
    notes: list[str] = field(default_factory=list)


def combine(fA_x: FieldElement, fB_x: FieldElement, fA_x2: FieldElement, fB_x2: FieldElement,
            ones_x: FieldElement, ones_x2: FieldElement,
            markers: Sequence[MarkerPair], num_vars: int | None = None) -> CombinerResult:
    """Run one two-clause step up to the linear solve.

    ``diagonal`` is filled in only when the solve is unique; otherwise the
    caller decides where ``b2`` comes from.
    """
    eqs = tuple(eliminated_evaluation(fA_x, fB_x, fA_x2, fB_x2, ones_x, ones_x2, mp)
                for mp in markers[:2])
    split = solve_two_clause(eqs, off_diagonal_total(ones_x, ones_x2), num_vars)
    result = CombinerResult(split, eqs)
    if split.status is Status.UNIQUE:
        result.diagonal = diagonal_value(fA_x, fB_x, split.b2)
    return result
