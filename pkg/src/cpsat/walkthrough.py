"""Replay of the worked two-clause example: p = 17, x = 3, (x0) & (~x0 | x1)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .clausepoly import eval_clause_at, eval_ones_at
from .engine import PrimePolicy, choose_prime, evaluate_tree, pad_formula
from .field import GF
from .formula import Clause, Formula
from .oracle import scan_marker_coefficient
from .twoclause import match_marker_pair, second_difference


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    actual: object
    source: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _marker(p: int, a0: int, a1: int):
    F = GF(p)
    return match_marker_pair(F(a0), F(a1))


def _sequence(p: int, a0: int, a1: int) -> tuple[int, ...]:
    mp = _marker(p, a0, a1)
    return tuple((mp.c0 * mp.a0 ** s + mp.c1 * mp.a1 ** s).residue for s in range(3))


def _signed(v: int, p: int) -> int:
    return v - p if v > p // 2 else v


def _computations(mod_prime: int = 7) -> dict[str, tuple[Callable[[], object], object, str]]:
    F = GF(17)
    x = F(3)
    V = 2
    pos_x0 = Clause.of([1])
    neg_x0_or_x1 = Clause.of([-1, 2])
    instance = Formula(V, [pos_x0, neg_x0_or_x1])

    table: dict[str, tuple[Callable[[], object], object, str]] = {
        "prime for n=2": (lambda: int(choose_prime(2, 2, PrimePolicy.WALKTHROUGH)), 17, "worked"),
        "f(x0) at 3 mod 17": (lambda: eval_clause_at(pos_x0, V, x).value.residue, 13, "worked"),
        "g(x1) at 3 mod 17": (lambda: eval_clause_at(Clause.of([2]), V, x).value.residue, 2, "worked"),
        "f(~x0|x1) at 3 mod 17": (lambda: eval_clause_at(neg_x0_or_x1, V, x).value.residue, 3, "worked"),
        "f(1) at 3 mod 17": (lambda: eval_ones_at(V, x).value.residue, 6, "worked"),
        "second difference c=13 a=2 mod 17": (lambda: second_difference(F(13), F(2)).residue, 13, "worked"),
    }
    for a1, c0, d, e, seq in ((3, 13, 14, -2, (14, 12, 10)),
                              (4, 8, 9, -6, (9, 3, 14)),
                              (5, 1, 2, 5, (2, 7, 12))):
        table[f"c0 for a1={a1} mod 17"] = (lambda a1=a1: _marker(17, 2, a1).c0.residue, c0, "worked")
        table[f"table scan c0 for a1={a1} mod 17"] = (
            lambda a1=a1: scan_marker_coefficient(F(2), F(a1)).residue, c0, "worked")
        table[f"(d, e) for a1={a1} mod 17"] = (
            lambda a1=a1: (lambda m: (m.d.residue, _signed(m.e.residue, 17)))(_marker(17, 2, a1)),
            (d, e), "worked")
        table[f"combined sequence for a1={a1} mod 17"] = (
            lambda a1=a1: _sequence(17, 2, a1), seq, "worked")
    table.update({
        f"second difference c=1 a=3 mod {mod_prime}": (
            lambda: second_difference(GF(mod_prime)(1), GF(mod_prime)(3)).residue, 4, "worked"),
        f"c0 for a0=2 a1=3 mod {mod_prime}": (lambda: _marker(mod_prime, 2, 3).c0.residue, 3, "worked"),
        f"combined sequence mod {mod_prime}": (lambda: _sequence(mod_prime, 2, 3), (4, 2, 0), "worked"),
        f"weights (d, d+e, d+2e) mod {mod_prime}": (
            lambda: tuple(w.residue for w in _marker(mod_prime, 2, 3).weights()), (4, 2, 0), "worked"),
        "hybrid diagonal f(A&B)(x^2) mod 17": (
            lambda: evaluate_tree(pad_formula(instance)[0], x).residue, 15, "derived"),
    })
    return table


def run_walkthrough(expected: Mapping[str, object] | None = None, mod_prime: int = 7) -> list[Check]:
    """Evaluate every identity; ``expected`` overrides individual expectations."""
    checks = []
    for name, (compute, want, source) in _computations(mod_prime).items():
        if expected and name in expected:
            want = expected[name]
            if isinstance(want, list):
                want = tuple(want)
        checks.append(Check(name, want, compute(), source))
    return checks
