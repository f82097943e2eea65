"""The n-clause procedure: a tree of two-clause combiners, run per prime.

Every evaluation is taken at a point ``x**(2**k)``.  A node covering clauses
A|B at doubling level ``k`` needs its halves at level ``k-1`` for the
multiplication role and at level ``k`` for the addition role, and returns the
conjunction polynomial of the whole range at level ``k``.  A tree of ``2**l``
leaves therefore consumes exactly ``4**l`` leaf evaluations.

``Mode.PAPER`` runs only the scalar pipeline and stops where the linear
system is singular.  ``Mode.HYBRID`` fills the missing ``b2`` from dense
indicator vectors (bounded by ``dense_cap``) so the rest of the pipeline runs
end to end.
"""

from __future__ import annotations

import enum
import logging
import random
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction

import numpy as np

from .clausepoly import DENSE_CAP, clause_value, ones_value, power_table
from .field import FieldElement, Prime, next_prime
from .formula import CONTRADICTION, Clause, Formula, Literal, assign_and_simplify
from .twoclause import (InconsistentSystem, MarkerPair, Status, combine,
                        diagonal_value, marker_schedule)

log = logging.getLogger(__name__)


class Mode(enum.Enum):
    HYBRID = "hybrid"
    PAPER = "paper"


class PrimePolicy(enum.Enum):
    WALKTHROUGH = "walkthrough"
    OPTIMIZED = "optimized"


class ZeroStrategy(enum.Enum):
    REPOINT = "repoint"
    REPRIME = "reprime"
    EXTRA_VARIABLES = "extra-variables"


class Verdict(enum.Enum):
    SATISFIABLE = "satisfiable"
    LIKELY_UNSATISFIABLE = "likely-unsatisfiable"
    INDETERMINATE = "indeterminate"


class Directive(enum.Enum):
    REPOINT = "repoint"
    REPRIME = "reprime"
    EXTRA_VARIABLES = "extra-variables"
    GIVE_UP = "give-up"


class CertificateFault(RuntimeError):
    """A certificate was produced that does not satisfy its formula."""


@dataclass(frozen=True)
class SolverConfig:
    mode: Mode = Mode.HYBRID
    primes: int = 2
    target_error_total: Fraction = Fraction(1, 1000)
    per_step_error: Fraction = Fraction(1, 10000)
    prime_policy: PrimePolicy = PrimePolicy.OPTIMIZED
    seed: int = 0
    dense_cap: int = DENSE_CAP
    zero_strategy: ZeroStrategy = ZeroStrategy.REPOINT
    repoint_budget: int = 3
    reprime_budget: int = 1
    certificate_retries: int = 3
    # size primes for the n + 2V clauses certificate extraction can reach
    anticipate_extraction: bool = True

    def __post_init__(self):
        if self.primes < 1:
            raise ValueError("at least one prime is required")
        for name in ("target_error_total", "per_step_error"):
            value = Fraction(getattr(self, name))
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1)")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class TreePlan:
    padded_count: int
    levels: int

    @property
    def leaf_evaluations(self) -> int:
        return 4 ** self.levels

    def doubling_schedule(self) -> dict[int, list[int]]:
        """Doubling levels visited at each depth when the root sits at ``levels``."""
        return {depth: list(range(self.levels - depth, self.levels + 1))
                for depth in range(self.levels + 1)}


@dataclass
class NodeRecord:
    lo: int
    hi: int
    depth: int
    doubling: int
    status: str
    zero_inputs: int = 0
    determinant: int | None = None


@dataclass
class ZeroEvent:
    lo: int
    hi: int
    doubling: int
    side: str


@dataclass
class PrimeResult:
    prime: int
    base_point: int
    diagonal: int | None
    status: str  # ok | zero-unresolved | blocked
    attempts: int = 1
    zero_events: int = 0
    singular: int = 0
    assisted: int = 0
    unique: int = 0
    blocked: int = 0
    leaf_evaluations: int = 0
    directives: list[str] = field(default_factory=list)
    nodes: list[NodeRecord] = field(default_factory=list)


@dataclass
class Decision:
    verdict: Verdict
    evidence: list[PrimeResult]
    error_bound: Fraction
    schwartz_bound: Fraction
    plan: TreePlan

    @property
    def diagnostics(self) -> dict:
        keys = ("zero_events", "singular", "assisted", "unique", "blocked", "leaf_evaluations")
        out = {k: sum(getattr(r, k) for r in self.evidence) for k in keys}
        out["attempts"] = sum(r.attempts for r in self.evidence)
        return out

    def to_dict(self, include_nodes: bool = False) -> dict:
        evidence = []
        for r in self.evidence:
            item = asdict(r)
            if not include_nodes:
                item.pop("nodes")
            evidence.append(item)
        return {
            "verdict": self.verdict.value,
            "evidence": evidence,
            "errorBound": str(self.error_bound),
            "errorBoundFloat": float(self.error_bound),
            "schwartzBound": float(self.schwartz_bound),
            "plan": {"paddedClauseCount": self.plan.padded_count, "levels": self.plan.levels,
                     "leafEvaluationsPerTree": self.plan.leaf_evaluations},
            "diagnostics": self.diagnostics,
        }


# -- sizing ------------------------------------------------------------------

def choose_prime(n: int, num_vars: int, policy: PrimePolicy = PrimePolicy.WALKTHROUGH) -> Prime:
    if n < 1 or num_vars < 1:
        raise ValueError("need at least one clause and one variable")
    bound = (2 * n) ** 2
    if policy is PrimePolicy.OPTIMIZED:
        bound = max(bound, num_vars * (n + num_vars) ** 2)
    return next_prime(bound)


def prime_sequence(first: int, count: int) -> list[int]:
    out = [int(first)]
    while len(out) < count:
        out.append(int(next_prime(out[-1])))
    return out


def _next_power_of_two(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


def pad_formula(f: Formula, plan_size: int | None = None,
                extra_variables: bool = False) -> tuple[Formula, TreePlan]:
    """Append tautologies up to a power-of-two clause count.

    With ``extra_variables`` the variable space doubles to ``2V``; the new
    variables appear in no clause.
    """
    if f.n < 1:
        raise ValueError("padding needs at least one clause")
    size = _next_power_of_two(f.n)
    if plan_size is not None:
        if plan_size < f.n or plan_size & (plan_size - 1):
            raise ValueError(f"plan size {plan_size} cannot hold {f.n} clauses")
        size = plan_size
    clauses = list(f.clauses) + [Clause.true()] * (size - f.n)
    num_vars = 2 * f.num_vars if extra_variables else f.num_vars
    return Formula(num_vars, clauses), TreePlan(size, size.bit_length() - 1)


# -- tree evaluation ---------------------------------------------------------

class TreeEvaluator:
    """One evaluation of the combiner tree for a fixed prime and base point."""

    def __init__(self, f: Formula, p: int, x: int, mode: Mode = Mode.HYBRID,
                 dense_cap: int = DENSE_CAP, markers: list[MarkerPair] | None = None):
        if f.n & (f.n - 1) or f.n == 0:
            raise ValueError("formula must be padded to a power-of-two clause count")
        self.f = f
        self.p = p
        self.x = x % p
        self.mode = mode
        self.num_vars = f.num_vars
        self.markers = markers
        self.assist = mode is Mode.HYBRID and f.num_vars <= dense_cap
        self.leaf_evaluations = 0
        self.nodes: list[NodeRecord] = []
        self.zero_events: list[ZeroEvent] = []
        self._points: dict[int, int] = {}
        self._ones: dict[int, int] = {}
        self._powers: dict[int, np.ndarray] = {}
        self._indicators: dict[tuple[int, int], np.ndarray] = {}

    # points and cached tables
    def point(self, k: int) -> int:
        if k not in self._points:
            self._points[k] = pow(self.x, 1 << k, self.p)
        return self._points[k]

    def ones(self, k: int) -> int:
        if k not in self._ones:
            self._ones[k] = ones_value(self.num_vars, self.point(k), self.p)
        return self._ones[k]

    def powers(self, k: int) -> np.ndarray:
        if k not in self._powers:
            self._powers[k] = power_table(self.point(k), 1 << self.num_vars, self.p)
        return self._powers[k]

    def indicator(self, lo: int, hi: int) -> np.ndarray:
        key = (lo, hi)
        if key not in self._indicators:
            if hi - lo == 1:
                t = np.arange(1 << self.num_vars, dtype=np.int64)
                c = self.f.clauses[lo]
                if c.tautology:
                    sat = np.ones(len(t), dtype=bool)
                else:
                    sat = np.zeros(len(t), dtype=bool)
                    for lit in c.literals:
                        bit = ((t >> lit.var) & 1).astype(bool)
                        sat |= ~bit if lit.negated else bit
            else:
                mid = (lo + hi) // 2
                sat = self.indicator(lo, mid) & self.indicator(mid, hi)
            self._indicators[key] = sat
        return self._indicators[key]

    def class_masses(self, lo: int, mid: int, hi: int, k: int) -> tuple[int, int, int]:
        """Exact off-diagonal masses at ``y = x**(2**(k-1))`` from dense indicators.

        Uses the split of the full product into same-index and cross-index
        terms, which is O(2**V) rather than the oracle's O(4**V) pair loop.
        """
        p = self.p
        fa, fb = self.indicator(lo, mid), self.indicator(mid, hi)
        pw, pw2 = self.powers(k - 1), self.powers(k)
        total = int(pw.sum()) % p
        a1, b1 = int(pw[fa].sum()) % p, int(pw[fb].sum()) % p
        a0, b0 = (total - a1) % p, (total - b1) % p
        d2 = int(pw2[fa & fb].sum())
        d1 = int(pw2[fa ^ fb].sum())
        d0 = int(pw2[~(fa | fb)].sum())
        return ((a0 * b0 - d0) % p, (a1 * b0 + a0 * b1 - d1) % p, (a1 * b1 - d2) % p)

    # recursion
    def value(self, lo: int, hi: int, k: int, depth: int = 0) -> int | None:
        if hi - lo == 1:
            self.leaf_evaluations += 1
            return clause_value(self.f.clauses[lo], self.num_vars, self.point(k), self.p)
        if k < 1:
            raise ValueError(f"doubling level {k} too small for a subtree of {hi - lo} clauses")
        mid = (lo + hi) // 2
        mA = self.value(lo, mid, k - 1, depth + 1)
        mB = self.value(mid, hi, k - 1, depth + 1)
        aA = self.value(lo, mid, k, depth + 1)
        aB = self.value(mid, hi, k, depth + 1)
        record = NodeRecord(lo, hi, depth, k, "blocked")
        self.nodes.append(record)
        if None in (mA, mB, aA, aB):
            return None
        for side, v in (("A", mA), ("B", mB)):
            if v == 0:
                record.zero_inputs += 1
                self.zero_events.append(ZeroEvent(lo, hi, k, side))
        return self._combine(record, lo, mid, hi, k, mA, mB, aA, aB)

    def _combine(self, record: NodeRecord, lo: int, mid: int, hi: int, k: int,
                 mA: int, mB: int, aA: int, aB: int) -> int | None:
        p = self.p
        F = lambda v: FieldElement(v, p)  # noqa: E731
        if self.markers is None:
            self.markers = marker_schedule(p, 2)
        out = combine(F(mA), F(mB), F(aA), F(aB), F(self.ones(k - 1)), F(self.ones(k)),
                      self.markers, self.num_vars)
        record.determinant = out.split.determinant.residue
        if out.split.status is Status.UNIQUE:
            record.status = "unique"
            return out.diagonal.residue
        if not self.assist:
            record.status = "singular"
            return None
        b0, b1, b2 = self.class_masses(lo, mid, hi, k)
        if (b1 + 2 * b2) % p != out.split.u.residue:
            raise InconsistentSystem(
                f"node [{lo},{hi}) at level {k}: u={out.split.u.residue}, exact {(b1 + 2 * b2) % p}")
        record.status = "singular-assisted"
        return diagonal_value(F(mA), F(mB), F(b2)).residue

    def root(self, k: int | None = None) -> int | None:
        levels = self.f.n.bit_length() - 1
        return self.value(0, self.f.n, levels if k is None else k)


def evaluate_tree(f: Formula, x: FieldElement, k: int | None = None,
                  mode: Mode = Mode.HYBRID, dense_cap: int = DENSE_CAP) -> FieldElement | None:
    """Conjunction polynomial of a padded formula at ``x**(2**k)``.

    ``None`` means a singular combiner could not be resolved (paper mode).
    """
    ev = TreeEvaluator(f, x.modulus, x.residue, mode, dense_cap)
    value = ev.root(k)
    return None if value is None else FieldElement(value, x.modulus)


# -- zero-input policy -------------------------------------------------------

def zero_input_policy(event: ZeroEvent | None, strategy: ZeroStrategy,
                      repoints_left: int, reprimes_left: int) -> Directive:
    """What to do after a zero showed up as a multiplication input."""
    if strategy is ZeroStrategy.EXTRA_VARIABLES:
        return Directive.EXTRA_VARIABLES if repoints_left > 0 else Directive.GIVE_UP
    if strategy is ZeroStrategy.REPOINT and repoints_left > 0:
        return Directive.REPOINT
    if reprimes_left > 0:
        return Directive.REPRIME
    return Directive.GIVE_UP


def base_point(seed: int, p: int, attempt: int) -> int:
    rng = random.Random(f"{seed}:{p}:{attempt}")
    return rng.randrange(2, p)


def _run_prime(f: Formula, plan: TreePlan, p: int, cfg: SolverConfig,
               used_primes: set[int]) -> PrimeResult:
    repoints_left = cfg.repoint_budget
    reprimes_left = cfg.reprime_budget
    extra_round = 0
    attempt = 0
    current_f, current_p = f, p
    directives: list[str] = []
    totals = dict(zero_events=0, singular=0, assisted=0, unique=0, blocked=0, leaf_evaluations=0)
    while True:
        x = base_point(cfg.seed, current_p, attempt)
        ev = TreeEvaluator(current_f, current_p, x, cfg.mode, cfg.dense_cap)
        d = ev.root()
        statuses = [r.status for r in ev.nodes]
        totals["zero_events"] += len(ev.zero_events)
        totals["singular"] += statuses.count("singular") + statuses.count("singular-assisted")
        totals["assisted"] += statuses.count("singular-assisted")
        totals["unique"] += statuses.count("unique")
        totals["blocked"] += statuses.count("blocked")
        totals["leaf_evaluations"] += ev.leaf_evaluations
        if d is None:
            status = "blocked"
            break
        if not ev.zero_events:
            status = "ok"
            break
        directive = zero_input_policy(ev.zero_events[0], cfg.zero_strategy,
                                      repoints_left, reprimes_left)
        directives.append(directive.value)
        log.debug("zero input at p=%d x=%d: %s", current_p, x, directive.value)
        status = "zero-unresolved"
        if directive is Directive.GIVE_UP:
            break
        attempt += 1
        if directive is Directive.REPRIME:
            reprimes_left -= 1
            current_p = int(next_prime(max(used_primes | {current_p})))
            used_primes.add(current_p)
            continue
        repoints_left -= 1
        if directive is Directive.EXTRA_VARIABLES:
            extra_round += 1
            widened = _with_fresh_variable(f, extra_round)
            if widened is None:
                directives.append(Directive.GIVE_UP.value)
                break
            current_f, _ = pad_formula(widened, max(plan.padded_count,
                                                    _next_power_of_two(widened.n)))
    return PrimeResult(current_p, x, d, status, attempt + 1, directives=directives,
                       nodes=ev.nodes, **totals)


def _with_fresh_variable(f: Formula, round_: int) -> Formula | None:
    """Original clauses over a doubled variable space plus a unit clause on a
    fresh variable, which leaves satisfiability unchanged."""
    real = [c for c in f.clauses if not (c.tautology and not c.literals)]
    base_vars = f.num_vars
    fresh = base_vars + round_ - 1
    doubled = 2 * base_vars
    if fresh >= doubled:
        return None
    return Formula(doubled, real + [Clause((Literal(fresh),))])


def anticipated_primes(f: Formula, cfg: SolverConfig, offset: int = 0) -> list[int]:
    n = max(f.n, 1)
    if cfg.anticipate_extraction:
        n += 2 * f.num_vars
    first = choose_prime(n, max(f.num_vars, 1), cfg.prime_policy)
    seq = prime_sequence(first, cfg.primes + offset)
    return seq[offset:]


def decide(f: Formula, cfg: SolverConfig = SolverConfig(), primes: list[int] | None = None,
           plan_size: int | None = None) -> Decision:
    if primes is None:
        primes = anticipated_primes(f, cfg)
    work = f if f.n else Formula(f.num_vars, [Clause.true()])
    padded, plan = pad_formula(work, plan_size)
    used = set(primes)
    evidence = [_run_prime(padded, plan, p, cfg, used) for p in primes]

    if any(r.diagonal for r in evidence):
        verdict = Verdict.SATISFIABLE
    elif any(r.status == "ok" for r in evidence):
        verdict = Verdict.LIKELY_UNSATISFIABLE
    else:
        verdict = Verdict.INDETERMINATE
    p_min = min(r.prime for r in evidence)
    error_bound = Fraction(1, p_min) ** len(evidence)
    schwartz = min(Fraction(1), Fraction(2 ** f.num_vars, p_min)) ** len(evidence)
    return Decision(verdict, evidence, error_bound, schwartz, plan)


# -- certificates ------------------------------------------------------------

@dataclass(frozen=True)
class CertificateFailure:
    reason: str
    partial: tuple[bool, ...] = ()

    def __bool__(self):
        return False


def extract_certificate(f: Formula, cfg: SolverConfig = SolverConfig(),
                        decision: Decision | None = None) -> tuple[bool, ...] | CertificateFailure:
    """Fix variables one at a time, keeping whichever value stays satisfiable.

    Primes and the tree plan are sized once for the original formula and
    reused for every simplified formula.  No backtracking: when neither value
    is confirmed, fresh primes are tried, and after ``certificate_retries``
    rounds the extraction gives up.
    """
    if decision is None:
        decision = decide(f, cfg)
    if decision.verdict is not Verdict.SATISFIABLE:
        raise ValueError("certificate extraction requires a Satisfiable decision")
    plan_size = decision.plan.padded_count
    assignment: list[bool] = []
    current: Formula = f
    for _ in range(f.num_vars):
        chosen = None
        for retry in range(cfg.certificate_retries + 1):
            primes = anticipated_primes(f, cfg, offset=retry * cfg.primes)
            for value in (True, False):
                nxt = assign_and_simplify(current, 0, value)
                if nxt is CONTRADICTION:
                    continue
                if not nxt.clauses:
                    chosen = (value, nxt)
                    break
                if decide(nxt, cfg, primes, plan_size).verdict is Verdict.SATISFIABLE:
                    chosen = (value, nxt)
                    break
            if chosen:
                break
        if chosen is None:
            return CertificateFailure("no value confirmed satisfiable; only satisfiability known",
                                      tuple(assignment))
        assignment.append(chosen[0])
        current = chosen[1]
    result = tuple(assignment)
    if not f.satisfied_by(result):
        raise CertificateFault(f"extracted assignment {result} does not satisfy {f}")
    return result


def with_overrides(cfg: SolverConfig, **changes) -> SolverConfig:
    return replace(cfg, **{k: v for k, v in changes.items() if v is not None})
