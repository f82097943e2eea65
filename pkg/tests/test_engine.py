from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cpsat import engine, oracle
from cpsat.clausepoly import clause_poly, formula_poly, poly_eval
from cpsat.engine import (CertificateFailure, CertificateFault, Directive, Mode, PrimePolicy,
                          SolverConfig, TreeEvaluator, Verdict, ZeroEvent, ZeroStrategy,
                          choose_prime, decide, evaluate_tree, extract_certificate, pad_formula,
                          prime_sequence, zero_input_policy)
from cpsat.field import GF, is_prime
from cpsat.formula import Clause, Formula, Literal, assign_and_simplify, parse_dimacs

from helpers import formulas, primes

F17 = GF(17)
WALK = parse_dimacs("p cnf 2 2\n1 0\n-1 2 0\n")
CONTRA = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")


@pytest.mark.parametrize("n, V, policy, want", [
    (2, 2, PrimePolicy.WALKTHROUGH, 17),
    (2, 2, PrimePolicy.OPTIMIZED, 37),
    (1, 1, PrimePolicy.WALKTHROUGH, 5),
])
def test_choose_prime(n, V, policy, want):
    assert choose_prime(n, V, policy) == want


def test_choose_prime_preconditions():
    with pytest.raises(ValueError):
        choose_prime(0, 2)


def test_prime_sequence_is_consecutive():
    assert prime_sequence(17, 3) == [17, 19, 23]


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(primes=0)
    with pytest.raises(ValueError):
        SolverConfig(per_step_error=Fraction(3, 2))


@pytest.mark.parametrize("n, size, levels", [(1, 1, 0), (3, 4, 2), (4, 4, 2), (5, 8, 3)])
def test_padding(n, size, levels):
    f = Formula(2, [Clause((Literal(0),))] * n)
    padded, plan = pad_formula(f)
    assert padded.n == plan.padded_count == size
    assert plan.levels == levels
    assert all(c.tautology for c in padded.clauses[n:])
    assert plan.leaf_evaluations == 4 ** levels


def test_padding_errors():
    with pytest.raises(ValueError):
        pad_formula(Formula(1, []))
    with pytest.raises(ValueError):
        pad_formula(WALK, plan_size=3)


def test_extra_variables_multiply_absent_factors():
    padded, _ = pad_formula(WALK, extra_variables=True)
    assert padded.num_vars == 4
    c = padded.clauses[0]
    # clause polynomial over 4 variables = the 2-variable one times (1+x^4)(1+x^8)
    assert clause_poly(c, 4).tolist() == clause_poly(c, 2).tolist() * 4


def test_doubling_schedule():
    _, plan = pad_formula(Formula(1, [Clause((Literal(0),))] * 4))
    assert plan.doubling_schedule() == {0: [2], 1: [1, 2], 2: [0, 1, 2]}


def test_evaluate_tree_examples():
    single, _ = pad_formula(Formula(2, [Clause((Literal(0),))]))
    assert evaluate_tree(single, F17(3), k=0) == 13
    walk, _ = pad_formula(WALK)
    # f_{A&B}(9) = 9**3 = 729 = 15 (mod 17)
    assert evaluate_tree(walk, F17(3)) == 15
    contra, _ = pad_formula(CONTRA)
    assert evaluate_tree(contra, F17(3)) == 0
    assert evaluate_tree(walk, F17(3), mode=Mode.PAPER) is None


def test_evaluate_tree_rejects_shallow_level():
    walk, _ = pad_formula(WALK)
    with pytest.raises(ValueError):
        evaluate_tree(walk, F17(3), k=0)
    with pytest.raises(ValueError):
        TreeEvaluator(Formula(2, WALK.clauses[:1] * 3), 17, 3)


@given(formulas(max_vars=5, max_clauses=8, min_clauses=1), primes(), st.integers(2, 10 ** 6),
       st.integers(0, 2))
def test_tree_root_is_conjunction_polynomial(f, p, xv, extra):
    padded, plan = pad_formula(f)
    x = GF(p)(xv)
    k = plan.levels + extra
    want = poly_eval(formula_poly(f.clauses, f.num_vars), x ** (1 << k))
    assert evaluate_tree(padded, x, k) == want


@given(formulas(max_vars=5, max_clauses=4, min_clauses=2), primes(), st.integers(2, 10 ** 6))
def test_factored_class_masses_match_double_loop(f, p, xv):
    padded, plan = pad_formula(f)
    ev = TreeEvaluator(padded, p, xv)
    mid = padded.n // 2
    k = plan.levels
    got = ev.class_masses(0, mid, padded.n, k)
    fa = formula_poly(padded.clauses[:mid], f.num_vars)
    fb = formula_poly(padded.clauses[mid:], f.num_vars)
    want = oracle.exact_b_values(fa, fb, GF(p)(xv) ** (1 << (k - 1)))
    assert got == tuple(v.residue for v in want)


def test_leaf_counter_is_four_to_the_levels():
    for n in (2, 4, 8, 16):
        f = Formula(3, [Clause((Literal(i % 3),)) for i in range(n)])
        padded, plan = pad_formula(f)
        ev = TreeEvaluator(padded, 101, 5)
        ev.root()
        assert ev.leaf_evaluations == 4 ** plan.levels == n * n


def test_decide_examples():
    d = decide(WALK)
    assert d.verdict is Verdict.SATISFIABLE
    assert any(r.diagonal for r in d.evidence)
    assert decide(CONTRA).verdict is Verdict.LIKELY_UNSATISFIABLE
    paper = decide(WALK, SolverConfig(mode=Mode.PAPER))
    assert paper.verdict is Verdict.INDETERMINATE
    assert paper.diagnostics["singular"] > 0 and paper.diagnostics["unique"] == 0


def test_decide_evidence_and_bounds():
    cfg = SolverConfig(primes=3)
    d = decide(WALK, cfg)
    ps = [r.prime for r in d.evidence]
    assert len(ps) == 3 and ps == sorted(ps) and all(is_prime(p) for p in ps)
    # primes sized for n + 2V clauses under the optimized policy
    assert ps[0] == choose_prime(2 + 4, 2, PrimePolicy.OPTIMIZED)
    assert d.error_bound == Fraction(1, ps[0]) ** 3
    assert d.schwartz_bound == Fraction(4, ps[0]) ** 3
    assert d.diagnostics["leaf_evaluations"] == 3 * 4


def test_decide_empty_formula_is_satisfiable():
    assert decide(Formula(2, [])).verdict is Verdict.SATISFIABLE


def test_decide_is_deterministic():
    f = parse_dimacs("p cnf 4 3\n1 -2 0\n2 3 -4 0\n-1 4 0\n")
    cfg = SolverConfig(seed=9)
    assert decide(f, cfg).to_dict(include_nodes=True) == decide(f, cfg).to_dict(include_nodes=True)


def test_certificates():
    assert extract_certificate(WALK) == (True, True)
    assert extract_certificate(Formula(1, [Clause((Literal(0, True),))])) == (False,)
    with pytest.raises(ValueError):
        extract_certificate(CONTRA)


def test_certificate_failure_is_a_value(monkeypatch):
    real = engine.decide
    first = real(WALK)
    monkeypatch.setattr(engine, "decide", lambda f, *a, **k: real(CONTRA, *a[:1]))
    out = extract_certificate(WALK, SolverConfig(certificate_retries=1), first)
    assert isinstance(out, CertificateFailure) and not out


def test_certificate_fault_on_bad_assignment(monkeypatch):
    monkeypatch.setattr(engine, "assign_and_simplify",
                        lambda f, v, value: assign_and_simplify(f, v, not value))
    with pytest.raises(CertificateFault):
        extract_certificate(WALK)


# -- zero inputs -------------------------------------------------------------

EVENT = ZeroEvent(0, 2, 1, "A")


@pytest.mark.parametrize("strategy, repoints, reprimes, want", [
    (ZeroStrategy.REPOINT, 3, 1, Directive.REPOINT),
    (ZeroStrategy.REPOINT, 0, 1, Directive.REPRIME),
    (ZeroStrategy.REPOINT, 0, 0, Directive.GIVE_UP),
    (ZeroStrategy.REPRIME, 3, 1, Directive.REPRIME),
    (ZeroStrategy.EXTRA_VARIABLES, 1, 0, Directive.EXTRA_VARIABLES),
    (ZeroStrategy.EXTRA_VARIABLES, 0, 1, Directive.GIVE_UP),
])
def test_zero_input_policy(strategy, repoints, reprimes, want):
    assert zero_input_policy(EVENT, strategy, repoints, reprimes) is want


# (x0) & TRUE over one variable: the tautology leaf is 1 + x, zero at x = p - 1
ZERO_PRONE = Formula(1, [Clause((Literal(0),)), Clause.true()])


@pytest.fixture
def first_point_is_root(monkeypatch):
    monkeypatch.setattr(engine, "base_point", lambda seed, p, attempt: p - 1 if attempt == 0 else 2)


def test_zero_event_recorded_at_root_of_ones():
    padded, _ = pad_formula(ZERO_PRONE)
    ev = TreeEvaluator(padded, 17, 16)
    ev.root()
    assert [e.side for e in ev.zero_events] == ["B"]


def test_repoint_recovers(first_point_is_root):
    d = decide(ZERO_PRONE, SolverConfig(primes=1))
    r = d.evidence[0]
    assert r.status == "ok" and r.attempts == 2 and r.directives == ["repoint"]
    assert r.zero_events == 1
    assert d.verdict is Verdict.SATISFIABLE


def test_reprime_advances_the_prime(first_point_is_root):
    cfg = SolverConfig(primes=1, zero_strategy=ZeroStrategy.REPRIME)
    first = engine.anticipated_primes(ZERO_PRONE, cfg)[0]
    r = decide(ZERO_PRONE, cfg).evidence[0]
    assert r.directives == ["reprime"] and r.prime > first and r.status == "ok"


def test_exhausted_budget_is_indeterminate(monkeypatch):
    monkeypatch.setattr(engine, "base_point", lambda seed, p, attempt: p - 1)
    cfg = SolverConfig(primes=2, repoint_budget=0, reprime_budget=0)
    d = decide(ZERO_PRONE, cfg)
    assert all(r.status == "zero-unresolved" for r in d.evidence)
    # the diagonal itself is still exact, so a nonzero D is still a certificate of satisfiability
    assert d.verdict is Verdict.SATISFIABLE
    contra = Formula(1, [Clause((Literal(0),)), Clause((Literal(0, True),)), Clause.true()])
    d = decide(contra, cfg)
    assert all(r.status == "zero-unresolved" for r in d.evidence)
    assert d.verdict is Verdict.INDETERMINATE


def test_extra_variables_strategy(first_point_is_root):
    cfg = SolverConfig(primes=1, zero_strategy=ZeroStrategy.EXTRA_VARIABLES)
    r = decide(ZERO_PRONE, cfg).evidence[0]
    assert r.directives[0] == "extra-variables"
    assert r.status == "ok"
    assert r.diagonal
