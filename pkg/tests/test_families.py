from fractions import Fraction

import pytest

from puiseux_kit.exactnum import RealCut
from puiseux_kit.families import (FAIL, PASS, ex36b_pairs, ex37, ex44, prop39, run_suite, tau_point,
                                  thm312, verify_atom_window, verify_counterexamples,
                                  verify_lambda_formula, verify_M_bound, verify_min_delta,
                                  verify_rho_formula, verify_tau_lower_bound, verify_two_in_L,
                                  verify_union_interval)
from puiseux_kit.monoid import SpecError, Tri, is_prime

F = Fraction


def test_constructor_invariants():
    with pytest.raises(SpecError):
        prop39((0, 1, 2, 6))
    with pytest.raises(SpecError):
        ex44("3/2")
    for p, q in ex36b_pairs(5):
        assert is_prime(p) and is_prime(q) and q > p * p
    for inst in (ex37(), thm312(), prop39(), ex44()):
        assert inst.spec.classify().strongly_primary == Tri.YES


def test_atom_window_examples():
    r = verify_atom_window(prop39((0, 1, 2, 7)), 3)
    assert r.verdict == PASS and all(7 <= a < 15 for a in r.witness["atoms_in_window"])
    r2 = verify_atom_window(thm312(), 2)
    assert r2.verdict == PASS and r2.params["alpha_i"] == RealCut(F(7, 4))
    assert verify_atom_window(ex37(), 1).verdict == PASS


def test_M_bound_examples():
    assert verify_M_bound(prop39((0, 1, 2, 7)), [1]).verdict == PASS
    assert verify_M_bound(thm312(), [F(3, 2)]).verdict == PASS
    inst = ex37()
    u = min(inst.spec.atoms_below(RealCut(4), 8).atoms)
    assert verify_M_bound(inst, [u]).verdict == PASS


@pytest.mark.parametrize("n,x,k", [(2, F(7, 2), 1), (3, F(53, 4), 2), (4, F(1177, 8), 7)])
def test_tau_lower_bound(n, x, k):
    inst = prop39()
    assert tau_point(inst.params["seed"], n) == x
    r = verify_tau_lower_bound(inst, n)
    assert r.verdict == PASS and r.witness["exact"] and r.witness["min_L"] >= k


def test_rho_lambda_formulas():
    inst = ex44()
    r5 = verify_rho_formula(inst, 5)
    assert r5.verdict == PASS and r5.params["rho_n"] == 17 and r5.witness["atom"] == F(17, 5)
    r6 = verify_rho_formula(inst, 6)
    assert r6.verdict == PASS and r6.params["rho_n"] == 20 and r6.witness["atom"] == F(10, 3)
    lam = verify_lambda_formula(inst, 324)
    assert lam.verdict == PASS and (lam.witness["l"], lam.witness["r"]) == (95, 39)
    with pytest.raises(ValueError):
        verify_rho_formula(inst, 4)
    with pytest.raises(ValueError):
        verify_lambda_formula(inst, 323)


def test_union_interval():
    inst = ex44()
    assert verify_union_interval(inst, 324).verdict in (PASS, "Inconclusive")
    with pytest.raises(ValueError):
        verify_union_interval(inst, 5)


def test_min_delta_two_witness():
    assert verify_min_delta(ex44()).verdict == PASS


def test_two_in_L_for_large_i():
    inst = thm312()
    for i in range(3, 7):
        assert verify_two_in_L(inst, i).verdict == PASS


def test_two_in_L_small_i_fails_with_b1_equal_2():
    # with b_1 = 2 the monoid contains 1/2 and 1, so 3/2 and 9/4 split
    r = verify_two_in_L(thm312(), 1)
    assert r.verdict == FAIL and r.witness["L"] == [4] and r.witness["exact"]


def test_counterexamples_pass():
    rs = verify_counterexamples()
    assert [r.verdict for r in rs] == [PASS] * len(rs)


def test_suite_deterministic(monkeypatch):
    a = [r.to_json() for r in run_suite("ex37")]
    monkeypatch.setenv("PUISEUX_KIT_THREADS", "4")
    b = [r.to_json() for r in run_suite("ex37")]
    assert a == b


def test_two_in_L_with_b1_at_least_4():
    # same construction with b_i = 2^(i+1): every alpha_i and alpha'_i is an atom
    inst = thm312([2 ** (i + 1) for i in range(1, 7)])
    for i in range(1, 7):
        r = verify_two_in_L(inst, i)
        assert r.witness["alpha_i_atom"] and r.witness["alpha_prime_i_atom"]
        assert r.verdict == PASS
