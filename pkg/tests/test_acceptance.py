"""Acceptance criteria, one test each; every test prints a PASS/FAIL line with its timing.

Run standalone with ``python tests/test_acceptance.py`` or through pytest (the lines are
repeated in the terminal summary).
"""

import io
import json
import math
import os
import random
import sys
import time
from fractions import Fraction

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from oracles import brute_catenary, divisor_lcm_closure, fg_factorizations  # noqa: E402
from puiseux_kit.cli import run  # noqa: E402
from puiseux_kit.exactnum import RealCut  # noqa: E402
from puiseux_kit.factorize import (SearchBudget, catenary, factorizations, lengths,  # noqa: E402
                                   monotone_catenary)
from puiseux_kit.families import (PASS, ex44, prop39, thm312, verify_lambda_formula,  # noqa: E402
                                  verify_length_witnesses, verify_rho_formula,
                                  verify_tau_lower_bound, verify_two_in_L)
from puiseux_kit.invariants import (aap_fit, delta_scan, elasticity, global_invariant,  # noqa: E402
                                    M_of, omega, tame_degree, union_k)
from puiseux_kit.monoid import (DenseThreshold, FinitelyGenerated, GeometricPowers,  # noqa: E402
                                IrrationalThreshold, LatticeUnion, PrimeReciprocal, SequenceRule,
                                Tri)

F = Fraction
LINES = []


class Criterion:
    def __init__(self, num, title, limit):
        self.num, self.title, self.limit = num, title, limit

    def __enter__(self):
        self.t0 = time.perf_counter()
        self.notes = []
        return self

    def note(self, text):
        self.notes.append(text)

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        slow = dt > self.limit
        ok = exc_type is None and not slow
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = (detail + "; " if detail else "") + f"{exc_type.__name__}: {exc}"
        elif slow:
            detail = (detail + "; " if detail else "") + f"over the {self.limit}s limit"
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {self.num:2d} {self.title} ({dt:.2f}s) {detail}"
        LINES.append(line)
        print(line)
        if slow and exc_type is None:
            raise AssertionError(line)
        return False


def test_criterion_01_numerical_anchor():
    with Criterion(1, "<2,3>: Delta = {1}, catenary 3 attained", 1.0) as c:
        H = FinitelyGenerated([2, 3])
        d = delta_scan(H, 60)
        assert d.exact and list(d.observed) == [1]
        cats = {x: catenary(H, x) for x in range(2, 61) if H.contains(x)}
        assert all(v.exact for v in cats.values())
        assert max(v.value for v in cats.values()) == 3
        mons = [monotone_catenary(H, x).value for x in range(2, 61) if H.contains(x)]
        assert max(mons) == 3
        _, zs = fg_factorizations([2, 3], 12)
        assert brute_catenary(zs) == 3
        c.note("Delta = {1}, max c = max c_mon = 3")


def test_criterion_02_closure():
    with Criterion(2, "closure of <1/2,1/3> is (1/6)N_0", 1.0) as c:
        cl = FinitelyGenerated([F(1, 2), F(1, 3)]).closure()
        assert cl.scale_n == 1
        assert list(cl.denominators) == divisor_lcm_closure([2, 3]) == [1, 2, 3, 6]
        assert all(cl.contains(F(k, 6)) for k in range(60)) and not cl.contains(F(1, 12))
        c.note("n = 1, denominators {1,2,3,6}")


def test_criterion_03_conductor_dense():
    with Criterion(3, "conductor of {0} u Q_>1 and atoms = H n (1,2]", 1.0) as c:
        H = DenseThreshold(RealCut(1), True)
        cond = H.conductor()
        assert cond.status == "Threshold" and cond.sigma == 1
        rng = random.Random(2024)
        for _ in range(50):
            x = F(rng.randint(1, 300), rng.randint(1, 100))
            assert H.is_atom(x) == (H.contains(x) and 1 < x <= 2)
        c.note("sigma = 1; 50 random rationals agree")


def test_criterion_04_counterexample_triple():
    with Criterion(4, "prime reciprocal / geometric / classify table", 5.0) as c:
        L1 = lengths(PrimeReciprocal(5), 1)
        assert {2, 3, 5} <= set(L1.items)
        G = GeometricPowers(F(3, 2))
        z = factorizations(G, F(3, 2) + F(9, 4))
        assert z.exact and len(z.items) == 1
        pr = PrimeReciprocal().classify()
        g = G.classify()
        assert pr.bf == Tri.NO
        assert g.strongly_primary == Tri.NO and g.bf == Tri.YES and g.inf_positive == Tri.YES
        c.note(f"L(1) = {list(L1.items)}, |Z(15/4)| = 1")


def test_criterion_05_tau_lower_bound():
    with Criterion(5, "min L(x_n) >= k_(n-1) for n = 2, 3, 4", 60.0) as c:
        inst = prop39((0, 1, 2, 7, 74))
        for n, k in ((2, 1), (3, 2), (4, 7)):
            r = verify_tau_lower_bound(inst, n)
            assert r.verdict == PASS and r.witness["exact"] and r.witness["min_L"] >= k
            c.note(f"n={n}: min L = {r.witness['min_L']} >= {k}")


def test_criterion_06_two_in_L():
    with Criterion(6, "b_i = 2^i: 2 in L(2i) for i in 1..6", 1.0) as c:
        inst = thm312()
        bad = []
        for i in range(1, 7):
            r = verify_two_in_L(inst, i)
            if r.verdict != PASS:
                bad.append((i, r.witness["L"], r.witness["exact"]))
        c.note(f"failing i: {bad}" if bad else "all i pass")
        assert not bad, f"2 not in L(2i) for {bad}"


def test_criterion_07_irrational_threshold():
    with Criterion(7, "alpha = 1+sqrt2: rho_n, lambda_n, L(10), L(121/25)", 10.0) as c:
        inst = ex44("1+1*sqrt(2)")
        for n in range(5, 41):
            r = verify_rho_formula(inst, n)
            assert r.verdict == PASS
            assert r.params["rho_n"] == 3 * n + (math.isqrt(2 * n * n) - n)
        for n in range(324, 335):
            assert verify_lambda_formula(inst, n).verdict == PASS
        assert list(lengths(inst.spec, 10).items) == [3, 4, 5, 6, 7, 10]
        assert list(lengths(inst.spec, F(121, 25)).items) == [2, 3]
        assert verify_length_witnesses(inst).verdict == PASS
        c.note("rho_n for 5..40, lambda_n for 324..334, both length sets witnessed")


def test_criterion_08_structure():
    with Criterion(8, "AAP fit on <2,3>, <3,5>, <4,6,7> up to 100", 10.0) as c:
        for gens in ([2, 3], [3, 5], [4, 6, 7]):
            H = FinitelyGenerated(gens)
            d = delta_scan(H, 100)
            assert d.exact
            xs = [x for x in range(101) if H.contains(x)]
            M = aap_fit(H, xs, d.min_delta)
            assert M >= 0
            c.note(f"<{','.join(map(str, gens))}>: d = {d.min_delta}, M = {M}")


def test_criterion_09_inequalities():
    with Criterion(9, "omega <= M, max(2,rho) <= t <= omega^2, 2 + max Delta <= t, min Delta = gcd", 30.0) as c:
        for gens in ([2, 3], [3, 5]):
            H = FinitelyGenerated(gens)
            for u in H.atoms:
                w, m = omega(H, u), M_of(H, u)
                assert w.exact and m.exact and w.value <= m.value
            W = global_invariant(omega, H)
            T = global_invariant(tame_degree, H)
            rho = elasticity(H).value.as_fraction()
            d = delta_scan(H, 100)
            assert d.exact
            assert max(2, rho) <= T <= W * W
            assert 2 + max(d.observed) <= T
            assert min(d.observed) == math.gcd(*d.observed)
            c.note(f"<{gens[0]},{gens[1]}>: omega = {W}, t = {T}, rho = {rho}")


def _cli(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue()


def test_criterion_10_certification(tmp_path):
    with Criterion(10, "no Exact certificate on dense factorization sets or generic U_k", 5.0) as c:
        it = tmp_path / "it.json"
        it.write_text(json.dumps({"type": "irrational_threshold", "alpha": "1+1*sqrt(2)"}))
        dt = tmp_path / "dt.json"
        dt.write_text(json.dumps({"type": "dense_threshold", "sigma": "1", "strict": True}))
        lu = tmp_path / "lu.json"
        lu.write_text(json.dumps({"type": "lattice_union", "alphas": {"kind": "explicit", "values": ["1"]},
                                  "bs": {"kind": "pow2"}}))
        runs = [
            ["factorize", "--spec", str(it), "--x", "10", "--denom-cap", "6", "--node-cap", "5000"],
            ["factorize", "--spec", str(it), "--x", "121/25", "--denom-cap", "30"],
            ["factorize", "--spec", str(dt), "--x", "5/2", "--denom-cap", "6", "--node-cap", "5000"],
            ["union-k", "--spec", str(it), "--k", "5", "--denom-cap", "4"],
            ["union-k", "--spec", str(dt), "--k", "2", "--value-cap", "6", "--denom-cap", "6"],
            ["union-k", "--spec", str(lu), "--k", "2", "--value-cap", "8", "--denom-cap", "8"],
            ["atoms", "--spec", str(it), "--bound", "4", "--denom-cap", "6"],
            ["delta", "--spec", str(it), "--bound", "12", "--denom-cap", "4"],
        ]
        outputs = []
        for argv in runs:
            code, out = _cli(argv)
            assert code == 2, argv
            outputs.append(out)
        blob = "\n".join(outputs)
        assert '"exact": true' not in blob and '"complete": true' not in blob
        assert '"certificate": "Exact"' not in blob
        c.note(f"{len(runs)} dense or generic outputs, none marked exact")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
