"""Named monoid constructions and checks of their quantitative claims."""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import RealCut, floor_mul
from .factorize import (DEFAULT_BUDGET, SearchBudget, factorizations, irrational_lengths,
                        lengths, threshold_witness)
from .invariants import lambda_pair, lambda_threshold, minimal_configurations, rho_threshold
from .monoid import (DenseThreshold, FinitelyGenerated, GeometricPowers, IrrationalThreshold,
                     LatticeUnion, MonoidSpec, PrimeReciprocal, SequenceRule, SpecError, Tri,
                     check_prop39_seed, is_prime, prop39_sequence)

PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"


@dataclass(frozen=True)
class FamilyInstance:
    family: str  # ex37 | thm312 | prop39 | ex44 | ex36a | ex36b | ex36c | ex38a | ex313
    spec: MonoidSpec
    params: dict = field(default_factory=dict)

    def to_json(self):
        return {"family": self.family, "params": {k: _js(v) for k, v in self.params.items()},
                "spec": self.spec.to_json()}


def _js(v):
    if isinstance(v, (list, tuple)):
        return [_js(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _js(x) for k, x in v.items()}
    if isinstance(v, RealCut):
        return v.to_json()
    if isinstance(v, Fraction):
        return str(v)
    return v


@dataclass(frozen=True)
class ClaimCheckResult:
    claim_id: str
    params: dict
    verdict: str
    witness: Optional[dict] = None

    def to_json(self):
        out = {"claim_id": self.claim_id, "params": _js(self.params), "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = _js(self.witness)
        return out


# ---------------------------------------------------------------- constructors

def ex37(alpha="1", bs=None) -> FamilyInstance:
    """Constant threshold alpha at every level; bs defaults to 2^i."""
    rule = SequenceRule("pow2") if bs is None else SequenceRule.explicit(bs)
    spec = LatticeUnion(SequenceRule.explicit([alpha]), rule)
    return FamilyInstance("ex37", spec, {"alpha": RealCut.parse(alpha), "bs": bs or "pow2"})


def thm312(bs=None) -> FamilyInstance:
    """alpha_i = i - 1/b_i; bs defaults to 2^i."""
    rule = SequenceRule("pow2") if bs is None else SequenceRule.explicit(bs)
    return FamilyInstance("thm312", LatticeUnion(SequenceRule("thm312"), rule),
                          {"bs": bs or "pow2"})


def prop39(seed=(0, 1, 2, 7, 74)) -> FamilyInstance:
    check_prop39_seed(list(seed))
    spec = LatticeUnion(SequenceRule.prop39(seed), SequenceRule("pow2"))
    return FamilyInstance("prop39", spec, {"seed": list(seed)})


def ex44(alpha="1+1*sqrt(2)") -> FamilyInstance:
    spec = IrrationalThreshold(alpha)
    return FamilyInstance("ex44", spec, {"alpha": spec.alpha})


def ex36a(prime_bound: Optional[int] = None) -> FamilyInstance:
    return FamilyInstance("ex36a", PrimeReciprocal(prime_bound), {"prime_bound": prime_bound})


def ex36b_pairs(n: int) -> list[tuple[int, int]]:
    """First n primes p_i with the least increasing primes q_i > p_i^2."""
    ps, qs = [], []
    k = 2
    while len(ps) < n:
        if is_prime(k):
            ps.append(k)
        k += 1
    for p in ps:
        q = max(p * p + 1, qs[-1] + 1 if qs else 2)
        while not is_prime(q):
            q += 1
        qs.append(q)
    return list(zip(ps, qs))


def ex36b(n: int = 4) -> FamilyInstance:
    """Finite truncation <p_i/q_i : i <= n>."""
    pairs = ex36b_pairs(n)
    spec = FinitelyGenerated([Fraction(p, q) for p, q in pairs])
    return FamilyInstance("ex36b", spec, {"pairs": [list(t) for t in pairs]})


def ex36c(r="3/2") -> FamilyInstance:
    spec = GeometricPowers(r)
    return FamilyInstance("ex36c", spec, {"r": spec.r})


def ex38a() -> FamilyInstance:
    return FamilyInstance("ex38a", DenseThreshold(RealCut(1), True), {"sigma": "1", "strict": True})


def ex313(prime_bound: int = 13) -> FamilyInstance:
    """Finite truncation <{1} ∪ {1 + 1/p : p <= prime_bound}>."""
    gens = [Fraction(1)] + [1 + Fraction(1, p) for p in range(2, prime_bound + 1) if is_prime(p)]
    return FamilyInstance("ex313", FinitelyGenerated(gens), {"prime_bound": prime_bound})


CONSTRUCTORS = {"ex37": ex37, "thm312": thm312, "prop39": prop39, "ex44": ex44,
                "ex36a": ex36a, "ex36b": ex36b, "ex36c": ex36c, "ex38a": ex38a, "ex313": ex313}


def _require(inst: FamilyInstance, *families):
    if inst.family not in families:
        raise ValueError(f"check needs one of {families}, got {inst.family}")


# ---------------------------------------------------------------- lattice-union claims

def verify_atom_window(inst: FamilyInstance, i: int, extra=None) -> ClaimCheckResult:
    """Atoms of H lying in H_i sit in [alpha_i, 2 alpha_i + 1)."""
    _require(inst, "ex37", "thm312", "prop39")
    spec: LatticeUnion = inst.spec
    a, b, m = spec.level(i)
    hi = a * 2 + 1
    top = hi + (extra if extra is not None else a + 2)
    inside, outside = [], []
    k = math.ceil(m * b)
    while True:
        x = Fraction(k, b)
        if top < x:
            break
        if spec.is_atom(x):
            (inside if x < hi else outside).append(x)
        k += 1
    params = {"family": inst.family, "i": i, "alpha_i": a, "b_i": b, "scan_to": top}
    if outside:
        return ClaimCheckResult("lattice/atom_window", params, FAIL,
                                {"atoms_outside": outside[:10]})
    return ClaimCheckResult("lattice/atom_window", params, PASS, {"atoms_in_window": inside})


def _lattice_points(spec: LatticeUnion, D: int, cap: Fraction) -> list[Fraction]:
    """Non-zero elements of H with denominator dividing D and value <= cap."""
    return [Fraction(k, D) for k in range(1, math.floor(cap * D) + 1)
            if spec.contains(Fraction(k, D))]


def _random_element(spec: LatticeUnion, rng: random.Random, max_level: int) -> Fraction:
    j = rng.randint(spec.start, max_level)
    a, b, m = spec.level(j)
    return m + Fraction(rng.randint(0, 3 * b), b)


def M_bound_n(spec: LatticeUnion, u) -> tuple[int, int]:
    """(i0, n) with u in H_{i0} ∩ [alpha_{i0}, 2 alpha_{i0} + 1) and n = ceil(1 + (3 alpha_{i0} + 1)/alpha)."""
    i0 = spec.level_of(u)
    if i0 is None:
        raise ValueError(f"{u} has no located level")
    a = spec._inf_alpha_effective()
    if a is None or a.sign() <= 0:
        raise ValueError("no positive lower bound for the thresholds")
    return i0, ((spec.level(i0)[0] * 3 + 1) / a).ceil() + 1


def verify_M_bound(inst: FamilyInstance, sample, denom: int = 8, cap=None,
                   trials: int = 2000, seed: int = 0) -> ClaimCheckResult:
    """Sums of n non-zero elements are divisible by u, for n from the level bound."""
    _require(inst, "ex37", "thm312", "prop39")
    spec: LatticeUnion = inst.spec
    rng = random.Random(seed)
    checked = []
    for u in sample:
        u = Fraction(u)
        if not spec.contains(u):
            raise ValueError(f"{u} is not in H")
        i0, n = M_bound_n(spec, u)
        vcap = Fraction(cap) if cap is not None else Fraction(math.ceil(u)) + 4
        pool = _lattice_points(spec, denom, vcap)
        # sums of exactly n pool elements, as a bitset over multiples of 1/denom
        layer = 1
        for _ in range(n):
            nxt = 0
            for x in pool:
                nxt |= layer << int(x * denom)
            layer = nxt
        s = 0
        while layer:
            if layer & 1:
                v = Fraction(s, denom)
                if not (v >= u and spec.contains(v - u)):
                    return ClaimCheckResult("lattice/M_bound", {"family": inst.family, "u": u, "n": n},
                                            FAIL, {"sum": v, "level": i0})
            layer >>= 1
            s += 1
        top = max(spec.K + 2, i0 + 2)
        for _ in range(trials):
            xs = [_random_element(spec, rng, top) for _ in range(n)]
            v = sum(xs)
            if not spec.contains(v - u):
                return ClaimCheckResult("lattice/M_bound", {"family": inst.family, "u": u, "n": n},
                                        FAIL, {"summands": xs, "level": i0})
        checked.append({"u": u, "level": i0, "n": n, "pool": len(pool), "random_trials": trials})
    return ClaimCheckResult("lattice/M_bound", {"family": inst.family, "denom": denom},
                            PASS, {"checked": checked})


def tau_point(seed, n: int) -> Fraction:
    k = prop39_sequence(seed, n)[n]
    return 2 * (k + Fraction(1, 2 ** n)) - 1


def verify_tau_lower_bound(inst: FamilyInstance, n: int,
                           budget: SearchBudget = DEFAULT_BUDGET) -> ClaimCheckResult:
    """min L(x_n) >= k_{n-1} with x_n = 2(k_n + 1/2^n) - 1, by a full length computation."""
    _require(inst, "prop39")
    if not 2 <= n <= 4:
        raise ValueError("n must lie in 2..4")
    seed = inst.params["seed"]
    ks = prop39_sequence(seed, n)
    x = tau_point(seed, n)
    b = SearchBudget(value_cap=budget.value_cap, denom_cap=max(budget.denom_cap, 2 ** n),
                     length_cap=budget.length_cap, node_cap=budget.node_cap)
    res = lengths(inst.spec, x, b)
    params = {"n": n, "x_n": x, "k_prev": ks[n - 1], "seed": list(seed)}
    if not res.items:
        return ClaimCheckResult("prop39/tau_lower_bound", params, INCONCLUSIVE,
                                {"budget": b.to_json()})
    lo = res.items[0]
    if lo < ks[n - 1]:
        verdict = FAIL if res.exact else INCONCLUSIVE
    else:
        verdict = PASS if res.exact else INCONCLUSIVE
    return ClaimCheckResult("prop39/tau_lower_bound", params, verdict,
                            {"min_L": lo, "exact": res.exact, "denom_cap": b.denom_cap})


def verify_two_in_L(inst: FamilyInstance, i: int,
                    budget: SearchBudget = DEFAULT_BUDGET) -> ClaimCheckResult:
    """2 ∈ L(2i) through 2i = alpha_i + alpha'_i with alpha'_i = i + 1/b_i."""
    _require(inst, "thm312")
    spec: LatticeUnion = inst.spec
    b = spec.b(i)
    lo, hi = Fraction(i) - Fraction(1, b), Fraction(i) + Fraction(1, b)
    res = lengths(spec, 2 * i, SearchBudget(value_cap=budget.value_cap,
                                            denom_cap=max(budget.denom_cap, b),
                                            length_cap=budget.length_cap,
                                            node_cap=budget.node_cap))
    wit = {"alpha_i": lo, "alpha_prime_i": hi, "alpha_i_atom": spec.is_atom(lo),
           "alpha_prime_i_atom": spec.is_atom(hi), "L": list(res.items), "exact": res.exact}
    params = {"i": i, "b_i": b}
    if 2 in res.items:
        return ClaimCheckResult("thm312/two_in_L", params, PASS, wit)
    return ClaimCheckResult("thm312/two_in_L", params, FAIL if res.exact else INCONCLUSIVE, wit)


# ---------------------------------------------------------------- irrational threshold claims

def verify_rho_formula(inst: FamilyInstance, n: int) -> ClaimCheckResult:
    """rho_n = n ceil(alpha) + floor(n frac(alpha)) for n >= ceil(2 / frac(alpha))."""
    _require(inst, "ex44")
    spec: IrrationalThreshold = inst.spec
    if n < rho_threshold(spec):
        raise ValueError(f"n = {n} is below the threshold {rho_threshold(spec)}")
    ca = spec.ceil_alpha
    kappa = floor_mul(n, spec.alpha_bar)
    rho = n * ca + kappa
    atom = ca + Fraction(kappa, n)
    L = irrational_lengths(spec.alpha, rho)
    upper_ok = (spec.alpha + 1) * n < rho + 1
    ok = spec.is_atom(atom) and n in L and rho in L and upper_ok
    wit = {"kappa": kappa, "atom": atom, "atom_ok": spec.is_atom(atom),
           "lengths_contain": [n in L, rho in L], "upper_bound_ok": upper_ok}
    return ClaimCheckResult("ex44/rho_formula", {"alpha": spec.alpha, "n": n, "rho_n": rho},
                            PASS if ok else FAIL, wit)


def verify_lambda_formula(inst: FamilyInstance, n: int) -> ClaimCheckResult:
    """lambda_n = l_n where n = l_n ceil(alpha) + r_n with r_n/l_n < frac(alpha) < (r_n + ceil(alpha))/(l_n - 1)."""
    _require(inst, "ex44")
    spec: IrrationalThreshold = inst.spec
    th = lambda_threshold(spec)
    if n < th:
        raise ValueError(f"n = {n} is below the threshold {th}")
    pair = lambda_pair(spec, n)
    params = {"alpha": spec.alpha, "n": n}
    if pair is None:
        return ClaimCheckResult("ex44/lambda_formula", params, FAIL, {"reason": "no unique (l, r)"})
    l, r = pair
    ca, ab = spec.ceil_alpha, spec.alpha_bar
    ineq = ab > Fraction(r, l) and ab < Fraction(r + ca, l - 1)
    atom = Fraction(n, l)
    L = irrational_lengths(spec.alpha, n)
    lower_ok = Fraction(l - 1) < RealCut(n) / (spec.alpha + 1)
    ok = ineq and spec.is_atom(atom) and l in L and n in L and lower_ok
    params["lambda_n"] = l
    return ClaimCheckResult("ex44/lambda_formula", params, PASS if ok else FAIL,
                            {"l": l, "r": r, "inequalities": ineq, "atom": atom,
                             "atom_ok": spec.is_atom(atom), "lengths_contain": [l in L, n in L],
                             "lower_bound_ok": lower_ok})


def verify_union_interval(inst: FamilyInstance, n: int,
                          budget: SearchBudget = SearchBudget(denom_cap=400)) -> ClaimCheckResult:
    """U_n is the full interval [lambda_n, rho_n]."""
    _require(inst, "ex44")
    spec: IrrationalThreshold = inst.spec
    th = lambda_threshold(spec)
    if n < th:
        raise ValueError(f"n = {n} is below the threshold {th}")
    ca = spec.ceil_alpha
    kappa = floor_mul(n, spec.alpha_bar)
    rho = n * ca + kappa
    l, r = lambda_pair(spec, n)
    target = set(range(l, rho + 1))
    known = set(range(l, l + r)) | set(range(rho - kappa + 1, rho + 1))
    cap = ((spec.alpha + 1) * n).floor() + 1
    observed = set()
    stray = None
    nodes = 0
    for d in range(1, budget.denom_cap + 1):
        for k in range(d, cap * d + 1):
            if math.gcd(k, d) != 1:
                continue
            x = Fraction(k, d)
            if not spec.contains(x):
                continue
            nodes += 1
            L = irrational_lengths(spec.alpha, x)
            if n in L:
                observed.update(L)
        if not observed <= target:
            stray = sorted(observed - target)[:10]
            break
        if target <= observed | known or nodes > budget.node_cap:
            break
    params = {"alpha": spec.alpha, "n": n, "lambda_n": l, "rho_n": rho}
    if stray is not None:
        return ClaimCheckResult("ex44/union_interval", params, FAIL, {"outside": stray})
    gap = sorted(target - observed - known)
    if gap:
        return ClaimCheckResult("ex44/union_interval", params, INCONCLUSIVE,
                                {"gap": gap[:20], "denominators_scanned": d})
    return ClaimCheckResult("ex44/union_interval", params, PASS,
                            {"denominators_scanned": d, "observed": len(observed)})


def verify_min_delta(inst: FamilyInstance) -> ClaimCheckResult:
    """Lengths 3 and 5 (and 4 and 6) occur together, so 1 = min Delta."""
    _require(inst, "ex44")
    spec: IrrationalThreshold = inst.spec
    hits = []
    for n in (3, 4):
        kappa = floor_mul(n, spec.alpha_bar)
        b = 1 + spec.alpha.floor() + Fraction(kappa, n)
        x = n * b
        L = irrational_lengths(spec.alpha, x)
        hits.append({"n": n, "x": x, "L": L, "adjacent": n in L and n + 1 in L})
    ok = all(h["adjacent"] for h in hits)
    return ClaimCheckResult("ex44/min_delta", {"alpha": spec.alpha}, PASS if ok else FAIL,
                            {"elements": hits})


def verify_length_witnesses(inst: FamilyInstance, xs=(10, Fraction(121, 25))) -> ClaimCheckResult:
    """Every closed-form length of x admits an explicit factorization."""
    _require(inst, "ex44")
    spec = inst.spec
    out = []
    for x in xs:
        x = Fraction(x)
        L = irrational_lengths(spec.alpha, x)
        wits = {l: threshold_witness(spec, x, l) for l in L}
        good = all(z is not None and z.value == x and z.length == l
                   and all(spec.is_atom(a) for a in z.as_dict()) for l, z in wits.items())
        out.append({"x": x, "L": L, "witnessed": good})
    ok = all(o["witnessed"] for o in out)
    return ClaimCheckResult("ex44/length_witnesses", {"alpha": spec.alpha}, PASS if ok else FAIL,
                            {"elements": out})


# ---------------------------------------------------------------- counterexamples

def _ex36a_check() -> ClaimCheckResult:
    inst = ex36a(5)
    res = lengths(inst.spec, 1, SearchBudget(denom_cap=5))
    unbounded = ex36a().spec.classify()
    ok = {2, 3, 5} <= set(res.items) and unbounded.bf == Tri.NO
    return ClaimCheckResult("ex36/prime_reciprocal", {"prime_bound": 5}, PASS if ok else FAIL,
                            {"L_1": list(res.items), "bf_unbounded": str(unbounded.bf)})


def _ex36b_check(n: int = 4) -> ClaimCheckResult:
    inst = ex36b(n)
    gens = [Fraction(p, q) for p, q in inst.params["pairs"]]
    atoms_ok = sorted(inst.spec.atoms) == sorted(gens)
    shrinking = all(Fraction(p, q) < Fraction(1, p) for p, q in inst.params["pairs"])
    ok = atoms_ok and shrinking
    return ClaimCheckResult("ex36/limit_point", {"pairs": inst.params["pairs"]},
                            PASS if ok else FAIL,
                            {"atoms_are_generators": atoms_ok, "p_over_q_below_1_over_p": shrinking})


def _ex36c_check() -> ClaimCheckResult:
    inst = ex36c("3/2")
    r = inst.spec.r
    sizes = {}
    for n in (2, 3):
        x = sum(r ** i for i in range(1, n + 1))
        z = factorizations(inst.spec, x)
        sizes[str(x)] = {"count": len(z.items), "exact": z.exact,
                         "divisible_by_1": inst.spec.contains(x - 1)}
    cls = inst.spec.classify()
    ok = (all(v["count"] == 1 and v["exact"] and not v["divisible_by_1"] for v in sizes.values())
          and cls.strongly_primary == Tri.NO and cls.bf == Tri.YES)
    return ClaimCheckResult("ex36/geometric", {"r": r}, PASS if ok else FAIL,
                            {"elements": sizes, "strongly_primary": str(cls.strongly_primary),
                             "bf": str(cls.bf)})


def _ex38a_check(samples: int = 50, seed: int = 0) -> ClaimCheckResult:
    inst = ex38a()
    spec = inst.spec
    rng = random.Random(seed)
    cond = spec.conductor()
    bad = []
    for _ in range(samples):
        x = Fraction(rng.randint(1, 400), rng.randint(1, 97))
        want = 1 < x <= 2
        if spec.is_atom(x) != want:
            bad.append(x)
    cls = spec.classify()
    ok = (cond.status == "Threshold" and cond.sigma == 1 and not bad
          and cls.valuation == Tri.NO and cls.bf == Tri.YES and cls.strongly_primary == Tri.YES)
    return ClaimCheckResult("ex38/dense_threshold", {"samples": samples}, PASS if ok else FAIL,
                            {"conductor": cond.to_json(), "mismatches": bad})


def _ex313_check(prime_bound: int = 13) -> ClaimCheckResult:
    inst = ex313(prime_bound)
    spec = inst.spec
    rows = []
    for p in range(2, prime_bound + 1):
        if not is_prime(p):
            continue
        a = 1 + Fraction(1, p)
        z = (a,) * p
        total = p * a
        divisible = spec.contains(total - 1)
        minimal = all(not spec.contains(j * a - 1) for j in range(1, p))
        rows.append({"p": p, "value": total, "minimal": divisible and minimal,
                     "t_lower": len(z)})
    ok = all(r["minimal"] and r["t_lower"] >= r["p"] for r in rows)
    return ClaimCheckResult("ex313/tame_degree", {"prime_bound": prime_bound},
                            PASS if ok else FAIL, {"configurations": rows})


def verify_counterexamples() -> list[ClaimCheckResult]:
    return [_ex36a_check(), _ex36b_check(), _ex36c_check(), _ex38a_check(), _ex313_check()]


# ---------------------------------------------------------------- suites

def _threads() -> int:
    try:
        return max(1, int(os.environ.get("PUISEUX_KIT_THREADS", "1")))
    except ValueError:
        return 1


def _run(tasks) -> list[ClaimCheckResult]:
    n = _threads()
    if n == 1:
        out = [t() for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            out = list(ex.map(lambda t: t(), tasks))
    return sorted(out, key=lambda r: (r.claim_id, str(sorted(_js(r.params).items()))))


def family_checks(family: str, alpha=None, n=None, seed=None,
                  budget: SearchBudget = DEFAULT_BUDGET):
    """Zero-argument callables for the checks of one family."""
    if family == "ex44":
        inst = ex44(alpha or "1+1*sqrt(2)")
        if n is not None:
            tasks = [lambda: verify_rho_formula(inst, n)]
            if n >= lambda_threshold(inst.spec):
                tasks += [lambda: verify_lambda_formula(inst, n),
                          lambda: verify_union_interval(inst, n, SearchBudget(denom_cap=400))]
            elif n < rho_threshold(inst.spec):
                raise ValueError(f"n = {n} is below the threshold {rho_threshold(inst.spec)}")
            return tasks
        tasks = [lambda k=k: verify_rho_formula(inst, k) for k in range(5, 41)]
        tasks += [lambda k=k: verify_lambda_formula(inst, k) for k in range(324, 335)]
        tasks += [lambda: verify_length_witnesses(inst), lambda: verify_min_delta(inst)]
        return tasks
    if family == "prop39":
        inst = prop39(seed or (0, 1, 2, 7, 74))
        ns = [n] if n is not None else [2, 3, 4]
        tasks = [lambda k=k: verify_tau_lower_bound(inst, k, budget) for k in ns]
        tasks += [lambda: verify_atom_window(inst, 3), lambda: verify_M_bound(inst, [1])]
        return tasks
    if family == "thm312":
        inst = thm312()
        ns = [n] if n is not None else range(1, 7)
        tasks = [lambda k=k: verify_two_in_L(inst, k, budget) for k in ns]
        tasks += [lambda: verify_atom_window(inst, 2),
                  lambda: verify_M_bound(inst, [Fraction(3, 2)])]
        return tasks
    if family == "ex37":
        inst = ex37(alpha or "1")
        return [lambda: verify_atom_window(inst, n or 1),
                lambda: verify_M_bound(inst, [min(inst.spec.atoms_below(RealCut(4), 8).atoms)])]
    if family == "counterexamples":
        return [_ex36a_check, _ex36b_check, _ex36c_check, _ex38a_check, _ex313_check]
    raise ValueError(f"unknown family {family!r}")


SUITE_FAMILIES = ("counterexamples", "ex37", "ex44", "prop39", "thm312")


def run_suite(family: Optional[str] = None, **kw) -> list[ClaimCheckResult]:
    fams = [family] if family else SUITE_FAMILIES
    tasks = []
    for f in fams:
        tasks += family_checks(f, **kw)
    return _run(tasks)
