"""Monoid-level invariants: delta sets, elasticities, unions of length sets, tameness."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import RealCut, as_cut
from .factorize import (DEFAULT_BUDGET, LengthTable, SearchBudget, atom_pool,
                        dense_lengths, irrational_lengths, lengths)
from .monoid import (DenseThreshold, FinitelyGenerated, IrrationalThreshold, LatticeUnion,
                     MonoidSpec, PrimeReciprocal, Tri, tri)


def _infinite(certified: bool):
    return {"infinite": True, "certified": certified}


# ---------------------------------------------------------------- delta sets

def delta_of_set(L) -> list[int]:
    s = sorted(set(L))
    return sorted({b - a for a, b in zip(s, s[1:])})


@dataclass(frozen=True)
class DeltaReport:
    observed: tuple
    min_delta: Optional[int]
    witness: Optional[tuple]  # (x, l, l + min_delta)
    exact: bool
    scanned_upto: Fraction

    def to_json(self):
        return {"observed": list(self.observed), "min_delta": self.min_delta,
                "witness": None if self.witness is None else
                {"x": str(self.witness[0]), "lengths": list(self.witness[1:])},
                "exact": self.exact, "scanned_upto": str(self.scanned_upto)}


def _element_table(spec: MonoidSpec, cap, budget: SearchBudget):
    atoms, complete = atom_pool(spec, Fraction(cap), budget)
    table = LengthTable(atoms, cap, budget.node_cap)
    return table, complete and not table.truncated


def delta_scan(spec: MonoidSpec, cap, budget: SearchBudget = DEFAULT_BUDGET) -> DeltaReport:
    """Observed Δ over elements x <= cap. Exact means: exactly Δ of those elements."""
    cap = Fraction(cap)
    seen = {}
    if isinstance(spec, (IrrationalThreshold, DenseThreshold)):
        exact = False
        for x in _dense_points(spec, cap, budget.denom_cap):
            L = irrational_lengths(spec.alpha, x) if isinstance(spec, IrrationalThreshold) \
                else dense_lengths(spec, x)
            _record_gaps(seen, x, L)
    else:
        table, exact = _element_table(spec, cap, budget)
        for x in table.values():
            _record_gaps(seen, x, table.lengths(x))
    observed = tuple(sorted(seen))
    if not observed:
        return DeltaReport((), None, None, exact, cap)
    md = observed[0]
    return DeltaReport(observed, md, seen[md], exact, cap)


def _record_gaps(seen, x, L):
    s = sorted(L)
    for a, b in zip(s, s[1:]):
        if b - a not in seen:
            seen[b - a] = (x, a, b)


def _dense_points(spec, cap: Fraction, denom_cap: int):
    """Members of a threshold monoid in (0, cap] with denominator <= denom_cap, by denominator."""
    for d in range(1, denom_cap + 1):
        for k in range(1, math.floor(cap * d) + 1):
            if math.gcd(k, d) == 1:
                x = Fraction(k, d)
                if spec.contains(x):
                    yield x


# ---------------------------------------------------------------- elasticity

@dataclass(frozen=True)
class ElasticityReport:
    status: str  # Finite | Infinite | Unknown
    value: Optional[RealCut]
    accepted: Tri
    reason: str = ""

    def to_json(self):
        out = {"status": self.status, "accepted": str(self.accepted), "reason": self.reason}
        if self.status == "Finite":
            out["value"] = self.value.to_json()
        elif self.status == "Infinite":
            out["value"] = _infinite(True)
        return out


def elasticity(spec: MonoidSpec) -> ElasticityReport:
    if spec.classify().strongly_primary != Tri.YES:
        return ElasticityReport("Unknown", None, Tri.UNKNOWN,
                                "sup A / inf A is only established for strongly primary monoids")
    sup, sup_att = spec.sup_atoms()
    inf, inf_att = spec.inf_atoms()
    if sup is None:
        return ElasticityReport("Infinite", None, Tri.NO, "atoms are unbounded")
    return ElasticityReport("Finite", sup / inf, tri(sup_att and inf_att),
                            f"sup A = {sup} ({'' if sup_att else 'not '}attained), "
                            f"inf A = {inf} ({'' if inf_att else 'not '}attained)")


# ---------------------------------------------------------------- tame-type reports

@dataclass(frozen=True)
class TameReport:
    kind: str  # omega | tau | t | M
    u: Fraction
    lower: int
    upper: Optional[int] = None  # None: no certified upper bound
    infinite: bool = False
    witness: Optional[tuple] = None
    reason: str = ""
    budget: Optional[SearchBudget] = field(default=None, compare=False)

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.upper == self.lower

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.exact else None

    @property
    def certificate(self) -> str:
        return "Exact" if self.exact else "LowerBound"

    def to_json(self):
        out = {"kind": self.kind, "u": str(self.u), "certificate": self.certificate}
        if self.infinite:
            out["value"] = _infinite(True)
        elif self.exact:
            out["value"] = self.lower
        else:
            out["lower"] = self.lower
            out["upper"] = self.upper
        if self.witness is not None:
            out["witness"] = [str(a) for a in self.witness]
        if self.reason:
            out["reason"] = self.reason
        if self.budget is not None and not self.exact:
            out["budget"] = self.budget.to_json()
        return out


def _require_atom(spec, u):
    u = Fraction(u)
    if not spec.is_atom(u):
        raise ValueError(f"{u} is not an atom")
    return u


def _sigma_bound(spec: MonoidSpec) -> Optional[RealCut]:
    """sigma with 0 for H equal to its closure; None when the conductor is empty or unknown."""
    c = spec.conductor()
    if c.status == "Whole":
        return RealCut(0)
    if c.status == "Threshold":
        return c.sigma
    return None


def M_of(spec: MonoidSpec, u, budget: SearchBudget = DEFAULT_BUDGET) -> TameReport:
    """Least n with every sum of n non-units divisible by u."""
    u = _require_atom(spec, u)
    if spec.classify().strongly_primary != Tri.YES:
        raise ValueError("M(u) is finite only in strongly primary monoids")
    sigma = _sigma_bound(spec)
    if isinstance(spec, FinitelyGenerated) or (isinstance(spec, PrimeReciprocal) and spec._fg):
        cap = u + sigma.as_fraction()
        table, _ = _element_table(spec, cap, budget)
        best, wit = 1, Fraction(0)
        for x in table.values():
            if not (x >= u and spec.contains(x - u)):
                top = table.lengths(x)[-1]
                if top + 1 > best:
                    best, wit = top + 1, x
        return TameReport("M", u, best, best, witness=(wit,),
                          reason="all elements up to u + sigma checked")
    uppers = []
    low_inf, _ = spec.inf_atoms()
    if sigma is not None and low_inf.sign() > 0:
        uppers.append((((sigma + u) / low_inf).floor() + 1, "non-empty conductor bound"))
    if isinstance(spec, LatticeUnion):
        i0 = spec.level_of(u)
        a = spec._inf_alpha_effective()
        if i0 is not None and a is not None and a.sign() > 0:
            n = ((spec.level(i0)[0] * 3 + 1) / a).ceil() + 1
            uppers.append((n, f"lattice level {i0} bound"))
    upper, why = min(uppers, key=lambda t: t[0]) if uppers else (None, "no certified bound")
    cap = Fraction(budget.value_cap.floor())
    if sigma is not None:
        cap = min(cap, Fraction((sigma + u).floor()) + 1)
    best, wit = 1, Fraction(0)
    for x, L in _scan_lengths(spec, cap, budget):
        if L and not (x >= u and spec.contains(x - u)) and L[-1] + 1 > best:
            best, wit = L[-1] + 1, x
    return TameReport("M", u, best, upper, witness=(wit,), reason=why, budget=budget)


def _scan_lengths(spec: MonoidSpec, cap: Fraction, budget: SearchBudget):
    """(x, lengths found) for elements x <= cap; lengths are genuine (maybe partial)."""
    if isinstance(spec, IrrationalThreshold):
        for x in _dense_points(spec, cap, budget.denom_cap):
            yield x, irrational_lengths(spec.alpha, x)
    elif isinstance(spec, DenseThreshold):
        for x in _dense_points(spec, cap, budget.denom_cap):
            yield x, dense_lengths(spec, x)
    else:
        table, _ = _element_table(spec, cap, budget)
        for x in table.values():
            yield x, table.lengths(x)


# ---------------------------------------------------------------- minimal configurations

def minimal_configurations(spec: MonoidSpec, u, atoms, value_cap, max_size: int, node_cap: int):
    """Multisets of atoms (sorted tuples) divisible by u with no divisible proper sub-multiset.

    Returns (configs, truncated).
    """
    u = Fraction(u)
    atoms = sorted(atoms)
    value_cap = Fraction(value_cap)
    out = []
    nodes = 0
    truncated = False
    cur = []

    def divisible(v):
        return v >= u and spec.contains(v - u)

    def walk(start, total):
        nonlocal nodes, truncated
        for i in range(start, len(atoms)):
            a = atoms[i]
            t = total + a
            if t > value_cap:
                break
            nodes += 1
            if nodes > node_cap:
                truncated = True
                return
            cur.append(a)
            if divisible(t):
                if all(not divisible(t - b) for b in set(cur)):
                    out.append((tuple(cur), t))
            elif len(cur) < max_size:
                walk(i, t)
            cur.pop()
            if truncated:
                return

    walk(0, Fraction(0))
    return out, truncated


def _config_space(spec, u, budget, max_size):
    """Atoms, value cap, size cap and exactness of the configuration search."""
    if isinstance(spec, FinitelyGenerated) or (isinstance(spec, PrimeReciprocal) and spec._fg):
        sigma = _sigma_bound(spec).as_fraction()
        atoms = spec.atoms if isinstance(spec, FinitelyGenerated) else spec._fg.atoms
        vcap = u + sigma + max(atoms)
        size = math.floor(vcap / min(atoms))
        if max_size is not None and max_size < size:
            return list(atoms), vcap, max_size, False
        return list(atoms), vcap, size, True
    vcap = Fraction(budget.value_cap.floor())
    size = max_size if max_size is not None else 3
    atoms, _ = atom_pool(spec, vcap, budget)
    return atoms, vcap, min(size, budget.length_cap), False


def _tame_family(spec, u, budget, max_size):
    u = _require_atom(spec, u)
    atoms, vcap, size, exhaustive = _config_space(spec, u, budget, max_size)
    configs, truncated = minimal_configurations(spec, u, atoms, vcap, size, budget.node_cap)
    return u, configs, exhaustive and not truncated


def omega(spec: MonoidSpec, u, budget: SearchBudget = DEFAULT_BUDGET, max_size=None) -> TameReport:
    u, configs, exact = _tame_family(spec, u, budget, max_size)
    best = max(configs, key=lambda c: (len(c[0]), c[0]))
    m = len(best[0])
    return TameReport("omega", u, m, m if exact else None, witness=best[0],
                      reason="" if exact else "configuration search is a lower approximation",
                      budget=None if exact else budget)


def _min_lengths(spec, values, budget):
    """Exact min L(v) for each v where certifiable, else None."""
    if not values:
        return {}
    if isinstance(spec, (IrrationalThreshold, DenseThreshold)):
        return {v: lengths(spec, v, budget).items[0] for v in values}
    cap = max(values)
    atoms, complete = atom_pool(spec, cap, budget)
    table = LengthTable(atoms, cap, budget.node_cap, extra_dens=[v.denominator for v in values])
    out = {}
    for v in values:
        L = table.lengths(v)
        if v == 0:
            out[v] = 0
        elif L and complete and not table.truncated:
            out[v] = L[0]
        else:
            sub, sub_complete = atom_pool(spec, v, budget)
            out[v] = L[0] if (L and sub_complete and set(sub) <= set(atoms) and not table.truncated) else None
    return out


def tau(spec: MonoidSpec, u, budget: SearchBudget = DEFAULT_BUDGET, max_size=None) -> TameReport:
    u, configs, exact = _tame_family(spec, u, budget, max_size)
    mins = _min_lengths(spec, sorted({t - u for _, t in configs}), budget)
    best, wit = 0, None
    unresolved = False
    for z, t in configs:
        m = mins.get(t - u)
        if m is None:
            unresolved = True
            continue
        if wit is None or m > best:
            best, wit = m, z
    exact = exact and not unresolved
    return TameReport("tau", u, best, best if exact else None, witness=wit,
                      reason="" if exact else "configuration search is a lower approximation",
                      budget=None if exact else budget)


def tame_degree(spec: MonoidSpec, u, budget: SearchBudget = DEFAULT_BUDGET, max_size=None) -> TameReport:
    u = _require_atom(spec, u)
    if spec.is_prime(u):
        return TameReport("t", u, 0, 0, reason="prime atom")
    u, configs, exact = _tame_family(spec, u, budget, max_size)
    mins = _min_lengths(spec, sorted({t - u for _, t in configs}), budget)
    best, wit = 0, None
    unresolved = False
    for z, t in configs:
        m = mins.get(t - u)
        val = len(z) if m is None else max(len(z), 1 + m)
        if m is None:
            unresolved = True
        if wit is None or val > best:
            best, wit = val, z
    exact = exact and not unresolved
    return TameReport("t", u, best, best if exact else None, witness=wit,
                      reason="" if exact else "configuration search is a lower approximation",
                      budget=None if exact else budget)


def global_invariant(fn, spec: FinitelyGenerated, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Max of an exact per-atom invariant over all atoms of a finitely generated monoid."""
    reports = [fn(spec, a, budget) for a in spec.atoms]
    if not all(r.exact for r in reports):
        raise ValueError("per-atom values not exact")
    return max(r.value for r in reports)


# ---------------------------------------------------------------- unions of length sets

@dataclass(frozen=True)
class UnionReport:
    k: int
    observed: tuple
    rho_k: Optional[int]
    lambda_k: Optional[int]
    rho_exact: bool
    lambda_exact: bool
    exact: bool
    rho_infinite: bool = False
    reason: str = ""
    budget: Optional[SearchBudget] = None

    @property
    def certificate(self) -> str:
        return "Exact" if self.exact else "LowerTruncated"

    def to_json(self):
        out = {"k": self.k, "observed": list(self.observed), "exact": self.exact,
               "rho_k": _infinite(True) if self.rho_infinite else self.rho_k,
               "rho_exact": self.rho_exact, "lambda_k": self.lambda_k,
               "lambda_exact": self.lambda_exact}
        if self.reason:
            out["reason"] = self.reason
        if not self.exact and self.budget is not None:
            out["budget"] = self.budget.to_json()
        return out


def rho_formula(spec: IrrationalThreshold, n: int) -> int:
    return n * spec.ceil_alpha + (spec.alpha_bar * n).floor()


def rho_threshold(spec: IrrationalThreshold) -> int:
    return (spec.alpha_bar.reciprocal() * 2).ceil()


def lambda_threshold(spec: IrrationalThreshold) -> int:
    return ((spec.alpha / spec.alpha_bar) * 3).ceil() ** 2


def lambda_pair(spec: IrrationalThreshold, n: int) -> Optional[tuple[int, int]]:
    """The unique (l, r), l >= 2, n = l*ceil(alpha) + r with r/l < frac(alpha) < (r+ceil(alpha))/(l-1)."""
    ca, ab = spec.ceil_alpha, spec.alpha_bar
    hits = []
    for l in range(2, n // ca + 1):
        r = n - l * ca
        if ab > Fraction(r, l) and ab < Fraction(r + ca, l - 1):
            hits.append((l, r))
    return hits[0] if len(hits) == 1 else None


def union_k(spec: MonoidSpec, k: int, budget: SearchBudget = DEFAULT_BUDGET) -> UnionReport:
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return UnionReport(0, (0,), 0, 0, True, True, True)
    if isinstance(spec, IrrationalThreshold):
        return _union_irrational(spec, k, budget)
    if isinstance(spec, FinitelyGenerated) or (isinstance(spec, PrimeReciprocal) and spec._fg):
        atoms = spec.atoms if isinstance(spec, FinitelyGenerated) else spec._fg.atoms
        cap = k * max(atoms)
        table = LengthTable(atoms, cap, budget.node_cap)
        obs = set()
        for x in table.values():
            L = table.lengths(x)
            if k in L:
                obs.update(L)
        exact = not table.truncated
        o = tuple(sorted(obs))
        return UnionReport(k, o, o[-1], o[0], exact, exact, exact,
                           reason="elements with k in L(x) are at most k * max atom")
    sup, _ = spec.sup_atoms()
    cap = Fraction(budget.value_cap.floor())
    if sup is not None:
        cap = min(cap, Fraction((sup * k).floor()))
    obs = set()
    for x, L in _scan_lengths(spec, cap, budget):
        if k in L:
            obs.update(L)
    o = tuple(sorted(obs))
    return UnionReport(k, o, o[-1] if o else None, o[0] if o else None, False, False, False,
                       rho_infinite=sup is None and False,
                       reason="generic scan over a bounded window", budget=budget)


def _union_irrational(spec: IrrationalThreshold, k: int, budget: SearchBudget) -> UnionReport:
    cap = Fraction(((spec.alpha + 1) * k).floor())
    obs = set()
    nodes = 0
    for x in _dense_points(spec, cap, budget.denom_cap):
        nodes += 1 + math.floor(x)
        if nodes > budget.node_cap:
            break
        L = irrational_lengths(spec.alpha, x)
        if k in L:
            obs.update(L)
    o = tuple(sorted(obs))
    rho = o[-1] if o else None
    lam = o[0] if o else None
    rho_ok = lam_ok = False
    notes = []
    if k >= rho_threshold(spec):
        rho, rho_ok = rho_formula(spec, k), True
        notes.append("rho_k from the closed form")
    if k >= lambda_threshold(spec):
        pair = lambda_pair(spec, k)
        if pair is not None:
            lam, lam_ok = pair[0], True
            notes.append("lambda_k from the closed form")
    return UnionReport(k, o, rho, lam, rho_ok, lam_ok, False,
                       reason="; ".join(notes + ["observed set from a denominator-capped scan"]),
                       budget=budget)


# ---------------------------------------------------------------- Lambda

@dataclass(frozen=True)
class LambdaReport:
    status: str  # Finite | InfiniteCertified | LowerBound
    value: Optional[int]
    witnesses: tuple = ()
    reason: str = ""

    def to_json(self):
        out = {"status": self.status, "reason": self.reason}
        if self.status == "InfiniteCertified":
            out["value"] = _infinite(True)
        else:
            out["value"] = self.value
        if self.witnesses:
            out["witnesses"] = [list(map(str, w)) for w in self.witnesses]
        return out


def thm312_witness(spec: LatticeUnion, i: int) -> Optional[tuple]:
    """(2i, alpha_i, alpha'_i) when both summands are atoms, else None."""
    b = spec.b(i)
    lo, hi = Fraction(i) - Fraction(1, b), Fraction(i) + Fraction(1, b)
    if spec.is_atom(lo) and spec.is_atom(hi):
        return (Fraction(2 * i), lo, hi)
    return None


def Lambda(spec: MonoidSpec, budget: SearchBudget = DEFAULT_BUDGET, sample=range(1, 7)) -> LambdaReport:
    cls = spec.classify()
    if cls.strongly_primary == Tri.YES and cls.conductor_nonempty == Tri.YES:
        return LambdaReport("InfiniteCertified", None,
                            reason="globally tame strongly primary monoid")
    if isinstance(spec, LatticeUnion) and spec.alphas.kind == "thm312":
        wits = [thm312_witness(spec, i) for i in sample]
        if all(wits):
            return LambdaReport("Finite", 2, tuple(wits),
                                "2 lies in L(2i) for every sampled i")
    cap = Fraction(budget.value_cap.floor())
    best = 0
    wit = ()
    for x, L in _scan_lengths(spec, cap, budget):
        if L and L[0] > best:
            m = _min_lengths(spec, [x], budget).get(x)
            if m is not None and m > best:
                best, wit = m, ((x, m),)
    return LambdaReport("LowerBound", best, wit, "max of exact min L over scanned elements")


# ---------------------------------------------------------------- structure theorem fit

def aap_fit(spec: MonoidSpec, sample, d: int, budget: SearchBudget = DEFAULT_BUDGET) -> int:
    """Least M with (min L + dN_0) ∩ [min L + M, max L - M] ⊂ L ⊂ min L + dN_0 on the sample."""
    if d <= 0:
        raise ValueError("d must be positive")
    M = 0
    for x in sample:
        res = lengths(spec, x, budget)
        if not res.exact:
            raise ValueError(f"L({x}) is not exact")
        L = set(res.items)
        if not L:
            continue
        lo, hi = min(L), max(L)
        bad = [l for l in L if (l - lo) % d]
        if bad:
            raise ValueError(f"L({x}) = {sorted(L)} leaves the progression min L + {d}N_0")
        for p in range(lo, hi + 1, d):
            if p not in L:
                M = max(M, min(p - lo, hi - p) + 1)
    return M
