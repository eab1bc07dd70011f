"""Puiseux monoid representations and structural operations."""

from __future__ import annotations

import enum
import heapq
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Optional

from .exactnum import RealCut, as_cut, gcd_set, lcm_set, parse_rational


class SpecError(ValueError):
    """Malformed monoid description; ``field`` names the offending entry."""

    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


class Tri(str, enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


def tri(flag: bool) -> Tri:
    return Tri.YES if flag else Tri.NO


# ---------------------------------------------------------------- small helpers

def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytearray(len(sieve[p * p::p]))
    return [i for i, v in enumerate(sieve) if v]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % p for p in range(2, math.isqrt(n) + 1))


def _pow2_exponent(d: int) -> Optional[int]:
    """e with d == 2**e, else None."""
    if d <= 0 or d & (d - 1):
        return None
    return d.bit_length() - 1


def closure_add(mask: int, w: int, nbits: int) -> int:
    """Close a bitset of reachable values under adding w (values < nbits)."""
    full = (1 << nbits) - 1
    shift = w
    while shift < nbits:
        mask |= (mask << shift) & full
        shift *= 2
    return mask


# ---------------------------------------------------------------- result types

@dataclass(frozen=True)
class AtomList:
    atoms: tuple
    complete_below: RealCut
    complete: bool
    denom_bound: int
    description: Optional[str] = None

    def to_json(self):
        out = {"atoms": [str(a) for a in self.atoms],
               "complete_below": self.complete_below.to_json(),
               "complete": self.complete, "denom_bound": self.denom_bound}
        if self.description:
            out["description"] = self.description
        return out


@dataclass(frozen=True)
class ClosureDescription:
    scale_n: int
    denominator_rule: str
    quotient_group: str
    denominators: Optional[tuple] = None
    den_ok: Callable[[int], bool] = field(default=lambda d: True, compare=False, repr=False)

    def contains(self, x) -> bool:
        """Membership in the closure n * <1/d : d admissible>."""
        x = Fraction(x)
        if x < 0:
            return False
        return self.den_ok((x / self.scale_n).denominator)

    def to_json(self):
        out = {"scale_n": self.scale_n, "denominator_rule": self.denominator_rule,
               "quotient_group": self.quotient_group}
        if self.denominators is not None:
            out["denominators"] = list(self.denominators)
        return out


@dataclass(frozen=True)
class ConductorDescription:
    status: str  # Empty | Threshold | Whole | Unknown
    sigma: Optional[RealCut] = None
    attained: Optional[bool] = None
    reason: str = ""

    def to_json(self):
        out = {"status": self.status}
        if self.sigma is not None:
            out["sigma"] = self.sigma.to_json()
            out["attained"] = self.attained
        if self.reason:
            out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class Classification:
    valuation: Tri
    seminormal: Tri
    bf: Tri
    strongly_primary: Tri
    conductor_nonempty: Tri
    inf_positive: Tri
    reasons: dict = field(default_factory=dict, compare=False)

    def to_json(self):
        out = {k: str(getattr(self, k)) for k in
               ("valuation", "seminormal", "bf", "strongly_primary", "conductor_nonempty", "inf_positive")}
        out["reasons"] = dict(sorted(self.reasons.items()))
        return out


# ---------------------------------------------------------------- base class

class MonoidSpec:
    """Common interface of all monoid variants."""

    kind = "abstract"

    def contains(self, x) -> bool:
        raise NotImplementedError

    def is_atom(self, u) -> bool:
        raise NotImplementedError

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        raise NotImplementedError

    def closure(self) -> ClosureDescription:
        raise NotImplementedError

    def conductor(self) -> ConductorDescription:
        raise NotImplementedError

    def classify(self) -> Classification:
        raise NotImplementedError

    def inf_atoms(self) -> tuple[RealCut, bool]:
        """(inf A(H), attained). Equals inf H• for atomic monoids."""
        raise NotImplementedError

    def sup_atoms(self) -> tuple[Optional[RealCut], bool]:
        """(sup A(H), attained); None means +infinity."""
        raise NotImplementedError

    def is_prime(self, u) -> bool:
        return False

    def to_json(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({json.dumps(self.to_json(), sort_keys=True)})"


# ---------------------------------------------------------------- numerical monoids

class NumericalMonoid:
    """Submonoid of N_0 generated by integers with gcd 1 (Apéry-set membership)."""

    def __init__(self, gens):
        gens = sorted(set(int(g) for g in gens))
        if not gens or gens[0] <= 0:
            raise ValueError("generators must be positive")
        if gcd_set(gens) != 1:
            raise ValueError("generators must have gcd 1")
        self.gens = gens
        m = gens[0]
        self.m = m
        ap = [None] * m
        ap[0] = 0
        heap = [(0, 0)]
        while heap:
            v, r = heapq.heappop(heap)
            if v != ap[r]:
                continue
            for g in gens[1:]:
                w, s = v + g, (r + g) % m
                if ap[s] is None or w < ap[s]:
                    ap[s] = w
                    heapq.heappush(heap, (w, s))
        self.apery = ap
        self.frobenius = max(ap) - m

    def contains(self, n: int) -> bool:
        return n >= 0 and n >= self.apery[n % self.m]

    @cached_property
    def minimal_generators(self) -> list[int]:
        return [g for g in self.gens
                if not any(h < g and self.contains(g - h) for h in self.gens)]


class FinitelyGenerated(MonoidSpec):
    kind = "finitely_generated"

    def __init__(self, generators):
        gens = [parse_rational(g) for g in generators]
        if not gens:
            raise SpecError("generators", "must be non-empty")
        if any(g <= 0 for g in gens):
            raise SpecError("generators", "must be positive")
        if len(set(gens)) != len(gens):
            raise SpecError("generators", "must be pairwise distinct")
        self.generators = tuple(sorted(gens))
        big = lcm_set(g.denominator for g in gens)
        ints = [int(g * big) for g in gens]
        g0 = gcd_set(ints)
        self.unit = Fraction(g0, big)
        self.numerical = NumericalMonoid([i // g0 for i in ints])

    def _scaled(self, x) -> Optional[int]:
        y = Fraction(x) / self.unit
        return y.numerator if y.denominator == 1 else None

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x < 0:
            return False
        n = self._scaled(x)
        return n is not None and self.numerical.contains(n)

    @cached_property
    def atoms(self) -> tuple:
        return tuple(self.unit * s for s in self.numerical.minimal_generators)

    def is_atom(self, u) -> bool:
        return Fraction(u) in self.atoms

    def is_prime(self, u) -> bool:
        return len(self.atoms) == 1 and Fraction(u) == self.atoms[0]

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        bound = as_cut(bound)
        below = [a for a in self.atoms if not bound < a]
        listed = tuple(a for a in below if a.denominator <= denom_bound)
        return AtomList(listed, bound, len(listed) == len(below), denom_bound)

    @property
    def sigma(self) -> Optional[Fraction]:
        f = self.numerical.frobenius
        return self.unit * f if f >= 0 else None

    def closure(self) -> ClosureDescription:
        p, q = self.unit.numerator, self.unit.denominator
        dens = tuple(divisors(q))
        return ClosureDescription(
            scale_n=p, denominators=dens,
            denominator_rule=f"divisors of {q}",
            quotient_group=f"{self.unit}*Z",
            den_ok=lambda d, q=q: q % d == 0)

    def conductor(self) -> ConductorDescription:
        s = self.sigma
        if s is None:
            return ConductorDescription("Whole", reason="H equals its closure")
        return ConductorDescription("Threshold", RealCut(s), True,
                                    "scaled Frobenius number")

    def inf_atoms(self):
        return RealCut(self.atoms[0]), True

    def sup_atoms(self):
        return RealCut(self.atoms[-1]), True

    def classify(self) -> Classification:
        whole = self.sigma is None
        r = "finitely generated: isomorphic to a numerical monoid"
        return Classification(
            valuation=tri(whole), seminormal=tri(whole), bf=Tri.YES,
            strongly_primary=Tri.YES, conductor_nonempty=Tri.YES, inf_positive=Tri.YES,
            reasons={"all": r, "valuation": "valuation iff H equals its closure"})

    def to_json(self):
        return {"type": self.kind, "generators": [str(g) for g in self.generators]}


# ---------------------------------------------------------------- sequence rules

@dataclass(frozen=True)
class SequenceRule:
    kind: str  # explicit | thm312 | prop39 | pow2
    values: tuple = ()
    seed: tuple = ()

    @classmethod
    def explicit(cls, values):
        return cls("explicit", tuple(values))

    @classmethod
    def prop39(cls, seed=(0, 1, 2, 7, 74)):
        return cls("prop39", seed=tuple(int(k) for k in seed))

    @classmethod
    def from_json(cls, obj, where: str):
        if not isinstance(obj, dict) or "kind" not in obj:
            raise SpecError(where, "sequence rule must be an object with 'kind'")
        kind = obj["kind"]
        if kind == "explicit":
            vals = obj.get("values")
            if not isinstance(vals, list) or not vals:
                raise SpecError(where + ".values", "non-empty list required")
            return cls("explicit", tuple(vals))
        if kind == "prop39":
            return cls.prop39(obj.get("seed", [0, 1, 2, 7, 74]))
        if kind in ("thm312", "pow2"):
            return cls(kind)
        raise SpecError(where + ".kind", f"unknown rule {kind!r}")

    def to_json(self):
        if self.kind == "explicit":
            return {"kind": "explicit", "values": [v.to_json() if isinstance(v, RealCut) else str(v)
                                                   for v in self.values]}
        if self.kind == "prop39":
            return {"kind": "prop39", "seed": list(self.seed)}
        return {"kind": self.kind}


def prop39_sequence(seed, n: int) -> list[int]:
    """k_0..k_n: the seed, continued by the least integers with k_i > (3/2) k_{i-1}^2."""
    ks = list(seed)
    while len(ks) <= n:
        ks.append(3 * ks[-1] ** 2 // 2 + 1)
    return ks[: n + 1]


def check_prop39_seed(seed):
    if not seed or seed[0] != 0:
        raise SpecError("alphas.seed", "k_0 must be 0")
    for i in range(1, len(seed)):
        if 2 * seed[i] <= 3 * seed[i - 1] ** 2:
            raise SpecError("alphas.seed", f"k_{i} must exceed (3/2)k_{i-1}^2")


# ---------------------------------------------------------------- lattice unions

class LatticeUnion(MonoidSpec):
    """H = union of H_i = {0} ∪ (Q_{>=alpha_i} ∩ b_i^{-1} Z) with b_i | b_{i+1}."""

    kind = "lattice_union"

    def __init__(self, alphas: SequenceRule, bs: SequenceRule):
        self.alphas, self.bs = alphas, bs
        if alphas.kind == "pow2":
            raise SpecError("alphas.kind", "pow2 produces denominators, not thresholds")
        if bs.kind not in ("explicit", "pow2"):
            raise SpecError("bs.kind", "must be explicit or pow2")
        if alphas.kind == "prop39":
            check_prop39_seed(alphas.seed)
            if bs.kind != "pow2":
                raise SpecError("bs", "prop39 thresholds use b_i = 2^i")
        self.start = 0 if alphas.kind == "prop39" else 1
        if alphas.kind == "explicit":
            self._alpha_vals = [RealCut.parse(v) for v in alphas.values]
            if any(a.sign() < 0 for a in self._alpha_vals):
                raise SpecError("alphas.values", "thresholds must be non-negative")
            if self._alpha_vals[-1].sign() <= 0:
                raise SpecError("alphas.values", "the repeated last threshold must be positive")
        if bs.kind == "explicit":
            try:
                self._b_vals = [int(parse_rational(v)) for v in bs.values]
            except (TypeError, ValueError) as e:
                raise SpecError("bs.values", str(e)) from None
            if any(b <= 0 for b in self._b_vals):
                raise SpecError("bs.values", "must be positive integers")
            for i in range(1, len(self._b_vals)):
                if self._b_vals[i] % self._b_vals[i - 1]:
                    raise SpecError("bs.values", f"b_{i} does not divide b_{i + 1}")
        lens = [0]
        if alphas.kind == "explicit":
            lens.append(len(alphas.values))
        if bs.kind == "explicit":
            lens.append(len(bs.values))
        self.K = self.start + max(lens)
        self.b_tail = "pow2" if bs.kind == "pow2" else "const"
        self.a_tail = "const" if alphas.kind == "explicit" else "increasing"
        self._cache = {}

    # levels
    def b(self, i: int) -> int:
        if self.bs.kind == "pow2":
            return 1 << i
        return self._b_vals[min(i - self.start, len(self._b_vals) - 1)]

    def alpha(self, i: int) -> RealCut:
        kind = self.alphas.kind
        if kind == "explicit":
            return self._alpha_vals[min(i - self.start, len(self._alpha_vals) - 1)]
        if kind == "thm312":
            return RealCut(Fraction(i) - Fraction(1, self.b(i)))
        return RealCut(prop39_sequence(self.alphas.seed, i)[i])

    def level(self, i: int):
        """(alpha_i, b_i, m_i) with m_i the least positive element of H_i."""
        hit = self._cache.get(i)
        if hit is None:
            a, b = self.alpha(i), self.b(i)
            hit = (a, b, Fraction(max((a * b).ceil(), 1), b))
            self._cache[i] = hit
        return hit

    @property
    def alpha_star(self) -> Optional[RealCut]:
        return self._alpha_vals[-1] if self.a_tail == "const" else None

    def _first_pow2_level(self, d: int) -> Optional[int]:
        e = _pow2_exponent(d)
        return None if e is None else max(e, self.start)

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x <= 0:
            return x == 0
        d = x.denominator
        for j in range(self.start, self.K + 1):
            a, b, _ = self.level(j)
            if b % d == 0 and not x < a:
                return True
        if self.b_tail == "pow2":
            j = self._first_pow2_level(d)
            if j is not None:
                a, _, _ = self.level(max(j, self.K + 1))
                return not x < a
        return False

    def _splittable(self, u: Fraction) -> bool:
        """Whether u = a + b with a, b in H•, via levels i <= j with d(u) | b_j."""
        d = u.denominator
        mu = None
        e = None
        j = self.start
        last = self.K
        limit = None
        if self.b_tail == "pow2":
            e = _pow2_exponent(d)
            if self.a_tail == "const":
                a_star = self.alpha_star
                last = max(self.K + 1, e or 0)
                if a_star.is_rational:
                    ea = _pow2_exponent(a_star.as_fraction().denominator)
                    if ea is not None:
                        last = max(last, ea + 1)
                    else:
                        limit = a_star
                else:
                    limit = a_star
            else:
                last = None  # stop once alpha_j exceeds u
        while True:
            a, b, m = self.level(j)
            if last is None and j > self.K and u < a:
                break
            mu = m if mu is None or m < mu else mu
            if b % d == 0 and mu + m <= u:
                return True
            if last is not None and j >= last:
                break
            j += 1
        if limit is not None and e is not None:
            c = limit + min(as_cut(mu), limit)
            return c < u
        return False

    def is_atom(self, u) -> bool:
        u = Fraction(u)
        return u > 0 and self.contains(u) and not self._splittable(u)

    def level_of(self, u) -> Optional[int]:
        """Least level i with u in H_i ∩ [alpha_i, 2 alpha_i + 1)."""
        u = Fraction(u)
        j = self.start
        while True:
            a, b, _ = self.level(j)
            if b % u.denominator == 0 and not u < a and u < a * 2 + 1:
                return j
            if (j > self.K and u < a) or j > self.K + 64 + u.denominator.bit_length():
                return None
            j += 1

    def _relevant_levels(self, bound: RealCut, denom_bound: int):
        j = self.start
        out = []
        while True:
            a, b, m = self.level(j)
            if j <= self.K:
                out.append(j)
            elif self.b_tail == "const":
                break
            elif self.a_tail == "increasing":
                if bound < m:
                    break
                out.append(j)
            else:
                out.append(j)
                if b >= denom_bound:
                    break
            j += 1
        return [j for j in out if not bound < self.level(j)[2]]

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        bound = as_cut(bound)
        found = set()
        levels = self._relevant_levels(bound, denom_bound)
        for j in levels:
            a, b, m = self.level(j)
            hi = a * 2 + 1 if a.sign() > 0 else as_cut(2 * m)
            for d in range(1, min(b, denom_bound) + 1):
                if b % d:
                    continue
                k = math.ceil(m * d)
                while True:
                    u = Fraction(k, d)
                    if not u < hi or bound < u:
                        break
                    if math.gcd(k, d) == 1 and u not in found and self.is_atom(u):
                        found.add(u)
                    k += 1
        complete = all(self.level(j)[1] <= denom_bound for j in levels)
        if self.b_tail == "pow2" and self.a_tail == "const" and not bound < self.alpha_star:
            complete = False
        return AtomList(tuple(sorted(found)), bound, complete, denom_bound)

    # structure
    def _b_bounded(self) -> bool:
        return self.b_tail == "const"

    def closure(self) -> ClosureDescription:
        if self._b_bounded():
            top = self.b(self.K)
            return ClosureDescription(
                scale_n=1, denominators=tuple(divisors(top)),
                denominator_rule=f"divisors of {top}", quotient_group=f"1/{top}*Z",
                den_ok=lambda d, top=top: top % d == 0)
        return ClosureDescription(
            scale_n=1, denominator_rule="divisors of some b_i = 2^i (powers of 2)",
            quotient_group="union over i of b_i^-1*Z with b_i = 2^i",
            den_ok=lambda d: _pow2_exponent(d) is not None)

    def conductor(self) -> ConductorDescription:
        if self._b_bounded():
            top = self.b(self.K)
            floor_alpha = min(self.level(j)[0] for j in range(self.start, self.K + 1)
                              if self.level(j)[1] == top)
            k = (floor_alpha * top).ceil()
            while k > 0 and self.contains(Fraction(k, top)):
                k -= 1
            if k <= 0:
                return ConductorDescription("Whole", reason="H equals its closure")
            return ConductorDescription("Threshold", RealCut(Fraction(k, top)), True,
                                        "finite union over a bounded denominator chain")
        if self.a_tail == "increasing":
            return ConductorDescription(
                "Empty", reason="b_i and alpha_i both unbounded: closure elements "
                                "avoid H above every bound")
        return ConductorDescription(
            "Threshold", self.alpha_star, False,
            "constant tail threshold with unbounded dyadic denominators")

    def inf_atoms(self):
        ms = [self.level(j)[2] for j in range(self.start, self.K + 1)]
        low = min(ms)
        if self.b_tail == "pow2" and self.a_tail == "const":
            a_star = self.alpha_star
            if a_star < low:
                dyadic = a_star.is_rational and _pow2_exponent(a_star.as_fraction().denominator) is not None
                return a_star, dyadic
        return RealCut(low), True

    def _inf_alpha_effective(self) -> Optional[RealCut]:
        vals = []
        for j in range(self.start, self.K + 1):
            a, _, m = self.level(j)
            if a.sign() > 0:
                vals.append(a)
            elif not m >= self.level(j + 1)[0]:
                return None  # a zero threshold that is not absorbed by the next level
        nxt = self.level(self.K + 1)[0]
        vals.append(nxt)
        return min(vals)

    def sup_atoms(self):
        if self.b_tail == "pow2" and self.a_tail == "increasing":
            return None, False
        if self._b_bounded():
            top_a = max(self.level(j)[0] for j in range(self.start, self.K + 1))
            atoms = self.atoms_below(top_a * 2 + 1, self.b(self.K)).atoms
            return RealCut(max(atoms)), True
        a_star = self.alpha_star
        ms = [self.level(j)[2] for j in range(self.start, self.K + 1)]
        # atoms above c split at a deep enough level; dyadic atoms approach c from below
        c = a_star + min(as_cut(min(ms)), a_star)
        return c, c.is_rational and self.is_atom(c.as_fraction())

    def classify(self) -> Classification:
        cond = self.conductor()
        nonempty = cond.status != "Empty"
        reasons = {}
        infpos = True  # every level has a positive least element and tails stay away from 0
        if nonempty:
            reasons["strongly_primary"] = "non-empty conductor: strongly primary iff inf H• > 0"
            sp = Tri.YES
        else:
            a = self._inf_alpha_effective()
            if a is not None and a.sign() > 0:
                sp = Tri.YES
                reasons["strongly_primary"] = "lattice union with inf alpha_i > 0"
            else:
                sp = Tri.UNKNOWN
                reasons["strongly_primary"] = "no characterization applies"
        whole = cond.status == "Whole"
        reasons["conductor_nonempty"] = cond.reason
        return Classification(
            valuation=tri(whole), seminormal=tri(whole),
            bf=Tri.YES if sp == Tri.YES else Tri.UNKNOWN,
            strongly_primary=sp, conductor_nonempty=tri(nonempty),
            inf_positive=tri(infpos), reasons=reasons)

    def to_json(self):
        return {"type": self.kind, "alphas": self.alphas.to_json(), "bs": self.bs.to_json()}


# ---------------------------------------------------------------- threshold monoids

class IrrationalThreshold(MonoidSpec):
    """H = N_0 ∪ Q_{>alpha} for an irrational alpha >= 1."""

    kind = "irrational_threshold"
    description = "atoms = {1} ∪ ((alpha, 1+alpha] ∩ Q \\ N)"

    def __init__(self, alpha):
        alpha = RealCut.parse(alpha)
        if alpha.is_rational:
            raise SpecError("alpha", "must be irrational")
        if alpha < 1:
            raise SpecError("alpha", "must be at least 1")
        self.alpha = alpha

    @property
    def ceil_alpha(self) -> int:
        return self.alpha.ceil()

    @property
    def alpha_bar(self) -> RealCut:
        return self.alpha.frac()

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x < 0:
            return False
        return x.denominator == 1 or self.alpha < x

    def is_atom(self, u) -> bool:
        u = Fraction(u)
        if u == 1:
            return True
        return u.denominator != 1 and self.alpha < u and not (self.alpha + 1) < u

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        bound = as_cut(bound)
        found = [Fraction(1)] if not bound < 1 else []
        hi = self.alpha + 1
        for d in range(2, denom_bound + 1):
            k = (self.alpha * d).floor() + 1
            while True:
                u = Fraction(k, d)
                if hi < u or bound < u:
                    break
                if math.gcd(k, d) == 1:
                    found.append(u)
                k += 1
        return AtomList(tuple(sorted(found)), bound, not self.alpha < bound, denom_bound,
                        self.description)

    def closure(self) -> ClosureDescription:
        return ClosureDescription(1, "all positive integers", "Q")

    def conductor(self) -> ConductorDescription:
        return ConductorDescription("Threshold", self.alpha, False,
                                    "non-integers up to alpha are missing")

    def inf_atoms(self):
        return RealCut(1), True

    def sup_atoms(self):
        return self.alpha + 1, False

    def classify(self) -> Classification:
        r = "non-empty conductor and inf H• = 1 > 0"
        return Classification(Tri.NO, Tri.NO, Tri.YES, Tri.YES, Tri.YES, Tri.YES,
                              {"strongly_primary": r, "valuation": "1/2 lies in the closure, not in H"})

    def to_json(self):
        return {"type": self.kind, "alpha": self.alpha.to_json()}


class DenseThreshold(MonoidSpec):
    """H = {0} ∪ Q_{>=sigma} (strict=False) or {0} ∪ Q_{>sigma} (strict=True)."""

    kind = "dense_threshold"

    def __init__(self, sigma, strict: bool):
        sigma = RealCut.parse(sigma)
        if sigma.sign() < 0:
            raise SpecError("sigma", "must be non-negative")
        self.sigma, self.strict = sigma, bool(strict)

    @property
    def description(self):
        return "atoms = Q ∩ (sigma, 2 sigma]" if self.strict else "atoms = Q ∩ [sigma, 2 sigma)"

    def _above(self, x) -> bool:
        return self.sigma < x if self.strict else not x < self.sigma

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x <= 0:
            return x == 0
        return self._above(x)

    def is_atom(self, u) -> bool:
        u = Fraction(u)
        if u <= 0 or not self._above(u) or self.sigma.sign() == 0:
            return False
        two = self.sigma * 2
        return not two < u if self.strict else u < two

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        bound = as_cut(bound)
        found = []
        if self.sigma.sign() > 0:
            hi = self.sigma * 2
            for d in range(1, denom_bound + 1):
                k = max((self.sigma * d).floor() - 1, 1)
                while True:
                    u = Fraction(k, d)
                    if hi < u or bound < u:
                        break
                    if math.gcd(k, d) == 1 and self.is_atom(u):
                        found.append(u)
                    k += 1
        complete = self.sigma.sign() == 0 or not self.sigma < bound
        return AtomList(tuple(sorted(found)), bound, complete, denom_bound, self.description)

    def closure(self) -> ClosureDescription:
        return ClosureDescription(1, "all positive integers", "Q")

    def conductor(self) -> ConductorDescription:
        if self.sigma.sign() == 0:
            return ConductorDescription("Whole", reason="H = Q_{>=0}")
        return ConductorDescription("Threshold", self.sigma, self.strict and self.sigma.is_rational,
                                    "all rationals beyond sigma lie in H")

    def inf_atoms(self):
        return self.sigma, (not self.strict) and self.sigma.is_rational

    def sup_atoms(self):
        return self.sigma * 2, self.strict and self.sigma.is_rational

    def classify(self) -> Classification:
        pos = self.sigma.sign() > 0
        r = "non-empty conductor: strongly primary iff BF iff inf H• > 0"
        return Classification(tri(not pos), tri(not pos), tri(pos), tri(pos), Tri.YES, tri(pos),
                              {"strongly_primary": r, "bf": r})

    def to_json(self):
        return {"type": self.kind, "sigma": self.sigma.to_json(), "strict": self.strict}


# ---------------------------------------------------------------- counterexample families

class PrimeReciprocal(MonoidSpec):
    """Generated by 1/p for primes p (optionally p <= prime_bound)."""

    kind = "prime_reciprocal"

    def __init__(self, prime_bound: Optional[int] = None):
        if prime_bound is not None:
            prime_bound = int(prime_bound)
            if prime_bound < 2:
                raise SpecError("prime_bound", "must be at least 2")
            self._fg = FinitelyGenerated([Fraction(1, p) for p in primes_upto(prime_bound)])
        else:
            self._fg = None
        self.prime_bound = prime_bound

    def contains(self, x) -> bool:
        if self._fg is not None:
            return self._fg.contains(x)
        x = Fraction(x)
        if x < 0:
            return False
        b = x.denominator
        ps = [p for p in primes_upto(b) if b % p == 0]
        if math.prod(ps) != b:
            return False
        rest = x
        for p in ps:
            c = x.numerator * pow(b // p, -1, p) % p
            rest -= Fraction(c, p)
        return rest >= 0

    def is_atom(self, u) -> bool:
        if self._fg is not None:
            return self._fg.is_atom(u)
        u = Fraction(u)
        return u.numerator == 1 and is_prime(u.denominator)

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        if self._fg is not None:
            return self._fg.atoms_below(bound, denom_bound)
        bound = as_cut(bound)
        atoms = tuple(sorted(Fraction(1, p) for p in primes_upto(denom_bound) if not bound < Fraction(1, p)))
        return AtomList(atoms, bound, bound.sign() <= 0, denom_bound, "atoms = {1/p : p prime}")

    def closure(self) -> ClosureDescription:
        if self._fg is not None:
            return self._fg.closure()
        return ClosureDescription(1, "square-free positive integers",
                                  "union over square-free b of b^-1*Z",
                                  den_ok=lambda d: all(d % (p * p) for p in primes_upto(math.isqrt(d))))

    def conductor(self) -> ConductorDescription:
        if self._fg is not None:
            return self._fg.conductor()
        return ConductorDescription(
            "Empty", reason="ACCP holds but H is not strongly primary, "
                            "so the conductor cannot be non-empty")

    def inf_atoms(self):
        if self._fg is not None:
            return self._fg.inf_atoms()
        return RealCut(0), False

    def sup_atoms(self):
        if self._fg is not None:
            return self._fg.sup_atoms()
        return RealCut(Fraction(1, 2)), True

    def is_prime(self, u) -> bool:
        return self._fg is not None and self._fg.is_prime(u)

    def classify(self) -> Classification:
        if self._fg is not None:
            return self._fg.classify()
        return Classification(
            Tri.NO, Tri.NO, Tri.NO, Tri.NO, Tri.NO, Tri.NO,
            {"bf": "p lies in L(1) for every prime p",
             "strongly_primary": "strongly primary implies BF",
             "valuation": "1/6 lies in the closure, not in H",
             "conductor_nonempty": "ACCP without strong primality forces an empty conductor"})

    def to_json(self):
        out = {"type": self.kind}
        if self.prime_bound is not None:
            out["prime_bound"] = self.prime_bound
        return out


class GeometricPowers(MonoidSpec):
    """Generated by r^i, i >= 0, for a non-integral rational r > 1."""

    kind = "geometric"

    def __init__(self, r):
        r = parse_rational(r)
        if r <= 1 or r.denominator == 1:
            raise SpecError("r", "must be a non-integral rational > 1")
        self.r = r

    def _exponents_upto(self, x) -> int:
        k, p = -1, Fraction(1)
        while p <= x:
            k += 1
            p *= self.r
        return k

    def contains(self, x) -> bool:
        x = Fraction(x)
        if x <= 0:
            return x == 0
        k = self._exponents_upto(x)
        if k < 0:
            return False
        scale = self.r.denominator ** k
        if (x * scale).denominator != 1:
            return False
        target = int(x * scale)
        mask = 1
        for i in range(k + 1):
            mask = closure_add(mask, int(self.r ** i * scale), target + 1)
        return bool(mask >> target & 1)

    def is_atom(self, u) -> bool:
        u = Fraction(u)
        if u < 1:
            return False
        p = Fraction(1)
        while p < u:
            p *= self.r
        return p == u

    def atoms_below(self, bound, denom_bound: int) -> AtomList:
        bound = as_cut(bound)
        atoms, complete, p = [], True, Fraction(1)
        while not bound < p:
            if p.denominator <= denom_bound:
                atoms.append(p)
            else:
                complete = False
            p *= self.r
        return AtomList(tuple(atoms), bound, complete, denom_bound)

    def closure(self) -> ClosureDescription:
        b = self.r.denominator
        return ClosureDescription(
            1, f"divisors of powers of {b}", f"Z[1/{b}]",
            den_ok=lambda d, b=b: _divides_power(d, b))

    def conductor(self) -> ConductorDescription:
        return ConductorDescription(
            "Empty", reason="0 is not a limit point yet H is not strongly primary, "
                            "impossible with a non-empty conductor")

    def inf_atoms(self):
        return RealCut(1), True

    def sup_atoms(self):
        return None, False

    def classify(self) -> Classification:
        return Classification(
            Tri.NO, Tri.NO, Tri.YES, Tri.NO, Tri.NO, Tri.YES,
            {"bf": "finite factorization monoid",
             "strongly_primary": "r + ... + r^n has a unique factorization, blocking n H• ⊂ 1 + H",
             "conductor_nonempty": "with a non-empty conductor, inf H• > 0 would force strong primality"})

    def to_json(self):
        return {"type": self.kind, "r": str(self.r)}


def _divides_power(d: int, b: int) -> bool:
    while d > 1:
        g = math.gcd(d, b)
        if g == 1:
            return False
        d //= g
    return True


# ---------------------------------------------------------------- JSON

def spec_from_json(obj) -> MonoidSpec:
    if not isinstance(obj, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    t = obj.get("type")
    try:
        if t == "finitely_generated":
            gens = obj.get("generators")
            if not isinstance(gens, list):
                raise SpecError("generators", "list required")
            try:
                gens = [parse_rational(g) for g in gens]
            except ValueError as e:
                raise SpecError("generators", str(e)) from None
            return FinitelyGenerated(gens)
        if t == "lattice_union":
            if "alphas" not in obj:
                raise SpecError("alphas", "missing")
            alphas = SequenceRule.from_json(obj["alphas"], "alphas")
            bs = SequenceRule.from_json(obj.get("bs", {"kind": "pow2"}), "bs")
            return LatticeUnion(alphas, bs)
        if t == "irrational_threshold":
            return IrrationalThreshold(_cut_field(obj, "alpha"))
        if t == "dense_threshold":
            return DenseThreshold(_cut_field(obj, "sigma"), bool(obj.get("strict", False)))
        if t == "prime_reciprocal":
            return PrimeReciprocal(obj.get("prime_bound"))
        if t == "geometric":
            if "r" not in obj:
                raise SpecError("r", "missing")
            try:
                return GeometricPowers(parse_rational(obj["r"]))
            except ValueError as e:
                if isinstance(e, SpecError):
                    raise
                raise SpecError("r", str(e)) from None
    except SpecError:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise SpecError(str(t), str(e)) from None
    raise SpecError("type", f"unknown monoid type {t!r}")


def _cut_field(obj, name):
    if name not in obj:
        raise SpecError(name, "missing")
    try:
        return RealCut.parse(obj[name])
    except (ValueError, KeyError, TypeError) as e:
        raise SpecError(name, str(e)) from None


def load_spec(path) -> MonoidSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise SpecError(f"line {e.lineno}", e.msg) from None
    return spec_from_json(obj)


# ---------------------------------------------------------------- operation API

def member(spec: MonoidSpec, x) -> bool:
    x = Fraction(x)
    if x < 0:
        raise ValueError("membership is defined for x >= 0")
    return spec.contains(x)


def divides(spec: MonoidSpec, x, y) -> bool:
    x, y = Fraction(x), Fraction(y)
    for v in (x, y):
        if v < 0 or not spec.contains(v):
            raise ValueError(f"{v} is not an element of the monoid")
    return spec.contains(y - x) if y >= x else False


def atoms_below(spec: MonoidSpec, bound, denom_bound: int) -> AtomList:
    return spec.atoms_below(as_cut(bound), int(denom_bound))


def closure(spec: MonoidSpec) -> ClosureDescription:
    return spec.closure()


def conductor(spec: MonoidSpec) -> ConductorDescription:
    return spec.conductor()


def classify(spec: MonoidSpec) -> Classification:
    return spec.classify()
