"""Factorizations, sets of lengths, distances and catenary degrees."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactnum import RealCut, _sign_quad, as_cut, floor_quad, lcm_set
from .monoid import DenseThreshold, IrrationalThreshold, MonoidSpec, closure_add

# Largest lattice (in bits) a length table may allocate before atoms are dropped.
BIT_LIMIT = 1 << 24


class NotInMonoid(ValueError):
    def __init__(self, x, spec):
        super().__init__(f"{x} is not an element of {spec!r}")
        self.x = x


@dataclass(frozen=True)
class SearchBudget:
    value_cap: RealCut = field(default_factory=lambda: RealCut(200))
    denom_cap: int = 64
    length_cap: int = 400
    node_cap: int = 10 ** 7

    def __post_init__(self):
        object.__setattr__(self, "value_cap", as_cut(self.value_cap))
        if self.value_cap.sign() <= 0 or min(self.denom_cap, self.length_cap, self.node_cap) <= 0:
            raise ValueError("budget caps must be positive")

    def to_json(self):
        return {"value_cap": self.value_cap.to_json(), "denom_cap": self.denom_cap,
                "length_cap": self.length_cap, "node_cap": self.node_cap}


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class Factorization:
    terms: tuple  # ((atom, multiplicity), ...) sorted by atom

    @classmethod
    def of(cls, mapping) -> "Factorization":
        items = {}
        if isinstance(mapping, dict):
            mapping = mapping.items()
        for a, m in mapping:
            a = Fraction(a)
            items[a] = items.get(a, 0) + int(m)
        return cls(tuple(sorted((a, m) for a, m in items.items() if m > 0)))

    @property
    def length(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def value(self) -> Fraction:
        return sum((a * m for a, m in self.terms), Fraction(0))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def sort_key(self):
        return (self.length, self.terms)

    def to_json(self):
        return [{"atom": str(a), "mult": m} for a, m in self.terms]

    def __str__(self):
        return "{" + ",".join(f"{a}:{m}" for a, m in self.terms) + "}"


@dataclass(frozen=True)
class CertifiedSet:
    items: tuple
    exact: bool
    budget: Optional[SearchBudget] = None
    reason: str = ""

    @property
    def certificate(self) -> str:
        return "Exact" if self.exact else "LowerTruncated"

    def certificate_json(self):
        out = {"exact": self.exact}
        if not self.exact:
            out["budget"] = self.budget.to_json() if self.budget else None
            if self.reason:
                out["reason"] = self.reason
        return out


@dataclass(frozen=True)
class CertifiedValue:
    value: Optional[int]
    exact: bool
    budget: Optional[SearchBudget] = None
    reason: str = ""

    @property
    def certificate(self) -> str:
        return "Exact" if self.exact else "LowerTruncated"


# ---------------------------------------------------------------- lattice tables

class LengthTable:
    """Layered reachability on the lattice (1/scale)Z: bit v of layer k says k ∈ L(v/scale).

    Lengths are computed for the sub-monoid generated by the given atoms; they
    equal L(x) when the atom list contains every atom <= x.
    """

    def __init__(self, atoms, cap, node_cap: int = 10 ** 7, extra_dens=()):
        atoms = sorted(set(Fraction(a) for a in atoms))
        self.atoms = atoms
        self.scale = lcm_set([a.denominator for a in atoms] + [int(d) for d in extra_dens] + [1])
        self.T = math.floor(Fraction(cap) * self.scale)
        self.weights = sorted({int(a * self.scale) for a in atoms})
        self.truncated = False
        nbits = self.T + 1
        full = (1 << nbits) - 1
        layer = 1
        self.layers = [layer]
        nodes = 0
        while True:
            nxt = 0
            for w in self.weights:
                if w > self.T:
                    break
                nxt |= layer << w
            nxt &= full
            nodes += len(self.weights) * (nbits // 4096 + 1)
            if not nxt:
                break
            if nodes > node_cap:
                self.truncated = True
                break
            self.layers.append(nxt)
            layer = nxt
        self.union = 0
        for lay in self.layers:
            self.union |= lay

    def index(self, x) -> Optional[int]:
        v = Fraction(x) * self.scale
        if v.denominator != 1 or not 0 <= v <= self.T:
            return None
        return int(v)

    def lengths(self, x) -> list[int]:
        v = self.index(x)
        if v is None:
            return []
        return [k for k, lay in enumerate(self.layers) if lay >> v & 1]

    def reachable(self, x) -> bool:
        v = self.index(x)
        return v is not None and bool(self.union >> v & 1)

    def values(self):
        """Lattice values reachable by the atoms, as Fractions."""
        u, v = self.union, 0
        while u:
            if u & 1:
                yield Fraction(v, self.scale)
            u >>= 1
            v += 1


def atom_pool(spec: MonoidSpec, x, budget: SearchBudget):
    """Atoms <= x usable under the budget and whether they are all atoms <= x."""
    x = Fraction(x)
    al = spec.atoms_below(RealCut(x), budget.denom_cap)
    atoms = [a for a in al.atoms if a <= x]
    complete = al.complete
    atoms.sort(key=lambda a: a.denominator)
    while atoms and lcm_set([a.denominator for a in atoms] + [x.denominator]) * x > BIT_LIMIT:
        atoms.pop()
        complete = False
    return sorted(atoms), complete


def _length_bound_ok(spec: MonoidSpec, x: Fraction, budget: SearchBudget) -> bool:
    low, _ = spec.inf_atoms()
    if low.sign() <= 0:
        return False
    return not budget.length_cap < x / low if low.is_rational else (x / low).floor() <= budget.length_cap


def _require_member(spec, x):
    x = Fraction(x)
    if x < 0 or not spec.contains(x):
        raise NotInMonoid(x, spec)
    return x


# ---------------------------------------------------------------- Z(x)

def factorizations(spec: MonoidSpec, x, budget: SearchBudget = DEFAULT_BUDGET) -> CertifiedSet:
    x = _require_member(spec, x)
    if x == 0:
        return CertifiedSet((Factorization(()),), True)
    atoms, complete = atom_pool(spec, x, budget)
    exact = complete and _length_bound_ok(spec, x, budget)
    reason = "" if complete else "atom list incomplete below x at this denominator cap"
    if isinstance(spec, (IrrationalThreshold, DenseThreshold)):
        exact, reason = False, "threshold monoid: only factorizations over atoms within the denominator cap"
    if not atoms:
        return CertifiedSet((), False, budget, "no atoms within budget")
    scale = lcm_set([a.denominator for a in atoms] + [x.denominator])
    target = int(x * scale)
    desc = sorted(atoms, reverse=True)
    weights = [int(a * scale) for a in desc]
    n = len(weights)
    suffix = [0] * (n + 1)
    suffix[n] = 1
    for i in range(n - 1, -1, -1):
        suffix[i] = closure_add(suffix[i + 1], weights[i], target + 1)
    found = []
    counts = [0] * n
    nodes = 0
    truncated = False

    def walk(i, rem):
        nonlocal nodes, truncated
        if truncated:
            return
        nodes += 1
        if nodes > budget.node_cap:
            truncated = True
            return
        if i == n:
            if rem == 0:
                found.append(Factorization(tuple(
                    sorted((desc[j], counts[j]) for j in range(n) if counts[j]))))
            return
        w = weights[i]
        for c in range(rem // w, -1, -1):
            r2 = rem - c * w
            if suffix[i + 1] >> r2 & 1:
                counts[i] = c
                walk(i + 1, r2)
                if truncated:
                    break
        counts[i] = 0

    if suffix[0] >> target & 1:
        walk(0, target)
    if truncated:
        exact, reason = False, "node cap reached"
    found.sort(key=Factorization.sort_key)
    return CertifiedSet(tuple(found), exact, None if exact else budget, reason)


# ---------------------------------------------------------------- L(x)

def irrational_lengths(alpha: RealCut, x) -> list[int]:
    """L(x) in N_0 ∪ Q_{>alpha}: lengths k + m with m ones and k non-integral atoms."""
    x = Fraction(x)
    u, v = x.numerator, x.denominator
    p, q, c, r = alpha.p, alpha.q, alpha.c, alpha.r
    fx = u // v
    out = set()
    if v == 1:
        out.add(fx)
    D = v * r

    def fl(k_alpha: int, shift: int) -> int:
        # floor(x - shift - k_alpha*alpha)
        return floor_quad((u - shift * v) * r - k_alpha * p * v, -k_alpha * q * v, c, D)

    if v != 1:
        # one non-integral atom y = x - m with alpha < y <= 1 + alpha
        lo = max(0, fl(1, 1) + 1)
        hi = min(fx, fl(1, 0))
        out.update(1 + m for m in range(lo, hi + 1))
    k = 2
    while _sign_quad(u * r - k * p * v, -k * q * v, c) > 0:  # k alpha < x
        lo = max(0, fl(k, k) + 1)  # m > x - k(1+alpha)
        hi = min(fx, fl(k, 0))  # m < x - k alpha
        if lo <= hi:
            out.update(range(k + lo, k + hi + 1))
        k += 1
    return sorted(out)


def dense_lengths(spec: DenseThreshold, x) -> list[int]:
    x = Fraction(x)
    if x == 0:
        return [0]
    s = spec.sigma
    out = []
    k = 1
    while (s * k < x) if spec.strict else not (x < s * k):
        two = s * (2 * k)
        if spec.strict:
            if not two < x:
                out.append(k)
        elif x < two:
            out.append(k)
        if s.sign() == 0:
            break
        k += 1
    return out


def _nonintegral_split(alpha: RealCut, y: Fraction, k: int) -> Optional[list[Fraction]]:
    """k non-integral rationals in (alpha, 1+alpha) summing to y (k >= 2)."""
    hi = alpha + 1
    for den in range(2, 10 ** 6):
        base = math.floor(y * den / k)
        for num in range(base - 1, base + 3):
            a = Fraction(num, den)
            last = y - (k - 1) * a
            if (a.denominator != 1 and last.denominator != 1 and alpha < a and a < hi
                    and alpha < last and last < hi):
                return [a] * (k - 1) + [last]
    return None


def threshold_witness(spec: IrrationalThreshold, x, length: int) -> Optional[Factorization]:
    """Explicit factorization of x with the given length, from its (k, m) decomposition."""
    x = Fraction(x)
    alpha = spec.alpha
    for m in range(0, min(length, math.floor(x)) + 1):
        k = length - m
        y = x - m
        if k == 0 and y == 0:
            return Factorization.of([(1, m)]) if m else Factorization(())
        if k == 1 and spec.is_atom(y) and y != 1:
            return Factorization.of([(y, 1), (1, m)])
        if k >= 2 and alpha * k < y and y < (alpha + 1) * k:
            parts = _nonintegral_split(alpha, y, k)
            if parts:
                return Factorization.of([(a, 1) for a in parts] + [(1, m)])
    return None


def lengths(spec: MonoidSpec, x, budget: SearchBudget = DEFAULT_BUDGET) -> CertifiedSet:
    x = _require_member(spec, x)
    if isinstance(spec, IrrationalThreshold):
        return CertifiedSet(tuple(irrational_lengths(spec.alpha, x)), True)
    if isinstance(spec, DenseThreshold):
        if spec.sigma.sign() == 0 and x > 0:
            return CertifiedSet((), True, reason="Q_{>=0} has no atoms")
        return CertifiedSet(tuple(dense_lengths(spec, x)), True)
    if x == 0:
        return CertifiedSet((0,), True)
    atoms, complete = atom_pool(spec, x, budget)
    if not atoms:
        return CertifiedSet((), False, budget, "no atoms within budget")
    table = LengthTable(atoms, x, budget.node_cap, extra_dens=[x.denominator])
    exact = complete and _length_bound_ok(spec, x, budget) and not table.truncated
    reason = ""
    if not exact:
        reason = "node cap reached" if table.truncated else "atom list incomplete below x at this denominator cap"
    return CertifiedSet(tuple(table.lengths(x)), exact, None if exact else budget, reason)


# ---------------------------------------------------------------- distance and catenary degrees

def distance(z: Factorization, z2: Factorization) -> int:
    a, b = z.as_dict(), z2.as_dict()
    common = {k: min(a[k], b[k]) for k in a.keys() & b.keys()}
    ra = sum(m - common.get(k, 0) for k, m in a.items())
    rb = sum(m - common.get(k, 0) for k, m in b.items())
    return max(ra, rb)


def bottleneck_catenary(zs) -> int:
    """Least N connecting all factorizations by N-chains (max edge of a minimax spanning tree)."""
    zs = sorted(zs, key=Factorization.sort_key)
    n = len(zs)
    if n <= 1:
        return 0
    edges = sorted((distance(zs[i], zs[j]), i, j) for i in range(n) for j in range(i + 1, n))
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    joined, worst = 0, 0
    for d, i, j in edges:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            worst = d
            joined += 1
            if joined == n - 1:
                break
    return worst


def _monotone_ok(zs, dist, N) -> bool:
    n = len(zs)
    lens = [z.length for z in zs]
    for s in range(n):
        seen = {s}
        stack = [s]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j not in seen and lens[j] >= lens[i] and dist[i][j] <= N:
                    seen.add(j)
                    stack.append(j)
        if any(lens[t] >= lens[s] and t not in seen for t in range(n)):
            return False
    return True


def monotone_bottleneck(zs) -> int:
    """Least N such that every pair is joined by an N-chain with monotone lengths."""
    zs = sorted(zs, key=Factorization.sort_key)
    n = len(zs)
    if n <= 1:
        return 0
    dist = [[distance(a, b) for b in zs] for a in zs]
    cands = sorted({d for row in dist for d in row if d})
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _monotone_ok(zs, dist, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def catenary(spec: MonoidSpec, x, budget: SearchBudget = DEFAULT_BUDGET) -> CertifiedValue:
    zs = factorizations(spec, x, budget)
    return CertifiedValue(bottleneck_catenary(zs.items), zs.exact, zs.budget, zs.reason)


def monotone_catenary(spec: MonoidSpec, x, budget: SearchBudget = DEFAULT_BUDGET) -> CertifiedValue:
    zs = factorizations(spec, x, budget)
    return CertifiedValue(monotone_bottleneck(zs.items), zs.exact, zs.budget, zs.reason)
