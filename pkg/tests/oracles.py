"""Brute-force reference computations shared by the tests."""

import math
from fractions import Fraction
from functools import lru_cache


def fg_member(gens, x) -> bool:
    """Exhaustive coefficient search."""
    gens = sorted(Fraction(g) for g in gens)
    x = Fraction(x)

    def go(i, rem):
        if rem == 0:
            return True
        if i == len(gens):
            return False
        g = gens[i]
        k = 0
        while k * g <= rem:
            if go(i + 1, rem - k * g):
                return True
            k += 1
        return False

    return go(0, x)


def fg_factorizations(atoms, x):
    """All multiplicity vectors over the sorted atom list with value x."""
    atoms = sorted(Fraction(a) for a in atoms)
    x = Fraction(x)
    out = []

    def go(i, rem, acc):
        if rem == 0:
            out.append(tuple(acc + [0] * (len(atoms) - len(acc))))
            return
        if i == len(atoms):
            return
        a = atoms[i]
        k = 0
        while k * a <= rem:
            go(i + 1, rem - k * a, acc + [k])
            k += 1

    go(0, x, [])
    return atoms, out


def fg_lengths(atoms, x):
    _, zs = fg_factorizations(atoms, x)
    return sorted({sum(z) for z in zs})


def divisor_lcm_closure(dens):
    """Close a set of positive integers under divisors and pairwise lcm."""
    s = set()
    for d in dens:
        s.update(k for k in range(1, d + 1) if d % k == 0)
    changed = True
    while changed:
        changed = False
        for a in list(s):
            for b in list(s):
                m = a * b // math.gcd(a, b)
                if m not in s:
                    s.add(m)
                    changed = True
    return sorted(s)


def vec_distance(z1, z2):
    common = [min(a, b) for a, b in zip(z1, z2)]
    return max(sum(z1) - sum(common), sum(z2) - sum(common))


def brute_catenary(zs):
    """Least N such that the graph with edges of distance <= N is connected."""
    if len(zs) <= 1:
        return 0
    for N in range(0, max(sum(z) for z in zs) + 1):
        seen = {0}
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(len(zs)):
                if j not in seen and vec_distance(zs[i], zs[j]) <= N:
                    seen.add(j)
                    stack.append(j)
        if len(seen) == len(zs):
            return N
    raise AssertionError
