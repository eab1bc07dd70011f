import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_catenary, fg_factorizations, fg_lengths, vec_distance
from puiseux_kit.exactnum import RealCut
from puiseux_kit.factorize import (Factorization, NotInMonoid, SearchBudget, catenary, distance,
                                   factorizations, irrational_lengths, lengths, monotone_catenary,
                                   threshold_witness)
from puiseux_kit.monoid import (DenseThreshold, FinitelyGenerated, GeometricPowers,
                                IrrationalThreshold, LatticeUnion, PrimeReciprocal, SequenceRule)

F = Fraction
FG23 = FinitelyGenerated([2, 3])
IT = IrrationalThreshold("1+1*sqrt(2)")


def Z(d):
    return Factorization.of(d)


def test_factorizations_examples():
    g = factorizations(GeometricPowers(F(3, 2)), F(15, 4))
    assert g.exact and [z.as_dict() for z in g.items] == [{F(3, 2): 1, F(9, 4): 1}]
    z6 = factorizations(FG23, 6)
    assert z6.exact and {tuple(sorted(z.as_dict().items())) for z in z6.items} == {
        ((2, 3),), ((3, 2),)}
    z2 = factorizations(FG23, 2)
    assert z2.exact and [z.as_dict() for z in z2.items] == [{2: 1}]
    with pytest.raises(NotInMonoid):
        factorizations(FG23, 1)


def test_lengths_examples():
    assert list(lengths(IT, 10).items) == [3, 4, 5, 6, 7, 10]
    assert list(lengths(IT, F(121, 25)).items) == [2, 3]
    r = lengths(FG23, 6)
    assert r.exact and list(r.items) == [2, 3]
    with pytest.raises(NotInMonoid):
        lengths(IT, F(3, 2))


def test_distance_examples():
    assert distance(Z({2: 3}), Z({3: 2})) == 3
    z = Z({2: 2, 3: 1})
    assert distance(z, z) == 0
    # common part {2:1, 3:1}; residues {2:1} and {3:1}
    assert distance(Z({2: 2, 3: 1}), Z({2: 1, 3: 2})) == 1


def test_catenary_examples():
    assert catenary(FG23, 6).value == 3
    assert catenary(FG23, 2).value == 0
    c12 = catenary(FG23, 12)
    assert c12.exact and c12.value == 3
    _, zs = fg_factorizations([2, 3], 12)
    assert brute_catenary(zs) == 3


def test_threshold_sets_never_exact():
    for spec, x in ((IT, 10), (DenseThreshold(RealCut(1), True), F(5, 2))):
        z = factorizations(spec, x, SearchBudget(denom_cap=6, node_cap=10 ** 4))
        assert not z.exact
        assert z.certificate == "LowerTruncated"
        assert z.certificate_json()["budget"] is not None
        for f in z.items:
            assert f.value == x


def test_prime_reciprocal_truncated_lengths():
    r = lengths(PrimeReciprocal(), 1, SearchBudget(denom_cap=5))
    assert {2, 3, 5} <= set(r.items) and not r.exact
    r5 = lengths(PrimeReciprocal(5), 1)
    assert r5.exact and {2, 3, 5} <= set(r5.items)


def random_it_length(alpha, rng):
    """Build an element with a known length from a random (k, m) decomposition."""
    m = rng.randint(0, 6)
    k = rng.choice([0, 1, 2, 3, 4])
    parts = []
    while len(parts) < k:
        d = rng.randint(2, 40)
        lo = (alpha * d).floor() + 1
        hi = ((alpha + 1) * d).floor()
        a = F(rng.randint(lo, hi), d)
        if a.denominator != 1 and alpha < a and not alpha + 1 < a:
            parts.append(a)
    return sum(parts, F(m)), k + m


def test_irrational_solver_vs_random_constructions():
    rng = random.Random(7)
    alpha = IT.alpha
    for _ in range(10 ** 4):
        x, l = random_it_length(alpha, rng)
        if x == 0:
            continue
        assert l in irrational_lengths(alpha, x)


@pytest.mark.parametrize("x", [10, F(121, 25), F(37, 3), F(71, 7), 13])
def test_every_solver_length_has_a_witness(x):
    for l in irrational_lengths(IT.alpha, x):
        z = threshold_witness(IT, x, l)
        assert z is not None and z.value == x and z.length == l
        assert all(IT.is_atom(a) for a in z.as_dict())


fg_specs = st.sampled_from([[2, 3], [3, 5], [4, 6, 7], [F(1, 2), F(1, 3)], [F(3, 2), 2, F(5, 2)]])


@settings(max_examples=40, deadline=None)
@given(fg_specs, st.integers(0, 60))
def test_fg_factorizations_match_oracle(gens, n):
    H = FinitelyGenerated(gens)
    x = F(n, 2)
    if not H.contains(x):
        return
    atoms, zs = fg_factorizations(H.atoms, x)
    got = factorizations(H, x)
    assert got.exact
    want = {tuple(sorted((a, k) for a, k in zip(atoms, z) if k)) for z in zs}
    assert {tuple(sorted(z.as_dict().items())) for z in got.items} == want
    L = lengths(H, x)
    assert list(L.items) == fg_lengths(H.atoms, x)
    for z in got.items:
        assert z.value == x and z.length in L.items
    lo, hi = min(H.atoms), max(H.atoms)
    if L.items:
        assert -(-x // hi) <= L.items[0] and L.items[-1] <= x // lo


@settings(max_examples=40, deadline=None)
@given(fg_specs, st.integers(1, 40))
def test_catenary_bounds(gens, n):
    H = FinitelyGenerated(gens)
    x = F(n, 2)
    if not H.contains(x):
        return
    c = catenary(H, x)
    cm = monotone_catenary(H, x)
    L = lengths(H, x).items
    assert c.exact and cm.exact
    assert c.value <= cm.value <= max(L)
    atoms, zs = fg_factorizations(H.atoms, x)
    assert c.value == brute_catenary(zs)


vecs = st.lists(st.integers(0, 4), min_size=3, max_size=3)


@given(vecs, vecs)
def test_distance_properties(a, b):
    atoms = [2, 3, 5]
    za = Z({t: k for t, k in zip(atoms, a) if k})
    zb = Z({t: k for t, k in zip(atoms, b) if k})
    d = distance(za, zb)
    assert d == distance(zb, za) == vec_distance(a, b)
    assert (d == 0) == (a == b)
    assert abs(sum(a) - sum(b)) <= d


def test_lattice_lengths_exact_small():
    spec = LatticeUnion(SequenceRule.prop39(), SequenceRule("pow2"))
    r = lengths(spec, F(53, 4), SearchBudget(denom_cap=8))
    assert r.exact and r.items[0] >= 2
