"""Exact factorization invariants of Puiseux monoids."""

from .exactnum import Ordering, RealCut, canonicalize, compare, floor_mul, gcd_set, lcm_set
from .factorize import (CertifiedSet, CertifiedValue, Factorization, NotInMonoid, SearchBudget,
                        catenary, distance, factorizations, lengths, monotone_catenary)
from .invariants import (Lambda, M_of, aap_fit, delta_of_set, delta_scan, elasticity, omega,
                         tame_degree, tau, union_k)
from .monoid import (DenseThreshold, FinitelyGenerated, GeometricPowers, IrrationalThreshold,
                     LatticeUnion, PrimeReciprocal, SequenceRule, SpecError, Tri, atoms_below,
                     classify, closure, conductor, divides, load_spec, member, spec_from_json)

__version__ = "0.1.0"
