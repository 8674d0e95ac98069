"""Shared fixtures: seeded disguises and small polynomial builders."""

from __future__ import annotations

import random

from singclass.determinacy import contact_determinacy_bound, right_determinacy_bound
from singclass.ring import FieldSpec, Polynomial, parse_poly, random_automorphism, substitute_jet
from singclass.stdbasis import monomials_of_degree


def P(text: str, p: int = 0, names: str = "x,y") -> Polynomial:
    return parse_poly(text, FieldSpec(p), names.split(","))


def disguise(f: Polynomial, seed: int, contact: bool = True, noise_terms: int = 2) -> Polynomial:
    """Random coordinate change (and unit, for contact) plus noise beyond the determinacy bound."""
    bound = contact_determinacy_bound(f) if contact else right_determinacy_bound(f)
    B = bound.general + 1
    phi = random_automorphism(f.nvars, f.field, B, seed, contact=contact)
    g = substitute_jet(f, phi)
    rng = random.Random(seed)
    for _ in range(noise_terms):
        e = rng.choice(monomials_of_degree(f.nvars, B))
        g = g + Polynomial.monomial(f.field, e, f.field.random_element(rng, nonzero=True))
    return g


def random_poly(fld: FieldSpec, n: int, rng: random.Random, dmin: int = 2, dmax: int = 6, terms: int = 4) -> Polynomial:
    out = {}
    for _ in range(terms):
        d = rng.randint(dmin, dmax)
        e = rng.choice(monomials_of_degree(n, d))
        out[e] = fld.random_element(rng, nonzero=True)
    return Polynomial(fld, n, out)
