import random

import pytest

from helpers import P, random_poly
from singclass.errors import InputError
from singclass.invariants import milnor_number, tjurina_number
from singclass.ring import FieldSpec, random_automorphism, substitute_jet
from singclass.splitting import normalize_quadratic, quadratic_normal_form, split


def test_char0_example():
    res = split(P("x^2 + 2*x*y^2 + y^3 + y^4", 0), 8)
    assert res.quad_rank == 1 and res.corank == 1
    assert res.residual == P("y^3", 0)
    assert res.verify()


def test_char2_pairs_and_squares():
    res = split(P("x1*x2 + x3^3", 2, "x1,x2,x3"), 6)
    assert res.quad_rank == 2 and res.corank == 1
    assert res.residual_in_corank_vars() == P("x^3", 2, "x")
    res = split(P("x^2 + y^3", 2), 6)
    assert res.quad_rank == 0  # squares stay in the residual
    assert res.residual.order() == 2 and res.residual.truncate(2) != res.residual
    assert res.verify()


def test_hyperbolic_pair_char0():
    res = split(P("x*y", 0), 4)
    assert res.quad_rank == 2 and res.residual.is_zero()


def test_full_rank_has_no_residual_block():
    res = split(P("x^2 + y^2 + x^3", 5), 6)
    assert res.corank == 0 and res.residual_in_corank_vars() is None


def test_bound_checked():
    with pytest.raises(InputError):
        split(P("x^2", 0), 1)


@pytest.mark.parametrize("p", [0, 2, 3, 5])
def test_reconstruction_and_invariants(p):
    fld = FieldSpec(p)
    rng = random.Random(31 + p)
    quad = {0: "x^2 + y^2", 2: "x*y"}.get(p, "x^2 + 2*y^2")
    for seed in range(8):
        f0 = P(quad, p, "x,y,z").__add__(random_poly(fld, 3, rng, 3, 4, 3))
        f0 = f0 + P("z^5", p, "x,y,z")
        phi = random_automorphism(3, fld, 8, seed)
        f = substitute_jet(f0, phi)
        res = split(f, 8)
        assert res.verify()
        assert substitute_jet(f.truncate(8), res.transform) == res.quad_form + res.residual
        r = res.residual_in_corank_vars()
        tf, tr = tjurina_number(f0, 30), tjurina_number(r, 30)
        if tf.finite and tr.finite and int(tf) <= 5:
            assert int(tf) == int(tr)


def test_normal_form_is_idempotent():
    f = P("x^2 + x*y + 3*y^2 + y^3", 7)
    change, g, block = normalize_quadratic(f, 5)
    change2, g2, block2 = quadratic_normal_form(g, 5)
    assert block2 == block
    assert g2.truncate(2) == g.truncate(2)
