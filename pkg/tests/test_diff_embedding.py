import numpy as np
import pytest

from diff_embedding import (
    DiffPolynomial,
    DiffVariable,
    deriv_d,
    deriv_pd,
    embed,
    tau,
    tau_nov,
    tau_rank,
    verify_identity_under_tau,
    weight_profile,
)
from errors import InputError
from presentation_loader import builtin
from term_algebra import CIRC, PREC_SUCC, Node, random_monomial
from term_parser import parse, parse_monomial


def x(index, d_order=0, pd_order=0):
    return DiffPolynomial.variable(index, d_order, pd_order)


def test_products_on_generators():
    assert str(tau(parse_monomial("x1>x2", PREC_SUCC))) == "x1^(0,1)*x2^(1,0)"
    assert str(tau(parse_monomial("x1<x2", PREC_SUCC))) == "x1^(0,0)*x2^(1,1)"
    assert str(tau_nov(parse_monomial("x1*x2", CIRC))) == "x1^(0,0)*x2^(1,0)"
    assert tau(1) == x(1)


def test_printing_signs_and_coefficients():
    image = tau(parse("x1>x2 - x2>x1", PREC_SUCC))
    assert str(image) == "x1^(0,1)*x2^(1,0) - x1^(1,0)*x2^(0,1)"
    assert str(x(1).scale(-2) + x(2)) == "-2 x1^(0,0) + x2^(0,0)"
    assert str(DiffPolynomial()) == "0"


def test_derivations_follow_leibniz():
    product = x(1) * x(2)
    assert deriv_d(product) == x(1, 1, 0) * x(2) + x(1) * x(2, 1, 0)
    assert deriv_pd(x(1) * x(1)) == (x(1) * x(1, 0, 1)).scale(2)
    assert deriv_d(DiffPolynomial()).is_zero()


def test_derivations_commute():
    rng = np.random.default_rng(1)
    for _ in range(10):
        p = tau(random_monomial(PREC_SUCC, 4, rng))
        assert deriv_d(deriv_pd(p)) == deriv_pd(deriv_d(p))


def test_dernov_identities_vanish():
    for relation in builtin("dernov").relations:
        assert verify_identity_under_tau(relation)
    for relation in builtin("novikov").relations:
        assert verify_identity_under_tau(relation, "tau_nov")
    assert not verify_identity_under_tau(builtin("dernov_dual").relations[0])
    assert not verify_identity_under_tau(parse("(a*b)*c - a*(b*c)", CIRC), "tau_nov")


def test_weights_of_images():
    rng = np.random.default_rng(2)
    for k in range(1, 6):
        profile = weight_profile(tau(random_monomial(PREC_SUCC, k, rng)))
        assert profile.homogeneous
        assert profile.common == (k - 1, k - 1)
    mixed = weight_profile(x(1, 1, 0) + x(2))
    assert not mixed.homogeneous
    assert mixed.common is None


def test_tau_rank_matches_dernov_dimensions(expansion):
    assert tau_rank(1) == 1
    assert tau_rank(2) == 4
    assert tau_rank(3) == 36 == expansion.component_dim(builtin("dernov"), 3)


def test_tau_kernel_at_arity_four(expansion):
    # the four identities leave 91 dimensions that tau sends to zero
    assert tau_rank(4) == 400
    assert expansion.component_dim(builtin("dernov"), 4) - tau_rank(4) == 91


def test_embedding_errors():
    with pytest.raises(InputError):
        embed(1, "phi")
    with pytest.raises(InputError):
        tau(Node("circ", 1, 2))
    with pytest.raises(InputError):
        DiffPolynomial.variable(0)
    with pytest.raises(InputError):
        DiffPolynomial.variable(1, -1, 0)


def test_variables_sort_by_index_then_orders():
    assert sorted([DiffVariable(2), DiffVariable(1, 1, 0), DiffVariable(1)]) == [
        DiffVariable(1), DiffVariable(1, 1, 0), DiffVariable(2)]
