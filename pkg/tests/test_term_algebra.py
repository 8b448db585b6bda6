import math

import numpy as np
import pytest

from errors import InputError
from term_algebra import (
    CIRC,
    PREC_SUCC,
    Node,
    Polynomial,
    Signature,
    apply_op_map,
    degree,
    is_multilinear,
    monomial_order,
    multilinear_basis,
    opposite_map,
    order_key,
    random_monomial,
    substitute,
)


def catalan(n):
    return math.comb(2 * n, n) // (n + 1)


@pytest.mark.parametrize("sig, n", [(CIRC, n) for n in range(1, 6)] + [(PREC_SUCC, n) for n in range(1, 5)])
def test_multilinear_basis_counts(sig, n):
    basis = multilinear_basis(sig, n)
    assert len(basis) == catalan(n - 1) * math.factorial(n) * len(sig) ** (n - 1)
    assert len(set(basis)) == len(basis)
    assert all(is_multilinear(m, n) for m in basis)


def test_multilinear_basis_is_strictly_increasing():
    for sig in (CIRC, PREC_SUCC):
        for n in range(1, 5):
            keys = [order_key(m, sig) for m in multilinear_basis(sig, n)]
            assert all(a < b for a, b in zip(keys, keys[1:]))


def test_monomial_order_examples():
    succ_then_prec = Node("prec", Node("succ", 1, 2), 3)
    pure_prec = Node("prec", Node("prec", 1, 2), 3)
    prec_then_succ = Node("succ", Node("prec", 1, 2), 3)
    assert monomial_order(succ_then_prec, pure_prec, PREC_SUCC) == 1
    assert monomial_order(prec_then_succ, pure_prec, PREC_SUCC) == 1
    assert monomial_order(pure_prec, pure_prec, PREC_SUCC) == 0
    assert monomial_order(1, Node("prec", 1, 2), PREC_SUCC) == -1


def test_substitute_examples():
    assert substitute(1, {1: Node("circ", 2, 3)}) == Node("circ", 2, 3)
    assert substitute(Node("circ", 1, 2), {1: 1, 2: 2}) == Node("circ", 1, 2)
    assert substitute(Node("prec", 1, 2), {1: 2, 2: 1}) == Node("prec", 2, 1)
    with pytest.raises(InputError):
        substitute(Node("circ", 1, 2), {1: 1})


def test_polynomial_arithmetic_drops_zeros():
    a = Polynomial({Node("circ", 1, 2): 1, Node("circ", 2, 1): -1})
    b = Polynomial({Node("circ", 2, 1): -1})
    assert (a - b) == Polynomial.monomial(Node("circ", 1, 2))
    assert (a - a).is_zero()
    assert (a - a) == 0
    assert Polynomial({1: 0}).is_zero()
    assert (2 * a).coefficient(Node("circ", 1, 2)) == 2
    assert a.substitute({1: 2, 2: 1}) == -a


def test_opposite_map_swaps_arguments():
    m = Node("circ", Node("circ", 1, 2), 3)
    assert apply_op_map(m, opposite_map(CIRC, CIRC)) == Node("circ", 3, Node("circ", 2, 1))


def test_signature_validation():
    with pytest.raises(InputError):
        Signature(())
    with pytest.raises(InputError):
        Signature.from_glyphs(["<", "<"])
    with pytest.raises(InputError):
        Signature.from_glyphs(["?"])
    assert Signature.from_glyphs(["<", ">"]) == PREC_SUCC


def test_random_monomial_shapes():
    rng = np.random.default_rng(3)
    for n in range(1, 7):
        m = random_monomial(PREC_SUCC, n, rng)
        assert degree(m) == n
        assert is_multilinear(m, n)
        g = random_monomial(CIRC, n, rng, generators=2)
        assert degree(g) == n
