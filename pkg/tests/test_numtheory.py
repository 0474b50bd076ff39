"""Number-theory layer: order polynomials, cyclotomic factorization, ell-parts."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brownlevi.errors import InvalidPrime, NotCyclotomicProduct
from brownlevi.numtheory import (
    E_ell,
    IntPolynomial,
    cyclo_factor,
    cyclotomic_poly,
    e_ell,
    ell_part,
    order_poly_gl,
    phi_valuation,
    predicted_sylow_order,
    x_power,
)


def gl_order(n, q):
    # independent of the polynomial machinery: |GL_n(q)| = prod (q^n - q^i)
    out = 1
    for i in range(n):
        out *= q**n - q**i
    return out


def test_cyclotomic_small():
    assert cyclotomic_poly(1).coeffs == (-1, 1)
    assert cyclotomic_poly(2).coeffs == (1, 1)
    # oracle: divide x^6 - 1 by Phi_1 Phi_2 Phi_3 exactly
    x6 = IntPolynomial([-1, 0, 0, 0, 0, 0, 1])
    q = x6
    for d in (1, 2, 3):
        q, r = q.divmod_exact(cyclotomic_poly(d))
        assert r.is_zero()
    assert cyclotomic_poly(6).coeffs == q.coeffs == (1, -1, 1)


@given(st.integers(min_value=1, max_value=40))
def test_cyclotomic_degree_is_totient(n):
    phi = len([k for k in range(1, n + 1) if __import__("math").gcd(k, n) == 1])
    assert cyclotomic_poly(n).degree == phi


@given(st.integers(min_value=1, max_value=24))
def test_product_of_cyclotomics_is_xn_minus_1(n):
    prod = IntPolynomial([1])
    for d in range(1, n + 1):
        if n % d == 0:
            prod = prod * cyclotomic_poly(d)
    assert prod.coeffs == IntPolynomial([-1] + [0] * (n - 1) + [1]).coeffs


def test_order_poly_gl_small():
    assert order_poly_gl(1).coeffs == (-1, 1)
    # x(x-1)^2(x+1)
    expect = x_power(1) * cyclotomic_poly(1) * cyclotomic_poly(1) * cyclotomic_poly(2)
    assert order_poly_gl(2).coeffs == expect.coeffs
    # derived: factor prod_{i<=4}(x^i - 1) into cyclotomics
    expect4 = x_power(6)
    for d, m in ((1, 4), (2, 2), (3, 1), (4, 1)):
        for _ in range(m):
            expect4 = expect4 * cyclotomic_poly(d)
    assert order_poly_gl(4).coeffs == expect4.coeffs


@given(st.integers(min_value=1, max_value=6), st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 29]))
def test_order_poly_evaluates_to_group_order(n, q):
    assert order_poly_gl(n)(q) == gl_order(n, q)


def test_cyclo_factor_examples():
    f = cyclo_factor(x_power(1) * cyclotomic_poly(1) * cyclotomic_poly(2))
    assert f.x_exponent == 1 and f.factors == ((1, 1), (2, 1))
    f3 = cyclo_factor(order_poly_gl(3))
    assert f3.x_exponent == 3 and f3.factors == ((1, 3), (2, 1), (3, 1))
    with pytest.raises(NotCyclotomicProduct):
        cyclo_factor(IntPolynomial([2, 0, 1]))  # x^2 + 2
    with pytest.raises(NotCyclotomicProduct):
        cyclo_factor(IntPolynomial([2]))  # constant 2
    with pytest.raises(NotCyclotomicProduct):
        cyclo_factor(IntPolynomial([]))


@settings(max_examples=40)
@given(
    st.integers(min_value=0, max_value=3),
    st.lists(st.tuples(st.integers(1, 10), st.integers(1, 3)), max_size=4),
)
def test_cyclo_factor_reconstruction_roundtrip(xe, pairs):
    poly = x_power(xe)
    mults = {}
    for e, a in pairs:
        mults[e] = mults.get(e, 0) + a
    for e, a in mults.items():
        for _ in range(a):
            poly = poly * cyclotomic_poly(e)
    fac = cyclo_factor(poly)
    assert fac.x_exponent == xe
    assert dict(fac.factors) == mults
    assert fac.reconstruct().coeffs == poly.coeffs


def test_e_ell_examples():
    assert e_ell(5, 4) == 2
    assert e_ell(7, 2) == 3
    assert e_ell(13, 3) == 3
    with pytest.raises(InvalidPrime):
        e_ell(2, 5)
    with pytest.raises(InvalidPrime):
        e_ell(5, 5)
    with pytest.raises(InvalidPrime):
        e_ell(9, 2)


def test_E_ell_examples():
    assert E_ell(5, 4, 12) == [2, 10]
    assert E_ell(3, 4, 10) == [1, 3, 9]
    assert E_ell(13, 3, 40) == [3, 39]


@given(st.sampled_from([3, 5, 7, 13]), st.sampled_from([2, 3, 4, 5, 8, 9, 11]))
def test_E_ell_matches_phi_divisibility(ell, q):
    # both definitions: n in E_ell iff ell | Phi_n(q)
    if q % ell == 0:
        return
    bound = 30
    members = set(E_ell(ell, q, bound))
    for n in range(1, bound + 1):
        assert (cyclotomic_poly(n)(q) % ell == 0) == (n in members)


def test_ell_part():
    assert ell_part(180, 5) == 5
    assert ell_part(48, 2) == 16
    assert ell_part(21, 5) == 1


def test_phi_valuation():
    assert phi_valuation(order_poly_gl(4), 2) == 2
    assert phi_valuation(order_poly_gl(2), 2) == 1
    assert phi_valuation(order_poly_gl(2), 4) == 0


def test_predicted_sylow_order_examples():
    assert gl_order(4, 2) == 20160
    assert predicted_sylow_order(4, 2, 3) == 9
    assert gl_order(2, 4) == 180
    assert predicted_sylow_order(2, 4, 5) == 5
    assert gl_order(2, 7) == 2016
    assert predicted_sylow_order(2, 7, 5) == 1


@given(
    st.integers(min_value=1, max_value=5),
    st.sampled_from([2, 3, 4, 5, 8, 9]),
    st.sampled_from([3, 5, 7, 13]),
)
def test_predicted_sylow_order_equals_ell_part_of_group_order(n, q, ell):
    if q % ell == 0:
        return
    assert predicted_sylow_order(n, q, ell) == ell_part(gl_order(n, q), ell)


def test_prime_context():
    from brownlevi.numtheory import PrimeContext

    pc = PrimeContext.create(5, 4, 12)
    assert pc.e == 2 and pc.E_truncated == (2, 10) and pc.p == 2
    pc3 = PrimeContext.create(3, 4, 10)
    assert pc3.e == 1 and pc3.E_truncated == (1, 3, 9)
    with pytest.raises(InvalidPrime):
        PrimeContext.create(2, 4, 10)
