"""Field towers: axioms, embeddings, minimal polynomials, linear algebra."""

import numpy as np
import pytest

from brownlevi import fields


@pytest.mark.parametrize("q,degs", [(2, (1, 2, 3, 4)), (3, (1, 2, 3)), (4, (1, 2)), (5, (1, 2)), (29, (1, 2))])
def test_field_axioms(q, degs):
    f = fields.get_field(q, degs)
    assert f.q == q
    for a in range(q):
        assert f.add_t[a, 0] == a
        assert f.mul_t[a, 1] == a and f.mul_t[a, 0] == 0
        assert f.add_t[a, f.neg_t[a]] == 0
        if a:
            assert f.mul_t[a, f.inv_t[a]] == 1
        for b in range(q):
            assert f.add_t[a, b] == f.add_t[b, a]
            assert f.mul_t[a, b] == f.mul_t[b, a]
            for c in range(q):
                assert f.mul_t[a, f.add_t[b, c]] == f.add_t[f.mul_t[a, b], f.mul_t[a, c]]


def test_prime_field_is_residue_indexed():
    f = fields.get_field(29, (1, 2))
    assert f.prime
    assert f.add_t[17, 20] == (17 + 20) % 29
    assert f.mul_t[17, 20] == (17 * 20) % 29


def test_generator_order():
    for q, degs in [(4, (1, 2)), (8, (1, 2)), (9, (1, 2))]:
        f = fields.get_field(q, degs)
        x, o = f.generator, 1
        while x != 1:
            x = int(f.mul_t[x, f.generator])
            o += 1
        assert o == q - 1


def test_subfield_generator_orders():
    f = fields.get_field(2, (1, 2, 3, 4))
    t = f.tower
    for d in (1, 2, 3, 4):
        w = t.subfield_generator(d)
        x, o = w, 1
        while x != 1:
            x = t.mul(x, w)
            o += 1
        assert o == 2**d - 1


def test_embeddings_commute():
    # F_{q} -> F_{q^2} -> F_{q^4} equals F_q -> F_{q^4}: all are literal subsets
    f = fields.get_field(2, (1, 2, 3, 4))
    t = f.tower
    sub2 = set(t.subfield_codes(2))
    sub4 = set(t.subfield_codes(4))
    sub12 = set(t.subfield_codes(12))
    assert sub2 <= sub4 <= sub12
    # Frobenius x -> x^{2^2} fixes F_4 pointwise
    for c in sub2:
        assert t.pow(c, 4) == c


def test_minpoly_over_subfield():
    f4 = fields.get_field(4, (1, 2))
    t = f4.tower
    w = t.subfield_generator(2)  # generator of F_4 inside F_16
    assert t.minpoly_over(w, 2) == [1, 1, 1]  # x^2 + x + 1 over F_2
    w16 = t.subfield_generator(4)
    mp = t.minpoly_over(w16, 4)  # degree-2 minimal polynomial over F_4
    assert len(mp) == 3 and mp[-1] == 1
    assert t.eval_poly(mp, w16) == 0


def test_frobenius_permutation():
    f = fields.get_field(8, (1,))
    frob2 = f.frob[f.frob[f.frob]]  # x -> x^8 = x
    assert (frob2 == np.arange(8, dtype=np.uint8)).all()


def test_linear_algebra_over_f4():
    f = fields.get_field(4, (1, 2))
    # second row is omega times the first (2 = omega, 3 = omega^2), third is new
    m = np.array([[1, 2, 3], [2, 3, 1], [0, 1, 0]], dtype=np.uint8)
    red, piv = fields.rref(m, f)
    assert len(piv) == 2
    ns = fields.nullspace(m, f)
    assert ns.shape[1] == 1
    img = fields.mat_mul(m, ns, f)
    assert not img.any()
    rhs = fields.mat_mul(m, np.array([[1], [2], [3]], dtype=np.uint8), f).reshape(-1)
    x = fields.solve(m, rhs, f)
    assert (fields.mat_mul(m, x.reshape(-1, 1), f).reshape(-1) == rhs).all()


def test_mat_mul_rectangular():
    f = fields.get_field(4, (1, 2))
    rng = np.random.default_rng(1)
    a = rng.integers(0, 4, size=(4, 2)).astype(np.uint8)
    b = rng.integers(0, 4, size=(2, 3)).astype(np.uint8)
    got = fields.mat_mul(a, b, f)
    assert got.shape == (4, 3)
    for i in range(4):
        for j in range(3):
            acc = 0
            for k in range(2):
                acc = f.add_t[acc, f.mul_t[a[i, k], b[k, j]]]
            assert got[i, j] == acc


def test_mat_pow_order():
    f = fields.get_field(2, (1, 2))
    t = f.tower
    w = t.subfield_generator(2)
    mp = t.minpoly_over(w, 2)
    comp = np.array([[0, 1], [1, 1]], dtype=np.uint8)  # companion of x^2+x+1
    assert (fields.mat_pow(comp, 3, f) == np.eye(2, dtype=np.uint8)).all()
    assert not (fields.mat_pow(comp, 1, f) == np.eye(2, dtype=np.uint8)).all()


def test_prime_power_validation():
    assert fields.prime_power(8) == (2, 3)
    assert fields.prime_power(29) == (29, 1)
    with pytest.raises(ValueError):
        fields.prime_power(12)
