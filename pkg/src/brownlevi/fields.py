"""Finite field towers with exact table-driven arithmetic.

One ambient field F_{p^M} is built per context (M = f * lcm of the needed
extension degrees over F_q, q = p^f).  Elements are integer codes: the base-p
encoding of the coefficient vector w.r.t. a fixed irreducible modulus, so code
0 is zero and code 1 is one.  Multiplication uses discrete logs, addition uses
a Zech logarithm table.  Every subfield F_{p^m}, m | M, sits inside the same
ambient field, which fixes all embeddings F_{q^e} -> F_{q^d} once and for all.

The matrices of the group engine live over a "small field" F_q whose elements
are re-indexed 0..q-1 (sorted by ambient code, hence 0 -> 0 and 1 -> 1; for
prime q the index is the residue, so modular arithmetic on indices is valid).
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

_MAX_AMBIENT = 1 << 22  # p^M guard; desk-scale contexts stay far below


def factorize(n):
    """Prime factorization as a dict prime -> exponent."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    if n < 2:
        return False
    return list(factorize(n).keys()) == [n]


def prime_power(q):
    """Return (p, f) with q = p^f, or raise ValueError."""
    fac = factorize(q)
    if len(fac) != 1:
        raise ValueError(f"{q} is not a prime power")
    [(p, f)] = fac.items()
    return p, f


# -- dense polynomial helpers over F_p (lists of ints, low degree first) -----


def _ptrim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmulmod(a, b, mod, p):
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    return _pmod(res, mod, p)


def _pmod(a, mod, p):
    a = _ptrim([x % p for x in a])
    dm = len(mod) - 1
    inv_lead = pow(mod[-1], p - 2, p) if mod[-1] != 1 else 1
    while a and len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(mod):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _ptrim(a)
    return a


def _ppowmod(a, e, mod, p):
    res = [1]
    base = _pmod(a, mod, p)
    while e:
        if e & 1:
            res = _pmulmod(res, base, mod, p)
        base = _pmulmod(base, base, mod, p)
        e >>= 1
    return res


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pgcd(a, b, p):
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(f, p):
    m = len(f) - 1
    x = [0, 1]
    if _psub(_ppowmod(x, p**m, f, p), x, p):
        return False
    for r in factorize(m):
        g = _pgcd(f, _psub(_ppowmod(x, p ** (m // r), f, p), x, p), p)
        if len(g) > 1:
            return False
    return True


def _find_irreducible(p, m):
    if m == 1:
        return [0, 1]
    # deterministic scan over monic polynomials with nonzero constant term
    for code in range(p**m):
        coeffs = []
        c = code
        for _ in range(m):
            coeffs.append(c % p)
            c //= p
        if coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if _is_irreducible(f, p):
            return f
    raise RuntimeError("no irreducible polynomial found")  # unreachable


class FieldTower:
    """The ambient field F_{p^M} with Zech-log arithmetic and its subfields."""

    def __init__(self, p, M):
        if p**M > _MAX_AMBIENT:
            raise ValueError(f"ambient field F_{p}^{M} too large")
        self.p = p
        self.M = M
        self.size = p**M
        self.modulus = _find_irreducible(p, M)
        self._build_tables()

    def _vec_to_code(self, v):
        code = 0
        for c in reversed(v):
            code = code * self.p + c
        return code

    def _code_to_vec(self, code):
        v = []
        for _ in range(self.M):
            v.append(code % self.p)
            code //= self.p
        return v

    def _build_tables(self):
        p, M, size = self.p, self.M, self.size
        order = size - 1
        fac = factorize(order)
        # find a multiplicative generator, scanning ambient codes
        gen_vec = [1] if size == 2 else None
        for code in range(2, size if gen_vec is None else 2):
            v = _ptrim(self._code_to_vec(code))
            if not v:
                continue
            if all(_ppowmod(v, order // r, self.modulus, p) != [1] for r in fac):
                gen_vec = v
                break
        assert gen_vec is not None
        self.exp = np.zeros(order, dtype=np.int64)
        self.log = np.full(size, -1, dtype=np.int64)
        cur = [1]
        for k in range(order):
            code = self._vec_to_code(cur + [0] * (M - len(cur)))
            self.exp[k] = code
            self.log[code] = k
            cur = _pmulmod(cur, gen_vec, self.modulus, p)
        assert self._vec_to_code(cur + [0] * (M - len(cur))) == 1, "generator order mismatch"
        # Zech logarithms: 1 + g^k = g^zech[k] (or -1 when it is zero)
        self.zech = np.full(order, -1, dtype=np.int64)
        for k in range(order):
            v = self._code_to_vec(int(self.exp[k]))
            v[0] = (v[0] + 1) % p
            code = self._vec_to_code(v)
            if code:
                self.zech[k] = self.log[code]

    # -- scalar ops on codes ------------------------------------------------

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        la, lb = int(self.log[a]), int(self.log[b])
        z = int(self.zech[(lb - la) % (self.size - 1)])
        if z < 0:
            return 0
        return int(self.exp[(la + z) % (self.size - 1)])

    def neg(self, a):
        if a == 0 or self.p == 2:
            return a
        half = (self.size - 1) // 2
        return int(self.exp[(int(self.log[a]) + half) % (self.size - 1)])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(int(self.log[a]) + int(self.log[b])) % (self.size - 1)])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError
        return int(self.exp[(-int(self.log[a])) % (self.size - 1)])

    def pow(self, a, e):
        if a == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.log[a]) * e) % (self.size - 1)])

    # -- subfields ------------------------------------------------------------

    def subfield_codes(self, m):
        """Sorted codes of the subfield F_{p^m} (m must divide M)."""
        assert self.M % m == 0
        step = (self.size - 1) // (self.p**m - 1)
        codes = [0] + [int(self.exp[(k * step) % (self.size - 1)]) for k in range(self.p**m - 1)]
        return sorted(set(codes))

    def subfield_generator(self, m):
        """Canonical generator of F_{p^m}^x inside the ambient field."""
        assert self.M % m == 0
        step = (self.size - 1) // (self.p**m - 1)
        return int(self.exp[step % (self.size - 1)])

    def minpoly_over(self, beta, qsub):
        """Minimal polynomial of the element `beta` over the subfield of size qsub.

        Returned as a list of ambient codes, low degree first, monic.
        """
        conjugates = []
        c = beta
        while c not in conjugates:
            conjugates.append(c)
            c = self.pow(c, qsub)
        poly = [1]
        for root in conjugates:
            nr = self.neg(root)
            new = [0] * (len(poly) + 1)
            for i, ci in enumerate(poly):
                new[i + 1] = self.add(new[i + 1], ci)
                new[i] = self.add(new[i], self.mul(ci, nr))
            poly = new
        return poly

    def eval_poly(self, coeffs, point):
        """Evaluate a polynomial given by ambient codes at an ambient code."""
        acc = 0
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, point), c)
        return acc


class SmallField:
    """F_q re-indexed to 0..q-1 with dense op tables for the matrix kernels."""

    def __init__(self, tower, f):
        p = tower.p
        self.tower = tower
        self.p = p
        self.f = f
        self.q = p**f
        codes = tower.subfield_codes(f)
        assert len(codes) == self.q and codes[0] == 0 and codes[1] == 1
        self.codes = np.array(codes, dtype=np.int64)
        code_to_idx = {c: i for i, c in enumerate(codes)}
        self.code_to_idx = code_to_idx
        q = self.q
        self.prime = f == 1
        self.add_t = np.zeros((q, q), dtype=np.uint8)
        self.mul_t = np.zeros((q, q), dtype=np.uint8)
        self.neg_t = np.zeros(q, dtype=np.uint8)
        self.inv_t = np.zeros(q, dtype=np.uint8)
        for i in range(q):
            self.neg_t[i] = code_to_idx[tower.neg(codes[i])]
            if i:
                self.inv_t[i] = code_to_idx[tower.inv(codes[i])]
            for j in range(q):
                self.add_t[i, j] = code_to_idx[tower.add(codes[i], codes[j])]
                self.mul_t[i, j] = code_to_idx[tower.mul(codes[i], codes[j])]
        if self.prime:
            # residue indexing must agree with table indexing
            assert all(self.add_t[i, j] == (i + j) % q for i in range(q) for j in range(q))
        # multiplicative generator and Frobenius x -> x^p as an index map
        self.generator = code_to_idx[tower.subfield_generator(f)]
        self.frob = np.array([code_to_idx[tower.pow(c, p)] for c in codes], dtype=np.uint8)

    def to_index(self, code):
        return self.code_to_idx[code]

    def to_code(self, idx):
        return int(self.codes[idx])

    def kernel_args(self):
        """(q, prime, mul_t, add_t) tuple handed to the array kernels."""
        return self.q, self.prime, self.mul_t, self.add_t


@lru_cache(maxsize=None)
def get_tower(p, M):
    return FieldTower(p, M)


def get_field(q, degrees=(1,)):
    """Small field F_q inside an ambient tower covering F_{q^d} for d in degrees."""
    return _get_field(q, tuple(sorted(set(degrees))) or (1,))


@lru_cache(maxsize=None)
def _get_field(q, degrees):
    p, f = prime_power(q)
    M = f * math.lcm(*degrees)
    return SmallField(get_tower(p, M), f)


# -- linear algebra over a SmallField (dense, small sizes) -------------------


def rref(mat, fld):
    """Row-reduce a matrix of field indices; returns (rref, pivot columns)."""
    A = np.array(mat, dtype=np.uint8, copy=True)
    rows, cols = A.shape
    add_t, mul_t, neg_t, inv_t = fld.add_t, fld.mul_t, fld.neg_t, fld.inv_t
    piv_cols = []
    r = 0
    for c in range(cols):
        piv = None
        for rr in range(r, rows):
            if A[rr, c]:
                piv = rr
                break
        if piv is None:
            continue
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        s = inv_t[A[r, c]]
        A[r] = mul_t[s, A[r]]
        for rr in range(rows):
            if rr != r and A[rr, c]:
                f = A[rr, c]
                A[rr] = add_t[A[rr], neg_t[mul_t[f, A[r]]]]
        piv_cols.append(c)
        r += 1
        if r == rows:
            break
    return A, piv_cols


def nullspace(mat, fld):
    """Basis of the right nullspace, as columns of the returned matrix."""
    A, piv_cols = rref(mat, fld)
    rows, cols = A.shape
    free = [c for c in range(cols) if c not in piv_cols]
    basis = np.zeros((cols, len(free)), dtype=np.uint8)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for r, pc in enumerate(piv_cols):
            basis[pc, k] = fld.neg_t[A[r, fc]]
    return basis


def solve(mat, rhs, fld):
    """One solution x of mat @ x = rhs, or None when inconsistent."""
    A = np.asarray(mat, dtype=np.uint8)
    b = np.asarray(rhs, dtype=np.uint8).reshape(-1, 1)
    aug, piv = rref(np.hstack([A, b]), fld)
    cols = A.shape[1]
    if cols in piv:
        return None
    x = np.zeros(cols, dtype=np.uint8)
    for r, pc in enumerate(piv):
        x[pc] = aug[r, cols]
    return x


def mat_mul(a, b, fld):
    """Plain (unbatched) matrix product over the field; rectangular shapes allowed."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    assert a.shape[1] == b.shape[0]
    if fld.prime:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % fld.q).astype(np.uint8)
    acc = fld.mul_t[a[:, 0][:, None], b[0, :][None, :]]
    for k in range(1, a.shape[1]):
        acc = fld.add_t[acc, fld.mul_t[a[:, k][:, None], b[k, :][None, :]]]
    return acc


def mat_pow(a, e, fld):
    n = a.shape[0]
    result = np.zeros((n, n), dtype=np.uint8)
    result[np.arange(n), np.arange(n)] = 1
    base = np.asarray(a, dtype=np.uint8)
    while e:
        if e & 1:
            result = mat_mul(result, base, fld)
        base = mat_mul(base, base, fld)
        e >>= 1
    return result
