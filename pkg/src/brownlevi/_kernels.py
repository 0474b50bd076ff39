"""Hot array kernels with two interchangeable backends.

Every kernel exists twice: a numba ``@njit`` version and a vectorized pure-numpy
version with identical semantics.  The backend is picked once per process from
the environment variable ``BROWNLEVI_KERNELS`` (``"numba"`` or ``"numpy"``);
unset means numba when it imports cleanly, numpy otherwise.

Matrices over F_q are ``uint8`` arrays of field indices in ``[0, q)``.  For a
prime field the index is the residue and arithmetic is plain modular math; for
a prime-power field the kernels go through the ``q x q`` addition and
multiplication tables built by :mod:`brownlevi.fields`.
"""

from __future__ import annotations

import os

import numpy as np

_ENV_VAR = "BROWNLEVI_KERNELS"


def requested_backend():
    """Backend name requested via the environment, or None for auto."""
    val = os.environ.get(_ENV_VAR, "").strip().lower()
    if val in ("numba", "numpy"):
        return val
    if val:
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {val!r}")
    return None


def _load_numba():
    try:
        import numba  # noqa: F401

        return True
    except Exception:
        return False


_requested = requested_backend()
if _requested == "numpy":
    _USE_NUMBA = False
elif _requested == "numba":
    if not _load_numba():
        raise ImportError("BROWNLEVI_KERNELS=numba but numba is not importable")
    _USE_NUMBA = True
else:
    _USE_NUMBA = _load_numba()


def active_backend():
    return "numba" if _USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# shared helpers (backend independent)


def encode(mats, pow_q):
    """Pack matrices (m, n, n) of field indices into uint64 codes."""
    m = mats.shape[0]
    flat = mats.reshape(m, -1).astype(np.uint64)
    return flat @ pow_q


def decode(codes, n, q):
    """Inverse of :func:`encode`."""
    m = codes.shape[0]
    out = np.empty((m, n * n), dtype=np.uint8)
    rem = codes.astype(np.uint64).copy()
    qq = np.uint64(q)
    for i in range(n * n):
        out[:, i] = (rem % qq).astype(np.uint8)
        rem //= qq
    return out.reshape(m, n, n)


def _as_batch(b, m):
    if b.ndim == 2:
        return np.broadcast_to(b, (m,) + b.shape)
    return b


# ---------------------------------------------------------------------------
# numpy backend


def _np_matmul(a, b, q, prime, mul_t, add_t):
    m, n, _ = a.shape
    b = _as_batch(b, m)
    if prime:
        return ((a.astype(np.int64) @ b.astype(np.int64)) % q).astype(np.uint8)
    acc = mul_t[a[:, :, 0][:, :, None], b[:, 0, :][:, None, :]]
    for k in range(1, n):
        term = mul_t[a[:, :, k][:, :, None], b[:, k, :][:, None, :]]
        acc = add_t[acc, term]
    return acc


def _np_batch_inverse(a, q, prime, mul_t, add_t, inv_t, neg_t):
    m, n, _ = a.shape
    A = a.copy()
    I = np.zeros((m, n, n), dtype=np.uint8)
    I[:, np.arange(n), np.arange(n)] = 1
    rows = np.arange(m)
    for col in range(n):
        piv = np.argmax(A[:, col:, col] != 0, axis=1) + col
        for M in (A, I):
            tmp = M[rows, col].copy()
            M[rows, col] = M[rows, piv]
            M[rows, piv] = tmp
        s = inv_t[A[:, col, col]]
        A[:, col, :] = mul_t[s[:, None], A[:, col, :]]
        I[:, col, :] = mul_t[s[:, None], I[:, col, :]]
        for r in range(n):
            if r == col:
                continue
            f = A[:, r, col].copy()  # the A-update below would alias a view
            A[:, r, :] = add_t[A[:, r, :], neg_t[mul_t[f[:, None], A[:, col, :]]]]
            I[:, r, :] = add_t[I[:, r, :], neg_t[mul_t[f[:, None], I[:, col, :]]]]
    return I


def _np_commute_mask(mats, w, q, prime, mul_t, add_t):
    gw = _np_matmul(mats, w, q, prime, mul_t, add_t)
    wg = _np_matmul(_as_batch(w, mats.shape[0]).copy(), mats, q, prime, mul_t, add_t)
    return (gw == wg).all(axis=(1, 2))


def _np_conj_in_set_mask(mats, inv_mats, sub_mats, sub_codes, pow_q, q, prime, mul_t, add_t):
    m = mats.shape[0]
    mask = np.ones(m, dtype=bool)
    for s in sub_mats:
        x = _np_matmul(inv_mats, s, q, prime, mul_t, add_t)
        y = _np_matmul(x, mats, q, prime, mul_t, add_t)
        codes = encode(y, pow_q)
        pos = np.searchsorted(sub_codes, codes)
        pos[pos >= sub_codes.shape[0]] = 0
        mask &= sub_codes[pos] == codes
    return mask


def _np_closure_in_table(table, gens, max_size):
    known = np.unique(np.asarray(gens, dtype=np.int64))
    frontier = known
    while frontier.size:
        prod = np.unique(table[np.ix_(frontier, known)].ravel())
        prod2 = np.unique(table[np.ix_(known, frontier)].ravel())
        new = np.setdiff1d(np.union1d(prod, prod2), known, assume_unique=True)
        known = np.union1d(known, new)
        if known.size > max_size:
            return known[: max_size + 1]
        frontier = new
    return known


# ---------------------------------------------------------------------------
# numba backend

if _USE_NUMBA:
    from numba import njit

    @njit(cache=True)
    def _nb_matmul(a, b, q, prime, mul_t, add_t):
        m, n, _ = a.shape
        out = np.empty_like(a)
        if prime:
            for t in range(m):
                for i in range(n):
                    for j in range(n):
                        s = 0
                        for k in range(n):
                            s += np.int64(a[t, i, k]) * np.int64(b[t, k, j])
                        out[t, i, j] = np.uint8(s % q)
        else:
            for t in range(m):
                for i in range(n):
                    for j in range(n):
                        c = np.uint8(0)
                        for k in range(n):
                            c = add_t[c, mul_t[a[t, i, k], b[t, k, j]]]
                        out[t, i, j] = c
        return out

    @njit(cache=True)
    def _nb_batch_inverse(a, q, prime, mul_t, add_t, inv_t, neg_t):
        m, n, _ = a.shape
        out = np.zeros_like(a)
        A = np.empty((n, n), dtype=np.uint8)
        for t in range(m):
            for i in range(n):
                for j in range(n):
                    A[i, j] = a[t, i, j]
                    out[t, i, j] = np.uint8(1) if i == j else np.uint8(0)
            for col in range(n):
                piv = col
                while A[piv, col] == 0:
                    piv += 1
                if piv != col:
                    for j in range(n):
                        A[col, j], A[piv, j] = A[piv, j], A[col, j]
                        out[t, col, j], out[t, piv, j] = out[t, piv, j], out[t, col, j]
                s = inv_t[A[col, col]]
                for j in range(n):
                    A[col, j] = mul_t[s, A[col, j]]
                    out[t, col, j] = mul_t[s, out[t, col, j]]
                for r in range(n):
                    if r == col or A[r, col] == 0:
                        continue
                    f = A[r, col]
                    for j in range(n):
                        A[r, j] = add_t[A[r, j], neg_t[mul_t[f, A[col, j]]]]
                        out[t, r, j] = add_t[out[t, r, j], neg_t[mul_t[f, out[t, col, j]]]]
        return out

    @njit(cache=True)
    def _nb_commute_mask(mats, w, q, prime, mul_t, add_t):
        m, n, _ = mats.shape
        mask = np.ones(m, dtype=np.bool_)
        for t in range(m):
            ok = True
            for i in range(n):
                if not ok:
                    break
                for j in range(n):
                    if prime:
                        s1 = 0
                        s2 = 0
                        for k in range(n):
                            s1 += np.int64(mats[t, i, k]) * np.int64(w[k, j])
                            s2 += np.int64(w[i, k]) * np.int64(mats[t, k, j])
                        if s1 % q != s2 % q:
                            ok = False
                            break
                    else:
                        c1 = np.uint8(0)
                        c2 = np.uint8(0)
                        for k in range(n):
                            c1 = add_t[c1, mul_t[mats[t, i, k], w[k, j]]]
                            c2 = add_t[c2, mul_t[w[i, k], mats[t, k, j]]]
                        if c1 != c2:
                            ok = False
                            break
            mask[t] = ok
        return mask

    @njit(cache=True)
    def _nb_conj_in_set_mask(mats, inv_mats, sub_mats, sub_codes, pow_q, q, prime, mul_t, add_t):
        m, n, _ = mats.shape
        ns = sub_mats.shape[0]
        mask = np.ones(m, dtype=np.bool_)
        x = np.empty((n, n), dtype=np.uint8)
        y = np.empty((n, n), dtype=np.uint8)
        for t in range(m):
            ok = True
            for si in range(ns):
                # x = inv(g) @ s ; y = x @ g
                for i in range(n):
                    for j in range(n):
                        if prime:
                            s = 0
                            for k in range(n):
                                s += np.int64(inv_mats[t, i, k]) * np.int64(sub_mats[si, k, j])
                            x[i, j] = np.uint8(s % q)
                        else:
                            c = np.uint8(0)
                            for k in range(n):
                                c = add_t[c, mul_t[inv_mats[t, i, k], sub_mats[si, k, j]]]
                            x[i, j] = c
                for i in range(n):
                    for j in range(n):
                        if prime:
                            s = 0
                            for k in range(n):
                                s += np.int64(x[i, k]) * np.int64(mats[t, k, j])
                            y[i, j] = np.uint8(s % q)
                        else:
                            c = np.uint8(0)
                            for k in range(n):
                                c = add_t[c, mul_t[x[i, k], mats[t, k, j]]]
                            y[i, j] = c
                code = np.uint64(0)
                idx = 0
                for i in range(n):
                    for j in range(n):
                        code += np.uint64(y[i, j]) * pow_q[idx]
                        idx += 1
                lo = 0
                hi = sub_codes.shape[0]
                while lo < hi:
                    mid = (lo + hi) // 2
                    if sub_codes[mid] < code:
                        lo = mid + 1
                    else:
                        hi = mid
                if lo >= sub_codes.shape[0] or sub_codes[lo] != code:
                    ok = False
                    break
            mask[t] = ok
        return mask

    @njit(cache=True)
    def _nb_closure_in_table(table, gens, max_size):
        n = table.shape[0]
        visited = np.zeros(n, dtype=np.bool_)
        queue = np.empty(n, dtype=np.int64)
        head = 0
        tail = 0
        for g in gens:
            if not visited[g]:
                visited[g] = True
                queue[tail] = g
                tail += 1
        count = tail
        while head < tail:
            x = queue[head]
            head += 1
            for g in gens:
                y = table[x, g]
                if not visited[y]:
                    visited[y] = True
                    queue[tail] = y
                    tail += 1
                    count += 1
                    if count > max_size:
                        return np.sort(queue[:tail])
        return np.sort(queue[:tail])


# ---------------------------------------------------------------------------
# dispatch

if _USE_NUMBA:

    def matmul(a, b, q, prime, mul_t, add_t):
        b = np.ascontiguousarray(_as_batch(b, a.shape[0]))
        return _nb_matmul(a, b, q, prime, mul_t, add_t)

    def batch_inverse(a, q, prime, mul_t, add_t, inv_t, neg_t):
        return _nb_batch_inverse(a, q, prime, mul_t, add_t, inv_t, neg_t)

    def commute_mask(mats, w, q, prime, mul_t, add_t):
        return _nb_commute_mask(mats, np.ascontiguousarray(w), q, prime, mul_t, add_t)

    def conj_in_set_mask(mats, inv_mats, sub_mats, sub_codes, pow_q, q, prime, mul_t, add_t):
        return _nb_conj_in_set_mask(
            mats, inv_mats, np.ascontiguousarray(sub_mats), sub_codes, pow_q, q, prime, mul_t, add_t
        )

    def closure_in_table(table, gens, max_size):
        return _nb_closure_in_table(table, np.asarray(gens, dtype=np.int64), max_size)

else:
    matmul = _np_matmul
    batch_inverse = _np_batch_inverse
    commute_mask = _np_commute_mask
    conj_in_set_mask = _np_conj_in_set_mask
    closure_in_table = _np_closure_in_table


# explicit handles for the parity tests and the benchmark
NUMPY_IMPLS = {
    "matmul": _np_matmul,
    "batch_inverse": _np_batch_inverse,
    "commute_mask": _np_commute_mask,
    "conj_in_set_mask": _np_conj_in_set_mask,
    "closure_in_table": _np_closure_in_table,
}

if _USE_NUMBA:
    NUMBA_IMPLS = {
        "matmul": _nb_matmul,
        "batch_inverse": _nb_batch_inverse,
        "commute_mask": _nb_commute_mask,
        "conj_in_set_mask": _nb_conj_in_set_mask,
        "closure_in_table": _nb_closure_in_table,
    }
else:
    NUMBA_IMPLS = {}
