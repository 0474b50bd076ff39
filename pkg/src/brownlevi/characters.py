"""Character degrees via the Burnside-Dixon method, ell-defects, and weights.

Class-sum matrices act on the centre of the group algebra; their common
eigenvectors over a prime field F_r (r = 1 mod exponent, r^2 > 4|G|, r not
dividing |G|) are the central characters.  Degrees are recovered from the
second orthogonality relation and lifted to Z unambiguously because every
degree is below sqrt(|G|) < r/2.  Only degrees are lifted; all orthogonality
checks stay in F_r.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import groups as gp
from .errors import TooLargeForCharacters
from .fields import is_prime

DEFAULT_MAX_CHAR_ORDER = 100_000
DEFAULT_MAX_CLASSES = 300


# -- linear algebra mod r -----------------------------------------------------


def _rref_mod(A, r):
    A = A.copy() % r
    rows, cols = A.shape
    piv_cols = []
    rr = 0
    for c in range(cols):
        piv = None
        for row in range(rr, rows):
            if A[row, c] % r:
                piv = row
                break
        if piv is None:
            continue
        A[[rr, piv]] = A[[piv, rr]]
        A[rr] = (A[rr] * pow(int(A[rr, c]), r - 2, r)) % r
        for row in range(rows):
            if row != rr and A[row, c]:
                A[row] = (A[row] - A[row, c] * A[rr]) % r
        piv_cols.append(c)
        rr += 1
        if rr == rows:
            break
    return A, piv_cols


def _nullspace_mod(A, r):
    R, piv = _rref_mod(A, r)
    cols = A.shape[1]
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for row, pc in enumerate(piv):
            basis[pc, k] = (-R[row, fc]) % r
    return basis


def _restrict_action(M, B, r):
    """A with M @ B = B @ A (B a basis of an M-invariant subspace), mod r."""
    target = (M @ B) % r
    aug, piv = _rref_mod(np.hstack([B, target]), r)
    d = B.shape[1]
    assert piv == list(range(d)), "basis not independent"
    return aug[:d, d:] % r


def _charpoly_mod(A, r):
    """Characteristic polynomial mod r via Hessenberg reduction (low degree first)."""
    n = A.shape[0]
    H = A.copy() % r
    for col in range(n - 2):
        piv = None
        for row in range(col + 1, n):
            if H[row, col] % r:
                piv = row
                break
        if piv is None:
            continue
        if piv != col + 1:
            H[[col + 1, piv]] = H[[piv, col + 1]]
            H[:, [col + 1, piv]] = H[:, [piv, col + 1]]
        inv = pow(int(H[col + 1, col]), r - 2, r)
        for row in range(col + 2, n):
            f = int(H[row, col]) * inv % r
            if f:
                H[row] = (H[row] - f * H[col + 1]) % r
                H[:, col + 1] = (H[:, col + 1] + f * H[:, row]) % r
    # p_m for the leading m x m block, 1-based recurrence for Hessenberg matrices
    polys = [np.array([1], dtype=np.int64)]
    for m in range(1, n + 1):
        lead = np.zeros(m + 1, dtype=np.int64)
        prev = polys[m - 1]
        lead[1 : 1 + prev.shape[0]] = prev
        lead[: prev.shape[0]] = (lead[: prev.shape[0]] - H[m - 1, m - 1] * prev) % r
        beta = 1
        for i in range(m - 1, 0, -1):
            beta = beta * int(H[i, i - 1]) % r
            coef = int(H[i - 1, m - 1]) * beta % r
            if coef:
                pi = polys[i - 1]
                lead[: pi.shape[0]] = (lead[: pi.shape[0]] - coef * pi) % r
        polys.append(lead % r)
    return polys[n]


def _roots_mod(poly, r):
    xs = np.arange(r, dtype=np.int64)
    acc = np.zeros(r, dtype=np.int64)
    for c in poly[::-1]:
        acc = (acc * xs + int(c)) % r
    return xs[acc == 0]


# -- character tables ----------------------------------------------------------


@dataclasses.dataclass
class CharTableData:
    handle: object
    classes: object  # ClassData
    r: int
    degrees: list  # integer degrees, one per irreducible
    values: np.ndarray  # (k, k) chi_m(g_i) as residues mod r

    @property
    def k(self):
        return len(self.degrees)


def _choose_r(order, exponent):
    step = exponent if exponent > 1 else 1
    r = exponent + 1
    while not (r * r > 4 * order and order % r != 0 and is_prime(r)):
        r += step
    return r


_char_cache = {}


def character_degrees(handle, max_order=DEFAULT_MAX_CHAR_ORDER, max_classes=DEFAULT_MAX_CLASSES):
    """Full degree multiset plus the F_r-valued character table."""
    key = (id(handle.group), handle.fingerprint)
    if key in _char_cache:
        return _char_cache[key]
    if handle.order > max_order:
        raise TooLargeForCharacters(f"order {handle.order} exceeds bound {max_order}")
    cd = gp.conjugacy_classes(handle)
    k = cd.k
    if k > max_classes:
        raise TooLargeForCharacters(f"{k} classes exceed bound {max_classes}")
    G = handle.group
    exponent = math.lcm(*cd.orders)
    r = _choose_r(handle.order, exponent)
    # class-sum multiplication coefficients a[i,j,m]: c_i c_j = sum_m a_ijm c_m
    A = np.zeros((k, k, k), dtype=np.int64)
    inv_all = G.inv_indices[handle.indices]
    ci = cd.class_of
    for m_cls in range(k):
        z = cd.reps[m_cls]
        t = G.matmul_idx(inv_all, np.full(handle.order, z, dtype=np.int64))
        cj = cd.class_of[np.searchsorted(handle.indices, t)]
        np.add.at(A[:, :, m_cls], (ci, cj), 1)
    e_cls = cd.class_of_index(G.identity_index)
    # split the centre into common eigenspaces
    spaces = [np.eye(k, dtype=np.int64)]
    for i in range(k):
        if i == e_cls:
            continue
        if all(B.shape[1] == 1 for B in spaces):
            break
        Ni = A[i]  # (N_i w)_j = sum_m a_ijm w_m with right-eigenvector the omegas
        nxt = []
        for B in spaces:
            if B.shape[1] == 1:
                nxt.append(B)
                continue
            act = _restrict_action(Ni, B, r)
            for lam in _roots_mod(_charpoly_mod(act, r), r):
                ker = _nullspace_mod((act - int(lam) * np.eye(act.shape[0], dtype=np.int64)) % r, r)
                if ker.shape[1]:
                    nxt.append((B @ ker) % r)
        spaces = nxt
    assert all(B.shape[1] == 1 for B in spaces) and len(spaces) == k, "eigenspace split failed"
    omegas = np.zeros((k, k), dtype=np.int64)
    for m, B in enumerate(spaces):
        v = B[:, 0] % r
        omegas[m] = v * pow(int(v[e_cls]), r - 2, r) % r
    sizes = np.array(cd.sizes, dtype=np.int64)
    inv_sizes = np.array([pow(int(s % r), r - 2, r) for s in sizes], dtype=np.int64)
    istar = cd.inverse_class_perm()
    # degrees: chi(1)^2 = |H| / sum_i w_i w_{i*} / |C_i|
    sq_lookup = {}
    for d in range(1, math.isqrt(handle.order) + 1):
        sq_lookup[d * d % r] = d
    degrees = []
    for m in range(k):
        s = int(np.sum(omegas[m] * omegas[m][istar] % r * inv_sizes % r) % r)
        D2 = handle.order % r * pow(s, r - 2, r) % r
        assert D2 in sq_lookup, "degree lift failed"
        degrees.append(sq_lookup[D2])
    values = np.zeros((k, k), dtype=np.int64)
    for m in range(k):
        values[m] = np.array(degrees[m], dtype=np.int64) * omegas[m] % r * inv_sizes % r
    table = CharTableData(handle, cd, r, degrees, values)
    _verify_table(table)
    _char_cache[key] = table
    return table


def _verify_table(table):
    h = table.handle.order
    assert sum(d * d for d in table.degrees) == h, "sum of squared degrees mismatch"
    r = table.r
    sizes = np.array(table.classes.sizes, dtype=np.int64)
    istar = table.classes.inverse_class_perm()
    gram = table.values @ (sizes[:, None] * table.values[:, istar].T % r) % r
    expect = np.zeros_like(gram)
    np.fill_diagonal(expect, h % r)
    assert (gram % r == expect).all(), "first orthogonality fails"


@dataclasses.dataclass
class DefectProfile:
    ell: int
    counts: dict  # defect d -> number of irreducibles

    def k_defect(self, d):
        return self.counts.get(d, 0)


def defect_profile(handle, ell, **bounds):
    """Counts of irreducibles by ell-defect v_ell(|G|) - v_ell(degree)."""
    table = character_degrees(handle, **bounds)
    vg = 0
    while handle.order % ell ** (vg + 1) == 0:
        vg += 1
    counts = {}
    for d in table.degrees:
        vd = 0
        while d % ell**(vd + 1) == 0:
            vd += 1
        defect = vg - vd
        counts[defect] = counts.get(defect, 0) + 1
    prof = DefectProfile(ell, counts)
    assert sum(counts.values()) == table.k
    return prof


def k0(handle, ell, **bounds):
    """Number of ell-defect-zero irreducible characters."""
    return defect_profile(handle, ell, **bounds).k_defect(0)


def kd(handle, ell, d, **bounds):
    """Number of irreducible characters of ell-defect d."""
    return defect_profile(handle, ell, **bounds).k_defect(d)


def count_weights(G, ell, **bounds):
    """Number of conjugacy classes of ell-weights (Q, theta), theta of defect 0."""
    from . import posets

    poset = posets.enumerate_ell_subgroups(G, ell)
    total = 0
    for mid, _size in posets.member_orbit_reps(poset):
        Q = poset.members[mid]
        if Q.order == 1:
            quotient = gp.full_subgroup(G)
        else:
            N = poset.normalizer(mid)
            quotient = gp.full_subgroup(gp.coset_quotient_group(N, Q))
        total += k0(quotient, ell, **bounds)
    return total
