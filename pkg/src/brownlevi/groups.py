"""Explicit finite matrix groups over F_q.

Groups are fully enumerated: elements are n x n uint8 matrices of field
indices, stored sorted by a packed base-q code, so membership and index lookup
are binary searches.  All heavy loops (closure, centralizer/normalizer scans,
batch inversion) go through :mod:`brownlevi._kernels`.

Subgroups are handles into the ambient enumeration: a sorted array of element
indices plus a fingerprint.  Subgroup identity is fingerprint identity.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import NotCommuting, TooLarge
from .fields import get_field
from .numtheory import ell_part

DEFAULT_ENUM_BOUND = 2_000_000


def _packs_in_uint64(n, q):
    return q ** (n * n) <= 2**63


class FiniteMatrixGroup:
    def __init__(self, mats, codes, field, gen_mats, name="group"):
        self.field = field
        self.n = int(mats.shape[1])
        self.q = field.q
        self.mats = np.ascontiguousarray(mats)
        self.codes = codes
        self.gen_mats = [np.asarray(g, dtype=np.uint8) for g in gen_mats]
        self.name = name
        self.order = int(mats.shape[0])
        # wide groups (packed code overflows uint64) use byte-row lookup instead
        self.wide = codes is None
        if self.wide:
            flat = self.mats.reshape(self.order, -1)
            self._lookup = {flat[i].tobytes(): i for i in range(self.order)}
            self.pow_q = None
        else:
            self.pow_q = (field.q ** np.arange(self.n * self.n, dtype=np.uint64)).astype(
                np.uint64
            )
        eye = np.zeros((self.n, self.n), dtype=np.uint8)
        eye[np.arange(self.n), np.arange(self.n)] = 1
        self.identity_index = int(self.index_of(eye[None, :, :])[0])
        self.gens = [int(self.index_of(g[None])[0]) for g in self.gen_mats]
        self._inv = None
        self._orders = None
        self._gl_params = None  # set by build_gl

    # -- element plumbing ---------------------------------------------------

    def kernel_args(self):
        return self.field.kernel_args()

    def encode(self, mats):
        return _kernels.encode(mats, self.pow_q)

    def index_of(self, mats, strict=True):
        if self.wide:
            flat = np.ascontiguousarray(mats).reshape(mats.shape[0], -1)
            out = np.array(
                [self._lookup.get(flat[i].tobytes(), -1) for i in range(flat.shape[0])],
                dtype=np.int64,
            )
            if strict and (out < 0).any():
                raise KeyError("matrix not in group")
            return out
        codes = self.encode(mats)
        pos = np.searchsorted(self.codes, codes)
        pos_c = np.minimum(pos, self.order - 1)
        ok = self.codes[pos_c] == codes
        if strict and not ok.all():
            raise KeyError("matrix not in group")
        if not strict:
            return np.where(ok, pos_c, -1)
        return pos_c

    def matmul_idx(self, i, j):
        """Index-level products; i and j are broadcastable index arrays."""
        i = np.atleast_1d(np.asarray(i, dtype=np.int64))
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        if i.shape != j.shape:
            i, j = np.broadcast_arrays(i, j)
        prod = _kernels.matmul(
            np.ascontiguousarray(self.mats[i]), np.ascontiguousarray(self.mats[j]), *self.kernel_args()
        )
        return self.index_of(prod)

    @property
    def inv_indices(self):
        if self._inv is None:
            inv = _kernels.batch_inverse(
                self.mats, *self.kernel_args(), self.field.inv_t, self.field.neg_t
            )
            self._inv = self.index_of(inv)
        return self._inv

    def inv_idx(self, i):
        return int(self.inv_indices[i])

    def conjugate_idx(self, x, g):
        """g^-1 x g for index arrays x (batch) and a single index g."""
        x = np.atleast_1d(np.asarray(x, dtype=np.int64))
        gi = self.inv_idx(g)
        left = _kernels.matmul(
            np.broadcast_to(self.mats[gi], (x.shape[0],) + self.mats[gi].shape).copy(),
            np.ascontiguousarray(self.mats[x]),
            *self.kernel_args(),
        )
        out = _kernels.matmul(left, self.mats[g], *self.kernel_args())
        return self.index_of(out)

    def element_order(self, i):
        e = self.identity_index
        if i == e:
            return 1
        o = 1
        x = i
        while x != e:
            x = int(self.matmul_idx(x, i)[0])
            o += 1
        return o

    # -- construction -------------------------------------------------------

    @staticmethod
    def from_generators(gen_mats, field, max_order=DEFAULT_ENUM_BOUND, name="group"):
        gen_mats = [np.asarray(g, dtype=np.uint8) for g in gen_mats]
        n = gen_mats[0].shape[0]
        eye = np.zeros((n, n), dtype=np.uint8)
        eye[np.arange(n), np.arange(n)] = 1
        gens = np.array([eye] + gen_mats, dtype=np.uint8)
        gstack = np.array(gen_mats, dtype=np.uint8)
        if not _packs_in_uint64(n, field.q):
            # byte-row BFS closure for groups whose packed code overflows uint64
            flat = np.unique(gens.reshape(-1, n * n), axis=0)
            frontier = flat
            while frontier.shape[0]:
                fm = frontier.reshape(-1, n, n)
                k, g = fm.shape[0], gstack.shape[0]
                prods = _kernels.matmul(
                    np.repeat(fm, g, axis=0), np.tile(gstack, (k, 1, 1)), *field.kernel_args()
                )
                cand = np.unique(prods.reshape(-1, n * n), axis=0)
                merged = np.unique(np.vstack([flat, cand]), axis=0)
                if merged.shape[0] > max_order:
                    raise TooLarge(f"group closure exceeded bound {max_order}")
                known = {row.tobytes() for row in flat}
                frontier = np.array(
                    [row for row in cand if row.tobytes() not in known], dtype=np.uint8
                ).reshape(-1, n * n)
                flat = merged
            return FiniteMatrixGroup(flat.reshape(-1, n, n), None, field, gen_mats, name=name)
        pow_q = (field.q ** np.arange(n * n, dtype=np.uint64)).astype(np.uint64)
        codes = np.unique(_kernels.encode(gens, pow_q))
        frontier = codes
        while frontier.size:
            fm = _kernels.decode(frontier, n, field.q)
            k, g = fm.shape[0], gstack.shape[0]
            left = np.repeat(fm, g, axis=0)
            right = np.tile(gstack, (k, 1, 1))
            prods = _kernels.matmul(left, right, *field.kernel_args())
            new_codes = np.unique(_kernels.encode(prods, pow_q))
            frontier = np.setdiff1d(new_codes, codes, assume_unique=True)
            codes = np.union1d(codes, frontier)
            if codes.size > max_order:
                raise TooLarge(f"group closure exceeded bound {max_order}")
        mats = _kernels.decode(codes, n, field.q)
        return FiniteMatrixGroup(mats, codes, field, gen_mats, name=name)

    def __repr__(self):
        return f"<{self.name}: order {self.order}, n={self.n}, q={self.q}>"


def build_gl(n, q, max_order=DEFAULT_ENUM_BOUND):
    """Fully enumerated GL_n(q) with verified order."""
    expected = 1
    for i in range(n):
        expected *= q**n - q**i
    if expected > max_order:
        raise TooLarge(f"|GL_{n}({q})| = {expected} exceeds bound {max_order}")
    field = get_field(q, tuple(range(1, n + 1)))
    gens = []
    gamma = field.generator
    d = np.zeros((n, n), dtype=np.uint8)
    d[np.arange(n), np.arange(n)] = 1
    d[0, 0] = gamma
    gens.append(d)
    if n >= 2:
        cyc = np.zeros((n, n), dtype=np.uint8)
        for j in range(n):
            cyc[(j + 1) % n, j] = 1
        swap = np.zeros((n, n), dtype=np.uint8)
        swap[np.arange(n), np.arange(n)] = 1
        swap[0, 0] = swap[1, 1] = 0
        swap[0, 1] = swap[1, 0] = 1
        trans = np.zeros((n, n), dtype=np.uint8)
        trans[np.arange(n), np.arange(n)] = 1
        trans[0, 1] = 1
        gens += [cyc, swap, trans]
    G = FiniteMatrixGroup.from_generators(gens, field, max_order=max_order, name=f"GL{n}({q})")
    assert G.order == expected, f"closure gave {G.order}, expected {expected}"
    G._gl_params = (n, q)
    return G


def perm_matrices(perms, m):
    out = []
    for perm in perms:
        mat = np.zeros((m, m), dtype=np.uint8)
        for j, i in enumerate(perm):
            mat[i, j] = 1
        out.append(mat)
    return out


def perm_group(m, max_order=DEFAULT_ENUM_BOUND):
    """Symmetric group S_m as permutation matrices over F_2."""
    field = get_field(2, (1,))
    if m == 1:
        return FiniteMatrixGroup.from_generators(
            [np.array([[1]], dtype=np.uint8)], field, name="S1"
        )
    trans = list(range(m))
    trans[0], trans[1] = 1, 0
    cyc = [(i + 1) % m for i in range(m)]
    gens = perm_matrices([trans, cyc], m)
    G = FiniteMatrixGroup.from_generators(gens, field, max_order=max_order, name=f"S{m}")
    import math

    assert G.order == math.factorial(m)
    return G


def cyclic_group(m):
    """Cyclic group C_m as permutation matrices over F_2."""
    field = get_field(2, (1,))
    cyc = [(i + 1) % m for i in range(m)]
    G = FiniteMatrixGroup.from_generators(perm_matrices([cyc], m), field, name=f"C{m}")
    assert G.order == m
    return G


def quaternion_group():
    """Q_8 inside GL_2(3)."""
    field = get_field(3, (1, 2))
    i = np.array([[0, 2], [1, 0]], dtype=np.uint8)
    j = np.array([[1, 1], [1, 2]], dtype=np.uint8)
    G = FiniteMatrixGroup.from_generators([i, j], field, name="Q8")
    assert G.order == 8
    return G


# -- subgroups ---------------------------------------------------------------


class SubgroupHandle:
    def __init__(self, group, indices):
        self.group = group
        self.indices = np.asarray(np.unique(indices), dtype=np.int64)
        self.order = int(self.indices.shape[0])
        self.fingerprint = self.indices.tobytes()
        self._abelian = None
        self._gens = None
        self._codes = None

    @property
    def codes(self):
        if self._codes is None:
            self._codes = self.group.codes[self.indices]
        return self._codes

    @property
    def mats(self):
        return self.group.mats[self.indices]

    def __eq__(self, other):
        return self.group is other.group and self.fingerprint == other.fingerprint

    def __hash__(self):
        return hash(self.fingerprint)

    def __repr__(self):
        return f"<subgroup of {self.group.name}, order {self.order}>"

    def contains(self, other):
        pos = np.searchsorted(self.indices, other.indices)
        pos_c = np.minimum(pos, self.order - 1)
        return bool((self.indices[pos_c] == other.indices).all())

    def contains_index(self, idx):
        pos = np.searchsorted(self.indices, idx)
        return bool(pos < self.order and self.indices[pos] == idx)

    @property
    def is_abelian(self):
        if self._abelian is None:
            gens = self.generators
            ok = True
            for a in gens:
                for b in gens:
                    if self.group.matmul_idx(a, b)[0] != self.group.matmul_idx(b, a)[0]:
                        ok = False
                        break
                if not ok:
                    break
            self._abelian = ok
        return self._abelian

    @property
    def generators(self):
        """A small deterministic generating set (indices)."""
        if self._gens is None:
            G = self.group
            gens = []
            known = np.array([G.identity_index], dtype=np.int64)
            for idx in self.indices:
                pos = np.searchsorted(known, idx)
                if pos < known.shape[0] and known[pos] == idx:
                    continue
                gens.append(int(idx))
                known = closure_indices(G, gens)
                if known.shape[0] == self.order:
                    break
            self._gens = gens
        return self._gens

    def is_ell_group(self, ell):
        return self.order == ell_part(self.order, ell)


def closure_indices(G, gen_indices, max_size=None):
    """Sorted indices of the subgroup generated by the given element indices."""
    if max_size is None:
        max_size = G.order
    known = np.unique(np.r_[np.array([G.identity_index], dtype=np.int64), gen_indices])
    gens = np.unique(np.asarray(gen_indices, dtype=np.int64))
    if gens.size == 0:
        return known
    frontier = known
    while frontier.size:
        k, g = frontier.shape[0], gens.shape[0]
        prods = G.matmul_idx(np.repeat(frontier, g), np.tile(gens, k))
        new = np.setdiff1d(np.unique(prods), known, assume_unique=False)
        known = np.union1d(known, new)
        if known.size > max_size:
            raise TooLarge("subgroup closure exceeded bound")
        frontier = new
    return known


def subgroup_closure(G, gen_indices):
    """Smallest subgroup of G containing the given elements."""
    return SubgroupHandle(G, closure_indices(G, list(gen_indices)))


def trivial_subgroup(G):
    return SubgroupHandle(G, [G.identity_index])


def full_subgroup(G):
    return SubgroupHandle(G, np.arange(G.order, dtype=np.int64))


# -- conjugacy classes --------------------------------------------------------


class ClassData:
    """Conjugacy classes of a subgroup under its own conjugation action."""

    def __init__(self, handle, reps, sizes, orders, class_of):
        self.handle = handle
        self.reps = reps  # ambient indices of representatives
        self.sizes = sizes
        self.orders = orders  # element order per class
        self.class_of = class_of  # aligned with handle.indices
        assert int(np.sum(sizes)) == handle.order

    @property
    def k(self):
        return len(self.reps)

    def l_ell(self, ell):
        return sum(1 for o in self.orders if o % ell != 0)

    def class_of_index(self, idx):
        pos = np.searchsorted(self.handle.indices, idx)
        return int(self.class_of[pos])

    def inverse_class_perm(self):
        """Permutation i -> class of the inverses of class i."""
        G = self.handle.group
        return [self.class_of_index(G.inv_idx(r)) for r in self.reps]


def conjugacy_classes(handle):
    """Brute-force class enumeration by orbit closure under generator conjugation."""
    G = handle.group
    idxs = handle.indices
    pos_of = {int(v): p for p, v in enumerate(idxs)}
    gens = handle.generators if handle.order < G.order else [int(g) for g in G.gens]
    class_of = np.full(handle.order, -1, dtype=np.int64)
    reps, sizes, orders = [], [], []
    for p0 in range(handle.order):
        if class_of[p0] >= 0:
            continue
        cid = len(reps)
        rep = int(idxs[p0])
        class_of[p0] = cid
        frontier = [rep]
        size = 1
        while frontier:
            batch = np.array(frontier, dtype=np.int64)
            frontier = []
            for g in gens:
                imgs = G.conjugate_idx(batch, g)
                for im in imgs:
                    pp = pos_of[int(im)]
                    if class_of[pp] < 0:
                        class_of[pp] = cid
                        frontier.append(int(im))
                        size += 1
        reps.append(rep)
        sizes.append(size)
        orders.append(G.element_order(rep))
    return ClassData(handle, reps, np.array(sizes), orders, class_of)


# -- named subgroup operations -------------------------------------------------


def centralizer_in(G, S):
    """Pointwise centralizer of the subgroup S in G."""
    mask = np.ones(G.order, dtype=bool)
    for g in S.generators:
        mask &= _kernels.commute_mask(G.mats, G.mats[g], *G.kernel_args())
    return SubgroupHandle(G, np.nonzero(mask)[0])


def centralizer_mask(G, w_mats):
    """Mask of elements commuting with every matrix in w_mats."""
    mask = np.ones(G.order, dtype=bool)
    for w in w_mats:
        mask &= _kernels.commute_mask(G.mats, np.asarray(w, dtype=np.uint8), *G.kernel_args())
    return mask


def normalizer_in(G, S):
    """Setwise normalizer of the subgroup S in G."""
    if G.wide:
        mask = np.ones(G.order, dtype=bool)
        inv_mats = G.mats[G.inv_indices]
        for s in S.generators:
            t = _kernels.matmul(inv_mats, G.mats[s], *G.kernel_args())
            idx = G.index_of(_kernels.matmul(t, G.mats, *G.kernel_args()))
            mask &= np.isin(idx, S.indices)
        return SubgroupHandle(G, np.nonzero(mask)[0])
    gen_mats = np.ascontiguousarray(G.mats[np.array(S.generators, dtype=np.int64)])
    sub_codes = np.sort(G.codes[S.indices])
    mask = _kernels.conj_in_set_mask(
        G.mats, G.mats[G.inv_indices], gen_mats, sub_codes, G.pow_q, *G.kernel_args()
    )
    return SubgroupHandle(G, np.nonzero(mask)[0])


def conjugate_subgroup(S, g):
    """The subgroup g^-1 S g."""
    return SubgroupHandle(S.group, S.group.conjugate_idx(S.indices, g))


def commutator_subgroup(P):
    """Subgroup generated by all commutators of P."""
    G = P.group
    if P.order * P.order <= 4_000_000:
        comms = set()
        inv = G.inv_indices
        for a in P.indices:
            ia = int(inv[a])
            # [a, b] = a^-1 b^-1 a b for all b at once
            t = G.matmul_idx(np.full(P.order, ia), inv[P.indices])
            t = G.matmul_idx(t, np.full(P.order, int(a)))
            t = G.matmul_idx(t, P.indices)
            comms.update(int(x) for x in t)
        return subgroup_closure(G, sorted(comms))
    # large subgroup: normal closure of generator commutators
    gens = P.generators
    seed = set()
    for a in gens:
        for b in gens:
            ia, ib = G.inv_idx(a), G.inv_idx(b)
            t = int(G.matmul_idx(int(G.matmul_idx(int(G.matmul_idx(ia, ib)[0]), a)[0]), b)[0])
            seed.add(t)
    current = subgroup_closure(G, sorted(seed))
    while True:
        extra = set()
        for g in gens:
            img = G.conjugate_idx(current.indices, g)
            extra.update(int(x) for x in img if not current.contains_index(int(x)))
        if not extra:
            return current
        current = subgroup_closure(G, sorted(set(current.indices.tolist()) | extra))


def product_subgroup(A, B):
    """AB for commuting subgroups A, B; raises NotCommuting otherwise."""
    G = A.group
    for a in A.generators:
        for b in B.generators:
            if G.matmul_idx(a, b)[0] != G.matmul_idx(b, a)[0]:
                raise NotCommuting("subgroups do not commute elementwise")
    prod = subgroup_closure(G, list(A.generators) + list(B.generators))
    inter = np.intersect1d(A.indices, B.indices)
    assert prod.order * inter.shape[0] == A.order * B.order
    return prod


def sylow_subgroup(G, ell):
    """A Sylow ell-subgroup, grown through normalizers."""
    target = ell_part(G.order, ell)
    if target == 1:
        return trivial_subgroup(G)
    seed = None
    for i in range(G.order):
        if i == G.identity_index:
            continue
        o = G.element_order(i)
        if o % ell == 0:
            seed = power_index(G, i, o // ell_part(o, ell))
            break
    assert seed is not None
    P = subgroup_closure(G, [seed])
    while P.order < target:
        N = normalizer_in(G, P)
        grown = False
        for y in N.indices:
            if P.contains_index(int(y)):
                continue
            o = G.element_order(int(y))
            if o != ell_part(o, ell):
                continue
            P = subgroup_closure(G, list(P.indices) + [int(y)])
            grown = True
            break
        assert grown, "no ell-element found in normalizer"
    assert P.order == target
    return P


def power_index(G, i, e):
    """Index of the e-th power of the element with index i."""
    result = G.identity_index
    base = i
    while e:
        if e & 1:
            result = int(G.matmul_idx(result, base)[0])
        base = int(G.matmul_idx(base, base)[0])
        e >>= 1
    return result


# -- subgroup lattices ----------------------------------------------------------


def local_mult_table(H):
    """|H| x |H| multiplication table in local positions (0..|H|-1)."""
    G = H.group
    m = H.order
    ii, jj = np.meshgrid(H.indices, H.indices, indexing="ij")
    prod = G.matmul_idx(ii.ravel(), jj.ravel())
    local = np.searchsorted(H.indices, prod)
    assert (H.indices[local] == prod).all(), "subgroup not closed"
    return local.reshape(m, m).astype(np.int64)


def all_subgroups_of(H, lattice_bound=512):
    """Every subgroup of H, as SubgroupHandles into H's ambient group.

    Worklist join algorithm over the local multiplication table: grow each
    known subgroup by a generator of each cyclic subgroup until closed.
    """
    if H.order > lattice_bound:
        raise TooLarge(f"subgroup lattice of order-{H.order} group exceeds bound {lattice_bound}")
    table = local_mult_table(H)
    m = H.order
    e_local = int(np.searchsorted(H.indices, H.group.identity_index))
    # distinct cyclic subgroups, one generator each
    cyc_gens = []
    seen_cyc = set()
    for x in range(m):
        members = [e_local]
        y = x
        while y != e_local:
            members.append(y)
            y = int(table[y, x])
        key = np.array(sorted(members), dtype=np.int64).tobytes()
        if key not in seen_cyc:
            seen_cyc.add(key)
            cyc_gens.append(x)
    subs = {}
    triv = (e_local,)
    subs[np.array(triv, dtype=np.int64).tobytes()] = triv
    work = [triv]
    while work:
        cur = work.pop()
        for x in cyc_gens:
            if x in cur:
                continue
            joined = _kernels.closure_in_table(table, list(cur) + [x], m)
            key = joined.tobytes()
            if key not in subs:
                tup = tuple(int(v) for v in joined)
                subs[key] = tup
                work.append(tup)
    return [SubgroupHandle(H.group, H.indices[np.array(tup, dtype=np.int64)]) for tup in subs.values()]


# -- automorphisms -------------------------------------------------------------


class Automorphism:
    """inner(g), entrywise field power x -> x^(p^j), or transpose-inverse."""

    def __init__(self, kind, group, data=None):
        assert kind in ("inner", "field", "transpose_inverse")
        self.kind = kind
        self.group = group
        self.data = data

    def __repr__(self):
        return f"Automorphism({self.kind}{'' if self.data is None else ', ' + str(self.data)})"

    def apply_indices(self, idxs):
        G = self.group
        idxs = np.atleast_1d(np.asarray(idxs, dtype=np.int64))
        if self.kind == "inner":
            return G.conjugate_idx(idxs, self.data)
        if self.kind == "field":
            perm = np.arange(G.q, dtype=np.uint8)
            for _ in range(self.data % G.field.f):
                perm = G.field.frob[perm]
            mats = perm[G.mats[idxs]]
            return G.index_of(mats)
        mats = np.swapaxes(G.mats[G.inv_indices[idxs]], 1, 2)
        return G.index_of(np.ascontiguousarray(mats))


def apply_automorphism(alpha, x):
    """Image of an element index or SubgroupHandle under the automorphism."""
    if isinstance(x, SubgroupHandle):
        return SubgroupHandle(x.group, alpha.apply_indices(x.indices))
    return int(alpha.apply_indices(x)[0])


def standard_automorphisms(G):
    """Inner (one nontrivial), field, and transpose-inverse automorphisms of G.

    Only those well-defined on G as a matrix group; the field automorphism is
    skipped over prime fields where it is trivial.
    """
    out = []
    if G.order > 1:
        g = next(int(i) for i in range(G.order) if i != G.identity_index)
        out.append(Automorphism("inner", G, g))
    if G.field.f > 1:
        try:
            a = Automorphism("field", G, 1)
            a.apply_indices(np.array(G.gens))
            out.append(a)
        except KeyError:
            pass
    try:
        a = Automorphism("transpose_inverse", G)
        a.apply_indices(np.array(G.gens))
        out.append(a)
    except KeyError:
        pass
    return out


# -- quotient groups ------------------------------------------------------------


def coset_quotient_group(N, Q):
    """N/Q (Q normal in N) as a permutation-matrix group on the cosets of Q."""
    G = N.group
    assert N.contains(Q)
    coset_of = {}
    reps = []
    for idx in N.indices:
        if int(idx) in coset_of:
            continue
        cid = len(reps)
        reps.append(int(idx))
        coset = G.matmul_idx(np.full(Q.order, int(idx)), Q.indices)
        for c in coset:
            coset_of[int(c)] = cid
    m = len(reps)
    gen_perms = []
    for g in N.generators:
        images = G.matmul_idx(np.full(m, int(g)), np.array(reps, dtype=np.int64))
        gen_perms.append([coset_of[int(im)] for im in images])
    if not gen_perms:
        gen_perms = [list(range(m))]
    field = get_field(2, (1,))
    H = FiniteMatrixGroup.from_generators(perm_matrices(gen_perms, m), field, name="quotient")
    assert H.order == N.order // Q.order, "coset action is not faithful: Q not normal in N?"
    return H
