"""The algebraic-group layer for GL_n(q).

Connected centralizers of abelian ell-subgroups are computed through the
isotypic decomposition of the natural module under the commutative semisimple
algebra the subgroup spans: the module splits into blocks on which the algebra
acts as a field F_{q^d}, and the centralizer is the product of the groups of
F_{q^d}-linear automorphisms of the blocks.  e-split Levi subgroups are kept
as block data (never as infinite tori): the Phi_e-part of the centre of a Levi
only sees blocks whose field degree is divisible by e, and taking its
centralizer regroups each flagged (d, m) block into an F_{q^e}-structure of
multiplicity m*d/e while everything else merges into one plain F_q-block.

On top of this sit the closure operators gamma (e-closure) and omega (weak
e-closure) on abelian ell-subgroups and the mutually inverse chain bijections
iota / delta between chains of e-split Levi subgroups ending at G and chains
of e-closed abelian subgroups starting at Z(G)^F_ell.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import groups as gp
from . import posets as ps
from .errors import DefiningCharacteristic, HypothesisError, NotAbelian, NotEClosed
from .fields import get_field, mat_mul, mat_pow, nullspace, rref, solve
from .numtheory import IntPolynomial, cyclotomic_poly, e_ell, ell_part, order_poly_gl


def _subst_x_power(poly, d):
    out = [0] * (poly.degree * d + 1)
    for i, c in enumerate(poly.coeffs):
        out[i * d] = c
    return IntPolynomial(out)


def mat_inverse(mat, fld):
    n = mat.shape[0]
    eye = np.zeros((n, n), dtype=np.uint8)
    eye[np.arange(n), np.arange(n)] = 1
    aug, piv = rref(np.hstack([mat, eye]), fld)
    assert piv == list(range(n)), "matrix not invertible"
    return aug[:, n:]


class GLContext:
    """GL_n(q) together with its field tower and closure-operator caches."""

    def __init__(self, n, q, max_order=gp.DEFAULT_ENUM_BOUND):
        self.n = n
        self.q = q
        self.group = gp.build_gl(n, q, max_order=max_order)
        self.field = self.group.field
        self.tower = self.field.tower
        self.p = self.field.p
        self.f = self.field.f
        self._conn_cent = {}
        self._eclosure_levi = {}
        self._gamma = {}
        self._levi_posets = {}

    def __repr__(self):
        return f"GLContext(n={self.n}, q={self.q})"

    def scalar_matrix(self, idx):
        m = np.zeros((self.n, self.n), dtype=np.uint8)
        m[np.arange(self.n), np.arange(self.n)] = idx
        return m

    def center_ell_part(self, ell):
        """Z(G)^F_ell: the scalars of order (q-1)_ell."""
        lp = ell_part(self.q - 1, ell)
        if lp == 1:
            return gp.trivial_subgroup(self.group)
        code = self.tower.pow(self.field.to_code(self.field.generator), (self.q - 1) // lp)
        mat = self.scalar_matrix(self.field.to_index(code))
        return gp.subgroup_closure(self.group, [int(self.group.index_of(mat[None])[0])])


@dataclasses.dataclass
class IsotypicBlock:
    """One isotypic piece: F_{q^d}-structure of multiplicity m on a subspace."""

    d: int
    m: int
    basis: np.ndarray  # n x (d*m) columns over F_q
    scalar_action: np.ndarray  # (d*m) x (d*m), a generator of F_{q^d}^x on the block

    @property
    def dim(self):
        return self.d * self.m


class LeviDatum:
    """A block decomposition of F_q^n with field structures; a Levi subgroup."""

    def __init__(self, ctx, blocks):
        self.ctx = ctx
        self.blocks = blocks
        assert sum(b.dim for b in blocks) == ctx.n
        self._subgroup = None
        self._ext = None

    def _extended(self):
        """Full change of basis, per-block projectors and extended scalar actions."""
        if self._ext is None:
            ctx = self.ctx
            B = np.hstack([b.basis for b in self.blocks])
            Binv = mat_inverse(B, ctx.field)
            projectors = []
            scalars = []
            off = 0
            n = ctx.n
            for b in self.blocks:
                E = np.zeros((n, n), dtype=np.uint8)
                E[np.arange(off, off + b.dim), np.arange(off, off + b.dim)] = 1
                P = mat_mul(mat_mul(B, E, ctx.field), Binv, ctx.field)
                D = np.zeros((n, n), dtype=np.uint8)
                D[np.arange(n), np.arange(n)] = 1
                D[off : off + b.dim, off : off + b.dim] = b.scalar_action
                W = mat_mul(mat_mul(B, D, ctx.field), Binv, ctx.field)
                projectors.append(P)
                scalars.append(W)
                off += b.dim
            self._ext = (projectors, scalars)
        return self._ext

    @property
    def subgroup(self):
        """The finite Levi: elements preserving each block and each field action."""
        if self._subgroup is None:
            ctx = self.ctx
            projectors, scalars = self._extended()
            mask = np.ones(ctx.group.order, dtype=bool)
            for b, P, W in zip(self.blocks, projectors, scalars):
                mask &= gp.centralizer_mask(ctx.group, [P])
                if b.d >= 2:
                    mask &= gp.centralizer_mask(ctx.group, [W])
            self._subgroup = gp.SubgroupHandle(ctx.group, np.nonzero(mask)[0])
            assert self._subgroup.order == self.expected_order()
        return self._subgroup

    def set_subgroup(self, handle):
        self._subgroup = handle

    def expected_order(self):
        out = 1
        for b in self.blocks:
            qd = self.ctx.q**b.d
            for i in range(b.m):
                out *= qd**b.m - qd**i
        return out

    def order_polynomial(self):
        poly = IntPolynomial([1])
        for b in self.blocks:
            poly = poly * _subst_x_power(order_poly_gl(b.m), b.d)
        return poly

    def signature(self):
        """Conjugacy-type signature: sorted (d, m) pairs."""
        return tuple(sorted((b.d, b.m) for b in self.blocks))

    def z_ell_part(self, ell):
        """Z(L)^F_ell: per block, the ell-part of its scalar group."""
        ctx = self.ctx
        _, scalars = self._extended()
        gens = []
        for b, W in zip(self.blocks, scalars):
            full = ctx.q**b.d - 1
            lp = ell_part(full, ell)
            if lp == 1:
                continue
            gens.append(int(ctx.group.index_of(mat_pow(W, full // lp, ctx.field)[None])[0]))
        return gp.subgroup_closure(ctx.group, gens)

    def conjugate(self, g):
        ctx = self.ctx
        gm = ctx.group.mats[g]
        gi = ctx.group.mats[ctx.group.inv_idx(g)]
        blocks = []
        for b in self.blocks:
            # subgroup conjugation x -> g^-1 x g sends the block span to g^-1 V
            nb = mat_mul(gi, b.basis, ctx.field)
            blocks.append(IsotypicBlock(b.d, b.m, nb, b.scalar_action))
        out = LeviDatum(ctx, blocks)
        if self._subgroup is not None:
            out.set_subgroup(gp.conjugate_subgroup(self._subgroup, g))
        return out

    def __repr__(self):
        sig = ", ".join(f"GL{b.m}(q^{b.d})" for b in self.blocks)
        return f"<LeviDatum {sig}>"


# -- isotypic decomposition -----------------------------------------------------


def _matrix_minpoly(z, fld):
    """Minimal polynomial of the matrix z over the field, as index coefficients."""
    n = z.shape[0]
    powers = [np.zeros((n, n), dtype=np.uint8)]
    powers[0][np.arange(n), np.arange(n)] = 1
    stack = powers[0].reshape(1, -1)
    k = 0
    while True:
        k += 1
        nxt = mat_mul(powers[-1], z, fld)
        coeffs = solve(stack.T.astype(np.uint8), nxt.reshape(-1), fld)
        if coeffs is not None:
            # x^k - sum coeffs_j x^j
            out = [fld.neg_t[c] for c in coeffs] + [1]
            return out
        powers.append(nxt)
        stack = np.vstack([stack, nxt.reshape(1, -1)])


def _factor_squarefree(coeffs_idx, ctx, max_degree):
    """Distinct irreducible factors over F_q of a squarefree polynomial.

    Found by scanning the subfields F_{q^d} of the tower for roots and
    collecting Frobenius orbits; returns (degree, root_code, coeff indices).
    """
    fld = ctx.field
    tower = ctx.tower
    codes = [fld.to_code(int(c)) for c in coeffs_idx]
    degree = len(codes) - 1
    found = set()
    factors = []
    for d in range(1, max_degree + 1):
        if len(found) == degree:
            break
        for code in tower.subfield_codes(ctx.f * d):
            if code in found:
                continue
            if tower.eval_poly(codes, code) != 0:
                continue
            orbit = []
            c = code
            while c not in orbit:
                orbit.append(c)
                c = tower.pow(c, ctx.q)
            assert len(orbit) == d
            root = min(orbit)
            mp = tower.minpoly_over(root, ctx.q)
            factors.append((d, root, [fld.to_index(c) for c in mp]))
            found.update(orbit)
    assert sum(f[0] for f in factors) == degree, "squarefree factorization incomplete"
    return factors


def _eval_poly_at_matrix(coeffs_idx, z, fld):
    n = z.shape[0]
    acc = np.zeros((n, n), dtype=np.uint8)
    for c in list(coeffs_idx)[::-1]:
        acc = mat_mul(acc, z, fld)
        acc[np.arange(n), np.arange(n)] = fld.add_t[acc[np.arange(n), np.arange(n)], int(c)]
    return acc


def _fq_coords_of(code, root, d, ctx):
    """Write an F_{q^d} element as sum c_j * root^j with c_j in F_q (index list)."""
    tower = ctx.tower
    p, f = ctx.p, ctx.f
    M = tower.M
    base_codes = [tower.pow(tower.subfield_generator(f), u) if u else 1 for u in range(f)]
    cols = []
    for j in range(d):
        rj = tower.pow(root, j)
        for u in range(f):
            cols.append(tower._code_to_vec(tower.mul(base_codes[u], rj)))
    A = np.array(cols, dtype=np.uint8).T % p  # M x (d*f)
    b = np.array(tower._code_to_vec(code), dtype=np.uint8)
    fp = get_field(p, (1,))
    x = solve(A, b, fp)
    assert x is not None
    out = []
    for j in range(d):
        acc = 0
        for u in range(f):
            if x[j * f + u]:
                acc = tower.add(acc, tower.mul(int(x[j * f + u]) % p, base_codes[u]))
        out.append(ctx.field.to_index(acc))
    return out


def _restrict_to(mat, basis, fld):
    """Matrix of `mat` on the column span of `basis`, in basis coordinates."""
    img = mat_mul(mat, basis, fld)
    dim = basis.shape[1]
    out = np.zeros((dim, dim), dtype=np.uint8)
    for col in range(dim):
        x = solve(basis, img[:, col], fld)
        assert x is not None, "subspace not invariant"
        out[:, col] = x
    return out


def _algebra_basis(mats, fld):
    """Row-reduced basis of the span of the given matrices, as square matrices."""
    k = mats.shape[-1]
    red, piv = rref(mats.reshape(len(mats), k * k), fld)
    return [red[i].reshape(k, k) for i in range(len(piv))]


def _split_isotypic(ctx, alg_mats):
    """Split the module the given commuting matrices act on into isotypic pieces.

    alg_mats act on F_q^k; returns a list of (basis, d, z, root): basis is
    k x (d*m) in the current coordinates, and z is the (d*m)-square matrix of
    an algebra element acting on the block as a field generator whose minimal
    polynomial vanishes at root.  A piece is accepted only on the positive
    certificate that some element has an irreducible minimal polynomial of
    degree equal to the restricted-algebra dimension; a reducible (squarefree)
    minimal polynomial splits the module along the kernels of its factors.
    """
    fld = ctx.field
    k = alg_mats[0].shape[0]
    S_basis = _algebra_basis(np.array(alg_mats, dtype=np.uint8), fld)
    s = len(S_basis)
    for attempt in range(1024):
        if attempt < s:
            z = S_basis[attempt]
        else:
            rng = np.random.default_rng(0xB10C + attempt)
            coeffs = rng.integers(0, ctx.q, size=s)
            z = np.zeros((k, k), dtype=np.uint8)
            for c, M in zip(coeffs, S_basis):
                if c:
                    z = fld.add_t[z, fld.mul_t[int(c), M]]
        mp = _matrix_minpoly(z, fld)
        factors = _factor_squarefree(mp, ctx, s)
        if len(factors) == 1 and factors[0][0] == s:
            d, root, _ = factors[0]
            return [(np.eye(k, dtype=np.uint8), d, z, root)]
        if len(factors) >= 2:
            out = []
            for d, root, coeffs_idx in factors:
                ker = nullspace(_eval_poly_at_matrix(coeffs_idx, z, fld), fld)
                restr_sub = [_restrict_to(M, ker, fld) for M in alg_mats]
                for b2, d2, z2, r2 in _split_isotypic(ctx, restr_sub):
                    out.append((mat_mul(ker, b2, fld), d2, z2, r2))
            return out
        # single irreducible factor of degree < s: z generates a proper subfield
    raise AssertionError("isotypic splitting did not converge")


def connected_centralizer(ctx, A):
    """Isotypic block data of C_G(A) plus the finite centralizer subgroup.

    For GL_n the algebraic centralizer of an abelian ell-subgroup is connected,
    so the finite subgroup equals the brute-force centralizer; its order is
    checked against the block structure prod |GL_{m_i}(q^{d_i})|.
    """
    key = A.fingerprint
    if key in ctx._conn_cent:
        return ctx._conn_cent[key]
    if not A.is_abelian:
        raise NotAbelian("connected_centralizer needs an abelian subgroup")
    if math.gcd(A.order, ctx.q) > 1:
        raise DefiningCharacteristic("ell divides q")
    fld = ctx.field
    alg_mats = _algebra_basis(A.mats, fld)
    blocks = []
    for block_basis, d, zb, root in _split_isotypic(ctx, alg_mats):
        bdim = block_basis.shape[1]
        assert bdim % d == 0
        # generator of F_{q^d}^x written in powers of the chosen root alpha,
        # then evaluated at z (the algebra isomorphism sends z to alpha)
        w = ctx.tower.subfield_generator(ctx.f * d)
        wc = _fq_coords_of(w, root, d, ctx)
        W = np.zeros((bdim, bdim), dtype=np.uint8)
        acc = np.eye(bdim, dtype=np.uint8)
        for c in wc:
            if c:
                W = fld.add_t[W, fld.mul_t[int(c), acc]]
            acc = mat_mul(acc, zb, fld)
        blocks.append(IsotypicBlock(d, bdim // d, block_basis, W))
    blocks.sort(key=lambda b: (b.d, b.m, b.basis.tobytes()))
    datum = LeviDatum(ctx, blocks)
    cent = gp.centralizer_in(ctx.group, A)
    assert cent.order == datum.expected_order(), "centralizer does not match block data"
    datum.set_subgroup(cent)
    ctx._conn_cent[key] = datum
    return datum


# -- Phi_e parts and e-split centralizers ----------------------------------------


def levi_order_polynomial(datum):
    """Order polynomial of a Levi datum; evaluation at q gives the subgroup order."""
    return datum.order_polynomial()


def z_ell_part(datum, ell):
    """Z(L)^F_ell of a Levi datum, as a subgroup handle."""
    return datum.z_ell_part(ell)


@dataclasses.dataclass
class TorusPart:
    """The Phi_e-part of Z(L): which blocks carry it, with fixed-point orders."""

    datum: LeviDatum
    e: int
    flagged: list  # indices into datum.blocks with e | d
    fixed_orders: list  # |S^F| = Phi_e(q) per flagged block


def phi_e_center_part(datum, e):
    flagged = [i for i, b in enumerate(datum.blocks) if b.d % e == 0]
    phi_q = cyclotomic_poly(e)(datum.ctx.q)
    return TorusPart(datum, e, flagged, [phi_q] * len(flagged))


def e_split_centralizer(tp):
    """C_G(S) for S the Phi_e-part of Z(L).

    Each flagged block (d, m) regroups into an F_{q^e}-structure of
    multiplicity m*d/e (the e residue classes of Frobenius weights); the
    Phi_e-part acts trivially on unflagged blocks, which therefore merge into
    a single plain F_q-block.  For e = 1 every block is flagged and each stays
    a separate GL_{m*d}(q) factor.
    """
    datum, e = tp.datum, tp.e
    ctx = datum.ctx
    fld = ctx.field
    new_blocks = []
    plain_bases = []
    for i, b in enumerate(datum.blocks):
        if i in tp.flagged:
            power = (ctx.q**b.d - 1) // (ctx.q**e - 1)
            W = mat_pow(b.scalar_action, power, fld)
            new_blocks.append(IsotypicBlock(e, b.m * b.d // e, b.basis, W))
        else:
            plain_bases.append(b.basis)
    if plain_bases:
        basis = np.hstack(plain_bases)
        dim = basis.shape[1]
        W = np.zeros((dim, dim), dtype=np.uint8)
        W[np.arange(dim), np.arange(dim)] = fld.generator
        new_blocks.append(IsotypicBlock(1, dim, basis, W))
    return LeviDatum(ctx, sorted(new_blocks, key=lambda b: (b.d, b.m, b.basis.tobytes())))


def eclosure_levi(ctx, A, e):
    """The e-split Levi C_G(Z(C_G(A))_{Phi_e}) attached to an abelian subgroup."""
    key = (A.fingerprint, e)
    if key not in ctx._eclosure_levi:
        ctx._eclosure_levi[key] = e_split_centralizer(phi_e_center_part(connected_centralizer(ctx, A), e))
    return ctx._eclosure_levi[key]


def gamma(ctx, A, ell, e):
    """The e-closure operator: A -> Z(C_G(Z(C_G(A))_{Phi_e}))^F_ell."""
    key = (A.fingerprint, ell, e)
    if key not in ctx._gamma:
        ctx._gamma[key] = eclosure_levi(ctx, A, e).z_ell_part(ell)
    return ctx._gamma[key]


def omega(ctx, A, ell, e):
    """Weak e-closure: A * gamma(A) (the two commute)."""
    return gp.product_subgroup(A, gamma(ctx, A, ell, e))


def is_e_closed(ctx, A, ell, e):
    return gamma(ctx, A, ell, e) == A


def is_weakly_e_closed(ctx, A, ell, e):
    return omega(ctx, A, ell, e) == A


def omega_stabilize(ctx, A, ell, e):
    """(omega^t(A), t) with t minimal such that the result is weakly e-closed."""
    t = 0
    cur = A
    while True:
        nxt = omega(ctx, cur, ell, e)
        if nxt == cur:
            return cur, t
        cur = nxt
        t += 1


def gamma_stabilize(ctx, A, ell, e):
    """(gamma^r(A), r) with r minimal such that the result is e-closed.

    Defined on weakly e-closed subgroups, where gamma descends.
    """
    r = 0
    cur = A
    while True:
        nxt = gamma(ctx, cur, ell, e)
        if nxt == cur:
            return cur, r
        cur = nxt
        r += 1


@dataclasses.dataclass
class EClosureReport:
    subgroup: object
    gamma_image: object
    omega_image: object
    t_index: int
    r_index: int
    e_closed: bool
    weakly_e_closed: bool


def stabilize(ctx, A, ell, e):
    g = gamma(ctx, A, ell, e)
    w = omega(ctx, A, ell, e)
    wstab, t = omega_stabilize(ctx, A, ell, e)
    _, r = gamma_stabilize(ctx, wstab, ell, e)
    e_closed = g == A
    weakly = w == A
    if e_closed:
        assert weakly, "e-closed must imply weakly e-closed"
    return EClosureReport(A, g, w, t, r, e_closed, weakly)


# -- enumeration of e-split Levi subgroups ---------------------------------------


def _partitions(total):
    if total == 0:
        yield ()
        return
    for first in range(total, 0, -1):
        for rest in _partitions(total - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def standard_levi_datum(ctx, e, n0, parts):
    """Coordinate-block datum for GL_{n0}(q) x prod_j GL_{b_j}(q^e)."""
    assert n0 + e * sum(parts) == ctx.n
    fld = ctx.field
    blocks = []
    off = 0
    w = ctx.tower.subfield_generator(ctx.f * e)
    mp = [fld.to_index(c) for c in ctx.tower.minpoly_over(w, ctx.q)]
    comp = np.zeros((e, e), dtype=np.uint8)
    for j in range(e - 1):
        comp[j + 1, j] = 1
    for j in range(e):
        comp[j, e - 1] = fld.neg_t[mp[j]]
    for b in parts:
        dim = e * b
        basis = np.zeros((ctx.n, dim), dtype=np.uint8)
        basis[np.arange(off, off + dim), np.arange(dim)] = 1
        W = np.zeros((dim, dim), dtype=np.uint8)
        for c in range(b):
            W[c * e : (c + 1) * e, c * e : (c + 1) * e] = comp
        blocks.append(IsotypicBlock(e, b, basis, W))
        off += dim
    if n0:
        basis = np.zeros((ctx.n, n0), dtype=np.uint8)
        basis[np.arange(off, off + n0), np.arange(n0)] = 1
        W = np.zeros((n0, n0), dtype=np.uint8)
        W[np.arange(n0), np.arange(n0)] = fld.generator
        blocks.append(IsotypicBlock(1, n0, basis, W))
    return LeviDatum(ctx, blocks)


def levi_types(n, e):
    """Combinatorial types (n0, parts) of e-split Levi subgroups of GL_n."""
    out = []
    if e == 1:
        for parts in _partitions(n):
            out.append((0, parts))
        return out
    for total in range(0, n // e + 1):
        for parts in _partitions(total):
            out.append((n - e * total, parts))
    return out


@dataclasses.dataclass
class LeviFamily:
    """All e-split Levi subgroups of (G, F): orbit reps and the full sets."""

    ctx: object
    e: int
    reps: list  # one LeviDatum per conjugacy type
    all_data: dict  # subgroup fingerprint -> LeviDatum
    orbit_sizes: dict  # rep signature -> orbit length


def enumerate_e_split_levis(ctx, e):
    if e in ctx._levi_posets:
        return ctx._levi_posets[e]
    reps = []
    all_data = {}
    orbit_sizes = {}
    for n0, parts in levi_types(ctx.n, e):
        datum = standard_levi_datum(ctx, e, n0, parts)
        reps.append(datum)
        queue = [datum]
        fp = datum.subgroup.fingerprint
        assert fp not in all_data, "duplicate Levi type"
        all_data[fp] = datum
        size = 1
        while queue:
            cur = queue.pop()
            for g in ctx.group.gens:
                img = cur.conjugate(g)
                key = img.subgroup.fingerprint
                if key not in all_data:
                    all_data[key] = img
                    queue.append(img)
                    size += 1
        orbit_sizes[datum.signature()] = size
    fam = LeviFamily(ctx, e, reps, all_data, orbit_sizes)
    ctx._levi_posets[e] = fam
    return fam


def levi_poset(ctx, e, proper_only=False):
    """The poset of e-split Levi subgroups ordered by subgroup inclusion."""
    fam = enumerate_e_split_levis(ctx, e)
    members = []
    data_by_fp = {}
    full = gp.full_subgroup(ctx.group)
    for fp, datum in fam.all_data.items():
        if proper_only and datum.subgroup.order == ctx.group.order:
            continue
        members.append(datum.subgroup)
        data_by_fp[fp] = datum
    if proper_only:
        return ps.LPoset(ctx.group, "levi_star", members, "unanchored", meta={"data": data_by_fp})
    return ps.LPoset(
        ctx.group, "levi", members, "ends-at-G", anchor=full, meta={"data": data_by_fp}
    )


def abelian_poset(ctx, ell, sylow_lattice_bound=ps.DEFAULT_SYLOW_LATTICE_BOUND):
    """Ab_ell(G, Z(G)^F_ell), anchored at the central ell-part."""
    Z = ctx.center_ell_part(ell)
    pos = ps.enumerate_ell_subgroups(ctx.group, ell, Z=Z, sylow_lattice_bound=sylow_lattice_bound)
    return ps.ab_filter(pos, "ab")


def e_closed_poset(ctx, ell, e, ab=None):
    """The subposet of e-closed members of Ab_ell(G, Z(G)^F_ell), anchored."""
    if ab is None:
        ab = abelian_poset(ctx, ell)
    members = [h for h in ab.members if is_e_closed(ctx, h, ell, e)]
    return ps.LPoset(ctx.group, "ab_ell", members, "starts-at-Z", Z=ab.Z, anchor=ab.Z)


def wec_poset(ctx, ell, e, ab=None):
    """The subposet of weakly e-closed members, anchored."""
    if ab is None:
        ab = abelian_poset(ctx, ell)
    members = [h for h in ab.members if is_weakly_e_closed(ctx, h, ell, e)]
    return ps.LPoset(ctx.group, "ab_ell", members, "starts-at-Z", Z=ab.Z, anchor=ab.Z)


def fiber_poset(ctx, datum, ell, e, ab_star=None):
    """The Quillen fiber over an e-split Levi: nontrivial abelian A with
    e-split closure inside L.  Returns (poset, id of A0 = Z(L)^F_ell, N_G(L)^F).
    """
    if ab_star is None:
        ab_star = ps.starred(abelian_poset(ctx, ell))
    L = datum.subgroup
    members = [h for h in ab_star.members if L.contains(eclosure_levi(ctx, h, e).subgroup)]
    pos = ps.LPoset(ctx.group, "custom", members, "unanchored", Z=ab_star.Z)
    a0 = datum.z_ell_part(ell)
    norm = gp.normalizer_in(ctx.group, L)
    return pos, pos.member_id(a0), norm


# -- the chain bijections iota / delta -------------------------------------------


def iota(ctx, levi_chain, ell):
    """Chains of e-split Levis ending at G -> chains of e-closed abelian subgroups.

    Input ascending by inclusion with top term G; output ascending starting at
    Z(G)^F_ell, obtained by taking Z(L)^F_ell termwise (order reverses).
    """
    assert levi_chain[-1].subgroup.order == ctx.group.order, "chain must end at G"
    out = [datum.z_ell_part(ell) for datum in reversed(levi_chain)]
    for a, b in zip(out, out[1:]):
        assert b.contains(a) and a.order < b.order, "iota image is not a strict chain"
    return out


def delta(ctx, abelian_chain, ell, e):
    """Chains of e-closed abelian subgroups starting at Z(G)^F_ell -> Levi chains."""
    Z = ctx.center_ell_part(ell)
    assert abelian_chain[0] == Z, "chain must start at Z(G)^F_ell"
    for A in abelian_chain:
        if not is_e_closed(ctx, A, ell, e):
            raise NotEClosed("delta is defined only on e-closed chains")
    out = [eclosure_levi(ctx, A, e) for A in reversed(abelian_chain)]
    for small, big in zip(out, out[1:]):
        assert big.subgroup.contains(small.subgroup), "delta image is not a chain"
    return out


# -- hypothesis bookkeeping -------------------------------------------------------


@dataclasses.dataclass
class HypothesisReport:
    items: list  # (name, passed, detail)

    @property
    def pi_ok(self):
        """ell lies in pi(G, F)."""
        return all(p for name, p, _ in self.items if name != "ell_coprime_center")

    @property
    def theorem_a_ok(self):
        return all(p for _, p, _ in self.items)

    def as_dicts(self):
        return [{"name": n, "pass": bool(p), "detail": d} for n, p, d in self.items]


def hypothesis_check(ctx, ell):
    """Itemized prime conditions for GL_n(q): the pi(G,F) set plus ell coprime to |Z^F|."""
    from .fields import is_prime as isp

    gcd_sc = math.gcd(ctx.n, ctx.q - 1)
    items = [
        ("ell_prime", isp(ell), f"ell = {ell}"),
        ("ell_odd", ell % 2 == 1, f"ell = {ell}"),
        ("ell_not_defining", ctx.q % ell != 0 if ell > 1 else False, f"q = {ctx.q}"),
        ("ell_good", True, "all primes are good for type A"),
        ("ell_coprime_sc_center", gcd_sc % ell != 0, f"|Z(G_sc)^F| = gcd(n, q-1) = {gcd_sc}"),
        ("center_index", True, "GL_n has connected centre (and is self-dual)"),
        ("ell_coprime_center", (ctx.q - 1) % ell != 0, f"|Z(G)^F| = q-1 = {ctx.q - 1}"),
    ]
    return HypothesisReport(items)


def require_hypotheses(ctx, ell):
    rep = hypothesis_check(ctx, ell)
    if not rep.theorem_a_ok:
        failed = [n for n, p, _ in rep.items if not p]
        raise HypothesisError(f"prime conditions fail: {failed}")
    return rep
