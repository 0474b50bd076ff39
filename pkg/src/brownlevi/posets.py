"""ell-subgroup posets, order complexes, chain orbits, and their invariants.

A poset here is a list of SubgroupHandles of one ambient group, ordered by
inclusion, together with a convention for which chains count as simplices:

* ``unanchored`` -- every nonempty totally ordered subset (starred posets);
* ``starts-at-Z`` -- chains containing the minimum Z as their first term;
* ``ends-at-G`` -- chains containing the maximum as their last term (the
  e-split Levi poset).

Member ids are assigned sorted by subgroup order, so every chain is a strictly
increasing id tuple; that fixed total order also orients simplices.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import groups as gp
from . import homology as hm
from .errors import TooManySubgroups
from .numtheory import ell_part

DEFAULT_SYLOW_LATTICE_BOUND = 128
DEFAULT_CERT_LATTICE_BOUND = 512

_CONVENTIONS = ("unanchored", "starts-at-Z", "ends-at-G")


class LPoset:
    def __init__(self, group, kind, members, convention, Z=None, anchor=None, meta=None):
        assert convention in _CONVENTIONS
        self.group = group
        self.kind = kind
        self.members = sorted(members, key=lambda h: (h.order, h.fingerprint))
        self.convention = convention
        self.Z = Z
        self.meta = meta or {}
        self._id_of = {h.fingerprint: i for i, h in enumerate(self.members)}
        assert len(self._id_of) == len(self.members), "duplicate members"
        self.leq = self._build_leq()
        self.anchor_id = self._id_of[anchor.fingerprint] if anchor is not None else None
        self._gen_perms = None
        self._normalizers = {}

    def _build_leq(self):
        n = len(self.members)
        leq = np.zeros((n, n), dtype=bool)
        for i, a in enumerate(self.members):
            for j, b in enumerate(self.members):
                if a.order < b.order and b.order % a.order == 0:
                    leq[i, j] = b.contains(a)
            leq[i, i] = True
        return leq

    def __len__(self):
        return len(self.members)

    def member_id(self, handle):
        return self._id_of[handle.fingerprint]

    def perm_under(self, g):
        """Permutation of member ids induced by conjugation by element index g."""
        out = np.empty(len(self.members), dtype=np.int64)
        for i, h in enumerate(self.members):
            out[i] = self._id_of[gp.conjugate_subgroup(h, g).fingerprint]
        return out

    @property
    def gen_perms(self):
        if self._gen_perms is None:
            self._gen_perms = [self.perm_under(g) for g in self.group.gens]
        return self._gen_perms

    def perm_under_auto(self, alpha):
        """Member permutation induced by an Automorphism; the poset must be stable."""
        out = np.empty(len(self.members), dtype=np.int64)
        for i, h in enumerate(self.members):
            out[i] = self._id_of[gp.apply_automorphism(alpha, h).fingerprint]
        return out

    def normalizer(self, member_id):
        if member_id not in self._normalizers:
            self._normalizers[member_id] = gp.normalizer_in(self.group, self.members[member_id])
        return self._normalizers[member_id]

    def restricted(self, member_ids, kind="custom", convention="unanchored"):
        return LPoset(
            self.group, kind, [self.members[i] for i in member_ids], convention, Z=self.Z
        )


def enumerate_ell_subgroups(G, ell, Z=None, sylow_lattice_bound=DEFAULT_SYLOW_LATTICE_BOUND):
    """The poset S_ell(G, Z): all ell-subgroups containing the central Z."""
    if Z is None:
        Z = gp.trivial_subgroup(G)
    P = gp.sylow_subgroup(G, ell)
    if P.order > sylow_lattice_bound:
        raise TooManySubgroups(
            f"Sylow order {P.order} exceeds subgroup-lattice bound {sylow_lattice_bound}"
        )
    assert P.contains(Z), "Z must be a central ell-subgroup"
    seen = {}
    queue = []
    for S in gp.all_subgroups_of(P, lattice_bound=sylow_lattice_bound):
        if S.contains(Z) and S.fingerprint not in seen:
            seen[S.fingerprint] = S
            queue.append(S)
    while queue:
        S = queue.pop()
        for g in G.gens:
            img = gp.conjugate_subgroup(S, g)
            if img.fingerprint not in seen:
                seen[img.fingerprint] = img
                queue.append(img)
    return LPoset(G, "s_ell", list(seen.values()), "starts-at-Z", Z=Z, anchor=Z)


def ab_filter(poset, variant="ab"):
    """Restrict to abelian members (``ab``) or members with P/Z abelian (``ab_z``)."""
    assert poset.kind in ("s_ell", "ab_ell", "ab_ell_z")
    Z = poset.Z
    out = []
    for h in poset.members:
        if variant == "ab":
            keep = h.is_abelian
        else:
            keep = Z.contains(gp.commutator_subgroup(h)) if not h.is_abelian else True
        if keep:
            out.append(h)
    kind = "ab_ell" if variant == "ab" else "ab_ell_z"
    return LPoset(poset.group, kind, out, "starts-at-Z", Z=Z, anchor=Z)


def starred(poset):
    """Drop the anchor Z; chains become unanchored (the Brown-complex view)."""
    assert poset.convention == "starts-at-Z"
    members = [h for h in poset.members if h.fingerprint != poset.Z.fingerprint]
    return LPoset(poset.group, poset.kind + "_star", members, "unanchored", Z=poset.Z)


# -- chains and orbits ---------------------------------------------------------


@dataclasses.dataclass
class OrbitRow:
    rep: tuple
    dimension: int
    orbit_size: int
    sign: int
    _table: object

    @property
    def stabilizer(self):
        return self._table.stabilizer_of(self.rep)


class ChainOrbitTable:
    def __init__(self, poset, chains, orbit_of=None, orbit_reps=None, orbit_sizes=None):
        self.poset = poset
        self.chains = chains
        self.dims = np.array([len(c) - 1 for c in chains], dtype=np.int64)
        self.orbit_of = orbit_of
        self.orbit_reps = orbit_reps
        self.orbit_sizes = orbit_sizes
        self._stab_cache = {}

    @property
    def has_orbits(self):
        return self.orbit_reps is not None

    def rows(self):
        for i, rep in enumerate(self.orbit_reps):
            d = len(rep) - 1
            yield OrbitRow(rep, d, self.orbit_sizes[i], (-1) ** d, self)

    def stabilizer_of(self, chain):
        """Intersection of the setwise normalizers of the chain's terms."""
        if chain in self._stab_cache:
            return self._stab_cache[chain]
        poset = self.poset
        idxs = None
        for m in chain:
            ni = poset.normalizer(m).indices
            idxs = ni if idxs is None else np.intersect1d(idxs, ni, assume_unique=True)
        stab = gp.SubgroupHandle(poset.group, idxs)
        self._stab_cache[chain] = stab
        return stab

    def counts_by_dim(self):
        out = {}
        for d in self.dims:
            out[int(d)] = out.get(int(d), 0) + 1
        return out

    def face_closure(self):
        """All nonempty subchains; the simplicial complex the chains generate."""
        import itertools

        seen = set()
        for c in self.chains:
            for r in range(1, len(c) + 1):
                for sub in itertools.combinations(c, r):
                    seen.add(sub)
        return seen


def chains_of(poset, orbits=None):
    """All chains respecting the poset's convention, grouped into G-orbits.

    Orbit data is skipped for ``custom`` posets (fiber posets are only stable
    under a subgroup, not under all of G) unless explicitly requested.
    """
    if orbits is None:
        orbits = poset.kind != "custom"
    n = len(poset)
    strictly_less = [np.nonzero(poset.leq[i] & (np.arange(n) != i))[0] for i in range(n)]
    chains = []

    def extend(chain):
        chains.append(tuple(chain))
        for nxt in strictly_less[chain[-1]]:
            chain.append(int(nxt))
            extend(chain)
            chain.pop()

    if poset.convention == "starts-at-Z":
        extend([poset.anchor_id])
    elif poset.convention == "ends-at-G":
        # enumerate unanchored, keep chains whose top is the anchor
        for start in range(n):
            extend([start])
        chains = [c for c in chains if c[-1] == poset.anchor_id]
    else:
        for start in range(n):
            extend([start])
    chains.sort()
    if not orbits:
        return ChainOrbitTable(poset, chains)
    pos_of = {c: i for i, c in enumerate(chains)}
    orbit_of = np.full(len(chains), -1, dtype=np.int64)
    reps, sizes = [], []
    perms = poset.gen_perms
    for i, c in enumerate(chains):
        if orbit_of[i] >= 0:
            continue
        oid = len(reps)
        orbit_of[i] = oid
        frontier = [c]
        size = 1
        while frontier:
            nxt = []
            for ch in frontier:
                for perm in perms:
                    img = tuple(sorted(int(perm[m]) for m in ch))
                    j = pos_of[img]
                    if orbit_of[j] < 0:
                        orbit_of[j] = oid
                        nxt.append(img)
                        size += 1
            frontier = nxt
        reps.append(c)
        sizes.append(size)
    return ChainOrbitTable(poset, chains, orbit_of, reps, sizes)


def euler_characteristic(table, reduced=False):
    """Sum of (-1)^r over the table's chains; empty tables give 0 by convention."""
    if not table.chains:
        return 0
    chi = int(np.sum(np.where(table.dims % 2 == 0, 1, -1)))
    return chi - 1 if reduced else chi


def orbit_euler_characteristic(table):
    """chi recomputed from orbit data: sum over orbits of sign * orbit size."""
    return sum(row.sign * row.orbit_size for row in table.rows())


def homology(table, max_simplices=hm.DEFAULT_MAX_SIMPLICES):
    """Integral homology of the simplicial complex generated by the chains."""
    return hm.homology_of_simplices(table.face_closure(), max_simplices=max_simplices)


def fixed_subcomplex(table, H):
    """Chains all of whose terms are fixed (setwise) by every element of H."""
    poset = table.poset
    fixed = np.ones(len(poset), dtype=bool)
    for h in H.generators:
        perm = poset.perm_under(h)
        fixed &= perm == np.arange(len(poset))
    keep = [c for c in table.chains if all(fixed[m] for m in c)]
    return ChainOrbitTable(poset, keep)


def alternating_sum(f, table):
    """Sum over orbit representatives of (-1)^dim * f(stabilizer)."""
    total = 0
    for row in table.rows():
        total += row.sign * f(row.stabilizer)
    return total


def brown_congruence_check(G, ell):
    """chi(Brown complex) = 1 mod |G|_ell (Brown's homological Sylow theorem)."""
    modulus = ell_part(G.order, ell)
    poset = starred(enumerate_ell_subgroups(G, ell))
    table = chains_of(poset)
    chi = euler_characteristic(table)
    return {"chi": chi, "modulus": modulus, "pass": (chi - 1) % modulus == 0}


def member_orbit_reps(poset):
    """(member_id, orbit size) for each G-conjugacy orbit of poset members."""
    n = len(poset)
    seen = np.zeros(n, dtype=bool)
    out = []
    perms = poset.gen_perms
    for i in range(n):
        if seen[i]:
            continue
        frontier = [i]
        seen[i] = True
        size = 1
        while frontier:
            nxt = []
            for x in frontier:
                for perm in perms:
                    y = int(perm[x])
                    if not seen[y]:
                        seen[y] = True
                        nxt.append(y)
                        size += 1
            frontier = nxt
        out.append((i, size))
    return out


# -- poset-level Euler characteristics (chain-count DP, no tables) -------------


def poset_chain_euler(leq, member_mask=None, reduced=True):
    """Euler characteristic of the order complex of a (sub)poset via DP.

    leq must be indexed so that i <= j in the poset implies i <= j as ints.
    """
    n = leq.shape[0]
    if member_mask is None:
        member_mask = np.ones(n, dtype=bool)
    idxs = np.nonzero(member_mask)[0]
    if idxs.size == 0:
        return 0
    s = {}
    total = 0
    for i in idxs:
        acc = 1
        for j in idxs[idxs < i]:
            if leq[j, i] and j != i:
                acc -= s[j]
        s[i] = acc
        total += acc
    return total - 1 if reduced else total


# -- join contractibility -------------------------------------------------------


@dataclasses.dataclass
class JoinCertificate:
    passed: bool
    witness: object  # member id without a join, or None
    fixed_point_checks: int
    all_subgroups_checked: bool
    chi_checks_pass: bool

    def __bool__(self):
        return self.passed and self.chi_checks_pass


def join_contractibility_certificate(
    poset, x0_id, sym=None, lattice_bound=DEFAULT_CERT_LATTICE_BOUND
):
    """Certify that every x has a join with x0 inside the poset.

    On success additionally verifies that the order complex and every H-fixed
    subcomplex (H running over subgroups of `sym` fixing x0, all of them when
    |sym| fits the lattice bound, cyclic ones otherwise) have reduced Euler
    characteristic 0, the computable consequence of join contractibility.
    """
    n = len(poset)
    leq = poset.leq
    for x in range(n):
        upper = leq[x] & leq[x0_id]
        if not upper.any():
            return JoinCertificate(False, x, 0, True, False)
        ids = np.nonzero(upper)[0]
        has_min = any(leq[u][ids].all() for u in ids)
        if not has_min:
            return JoinCertificate(False, x, 0, True, False)
    chi_ok = poset_chain_euler(leq) == 0
    checks = 1
    if sym is None:
        return JoinCertificate(True, None, checks, True, chi_ok)
    # element-wise fixed masks over the symmetry group
    fixed_by_elt = np.ones((sym.order, n), dtype=bool)
    for pos, g in enumerate(sym.indices):
        perm = poset.perm_under(int(g))
        fixed_by_elt[pos] = perm == np.arange(n)
    complete = sym.order <= lattice_bound
    if complete:
        subgroups = gp.all_subgroups_of(sym, lattice_bound=lattice_bound)
    else:
        seen = set()
        subgroups = []
        for g in sym.indices:
            S = gp.subgroup_closure(sym.group, [int(g)])
            if S.fingerprint not in seen:
                seen.add(S.fingerprint)
                subgroups.append(S)
    pos_of = {int(g): p for p, g in enumerate(sym.indices)}
    for H in subgroups:
        mask = np.ones(n, dtype=bool)
        for h in H.indices:
            mask &= fixed_by_elt[pos_of[int(h)]]
        if poset_chain_euler(leq, mask) != 0:
            return JoinCertificate(True, None, checks, complete, False)
        checks += 1
    return JoinCertificate(True, None, checks, complete, chi_ok)
