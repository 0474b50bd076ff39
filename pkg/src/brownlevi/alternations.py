"""Chain involutions that cancel simplices outside a target subcomplex.

An alternation pairs each chain outside the subcomplex with one of adjacent
dimension, is an involution, and preserves stabilizers, which kills the
contribution of the complement to every equivariant alternating sum.  Three
constructions are implemented on anchored ell-chains:

* ``phi_abelian``   -- kills chains whose top P has [P, P] not inside Z,
  by inserting/removing [P_n, P_n] * P_{m-1} at the unique pinch point;
* ``phi_weak``      -- kills abelian chains with a term that is not weakly
  e-closed, via the omega-stabilization of the deepest such term;
* ``phi_eclosed``   -- kills weakly-e-closed chains with a non-e-closed term,
  via the (descending) gamma-stabilization of the shallowest such term;
* ``phi_composite`` -- their dispatch, an alternation of the e-closed abelian
  chain complex inside the full ell-chain complex.

All maps operate on member-id tuples of one anchored LPoset.
"""

from __future__ import annotations

from . import groups as gp
from . import posets as ps
from . import reductive as rd
from .errors import HypothesisError, InDomainError


class AlternationMap:
    def __init__(self, label, poset, apply_fn, in_target_fn):
        self.label = label
        self.poset = poset
        self._apply = apply_fn
        self._in_target = in_target_fn

    def __call__(self, chain):
        return self._apply(chain)

    def in_target(self, chain):
        """True when the chain lies in the target subcomplex Delta'."""
        return self._in_target(chain)

    def domain(self, table):
        return [c for c in table.chains if not self._in_target(c)]


def _insert(chain, mid):
    assert mid not in chain
    return tuple(sorted(chain + (mid,)))


def _remove(chain, pos):
    return chain[:pos] + chain[pos + 1 :]


# -- phi_1: nonabelian tops ------------------------------------------------------


def phi_abelian(poset, Z):
    """Alternation of Delta(Ab_{ell,Z}(G,Z)) in Delta(S_ell(G,Z))."""
    assert poset.convention == "starts-at-Z"
    group = poset.group
    commutators = {}

    def comm_id(member_id):
        if member_id not in commutators:
            K = gp.commutator_subgroup(poset.members[member_id])
            commutators[member_id] = K
        return commutators[member_id]

    def in_target(chain):
        return Z.contains(comm_id(chain[-1]))

    def apply_fn(chain):
        if in_target(chain):
            raise InDomainError("top term is abelian relative to Z")
        K = comm_id(chain[-1])
        m = None
        for pos in range(1, len(chain)):
            if poset.members[chain[pos]].contains(K):
                m = pos
                break
        assert m is not None  # K <= P_n, the top term
        below = poset.members[chain[m - 1]]
        # K is normal in the top term, so <K, P_{m-1}> = K * P_{m-1}
        Q = gp.subgroup_closure(group, list(K.generators) + list(below.generators))
        if Q.order < poset.members[chain[m]].order:
            return _insert(chain, poset.member_id(Q))
        assert Q == poset.members[chain[m]]
        return _remove(chain, m)

    return AlternationMap("phi1", poset, apply_fn, in_target)


# -- phi_2: non weakly-e-closed terms -------------------------------------------


def phi_weak(ctx, poset, ell, e):
    """Alternation of the weakly-e-closed subcomplex in Delta(Ab_ell(G, Z))."""
    assert poset.convention == "starts-at-Z"
    stab_cache = {}

    def wstab(member_id):
        if member_id not in stab_cache:
            h = poset.members[member_id]
            stab_cache[member_id] = rd.omega_stabilize(ctx, h, ell, e)[0]
        return stab_cache[member_id]

    def in_target(chain):
        return all(wstab(m) == poset.members[m] for m in chain)

    def apply_fn(chain):
        ms = [i for i, m in enumerate(chain) if wstab(m) != poset.members[m]]
        if not ms:
            raise InDomainError("all terms are weakly e-closed")
        m = ms[-1]
        P = wstab(chain[m])
        pid = poset.member_id(P)
        if m == len(chain) - 1:
            return _insert(chain, pid)
        nxt = poset.members[chain[m + 1]]
        assert nxt.contains(P), "omega-stabilization must sit below the next term"
        if P == nxt:
            return _remove(chain, m + 1)
        return _insert(chain, pid)

    return AlternationMap("phi2", poset, apply_fn, in_target)


# -- phi_3: weakly-e-closed but not e-closed terms -------------------------------


def phi_eclosed(ctx, poset, ell, e):
    """Alternation of the e-closed subcomplex in the weakly-e-closed chain complex."""
    assert poset.convention == "starts-at-Z"
    if not rd.hypothesis_check(ctx, ell).pi_ok:
        raise HypothesisError(f"ell = {ell} is not in pi(G, F)")
    gstab_cache = {}

    def gstab(member_id):
        if member_id not in gstab_cache:
            h = poset.members[member_id]
            assert rd.is_weakly_e_closed(ctx, h, ell, e), "phi3 needs weakly e-closed terms"
            gstab_cache[member_id] = rd.gamma_stabilize(ctx, h, ell, e)[0]
        return gstab_cache[member_id]

    def in_target(chain):
        return all(gstab(m) == poset.members[m] for m in chain)

    def apply_fn(chain):
        ms = [i for i, m in enumerate(chain) if gstab(m) != poset.members[m]]
        if not ms:
            raise InDomainError("all terms are e-closed")
        m = ms[0]
        assert m >= 1, "the anchor is e-closed"
        P = gstab(chain[m])
        prev = poset.members[chain[m - 1]]
        assert P.contains(prev), "gamma-stabilization must contain the previous term"
        if P == prev:
            return _remove(chain, m - 1)
        return _insert(chain, poset.member_id(P))

    return AlternationMap("phi3", poset, apply_fn, in_target)


# -- the composite ---------------------------------------------------------------


def phi_composite(ctx, poset, ell, e):
    """Alternation of the e-closed abelian chain complex in Delta(S_ell(G)).

    Dispatch: phi_1 on chains with a nonabelian term, phi_2 on abelian chains
    with a non-weakly-e-closed term, phi_3 on the rest outside the target.
    """
    assert poset.convention == "starts-at-Z"
    hyp = rd.hypothesis_check(ctx, ell)
    if not hyp.theorem_a_ok:
        raise HypothesisError(f"ell = {ell} fails the prime conditions for the composite")
    Z = ctx.center_ell_part(ell)
    assert poset.members[poset.anchor_id] == Z
    p1 = phi_abelian(poset, Z)
    p2 = phi_weak(ctx, poset, ell, e)
    p3 = phi_eclosed(ctx, poset, ell, e)

    def branch(chain):
        if not all(poset.members[m].is_abelian for m in chain):
            return 1
        if not p2.in_target(chain):
            return 2
        if not p3.in_target(chain):
            return 3
        return 0

    def in_target(chain):
        return branch(chain) == 0

    def apply_fn(chain):
        b = branch(chain)
        if b == 0:
            raise InDomainError("chain consists of e-closed abelian subgroups")
        return (p1, p2, p3)[b - 1](chain)

    alt = AlternationMap("composite", poset, apply_fn, in_target)
    alt.branch = branch
    return alt


# -- verification and cancellation sums ------------------------------------------


def verify_alternation(alt, table, automorphisms=()):
    """Exhaustively check the alternation axioms over the table's chains.

    Verifies for every domain chain: the image is a chain of the complex and
    outside the target subcomplex, the dimension shifts by exactly one, the
    map is an involution, stabilizers agree, and the map commutes with each
    listed automorphism.  Returns a report dict with the first counterexample.
    """
    chain_set = set(table.chains)
    auto_perms = [table.poset.perm_under_auto(a) for a in automorphisms]
    report = {
        "label": alt.label,
        "domain_size": 0,
        "pass": True,
        "counterexample": None,
        "checks": ["image", "involution", "dimension", "stabilizer", "equivariance"],
    }

    def fail(chain, reason):
        report["pass"] = False
        report["counterexample"] = {"chain": chain, "reason": reason}

    for chain in table.chains:
        if alt.in_target(chain):
            continue
        report["domain_size"] += 1
        img = alt(chain)
        if img not in chain_set:
            fail(chain, "image is not a chain of the complex")
            break
        if alt.in_target(img):
            fail(chain, "image lies in the target subcomplex")
            break
        if abs(len(img) - len(chain)) != 1:
            fail(chain, "dimension shift is not +-1")
            break
        if alt(img) != chain:
            fail(chain, "not an involution")
            break
        longer, shorter = (img, chain) if len(img) > len(chain) else (chain, img)
        if table.stabilizer_of(longer).order != table.stabilizer_of(shorter).order:
            fail(chain, "stabilizers differ")
            break
        ok = True
        for perm in auto_perms:
            moved = tuple(sorted(int(perm[m]) for m in chain))
            if alt(moved) != tuple(sorted(int(perm[m]) for m in img)):
                fail(chain, "not equivariant")
                ok = False
                break
        if not ok:
            break
    return report


def cancellation_sums(f, tables, alternation_reports=None):
    """Alternating orbit sums of f over each table; equal when alternations pass.

    alternation_reports, when given, must be passing verify_alternation reports
    between consecutive complexes; a failed one raises.
    """
    if alternation_reports is not None:
        for rep in alternation_reports:
            if not rep["pass"]:
                raise AssertionError(f"alternation {rep['label']} failed verification")
    return [ps.alternating_sum(f, t) for t in tables]
