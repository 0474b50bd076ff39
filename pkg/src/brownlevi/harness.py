"""Theorem-level verification jobs and machine-readable reports.

Every check record carries both computed sides of its identity or congruence,
never just a verdict.  Hypothesis failures do not abort a job: the quantities
are still computed and reported, but the record is marked unasserted so that
negative controls (e.g. GL_2(7) at ell = 3) can be inspected without failing
a run.  Reports are deterministic functions of the job inputs; wall-clock
timings are kept out of the emitted files unless explicitly requested.
"""

from __future__ import annotations

import csv
import io
import json
import re
import time

from . import alternations as alts
from . import characters as ch
from . import groups as gp
from . import posets as ps
from . import reductive as rd
from .errors import ConfigError, GroupSpecError, HypothesisError
from .homology import same_homology as hm_same
from .numtheory import cyclotomic_poly, e_ell, ell_part, order_poly_gl, phi_valuation

ALL_CHECKS = (
    "theorem-a",
    "corollary-b",
    "genericity",
    "kr-webb",
    "thevenaz",
    "cancellation",
    "weights",
)

DEFAULT_LIMITS = {
    "max_group_order": gp.DEFAULT_ENUM_BOUND,
    "max_sylow_order": ps.DEFAULT_SYLOW_LATTICE_BOUND,
    "max_simplices": 200_000,
    "max_char_order": ch.DEFAULT_MAX_CHAR_ORDER,
    "max_char_classes": ch.DEFAULT_MAX_CLASSES,
    "cert_lattice_bound": ps.DEFAULT_CERT_LATTICE_BOUND,
}


def parse_group_spec(spec):
    """`gl:n=<int>,q=<int>` or `perm:sym=<int>`."""
    m = re.fullmatch(r"gl:n=(\d+),q=(\d+)", spec)
    if m:
        return ("gl", int(m.group(1)), int(m.group(2)))
    m = re.fullmatch(r"perm:sym=(\d+)", spec)
    if m:
        return ("perm", int(m.group(1)))
    raise GroupSpecError(
        f"bad group spec {spec!r}: expected gl:n=<int>,q=<int> or perm:sym=<int>"
    )


_ctx_cache = {}


def build_instance(spec, limits=None):
    """(group, ctx-or-None) for a group spec string; GLContexts are cached."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    parsed = parse_group_spec(spec)
    key = (parsed, limits["max_group_order"])
    if key in _ctx_cache:
        return _ctx_cache[key]
    if parsed[0] == "gl":
        _, n, q = parsed
        ctx = rd.GLContext(n, q, max_order=limits["max_group_order"])
        out = (ctx.group, ctx)
    else:
        out = (gp.perm_group(parsed[1], max_order=limits["max_group_order"]), None)
    _ctx_cache[key] = out
    return out


def _check(name, lhs, rhs, passed, asserted=True, modulus=None):
    rec = {"name": name, "lhs": lhs, "rhs": rhs, "pass": passed, "asserted": asserted}
    if modulus is not None:
        rec["modulus"] = modulus
    return rec


def _char_bounds(limits):
    return {"max_order": limits["max_char_order"], "max_classes": limits["max_char_classes"]}


def _f_functions(ell, vmax, limits):
    bounds = _char_bounds(limits)
    fs = {"const_1": lambda H: 1, "k": lambda H: gp.conjugacy_classes(H).k,
          "l_ell": lambda H: gp.conjugacy_classes(H).l_ell(ell)}
    for d in range(vmax + 1):
        fs[f"k^{d}"] = (lambda dd: lambda H: ch.kd(H, ell, dd, **bounds))(d)
    return fs


# -- individual theorem checks ----------------------------------------------------


def check_theorem_a(ctx, ell, limits=None):
    """Computable invariants of the homotopy equivalence Brown ~ e-split Levi:
    equal Euler characteristics, Betti numbers, fixed-point Euler
    characteristics for every ell-subgroup, and fiber join-contractibility.
    """
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    hyp = rd.hypothesis_check(ctx, ell)
    asserted = hyp.theorem_a_ok
    e = e_ell(ell, ctx.q)
    pos = ps.enumerate_ell_subgroups(ctx.group, ell, sylow_lattice_bound=limits["max_sylow_order"])
    brown = ps.starred(pos)
    tab_b = ps.chains_of(brown)
    levi = rd.levi_poset(ctx, e, proper_only=True)
    tab_l = ps.chains_of(levi)
    checks = []
    chi_b, chi_l = ps.euler_characteristic(tab_b), ps.euler_characteristic(tab_l)
    checks.append(_check("euler_equal", chi_b, chi_l, chi_b == chi_l, asserted))
    hb = ps.homology(tab_b, max_simplices=limits["max_simplices"])
    hl = ps.homology(tab_l, max_simplices=limits["max_simplices"])
    checks.append(
        _check("betti_equal", hb.betti, hl.betti, hm_same(hb, hl), asserted)
    )
    fixed_b, fixed_l = [], []
    for mid, _ in ps.member_orbit_reps(pos):
        H = pos.members[mid]
        fixed_b.append(ps.euler_characteristic(ps.fixed_subcomplex(tab_b, H)))
        fixed_l.append(ps.euler_characteristic(ps.fixed_subcomplex(tab_l, H)))
    checks.append(_check("fixed_euler_equal", fixed_b, fixed_l, fixed_b == fixed_l, asserted))
    fam = rd.enumerate_e_split_levis(ctx, e)
    ab_star = ps.starred(rd.abelian_poset(ctx, ell))
    fiber_ok, fiber_detail = True, []
    for datum in fam.reps:
        if datum.subgroup.order == ctx.group.order:
            continue
        fpos, a0, norm = rd.fiber_poset(ctx, datum, ell, e, ab_star=ab_star)
        cert = ps.join_contractibility_certificate(
            fpos, a0, sym=norm, lattice_bound=limits["cert_lattice_bound"]
        )
        hom = ps.homology(ps.chains_of(fpos), max_simplices=limits["max_simplices"])
        reduced_trivial = all(b == 0 for b in hom.reduced_betti) and all(
            not t for t in hom.torsion
        )
        fiber_ok &= bool(cert) and reduced_trivial
        fiber_detail.append(
            {
                "levi": repr(datum),
                "join_contractible": cert.passed,
                "fixed_chi_zero": cert.chi_checks_pass,
                "subgroups_checked": cert.fixed_point_checks,
                "reduced_homology_trivial": reduced_trivial,
            }
        )
    checks.append(_check("fiber_certificates", fiber_detail, True, fiber_ok, asserted))
    return {"checks": checks, "hypotheses": hyp.as_dicts(), "e": e}


def check_corollary_b(ctx, ell, limits=None):
    """chi(Levi* complex) = 1 mod (Phi_e(q)^a)_ell, and |G|_ell divides chi - 1."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    hyp = rd.hypothesis_check(ctx, ell)
    e = e_ell(ell, ctx.q)
    tab = ps.chains_of(rd.levi_poset(ctx, e, proper_only=True))
    chi = ps.euler_characteristic(tab)
    a = phi_valuation(order_poly_gl(ctx.n), e)
    modulus = ell_part(cyclotomic_poly(e)(ctx.q) ** a, ell) if a else 1
    sylow = ell_part(ctx.group.order, ell)
    checks = [
        _check("levi_euler_congruence", chi, 1, (chi - 1) % modulus == 0, True, modulus),
        _check("sylow_divides_reduced_euler", chi - 1, 0, (chi - 1) % sylow == 0, True, sylow),
    ]
    return {"checks": checks, "hypotheses": hyp.as_dicts(), "e": e}


def check_genericity(ctx, ell1, ell2, limits=None):
    """Equal Betti profiles of the Brown complexes at two primes with the same e."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    profiles = {}
    infos = {}
    es = {}
    hyps = {}
    for ell in (ell1, ell2):
        es[ell] = e_ell(ell, ctx.q)
        hyps[ell] = rd.hypothesis_check(ctx, ell)
        pos = ps.starred(
            ps.enumerate_ell_subgroups(ctx.group, ell, sylow_lattice_bound=limits["max_sylow_order"])
        )
        tab = ps.chains_of(pos)
        prof = ps.homology(tab, max_simplices=limits["max_simplices"])
        profiles[ell] = prof
        infos[ell] = {"betti": prof.betti, "vertices": len(pos), "chi": ps.euler_characteristic(tab)}
    same_e = es[ell1] == es[ell2]
    asserted = same_e and hyps[ell1].theorem_a_ok and hyps[ell2].theorem_a_ok
    checks = [
        _check(
            "generic_betti_equal",
            infos[ell1],
            infos[ell2],
            hm_same(profiles[ell1], profiles[ell2]),
            asserted,
        )
    ]
    if same_e:
        tab_l = ps.chains_of(rd.levi_poset(ctx, es[ell1], proper_only=True))
        prof_l = ps.homology(tab_l, max_simplices=limits["max_simplices"])
        for ell in (ell1, ell2):
            checks.append(
                _check(
                    f"brown_matches_levi[ell={ell}]",
                    infos[ell]["betti"],
                    prof_l.betti,
                    hm_same(profiles[ell], prof_l),
                    asserted,
                )
            )
    return {
        "checks": checks,
        "hypotheses": hyps[ell1].as_dicts(),
        "e": es[ell1],
        "e2": es[ell2],
    }


def _starred_table(group, ctx, ell, which, limits):
    if which == "brown":
        pos = ps.starred(
            ps.enumerate_ell_subgroups(group, ell, sylow_lattice_bound=limits["max_sylow_order"])
        )
        return ps.chains_of(pos)
    assert ctx is not None, "levi complex needs a GL context"
    return ps.chains_of(rd.levi_poset(ctx, e_ell(ell, ctx.q), proper_only=True))


def check_kr_webb(group, ell, which="brown", ctx=None, limits=None):
    """Block-free Knorr-Robinson / Webb: k^0(G) = -l_ell(reduced Lefschetz)."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    bounds = _char_bounds(limits)
    tab = _starred_table(group, ctx, ell, which, limits)
    full = gp.full_subgroup(group)
    orbit_sum = ps.alternating_sum(lambda H: gp.conjugacy_classes(H).l_ell(ell), tab)
    lefschetz = orbit_sum - gp.conjugacy_classes(full).l_ell(ell)
    lhs = ch.k0(full, ell, **bounds)
    return {
        "checks": [
            _check(f"kr_webb[{which}]", lhs, -lefschetz, lhs == -lefschetz, True)
        ]
    }


def check_thevenaz(group, ell, which="brown", ctx=None, limits=None):
    """Block-free Thevenaz: k(G) - k^0(G) equals the equivariant Euler characteristic."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    bounds = _char_bounds(limits)
    tab = _starred_table(group, ctx, ell, which, limits)
    full = gp.full_subgroup(group)
    chi_g = ps.alternating_sum(lambda H: gp.conjugacy_classes(H).k, tab)
    lhs = gp.conjugacy_classes(full).k - ch.k0(full, ell, **bounds)
    return {
        "checks": [_check(f"thevenaz[{which}]", lhs, chi_g, lhs == chi_g, True)]
    }


def check_cancellation(ctx, ell, limits=None):
    """The three alternating orbit sums (all ell-chains / e-closed abelian
    chains / e-split Levi chains) agree for const_1, k, l_ell and every k^d.

    The composite alternation and the iota/delta bijection are verified first;
    the sums are only compared after both certificates pass.
    """
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    hyp = rd.hypothesis_check(ctx, ell)
    if not hyp.theorem_a_ok:
        raise HypothesisError("cancellation requires the full prime conditions")
    e = e_ell(ell, ctx.q)
    G = ctx.group
    pos = ps.enumerate_ell_subgroups(G, ell, sylow_lattice_bound=limits["max_sylow_order"])
    ab = ps.ab_filter(pos, "ab")
    ecpos = rd.e_closed_poset(ctx, ell, e, ab=ab)
    lp = rd.levi_poset(ctx, e)
    tab_s, tab_ec, tab_l = ps.chains_of(pos), ps.chains_of(ecpos), ps.chains_of(lp)
    composite = alts.phi_composite(ctx, pos, ell, e)
    autos = gp.standard_automorphisms(G)
    alt_report = alts.verify_alternation(composite, tab_s, autos)
    # iota/delta: mutually inverse, length and stabilizer preserving
    data = lp.meta["data"]
    bij_ok = len(tab_ec.chains) == len(tab_l.chains)
    for c in tab_l.chains:
        chain_data = [data[lp.members[m].fingerprint] for m in c]
        abch = rd.iota(ctx, chain_data, ell)
        back = rd.delta(ctx, abch, ell, e)
        ec_chain = tuple(ecpos.member_id(h) for h in abch)
        bij_ok &= [d.subgroup.fingerprint for d in back] == [
            d.subgroup.fingerprint for d in chain_data
        ]
        bij_ok &= len(abch) == len(c)
        bij_ok &= (
            tab_l.stabilizer_of(c).fingerprint == tab_ec.stabilizer_of(ec_chain).fingerprint
        )
    checks = [
        _check("composite_alternation", alt_report, True, alt_report["pass"], True),
        _check("iota_delta_bijection", len(tab_l.chains), len(tab_ec.chains), bij_ok, True),
    ]
    vmax = 0
    while G.order % ell ** (vmax + 1) == 0:
        vmax += 1
    for name, f in _f_functions(ell, vmax, limits).items():
        s_all, s_ec, s_levi = alts.cancellation_sums(f, [tab_s, tab_ec, tab_l], [alt_report])
        checks.append(
            _check(f"cancellation[{name}]", s_all, [s_ec, s_levi], s_all == s_ec == s_levi, True)
        )
    return {"checks": checks, "hypotheses": hyp.as_dicts(), "e": e}


def check_weights(group, ell, limits=None):
    """Alperin count: l_ell(G) = number of conjugacy classes of ell-weights."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    lhs = gp.conjugacy_classes(gp.full_subgroup(group)).l_ell(ell)
    rhs = ch.count_weights(group, ell, **_char_bounds(limits))
    return {"checks": [_check("weights", lhs, rhs, lhs == rhs, True)]}


# -- jobs ---------------------------------------------------------------------------


def default_checks(kind, has_ell2):
    if kind == "gl":
        base = ["theorem-a", "corollary-b", "kr-webb", "thevenaz", "cancellation", "weights"]
        if has_ell2:
            base.insert(2, "genericity")
        return base
    return ["kr-webb", "thevenaz", "weights"]


def run_job(job, limits=None):
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    spec = job["group"]
    ell = job["ell"]
    kind = parse_group_spec(spec)[0]
    checks_requested = job.get("checks") or default_checks(kind, "ell2" in job)
    for name in checks_requested:
        if name not in ALL_CHECKS:
            raise ConfigError(f"unknown check {name!r}")
        if kind == "perm" and name in ("theorem-a", "corollary-b", "genericity", "cancellation"):
            raise ConfigError(f"check {name!r} needs a gl group, got {spec!r}")
    if "genericity" in checks_requested and "ell2" not in job:
        raise ConfigError("genericity needs ell2")
    group, ctx = build_instance(spec, limits)
    e = None
    if ctx is not None:
        try:
            e = e_ell(ell, ctx.q)
        except Exception:
            e = None
    report = {
        "job": job.get("name", spec + f"@{ell}"),
        "group": spec,
        "ell": ell,
        "e": e,
        "hypotheses": rd.hypothesis_check(ctx, ell).as_dicts() if ctx is not None else [],
        "checks": [],
        "timings": {},
    }
    for name in checks_requested:
        t0 = time.monotonic()
        if name == "theorem-a":
            out = check_theorem_a(ctx, ell, limits)
        elif name == "corollary-b":
            out = check_corollary_b(ctx, ell, limits)
        elif name == "genericity":
            out = check_genericity(ctx, ell, job["ell2"], limits)
        elif name == "kr-webb":
            out = check_kr_webb(group, ell, "brown", ctx, limits)
            if ctx is not None:
                out["checks"] += check_kr_webb(group, ell, "levi", ctx, limits)["checks"]
        elif name == "thevenaz":
            out = check_thevenaz(group, ell, "brown", ctx, limits)
            if ctx is not None:
                out["checks"] += check_thevenaz(group, ell, "levi", ctx, limits)["checks"]
        elif name == "cancellation":
            out = check_cancellation(ctx, ell, limits)
        elif name == "weights":
            out = check_weights(group, ell, limits)
        report["checks"].extend(out["checks"])
        report["timings"][name] = round(time.monotonic() - t0, 3)
    return report


def run_jobs(config):
    """Run a parsed config {jobs: [...], limits: {...}}; returns report list."""
    if not isinstance(config, dict) or "jobs" not in config:
        raise ConfigError("config must be an object with a 'jobs' array")
    limits = config.get("limits", {})
    unknown = set(limits) - set(DEFAULT_LIMITS)
    if unknown:
        raise ConfigError(f"unknown limit keys: {sorted(unknown)}")
    reports = []
    for job in config["jobs"]:
        if "group" not in job or "ell" not in job:
            raise ConfigError(f"job needs 'group' and 'ell': {job}")
        reports.append(run_job(job, limits))
    return reports


def all_asserted_pass(reports):
    for rep in reports:
        for c in rep["checks"]:
            if c["asserted"] and not c["pass"]:
                return False
    return True


def emit_json(reports, include_timings=False):
    """Canonical JSON: sorted keys, no timings unless requested (determinism)."""
    out = []
    for rep in reports:
        rep = dict(rep)
        if not include_timings:
            rep.pop("timings", None)
        out.append(rep)
    return json.dumps(out, sort_keys=True, indent=2, default=str) + "\n"


def emit_csv(reports):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["job", "group", "ell", "e", "check", "lhs", "rhs", "modulus", "pass", "asserted"])
    for rep in reports:
        for c in rep["checks"]:
            writer.writerow(
                [
                    rep["job"],
                    rep["group"],
                    rep["ell"],
                    rep["e"],
                    c["name"],
                    json.dumps(c["lhs"], sort_keys=True, default=str),
                    json.dumps(c["rhs"], sort_keys=True, default=str),
                    c.get("modulus", ""),
                    c["pass"],
                    c["asserted"],
                ]
            )
    return buf.getvalue()


# -- sweeps (CLI surface) -------------------------------------------------------------


def levi_summary(ctx, e):
    fam = rd.enumerate_e_split_levis(ctx, e)
    rows = []
    for datum in fam.reps:
        rows.append(
            {
                "type": repr(datum),
                "order": datum.subgroup.order,
                "count": fam.orbit_sizes[datum.signature()],
                "order_polynomial": repr(datum.order_polynomial()),
            }
        )
    return rows


def closure_sweep(ctx, ell, limits=None):
    """Classify every abelian ell-subgroup orbit by its closure behaviour."""
    limits = {**DEFAULT_LIMITS, **(limits or {})}
    e = e_ell(ell, ctx.q)
    ab = rd.abelian_poset(ctx, ell, sylow_lattice_bound=limits["max_sylow_order"])
    rows = []
    for mid, size in ps.member_orbit_reps(ab):
        h = ab.members[mid]
        rep = rd.stabilize(ctx, h, ell, e)
        kind = "e-closed" if rep.e_closed else ("weakly-e-closed" if rep.weakly_e_closed else "neither")
        rows.append(
            {
                "order": h.order,
                "orbit_size": size,
                "class": kind,
                "t_index": rep.t_index,
                "r_index": rep.r_index,
                "gamma_order": rep.gamma_image.order,
                "omega_order": rep.omega_image.order,
            }
        )
    return {"e": e, "orbits": rows}
