"""Integral simplicial homology via sparse Smith normal form.

Simplices are tuples of integer vertex ids, strictly increasing; orientation
comes from that ordering.  Diagonalization is exact over Z with python ints
(boundary matrices are nearly totally unimodular here, so entries stay tiny),
with a documented rank-only fallback over a large prime field above a size
threshold.
"""

from __future__ import annotations

import dataclasses
from collections import defaultdict

import numpy as np

from .errors import TooLargeComplex

DEFAULT_MAX_SIMPLICES = 200_000
_DENSE_SNF_LIMIT = 40_000  # max(rows, cols) above which rank falls back to mod p
_FALLBACK_PRIME = 1_000_003


class _Sparse:
    def __init__(self):
        self.rows = defaultdict(dict)
        self.cols = defaultdict(set)

    def set(self, r, c, v):
        if v:
            self.rows[r][c] = v
            self.cols[c].add(r)

    def nnz(self):
        return sum(len(d) for d in self.rows.values())

    def add_row(self, dst, src, mult):
        """row[dst] += mult * row[src]."""
        row_s = self.rows[src]
        row_d = self.rows[dst]
        for c, v in list(row_s.items()):
            nv = row_d.get(c, 0) + mult * v
            if nv:
                row_d[c] = nv
                self.cols[c].add(dst)
            else:
                row_d.pop(c, None)
                self.cols[c].discard(dst)

    def add_col(self, dst, src, mult):
        """col[dst] += mult * col[src]."""
        for r in list(self.cols[src]):
            v = self.rows[r][src]
            nv = self.rows[r].get(dst, 0) + mult * v
            if nv:
                self.rows[r][dst] = nv
                self.cols[dst].add(r)
            else:
                self.rows[r].pop(dst, None)
                self.cols[dst].discard(r)

    def drop(self, r, c):
        for cc in list(self.rows[r]):
            self.cols[cc].discard(r)
        del self.rows[r]
        for rr in list(self.cols[c]):
            self.rows[rr].pop(c, None)
        del self.cols[c]

    def find_pivot(self):
        best = None
        for r, row in self.rows.items():
            for c, v in row.items():
                if abs(v) == 1:
                    return r, c
                if best is None or abs(v) < abs(best[2]):
                    best = (r, c, v)
        return (best[0], best[1]) if best else None


def snf_diagonal(entries):
    """Nonzero elementary divisors (positive) of an integer matrix.

    entries: iterable of (row, col, value).
    """
    m = _Sparse()
    for r, c, v in entries:
        m.set(r, c, m.rows[r].get(c, 0) + v)
    # clean zeros possibly introduced by summation
    for r in list(m.rows):
        for c in list(m.rows[r]):
            if m.rows[r][c] == 0:
                m.rows[r].pop(c)
                m.cols[c].discard(r)
    diag = []
    while True:
        piv = m.find_pivot()
        if piv is None:
            break
        r, c = piv
        while True:
            v = m.rows[r][c]
            moved = False
            for r2 in list(m.cols[c]):
                if r2 == r:
                    continue
                v2 = m.rows[r2][c]
                k = v2 // v
                m.add_row(r2, r, -k)
                if m.rows[r2].get(c, 0):
                    r = r2  # smaller remainder becomes the pivot
                    moved = True
                    break
            if moved:
                continue
            v = m.rows[r][c]
            for c2 in list(m.rows[r]):
                if c2 == c:
                    continue
                v2 = m.rows[r][c2]
                k = v2 // v
                m.add_col(c2, c, -k)
                if m.rows[r].get(c2, 0):
                    c = c2
                    moved = True
                    break
            if not moved:
                break
        diag.append(abs(m.rows[r][c]))
        m.drop(r, c)
    return invariant_factors(diag)


def invariant_factors(diag):
    """Normalize a diagonal multiset into the divisibility chain."""
    d = [abs(x) for x in diag if x]
    changed = True
    while changed:
        changed = False
        d.sort()
        for i in range(len(d) - 1):
            if d[i + 1] % d[i] != 0:
                import math

                g = math.gcd(d[i], d[i + 1])
                l = d[i] * d[i + 1] // g
                d[i], d[i + 1] = g, l
                changed = True
    return d


def rank_mod_p(entries, nrows, ncols, p=_FALLBACK_PRIME):
    """Rank over F_p; used only as the documented large-complex fallback."""
    A = np.zeros((nrows, ncols), dtype=np.int64)
    for r, c, v in entries:
        A[r, c] = (A[r, c] + v) % p
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, nrows):
            if A[r, col] % p:
                piv = r
                break
        if piv is None:
            continue
        A[[row, piv]] = A[[piv, row]]
        inv = pow(int(A[row, col]), p - 2, p)
        A[row] = (A[row] * inv) % p
        for r in range(nrows):
            if r != row and A[r, col]:
                A[r] = (A[r] - A[r, col] * A[row]) % p
        rank += 1
        row += 1
        if row == nrows:
            break
    return rank


@dataclasses.dataclass
class HomologyProfile:
    """Betti numbers and torsion per degree (unreduced), plus the reduced view."""

    betti: list
    torsion: list  # list of invariant-factor lists per degree
    exact: bool  # False when the mod-p rank fallback was used (torsion omitted)

    @property
    def reduced_betti(self):
        if not self.betti:
            return []
        out = list(self.betti)
        out[0] = max(out[0] - 1, 0)
        return out

    def euler_characteristic(self):
        return sum((-1) ** i * b for i, b in enumerate(self.betti))


def same_homology(a, b):
    """Equality of homology up to trailing zero groups.

    Complexes of different dimension can be homotopy equivalent (a graph of
    contractible components against a set of points); their Betti lists then
    differ only by trailing zeros.
    """

    def strip(xs, empty):
        xs = list(xs)
        while xs and xs[-1] == empty:
            xs.pop()
        return xs

    return strip(a.betti, 0) == strip(b.betti, 0) and strip(a.torsion, []) == strip(b.torsion, [])


def boundary_entries(simplices, lower_index):
    """Entries of the boundary map from the given simplices to their facets."""
    entries = []
    for col, s in enumerate(simplices):
        for i in range(len(s)):
            face = s[:i] + s[i + 1 :]
            entries.append((lower_index[face], col, (-1) ** i))
    return entries


def homology_of_simplices(all_simplices, max_simplices=DEFAULT_MAX_SIMPLICES):
    """Homology of the simplicial complex given by an iterable of vertex tuples.

    The input must be closed under taking faces (order complexes of posets
    are; chain tables with anchors are closed before calling this).
    """
    by_dim = defaultdict(list)
    total = 0
    for s in all_simplices:
        by_dim[len(s) - 1].append(tuple(s))
        total += 1
    if total > max_simplices:
        raise TooLargeComplex(f"{total} simplices exceed bound {max_simplices}")
    if total == 0:
        return HomologyProfile([], [], True)
    dim = max(by_dim)
    for d in by_dim:
        by_dim[d].sort()
    index = {d: {s: i for i, s in enumerate(by_dim[d])} for d in by_dim}
    ranks = {}
    torsions = {}
    exact = True
    for d in range(1, dim + 1):
        entries = boundary_entries(by_dim[d], index[d - 1])
        nrows, ncols = len(by_dim[d - 1]), len(by_dim[d])
        if max(nrows, ncols) > _DENSE_SNF_LIMIT:
            ranks[d] = rank_mod_p(entries, nrows, ncols)
            torsions[d] = []
            exact = False
        else:
            divisors = snf_diagonal(entries)
            ranks[d] = len(divisors)
            torsions[d] = [x for x in divisors if x > 1]
    betti = []
    torsion = []
    for d in range(dim + 1):
        nd = len(by_dim.get(d, []))
        b = nd - ranks.get(d, 0) - ranks.get(d + 1, 0)
        betti.append(b)
        torsion.append(torsions.get(d + 1, []))
    return HomologyProfile(betti, torsion, exact)
