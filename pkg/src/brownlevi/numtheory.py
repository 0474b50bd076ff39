"""Exact integer-polynomial and cyclotomic arithmetic for generic Sylow theory.

Order polynomials of GL_n, cyclotomic factorizations, e_ell(q), E_ell(q),
Phi_e-valuations and ell-parts.  All coefficients and evaluations are python
ints, so nothing here can overflow.
"""

from __future__ import annotations

import dataclasses
from functools import lru_cache

from .errors import InvalidPrime, NotCyclotomicProduct
from .fields import factorize, is_prime, prime_power


@dataclasses.dataclass(frozen=True)
class IntPolynomial:
    """Dense polynomial over Z, low degree first, no trailing zeros."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return IntPolynomial(
            [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
        )

    def __mul__(self, other):
        if self.is_zero() or other.is_zero():
            return IntPolynomial([])
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(out)

    def divmod_exact(self, other):
        """(quotient, remainder) by a monic-or-unit-leading divisor, exact over Z."""
        assert not other.is_zero()
        lead = other.coeffs[-1]
        assert lead in (1, -1), "division only by unit-leading polynomials"
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return IntPolynomial([]), self
        quot = [0] * (dq + 1)
        for shift in range(dq, -1, -1):
            c = rem[shift + other.degree] * lead
            quot[shift] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[shift + i] -= c * b
        return IntPolynomial(quot), IntPolynomial(rem)

    def __repr__(self):
        if self.is_zero():
            return "IntPolynomial(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else str(c))
        return f"IntPolynomial({' + '.join(terms)})"


def x_power(k):
    return IntPolynomial([0] * k + [1])


ONE = IntPolynomial([1])


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """The n-th cyclotomic polynomial Phi_n(x), exactly over Z."""
    assert n >= 1
    num = IntPolynomial([-1] + [0] * (n - 1) + [1])  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            q, r = num.divmod_exact(cyclotomic_poly(d))
            assert r.is_zero()
            num = q
    return num


@lru_cache(maxsize=None)
def order_poly_gl(n):
    """Order polynomial of GL_n: x^{n(n-1)/2} * prod_{i=1..n} (x^i - 1)."""
    assert n >= 1
    poly = x_power(n * (n - 1) // 2)
    for i in range(1, n + 1):
        poly = poly * IntPolynomial([-1] + [0] * (i - 1) + [1])
    return poly


@dataclasses.dataclass(frozen=True)
class CycloFactorization:
    """P = x^x_exponent * prod Phi_e(x)^factors[e], with all multiplicities > 0."""

    x_exponent: int
    factors: tuple  # sorted tuple of (e, multiplicity)

    def multiplicity(self, e):
        return dict(self.factors).get(e, 0)

    def reconstruct(self):
        poly = x_power(self.x_exponent)
        for e, a in self.factors:
            for _ in range(a):
                poly = poly * cyclotomic_poly(e)
        return poly


def euler_phi(n):
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def cyclo_factor(P):
    """Factor P exactly as a power of x times cyclotomic polynomials.

    Trial division by Phi_d, smallest d first.  Any cyclotomic divisor of the
    remainder has totient at most the remaining degree, which bounds d by
    2*degree^2 + 1 (since phi(d) >= sqrt(d/2)); past that the remainder is not
    a cyclotomic product.
    """
    if P.is_zero():
        raise NotCyclotomicProduct("zero polynomial")
    xe = 0
    while P.coeffs[0] == 0:
        P, r = P.divmod_exact(x_power(1))
        assert r.is_zero()
        xe += 1
    factors = []
    d = 1
    while P.degree > 0:
        if d > 2 * P.degree * P.degree + 1:
            raise NotCyclotomicProduct(f"non-cyclotomic factor of degree {P.degree} remains")
        if euler_phi(d) > P.degree:
            d += 1
            continue
        phi = cyclotomic_poly(d)
        mult = 0
        while True:
            q, r = P.divmod_exact(phi)
            if r.is_zero():
                P = q
                mult += 1
            else:
                break
        if mult:
            factors.append((d, mult))
        d += 1
    if P.coeffs != (1,):
        raise NotCyclotomicProduct(f"unit factor {P.coeffs[0]} is not 1")
    return CycloFactorization(xe, tuple(factors))


def e_ell(ell, q):
    """Multiplicative order of q modulo ell; ell must be an odd prime not dividing q."""
    if not is_prime(ell) or ell == 2:
        raise InvalidPrime(f"ell must be an odd prime, got {ell}")
    prime_power(q)  # validates q
    if q % ell == 0:
        raise InvalidPrime(f"ell = {ell} divides q = {q}")
    e = 1
    acc = q % ell
    while acc != 1:
        acc = (acc * q) % ell
        e += 1
    return e


def E_ell(ell, q, bound):
    """All n <= bound with ell | Phi_n(q); equals {e * ell^k} with e = e_ell(q)."""
    e = e_ell(ell, q)
    out = []
    n = e
    while n <= bound:
        out.append(n)
        n *= ell
    return out


def ell_part(n, ell):
    """Largest power of ell dividing n >= 1."""
    assert n >= 1
    out = 1
    while n % ell == 0:
        n //= ell
        out *= ell
    return out


def phi_valuation(P, e):
    """Multiplicity of Phi_e in P (via cyclo_factor)."""
    return cyclo_factor(P).multiplicity(e)


def predicted_sylow_order(n, q, ell):
    """|GL_n(q)|_ell predicted from the cyclotomic factorization of the order polynomial."""
    fac = cyclo_factor(order_poly_gl(n))
    out = 1
    for f in E_ell(ell, q, n):
        a = fac.multiplicity(f)
        if a:
            out *= ell_part(cyclotomic_poly(f)(q), ell) ** a
    return out


@dataclasses.dataclass(frozen=True)
class PrimeContext:
    """The arithmetic data attached to a pair (ell, q): e = e_ell(q) and the
    members of E_ell(q) below a stated bound."""

    ell: int
    q: int
    p: int
    e: int
    E_truncated: tuple

    @staticmethod
    def create(ell, q, bound):
        p, _ = prime_power(q)
        e = e_ell(ell, q)
        members = tuple(E_ell(ell, q, bound))
        for n in members:
            assert cyclotomic_poly(n)(q) % ell == 0
        return PrimeContext(ell, q, p, e, members)
