"""q-expansions: Eisenstein series, the Tate curve, Delta, j and classical identities.

The Tate series X(u, q), Y(u, q) are bilateral sums over n in Z. They are
regrouped so that each power of q receives finitely many terms. With
``w = q^n u`` and the expansions ``w/(1-w)^2 = sum m w^m``,
``w^2/(1-w)^3 = sum m(m-1)/2 w^m``, the terms with n <= -1 are rewritten in
``v = q^{-n}/u`` via ``w/(1-w)^2 = v/(1-v)^2`` and
``w^2/(1-w)^3 = -v/(1-v)^3 = -sum m(m+1)/2 v^m``. Collecting by ``N = nm``:

    X = u/(1-u)^2 + sum_{N>=1} q^N sum_{m|N} m (u^m + u^-m - 2)
    Y = u^2/(1-u)^3 + sum_{N>=1} q^N sum_{m|N} [m(m-1)/2 u^m - m(m+1)/2 u^-m + m]

(the ``-2 m`` and ``+m`` absorb the ``sigma_1`` corrections). Only the
q^0 coefficients have denominators; the rest are Laurent polynomials in u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, gcd, isqrt
from typing import Dict, List, Sequence

import numpy as np

from .algebra import MultiPoly, PolyFraction, QSeries, qseries_inverse, qseries_pow


class IntegralityError(AssertionError):
    """A series that must be integral is not; indicates a bug."""


# -- arithmetic functions --------------------------------------------------------------

@dataclass(frozen=True)
class DivisorTable:
    k: int
    values: tuple  # values[n - 1] = sigma_k(n)

    def __getitem__(self, n: int) -> int:
        return self.values[n - 1]

    def __len__(self):
        return len(self.values)


@lru_cache(maxsize=None)
def divisor_table(k: int, N: int) -> DivisorTable:
    """``sigma_k(n)`` for n = 1..N by a divisor sieve."""
    vals = [0] * (N + 1)
    for d in range(1, N + 1):
        p = d ** k
        for m in range(d, N + 1, d):
            vals[m] += p
    return DivisorTable(k, tuple(vals[1:]))


def sigma(k: int, n: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


_BERN: List[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """``B_n`` with ``x/(e^x - 1) = sum B_n x^n / n!`` (so ``B_1 = -1/2``)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    while len(_BERN) <= n:
        m = len(_BERN)
        acc = sum(comb(m + 1, k) * _BERN[k] for k in range(m))
        _BERN.append(-acc / (m + 1))
    return _BERN[n]


def zeta_even_coefficient(k: int) -> Fraction:
    """Rational r with ``zeta(2k) = r * pi^(2k)``, from ``zeta(2k) = -(2 pi i)^{2k} B_2k / (2 (2k)!)``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    # (2 pi i)^{2k} = (-1)^k 2^{2k} pi^{2k}
    return -((-1) ** k) * Fraction(2 ** (2 * k)) * bernoulli(2 * k) / (2 * _fact(2 * k))


def _fact(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


# -- Eisenstein series and the Tate curve -------------------------------------------------------

def eisenstein_normalized(k: int, N: int) -> QSeries:
    """``E_2k / (2 zeta(2k)) = 1 - (4k / B_2k) sum sigma_{2k-1}(n) q^n`` to order N."""
    if k < 2:
        raise ValueError("need k >= 2 for absolute convergence")
    if N < 0:
        raise ValueError("N must be non-negative")
    c = -Fraction(4 * k) / bernoulli(2 * k)
    s = divisor_table(2 * k - 1, N) if N else ()
    return QSeries(0, [Fraction(1)] + [c * s[n] for n in range(1, N + 1)])


def tate_a4(N: int) -> QSeries:
    """``-5 sum sigma_3(n) q^n``."""
    if N < 1:
        raise ValueError("N must be >= 1")
    s3 = divisor_table(3, N)
    return QSeries(0, [0] + [-5 * s3[n] for n in range(1, N + 1)])


def tate_a6(N: int) -> QSeries:
    """``-(1/12) sum (5 sigma_3(n) + 7 sigma_5(n)) q^n``; integrality is asserted."""
    if N < 1:
        raise ValueError("N must be >= 1")
    s3, s5 = divisor_table(3, N), divisor_table(5, N)
    coeffs = [Fraction(0)]
    for n in range(1, N + 1):
        v = 5 * s3[n] + 7 * s5[n]
        if v % 12:
            raise IntegralityError(f"5 sigma_3({n}) + 7 sigma_5({n}) = {v} is not divisible by 12")
        coeffs.append(Fraction(-(v // 12)))
    return QSeries(0, coeffs)


def eta24_series(N: int) -> QSeries:
    """``q prod_{n<=N} (1 - q^n)^24`` to order N."""
    prod = QSeries.one(N)
    for n in range(1, N + 1):
        f = [0] * (N + 1)
        f[0] = 1
        f[n] = -1
        prod = prod * QSeries(0, f)
    prod = qseries_pow(prod, 24)
    return (QSeries.monomial(1, N + 1) * prod).truncate(N)


def discriminant_from_tate(N: int) -> QSeries:
    """``-a6 + a4^2 + 72 a4 a6 - 64 a4^3 - 432 a6^2`` to order N."""
    a4, a6 = tate_a4(N), tate_a6(N)
    return -a6 + a4 * a4 + 72 * (a4 * a6) - 64 * (a4 * a4 * a4) - 432 * (a6 * a6)


def discriminant_identity_check(N: int) -> bool:
    return discriminant_from_tate(N) == eta24_series(N)


# coefficient series over Q(u), as plain lists indexed by the power of q

def _u_ring():
    u = PolyFraction.variable(0, 1)
    one = PolyFraction.from_int(1, 1)
    return u, one


def tate_X_Y(N: int):
    """Lists ``[X_0..X_N]``, ``[Y_0..Y_N]`` of PolyFraction coefficients in u."""
    u, one = _u_ring()
    X0 = u / ((one - u) ** 2)
    Y0 = u ** 2 / ((one - u) ** 3)
    X, Y = [X0], [Y0]
    for n in range(1, N + 1):
        xp: Dict[int, Fraction] = {}
        yp: Dict[int, Fraction] = {}
        for m in range(1, n + 1):
            if n % m:
                continue
            xp[m] = xp.get(m, 0) + m
            xp[-m] = xp.get(-m, 0) + m
            xp[0] = xp.get(0, 0) - 2 * m
            yp[m] = yp.get(m, 0) + Fraction(m * (m - 1), 2)
            yp[-m] = yp.get(-m, 0) - Fraction(m * (m + 1), 2)
            yp[0] = yp.get(0, 0) + m
        X.append(_laurent(xp))
        Y.append(_laurent(yp))
    return X, Y


def _laurent(terms: Dict[int, Fraction]) -> PolyFraction:
    """``sum c_k u^k`` (k may be negative) as one fraction over ``u^lo``."""
    terms = {k: Fraction(c) for k, c in terms.items() if c}
    if not terms:
        return PolyFraction.from_int(0, 1)
    lo = min(0, min(terms))
    den = 1
    for c in terms.values():
        den = den * c.denominator // gcd(den, c.denominator)
    num = MultiPoly(1, {(k - lo,): int(c * den) for k, c in terms.items()})
    d = MultiPoly(1, {(-lo,): den})
    return PolyFraction(num, d)


def _ser_mul(a: List, b: List, N: int, zero) -> List:
    out = [zero] * (N + 1)
    for i in range(N + 1):
        if a[i].is_zero():
            continue
        for j in range(N + 1 - i):
            if not b[j].is_zero():
                out[i + j] = out[i + j] + a[i] * b[j]
    return out


def tate_equation_residual(N: int) -> List[PolyFraction]:
    """Coefficients of ``Y^2 + XY - X^3 - a4 X - a6`` for q^0..q^N."""
    X, Y = tate_X_Y(N)
    zero = PolyFraction.from_int(0, 1)
    a4 = [PolyFraction.from_rational(c, 1) for c in (tate_a4(N).coefficients if N >= 1 else [0])]
    a6 = [PolyFraction.from_rational(c, 1) for c in (tate_a6(N).coefficients if N >= 1 else [0])]
    a4 = (a4 + [zero] * (N + 1))[: N + 1]
    a6 = (a6 + [zero] * (N + 1))[: N + 1]
    YY = _ser_mul(Y, Y, N, zero)
    XY = _ser_mul(X, Y, N, zero)
    XX = _ser_mul(X, X, N, zero)
    XXX = _ser_mul(XX, X, N, zero)
    A4X = _ser_mul(a4, X, N, zero)
    return [YY[n] + XY[n] - XXX[n] - A4X[n] - a6[n] for n in range(N + 1)]


def tate_equation_check(N: int) -> bool:
    if N < 0:
        raise ValueError("N must be non-negative")
    return all(c.is_zero() for c in tate_equation_residual(N))


# -- Delta and j ----------------------------------------------------------------------------------

def delta_normalized(N: int) -> QSeries:
    """``(E4^3 - E6^2) / 1728`` with normalized E4 = 1 + 240q + ..., E6 = 1 - 504q - ..."""
    e4, e6 = eisenstein_normalized(2, N), eisenstein_normalized(3, N)
    return (e4 * e4 * e4 - e6 * e6) / 1728


def j_invariant(N: int) -> QSeries:
    """``j`` through q^N, computed as ``E4^3 / (1728 Delta)``; so ``1728 j = 1/q + 744 + ...``."""
    if N < -1:
        raise ValueError("N must be >= -1")
    # Delta starts at q^1, so its inverse is known to two orders less than E4
    M = N + 2
    e4 = eisenstein_normalized(2, max(M, 0))
    num = e4 * e4 * e4
    den = delta_normalized(max(M, 0)).normalized()
    out = num * qseries_inverse(den) / 1728
    return out.truncate(N)


# -- classical identities -----------------------------------------------------------------------------

def sigma7_identity_check(N: int) -> bool:
    """``sigma_7(n) = sigma_3(n) + 120 sum_{i<n} sigma_3(i) sigma_3(n-i)`` for n <= N."""
    s3, s7 = divisor_table(3, N), divisor_table(7, N)
    for n in range(1, N + 1):
        conv = sum(s3[i] * s3[n - i] for i in range(1, n))
        if s7[n] != s3[n] + 120 * conv:
            return False
    return True


def theta_series(N: int) -> List[int]:
    """Coefficients of ``sum_m q^{m^2}`` up to q^N."""
    out = [0] * (N + 1)
    for m in range(-isqrt(N), isqrt(N) + 1):
        out[m * m] += 1
    return out


def four_squares_counts(N: int) -> List[int]:
    """``r_4(n)`` for n <= N as the coefficients of the fourth power of the theta series."""
    t = np.array(theta_series(N), dtype=object)
    acc = t
    for _ in range(3):
        acc = np.convolve(acc, t)[: N + 1]
    return [int(v) for v in acc]


def four_squares_bruteforce(N: int) -> List[int]:
    """``r_4(n)`` for n <= N by walking the integer box."""
    r = isqrt(N)
    rng = np.arange(-r, r + 1)
    sq = rng * rng
    s = (sq[:, None, None, None] + sq[None, :, None, None] + sq[None, None, :, None] + sq[None, None, None, :]).ravel()
    counts = np.bincount(s[s <= N], minlength=N + 1)
    return [int(v) for v in counts[: N + 1]]


def four_squares_formula(n: int) -> int:
    return 8 * sum(d for d in range(1, n + 1) if n % d == 0 and d % 4)


def four_squares_check(N: int, counts: Sequence[int] | None = None) -> bool:
    counts = four_squares_counts(N) if counts is None else counts
    return counts[0] == 1 and all(counts[n] == four_squares_formula(n) for n in range(1, N + 1))


# -- Serre's weight-one form ------------------------------------------------------------------------------

def _form_counts(a: int, b: int, c: int, N: int) -> np.ndarray:
    """Representation numbers of ``a m^2 + b m n + c n^2`` (positive definite) up to N."""
    disc = 4 * a * c - b * b
    nmax = isqrt(4 * a * N // disc) + 1
    mmax = isqrt(4 * c * N // disc) + 1
    m = np.arange(-mmax, mmax + 1)[:, None]
    n = np.arange(-nmax, nmax + 1)[None, :]
    v = (a * m * m + b * m * n + c * n * n).ravel()
    return np.bincount(v[v <= N], minlength=N + 1)[: N + 1]


def serre_form(N: int) -> QSeries:
    """``(1/2)(sum q^{m^2+mn+6n^2} - sum q^{2m^2+mn+3n^2})`` to order N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    c1 = _form_counts(1, 1, 6, N)
    c2 = _form_counts(2, 1, 3, N)
    return QSeries(0, [Fraction(int(x) - int(y), 2) for x, y in zip(c1, c2)])


def legendre(a: int, p: int) -> int:
    """Legendre symbol by Euler's criterion (p an odd prime)."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def kronecker_23(p: int) -> int:
    """``(p / 23)``, i.e. whether p is a square mod 23 (valid for p = 2 as well)."""
    return legendre(p, 23)


def cubic_root_count(p: int) -> int:
    """Number of roots of ``x^3 - x - 1`` modulo p."""
    return sum(1 for x in range(p) if (x * x * x - x - 1) % p == 0)


def primes_up_to(P: int) -> List[int]:
    sieve = bytearray([1]) * (P + 1)
    sieve[:2] = b"\x00\x00"
    for i in range(2, isqrt(P) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i in range(P + 1) if sieve[i]]


def serre_trichotomy_check(P: int) -> dict:
    """Compare ``a(p)`` of the Serre form with the splitting of ``x^3 - x - 1`` mod p.

    Expected: three roots and a(p) = 2; one root, (p/23) = -1 and a(p) = 0;
    no root, (p/23) = 1 and a(p) = -1.
    """
    if P < 2:
        raise ValueError("P must be >= 2")
    f = serre_form(P)
    rows = []
    ok = True
    for p in primes_up_to(P):
        if p == 23:
            continue
        a = f[p]
        roots = cubic_root_count(p)
        leg = kronecker_23(p)
        if roots == 3:
            expected, kind = 2, "split"
        elif roots == 1:
            expected, kind = (0 if leg == -1 else None), "one root"
        else:
            expected, kind = (-1 if leg == 1 else None), "inert"
        passed = expected is not None and a == expected
        ok &= passed
        rows.append({"p": p, "a": int(a), "roots": roots, "legendre": leg, "type": kind, "pass": passed})
    return {"P": P, "pass": ok, "primes": rows}
