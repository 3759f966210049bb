"""Exact limiting densities for constrained tuples, with rigorous enclosures.

The density of k-wise coprime s-tuples is an Euler product: each prime
contributes the probability that it divides at most k - 1 of s uniformly
random residues.  Truncating the product at a prime limit P overshoots the
true value, and the omitted factors multiply to at least 1 - tail for an
explicit tail bound, so every result is returned as a certified enclosure
[lower, upper] plus the truncated-product point value.

All per-prime factors are exact fractions.  The truncated product itself is
carried as an unreduced integer pair because reducing a product of tens of
thousands of fractions is quadratically expensive; conversion to decimal
happens once at the end, separately rounded down and up.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from itertools import combinations
from math import comb, prod

from .arith import factorize, is_prime, sieve_primes
from .coprime import ConstraintVector

__all__ = [
    "DEFAULT_PRECISION",
    "DEFAULT_PRIME_LIMIT",
    "DensityEnclosure",
    "constraint_factor",
    "constraint_factor_mobius",
    "error_log_exponent",
    "kwise_coprime_probability",
    "limiting_density",
    "local_factor",
    "mobius_ratio_identity",
    "mobius_sum_weight",
    "tail_fraction",
]

DEFAULT_PRECISION = 50
DEFAULT_PRIME_LIMIT = 100_000


@dataclass(frozen=True)
class DensityEnclosure:
    """Certified decimal enclosure of a limiting density.

    lower and upper bound the exact limit from below and above; point is
    the truncated Euler product rounded to nearest and always lies inside
    [lower, upper].  tail_bound is the certified relative loss from the
    primes beyond prime_limit, rounded up.
    """

    lower: Decimal
    upper: Decimal
    point: Decimal
    prime_limit: int
    tail_bound: Decimal

    @property
    def width(self) -> Decimal:
        # plenty of working precision keeps the subtraction exact
        with localcontext() as ctx:
            ctx.prec = 999
            return self.upper - self.lower


def _validate_order(s: int, k: int) -> None:
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")


def local_factor(s: int, k: int, p: int) -> Fraction:
    """Per-prime density factor: P[p divides at most k - 1 of s residues].

    Written as (1 - 1/p)^(s-k+1) * sum_{m<k} C(s,m) (1 - 1/p)^(k-1-m) p^-m,
    which telescopes the binomial tail; equals 1 exactly when s < k since
    no prime can divide k of fewer than k values.
    """
    _validate_order(s, k)
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if s < k:
        return Fraction(1)
    q = Fraction(p - 1, p)
    tail = sum(comb(s, m) * q ** (k - 1 - m) * Fraction(1, p**m) for m in range(k))
    return q ** (s - k + 1) * tail


def _local_pair(s: int, k: int, p: int) -> tuple[int, int]:
    """local_factor as an unreduced integer pair, cheap enough for product loops."""
    weight = sum(comb(s, m) * (p - 1) ** (k - 1 - m) for m in range(k))
    return ((p - 1) ** (s - k + 1) * weight, p**s)


def tail_fraction(s: int, k: int, prime_limit: int) -> Fraction:
    """Certified bound on the relative loss from primes above prime_limit.

    Each omitted factor lies in [1 - C(s,k) p^-k, 1]: the factor is the
    probability that no k of the s residues share the prime, and a union
    bound over the C(s,k) subsets costs p^-k each.  Summing p^-k over
    integers above prime_limit against the integral gives
    prime_limit^(1-k) / (k - 1), and prod(1 - x_p) >= 1 - sum(x_p).
    Zero when s < k, where every factor is exactly 1.
    """
    _validate_order(s, k)
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be at least 2, got {prime_limit}")
    return Fraction(comb(s, k), (k - 1) * prime_limit ** (k - 1))


def _balanced_product(xs: list[int]) -> int:
    """Product with balanced operand sizes; linear chains are quadratic here."""
    if not xs:
        return 1
    while len(xs) > 1:
        nxt = [xs[i] * xs[i + 1] for i in range(0, len(xs) - 1, 2)]
        if len(xs) % 2:
            nxt.append(xs[-1])
        xs = nxt
    return xs[0]


def _decimal_ratio(num: int, den: int, digits: int, rounding: str) -> Decimal:
    """num/den as a Decimal with `digits` significant figures, rounded as asked.

    Huge operands are first truncated to a shared shift with the truncation
    error pushed in the rounding direction, so FLOOR stays a lower bound and
    CEILING an upper bound; the guard keeps the relative slack far below one
    unit in the last requested digit.
    """
    if num == 0:
        return Decimal(0)
    guard = 128 + 4 * digits
    t = min(num.bit_length(), den.bit_length()) - guard
    if t > 0:
        if rounding == ROUND_FLOOR:
            num, den = num >> t, (den >> t) + 1
        elif rounding == ROUND_CEILING:
            num, den = (num >> t) + 1, max(1, den >> t)
        else:
            num, den = num >> t, max(1, den >> t)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        return Decimal(num) / Decimal(den)


def _enclosure(
    num: int, den: int, tail: Fraction, prime_limit: int, digits: int
) -> DensityEnclosure:
    remaining = 1 - tail
    lower = _decimal_ratio(
        num * remaining.numerator, den * remaining.denominator, digits, ROUND_FLOOR
    )
    upper = _decimal_ratio(num, den, digits, ROUND_CEILING)
    point = _decimal_ratio(num, den, digits, ROUND_HALF_EVEN)
    # the exact truncated product lies in [lower, upper]; keep the rounded
    # point there too when the interval is only ulps wide
    point = min(max(point, lower), upper)
    tail_dec = _decimal_ratio(tail.numerator, tail.denominator, digits, ROUND_CEILING)
    return DensityEnclosure(
        lower=lower, upper=upper, point=point, prime_limit=prime_limit, tail_bound=tail_dec
    )


def kwise_coprime_probability(
    s: int,
    k: int,
    prime_limit: int = DEFAULT_PRIME_LIMIT,
    precision: int = DEFAULT_PRECISION,
) -> DensityEnclosure:
    """Enclosure of the limiting probability that s random values are k-wise coprime.

    Exactly 1 when s < k.  Otherwise the Euler product of local_factor over
    primes up to prime_limit, certified against the omitted tail; raises if
    the tail bound reaches 1 (prime_limit too small to say anything).
    """
    _validate_order(s, k)
    if precision < 1:
        raise ValueError(f"precision must be at least 1, got {precision}")
    tail = tail_fraction(s, k, prime_limit)
    if tail >= 1:
        raise ValueError(
            f"tail bound {tail} is not below 1; raise prime_limit above {prime_limit}"
        )
    if s < k:
        num, den = 1, 1
    else:
        pairs = [_local_pair(s, k, p) for p in sieve_primes(prime_limit)]
        num = _balanced_product([a for a, _ in pairs])
        den = _balanced_product([b for _, b in pairs])
    return _enclosure(num, den, tail, prime_limit, precision)


def constraint_factor(s: int, k: int, i: int, u: int) -> Fraction:
    """Exact density correction for the i-wise-coprime-to-u condition.

    Multiplicative over the primes of u; each prime contributes the
    conditional probability that it divides at most i - 1 of the s values
    given that it divides at most k - 1.  Depends only on the radical of u,
    and is 1 when u = 1.
    """
    _validate_order(s, k)
    if not 1 <= i <= k - 1:
        raise ValueError(f"i must lie in [1, k-1] = [1, {k - 1}], got {i}")
    if u < 1:
        raise ValueError(f"u must be a positive integer, got {u}")
    out = Fraction(1)
    for p in factorize(u).primes():
        num = sum(comb(s, m) * (p - 1) ** (k - 1 - m) for m in range(i))
        den = sum(comb(s, m) * (p - 1) ** (k - 1 - m) for m in range(k))
        out *= Fraction(num, den)
    return out


def mobius_sum_weight(s: int, i: int, d: int) -> Fraction:
    """Weight d^i * prod_{p|d} sum_{m<=i} C(s,m) (1-1/p)^(i-m) p^-m.

    The denominator weight appearing in the Mobius-sum form of the
    constraint factors; for squarefree d the d^i factor cancels the prime
    powers and the value is the integer prod_{p|d} sum_m C(s,m)(p-1)^(i-m).
    """
    if s < 1:
        raise ValueError(f"s must be at least 1, got {s}")
    if i < 1:
        raise ValueError(f"i must be at least 1, got {i}")
    if d < 1:
        raise ValueError(f"d must be a positive integer, got {d}")
    out = Fraction(d) ** i
    for p in factorize(d).primes():
        q = Fraction(p - 1, p)
        out *= sum(comb(s, m) * q ** (i - m) * Fraction(1, p**m) for m in range(i + 1))
    return out


def constraint_factor_mobius(s: int, k: int, i: int, u: int) -> Fraction:
    """Mobius-sum route to the constraint factors.

    Evaluates sum over squarefree divisors d of u of
    mu(d) C(s,i)^omega(d) / mobius_sum_weight(s, i, d).  Equals
    constraint_factor(s,k,i,u) / constraint_factor(s,k,i+1,u) for i < k - 1
    and constraint_factor(s,k,k-1,u) at i = k - 1; mobius_ratio_identity
    checks that equality case by case.
    """
    _validate_order(s, k)
    if not 1 <= i <= k - 1:
        raise ValueError(f"i must lie in [1, k-1] = [1, {k - 1}], got {i}")
    if u < 1:
        raise ValueError(f"u must be a positive integer, got {u}")
    primes = factorize(u).primes()
    total = Fraction(0)
    for r in range(len(primes) + 1):
        for sub in combinations(primes, r):
            d = prod(sub)
            total += Fraction((-1) ** r * comb(s, i) ** r) / mobius_sum_weight(s, i, d)
    return total


def mobius_ratio_identity(s: int, k: int, u: int) -> list[tuple[int, Fraction, Fraction, bool]]:
    """Compare both routes to the constraint-factor ratios for every i.

    Returns (i, mobius-sum value, factor-ratio value, equal) for each i in
    1..k-1.  Exact rational comparison; any inequality is a real defect in
    one of the two routes, never a rounding artifact.
    """
    out = []
    for i in range(1, k):
        lhs = constraint_factor_mobius(s, k, i, u)
        if i <= k - 2:
            rhs = constraint_factor(s, k, i, u) / constraint_factor(s, k, i + 1, u)
        else:
            rhs = constraint_factor(s, k, k - 1, u)
        out.append((i, lhs, rhs, lhs == rhs))
    return out


def limiting_density(
    s: int,
    constraint: ConstraintVector,
    prime_limit: int = DEFAULT_PRIME_LIMIT,
    precision: int = DEFAULT_PRECISION,
) -> DensityEnclosure:
    """Enclosure of the limiting density of tuples satisfying a constraint.

    The k-wise Euler product times the exact constraint factors for each
    modulus.  The constraint factors are finite exact rationals, so the
    tail certificate is the same one the bare k-wise product carries.
    """
    if not isinstance(constraint, ConstraintVector):
        raise TypeError(
            f"constraint must be a ConstraintVector, got {type(constraint).__name__}"
        )
    k = constraint.k
    _validate_order(s, k)
    if precision < 1:
        raise ValueError(f"precision must be at least 1, got {precision}")
    tail = tail_fraction(s, k, prime_limit)
    if tail >= 1:
        raise ValueError(
            f"tail bound {tail} is not below 1; raise prime_limit above {prime_limit}"
        )
    if s < k:
        num, den = 1, 1
    else:
        pairs = [_local_pair(s, k, p) for p in sieve_primes(prime_limit)]
        num = _balanced_product([a for a, _ in pairs])
        den = _balanced_product([b for _, b in pairs])
    factor = Fraction(1)
    for i, u in enumerate(constraint.moduli, start=1):
        factor *= constraint_factor(s, k, i, u)
    return _enclosure(
        num * factor.numerator, den * factor.denominator, tail, prime_limit, precision
    )


def error_log_exponent(s: int, k: int) -> int:
    """Log exponent in the counting error term: max of C(s-1, i) over 1 <= i <= k-1."""
    _validate_order(s, k)
    return max(comb(s - 1, i) for i in range(1, k))
