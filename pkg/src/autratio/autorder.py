"""Exact |Aut(G)| and the ratios f(G) = |Aut(G)|/|G|, f'(G) = |Aut(G)|/phi(|G|).

For an abelian p-group with ascending exponent partition e1 <= ... <= en the
automorphism group order is

    prod_k (p^d_k - p^(k-1)) * prod_j p^(e_j (n - d_j)) * prod_i p^((e_i - 1)(n - c_i + 1))

where d_k = max{l : e_l = e_k} and c_k = min{l : e_l = e_k}.  This closed
form is standard but easy to get subtly wrong, so the test suite pins it
against an independent brute-force count (see ``autratio.oracle``) on every
small group; the oracle, not the formula, is the trust root.

Across distinct primes |Aut| is multiplicative, which is also what makes
f multiplicative over direct factors of coprime order.

Exact values are ``fractions.Fraction``; ``LogValue`` carries a certified
log-space result for groups too large for exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from . import fixedlog
from .groups import AbelianGroup, SymbolicGroup, order
from .primes import PrimeStream, shared_stream

__all__ = [
    "Ratio",
    "LogValue",
    "aut_order_local",
    "aut_order",
    "f_exact",
    "f_prime_exact",
    "f_log",
    "two_rank_ratio",
    "euler_phi_of_order",
]

# Exact nonnegative rationals in lowest terms; Fraction already maintains
# the gcd = 1 / positive-denominator invariants.
Ratio = Fraction


@dataclass(frozen=True)
class LogValue:
    """ln of a positive quantity together with a certified absolute error.

    Represents the interval [exp(log_value - abs_error),
    exp(log_value + abs_error)]; every constructor rounds outward, so the
    true value is always inside.
    """

    log_value: float
    abs_error: float

    def __post_init__(self):
        if self.abs_error < 0:
            raise ValueError("abs_error must be >= 0")

    @classmethod
    def from_bounds(cls, lo: int, hi: int, prec: int) -> "LogValue":
        mid, rad = fixedlog.to_float_interval(lo, hi, prec)
        return cls(mid, rad)

    def interval(self) -> tuple[Fraction, Fraction]:
        """The certified log-space interval as exact rationals."""
        v = Fraction(self.log_value)
        e = Fraction(self.abs_error)
        return v - e, v + e


def aut_order_local(p: int, partition) -> int:
    """|Aut| of the p-group with the given ascending exponent partition."""
    part = list(partition)
    if not part:
        raise ValueError("partition must be non-empty")
    if part != sorted(part) or part[0] < 1:
        raise ValueError(f"partition must be ascending with entries >= 1: {part}")
    n = len(part)
    d = [max(l for l in range(n) if part[l] == part[k]) + 1 for k in range(n)]
    c = [min(l for l in range(n) if part[l] == part[k]) + 1 for k in range(n)]
    a = prod(p ** d[k] - p**k for k in range(n))
    b = prod(p ** (part[j] * (n - d[j])) for j in range(n))
    e = prod(p ** ((part[i] - 1) * (n - c[i] + 1)) for i in range(n))
    return a * b * e


def aut_order(g: AbelianGroup) -> int:
    """|Aut(G)|, multiplicative over the primary components."""
    return prod(aut_order_local(p, part) for p, part in g.factors)


def f_exact(g: AbelianGroup) -> Fraction:
    """f(G) = |Aut(G)| / |G| as an exact rational in lowest terms."""
    return Fraction(aut_order(g), order(g))


def euler_phi_of_order(g: AbelianGroup) -> int:
    """phi(|G|) straight from the known factorization of |G|."""
    return prod(
        p ** (sum(part) - 1) * (p - 1) for p, part in g.factors
    )


def f_prime_exact(g: AbelianGroup) -> Fraction:
    """f'(G) = |Aut(G)| / phi(|G|); phi(1) = 1 for the trivial group."""
    return Fraction(aut_order(g), euler_phi_of_order(g))


def two_rank_ratio(n: int) -> Fraction:
    """f(C2^n) = prod_{k=0}^{n-1} (2^n - 2^k) / 2^n  (1 for n = 0)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return Fraction(prod(2**n - 2**k for k in range(n)), 2**n)


# Above this many odd-prime factors, f_log drops to the vectorized 60-bit
# regime instead of per-term scalar enclosures.
_VECTOR_THRESHOLD = 65536


def _f_log_bounds(
    s: SymbolicGroup, stream: PrimeStream, prec: int | None
) -> tuple[int, int, int]:
    """Certified fixed-point enclosure (lo, hi, prec_used) of ln f(G)."""
    count = s.index_count
    use_vector = prec is None and count > _VECTOR_THRESHOLD
    p_used = fixedlog.SCALE_BITS if use_vector else (prec or fixedlog.PREC)
    b = two_rank_ratio(s.two_rank)
    if p_used < fixedlog.PREC:
        shift = fixedlog.PREC - p_used
        raw_lo, raw_hi = fixedlog.ln_fraction_bounds(b, fixedlog.PREC)
        b_lo, b_hi = raw_lo >> shift, -((-raw_hi) >> shift)
    else:
        b_lo, b_hi = fixedlog.ln_fraction_bounds(b, p_used)
    if use_vector:
        t_sum = 0
        for lo_i, hi_i in s.odd_prime_ranges:
            block = stream.primes_slice(lo_i, hi_i)
            t_sum += int(fixedlog.term_block_fp60(block).sum())
        return (
            b_lo - t_sum - count * fixedlog.TERM_ERR60,
            b_hi - t_sum,
            p_used,
        )
    t_lo = t_hi = 0
    for i in s.iter_indices():
        p = stream.nth_prime(i)
        lo_i, hi_i = fixedlog.log_ratio_term_bounds(p, p_used)
        t_lo += lo_i
        t_hi += hi_i
    return (b_lo - t_hi, b_hi - t_lo, p_used)


def f_log(
    s: SymbolicGroup,
    *,
    stream: PrimeStream | None = None,
    prec: int | None = None,
) -> LogValue:
    """Certified ln f(G) for a symbolic group.

    ln f = ln f(C2^two_rank) + sum over selected odd primes of ln((p-1)/p),
    with every term enclosed by directed fixed-point arithmetic and the
    per-term bounds summed into abs_error.  Pass ``prec`` (fractional bits)
    to force scalar evaluation, e.g. for a doubled-precision second pass.
    """
    stream = stream or shared_stream()
    lo, hi, p_used = _f_log_bounds(s, stream, prec)
    return LogValue.from_bounds(lo, hi, p_used)
