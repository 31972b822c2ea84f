"""Constructive approximation: build a group whose ratio lands within eps.

For a target in (0, 1] the recipe works entirely below 1: pick distinct
primes greedily so that the product P = prod (p-1)/p decreases onto the
target from above.  The greedy runs in log space with target t = ln(1/a)
and log tolerance ln(1 + eps/a), which converts the absolute product
tolerance exactly (no first-order approximation), giving P in [a, a + eps).

For a > 1, first take an elementary abelian 2-group C2^n whose ratio b
exceeds a (minimal such n), then steer the remainder a/b < 1 with odd
primes only, at inner tolerance eps/b; multiplicativity over coprime
orders makes the errors compose as b * (eps/b) = eps.

Target 0 is in the closure but not the image, so a <= eps returns a
below-eps witness: a certified f(G) < eps, never a pretended exact hit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import fixedlog
from .autorder import LogValue, two_rank_ratio
from .errors import PrecisionRefusal, SieveCapacityError
from .groups import SymbolicGroup
from .primes import PrimeStream, estimate_sieve_limit, shared_stream
from .subsum import (
    CONVERGED,
    DEFAULT_BUDGET,
    DEFAULT_EXACT_CAP,
    LogTarget,
    Selection,
    greedy_select,
    prime_ratio_terms,
)

__all__ = [
    "ApproxConfig",
    "ApproxTrace",
    "ApproxResult",
    "choose_two_rank",
    "approx_in_unit",
    "approx_ray",
    "verify_certificate",
]

_PREC = fixedlog.PREC


@dataclass(frozen=True)
class ApproxConfig:
    """Resource knobs; correctness never depends on them."""

    budget: int | None = DEFAULT_BUDGET
    exact_cap: int = DEFAULT_EXACT_CAP
    materialize_cap: int = 10_000


@dataclass(frozen=True)
class ApproxTrace:
    """Everything needed to replay and audit one approximation run."""

    two_rank: int
    b: Fraction | None  # f(C2^two_rank) when the ray split was used
    eps_inner: Fraction | None  # eps/b passed to the odd-prime stage
    odd_only: bool
    selection: Selection | None
    max_prime_scanned: int
    below_eps_witness: bool = False


@dataclass(frozen=True)
class ApproxResult:
    """A synthesized group with a certified ratio enclosure.

    ``achieved`` encloses ln f(G); ``exact_ratio`` is set whenever the run
    stayed fully exact, and then f(G) equals it with zero error.
    """

    group: SymbolicGroup
    achieved: LogValue
    exact_ratio: Fraction | None
    target: Fraction
    eps: Fraction
    trace: ApproxTrace

    def materialize(self, stream: PrimeStream | None = None, cap: int = 10_000):
        return self.group.materialize(stream or shared_stream(), cap)


def _logvalue_from_fraction_bounds(lo: Fraction, hi: Fraction) -> LogValue:
    mid = float((lo + hi) / 2)
    rad = max(hi - Fraction(mid), Fraction(mid) - lo, Fraction(0))
    out = float(rad)
    while Fraction(out) < rad:
        out = math.nextafter(out, math.inf)
    return LogValue(mid, out)


def _log_enclosure_of_selection(sel: Selection) -> tuple[Fraction, Fraction]:
    """Enclosure of ln P = -(selected sum) for a log-ratio selection."""
    return (-sel.achieved.hi, -sel.achieved.lo)


def choose_two_rank(a) -> tuple[int, Fraction]:
    """Minimal n with f(C2^n) > a (strictly), with the exact value b.

    f(C2^n) grows without bound, so this terminates; minimality keeps b/a
    small, which shrinks the odd-prime workload downstream.
    """
    a = Fraction(a)
    if a <= 1:
        raise ValueError("choose_two_rank needs a > 1")
    n = 1
    while two_rank_ratio(n) <= a:
        n += 1
    return n, two_rank_ratio(n)


def _presize_sieve(stream: PrimeStream, log_target: Fraction) -> None:
    """Best-effort sieve pre-sizing; the greedy verifies its own progress."""
    try:
        stream.extend_to(
            estimate_sieve_limit(min(float(log_target), 100.0), stream.ceiling)
        )
    except SieveCapacityError:
        pass  # greedy will extend lazily and report capacity honestly


def _run_unit_greedy(
    a: Fraction,
    eps: Fraction,
    odd_only: bool,
    stream: PrimeStream,
    config: ApproxConfig,
    record_trail: bool,
) -> ApproxResult:
    """The a in (eps, 1) work-horse: greedy onto t = ln(1/a)."""
    source = prime_ratio_terms(odd_only, stream)
    q = 1 / a
    # rational lower bound of ln(1 + eps/a): stopping strictly earlier than
    # the true log tolerance keeps P < a + eps certified
    lo_eps = fixedlog.ln_fraction_bounds((a + eps) / a, _PREC)[0]
    eps_log = Fraction(lo_eps, 1 << _PREC)
    if eps_log <= 0:
        raise PrecisionRefusal(f"eps {eps} is below the arithmetic resolution")
    _presize_sieve(stream, _ln_upper_estimate(q))
    sel = greedy_select(
        source,
        LogTarget(q),
        eps_log,
        budget=config.budget,
        record_trail=record_trail,
        exact_cap=config.exact_cap,
    )
    if sel.status != CONVERGED:
        raise SieveCapacityError(
            f"could not approach {a} within {eps}: {sel.status} after "
            f"scanning {sel.scanned} terms",
            partial=_trace_from_selection(sel, source, odd_only),
        )
    group = _group_from_selection(sel, odd_only)
    trace = _trace_from_selection(sel, source, odd_only, group.two_rank)
    exact = (1 / sel.exact_product) if sel.exact_product is not None else None
    lo, hi = _log_enclosure_of_selection(sel)
    return ApproxResult(
        group=group,
        achieved=_logvalue_from_fraction_bounds(lo, hi),
        exact_ratio=exact,
        target=a,
        eps=eps,
        trace=trace,
    )


def _ln_upper_estimate(q: Fraction) -> Fraction:
    """Cheap rational upper bound of ln(q), only for sieve pre-sizing."""
    bits = (q.numerator // q.denominator).bit_length()
    return Fraction(7050, 10000) * bits  # 0.705 > ln 2


def _trace_from_selection(
    sel: Selection, source, odd_only: bool, two_rank: int = 0
) -> ApproxTrace:
    max_p = source.prime(sel.scanned) if sel.scanned else 0
    return ApproxTrace(
        two_rank=two_rank,
        b=None,
        eps_inner=None,
        odd_only=odd_only,
        selection=sel,
        max_prime_scanned=max_p,
    )


def _group_from_selection(sel: Selection, odd_only: bool) -> SymbolicGroup:
    """Map source-index runs to prime-index runs; a selected p = 2 becomes
    the C2 factor (two_rank 1)."""
    if odd_only:
        ranges = tuple((lo + 1, hi + 1) for lo, hi in sel.ranges)
        return SymbolicGroup(0, ranges)
    two_rank = 0
    ranges = list(sel.ranges)
    if ranges and ranges[0][0] == 1:
        two_rank = 1
        lo, hi = ranges[0]
        if hi == 1:
            ranges.pop(0)
        else:
            ranges[0] = (2, hi)
    return SymbolicGroup(two_rank, tuple(ranges))


def approx_in_unit(
    a,
    eps,
    odd_only: bool = False,
    *,
    stream: PrimeStream | None = None,
    config: ApproxConfig = ApproxConfig(),
    record_trail: bool = False,
) -> ApproxResult:
    """Group with ratio in [a, a + eps) for a in [0, 1] (certified).

    a = 1 returns the trivial group exactly.  a <= eps cannot be hit from
    within the image, so the result is a below-eps witness: certified
    f(G) < eps, flagged in the trace.  Raises SieveCapacityError (with the
    partial trace attached) when the sieve ceiling stops convergence.
    """
    a = Fraction(a)
    eps = Fraction(eps)
    if not 0 <= a <= 1:
        raise ValueError("approx_in_unit needs 0 <= a <= 1")
    if eps <= 0:
        raise ValueError("eps must be positive")
    stream = stream or shared_stream()
    if a == 1:
        group = SymbolicGroup(0, ())
        return ApproxResult(
            group=group,
            achieved=LogValue(0.0, 0.0),
            exact_ratio=Fraction(1),
            target=a,
            eps=eps,
            trace=ApproxTrace(0, None, None, odd_only, None, 0),
        )
    if a <= eps:
        return _below_eps_witness(a, eps, odd_only, stream, config, record_trail)
    return _run_unit_greedy(a, eps, odd_only, stream, config, record_trail)


def _below_eps_witness(a, eps, odd_only, stream, config, record_trail):
    # target ln(3/eps) = ln(1/eps) + ln 3 with log tolerance 1: convergence
    # leaves U = prod p/(p-1) > 3/(e*eps) > 1/eps, so f = 1/U < eps
    q = 3 / eps
    _presize_sieve(stream, _ln_upper_estimate(q))
    source = prime_ratio_terms(odd_only, stream)
    sel = greedy_select(
        source,
        LogTarget(q),
        Fraction(1),
        budget=config.budget,
        record_trail=record_trail,
        exact_cap=config.exact_cap,
    )
    if sel.status != CONVERGED:
        raise SieveCapacityError(
            f"cannot certify a ratio below {eps} under the sieve ceiling "
            f"({sel.status} after {sel.scanned} terms)",
            partial=_trace_from_selection(sel, source, odd_only),
        )
    group = _group_from_selection(sel, odd_only)
    base = _trace_from_selection(sel, source, odd_only, group.two_rank)
    trace = ApproxTrace(
        two_rank=base.two_rank,
        b=None,
        eps_inner=None,
        odd_only=odd_only,
        selection=sel,
        max_prime_scanned=base.max_prime_scanned,
        below_eps_witness=True,
    )
    exact = (1 / sel.exact_product) if sel.exact_product is not None else None
    lo, hi = _log_enclosure_of_selection(sel)
    return ApproxResult(
        group=group,
        achieved=_logvalue_from_fraction_bounds(lo, hi),
        exact_ratio=exact,
        target=a,
        eps=eps,
        trace=trace,
    )


def approx_ray(
    a,
    eps,
    *,
    stream: PrimeStream | None = None,
    config: ApproxConfig = ApproxConfig(),
    record_trail: bool = False,
) -> ApproxResult:
    """Group with certified |f(G) - a| <= eps for any a >= 0.

    a <= 1 delegates to approx_in_unit over all primes.  For a > 1 the
    2-part is chosen first; when a equals some f(C2^n) exactly the odd
    stage is skipped entirely (the inner target would be 1).
    """
    a = Fraction(a)
    eps = Fraction(eps)
    if a < 0:
        raise ValueError("target must be >= 0")
    if eps <= 0:
        raise ValueError("eps must be positive")
    stream = stream or shared_stream()
    if a <= 1:
        return approx_in_unit(
            a, eps, odd_only=False, stream=stream, config=config,
            record_trail=record_trail,
        )
    # exact representability by an elementary 2-group alone
    n = 1
    while True:
        b = two_rank_ratio(n)
        if b == a:
            lna_lo, lna_hi = fixedlog.ln_fraction_bounds(a, _PREC)
            return ApproxResult(
                group=SymbolicGroup(n, ()),
                achieved=_logvalue_from_fraction_bounds(
                    Fraction(lna_lo, 1 << _PREC), Fraction(lna_hi, 1 << _PREC)
                ),
                exact_ratio=a,
                target=a,
                eps=eps,
                trace=ApproxTrace(n, a, None, True, None, 0),
            )
        if b > a:
            break
        n += 1
    eps1 = eps / b
    inner = approx_in_unit(
        a / b, eps1, odd_only=True, stream=stream, config=config,
        record_trail=record_trail,
    )
    group = SymbolicGroup(n, inner.group.odd_prime_ranges)
    b_lo, b_hi = fixedlog.ln_fraction_bounds(b, _PREC)
    lo_in, hi_in = inner.achieved.interval()
    lo = Fraction(b_lo, 1 << _PREC) + lo_in
    hi = Fraction(b_hi, 1 << _PREC) + hi_in
    exact = b * inner.exact_ratio if inner.exact_ratio is not None else None
    trace = ApproxTrace(
        two_rank=n,
        b=b,
        eps_inner=eps1,
        odd_only=True,
        selection=inner.trace.selection,
        max_prime_scanned=inner.trace.max_prime_scanned,
        below_eps_witness=inner.trace.below_eps_witness,
    )
    return ApproxResult(
        group=group,
        achieved=_logvalue_from_fraction_bounds(lo, hi),
        exact_ratio=exact,
        target=a,
        eps=eps,
        trace=trace,
    )


def verify_certificate(
    result: ApproxResult,
    *,
    stream: PrimeStream | None = None,
    prec: int = 2 * _PREC,
) -> bool:
    """Independent second pass at doubled precision.

    Re-encloses ln f(G) from the group alone (not the run's bookkeeping)
    and checks the containment claim: exact results must satisfy
    |f - a| <= eps as rationals; certified ones must have their enclosure
    inside (a - eps, a + eps), compared in log space against directed
    bounds of the interval endpoints.
    """
    from .autorder import _f_log_bounds

    stream = stream or shared_stream()
    a, eps = result.target, result.eps
    if result.exact_ratio is not None:
        f = result.exact_ratio
        if result.trace.below_eps_witness:
            return 0 < f < eps
        return abs(f - a) <= eps
    lo, hi, p_used = _f_log_bounds(result.group, stream, prec)
    upper = a + eps
    up_lo = fixedlog.ln_fraction_bounds(upper, prec)[0]
    # compare at matching scale: f < a + eps
    if Fraction(hi, 1 << p_used) >= Fraction(up_lo, 1 << prec):
        return False
    lower = a - eps
    if lower <= 0:
        return True
    low_hi = fixedlog.ln_fraction_bounds(lower, prec)[1]
    return Fraction(lo, 1 << p_used) > Fraction(low_hi, 1 << prec)
