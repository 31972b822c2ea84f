"""Greedy selection of a finite subsequence whose sum approaches a target.

Given positive terms x_1, x_2, ... tending to zero with divergent sum, the
finite subset sums are dense in [0, oo).  ``greedy_select`` realizes that
constructively with the simplest possible rule: scan i = 1, 2, ... and take
x_i whenever it still fits under the target.  The running sum then never
exceeds the target, and every skip certifies that the remaining deficit was
smaller than the skipped term, which is what drives convergence once terms
fall below the tolerance.

Two kinds of term source are supported:

* ``TermSource`` with exact rational terms (e.g. the harmonic sequence);
  every decision is exact Fraction arithmetic with zero error.
* ``PrimeRatioSource`` with terms x_i = ln(p_i/(p_i - 1)).  The terms are
  irrational but each is the log of a rational, so against a ``LogTarget``
  (a target of the form ln(Q), Q rational) every greedy decision reduces
  to an exact comparison on the running product  U = prod p/(p-1).  Runs
  that outgrow ``exact_cap`` included terms continue in certified 60-bit
  fixed point, where whole include/skip runs are located by binary search
  on error-adjusted prefix sums; convergence is declared only when the
  certified deficit (arithmetic error included) is below the tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import fixedlog
from .errors import PrecisionRefusal, SieveCapacityError
from .groups import _ranges_from_indices
from .primes import PrimeStream, shared_stream

__all__ = [
    "CONVERGED",
    "BUDGET_EXHAUSTED",
    "CAPACITY_EXHAUSTED",
    "Certified",
    "LogTarget",
    "TermSource",
    "PrimeRatioSource",
    "prime_ratio_terms",
    "Selection",
    "greedy_select",
    "DEFAULT_BUDGET",
    "DEFAULT_EXACT_CAP",
]

CONVERGED = "converged"
BUDGET_EXHAUSTED = "budget_exhausted"
CAPACITY_EXHAUSTED = "capacity_exhausted"

DEFAULT_BUDGET = 10_000_000
DEFAULT_EXACT_CAP = 10_000

_PREC = fixedlog.PREC
_SB = fixedlog.SCALE_BITS
_C = fixedlog.TERM_ERR60


@dataclass(frozen=True)
class Certified:
    """An exact-rational enclosure value +- abs_error of a real quantity."""

    value: Fraction
    abs_error: Fraction

    @classmethod
    def exact(cls, value) -> "Certified":
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def from_bounds(cls, lo: Fraction, hi: Fraction) -> "Certified":
        return cls((lo + hi) / 2, (hi - lo) / 2)

    @property
    def lo(self) -> Fraction:
        return self.value - self.abs_error

    @property
    def hi(self) -> Fraction:
        return self.value + self.abs_error


@dataclass(frozen=True)
class LogTarget:
    """Target sum ln(ratio) for a rational ratio >= 1."""

    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", Fraction(self.ratio))
        if self.ratio < 1:
            raise ValueError("LogTarget ratio must be >= 1 (target sum >= 0)")


class TermSource:
    """Indexed positive terms i -> x_i (i >= 1) with declared metadata.

    ``term(i)`` must be deterministic and return an exact Fraction.  The
    vanishing/divergence claims are caller-supplied and unverifiable here,
    which is exactly why greedy runs carry an index budget.  Setting
    ``nonincreasing`` lets the selector jump over non-fitting runs by
    bisection instead of index-by-index scanning.
    """

    def __init__(
        self,
        term: Callable[[int], Fraction],
        *,
        terms_tend_to_zero: bool,
        series_diverges: bool,
        nonincreasing: bool = False,
        capacity: int | None = None,
        description: str = "",
    ):
        self._term = term
        self.terms_tend_to_zero = terms_tend_to_zero
        self.series_diverges = series_diverges
        self.nonincreasing = nonincreasing
        self.capacity = capacity
        self.description = description

    def term(self, i: int) -> Fraction:
        if i < 1:
            raise ValueError("term index must be >= 1")
        x = Fraction(self._term(i))
        if x <= 0:
            raise ValueError(f"term {i} is not positive: {x}")
        return x


class PrimeRatioSource:
    """Terms x_i = ln(p/(p-1)) over all primes, or odd primes only.

    With ``odd_only`` the indices shift: source term j corresponds to the
    prime p_{j+1}, so the first term is ln(3/2).  Both metadata claims
    hold: terms vanish since p -> oo, and the series diverges because the
    terms are asymptotically 1/p and sum 1/p diverges.
    """

    terms_tend_to_zero = True
    series_diverges = True
    nonincreasing = True

    def __init__(self, odd_only: bool, stream: PrimeStream | None = None):
        self.odd_only = odd_only
        self.stream = stream or shared_stream()
        self.description = "ln(p/(p-1)) over " + (
            "odd primes" if odd_only else "all primes"
        )

    def prime_index(self, i: int) -> int:
        if i < 1:
            raise ValueError("term index must be >= 1")
        return i + 1 if self.odd_only else i

    def prime(self, i: int) -> int:
        return self.stream.nth_prime(self.prime_index(i))

    def ratio(self, i: int) -> Fraction:
        p = self.prime(i)
        return Fraction(p, p - 1)

    def term_float(self, i: int) -> float:
        p = self.prime(i)
        return math.log(p) - math.log(p - 1)

    def term_enclosure(self, i: int, prec: int = _PREC) -> tuple[int, int]:
        return fixedlog.log_ratio_term_bounds(self.prime(i), prec)

    def available_count(self) -> int:
        """Highest source index under the current sieve (no extension)."""
        return self.stream.count - (1 if self.odd_only else 0)

    def term60_array(self, count: int) -> np.ndarray:
        """Floor terms at scale 2**-60 for source indices 1..count.

        Requires the stream to already cover the needed primes.
        """
        cache = _stream_term60_cache(self.stream, self.prime_index(count))
        if self.odd_only:
            return cache[:count]
        return np.concatenate(([_LN2_FLOOR60], cache[: count - 1]))


_LN2_FLOOR60 = np.int64(
    fixedlog.ln_fraction_bounds(Fraction(2), _PREC)[0] >> (_PREC - _SB)
)


def _stream_term60_cache(stream: PrimeStream, upto_prime_index: int) -> np.ndarray:
    """Growing per-stream cache of floor terms for prime indices >= 2."""
    cache = getattr(stream, "_term60_cache", None)
    have = 0 if cache is None else len(cache)
    if upto_prime_index - 1 > have:
        stream._ensure_count(upto_prime_index)
        blocks = [] if cache is None else [cache]
        lo = have + 2
        while lo <= upto_prime_index:
            hi = min(lo + 1_000_000 - 1, upto_prime_index)
            blocks.append(fixedlog.term_block_fp60(stream.primes_slice(lo, hi)))
            lo = hi + 1
        cache = np.concatenate(blocks)
        stream._term60_cache = cache
    return cache


@dataclass(frozen=True)
class Selection:
    """Result of a greedy run.

    ``ranges`` run-length encodes the chosen source indices.  ``achieved``
    encloses the true selected sum; for fully exact runs the error is zero
    and ``exact_sum`` or ``exact_product`` carries the closed value (the
    sum itself, or prod p/(p-1) = exp(sum) for log sources).  On
    ``converged`` the contract is  target - eps < sum <= target.
    """

    ranges: tuple[tuple[int, int], ...]
    count: int
    status: str
    scanned: int
    target: Fraction | LogTarget
    eps: Fraction
    achieved: Certified
    exact_sum: Fraction | None = None
    exact_product: Fraction | None = None
    trail: tuple | None = None

    def indices(self):
        for lo, hi in self.ranges:
            yield from range(lo, hi + 1)


def greedy_select(
    source,
    target,
    eps,
    *,
    budget: int | None = DEFAULT_BUDGET,
    record_trail: bool = False,
    exact_cap: int = DEFAULT_EXACT_CAP,
) -> Selection:
    """One-sided greedy subsequence-sum selection; see the module docstring.

    ``eps`` must be positive.  ``budget`` caps the highest index examined
    (pass None for no cap); exhausting it, or the source's own capacity, is
    a first-class outcome reported in ``status``, not an error.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if budget is not None and budget < 0:
        raise ValueError("budget must be >= 0")
    if isinstance(source, PrimeRatioSource):
        if not isinstance(target, LogTarget):
            raise TypeError(
                "prime ratio sources need a LogTarget (the terms are logs "
                "of rationals, so the target must be one as well)"
            )
        return _greedy_log_ratio(source, target, eps, budget, record_trail, exact_cap)
    if isinstance(target, LogTarget):
        raise TypeError("LogTarget requires a log-ratio source")
    target = Fraction(target)
    if target < 0:
        raise ValueError("target must be >= 0")
    return _greedy_additive(source, target, eps, budget, record_trail)


# ---------------------------------------------------------------------------
# additive sources: exact Fraction arithmetic throughout


def _bisect_first_fitting(fits, lo: int, hi: int) -> int | None:
    """Smallest j in [lo, hi] with fits(j), assuming fits is monotone in j.

    Returns None when even hi fails.  Exponential probe, then bisection.
    """
    if fits(lo):
        return lo
    if lo == hi or not fits(hi):
        return None
    step = 1
    known_bad = lo
    while known_bad + step < hi:
        mid = known_bad + step
        if fits(mid):
            hi = mid
            break
        known_bad = mid
        step *= 2
    while hi - known_bad > 1:
        mid = (known_bad + hi) // 2
        if fits(mid):
            hi = mid
        else:
            known_bad = mid
    return hi


def _greedy_additive(source, target, eps, budget, record_trail):
    total = Fraction(0)
    included: list[int] = []
    trail: list[tuple] = []
    i = 1
    scanned = 0
    cap = source.capacity
    limits = [x for x in (budget, cap) if x is not None]
    hard_limit = min(limits) if limits else None
    status = None
    while True:
        if target - total < eps:
            status = CONVERGED
            break
        if budget is not None and i > budget:
            status = BUDGET_EXHAUSTED
            break
        if cap is not None and i > cap:
            status = CAPACITY_EXHAUSTED
            break
        try:
            x = source.term(i)
        except SieveCapacityError:
            status = CAPACITY_EXHAUSTED
            break
        scanned = i
        deficit = target - total
        if x <= deficit:
            total += x
            included.append(i)
            if record_trail:
                trail.append(("include", i, x, total))
            i += 1
            continue
        if source.nonincreasing:
            # jump the whole run of too-large terms
            if hard_limit is not None:
                j = _bisect_first_fitting(
                    lambda m: source.term(m) <= deficit, i, hard_limit
                )
                run_end = (j - 1) if j is not None else hard_limit
            else:
                run_end = _first_fitting_unbounded(source, i, deficit) - 1
        else:
            run_end = i
        scanned = run_end
        if record_trail:
            trail.append(("skip_run", i, run_end, deficit, source.term(run_end)))
        i = run_end + 1

    return Selection(
        ranges=_ranges_from_indices(included),
        count=len(included),
        status=status,
        scanned=scanned,
        target=target,
        eps=eps,
        achieved=Certified.exact(total),
        exact_sum=total,
        trail=tuple(trail) if record_trail else None,
    )


def _first_fitting_unbounded(source, i, deficit):
    step = 1
    lo = i
    while True:
        hi = lo + step
        if source.term(hi) <= deficit:
            break
        lo = hi
        step *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if source.term(mid) <= deficit:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# log-ratio sources: exact rational phase, then certified fixed point


class _ProductState:
    """Running product U = prod p/(p-1) as raw integers (gcd-free), with a
    float shadow of ln U whose error is tracked for sound fast paths."""

    __slots__ = ("un", "ud", "lnu", "drift", "since_sync")

    def __init__(self):
        self.un = 1
        self.ud = 1
        self.lnu = 0.0
        self.drift = 1e-12
        self.since_sync = 0

    def include(self, p: int, x_f: float):
        self.un *= p
        self.ud *= p - 1
        self.lnu += x_f
        self.drift += 5e-16
        self.since_sync += 1
        if self.since_sync >= 1024:
            lo, hi = fixedlog.ln_fraction_bounds(Fraction(self.un, self.ud), 64)
            self.lnu = (lo + hi) / 2 / 2.0**64
            self.drift = 1e-12
            self.since_sync = 0


def _certified_deficit_below(qn, qd, un, ud, bound: Fraction) -> bool:
    """Certified check  ln(Q/U) < bound  for Q = qn/qd, U = un/ud <= Q."""
    if qn * ud == qd * un:
        return True  # deficit exactly zero
    _, hi = fixedlog.ln_fraction_bounds(Fraction(qn * ud, qd * un), _PREC)
    return Fraction(hi, 1 << _PREC) < bound


def _budget_upper_bound(source) -> Fraction | None:
    """Rigorous upper bound on the total ln(p/(p-1)) available below the
    sieve ceiling: sum_{p <= x} ln(p/(p-1)) < gamma + lnln x + 1/(2 ln^2 x)
    for x >= 285 (classical explicit Mertens-type bound), padded outward.
    Lets hopeless targets fail fast instead of crawling the whole sieve."""
    x = source.stream.ceiling
    if x < 285:
        return None
    total = 0.5772156650 + math.log(math.log(x)) + 0.5 / math.log(x) ** 2 + 0.01
    if source.odd_only:
        total -= 0.6931471805  # drop the p = 2 term (lower bound of ln 2)
    return Fraction(total)


def _greedy_log_ratio(source, target, eps, budget, record_trail, exact_cap):
    qn, qd = target.ratio.numerator, target.ratio.denominator
    if max(qn, qd).bit_length() < 900:
        lnq_f = math.log(qn) - math.log(qd)
    else:
        lo, hi = fixedlog.ln_fraction_bounds(target.ratio, 64)
        lnq_f = (lo + hi) / 2 / 2.0**64
    eps_f = float(eps)
    avail = _budget_upper_bound(source)
    if avail is not None:
        lo_q, _ = fixedlog.ln_fraction_bounds(target.ratio, 64)
        if Fraction(lo_q, 1 << 64) - avail >= eps:
            # even selecting every prime under the ceiling leaves a deficit
            # of at least eps: fail fast instead of crawling the sieve
            return Selection(
                ranges=(),
                count=0,
                status=CAPACITY_EXHAUSTED,
                scanned=0,
                target=target,
                eps=eps,
                achieved=Certified.exact(Fraction(0)),
                exact_product=Fraction(1),
                trail=() if record_trail else None,
            )
    st = _ProductState()
    included: list[int] = []
    trail: list[tuple] = []
    i = 1
    scanned = 0
    status = None
    deficit_dirty = True  # the deficit changes only on inclusion

    while True:
        if deficit_dirty:
            d_est = lnq_f - st.lnu
            if d_est < eps_f + st.drift + 1e-12:
                if _certified_deficit_below(qn, qd, st.un, st.ud, eps):
                    status = CONVERGED
                    break
            deficit_dirty = False
        if budget is not None and i > budget:
            status = BUDGET_EXHAUSTED
            break
        if len(included) >= exact_cap:
            return _continue_fixed_point(
                source, target, eps, budget, record_trail,
                st, included, trail, i, scanned,
            )
        try:
            p = source.prime(i)
        except SieveCapacityError:
            status = CAPACITY_EXHAUSTED
            break
        scanned = i
        x_f = math.log(p) - math.log(p - 1)
        # include iff U * p/(p-1) <= Q, screened by the float shadow
        margin = st.drift + 1e-12
        shadow = st.lnu + x_f - lnq_f
        if shadow <= -margin:
            fits = True
        elif shadow >= margin:
            fits = False
        else:
            fits = st.un * p * qd <= st.ud * (p - 1) * qn
        if fits:
            st.include(p, x_f)
            included.append(i)
            deficit_dirty = True
            if record_trail:
                trail.append(("include", i, p))
            i += 1
            continue
        j, limit_seen = _first_fitting_ratio(source, i, st, qn, qd, budget)
        run_end = (j - 1) if j is not None else limit_seen
        scanned = max(scanned, run_end)
        if record_trail:
            trail.append(("skip_run", i, run_end))
        if j is None:
            status = (
                BUDGET_EXHAUSTED
                if budget is not None and run_end >= budget
                else CAPACITY_EXHAUSTED
            )
            break
        i = j

    product = Fraction(st.un, st.ud)
    lo, hi = fixedlog.ln_fraction_bounds(product, _PREC)
    return Selection(
        ranges=_ranges_from_indices(included),
        count=len(included),
        status=status,
        scanned=scanned,
        target=target,
        eps=eps,
        achieved=Certified.from_bounds(
            Fraction(lo, 1 << _PREC), Fraction(hi, 1 << _PREC)
        ),
        exact_product=product,
        trail=tuple(trail) if record_trail else None,
    )


def _first_fitting_ratio(source, i, st, qn, qd, budget):
    """Smallest j >= i with U * ratio_j <= Q under the budget and sieve
    ceiling, extending the sieve geometrically as needed.

    Returns (j, limit_seen); j is None when no index fits, in which case
    limit_seen is the highest index examined.
    """

    def fits(j: int) -> bool:
        p = source.prime(j)
        return st.un * p * qd <= st.ud * (p - 1) * qn

    while True:
        limit = source.available_count()
        if budget is not None:
            limit = min(limit, budget)
        if limit >= i:
            j = _bisect_first_fitting(fits, i, limit)
            if j is not None:
                return j, limit
        at_budget = budget is not None and limit >= budget
        at_ceiling = source.stream.limit >= source.stream.ceiling
        if at_budget or at_ceiling:
            return None, limit
        source.stream.extend_to(
            min(source.stream.ceiling, source.stream.limit * 4)
        )


def _continue_fixed_point(
    source, target, eps, budget, record_trail, st, included, trail, start_i, scanned
):
    """Certified 60-bit continuation once the exact phase hits its cap.

    With the switch-point deficit d = ln(Q/U) enclosed in [d_lo, d_hi] and
    V the sum of floor terms included in this phase (n of them, each under
    its true value by < C units), the true remaining deficit lies in
    [d_lo - V - n*C, d_hi - V].  Inclusions are decided against the lower
    end, so the selected sum can never exceed the target; convergence is
    declared against the upper end, so the certificate is sound.
    """
    ratio = Fraction(
        target.ratio.numerator * st.ud, target.ratio.denominator * st.un
    )
    d_lo192, d_hi192 = fixedlog.ln_fraction_bounds(ratio, _PREC)
    shift = _PREC - _SB
    d_lo = d_lo192 >> shift
    d_hi = -((-d_hi192) >> shift)
    eps60 = eps * (1 << _SB)

    runs: list[tuple[int, int]] = []
    V = 0
    n_fp = 0
    i = start_i
    status = None

    while True:
        if Fraction(d_hi - V) < eps60:
            status = CONVERGED
            break
        if budget is not None and i > budget:
            status = BUDGET_EXHAUSTED
            break
        rem_lo = d_lo - V - n_fp * _C
        if rem_lo <= _C:
            raise PrecisionRefusal(
                "tolerance sits below the accumulated fixed-point error "
                f"bound (certified remaining deficit <= "
                f"{float(Fraction(d_hi - V, 1 << _SB)):.3e})"
            )
        avail = source.available_count()
        if i > avail:
            if source.stream.limit >= source.stream.ceiling:
                status = CAPACITY_EXHAUSTED
                break
            source.stream.extend_to(
                min(source.stream.ceiling, source.stream.limit * 4)
            )
            continue
        hi_idx = min(avail, budget) if budget is not None else avail
        terms = source.term60_array(hi_idx)[i - 1 :]
        if len(terms) == 0:
            status = BUDGET_EXHAUSTED
            break
        adj = np.cumsum(terms) + _C * np.arange(1, len(terms) + 1, dtype=np.int64)
        bound = min(rem_lo, int(adj[-1]))  # clamp: keep searchsorted in int64
        take = int(np.searchsorted(adj, bound, side="right"))
        if take > 0:
            V += int(adj[take - 1]) - take * _C
            n_fp += take
            runs.append((i, i + take - 1))
            if record_trail:
                trail.append(("fp_include_run", i, i + take - 1))
            scanned = i + take - 1
            i += take
            continue
        # front term does not fit: skip to the first fitting index
        skip_bound = rem_lo - _C
        fit_at = int(np.searchsorted(-terms, -skip_bound, side="left"))
        if fit_at >= len(terms):
            scanned = i + len(terms) - 1
            if record_trail:
                trail.append(("fp_skip_run", i, scanned))
            i += len(terms)
            continue
        fit_at = max(fit_at, 1)
        run_end = i + fit_at - 1
        scanned = max(scanned, run_end)
        if record_trail:
            trail.append(("fp_skip_run", i, run_end))
        i = run_end + 1

    all_runs = _ranges_from_indices(included)
    merged = list(all_runs)
    for lo_r, hi_r in runs:
        if merged and lo_r == merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], hi_r)
        else:
            merged.append((lo_r, hi_r))
    ranges = tuple(merged)
    count = sum(hi_r - lo_r + 1 for lo_r, hi_r in ranges)
    lo_u, hi_u = fixedlog.ln_fraction_bounds(Fraction(st.un, st.ud), _PREC)
    ach_lo = Fraction(lo_u, 1 << _PREC) + Fraction(V, 1 << _SB)
    ach_hi = Fraction(hi_u, 1 << _PREC) + Fraction(V + n_fp * _C, 1 << _SB)
    return Selection(
        ranges=ranges,
        count=count,
        status=status,
        scanned=scanned,
        target=target,
        eps=eps,
        achieved=Certified.from_bounds(ach_lo, ach_hi),
        exact_product=None,
        trail=tuple(trail) if record_trail else None,
    )


def prime_ratio_terms(
    odd_only: bool, primes: PrimeStream | None = None
) -> PrimeRatioSource:
    """Source of x_i = ln(p_i/(p_i - 1)); with odd_only the indices shift so
    term j corresponds to p_{j+1} (first term ln(3/2))."""
    return PrimeRatioSource(odd_only, primes)
