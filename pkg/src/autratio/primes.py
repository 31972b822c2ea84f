"""Prime generation sized for greedy log-sum budgets.

A shared, extendable segmented sieve supplies the indexed prime sequence
p1 < p2 < ... (1-based, p1 = 2).  ``estimate_sieve_limit`` pre-sizes the
sieve for a requested sum of ln(p/(p-1)) over odd primes; the estimate is
deliberately conservative and nothing downstream depends on it for
correctness, only for avoiding repeated re-sieving.
"""

from __future__ import annotations

import math
import os
import threading

import numpy as np

from .errors import SieveCapacityError

__all__ = [
    "PrimeStream",
    "shared_stream",
    "nth_prime",
    "estimate_sieve_limit",
    "DEFAULT_CEILING",
    "MERTENS",
    "EULER_GAMMA",
]

MERTENS = 0.2614972128476428
EULER_GAMMA = 0.5772156649015329
DEFAULT_CEILING = 10**8
_SEGMENT = 1 << 22


def _hard_ceiling(ceiling: int | None) -> int:
    if ceiling is not None:
        return int(ceiling)
    return int(os.environ.get("AUTRATIO_SIEVE_CEILING", DEFAULT_CEILING))


def _simple_sieve(limit: int) -> np.ndarray:
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


class PrimeStream:
    """All primes up to a growing sieve limit, index base 1 (p1 = 2).

    Reads are lock-free on the immutable prime array; extension is
    serialized, so concurrent callers may share one stream.
    """

    def __init__(self, ceiling: int | None = None):
        self.ceiling = _hard_ceiling(ceiling)
        self._lock = threading.Lock()
        self._limit = 1 << 16
        self._primes = _simple_sieve(self._limit)

    @property
    def limit(self) -> int:
        return self._limit

    @property
    def count(self) -> int:
        return len(self._primes)

    def extend_to(self, limit: int) -> None:
        """Grow the sieve to cover all primes <= limit (capped at the ceiling)."""
        limit = min(int(limit), self.ceiling)
        if limit <= self._limit:
            return
        with self._lock:
            if limit <= self._limit:
                return
            base = self._primes[self._primes <= math.isqrt(limit)]
            if base[-1] < math.isqrt(limit):
                # sqrt(limit) outgrew the current sieve; rebuild the base first
                base = _simple_sieve(math.isqrt(limit))
            chunks = [self._primes]
            lo = self._limit + 1
            while lo <= limit:
                hi = min(lo + _SEGMENT - 1, limit)
                flags = np.ones(hi - lo + 1, dtype=bool)
                for p in base[1:]:  # skip 2; evens handled by stride start
                    p = int(p)
                    start = max(p * p, ((lo + p - 1) // p) * p)
                    if start > hi:
                        continue
                    flags[start - lo :: p] = False
                p = 2
                start = max(4, ((lo + 1) // 2) * 2)
                if start <= hi:
                    flags[start - lo :: 2] = False
                chunks.append((np.flatnonzero(flags) + lo).astype(np.int64))
                lo = hi + 1
            self._primes = np.concatenate(chunks)
            self._limit = limit

    def _ensure_count(self, n: int) -> None:
        while self.count < n:
            if self._limit >= self.ceiling:
                raise SieveCapacityError(
                    f"need {n} primes but only {self.count} exist below the "
                    f"sieve ceiling {self.ceiling}"
                )
            # Rosser-style upper bound for p_n, then padded
            guess = max(
                2 * self._limit,
                int(n * (math.log(max(n, 6)) + math.log(math.log(max(n, 6))) + 1)),
            )
            self.extend_to(guess)

    def nth_prime(self, i: int) -> int:
        """The i-th prime (i >= 1), extending the sieve on demand."""
        if i < 1:
            raise ValueError("prime index must be >= 1")
        self._ensure_count(i)
        return int(self._primes[i - 1])

    def primes_slice(self, i0: int, i1: int) -> np.ndarray:
        """Primes p_{i0}..p_{i1} inclusive (1-based) as an int64 array."""
        if i0 < 1 or i1 < i0:
            raise ValueError(f"bad prime index range [{i0}, {i1}]")
        self._ensure_count(i1)
        return self._primes[i0 - 1 : i1]

    def count_under_ceiling(self) -> int:
        """Number of primes available once fully sieved to the ceiling."""
        self.extend_to(self.ceiling)
        return self.count


_shared: PrimeStream | None = None
_shared_lock = threading.Lock()


def shared_stream() -> PrimeStream:
    """Process-wide default stream (created on first use)."""
    global _shared
    if _shared is None:
        with _shared_lock:
            if _shared is None:
                _shared = PrimeStream()
    return _shared


def nth_prime(i: int, stream: PrimeStream | None = None) -> int:
    return (stream or shared_stream()).nth_prime(i)


def estimate_sieve_limit(
    target_log_sum: float, ceiling: int | None = None
) -> int:
    """Sieve limit x whose odd primes should carry at least ``target_log_sum``
    of ln(p/(p-1)) budget.

    Primary sizing inverts  lnln x + M - ln 2 >= target + 0.5  (Mertens
    constant M, fixed safety margin 0.5).  That is loose by design; when it
    overshoots the hard ceiling, a tighter Euler-gamma-based bound with a
    0.1 margin is tried before giving up.  Raises SieveCapacityError when
    the target is unreachable under the ceiling.
    """
    if target_log_sum < 0:
        raise ValueError("target_log_sum must be >= 0")
    cap = _hard_ceiling(ceiling)

    def invert(margin: float, constant: float) -> float:
        inner = target_log_sum + margin + math.log(2) - constant
        if inner > 6.0:  # exp(exp(6)) ~ 1e175, past any plausible ceiling
            return math.inf
        return math.exp(math.exp(inner))

    x = invert(0.5, MERTENS)
    if x <= cap:
        # a zero budget means "any limit works"; hand back a small default
        return 1000 if target_log_sum == 0 else max(16, math.ceil(x))
    x = invert(0.1, EULER_GAMMA)
    if x <= cap:
        return max(16, math.ceil(x))
    raise SieveCapacityError(
        f"insufficient sieve capacity: log-sum target {target_log_sum:.6g} "
        f"needs a sieve past the ceiling {cap}"
    )
