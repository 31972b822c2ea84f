"""Canonical finite abelian groups.

A finite abelian group decomposes uniquely as a direct sum of cyclic groups
of prime power order.  ``AbelianGroup`` stores that primary decomposition as
an ordered map  prime -> ascending list of exponents,  so two values compare
equal exactly when the groups are isomorphic.

>>> g = parse_group("C2 x C4 x C9")
>>> g.factors
((2, (1, 2)), (3, (2,)))
>>> order(g)
36
>>> format_group(g)
'C2 x C4 x C9'

``SymbolicGroup`` is the companion representation for groups of the shape
C2^n x (product of distinct odd primes), which can involve so many prime
factors that expanding them is not an option.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import prod

from .errors import GroupParseError

__all__ = [
    "AbelianGroup",
    "SymbolicGroup",
    "TRIVIAL",
    "order",
    "direct_product",
    "invariant_factors",
    "parse_group",
    "format_group",
    "cyclic",
]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _is_prime(n: int) -> bool:
    """Deterministic primality test (Miller-Rabin, valid far past 10**18)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 by trial division, as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                n //= p
                out[p] = out.get(p, 0) + 1
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class AbelianGroup:
    """Primary decomposition: ((p, (e1 <= e2 <= ...)), ...) with p ascending.

    The empty tuple is the trivial group.  Instances are immutable, hashable
    and canonical, so ``==`` is isomorphism.
    """

    factors: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        last_p = 1
        for p, part in self.factors:
            if p <= last_p:
                raise ValueError(f"primes not strictly increasing: {self.factors}")
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if not part:
                raise ValueError(f"empty partition for prime {p}")
            if any(e < 1 for e in part) or list(part) != sorted(part):
                raise ValueError(f"partition for {p} must be ascending, entries >= 1: {part}")
            last_p = p

    @classmethod
    def from_primary(cls, parts: dict[int, list[int] | tuple[int, ...]]) -> "AbelianGroup":
        """Build the canonical group from a {prime: exponent list} mapping."""
        factors = tuple(
            (p, tuple(sorted(parts[p]))) for p in sorted(parts) if parts[p]
        )
        return cls(factors)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def partition(self, p: int) -> tuple[int, ...]:
        for q, part in self.factors:
            if q == p:
                return part
        return ()

    @property
    def rank(self) -> int:
        """Total number of cyclic factors in the primary decomposition."""
        return sum(len(part) for _, part in self.factors)

    @property
    def is_trivial(self) -> bool:
        return not self.factors

    def __str__(self) -> str:
        return format_group(self)


TRIVIAL = AbelianGroup()


def cyclic(n: int) -> AbelianGroup:
    """The cyclic group C_n (n >= 1)."""
    if n < 1:
        raise ValueError("cyclic group order must be >= 1")
    return AbelianGroup.from_primary({p: [e] for p, e in factorize(n).items()})


def order(g: AbelianGroup) -> int:
    """|G| = product of p**(sum of exponents); 1 for the trivial group."""
    return prod(p ** sum(part) for p, part in g.factors)


def direct_product(g1: AbelianGroup, g2: AbelianGroup) -> AbelianGroup:
    """Direct product, re-canonicalized (per-prime partitions merged)."""
    parts: dict[int, list[int]] = {}
    for g in (g1, g2):
        for p, part in g.factors:
            parts.setdefault(p, []).extend(part)
    return AbelianGroup.from_primary(parts)


def invariant_factors(g: AbelianGroup) -> list[int]:
    """The chain d1 | d2 | ... | dk with G isomorphic to C_d1 x ... x C_dk.

    Level by level from the top: each invariant factor is the product of the
    largest remaining prime power of every prime.

    >>> invariant_factors(parse_group("C2 x C4 x C9"))
    [2, 36]
    """
    depth = max((len(part) for _, part in g.factors), default=0)
    out = []
    for level in range(depth):
        d = prod(
            p ** part[-1 - level] for p, part in g.factors if level < len(part)
        )
        out.append(d)
    out.reverse()
    return out


_FACTOR_RE = re.compile(r"C(\d+)(?:\^(\d+))?$")


def parse_group(text: str) -> AbelianGroup:
    """Parse a group literal:  Group := Factor ("x" Factor)*,  Factor := C<m>[^<k>].

    Whitespace is ignored.  Composite bases are split into prime powers, so
    "C12" means C4 x C3.  "C1" and the empty string denote the trivial group.

    >>> parse_group("C2^3") == AbelianGroup.from_primary({2: [1, 1, 1]})
    True
    >>> parse_group("C12").factors
    ((2, (2,)), (3, (1,)))
    """
    compact = "".join(text.split())
    if compact == "":
        return TRIVIAL
    parts: dict[int, list[int]] = {}
    for chunk in compact.split("x"):
        m = _FACTOR_RE.match(chunk)
        if not m:
            raise GroupParseError(f"bad group factor {chunk!r} in {text!r}")
        base = int(m.group(1))
        mult = int(m.group(2)) if m.group(2) else 1
        if base == 0:
            raise GroupParseError("factor base 0 is not a finite cyclic group")
        if m.group(2) is not None and mult == 0:
            raise GroupParseError("exponent 0 is rejected")
        if base == 1:
            continue
        for p, e in factorize(base).items():
            parts.setdefault(p, []).extend([e] * mult)
    return AbelianGroup.from_primary(parts)


def format_group(g: AbelianGroup) -> str:
    """Canonical literal: ascending primes, exponent lists expanded.

    Round-trips through parse_group.  The trivial group prints as "C1".
    """
    if g.is_trivial:
        return "C1"
    return " x ".join(
        f"C{p ** e}" for p, part in g.factors for e in part
    )


def _ranges_from_indices(indices) -> tuple[tuple[int, int], ...]:
    """Run-length encode a sorted iterable of distinct ints into (lo, hi) runs."""
    runs: list[tuple[int, int]] = []
    for i in indices:
        if runs and i == runs[-1][1] + 1:
            runs[-1] = (runs[-1][0], i)
        elif runs and i <= runs[-1][1]:
            raise ValueError("indices must be strictly increasing")
        else:
            runs.append((i, i))
    return tuple(runs)


@dataclass(frozen=True)
class SymbolicGroup:
    """C2^two_rank x (product of C_p over the odd primes at the given indices).

    ``odd_prime_ranges`` run-length encodes a set of 1-based indices into the
    prime sequence (p1 = 2), each index >= 2 so every referenced prime is odd.
    The group order is never materialized; index sets in the hundreds of
    thousands are routine.
    """

    two_rank: int = 0
    odd_prime_ranges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.two_rank < 0:
            raise ValueError("two_rank must be >= 0")
        last = 1
        for lo, hi in self.odd_prime_ranges:
            if lo <= last or hi < lo:
                raise ValueError(f"bad index ranges {self.odd_prime_ranges}")
            last = hi

    @classmethod
    def from_indices(cls, two_rank: int, indices) -> "SymbolicGroup":
        return cls(two_rank, _ranges_from_indices(indices))

    @property
    def index_count(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.odd_prime_ranges)

    def iter_indices(self):
        for lo, hi in self.odd_prime_ranges:
            yield from range(lo, hi + 1)

    @property
    def max_index(self) -> int:
        return self.odd_prime_ranges[-1][1] if self.odd_prime_ranges else 0

    def materialize(self, primes, cap: int = 10_000) -> AbelianGroup:
        """Expand to an AbelianGroup; refuses above ``cap`` prime indices."""
        n = self.index_count
        if n > cap:
            raise ValueError(
                f"refusing to materialize {n} prime factors (cap {cap})"
            )
        parts: dict[int, list[int]] = {}
        if self.two_rank:
            parts[2] = [1] * self.two_rank
        for i in self.iter_indices():
            parts[primes.nth_prime(i)] = [1]
        return AbelianGroup.from_primary(parts)

    def describe(self, max_runs: int = 6) -> str:
        """Short human-readable rendering, e.g. 'C2^3 x odd primes #2-#451'."""
        bits = []
        if self.two_rank == 1:
            bits.append("C2")
        elif self.two_rank > 1:
            bits.append(f"C2^{self.two_rank}")
        if self.odd_prime_ranges:
            runs = [
                f"#{lo}" if lo == hi else f"#{lo}-#{hi}"
                for lo, hi in self.odd_prime_ranges[:max_runs]
            ]
            more = len(self.odd_prime_ranges) - max_runs
            if more > 0:
                runs.append(f"... {more} more runs")
            bits.append(
                f"odd primes {', '.join(runs)} ({self.index_count} primes)"
            )
        return " x ".join(bits) if bits else "C1"
