"""Exact integer arithmetic: factorization, multiplicative functions, primes.

Everything here is deterministic.  Factoring uses trial division by all
primes below 10**6 (batched behind precomputed prime-product gcds, so the
common case costs a few hundred bigint gcds) followed by Brent's variant of
Pollard rho with a fixed parameter sequence.  Primality is Miller-Rabin with
the deterministic 12-witness set below 2**64 and fixed prime witnesses above.

The quantities of interest downstream are the group orders q**m - 1 and
their derived multiplicative functions: omega (distinct prime count),
W = 2**omega (squarefree divisor count), phi and mu.  Exact rationals for
the sieve quantities delta and Delta are plain fractions.Fraction values;
`decimal_lower` / `decimal_upper` render them with directed rounding for
comparison against printed table digits.
"""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from pathlib import Path

ExactRational = Fraction

TRIAL_LIMIT = 10 ** 6
DEFAULT_FACTOR_BUDGET = 50_000_000  # Pollard rho iterations per factor() call


class FactorBudgetExceeded(RuntimeError):
    """A cofactor resisted factoring within the configured rho budget."""


# ---------------------------------------------------------------------------
# prime sieve

_sieve_primes: list[int] = []
_sieve_limit = 0


def primes_upto(limit: int) -> list[int]:
    """All primes <= limit, cached module-wide (sieve of Eratosthenes)."""
    global _sieve_primes, _sieve_limit
    if limit > _sieve_limit:
        sieve = bytearray([1]) * (limit + 1)
        sieve[0:2] = b"\x00\x00"
        for p in range(2, math.isqrt(limit) + 1):
            if sieve[p]:
                sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
        _sieve_primes = [i for i in range(limit + 1) for _ in range(sieve[i])]
        _sieve_limit = limit
    return [p for p in _sieve_primes if p <= limit]


def nth_primes(k: int) -> list[int]:
    """First k primes.  k up to the configured sieve range (>= 500 needed
    by the worst-case tables; the default limit covers ~78498)."""
    if k < 1:
        raise ValueError("k must be positive")
    if k > 78498:  # primes below TRIAL_LIMIT
        raise ValueError("k beyond configured sieve bound")
    if len(_sieve_primes) < k or _sieve_limit < 13:
        # p_k < k(ln k + ln ln k) for k >= 6; small k padded
        bound = 100 if k < 25 else int(k * (math.log(k) + math.log(math.log(k)))) + 10
        primes_upto(min(max(bound, 100), TRIAL_LIMIT))
    return _sieve_primes[:k]


# ---------------------------------------------------------------------------
# primality

_MR_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)


def is_probable_prime(n: int, rounds: int = 24) -> bool:
    """Miller-Rabin.  Deterministic below 2**64 (first-12-prime witness
    set); above that, the first `rounds` primes serve as witnesses, which
    keeps results reproducible."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    witnesses = _MR_WITNESSES_64 if n < 2 ** 64 else tuple(nth_primes(rounds))
    for a in witnesses:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


# ---------------------------------------------------------------------------
# factoring

_trial_chunks: list[tuple[list[int], int]] = []


def _get_trial_chunks() -> list[tuple[list[int], int]]:
    # products of ~512 primes each; gcd against a chunk product detects all
    # divisors in the chunk at once
    if not _trial_chunks:
        ps = primes_upto(TRIAL_LIMIT)
        for i in range(0, len(ps), 512):
            chunk = ps[i : i + 512]
            _trial_chunks.append((chunk, math.prod(chunk)))
    return _trial_chunks


def _perfect_power(n: int) -> tuple[int, int]:
    """Return (b, k) with b**k == n and k maximal, or (n, 1)."""
    for k in range(int(math.log2(n)), 1, -1):
        b = round(n ** (1.0 / k))
        for cand in (b - 1, b, b + 1):
            if cand > 1 and cand ** k == n:
                return cand, k
    return n, 1


def _brent_rho(n: int, budget: int) -> int:
    """Nontrivial factor of composite odd n.  Deterministic: constants
    c = 1, 2, 3, ... tried in order from x0 = 2, differences batched 128
    at a time before each gcd."""
    if n % 2 == 0:
        return 2
    total = 0
    for c in count(1):
        y, r, q, g = 2, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(128, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                total += min(128, r - k)
                if total > budget:
                    raise FactorBudgetExceeded(f"rho budget exhausted on {n}")
                g = math.gcd(q, n)
                k += 128
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
        # cycle collapsed for this c; retry with the next constant


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its complete prime factorization,
    factors sorted by prime."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        prod = 1
        prev = 1
        for p, e in self.factors:
            if p <= prev or e < 1:
                raise ValueError("factors must be sorted with exponents >= 1")
            prev = p
            prod *= p ** e
        if prod != self.value or self.value < 1:
            raise ValueError(f"factorization does not recompose to {self.value}")

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    def radical(self) -> int:
        return math.prod(self.primes)

    def radical_factored(self) -> "FactoredInteger":
        return FactoredInteger(self.radical(), tuple((p, 1) for p in self.primes))

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


def factored(n: int, factors) -> FactoredInteger:
    """Build a FactoredInteger from a known factor list (validated)."""
    return FactoredInteger(n, tuple(sorted((int(p), int(e)) for p, e in factors)))


def merge_factored(a: FactoredInteger, b: FactoredInteger) -> FactoredInteger:
    fac: dict[int, int] = dict(a.factors)
    for p, e in b.factors:
        fac[p] = fac.get(p, 0) + e
    return factored(a.value * b.value, fac.items())


def factor(n: int, *, cache: "FactorCache | None" = None,
           budget: int = DEFAULT_FACTOR_BUDGET) -> FactoredInteger:
    """Complete prime factorization of n >= 1."""
    if n < 1:
        raise ValueError("factor() needs a positive integer")
    if n == 1:
        return FactoredInteger(1, ())
    if cache is not None:
        hit = cache.get(n)
        if hit is not None:
            return factored(n, hit)

    fac: dict[int, int] = {}
    rem = n
    for chunk, prod in _get_trial_chunks():
        if rem == 1:
            break
        g = math.gcd(rem, prod)
        if g == 1:
            continue
        for p in chunk:
            if g % p == 0:
                e = 0
                while rem % p == 0:
                    rem //= p
                    e += 1
                fac[p] = e
                g //= p
                if g == 1:
                    break

    # remaining cofactor has all prime factors > TRIAL_LIMIT
    stack = [rem] if rem > 1 else []
    while stack:
        c = stack.pop()
        if is_probable_prime(c):
            fac[c] = fac.get(c, 0) + 1
            continue
        b, k = _perfect_power(c)
        if k > 1:
            stack.extend([b] * k)
            continue
        d = _brent_rho(c, budget)
        stack.append(d)
        stack.append(c // d)

    result = factored(n, fac.items())
    if cache is not None:
        cache.put(n, result.factors)
    return result


def _divisors_of(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def cyclotomic_value(d: int, q: int) -> int:
    """Phi_d(q), the d-th cyclotomic polynomial at q, via the Moebius
    product Phi_d(q) = prod_{e|d} (q^e - 1)^mu(d/e).  Exact division."""
    num = 1
    den = 1
    for e in _divisors_of(d):
        mu = moebius(factor(d // e))
        if mu == 1:
            num *= q ** e - 1
        elif mu == -1:
            den *= q ** e - 1
    assert num % den == 0
    return num // den


def factor_qm_minus_1(q: int, m: int, *, cache: "FactorCache | None" = None,
                      budget: int = DEFAULT_FACTOR_BUDGET) -> FactoredInteger:
    """Factor q**m - 1 through its cyclotomic splitting
    q^m - 1 = prod_{d|m} Phi_d(q); each part is much smaller than the
    whole, and parts recur across m (Phi_1(q) = q - 1 for every m)."""
    out = FactoredInteger(1, ())
    for d in _divisors_of(m):
        out = merge_factored(out, factor(cyclotomic_value(d, q), cache=cache, budget=budget))
    assert out.value == q ** m - 1
    return out


# ---------------------------------------------------------------------------
# multiplicative functions on factored integers

def omega(f: FactoredInteger) -> int:
    return len(f.factors)


def squarefree_divisor_count(f: FactoredInteger) -> int:
    """Number of squarefree divisors, 2**omega; the W of the main
    inequality."""
    return 1 << len(f.factors)


def euler_phi(f: FactoredInteger) -> int:
    out = 1
    for p, e in f.factors:
        out *= (p - 1) * p ** (e - 1)
    return out


def moebius(f: FactoredInteger) -> int:
    if any(e > 1 for _, e in f.factors):
        return 0
    return -1 if len(f.factors) % 2 else 1


def squarefree_divisors(f: FactoredInteger) -> list[FactoredInteger]:
    """All 2**omega squarefree divisors, sorted ascending by value."""
    divs = [FactoredInteger(1, ())]
    for p, _ in f.factors:
        divs += [merge_factored(d, FactoredInteger(p, ((p, 1),))) for d in divs]
    return sorted(divs, key=lambda d: d.value)


# ---------------------------------------------------------------------------
# integer roots and prime powers

def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) computed exactly (Newton on integers)."""
    if n < 0 or k < 1:
        raise ValueError("iroot needs n >= 0, k >= 1")
    if k == 1 or n < 2:
        return n
    x = 1 << -(-n.bit_length() // k)  # >= true root
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def prime_powers_upto(limit: int) -> list[int]:
    """All prime powers p^j <= limit (j >= 1), ascending."""
    if limit < 2:
        return []
    out = []
    for p in primes_upto(limit):
        v = p
        while v <= limit:
            out.append(v)
            v *= p
    return sorted(out)


# ---------------------------------------------------------------------------
# exact decimal rendering for table comparisons

def decimal_lower(x: Fraction, places: int = 10) -> str:
    """x rounded toward zero to `places` decimal digits.  The reference
    tables' "delta >" columns truncate, so each stored value is a lower
    bound exactly when it is <= this rendering."""
    if x < 0:
        return "-" + decimal_upper(-x, places)
    shift = 10 ** places
    whole, frac = divmod(x.numerator * shift // x.denominator, shift)
    return f"{whole}.{frac:0{places}d}"


def decimal_upper(x: Fraction, places: int = 10) -> str:
    """x rounded away from zero to `places` digits (upper bound rendering,
    the "Delta <" columns)."""
    if x < 0:
        return "-" + decimal_lower(-x, places)
    shift = 10 ** places
    scaled = -(-x.numerator * shift // x.denominator)  # ceil
    whole, frac = divmod(scaled, shift)
    return f"{whole}.{frac:0{places}d}"


# ---------------------------------------------------------------------------
# factorization cache

class FactorCache:
    """JSON file mapping decimal integer strings to factor lists.  Loaded
    lazily; writes go through a temp file + os.replace so a crash cannot
    leave a torn file."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self._data: dict[str, list[list[int]]] | None = None
        self._dirty = False

    def _load(self) -> dict[str, list[list[int]]]:
        if self._data is None:
            try:
                with open(self.path) as fh:
                    self._data = json.load(fh)
            except (OSError, ValueError):
                self._data = {}
        return self._data

    def get(self, n: int):
        entry = self._load().get(str(n))
        if entry is None:
            return None
        return tuple((p, e) for p, e in entry)

    def put(self, n: int, factors) -> None:
        self._load()[str(n)] = [[p, e] for p, e in factors]
        self._dirty = True

    def __len__(self) -> int:
        return len(self._load())

    def save(self) -> None:
        if not self._dirty or self._data is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                json.dump(self._data, fh)
            os.replace(tmp, self.path)
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)
        self._dirty = False
