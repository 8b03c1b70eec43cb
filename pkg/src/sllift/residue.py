"""Exact modular arithmetic: signed representatives, factorization, CRT,
and complete n-th root extraction for moduli with small prime factors.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _cartesian

from .errors import (
    FactorLimitExceeded,
    NotCoprime,
    NotUnit,
    PrimeTooLarge,
    TooManyRoots,
)

# Largest prime for which an exhaustive unit scan is allowed; larger primes
# raise PrimeTooLarge instead of silently sampling.
PRIME_SCAN_BOUND = 10**6

_TRIAL_BOUND = 10**6
_RHO_SEED = 0x5EED
_RHO_ROUNDS = 64


@dataclass(frozen=True)
class Residue:
    """An element of Z/mZ stored by its canonical representative in [0, m)."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be >= 1, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def signed(self) -> int:
        return signed(self.value, self.modulus)

    def abs(self) -> int:
        return abs(signed(self.value, self.modulus))

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1

    def inverse(self) -> "Residue":
        if not self.is_unit():
            raise NotUnit(f"{self.value} is not a unit mod {self.modulus}")
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __mul__(self, other: "Residue") -> "Residue":
        if self.modulus != other.modulus:
            raise ValueError("mixed moduli")
        return Residue(self.value * other.value, self.modulus)

    def __pow__(self, n: int) -> "Residue":
        return Residue(pow(self.value, n, self.modulus), self.modulus)


def signed(value: int, modulus: int) -> int:
    """Representative of value mod modulus with minimal absolute value.

    The tie at modulus/2 (even modulus) resolves to +modulus/2.
    """
    r = value % modulus
    if 2 * r > modulus:
        r -= modulus
    return r


def signed_lift(a: Residue) -> int:
    return a.signed()


def abs_value(a: Residue) -> int:
    return a.abs()


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with g = gcd(a, b) >= 0 and s*a + t*b = g."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3 * 10^24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
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


def small_primes(limit: int) -> list[int]:
    """All primes strictly below limit (simple sieve)."""
    if limit <= 2:
        return []
    flags = bytearray([1]) * limit
    flags[0] = flags[1] = 0
    for p in range(2, math.isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit, p)))
    return [i for i in range(limit) if flags[i]]


def _rho_factor(n: int, rng: random.Random) -> int:
    """Brent-cycle Pollard rho; returns a nontrivial factor of composite n."""
    while True:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m >= 1 as ((p1, e1), ...) with p1 < p2 < ...

    Trial division below 10^6, then a deterministic-seeded Pollard rho for
    any surviving cofactor.  Raises FactorLimitExceeded if a composite
    cofactor resists the rho round budget.
    """
    if m < 1:
        raise ValueError(f"need m >= 1, got {m}")
    out: dict[int, int] = {}
    n = m
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    # wheel over 6k +- 1 up to the trial bound
    f = 7
    step = 4
    while f * f <= n and f < _TRIAL_BOUND:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n > 1:
        if f * f > n or is_prime(n):
            out[n] = out.get(n, 0) + 1
        else:
            rng = random.Random(_RHO_SEED ^ n)
            stack = [n]
            rounds = 0
            while stack:
                c = stack.pop()
                if is_prime(c):
                    out[c] = out.get(c, 0) + 1
                    continue
                rounds += 1
                if rounds > _RHO_ROUNDS:
                    raise FactorLimitExceeded(f"cofactor {c} of {m}")
                d = _rho_factor(c, rng)
                stack.append(d)
                stack.append(c // d)
    return tuple(sorted(out.items()))


def crt(congruences) -> Residue:
    """Combine [(r1, m1), (r2, m2), ...] into the residue mod m1*m2*...

    Moduli must be pairwise coprime; raises NotCoprime otherwise.
    """
    items = list(congruences)
    if not items:
        return Residue(0, 1)
    x, m = items[0]
    x %= m
    for r, mi in items[1:]:
        g = math.gcd(m, mi)
        if g != 1:
            raise NotCoprime(f"moduli {m} and {mi} share factor {g}")
        # Garner step: adjust x by a multiple of m to hit r mod mi
        t = (r - x) * pow(m, -1, mi) % mi
        x += m * t
        m *= mi
    return Residue(x, m)


@lru_cache(maxsize=1 << 16)
def _unit_scan_roots(alpha_p: int, n: int, p: int) -> tuple[int, ...]:
    """All beta in (Z/pZ)^x with beta^n = alpha_p, by exhaustive scan."""
    return tuple(b for b in range(1, p) if pow(b, n, p) == alpha_p)


@lru_cache(maxsize=1 << 16)
def _prime_power_roots(alpha: int, n: int, p: int, e: int) -> tuple[int, ...]:
    """All n-th roots of alpha among units mod p^e.

    Roots mod p come from the exhaustive unit scan; each root mod p^j is
    extended over the p candidates mod p^(j+1).  Every solution mod p^(j+1)
    reduces to one mod p^j, so the tree is complete and the result exact.
    """
    if p > PRIME_SCAN_BOUND:
        raise PrimeTooLarge(f"prime {p} exceeds scan bound {PRIME_SCAN_BOUND}")
    cur = list(_unit_scan_roots(alpha % p, n, p))
    mod = p
    for _ in range(e - 1):
        nxt_mod = mod * p
        a = alpha % nxt_mod
        cur = [
            b + t * mod
            for b in cur
            for t in range(p)
            if pow(b + t * mod, n, nxt_mod) == a
        ]
        mod = nxt_mod
    return tuple(sorted(cur))


def nth_roots(a: Residue, n: int, limit: int | None = None) -> tuple[Residue, ...]:
    """The complete set of beta in (Z/mZ)^x with beta^n = a, sorted by value.

    Computed per prime power of m and combined by CRT; exact, never sampled.
    Requires gcd(a, m) = 1 and every prime of m below PRIME_SCAN_BOUND.
    With limit set, raises TooManyRoots once the root count would pass it.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    m = a.modulus
    if math.gcd(a.value, m) != 1:
        raise NotUnit(f"{a.value} is not a unit mod {m}")
    if n == 1 or m == 1:
        return (a,)
    components = []
    count = 1
    for p, e in factorize(m):
        roots = _prime_power_roots(a.value, n, p, e)
        if not roots:
            return ()
        count *= len(roots)
        if limit is not None and count > limit:
            raise TooManyRoots(f"root count {count} exceeds cap {limit}")
        components.append((p**e, roots))
    # precomputed CRT idempotents: E_i = 1 mod p_i^e_i, 0 mod the rest
    idempotents = []
    for pe, _ in components:
        rest = m // pe
        idempotents.append(rest * pow(rest, -1, pe) % m)
    values = set()
    for combo in _cartesian(*(roots for _, roots in components)):
        values.add(sum(r * e for r, e in zip(combo, idempotents)) % m)
    return tuple(Residue(v, m) for v in sorted(values))


def is_nth_power_residue(a: Residue, n: int) -> bool:
    """Whether a is in (Z/mZ)^xn, decided per prime power of m.

    For odd p the cyclic-group criterion a^(phi/g) = 1 with g = gcd(n, phi)
    applies; for p = 2 the lifting tree decides existence directly.
    """
    m = a.modulus
    if math.gcd(a.value, m) != 1:
        raise NotUnit(f"{a.value} is not a unit mod {m}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n == 1 or m == 1:
        return True
    for p, e in factorize(m):
        pe = p**e
        if p == 2:
            if not _prime_power_roots(a.value % pe, n, 2, e):
                return False
        else:
            phi = pe // p * (p - 1)
            g = math.gcd(n, phi)
            if pow(a.value, phi // g, pe) != 1:
                return False
    return True
