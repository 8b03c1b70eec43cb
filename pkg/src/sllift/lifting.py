"""Constructive lifting of SL_n(Z/qZ) elements to SL_n(Z).

Pipeline: lift the first n-1 rows so they extend to an integer unimodular
matrix (randomized search with a CRT-based deterministic fallback), complete
with a short last row via extended gcd plus size reduction, then correct the
last row modulo q using row-combination coefficients solved mod q.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce

from . import intmat
from .errors import InvalidInput, NotExtendable, NotExtendableModQ, SearchExhausted
from .intmat import IntMatrix
from .residue import crt, ext_gcd, signed, small_primes

# Multiplier C in the entry bound C*log2(q+2) for the row-lift search.
DEFAULT_GROWTH_C = 16

_TRIES_PER_LEVEL = 16
_FALLBACK_TRIES = 64
_FALLBACK_CUTOFFS = (16, 64, 256)


@dataclass(frozen=True)
class LiftCertificate:
    """A verified lift: gamma = x mod q, det(gamma) = 1, with norm stats."""

    gamma: IntMatrix
    q: int
    n: int
    first_rows_max: int
    last_row_max: int
    trials_used: int
    seed: int


def is_extendable(b: IntMatrix) -> bool:
    """Whether b is the top of some SL_n(Z) matrix (gcd of maximal minors 1)."""
    return reduce(math.gcd, intmat.maximal_minors(b)) == 1


def _signed_rows(a: IntMatrix, q: int):
    return [[signed(x, q) for x in row] for row in a.rows]


def _gcd_minors_with(rows, q: int) -> int:
    g = reduce(math.gcd, intmat.maximal_minors(IntMatrix(rows)))
    return math.gcd(g, q)


def _lift_rows_searched(
    a: IntMatrix, q: int, seed: int, growth_c: float
) -> tuple[IntMatrix, int]:
    """Row lift returning (B, trials_used)."""
    if q < 1:
        raise InvalidInput(f"need q >= 1, got {q}")
    base = _signed_rows(a, q)
    if _gcd_minors_with(base, q) != 1:
        raise NotExtendableModQ(f"row minors share a factor with q={q}")
    rows = len(base)
    cols = len(base[0])
    trials = 0

    def candidate(x_rows):
        return IntMatrix(
            [[base[i][j] + q * x_rows[i][j] for j in range(cols)] for i in range(rows)]
        )

    # zero offset first: the common case needs no perturbation at all
    trials += 1
    b = candidate([[0] * cols for _ in range(rows)])
    if is_extendable(b):
        return b, trials

    rng = random.Random(seed)
    bound = max(2, math.ceil(growth_c * math.log2(q + 2)))
    level = 2
    while True:
        for _ in range(_TRIES_PER_LEVEL):
            trials += 1
            x = [[rng.randrange(level) for _ in range(cols)] for _ in range(rows)]
            b = candidate(x)
            if is_extendable(b):
                return b, trials
        if level >= bound:
            break
        level = min(2 * level, bound)

    # Deterministic fallback: make the rows congruent to the top of the
    # identity modulo every prime p < K not dividing q (one CRT per entry),
    # which forces the leading minor to be a unit mod those primes, then
    # retry the random search in steps of P*q against the remaining primes.
    for cutoff in _FALLBACK_CUTOFFS:
        primes = [p for p in small_primes(cutoff) if q % p != 0]
        if not primes:
            continue
        big_p = math.prod(primes)
        shifted = []
        for i in range(rows):
            row = []
            for j in range(cols):
                target = 1 if i == j else 0
                congruences = [
                    ((target - base[i][j]) * pow(q, -1, p) % p, p) for p in primes
                ]
                row.append(base[i][j] + q * crt(congruences).value)
            shifted.append(row)
        step = big_p * q
        small_bound = max(2, math.ceil(growth_c * math.log2(q + 2)))
        for _ in range(_FALLBACK_TRIES):
            trials += 1
            b = IntMatrix(
                [
                    [shifted[i][j] + step * rng.randrange(small_bound) for j in range(cols)]
                    for i in range(rows)
                ]
            )
            if is_extendable(b):
                return b, trials
    raise SearchExhausted(f"no extendable row lift found for q={q} (trials={trials})")


def lift_rows(a: IntMatrix, q: int, seed: int = 0, growth_c: float = DEFAULT_GROWTH_C) -> IntMatrix:
    """Lift (n-1) x n rows mod q to integer rows extending to SL_n(Z).

    Returns B = A0 + qX with A0 the entrywise signed lift; the search tries
    X = 0, then uniform X with entries in [0, M) for M doubling up to
    growth_c * log2(q+2), then the CRT fallback.
    """
    b, _ = _lift_rows_searched(a, q, seed, growth_c)
    return b


def complete_rows(b: IntMatrix) -> tuple[int, ...]:
    """Last row v with det(stack(B, v)) = 1 and max|v| <= (n/2) max|B| + 1.

    Solves <v0, minors(B)> = 1 by iterated extended gcd, then size-reduces
    v0 against the rows of B.
    """
    c = intmat.maximal_minors(b)
    g, coeffs = c[0], [1]
    for ci in c[1:]:
        g, s, t = ext_gcd(g, ci)
        coeffs = [s * x for x in coeffs]
        coeffs.append(t)
    if g != 1:
        raise NotExtendable(f"gcd of maximal minors is {g}")
    v = intmat.size_reduce(coeffs, b)
    if sum(x * y for x, y in zip(v, c)) != 1:
        raise AssertionError("completion lost the determinant")
    return v


def lift(x: IntMatrix, q: int, seed: int = 0, growth_c: float = DEFAULT_GROWTH_C) -> LiftCertificate:
    """Lift x in SL_n(Z/qZ) to a certified gamma in SL_n(Z).

    First n-1 rows come from lift_rows, the completion from complete_rows,
    and the last row is corrected modulo q by adding signed multiples of the
    lifted rows; the row-combination coefficients are solved mod q and their
    last coordinate always vanishes for valid inputs.
    """
    n = x.nrows
    if n < 2 or x.ncols != n:
        raise InvalidInput(f"need a square matrix with n >= 2, got {x.nrows}x{x.ncols}")
    if q < 1:
        raise InvalidInput(f"need q >= 1, got {q}")
    if q == 1:
        gamma = IntMatrix.identity(n)
        return LiftCertificate(gamma, q, n, 1, 1, 0, seed)
    if intmat.det(x) % q != 1 % q:
        raise InvalidInput(f"det is {intmat.det(x) % q} mod {q}, need 1")

    top = IntMatrix(x.rows[: n - 1])
    b, trials = _lift_rows_searched(top, q, seed, growth_c)
    v = complete_rows(b)

    w = tuple((x.rows[n - 1][j] - v[j]) % q for j in range(n))
    alpha = intmat.solve_mod(x.reduce_mod(q), w, q)
    if alpha[n - 1] % q != 0:
        raise AssertionError("last solve coefficient should vanish")
    last = list(v)
    for i in range(n - 1):
        coeff = signed(alpha[i], q)
        if coeff:
            for j in range(n):
                last[j] += coeff * b.rows[i][j]

    gamma = b.with_row(last)
    if intmat.det(gamma) != 1:
        raise AssertionError("lift lost the determinant")
    for i in range(n):
        for j in range(n):
            if (gamma.rows[i][j] - x.rows[i][j]) % q != 0:
                raise AssertionError("lift broke the congruence")
    first_max = max(abs(e) for row in b.rows for e in row)
    last_max = max(abs(e) for e in last)
    return LiftCertificate(gamma, q, n, first_max, last_max, trials, seed)


def random_sl_matrix(n: int, q: int, seed: int) -> IntMatrix:
    """A pseudorandom element of SL_n(Z/qZ) built from elementary operations."""
    if n < 2 or q < 1:
        raise InvalidInput(f"need n >= 2 and q >= 1, got n={n}, q={q}")
    rng = random.Random(seed)
    m = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n * n):
        i, j = rng.sample(range(n), 2)
        c = rng.randrange(q)
        if rng.getrandbits(1):
            for k in range(n):
                m[i][k] = (m[i][k] + c * m[j][k]) % q
        else:
            for k in range(n):
                m[k][i] = (m[k][i] + c * m[k][j]) % q
    return IntMatrix(m)
