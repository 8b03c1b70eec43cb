"""Distances on affine and projective space mod q under SL_n(Z).

Points are primitive vectors mod q (affine) or their unit-scaling classes
(projective); the distance between two points is the smallest max norm of an
integer unimodular matrix carrying one to the other.  All scans enumerate
matrices shell by shell (exact max norm m = 1, 2, ...) so the first hit is
the minimum.  Norms are stored exactly; logarithms are presentation only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput
from .oracle import EnumSpec, iter_sl

_SHELL_CACHE: dict[tuple[int, int], tuple] = {}


def units_mod(q: int) -> tuple[int, ...]:
    if q == 1:
        return (0,)
    return tuple(u for u in range(1, q) if math.gcd(u, q) == 1)


def canonical_rep(coords, q: int) -> tuple[int, ...]:
    """Lexicographically least element of the unit-scaling orbit of coords."""
    coords = tuple(c % q for c in coords)
    return min(tuple(u * c % q for c in coords) for u in units_mod(q))


@dataclass(frozen=True)
class PointA:
    """Primitive vector mod q (affine point), stored as canonical residues."""

    q: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.q < 1:
            raise InvalidInput(f"need q >= 1, got {self.q}")
        coords = tuple(int(c) % self.q for c in self.coords)
        if math.gcd(self.q, *coords) != 1:
            raise InvalidInput(f"{coords} is not primitive mod {self.q}")
        object.__setattr__(self, "coords", coords)


@dataclass(frozen=True)
class PointP:
    """Projective point mod q: the unit-scaling orbit, stored canonically."""

    q: int
    coords: tuple[int, ...]

    def __post_init__(self):
        if self.q < 1:
            raise InvalidInput(f"need q >= 1, got {self.q}")
        coords = tuple(int(c) % self.q for c in self.coords)
        if math.gcd(self.q, *coords) != 1:
            raise InvalidInput(f"{coords} is not primitive mod {self.q}")
        object.__setattr__(self, "coords", canonical_rep(coords, self.q))


@dataclass(frozen=True)
class DistanceRecord:
    """Outcome of a minimal-norm scan between two points.

    min_max_norm is None when no witness exists within searched_up_to;
    log_q_exponent is log(min_max_norm) / log(q), derived, never asserted.
    """

    x: tuple[int, ...]
    y: tuple[int, ...]
    q: int
    min_max_norm: int | None
    witness: tuple[tuple[int, ...], ...] | None
    searched_up_to: int
    log_q_exponent: float | None


def _shell(n: int, m: int) -> tuple:
    """All SL_n(Z) matrices with max norm exactly m (cached)."""
    key = (n, m)
    if key not in _SHELL_CACHE:
        spec = EnumSpec(n=n, caps=(m,) * n)
        _SHELL_CACHE[key] = tuple(
            g for g in iter_sl(spec) if max(abs(e) for r in g for e in r) == m
        )
    return _SHELL_CACHE[key]


def _apply(gamma, coords, q):
    return tuple(sum(row[j] * coords[j] for j in range(len(coords))) % q for row in gamma)


def _record(x, y, q, hit, t_max):
    if hit is None:
        return DistanceRecord(x, y, q, None, None, t_max, None)
    norm, gamma = hit
    exponent = 0.0 if norm == 1 else math.log(norm) / math.log(q)
    return DistanceRecord(x, y, q, norm, gamma, t_max, exponent)


def dist_affine(x: PointA, y: PointA, t_max: int) -> DistanceRecord:
    """Minimal max norm of gamma in SL_n(Z) with gamma * x = y mod q."""
    if x.q != y.q or len(x.coords) != len(y.coords):
        raise InvalidInput("points live in different spaces")
    n = len(x.coords)
    hit = None
    for m in range(1, t_max + 1):
        for gamma in _shell(n, m):
            if _apply(gamma, x.coords, x.q) == y.coords:
                hit = (m, gamma)
                break
        if hit:
            break
    return _record(x.coords, y.coords, x.q, hit, t_max)


def dist_projective(x: PointP, y: PointP, t_max: int) -> DistanceRecord:
    """Minimal max norm of gamma with gamma * x = u * y mod q for a unit u."""
    if x.q != y.q or len(x.coords) != len(y.coords):
        raise InvalidInput("points live in different spaces")
    n = len(x.coords)
    q = x.q
    hit = None
    for m in range(1, t_max + 1):
        for gamma in _shell(n, m):
            if canonical_rep(_apply(gamma, x.coords, q), q) == y.coords:
                hit = (m, gamma)
                break
        if hit:
            break
    return _record(x.coords, y.coords, q, hit, t_max)


def affine_points(n: int, q: int) -> list[tuple[int, ...]]:
    """All primitive vectors mod q, lexicographically ordered."""
    out = []
    stack = [()]
    for _ in range(n):
        stack = [t + (c,) for t in stack for c in range(q)]
    for t in stack:
        if math.gcd(q, *t) == 1:
            out.append(t)
    return out


def projective_points(n: int, q: int) -> list[tuple[int, ...]]:
    """Canonical representatives of the unit-scaling classes, ordered."""
    return sorted({canonical_rep(t, q) for t in affine_points(n, q)})


def _all_distances(space: str, n: int, q: int, t_max: int):
    """min norms from every source to every target, by one shell sweep per source."""
    projective = space == "P"
    points = projective_points(n, q) if projective else affine_points(n, q)
    index = {p: i for i, p in enumerate(points)}
    norms = {}
    for src in points:
        found: dict[tuple[int, ...], int] = {}
        for m in range(1, t_max + 1):
            for gamma in _shell(n, m):
                image = _apply(gamma, src, q)
                if projective:
                    image = canonical_rep(image, q)
                if image not in found:
                    found[image] = m
            if len(found) == len(points):
                break
        if len(found) < len(points):
            missing = next(p for p in points if p not in found)
            raise BudgetExceeded(
                f"pair ({src}, {missing}) unresolved within norm {t_max}"
            )
        for dst in points:
            norms[(src, dst)] = found[dst]
    return points, norms


def diameter_profile(space: str, n: int, q: int, t_max: int) -> dict:
    """Exact max and quantiles of the pairwise min norms, with exponents.

    Quantile p is the smallest norm covering at least p of all ordered
    pairs (source = target pairs included, at norm 1).
    """
    if space not in ("A", "P"):
        raise InvalidInput("space must be 'A' or 'P'")
    if q < 2:
        raise InvalidInput(f"need q >= 2, got {q}")
    points, norms = _all_distances(space, n, q, t_max)
    values = sorted(norms.values())
    total = len(values)

    def quantile(p: float) -> int:
        return values[min(total - 1, max(0, math.ceil(p * total) - 1))]

    diameter = values[-1]
    quants = {"50": quantile(0.50), "90": quantile(0.90), "99": quantile(0.99)}
    log_q = math.log(q)

    def expo(v: int) -> float:
        return 0.0 if v == 1 else math.log(v) / log_q

    return {
        "space": space,
        "n": n,
        "q": q,
        "size": len(points),
        "pairs": total,
        "diameter_norm": diameter,
        "quantile_norms": quants,
        "exponents": {
            "diameter": expo(diameter),
            **{k: expo(v) for k, v in quants.items()},
        },
    }


def projective_bad_pair(q: int, t_max: int | None = None) -> DistanceRecord:
    """Scan e = (1, 0) against (1, q/2) in the projective plane mod even q.

    Unit scaling fixes the second coordinate q/2, so every witness must
    carry an entry of size at least q/2; the record measures how tight
    that is.
    """
    if q < 2 or q % 2 != 0:
        raise InvalidInput(f"need even q >= 2, got {q}")
    if t_max is None:
        t_max = 8 * q
    e = PointP(q, (1, 0))
    x = PointP(q, (1, q // 2))
    return dist_projective(e, x, t_max)
