"""Exact exhaustive enumeration over bounded-height SL_n(Z).

Counts, minimal-norm congruence lifts, and growth tables, all ground truth:
partial scans raise rather than return wrong numbers.

Enumeration contract: every entry is free except the last entry of the last
row, which is solved from linearity of the determinant in that entry; when
its cofactor vanishes the entry is enumerated directly over its admissible
values.  Entries constrained mod q range over their residue ladders
x_ij + qZ intersected with [-cap, cap].
"""

from __future__ import annotations

import bisect
import os
from dataclasses import dataclass
from itertools import product as _cartesian

import numpy as np

from . import intmat
from .errors import BudgetExceeded, InvalidInput
from .intmat import IntMatrix

DEFAULT_BUDGET = 10**9

_NUMPY_CUTOVER = 20000
_INT64_SAFE = 2**62


def current_budget(override: int | None = None) -> int:
    """Effective candidate budget; SLLIFT_BUDGET overrides the default."""
    if override is not None:
        return override
    env = os.environ.get("SLLIFT_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class EnumSpec:
    """What to enumerate: dimension, per-row caps, optional congruence."""

    n: int
    caps: tuple[int, ...]
    q: int = 0
    x: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInput(f"need n >= 1, got {self.n}")
        caps = tuple(int(c) for c in self.caps)
        if len(caps) != self.n or any(c < 1 for c in caps):
            raise InvalidInput(f"need {self.n} positive caps, got {self.caps}")
        object.__setattr__(self, "caps", caps)
        if self.q < 0:
            raise InvalidInput(f"need q >= 0, got {self.q}")
        if (self.q > 0) != (self.x is not None):
            raise InvalidInput("congruence needs both q > 0 and a target x")
        if self.x is not None:
            rows = self.x.rows if isinstance(self.x, IntMatrix) else self.x
            rows = tuple(tuple(int(v) % self.q for v in r) for r in rows)
            if len(rows) != self.n or any(len(r) != self.n for r in rows):
                raise InvalidInput("target x must be n x n")
            if intmat.det(IntMatrix(rows)) % self.q != 1 % self.q:
                raise InvalidInput("target x must have det = 1 mod q")
            object.__setattr__(self, "x", rows)


def _ladder(center: int, q: int, cap: int) -> range:
    """Integers congruent to center mod q (all integers if q = 0) in [-cap, cap]."""
    if q == 0:
        return range(-cap, cap + 1)
    first = -cap + ((center + cap) % q)
    return range(first, cap + 1, q)


def _ladders(spec: EnumSpec):
    return [
        [
            _ladder(spec.x[i][j] if spec.q else 0, spec.q, spec.caps[i])
            for j in range(spec.n)
        ]
        for i in range(spec.n)
    ]


def candidate_count(spec: EnumSpec) -> int:
    """Size of the free-entry candidate space (all entries but the solved one)."""
    lads = _ladders(spec)
    total = 1
    for i in range(spec.n):
        for j in range(spec.n):
            if (i, j) != (spec.n - 1, spec.n - 1):
                total *= len(lads[i][j])
    return total


def _check_budget(spec: EnumSpec, budget: int | None) -> int:
    limit = current_budget(budget)
    size = candidate_count(spec)
    if size > limit:
        raise BudgetExceeded(f"candidate space {size} exceeds budget {limit}")
    return limit


def _minor_vector(rows):
    """maximal_minors for raw row tuples."""
    return intmat.maximal_minors(IntMatrix(rows))


def _np_usable(spec: EnumSpec) -> bool:
    if spec.n != 2:
        return False
    return spec.caps[0] * spec.caps[1] < _INT64_SAFE // 4


def _np_arrays(spec: EnumSpec):
    lads = _ladders(spec)
    arr = lambda r: np.arange(r.start, r.stop, r.step, dtype=np.int64)
    return arr(lads[0][0]), arr(lads[0][1]), arr(lads[1][0]), lads[1][1]


def _count2_numpy(spec: EnumSpec) -> int:
    a_vals, b_vals, c_vals, d_lad = _np_arrays(spec)
    num = 1 + b_vals[:, None] * c_vals[None, :]
    cap_d = spec.caps[1]
    q = spec.q
    target_d = spec.x[1][1] if q else 0
    total = 0
    for a in a_vals:
        a = int(a)
        if a == 0:
            pairs = int((num == 0).sum())
            total += pairs * len(d_lad)
            continue
        mask = (num % a) == 0
        d = num // a
        mask &= np.abs(d) <= cap_d
        if q:
            mask &= ((d - target_d) % q) == 0
        total += int(mask.sum())
    return total


def _exists2_numpy(spec: EnumSpec) -> bool:
    a_vals, b_vals, c_vals, d_lad = _np_arrays(spec)
    num = 1 + b_vals[:, None] * c_vals[None, :]
    cap_d = spec.caps[1]
    q = spec.q
    target_d = spec.x[1][1] if q else 0
    for a in a_vals:
        a = int(a)
        if a == 0:
            if len(d_lad) and (num == 0).any():
                return True
            continue
        mask = (num % a) == 0
        d = num // a
        mask &= np.abs(d) <= cap_d
        if q:
            mask &= ((d - target_d) % q) == 0
        if mask.any():
            return True
    return False


def _iter_general(spec: EnumSpec):
    n = spec.n
    lads = _ladders(spec)
    d_lad = lads[n - 1][n - 1]
    prefix_lads = [lads[i][j] for i in range(n - 1) for j in range(n)]
    v_lads = [lads[n - 1][j] for j in range(n - 1)]

    for flat in _cartesian(*prefix_lads):
        rows = tuple(flat[i * n : (i + 1) * n] for i in range(n - 1))
        if n == 2:
            c = (-rows[0][1], rows[0][0])
        else:
            c = _minor_vector(rows)
        cn = c[n - 1]
        for v in _cartesian(*v_lads):
            partial = sum(vj * cj for vj, cj in zip(v, c))
            num = 1 - partial
            if cn != 0:
                if num % cn == 0:
                    d = num // cn
                    if d in d_lad:
                        yield rows + (v + (d,),)
            elif num == 0:
                for d in d_lad:
                    yield rows + (v + (d,),)


def count_sl(spec: EnumSpec, budget: int | None = None) -> int:
    """Exact count of gamma in SL_n(Z) within the caps (and congruence)."""
    _check_budget(spec, budget)
    n = spec.n
    if n == 1:
        return 1 if 1 in _ladders(spec)[0][0] else 0
    if _np_usable(spec) and candidate_count(spec) > _NUMPY_CUTOVER:
        return _count2_numpy(spec)
    lads = _ladders(spec)
    d_lad = lads[n - 1][n - 1]
    total = 0
    prefix_lads = [lads[i][j] for i in range(n - 1) for j in range(n)]
    v_lads = [lads[n - 1][j] for j in range(n - 1)]
    for flat in _cartesian(*prefix_lads):
        rows = tuple(flat[i * n : (i + 1) * n] for i in range(n - 1))
        if n == 2:
            c = (-rows[0][1], rows[0][0])
        else:
            c = _minor_vector(rows)
        cn = c[n - 1]
        for v in _cartesian(*v_lads):
            partial = sum(vj * cj for vj, cj in zip(v, c))
            num = 1 - partial
            if cn != 0:
                if num % cn == 0 and (num // cn) in d_lad:
                    total += 1
            elif num == 0:
                total += len(d_lad)
    return total


def iter_sl(spec: EnumSpec, budget: int | None = None):
    """Every matching matrix as row tuples, in deterministic order.

    The budget check happens eagerly, before the first matrix is produced.
    """
    _check_budget(spec, budget)
    if spec.n == 1:
        one = ((1,),) if 1 in _ladders(spec)[0][0] else None
        return iter(() if one is None else (one,))
    return _iter_general(spec)


def exists_sl(spec: EnumSpec, budget: int | None = None) -> bool:
    """Whether at least one matching matrix exists."""
    _check_budget(spec, budget)
    if spec.n == 1:
        return 1 in _ladders(spec)[0][0]
    if _np_usable(spec) and candidate_count(spec) > _NUMPY_CUTOVER:
        return _exists2_numpy(spec)
    for _ in _iter_general(spec):
        return True
    return False


def iter_lifts(x: IntMatrix, q: int, cap: int, budget: int | None = None):
    """All lifts of x mod q with uniform max norm at most cap."""
    n = x.nrows
    spec = EnumSpec(n=n, caps=(cap,) * n, q=q, x=x.rows)
    return iter_sl(spec, budget)


def min_lift_norm(x: IntMatrix, q: int, t_max: int, budget: int | None = None) -> int | None:
    """Least T <= t_max admitting a lift of x mod q with max norm <= T.

    T grows over the achievable residue-ladder values, doubling until a lift
    appears and then bisecting; returns None when no lift exists by t_max.
    """
    n = x.nrows
    if x.ncols != n:
        raise InvalidInput("x must be square")
    if q < 1:
        raise InvalidInput(f"need q >= 1, got {q}")
    if t_max < 1:
        raise InvalidInput(f"need t_max >= 1, got {t_max}")
    if q == 1:
        return 1
    if intmat.det(x) % q != 1 % q:
        raise InvalidInput("x must have det = 1 mod q")

    achievable = set()
    t_low = 0
    for i in range(n):
        for j in range(n):
            lad = _ladder(x.rows[i][j], q, t_max)
            if len(lad) == 0:
                return None
            entry_vals = {abs(v) for v in lad}
            achievable |= entry_vals
            t_low = max(t_low, min(entry_vals))
    steps = sorted(v for v in achievable if v >= max(t_low, 1))
    if not steps:
        return None

    def exists(t: int) -> bool:
        spec = EnumSpec(n=n, caps=(t,) * n, q=q, x=x.rows)
        return exists_sl(spec, budget)

    t = steps[0]
    if exists(t):
        return t
    while t < t_max:
        t_next = min(2 * t, t_max)
        if exists(t_next):
            lo = bisect.bisect_right(steps, t)
            hi = bisect.bisect_right(steps, t_next) - 1
            while lo < hi:
                mid = (lo + hi) // 2
                if exists(steps[mid]):
                    hi = mid
                else:
                    lo = mid + 1
            return steps[lo]
        t = t_next
    return None


def _counts2_cumulative(t_max: int, budget: int | None = None) -> list[int]:
    """|F_T| for n = 2 and every T <= t_max, via one histogram sweep.

    For a != 0 the solved entry is d = (1 + bc) / a, and (a, b, c, d) and
    (-a, b, c, -d) pair up, so only positive a is scanned and doubled; the
    a = 0 stratum (bc = -1, d free) is added in closed form.
    """
    limit = current_budget(budget)
    if (2 * t_max + 1) ** 3 > limit:
        raise BudgetExceeded(
            f"candidate space {(2 * t_max + 1) ** 3} exceeds budget {limit}"
        )
    counts = np.zeros(t_max + 1, dtype=np.int64)
    vals = np.arange(-t_max, t_max + 1, dtype=np.int64)
    absvals = np.abs(vals)
    chunk = 512
    for start in range(0, len(vals), chunk):
        b = vals[start : start + chunk]
        num = 1 + b[:, None] * vals[None, :]
        mbc = np.maximum(np.abs(b)[:, None], absvals[None, :])
        for a in range(1, t_max + 1):
            mask = (num % a) == 0
            d = num // a
            mask &= np.abs(d) <= t_max
            m = np.maximum(np.maximum(mbc, np.abs(d)), a)
            counts += 2 * np.bincount(m[mask], minlength=t_max + 1)
    if t_max >= 1:
        counts[1] += 6  # [[0,1],[-1,d]] and [[0,-1],[1,d]] with |d| <= 1
        if t_max >= 2:
            counts[2:] += 4  # same two shapes with d = +-k
    return [int(v) for v in np.cumsum(counts)]


def norm_count_table(
    n: int, t_list, budget: int | None = None
) -> list[tuple[int, int, float | None]]:
    """Rows (T, exact count within norm T, count / T^(n^2 - n))."""
    t_list = [int(t) for t in t_list]
    if any(t < 0 for t in t_list):
        raise InvalidInput("thresholds must be >= 0")
    exponent = n * n - n
    out = []
    if n == 2 and t_list:
        t_max = max(t_list)
        cumulative = _counts2_cumulative(t_max, budget) if t_max >= 1 else [0]
        for t in t_list:
            count = cumulative[t] if t >= 1 else 0
            out.append((t, int(count), count / t**exponent if t > 0 else None))
        return out
    for t in t_list:
        if t == 0:
            out.append((0, 0, None))
            continue
        count = count_sl(EnumSpec(n=n, caps=(t,) * n), budget)
        out.append((t, count, count / t**exponent))
    return out
