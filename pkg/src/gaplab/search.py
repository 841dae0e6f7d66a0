"""Enumeration engines: Pell pairs, divisibility censuses, fixed-t solutions
and the machine check of b(b+1)(b+2) = 2 a(a+1)(a+2).
"""

from __future__ import annotations

import math
import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

import numpy as np

from .bigarith import (
    Gap,
    certified_root_gap,
    factorize,
    integer_nth_root,
    root_enclosure,
)
from .effective import abc_quality, gap_lower_bound
from .errors import BudgetExceeded, VerificationError
from .reduction import (
    DivisibilityHit,
    Family,
    family_product,
    reduce_hit,
    reduce_quartic,
)

FILTER_CAP = 1 << 20          # largest modulus used by the residue pre-filter
BLOCK = 1 << 18               # b values per numpy block
DEFAULT_PAIR_BUDGET = 10**11


# ---------------------------------------------------------------------------
# Pell
# ---------------------------------------------------------------------------

def pell_pairs(count: int) -> Iterator[tuple[int, int]]:
    """First ``count`` pairs (a, b) with b(b+1) = 2 a(a+1), smallest first.

    Walks x + y sqrt2 = (1 + sqrt2)^(2n-1) via (x, y) -> (3x + 4y, 2x + 3y)
    and skips the degenerate (1, 1).
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    x, y = 1, 1
    for _ in range(count):
        x, y = 3 * x + 4 * y, 2 * x + 3 * y
        a, b = (y - 1) // 2, (x - 1) // 2
        assert b * (b + 1) == 2 * a * (a + 1)
        yield a, b


# ---------------------------------------------------------------------------
# Divisibility census
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SearchConfig:
    family: Family
    l: int
    a_min: int
    a_max: int
    b_max: int
    exclude_a1: Optional[bool] = None   # None: exclude only for cubic, l = 1
    worker_count: int = 1
    pair_budget: int = DEFAULT_PAIR_BUDGET

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", Family(self.family))
        if self.a_min < 1:
            raise ValueError("a_min must be >= 1")
        if self.a_max < self.a_min:
            raise ValueError("empty a-range")
        if self.a_max >= self.b_max:
            raise ValueError("need a_max < b_max")
        if self.l == 0 or (self.family is Family.CUBIC_TRIPLE and self.l < 0):
            raise ValueError(f"l={self.l} not allowed for the {self.family.value} family")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")

    @property
    def skips_a1(self) -> bool:
        if self.exclude_a1 is None:
            return self.family is Family.CUBIC_TRIPLE and self.l == 1
        return self.exclude_a1

    def pairs(self) -> int:
        return (self.a_max - self.a_min + 1) * self.b_max


@lru_cache(maxsize=4096)
def _residue_table(family: Family, l: int, q: int) -> np.ndarray:
    """Boolean table over residues r mod q with P(r) = 0 mod q."""
    r = np.arange(q, dtype=np.int64)
    if family is Family.CUBIC_TRIPLE:
        val = (r * ((r + l) % q)) % q * ((r + 2 * l) % q) % q
    else:
        sq = r * r % q
        val = sq * ((sq + l) % q) % q
    return val == 0


def _filter_moduli(family: Family, a: int, l: int) -> list[int]:
    if family is Family.CUBIC_TRIPLE:
        parts = (a, a + l, a + 2 * l)
    else:
        parts = (a, a, a * a + l)
    exps: dict[int, int] = defaultdict(int)
    for z in parts:
        for p, e in factorize(abs(z)).items():
            exps[p] += e
    mods = []
    for p, e in exps.items():
        q = 1
        for _ in range(e):
            if q * p > FILTER_CAP:
                break
            q *= p
        if q > 1:
            mods.append(q)
    # largest moduli first: they discard the most candidates
    return sorted(mods, reverse=True)


def _scan_a(family: Family, a: int, l: int, b_max: int) -> list[DivisibilityHit]:
    pa = family_product(family, a, l)
    if pa <= 0:
        return []
    mods = _filter_moduli(family, a, l)
    tables = [(q, _residue_table(family, l, q)) for q in mods]
    hits = []
    for lo in range(a + 1, b_max + 1, BLOCK):
        hi = min(lo + BLOCK - 1, b_max)
        bs = np.arange(lo, hi + 1, dtype=np.int64)
        for q, table in tables:
            bs = bs[table[bs % q]]
            if bs.size == 0:
                break
        for b in bs.tolist():
            t, r = divmod(family_product(family, b, l), pa)
            if r == 0:
                hits.append(DivisibilityHit(a, b, l, t, family))
    return hits


def _scan_chunk(args: tuple[Family, int, int, int, int, bool]) -> list[DivisibilityHit]:
    family, l, a_lo, a_hi, b_max, skip1 = args
    out = []
    for a in range(a_lo, a_hi + 1):
        if skip1 and a == 1:
            continue
        out.extend(_scan_a(family, a, l, b_max))
    return out


def _chunks(lo: int, hi: int, k: int) -> list[tuple[int, int]]:
    n = hi - lo + 1
    k = max(1, min(k, n))
    size, extra = divmod(n, k)
    out, start = [], lo
    for i in range(k):
        end = start + size + (1 if i < extra else 0) - 1
        out.append((start, end))
        start = end + 1
    return out


def search_divisible(config: SearchConfig) -> list[DivisibilityHit]:
    """Every (a, b) in range with P(a) | P(b), sorted by (a, b).

    Output does not depend on ``worker_count``: the a-range is cut into
    contiguous chunks, each scanned independently, and the union is sorted.
    """
    if config.pairs() > config.pair_budget:
        raise BudgetExceeded(
            f"census of {config.pairs()} pairs exceeds budget {config.pair_budget}")
    jobs = [
        (config.family, config.l, lo, hi, config.b_max, config.skips_a1)
        for lo, hi in _chunks(config.a_min, config.a_max, 4 * config.worker_count)
    ]
    if config.worker_count == 1:
        parts = [_scan_chunk(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            parts = list(pool.map(_scan_chunk, jobs))
    hits = [h for part in parts for h in part]
    hits.sort(key=lambda h: (h.a, h.b))
    return hits


def default_workers() -> int:
    env = os.environ.get("GAPLAB_WORKERS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Fixed t
# ---------------------------------------------------------------------------

def enumerate_fixed_t(t: int, l: int, limit: int) -> list[tuple[int, int]]:
    """All positive (a, b) with b(b+l)(b+2l) = t a(a+l)(a+2l) and b <= limit.

    With y = b + l the left side is y^3 - l^2 y, so y is found from the
    integer cube root of the right side and a short upward correction.
    Negative solutions follow from (a, b) -> (-a, -b) and are not listed.
    """
    if t < 2 or l < 1 or limit < 1:
        raise ValueError("need t >= 2, l >= 1, limit >= 1")
    out = []
    l2 = l * l
    a = 1
    while True:
        N = t * a * (a + l) * (a + 2 * l)
        y = max(integer_nth_root(N, 3), l + 1)
        while y ** 3 - l2 * y < N:
            y += 1
        b = y - l
        if b > limit:
            break
        if y ** 3 - l2 * y == N:
            out.append((a, b))
        a += 1
    return out


# ---------------------------------------------------------------------------
# b(b+1)(b+2) = 2 a(a+1)(a+2)
# ---------------------------------------------------------------------------

BENNETT_U_MAX = 35


@dataclass
class SmallUCase:
    u: int
    checked_v: list[int]          # v in (u, 2u], tested exactly
    tail_from: int                # v >= tail_from excluded by v^3 - 2u^3 > v - 2u
    solutions: list[tuple[int, int]]  # (v, D)


@dataclass
class CheckRow:
    u: int
    v: int
    lower: Fraction               # certified bounds on u^2 |u cbrt2 - v|
    upper: Fraction

    @property
    def value(self) -> float:
        return float((self.lower + self.upper) / 2)


@dataclass
class Theorem1Report:
    small_u_cases: list[SmallUCase]
    bennett_u_max: int
    recomputed_u_max: int
    constants: dict[str, bool]
    check_table: list[CheckRow]
    min_value: Fraction
    min_u: int
    solutions: list[tuple[int, int]] = field(default_factory=list)


def _small_u_case(u: int) -> SmallUCase:
    # D^2 (v^3 - 2u^3) = v - 2u with v > u, gcd(u, v) = 1
    sols = []
    checked = list(range(u + 1, 2 * u + 1))
    for v in checked:
        if math.gcd(u, v) != 1:
            continue
        lhs, rhs = v ** 3 - 2 * u ** 3, v - 2 * u
        if lhs == 0 or rhs == 0 or (lhs > 0) != (rhs > 0) or rhs % lhs:
            continue
        d2 = rhs // lhs
        D = math.isqrt(d2)
        if D * D == d2:
            sols.append((v, D))
    tail = 2 * u + 1
    # for v >= tail both sides are positive and v^3 - v grows, so one step suffices
    if not tail ** 3 - 2 * u ** 3 > tail - 2 * u:
        raise VerificationError(f"tail argument fails for u={u}")
    return SmallUCase(u, checked, tail, sols)


def _nearest_v(u: int) -> int:
    """Integer nearest to u cbrt2, decided exactly via (2f+1)^3 vs 16 u^3."""
    f = integer_nth_root(2 * u ** 3, 3)
    return f + 1 if (2 * f + 1) ** 3 < 16 * u ** 3 else f


def verify_theorem1() -> Theorem1Report:
    """Machine check that (a, b) = (3, 4) is the only positive solution."""
    cases = [_small_u_case(u) for u in (1, 2, 3, 4)]
    solutions = []
    for case in cases:
        for v, D in case.solutions:
            solutions.append((D * case.u - 1, D * v - 1))
    solutions = [(a, b) for a, b in solutions if a >= 1]

    lo2, hi2 = root_enclosure(2, 3, 128)
    lo4, hi4 = root_enclosure(4, 3, 128)
    q = Fraction(121, 100)
    constants = {
        "cbrt2 - 6/125 >= 1.21": lo2 - Fraction(6, 125) >= q,
        "8 / (cbrt4 + 1.21 cbrt2 + 1.21^2) < 1.75":
            Fraction(8) / (lo4 + q * lo2 + q * q) < Fraction(7, 4),
    }
    # u^0.55 < 7  <=>  u^11 < 7^20
    recomputed = integer_nth_root(7 ** 20 - 1, 11)

    rows = []
    for u in range(5, BENNETT_U_MAX + 1):
        v = _nearest_v(u)
        if certified_root_gap(2, 3, v, u, Fraction(5, u ** 3)) is not Gap.GT:
            raise VerificationError(f"u^2 |u cbrt2 - v| <= 5 at u={u}, v={v}")
        dlo, dhi = lo2 * u - v, hi2 * u - v
        if dlo < 0 < dhi:
            raise VerificationError(f"enclosure straddles zero at u={u}")
        low, high = sorted((abs(dlo), abs(dhi)))
        rows.append(CheckRow(u, v, u * u * low, u * u * high))
    best = min(rows, key=lambda r: r.lower)
    if not best.lower > 5:
        raise VerificationError(f"certified minimum {float(best.lower)} is not > 5")
    return Theorem1Report(cases, BENNETT_U_MAX, recomputed, constants, rows,
                          best.lower, best.u, sorted(solutions))


# ---------------------------------------------------------------------------
# Reports over hits
# ---------------------------------------------------------------------------

@dataclass
class GapRow:
    hit: DivisibilityHit
    ratio: Fraction
    status: str                   # "ok" or the violation message
    formula_bound: Optional[float]
    size_flags: dict[str, str] = field(default_factory=dict)


@dataclass
class GapReport:
    rows: list[GapRow]
    min_ratio_by_bucket: dict[str, Fraction]
    violations: int


def _bucket(a: int) -> str:
    k = len(str(a)) - 1
    return f"[{10 ** k}, {10 ** (k + 1)})"


def gap_report(hits: Sequence[DivisibilityHit]) -> GapReport:
    if not hits:
        raise ValueError("gap_report needs at least one hit")
    rows = []
    buckets: dict[str, Fraction] = {}
    bad = 0
    for h in hits:
        flags: dict[str, str] = {}
        try:
            red = reduce_hit(h)
            status = "ok"
            if Family(h.family) is Family.QUARTIC:
                flags = {k: st.value for k, st in red.statuses.items()}
        except Exception as exc:  # reported per row, counted below
            status = f"{type(exc).__name__}: {exc}"
            bad += 1
        bound = gap_lower_bound(h.a, h.l, h.family) if h.a >= 16 else None
        ratio = Fraction(h.b, h.a)
        rows.append(GapRow(h, ratio, status, bound, flags))
        key = _bucket(h.a)
        if key not in buckets or ratio < buckets[key]:
            buckets[key] = ratio
    ordered = dict(sorted(buckets.items(), key=lambda kv: int(kv[0][1:].split(",")[0])))
    return GapReport(rows, ordered, bad)


@dataclass
class AbcRow:
    hit: DivisibilityHit
    d: int
    triple: tuple[int, int, int]
    quality: float


def thm4_report(hits: Sequence[DivisibilityHit]) -> list[AbcRow]:
    """Coprime abc triples built from y^4 = t x^4 + s for each quartic hit."""
    out = []
    for h in hits:
        red = reduce_quartic(h)
        tx4, y4, s = red.t * red.x ** 4, red.y ** 4, red.s
        assert s != 0
        d = math.gcd(tx4, s)
        if s > 0:
            triple = (tx4 // d, s // d, y4 // d)
        else:
            triple = (y4 // d, -s // d, tx4 // d)
        A, B, C = triple
        if A + B != C or math.gcd(A, B) != 1:
            raise VerificationError(f"bad abc triple {triple} from {h}")
        out.append(AbcRow(h, d, triple, abc_quality(A, B, C)))
    return out


def verify_hits(hits: Sequence[DivisibilityHit]) -> list[str]:
    """Independent multiply-and-divide recheck; returns the failures."""
    bad = []
    for h in hits:
        if Family(h.family) is Family.CUBIC_TRIPLE:
            lhs = h.b * (h.b + h.l) * (h.b + 2 * h.l)
            rhs = h.a * (h.a + h.l) * (h.a + 2 * h.l)
        else:
            lhs = h.b ** 2 * (h.b ** 2 + h.l)
            rhs = h.a ** 2 * (h.a ** 2 + h.l)
        if rhs == 0 or lhs % rhs or lhs // rhs != h.t or h.t < 2:
            bad.append(repr(h))
    return bad

