"""Coordinate changes from divisibility instances to coprime root-approximation form.

Cubic family:   b(b+l)(b+2l) = t a(a+l)(a+2l)
    x = a + l, y = b + l, D = gcd(x, y), x = D u, y = D v,
    v^3 - t u^3 = -s  with  s = (t u - v) l^2 / D^2.

Quartic family: b^2(b^2+l) = t a^2(a^2+l)
    D = gcd(a, b), a = D x, b = D y,
    y^4 - t x^4 = s  with  s = l (t x^2 - y^2) / D^2.

All checks are exact integer/rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .bigarith import root_within_relative
from .errors import NotDivisibleError, VerificationError


class Family(str, Enum):
    CUBIC_TRIPLE = "cubic"
    QUARTIC = "quartic"


def family_product(family: Family, x: int, l: int) -> int:
    if family is Family.CUBIC_TRIPLE:
        return x * (x + l) * (x + 2 * l)
    return x * x * (x * x + l)


@dataclass(frozen=True, order=True)
class DivisibilityHit:
    """One product dividing another: ``P(b) = t * P(a)``."""

    a: int
    b: int
    l: int
    t: int
    family: Family = Family.CUBIC_TRIPLE

    @classmethod
    def from_pair(cls, family: Family, a: int, b: int, l: int) -> DivisibilityHit:
        """Build a hit with the exact quotient, refusing non-divisible pairs."""
        family = Family(family)
        pa = family_product(family, a, l)
        pb = family_product(family, b, l)
        if pa == 0:
            raise NotDivisibleError(f"P(a) = 0 for a={a}, l={l}")
        q, r = divmod(pb, pa)
        if r:
            raise NotDivisibleError(f"P({a}) = {pa} does not divide P({b}) = {pb}")
        return cls(a, b, l, q, family)

    def holds(self) -> bool:
        pa = family_product(self.family, self.a, self.l)
        return pa != 0 and family_product(self.family, self.b, self.l) == self.t * pa


def _divides(d: int, n: int) -> bool:
    return n % d == 0 if d else n == 0


# ---------------------------------------------------------------------------
# Cubic family
# ---------------------------------------------------------------------------

@dataclass
class ChainReport:
    """Each link of s | gcd(...) | ... | (t-1) t (t+1) l^2, with its gcd."""

    u: int
    v: int
    t: int
    l: int
    s: int
    links: list[tuple[str, int]]
    final_bound: int
    coprime_u3: bool
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_divisor_chain(u: int, v: int, t: int, l: int) -> ChainReport:
    """Re-derive the divisor chain for ``s = t u^3 - v^3``."""
    if math.gcd(u, v) != 1:
        raise ValueError(f"u={u} and v={v} are not coprime")
    cube_gap = v ** 3 - t * u ** 3
    s = -cube_gap
    if s == 0:
        raise ValueError("s = 0: v^3 = t u^3, so t is a perfect cube ratio")
    g1 = math.gcd((t * u - v) * l * l, cube_gap)
    g2 = math.gcd((t ** 3 * u ** 3 - v ** 3) * l * l, cube_gap)
    g3 = math.gcd((t ** 3 - t) * l * l * u ** 3, cube_gap)
    final = (t - 1) * t * (t + 1) * l * l
    links = [
        ("gcd((tu-v)l^2, v^3-tu^3)", g1),
        ("gcd((t^3u^3-v^3)l^2, v^3-tu^3)", g2),
        ("gcd((t^3-t)l^2u^3, v^3-tu^3)", g3),
        ("(t-1)t(t+1)l^2", final),
    ]
    violations = []
    if not _divides(s, (t * u - v) * l * l):
        violations.append(f"s={s} does not divide (tu-v)l^2={(t * u - v) * l * l}")
    chain = [("s", s)] + links
    for (name_a, a), (name_b, b) in zip(chain, chain[1:]):
        if not _divides(a, b):
            violations.append(f"{name_a}={a} does not divide {name_b}={b}")
    coprime = math.gcd(u ** 3, cube_gap) == 1
    if not coprime:
        violations.append(f"gcd(u^3, v^3-tu^3) = {math.gcd(u ** 3, cube_gap)} != 1")
    return ChainReport(u, v, t, l, s, links, final, coprime, violations)


@dataclass(frozen=True)
class CubicReduction:
    x: int
    y: int
    D: int
    u: int
    v: int
    t: int
    s: int
    l: int
    chain: ChainReport
    # |cbrt(t) - v/u| <= t^(7/3) l^2 / u^3, checked exactly
    divided_bound_holds: bool

    @property
    def s_positive(self) -> bool:
        return self.s > 0

    @property
    def ab(self) -> tuple[int, int]:
        return self.x - self.l, self.y - self.l


def reduce_cubic(hit: DivisibilityHit) -> CubicReduction:
    """Reduce a cubic-family hit and verify every side condition.

    Raises :class:`NotDivisibleError` for a false hit and
    :class:`VerificationError` if any derived invariant fails.
    """
    if Family(hit.family) is not Family.CUBIC_TRIPLE:
        raise ValueError("reduce_cubic needs a CUBIC_TRIPLE hit")
    a, b, l, t = hit.a, hit.b, hit.l, hit.t
    if a < 1 or l < 1 or b <= a:
        raise ValueError(f"need 1 <= a < b and l >= 1, got a={a}, b={b}, l={l}")
    if t < 2 or not hit.holds():
        raise NotDivisibleError(f"{hit} does not satisfy b(b+l)(b+2l) = t a(a+l)(a+2l)")

    x, y = a + l, b + l
    D = math.gcd(x, y)
    u, v = x // D, y // D
    num = (t * u - v) * l * l
    if num % (D * D):
        raise VerificationError(f"D^2={D * D} does not divide (v - tu) l^2 = {-num}")
    s = num // (D * D)

    problems = []
    if v ** 3 - t * u ** 3 != -s:
        problems.append(f"v^3 - t u^3 = {v ** 3 - t * u ** 3} != -s = {-s}")
    chain = verify_divisor_chain(u, v, t, l)
    if chain.s != s:
        problems.append(f"chain s={chain.s} disagrees with s={s}")
    problems.extend(chain.violations)
    if abs(s) > t ** 3 * l * l:
        problems.append(f"|s|={abs(s)} exceeds t^3 l^2={t ** 3 * l * l}")
    if abs(t * u ** 3 - v ** 3) > t ** 3 * l * l:
        problems.append("|t u^3 - v^3| > t^3 l^2")
    divided = root_within_relative(t, 3, Fraction(v, u), Fraction(t * t * l * l, u ** 3))
    if not divided:
        problems.append("|cbrt(t) - v/u| > t^(7/3) l^2 / u^3")
    if problems:
        raise VerificationError(f"cubic reduction of {hit}: " + "; ".join(problems))
    return CubicReduction(x, y, D, u, v, t, s, l, chain, divided)


# ---------------------------------------------------------------------------
# Quartic family
# ---------------------------------------------------------------------------

class SizeStatus(str, Enum):
    HOLDS = "holds"
    FAILS = "fails"
    BELOW_THRESHOLD = "below-threshold"


def size_threshold(l: int) -> int:
    """x above this counts as 'sufficiently large in terms of l'."""
    return 10 * (abs(l) + 1)


@dataclass(frozen=True)
class QuarticReduction:
    x: int
    y: int
    D: int
    t: int
    s: int
    l: int
    degenerate: bool
    size: SizeStatus      # 0.9 t^(1/4) x < y < 1.1 t^(1/4) x < sqrt(t) x
    size_D: SizeStatus    # 0.3 x / sqrt(t) <= D <= sqrt(|l| t) x
    approx: SizeStatus    # |t^(1/4) - y/x| <= |l| t^(5/4) / x^4

    @property
    def statuses(self) -> dict[str, SizeStatus]:
        return {"size": self.size, "sizeD": self.size_D, "approx": self.approx}

    @property
    def suspicious(self) -> bool:
        return any(st is SizeStatus.FAILS for st in self.statuses.values())


def _status(holds: bool, large: bool) -> SizeStatus:
    if holds:
        return SizeStatus.HOLDS
    return SizeStatus.FAILS if large else SizeStatus.BELOW_THRESHOLD


def reduce_quartic(hit: DivisibilityHit) -> QuarticReduction:
    """Reduce a quartic-family hit; exact invariants raise, size checks are reported."""
    if Family(hit.family) is not Family.QUARTIC:
        raise ValueError("reduce_quartic needs a QUARTIC hit")
    a, b, l, t = hit.a, hit.b, hit.l, hit.t
    if a < 1 or b <= a or l == 0:
        raise ValueError(f"need 1 <= a < b and l != 0, got a={a}, b={b}, l={l}")
    if a * a + l <= 0:
        raise NotDivisibleError(f"a^2(a^2+l) <= 0 for a={a}, l={l}")
    if t < 2 or not hit.holds():
        raise NotDivisibleError(f"{hit} does not satisfy b^2(b^2+l) = t a^2(a^2+l)")

    D = math.gcd(a, b)
    x, y = a // D, b // D
    num = l * (t * x * x - y * y)
    if num % (D * D):
        raise VerificationError(f"D^2={D * D} does not divide l(tx^2 - y^2) = {num}")
    s = num // (D * D)
    if s == 0:
        raise VerificationError(f"s = 0 for {hit}, impossible for t > 1")

    problems = []
    if y ** 4 - t * x ** 4 != s:
        problems.append(f"y^4 - t x^4 = {y ** 4 - t * x ** 4} != s = {s}")
    if math.gcd(x, y) != 1:
        problems.append("gcd(x, y) != 1")
    if not _divides(s, l * t * (t - 1)):
        problems.append(f"s={s} does not divide l t (t-1) = {l * t * (t - 1)}")
    if problems:
        raise VerificationError(f"quartic reduction of {hit}: " + "; ".join(problems))

    degenerate = a <= 2
    large = x > size_threshold(l) and not degenerate

    # (0.9x)^4 t < y^4 < (1.1x)^4 t  and  y^2 < t x^2
    lo, hi = Fraction(9, 10) * x, Fraction(11, 10) * x
    size_ok = lo ** 4 * t < y ** 4 < hi ** 4 * t and y * y < t * x * x
    # D >= 0.3 x / sqrt(t)  <=>  t D^2 >= 0.09 x^2
    sized_ok = t * D * D >= Fraction(9, 100) * x * x and D * D <= abs(l) * t * x * x
    approx_ok = root_within_relative(t, 4, Fraction(y, x), Fraction(abs(l) * t, x ** 4))

    return QuarticReduction(
        x, y, D, t, s, l, degenerate,
        _status(size_ok, large), _status(sized_ok, large), _status(approx_ok, large),
    )


def reduce_hit(hit: DivisibilityHit):
    """Dispatch on the hit's family."""
    if Family(hit.family) is Family.CUBIC_TRIPLE:
        return reduce_cubic(hit)
    return reduce_quartic(hit)
