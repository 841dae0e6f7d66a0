"""Effective constants: field discriminant/regulator bounds, Bugeaud's
irrationality measure, Bennett's gap for cbrt(2), and the explicit cutoffs
behind the gap theorems.

Logs are natural logs throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bigarith import (
    LogReal,
    cubic_normal_form,
    integer_nth_root,
    is_squarefree,
    quartic_normal_form,
    radical,
)
from .reduction import Family

# a beyond which the explicit t-bounds start increasing in a
MIN_T_CUBIC_TURN_LOG = math.exp(2.0)      # ln a at the turning point
MIN_T_QUARTIC_TURN_LOG = math.exp(6.0)


@dataclass(frozen=True)
class FieldBounds:
    n: int
    m: int
    reduced_m: int                 # cube-free (n=3) or fourth-power-free (n=4) part
    disc_candidates: list[int]
    disc_bound: int
    reg_bound: float
    reg_bound_closed: float        # closed form used by the gap proofs
    reg_bound_alt: Optional[float] = None
    exact_disc: Optional[int] = None
    provenance: dict[str, str] = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Pure cubic fields
# ---------------------------------------------------------------------------

def blw_regulator_bound(disc: int) -> float:
    """R_K < sqrt|d| log|d| / (6 sqrt 3), using h_K >= 1."""
    d = abs(disc)
    return math.sqrt(d) * math.log(d) / (6.0 * math.sqrt(3.0))


def cubic_field_bounds(m: int, mode: str = "both") -> FieldBounds:
    """Discriminant and regulator bounds for Q(m^(1/3)).

    ``mode="both"`` returns both Type I and Type II candidates and bounds by
    the worse one.  ``mode="exact"`` applies the classical ramification test
    (Type II iff m'^2 = 1 mod 9), which is imported, not derived here.
    """
    if mode not in ("both", "exact"):
        raise ValueError(f"unknown mode {mode!r}")
    nf = cubic_normal_form(m)
    if nf.a == 1 and nf.b == 1:
        raise ValueError(f"{m} is a perfect cube; Q(m^(1/3)) has degree 1")
    reduced = nf.cube_free
    ab2 = (nf.a * nf.b) ** 2
    type1, type2 = -27 * ab2, -3 * ab2
    prov = {
        "normal_form": f"m = {nf.a} * {nf.b}^2 * {nf.c}^3",
        "disc": "Harron Lemma 2.1: -27 a^2 b^2 (Type I), -3 a^2 b^2 (Type II)",
        "reg_bound": "Barrucand-Loxton-Williams with h_K >= 1 on disc_bound",
        "reg_bound_closed": "m' log(6 m')",
    }
    exact = None
    if mode == "exact":
        if reduced * reduced % 9 == 1:
            exact = type2
            prov["type"] = "II (m'^2 = 1 mod 9; classical criterion)"
        else:
            exact = type1
            prov["type"] = "I (m'^2 != 1 mod 9; classical criterion)"
        candidates = [exact]
        disc_bound = abs(exact)
    else:
        candidates = [type1, type2]
        disc_bound = -type1
    return FieldBounds(
        n=3,
        m=m,
        reduced_m=reduced,
        disc_candidates=candidates,
        disc_bound=disc_bound,
        reg_bound=blw_regulator_bound(disc_bound),
        reg_bound_closed=reduced * math.log(6 * reduced),
        exact_disc=exact,
        provenance=prov,
    )


# ---------------------------------------------------------------------------
# Pure quartic fields
# ---------------------------------------------------------------------------

def funakura_conditions(a: int, b: int, c: int) -> list[str]:
    """Names of the Funakura conditions (i)-(v) that fail for m = a b^2 c^3."""
    failed = []
    if a == 1 or not all(is_squarefree(abs(z)) for z in (a, b, c)) or \
            math.gcd(a, b) != 1 or math.gcd(a, c) != 1 or math.gcd(b, c) != 1:
        failed.append("i")
    if b <= 0 or c <= 0:
        failed.append("ii")
    if a % 2 == 1 and abs(a) < c:
        failed.append("iii")
    if c % 2 == 0:
        failed.append("iv")
    if a * b * b * c ** 3 == -4:
        failed.append("v")
    return failed


def funakura_discriminant(a: int, b: int, c: int) -> int:
    """d_K of Q((a b^2 c^3)^(1/4)); the caller checks conditions (i)-(v)."""
    m = a * b * b * c ** 3
    core = a ** 3 * b * b * c ** 3
    if m % 8 == 1 or m % 32 == 28:
        return -(2 ** 2) * core
    if m % 16 == 4 or m % 8 == 5 or m % 32 == 12:
        return -(2 ** 4) * core
    if m % 4 in (2, 3):
        return -(2 ** 8) * core
    raise AssertionError(f"residue of {m} not covered by the case table")


def quartic_representative(u: int, v: int, w: int) -> tuple[tuple[int, int, int], str]:
    """Pick (a, b, c) for Funakura using Q(m^(1/4)) = Q(m^(3/4))."""
    if u > 1 and u % 2 == 0:
        return (u, v, w), "u > 1 even: m = u v^2 w^3"
    if u == 1:
        return (w, v, u), "u = 1: m^3 ~ w v^2 u^3"
    if w % 2 == 0:
        return (w, v, u), "w even: m^3 ~ w v^2 u^3"
    if u >= w:
        return (u, v, w), "u, w odd, u >= w: m = u v^2 w^3"
    return (w, v, u), "u, w odd, u < w: m^3 ~ w v^2 u^3"


def siegel_quartic_regulator_bound(disc: int) -> float:
    """R_K from Siegel's g_K bound with r_1 = 2, w_K = 2, h_K >= 1.

    g_K = 2 h R, so R < (16/27) sqrt|d| log^3 |d|.
    """
    d = abs(disc)
    return 16.0 / 27.0 * math.sqrt(d) * math.log(d) ** 3


def quartic_field_bounds(m: int) -> FieldBounds:
    nf = quartic_normal_form(m)
    if nf.u == 1 and nf.w == 1:
        raise ValueError(f"{m} is a perfect square; Q(m^(1/4)) has degree <= 2")
    reduced = nf.fourth_power_free
    (a, b, c), case = quartic_representative(nf.u, nf.v, nf.w)
    failed = funakura_conditions(a, b, c)
    exact = None if failed else funakura_discriminant(a, b, c)
    disc_bound = 256 * reduced ** 3
    reg_closed = 15.0 * reduced ** 1.5 * math.log(8 * reduced) ** 3
    prov = {
        "normal_form": f"m = {nf.u} * {nf.v}^2 * {nf.w}^3 * {nf.s}^4",
        "case": case,
        "representative": f"{a} * {b}^2 * {c}^3 = {a * b * b * c ** 3}",
        "disc": "Funakura Corollary 1" if exact is not None
        else f"Funakura conditions failed: {failed}",
        "disc_bound": "256 m'^3",
        "reg_bound": "15 m'^(3/2) log^3(8 m')",
        "reg_bound_alt": "Siegel g_K with r_1=2, w_K=2, h_K>=1: (16/27) sqrt(d) log^3 d;"
        " exceeds the stated constant 15",
    }
    return FieldBounds(
        n=4,
        m=m,
        reduced_m=reduced,
        disc_candidates=[] if exact is None else [exact],
        disc_bound=disc_bound,
        reg_bound=reg_closed,
        reg_bound_closed=reg_closed,
        reg_bound_alt=siegel_quartic_regulator_bound(disc_bound),
        exact_disc=exact,
        provenance=prov,
    )


def field_bounds(n: int, m: int) -> FieldBounds:
    if n == 3:
        return cubic_field_bounds(m)
    if n == 4:
        return quartic_field_bounds(m)
    raise ValueError(f"degree must be 3 or 4, got {n}")


# ---------------------------------------------------------------------------
# Bugeaud's effective measure
# ---------------------------------------------------------------------------

def tower_constant(n: int) -> int:
    """10^(27n) n^(14n), exactly."""
    return 10 ** (27 * n) * n ** (14 * n)


def tau_constant(n: int) -> int:
    """10^(26n) n^(14n), exactly."""
    return 10 ** (26 * n) * n ** (14 * n)


@dataclass(frozen=True)
class EffectiveMeasure:
    """|alpha - y/x| >= c / x^(n - tau), with c held in log-space.

    ``c_log`` is the (negative, enormous) value of log c; ``height_term`` and
    ``tower`` are its two summands kept apart so that orderings survive the
    absorption of the height term.
    """

    n: int
    m: int
    A: float
    R: float
    c_log: LogReal
    tau: float
    height_term: float            # n^2 log A
    tower: LogReal                # 10^(27n) n^(14n) R
    chain_checks: dict[str, bool] = field(default_factory=dict)

    @property
    def c(self) -> LogReal:
        return LogReal.exp(self.c_log.to_float())

    def c_order_key(self) -> tuple[float, float]:
        """Larger key <=> larger c."""
        return (-self.tower.log_magnitude, -self.height_term)


def _log_le(lhs_logs: list[float], rhs_logs: list[float]) -> bool:
    return math.fsum(lhs_logs) <= math.fsum(rhs_logs)


def bugeaud_measure(n: int, m: int, A: Optional[float] = None,
                    R: Optional[float] = None) -> EffectiveMeasure:
    """Bugeaud's (c, tau) for alpha = m^(1/n).

    The height bound defaults to max(e, m), the naive height of x^n - m, and
    the regulator bound to the closed form the gap proofs use.  Overrides for
    ``A`` and ``R`` exist for monotonicity studies.
    """
    if n not in (3, 4):
        raise ValueError(f"degree must be 3 or 4, got {n}")
    r = integer_nth_root(m, n)
    if r ** n == m:
        raise ValueError(f"{m}^(1/{n}) = {r} is rational")
    fb = field_bounds(n, m)
    if A is None:
        A = max(math.e, float(m))
    if A < math.e:
        raise ValueError("height bound A must be >= e")
    if R is None:
        R = fb.reg_bound_closed
    if R <= 0:
        raise ValueError("regulator bound must be positive")

    tower = LogReal.from_value(tower_constant(n)) * LogReal.from_value(R)
    height = n * n * math.log(A)
    c_log = -(tower + LogReal.from_value(height))
    tau = 1.0 / (float(tau_constant(n)) * R)

    checks: dict[str, bool] = {}
    t = m
    if n == 3:
        lm = math.log(t * math.log(6 * t))
        checks["10^78 3^42 R <= 10^99 t log 6t"] = _log_le(
            [math.log(tau_constant(3)), math.log(R)], [99 * math.log(10), lm])
        checks["10^81 3^42 R <= 10^102 t log 6t"] = _log_le(
            [math.log(tower_constant(3)), math.log(R)], [102 * math.log(10), lm])
        checks["R <= t log 6t"] = R <= t * math.log(6 * t)
    else:
        lm = 1.5 * math.log(t) + 3 * math.log(math.log(8 * t))
        checks["10^104 4^56 R <= 10^142 t^(3/2) log^3 8t"] = _log_le(
            [math.log(tau_constant(4)), math.log(R)], [142 * math.log(10), lm])
        checks["10^108 4^56 R <= 10^143 t^(3/2) log^3 8t"] = _log_le(
            [math.log(tower_constant(4)), math.log(R)], [143 * math.log(10), lm])
    return EffectiveMeasure(n, m, A, R, c_log, tau, height, tower, checks)


# ---------------------------------------------------------------------------
# Bennett's bound for cbrt(2)
# ---------------------------------------------------------------------------

BENNETT_BITS = 64


def bennett_gap(u: int) -> Fraction:
    """Rational r <= 1 / (4 u^2.45), within a relative 2^-64 of it.

    u^2.45 = (u^49)^(1/20); its integer root at 64 fractional bits, rounded
    up, gives an upper bound for the denominator.
    """
    if u < 1:
        raise ValueError("u must be positive")
    N = u ** 49 << (20 * BENNETT_BITS)
    r = integer_nth_root(N, 20)
    if r ** 20 != N:
        r += 1
    return Fraction(1 << BENNETT_BITS, 4 * r)


# ---------------------------------------------------------------------------
# Gap-theorem cutoffs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cutoff:
    """Upper bound on log u (cubic) or log x (quartic) for fixed t, l."""

    family: Family
    t: int
    l: int
    log_max: float                 # simplified closed form
    raw_log_max: float             # straight from the approximation inequality
    intermediate: float
    exponent_denominator: float    # 1 / (exponent on u or x)
    small_t_branch: Optional[bool] = None   # t <= log^2 a, when a is supplied


def _branch(t: int, a: Optional[int]) -> Optional[bool]:
    if a is None:
        return None
    return t <= math.log(a) ** 2


def cutoff_cubic(t: int, l: int, a: Optional[int] = None) -> Cutoff:
    """log u bound from u^(1/(10^99 t L)) < l^2 t^(34/3) exp(10^102 t L), L = log 6t."""
    if t < 2 or l < 1:
        raise ValueError("need t >= 2 and l >= 1")
    L = math.log(6 * t)
    ll = math.log(l)
    expo = 1e99 * t * L
    raw = expo * (2 * ll + 34.0 / 3.0 * math.log(t) + 1e102 * t * L)
    mid = 1e201 * (t * t * L * L + t * L * L + 2 * ll * t * L)
    simple = 1e202 * (1 + ll) * t * t * L * L
    if not raw <= mid <= simple:
        raise AssertionError(f"cubic cutoff chain out of order for t={t}, l={l}")
    return Cutoff(Family.CUBIC_TRIPLE, t, l, simple, raw, mid, expo, _branch(t, a))


def cutoff_quartic(t: int, l: int, a: Optional[int] = None) -> Cutoff:
    """log x bound from x^(1/(10^142 t^1.5 L^3)) < |l| t^(69/4) exp(10^143 t^1.5 L^3), L = log 8t."""
    if t < 2 or l == 0:
        raise ValueError("need t >= 2 and l != 0")
    L3 = math.log(8 * t) ** 3
    expo = 1e142 * t ** 1.5 * L3
    raw = expo * (math.log(abs(l)) + 69.0 / 4.0 * math.log(t) + 1e143 * t ** 1.5 * L3)
    simple = 1e286 * math.log(abs(l) + 2) * t ** 3 * L3 * L3
    if not raw <= simple:
        raise AssertionError(f"quartic cutoff chain out of order for t={t}, l={l}")
    return Cutoff(Family.QUARTIC, t, l, simple, raw, raw, expo, _branch(t, a))


def _loglog(a: int) -> tuple[float, float]:
    if a < 16:
        raise ValueError(f"a = {a} too small; need a >= 16 so that log log a > 0")
    la = math.log(a)
    return la, math.log(la)


def min_t_cubic(a: int, l: int) -> float:
    """t >= sqrt(log a) / (10^103 sqrt(1 + log l) log log a)."""
    if l < 1:
        raise ValueError("l must be positive")
    la, lla = _loglog(a)
    return math.sqrt(la) / (1e103 * math.sqrt(1 + math.log(l)) * lla)


def min_t_quartic(a: int, l: int) -> float:
    """t >= (log a)^(1/3) / (10^97 (log(|l|+2))^(1/3) (log log a)^2)."""
    if l == 0:
        raise ValueError("l must be non-zero")
    la, lla = _loglog(a)
    return la ** (1 / 3) / (1e97 * math.log(abs(l) + 2) ** (1 / 3) * lla * lla)


def gap_lower_bound(a: int, l: int, family: Family) -> float:
    """Explicit lower bound on b: cbrt(t_min) a (cubic), 0.9 t_min^(1/4) a (quartic)."""
    family = Family(family)
    if family is Family.CUBIC_TRIPLE:
        return min_t_cubic(a, l) ** (1 / 3) * a
    return 0.9 * min_t_quartic(a, l) ** 0.25 * a


# ---------------------------------------------------------------------------
# abc quality
# ---------------------------------------------------------------------------

def abc_quality(A: int, B: int, C: int) -> float:
    """log C / log rad(A B C) for a coprime triple A + B = C."""
    if min(A, B, C) < 1:
        raise ValueError("abc entries must be positive")
    if A + B != C:
        raise ValueError(f"{A} + {B} != {C}")
    if math.gcd(A, B) != 1:
        raise ValueError(f"gcd({A}, {B}) = {math.gcd(A, B)} != 1")
    return math.log(C) / math.log(radical(A * B * C))
