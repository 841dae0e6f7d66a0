"""Exact integer utilities: n-th roots, factorization, normal forms and
certified comparisons against real n-th roots.

Everything here is a pure function of its arguments.  Real quantities that
are too large for a float (Bugeaud-type constants) live in :class:`LogReal`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Union

from .errors import FactorizationError

Rational = Union[int, Fraction]

TRIAL_LIMIT = 10**6
RHO_BUDGET = 2_000_000
ROOT_START_BITS = 128

# |log a - log b| beyond this and the smaller summand is dropped.
ABSORB_LOG_GAP = 40.0


# ---------------------------------------------------------------------------
# LogReal
# ---------------------------------------------------------------------------

@total_ordering
@dataclass(frozen=True)
class LogReal:
    """A real number stored as ``sign * exp(log_magnitude)``.

    Zero is ``sign == 0`` with ``log_magnitude == -inf``.  Products and
    quotients are exact in log-space; sums fall back on the absorption rule
    (a summand more than ``ABSORB_LOG_GAP`` nats smaller is dropped).
    """

    sign: int
    log_magnitude: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_magnitude", -math.inf)
        elif math.isnan(self.log_magnitude) or math.isinf(self.log_magnitude):
            raise ValueError("non-zero LogReal needs a finite log_magnitude")

    @classmethod
    def zero(cls) -> LogReal:
        return cls(0, -math.inf)

    @classmethod
    def from_value(cls, x: Union[int, float, Fraction]) -> LogReal:
        if x == 0:
            return cls.zero()
        sign = 1 if x > 0 else -1
        mag = abs(x)
        if isinstance(mag, Fraction):
            lm = math.log(mag.numerator) - math.log(mag.denominator)
        else:
            # math.log accepts arbitrarily large Python ints
            lm = math.log(mag)
        return cls(sign, lm)

    @classmethod
    def exp(cls, x: float) -> LogReal:
        """The positive number ``e**x``."""
        return cls(1, float(x))

    @property
    def log10_magnitude(self) -> float:
        return self.log_magnitude / math.log(10.0)

    def to_float(self) -> float:
        """Nearest float; overflows to +-inf and underflows to 0.0."""
        if self.sign == 0:
            return 0.0
        if self.log_magnitude > 709.78:
            return self.sign * math.inf
        return self.sign * math.exp(self.log_magnitude)

    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.log_magnitude)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.log_magnitude)

    def __mul__(self, other: object) -> LogReal:
        o = _coerce(other)
        if self.sign == 0 or o.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * o.sign, self.log_magnitude + o.log_magnitude)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> LogReal:
        o = _coerce(other)
        if o.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        if self.sign == 0:
            return LogReal.zero()
        return LogReal(self.sign * o.sign, self.log_magnitude - o.log_magnitude)

    def __rtruediv__(self, other: object) -> LogReal:
        return _coerce(other) / self

    def __pow__(self, exponent: float) -> LogReal:
        if self.sign < 0:
            raise ValueError("real power of a negative LogReal")
        if self.sign == 0:
            if exponent <= 0:
                raise ZeroDivisionError("0 ** non-positive")
            return LogReal.zero()
        return LogReal(1, self.log_magnitude * exponent)

    def __add__(self, other: object) -> LogReal:
        o = _coerce(other)
        if self.sign == 0:
            return o
        if o.sign == 0:
            return self
        big, small = (self, o) if self.log_magnitude >= o.log_magnitude else (o, self)
        gap = big.log_magnitude - small.log_magnitude
        if gap > ABSORB_LOG_GAP:
            return big
        if big.sign == small.sign:
            return LogReal(big.sign, big.log_magnitude + math.log1p(math.exp(-gap)))
        if gap == 0.0:
            return LogReal.zero()
        return LogReal(big.sign, big.log_magnitude + math.log1p(-math.exp(-gap)))

    __radd__ = __add__

    def __sub__(self, other: object) -> LogReal:
        return self + (-_coerce(other))

    def __rsub__(self, other: object) -> LogReal:
        return _coerce(other) - self

    def _key(self) -> tuple[int, float]:
        # sign first, then magnitude (reversed for negatives)
        if self.sign == 0:
            return (0, 0.0)
        return (self.sign, self.sign * self.log_magnitude)

    def __eq__(self, other: object) -> bool:
        try:
            o = _coerce(other)
        except TypeError:
            return NotImplemented
        return self._key() == o._key()

    def __lt__(self, other: object) -> bool:
        o = _coerce(other)
        return self._key() < o._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        if self.sign == 0:
            return "LogReal(0)"
        s = "-" if self.sign < 0 else ""
        return f"LogReal({s}10^{self.log10_magnitude:.6g})"


def _coerce(x: object) -> LogReal:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, (int, float, Fraction)):
        return LogReal.from_value(x)
    raise TypeError(f"cannot combine LogReal with {type(x).__name__}")


# ---------------------------------------------------------------------------
# Roots
# ---------------------------------------------------------------------------

def integer_nth_root(N: int, n: int) -> int:
    """Largest ``r`` with ``r**n <= N``.

    >>> integer_nth_root(127, 3)
    5
    """
    if n < 2:
        raise ValueError(f"root degree must be >= 2, got {n}")
    if N < 0:
        raise ValueError("integer_nth_root of a negative number")
    if N < 2:
        return N
    if n == 2:
        return math.isqrt(N)
    if N.bit_length() <= 104:
        r = int(round(float(N) ** (1.0 / n)))
    else:
        # Newton iteration from above
        r = 1 << -(-N.bit_length() // n)
        while True:
            y = ((n - 1) * r + N // r ** (n - 1)) // n
            if y >= r:
                break
            r = y
    while r ** n > N:
        r -= 1
    while (r + 1) ** n <= N:
        r += 1
    return r


def is_perfect_power(N: int, n: int) -> bool:
    return N >= 0 and integer_nth_root(N, n) ** n == N


def root_enclosure(t: int, n: int, bits: int) -> tuple[Fraction, Fraction]:
    """Dyadic ``lo <= t**(1/n) <= hi`` with ``hi - lo <= 2**-bits``.

    ``lo == hi`` exactly when ``t`` is a perfect ``n``-th power.
    """
    scaled = t << (n * bits)
    r = integer_nth_root(scaled, n)
    den = 1 << bits
    if r ** n == scaled:
        return Fraction(r, den), Fraction(r, den)
    return Fraction(r, den), Fraction(r + 1, den)


class Gap(str, Enum):
    LE = "LE"
    GT = "GT"


def _abs_interval(lo: Fraction, hi: Fraction) -> tuple[Fraction, Fraction]:
    if lo >= 0:
        return lo, hi
    if hi <= 0:
        return -hi, -lo
    return Fraction(0), max(-lo, hi)


def certified_root_gap(t: int, n: int, v: int, u: int, bound: Rational) -> Gap:
    """Decide ``|t**(1/n) - v/u| <= bound`` (LE) or ``> bound`` (GT).

    Perfect powers are compared exactly.  Otherwise the root is enclosed in
    dyadic intervals starting at ``ROOT_START_BITS`` fractional bits, doubling
    until the comparison is decided; equality is impossible for an irrational
    root against a rational bound, so the loop terminates.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if n < 2:
        raise ValueError("n must be >= 2")
    if u <= 0:
        raise ValueError("u must be positive")
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    q = Fraction(v, u)

    r = integer_nth_root(t, n)
    if r ** n == t:
        return Gap.LE if abs(r - q) <= bound else Gap.GT

    bits = ROOT_START_BITS
    while True:
        lo, hi = root_enclosure(t, n, bits)
        dlo, dhi = _abs_interval(lo - q, hi - q)
        if dhi <= bound:
            return Gap.LE
        if dlo > bound:
            return Gap.GT
        bits *= 2


def root_within_relative(t: int, n: int, q: Fraction, c: Fraction) -> bool:
    """Exact test of ``|t**(1/n) - q| <= c * t**(1/n)`` for rational q > 0, c >= 0.

    Equivalent to ``q/(1+c) <= alpha`` and, when ``c < 1``, ``alpha <= q/(1-c)``;
    each side is a comparison of rational n-th powers with ``t``.
    """
    q = Fraction(q)
    c = Fraction(c)
    if q <= 0 or c < 0:
        raise ValueError("need q > 0 and c >= 0")
    lower = q / (1 + c)
    if lower ** n > t:
        return False
    if c < 1:
        upper = q / (1 - c)
        if upper ** n < t:
            return False
    return True


def root_between(t: int, n: int, lo: Fraction, hi: Fraction) -> bool:
    """Exact test of ``lo < t**(1/n) < hi`` for rationals ``0 <= lo``."""
    lo, hi = Fraction(lo), Fraction(hi)
    return lo ** n < t < hi ** n if hi > 0 else False


# ---------------------------------------------------------------------------
# Factorization
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1)
def _small_primes(limit: int = TRIAL_LIMIT) -> tuple[int, ...]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p::p] = bytes(len(range(p * p, limit + 1, p)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin; deterministic for n < 3.3e24 (the first 13 prime bases)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def pollard_brent(n: int, budget: int = RHO_BUDGET, seed: int = 1) -> int:
    """A non-trivial factor of composite odd ``n`` (Brent's cycle variant)."""
    rng = random.Random(seed)
    spent = 0
    while spent < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
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
            spent += r
            r *= 2
            if spent >= budget:
                break
        if g == n:
            # batch overshot: backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactorizationError(f"Pollard-rho budget of {budget} steps exhausted on {n}")


def factorize(n: int, budget: int = RHO_BUDGET) -> dict[int, int]:
    """Prime factorization ``{p: e}`` of ``n >= 1``.

    Trial division by primes below ``TRIAL_LIMIT``, then Pollard-rho (Brent)
    on what is left.  Raises :class:`FactorizationError` rather than ever
    returning an incomplete factorization.
    """
    if n < 1:
        raise ValueError(f"factorize needs n >= 1, got {n}")
    out: dict[int, int] = {}
    exhausted = False
    for p in _small_primes():
        if p * p > n:
            exhausted = True
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    if n == 1:
        return out
    if exhausted or n < TRIAL_LIMIT * TRIAL_LIMIT:
        # no prime factor below sqrt(n) survives trial division
        out[n] = out.get(n, 0) + 1
        return dict(sorted(out.items()))
    stack = [n]
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack.extend((r, r))
            continue
        d = pollard_brent(m, budget)
        stack.extend((d, m // d))
    return dict(sorted(out.items()))


def radical(n: int) -> int:
    """Product of the distinct primes dividing ``n``; ``radical(1) == 1``."""
    out = 1
    for p in factorize(n):
        out *= p
    return out


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CubicNormalForm:
    """``m = a * b**2 * c**3`` with ``a, b`` coprime and squarefree."""

    a: int
    b: int
    c: int
    m: int

    @property
    def cube_free(self) -> int:
        return self.a * self.b ** 2


@dataclass(frozen=True)
class QuarticNormalForm:
    """``m = u * v**2 * w**3 * s**4`` with ``u, v, w`` pairwise coprime squarefree."""

    u: int
    v: int
    w: int
    s: int
    m: int

    @property
    def fourth_power_free(self) -> int:
        return self.u * self.v ** 2 * self.w ** 3


def _check_m(m: int) -> None:
    if m < 2:
        raise ValueError(f"normal forms need m >= 2, got {m}")


def cubic_normal_form(m: int) -> CubicNormalForm:
    _check_m(m)
    parts = [1, 1, 1]  # a, b, c
    for p, e in factorize(m).items():
        q, r = divmod(e, 3)
        parts[2] *= p ** q
        if r:
            parts[r - 1] *= p
    a, b, c = parts
    return CubicNormalForm(a, b, c, m)


def quartic_normal_form(m: int) -> QuarticNormalForm:
    _check_m(m)
    parts = [1, 1, 1, 1]  # u, v, w, s
    for p, e in factorize(m).items():
        q, r = divmod(e, 4)
        parts[3] *= p ** q
        if r:
            parts[r - 1] *= p
    u, v, w, s = parts
    return QuarticNormalForm(u, v, w, s, m)


def is_squarefree(n: int) -> bool:
    return n >= 1 and all(e == 1 for e in factorize(n).values())
