import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaplab.errors import NotDivisibleError, VerificationError
from gaplab.reduction import (
    DivisibilityHit,
    Family,
    SizeStatus,
    reduce_cubic,
    reduce_hit,
    reduce_quartic,
    verify_divisor_chain,
)
from gaplab.search import SearchConfig, search_divisible

CUBIC, QUARTIC = Family.CUBIC_TRIPLE, Family.QUARTIC


def cubic_hit(a, b, l):
    return DivisibilityHit.from_pair(CUBIC, a, b, l)


def quartic_hit(a, b, l):
    return DivisibilityHit.from_pair(QUARTIC, a, b, l)


# --- hits -------------------------------------------------------------------

def test_from_pair_computes_exact_quotient():
    assert cubic_hit(3, 4, 1).t == 2
    assert quartic_hit(2, 12, 1).t == 1044


def test_from_pair_rejects_non_divisible():
    with pytest.raises(NotDivisibleError):
        cubic_hit(3, 5, 1)
    with pytest.raises(NotDivisibleError):
        quartic_hit(2, 5, 1)


def test_not_divisible_is_a_value_error():
    with pytest.raises(ValueError):
        cubic_hit(4, 7, 1)


def test_forged_quotient_rejected_before_reduction():
    with pytest.raises(NotDivisibleError):
        reduce_cubic(DivisibilityHit(3, 4, 1, 3, CUBIC))
    with pytest.raises(NotDivisibleError):
        reduce_quartic(DivisibilityHit(1, 2, 1, 9, QUARTIC))


# --- cubic ------------------------------------------------------------------

@pytest.mark.parametrize("a, b, l, t, x, y, D, u, v, s", [
    (3, 4, 1, 2, 4, 5, 1, 4, 5, 3),
    (1, 2, 1, 4, 2, 3, 1, 2, 3, 5),
    (1, 3, 1, 10, 2, 4, 2, 1, 2, 2),
])
def test_reduce_cubic_examples(a, b, l, t, x, y, D, u, v, s):
    hit = cubic_hit(a, b, l)
    assert hit.t == t
    r = reduce_cubic(hit)
    assert (r.x, r.y, r.D, r.u, r.v, r.s) == (x, y, D, u, v, s)
    assert v ** 3 - t * u ** 3 == -s
    assert ((t - 1) * t * (t + 1) * l * l) % s == 0
    assert r.ab == (a, b)
    assert r.divided_bound_holds


@pytest.mark.parametrize("u, v, t, l, bound, s", [
    (4, 5, 2, 1, 6, 3),
    (2, 3, 4, 1, 60, 5),
    (1, 2, 10, 1, 990, 2),
])
def test_divisor_chain_examples(u, v, t, l, bound, s):
    rep = verify_divisor_chain(u, v, t, l)
    assert rep.final_bound == bound
    assert rep.s == s
    assert rep.ok and rep.coprime_u3
    # every reported gcd is a multiple of s
    assert all(g % s == 0 for _, g in rep.links)


def test_divisor_chain_reports_broken_link():
    # (u, v, t, l) = (1, 3, 2, 1): s = 2 - 27 = -25 does not divide (2 - 3) = -1
    rep = verify_divisor_chain(1, 3, 2, 1)
    assert not rep.ok
    assert any("does not divide" in msg for msg in rep.violations)


def test_divisor_chain_preconditions():
    with pytest.raises(ValueError):
        verify_divisor_chain(2, 4, 3, 1)
    with pytest.raises(ValueError):
        verify_divisor_chain(1, 2, 8, 1)


def test_reduce_cubic_rejects_bad_input():
    with pytest.raises(ValueError):
        reduce_cubic(quartic_hit(1, 2, 1))
    with pytest.raises(ValueError):
        reduce_cubic(DivisibilityHit(4, 3, 1, 2, CUBIC))


# --- quartic ----------------------------------------------------------------

@pytest.mark.parametrize("a, b, l, t, D, x, y, s", [
    (1, 2, 1, 10, 1, 1, 2, 6),
    (2, 12, 1, 1044, 2, 1, 6, 252),
    (2, 3, -1, 6, 1, 2, 3, -15),
])
def test_reduce_quartic_examples(a, b, l, t, D, x, y, s):
    hit = quartic_hit(a, b, l)
    assert hit.t == t
    r = reduce_quartic(hit)
    assert (r.D, r.x, r.y, r.s) == (D, x, y, s)
    assert y ** 4 - t * x ** 4 == s
    assert (l * t * (t - 1)) % s == 0
    # a <= 2 is degenerate: nothing is ever flagged as a failure
    assert r.degenerate and not r.suspicious


def test_reduce_quartic_large_instance_holds():
    # a = 6 exceeds the degenerate range; x = 1 stays below the size threshold
    hits = search_divisible(SearchConfig(QUARTIC, 1, 3, 60, 3000))
    assert hits
    for h in hits:
        r = reduce_quartic(h)
        for st_ in r.statuses.values():
            assert st_ in (SizeStatus.HOLDS, SizeStatus.BELOW_THRESHOLD)


def test_reduce_quartic_rejects_zero_product():
    with pytest.raises(NotDivisibleError):
        reduce_quartic(DivisibilityHit(1, 2, -1, 2, QUARTIC))


def test_reduce_hit_dispatches():
    assert reduce_hit(cubic_hit(3, 4, 1)).u == 4
    assert reduce_hit(quartic_hit(1, 2, 1)).s == 6


# --- round trip over census output -----------------------------------------

@pytest.fixture(scope="module")
def cubic_census():
    hits = []
    for l in (1, 2, 3):
        hits += search_divisible(SearchConfig(CUBIC, l, 2, 120, 1500))
    return hits


@pytest.fixture(scope="module")
def quartic_census():
    hits = []
    for l in (-1, 1, 2):
        a_min = 2 if l == -1 else 1
        hits += search_divisible(SearchConfig(QUARTIC, l, a_min, 80, 800))
    return hits


def test_cubic_round_trip(cubic_census):
    assert len(cubic_census) > 1000
    for h in cubic_census:
        r = reduce_cubic(h)
        assert math.gcd(r.u, r.v) == 1
        assert r.D * r.u == h.a + h.l and r.D * r.v == h.b + h.l
        assert ((r.t - 1) * r.t * (r.t + 1) * h.l ** 2) % r.s == 0


def test_quartic_round_trip(quartic_census):
    assert len(quartic_census) > 500
    for h in quartic_census:
        r = reduce_quartic(h)
        assert math.gcd(r.x, r.y) == 1
        assert r.D * r.x == h.a and r.D * r.y == h.b
        assert (h.l * r.t * (r.t - 1)) % r.s == 0
        assert not r.suspicious


def test_cubic_sign_observation(cubic_census):
    # s > 0 is only proved for large u; record counterexamples rather than assert
    negative = [h for h in cubic_census if not reduce_cubic(h).s_positive]
    print(f"cubic hits with s <= 0: {len(negative)} of {len(cubic_census)}")
    assert all(h.t >= 2 for h in negative)


@given(st.integers(1, 300), st.integers(1, 5), st.integers(2, 40))
def test_reduction_is_a_divisibility_oracle(a, l, k):
    b = a + k
    pa = a * (a + l) * (a + 2 * l)
    pb = b * (b + l) * (b + 2 * l)
    if pb % pa:
        with pytest.raises(NotDivisibleError):
            cubic_hit(a, b, l)
    else:
        hit = cubic_hit(a, b, l)
        if hit.t >= 2:
            r = reduce_cubic(hit)
            assert r.v ** 3 - r.t * r.u ** 3 == -r.s


def test_verification_error_is_distinct():
    assert not issubclass(VerificationError, NotDivisibleError)
