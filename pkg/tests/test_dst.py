import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssm_loom.dst import (
    MassFunction,
    SimpleSupport,
    TotalConflictError,
    belief_of,
    combine,
    combine_all,
    decide_intensity,
    discount_mass,
    from_simple_support,
    plausibility_of,
    vacuous,
)
from ssm_loom.scale import THETA, HypothesisSet

from oracles import joint_combination

SP = HypothesisSet.of("SP")
SN = HypothesisSet.of("SN")
PO_SP = HypothesisSet.of("PO", "SP")
IF_WP = HypothesisSet.of("IF", "WP")


def ss(h, b):
    return from_simple_support(SimpleSupport(h, b))


@st.composite
def masses(draw, max_focal=5):
    n = draw(st.integers(1, max_focal))
    keys = draw(st.lists(st.integers(1, 127), min_size=n, max_size=n, unique=True))
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=n, max_size=n))
    total = math.fsum(weights)
    return MassFunction({HypothesisSet(k): w / total for k, w in zip(keys, weights)})


def to_oracle(m):
    return {frozenset(p.name for p in h): v for h, v in m.items()}


def from_oracle(d):
    return {frozenset(k): v for k, v in d.items()}


# construction


def test_rejects_bad_sum_and_range():
    with pytest.raises(ValueError, match="sum"):
        MassFunction({SP: 0.5})
    with pytest.raises(ValueError, match="outside"):
        MassFunction({SP: 1.5, THETA: -0.5})


def test_sum_tolerance_is_1e_9():
    MassFunction({SP: 0.5 + 5e-10, THETA: 0.5})
    with pytest.raises(ValueError):
        MassFunction({SP: 0.5 + 5e-9, THETA: 0.5})


def test_zero_masses_are_not_focal():
    m = MassFunction({SP: 1.0, SN: 0.0})
    assert list(m) == [SP]


def test_simple_support_examples():
    m = ss(SP, 0.37)
    assert m[SP] == 0.37 and m[THETA] == pytest.approx(0.63, abs=1e-15)
    assert ss(IF_WP, 0.0).is_vacuous
    assert dict(ss(IF_WP, 1.0)) == {IF_WP: 1.0}
    with pytest.raises(ValueError):
        SimpleSupport(SP, 1.2)


# combination examples


def test_agreeing_pair():
    r = combine(ss(SP, 0.5), ss(SP, 0.5))
    assert r.conflict == 0.0
    assert r.combined[SP] == pytest.approx(0.75, abs=1e-12)
    assert r.combined[THETA] == pytest.approx(0.25, abs=1e-12)


def test_conflicting_pair():
    r = combine(ss(SP, 0.6), ss(SN, 0.5))
    assert r.conflict == pytest.approx(0.30, abs=1e-12)
    assert r.combined[SP] == pytest.approx(3 / 7, abs=1e-12)
    assert r.combined[SN] == pytest.approx(2 / 7, abs=1e-12)
    assert r.combined[THETA] == pytest.approx(2 / 7, abs=1e-12)


def test_total_conflict():
    with pytest.raises(TotalConflictError):
        combine(ss(SP, 1.0), ss(SN, 1.0))


def test_combine_all_examples():
    m = ss(SP, 0.37)
    r = combine_all([m])
    assert r.combined == m and r.conflict == 0.0
    r = combine_all([ss(SP, 0.5)] * 3)
    assert r.combined[SP] == pytest.approx(0.875, abs=1e-12)
    a, b = ss(SP, 0.6), ss(SN, 0.5)
    with_v = combine_all([a, b, vacuous()])
    without = combine_all([a, b])
    assert with_v.combined == without.combined
    assert with_v.conflict == without.conflict
    with pytest.raises(ValueError):
        combine_all([])


def test_belief_examples():
    assert belief_of(vacuous(), SP) == 0.0
    m = MassFunction({SP: 0.6, PO_SP: 0.2, THETA: 0.2})
    assert belief_of(m, THETA) == pytest.approx(1.0, abs=1e-12)
    assert belief_of(m, PO_SP) == pytest.approx(0.8, abs=1e-12)
    assert plausibility_of(m, HypothesisSet.of("PO")) == pytest.approx(0.4, abs=1e-12)


def test_discount_examples():
    m = ss(SP, 0.64)
    assert discount_mass(m, 0.0) == m
    assert discount_mass(m, 1.0).is_vacuous
    assert discount_mass(m, 0.2)[SP] == pytest.approx(0.512, abs=1e-12)
    with pytest.raises(ValueError):
        discount_mass(m, 1.1)


def test_decide_examples():
    assert decide_intensity(MassFunction({SP: 0.9, THETA: 0.1})) == (SP, 0.9)
    assert decide_intensity(vacuous()) == (THETA, 0.0)
    h, b = decide_intensity(MassFunction({SP: 0.4, PO_SP: 0.4, THETA: 0.2}))
    assert h == SP and b == pytest.approx(0.4, abs=1e-12)


def test_decide_tie_breaks_on_midpoint_then_order():
    wp, wn, po = (HypothesisSet.of(p) for p in ("WP", "WN", "PO"))
    h, _ = decide_intensity(MassFunction({po: 0.3, wp: 0.3, THETA: 0.4}))
    assert h == wp
    # equal distance from IF: the lower scale position wins
    h, _ = decide_intensity(MassFunction({wp: 0.3, wn: 0.3, THETA: 0.4}))
    assert h == wn


# properties


@given(masses(), masses())
def test_commutative(a, b):
    try:
        ab = combine(a, b)
    except TotalConflictError:
        with pytest.raises(TotalConflictError):
            combine(b, a)
        return
    ba = combine(b, a)
    assert set(ab.combined) == set(ba.combined)
    assert ab.combined.close_to(ba.combined, 1e-12)


@given(masses())
def test_vacuous_is_neutral(m):
    r = combine(m, vacuous())
    assert r.combined == m and r.conflict == 0.0
    assert combine(vacuous(), m).combined == m


@given(masses(), st.floats(0.0, 1.0))
def test_discount_keeps_unit_sum(m, alpha):
    d = discount_mass(m, alpha)
    assert math.fsum(d.values()) == pytest.approx(1.0, abs=1e-9)
    assert d.get(THETA) >= m.get(THETA) - 1e-15


@given(masses(), st.integers(1, 127), st.integers(1, 127))
def test_belief_monotone(m, a, b):
    h1 = HypothesisSet(a & b or a)
    h2 = HypothesisSet(a | b)
    assert h1 <= h2
    assert belief_of(m, h1) <= belief_of(m, h2) + 1e-12
    assert belief_of(m, h1) <= plausibility_of(m, h1) + 1e-12


@settings(max_examples=200)
@given(st.lists(masses(), min_size=1, max_size=4))
def test_matches_joint_oracle(ms):
    expected, empty = joint_combination([to_oracle(m) for m in ms])
    if 1.0 - empty < 1e-12:
        return
    try:
        r = combine_all(ms)
    except TotalConflictError:
        assert 1.0 - empty < 1e-9
        return
    got = from_oracle(to_oracle(r.combined))
    for k in set(got) | set(expected):
        assert got.get(k, 0.0) == pytest.approx(expected.get(k, 0.0), abs=1e-9)
    assert r.conflict == pytest.approx(empty, abs=1e-9)


@given(st.lists(masses(), min_size=2, max_size=4), st.randoms())
def test_fold_order_invariant(ms, rnd):
    try:
        ref = combine_all(ms)
    except TotalConflictError:
        return
    shuffled = list(ms)
    rnd.shuffle(shuffled)
    r = combine_all(shuffled)
    assert r.combined.close_to(ref.combined, 1e-9)
    assert r.conflict == pytest.approx(ref.conflict, abs=1e-9)


@given(st.integers(1, 127), st.lists(st.floats(0.0, 0.999), min_size=1, max_size=8))
def test_agreeing_reinforcement(mask, bs):
    h = HypothesisSet(mask)
    if h.is_theta:
        return
    r = combine_all([ss(h, b) for b in bs])
    bel = belief_of(r.combined, h)
    assert bel == pytest.approx(1.0 - math.prod(1.0 - b for b in bs), abs=1e-9)
    assert bel >= max(bs) - 1e-12
    assert r.conflict == 0.0
