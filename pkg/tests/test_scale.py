import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssm_loom.scale import THETA, HypothesisSet, Intensity, NotationError, all_hypotheses, hypothesis_from_notation

point_names = st.sampled_from([p.name for p in Intensity])


def test_scale_order_is_fixed():
    assert [p.name for p in sorted(Intensity)] == ["SN", "NE", "WN", "IF", "WP", "PO", "SP"]
    assert len(Intensity) == 7


def test_all_127_subsets_representable():
    hs = list(all_hypotheses())
    assert len(hs) == 127
    assert len(set(hs)) == 127
    assert hs[-1] == THETA and THETA.is_theta


@pytest.mark.parametrize("mask", [0, 128, -1])
def test_empty_or_out_of_range_rejected(mask):
    with pytest.raises(ValueError):
        HypothesisSet(mask)


def test_equality_ignores_construction_order():
    assert HypothesisSet.of("WP", "IF") == HypothesisSet.of("IF", "WP")
    assert hash(HypothesisSet.of("WP", "IF")) == hash(HypothesisSet.of("IF", "WP"))


@pytest.mark.parametrize(
    "text, expected",
    [
        ("SP", {"SP"}),
        ("{IF,WP}", {"IF", "WP"}),
        ("{ WP , IF }", {"IF", "WP"}),
        ("WN..PO", {"WN", "IF", "WP", "PO"}),
        ("PO..WN", {"WN", "IF", "WP", "PO"}),
        ("{WN,PO}", {"WN", "PO"}),
        ("sp", {"SP"}),
    ],
)
def test_notation(text, expected):
    assert {p.name for p in hypothesis_from_notation(text)} == expected


@pytest.mark.parametrize("text, token", [("XX", "XX"), ("{IF,QQ}", "QQ"), ("{}", "{}"), ("IF..ZZ", "ZZ")])
def test_notation_errors_name_the_token(text, token):
    with pytest.raises(NotationError, match="empty braces" if token == "{}" else token):
        hypothesis_from_notation(text)


@given(point_names)
def test_degenerate_range_is_singleton(p):
    assert hypothesis_from_notation(f"{p}..{p}") == hypothesis_from_notation(p)


@given(st.integers(1, 127))
def test_notation_round_trip(mask):
    h = HypothesisSet(mask)
    assert hypothesis_from_notation(h.notation()) == h


@given(st.integers(1, 127))
def test_mirror_is_involution(mask):
    h = HypothesisSet(mask)
    assert h.mirrored().mirrored() == h
    assert len(h.mirrored()) == len(h)


def test_subset_and_midpoint():
    assert HypothesisSet.of("SP") <= HypothesisSet.of("PO", "SP")
    assert not HypothesisSet.of("IF") <= HypothesisSet.of("PO", "SP")
    assert HypothesisSet.of("IF").midpoint == 3
    assert HypothesisSet.of("IF", "WP").notation() == "{IF,WP}"
    assert str(HypothesisSet.of("SP")) == "SP"
