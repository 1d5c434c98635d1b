import pytest
from hypothesis import given, settings, strategies as st

from redspider.edgegraph import saturate
from redspider.greengraph import (
    GreenGraph, RuleL2, has_12_pattern, is_alpha_beta_word, parity_glasses, rules_tgds, words,
    words_by_target,
)
from redspider.sepexample import DEFAULT_CODES, t_inf

SK = DEFAULT_CODES.skeleton
A, B1, B0, E1, E0 = SK.alpha, SK.beta1, SK.beta0, SK.eta1, SK.eta0


def path_words(k):
    return ({tuple([A] + [B1, B0] * j + [E1]) for j in range(k + 1)}
            | {tuple([A] + [B1, B0] * j + [B1, E0]) for j in range(k + 1)})


@pytest.mark.parametrize("k", range(1, 8))
def test_words_of_the_path_chase(k):
    g = saturate(rules_tgds(t_inf()), GreenGraph.seed(), 2 * k + 2).graph
    assert words(g, 2 * k + 3) == path_words(k)


def test_words_split_by_endpoint():
    g = saturate(rules_tgds(t_inf()), GreenGraph.seed(), 6).graph
    split = words_by_target(g, 9)
    assert all(w[-1] == E1 for w in split["a"])
    assert all(w[-1] == E0 for w in split["b"])


def test_parity_glasses_reverse_odd_edges():
    g = GreenGraph([(None, "a", "b"), (6, "a", "x"), (5, "y", "x")])
    assert parity_glasses(g) == [(6, "a", "x"), (5, "x", "y")]


def test_words_need_the_seed():
    with pytest.raises(ValueError):
        words(GreenGraph([(6, "a", "b")]), 3)


def test_first_return_stops_the_word():
    # α to b, then an edge leaving b: a run that already hit b is not extended
    g = GreenGraph([(None, "a", "b"), (6, "a", "b"), (8, "b", "x"), (10, "x", "b")])
    assert words(g, 4) == {(6,)}


def test_12_pattern():
    assert has_12_pattern(GreenGraph([(1, "u", "w"), (2, "v", "w")])) == (True, ("u", "v", "w"))
    assert has_12_pattern(GreenGraph([(1, "u", "w"), (2, "u", "w")]))[0]
    assert not has_12_pattern(GreenGraph([(1, "u", "w"), (2, "w", "u")]))[0]


def test_rule_validation():
    with pytest.raises(ValueError):
        RuleL2(5, 6, 5, 8, "wedge")
    with pytest.raises(ValueError):
        RuleL2(5, 6, 3, 8, "vee")
    with pytest.raises(ValueError):
        RuleL2(5, 6, 7, 8, "sideways")


def test_rule_is_two_tgds():
    fwd, bwd = RuleL2(None, None, 6, 7, "wedge").tgds()
    assert fwd.body == (None, None) and fwd.head == (6, 7)
    assert bwd.body == (6, 7) and bwd.head == (None, None)


@settings(max_examples=200)
@given(st.lists(st.sampled_from([A, B0, B1, E0]), max_size=8))
def test_alpha_beta_scanner(word):
    expected = len(word) % 2 == 1 and word[0] == A and all(
        word[i] == (B1 if i % 2 else B0) for i in range(1, len(word))) if word else False
    assert is_alpha_beta_word(word, A, B1, B0) == expected


def test_json_round_trip():
    g = saturate(rules_tgds(t_inf()), GreenGraph.seed(), 4).graph
    assert GreenGraph.from_json(g.to_json()) == g
    with pytest.raises(ValueError):
        GreenGraph.from_json({"edges": [{"label": "x", "src": "a", "dst": "b"}]})
