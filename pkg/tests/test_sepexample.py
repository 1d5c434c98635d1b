import pytest

from redspider.edgegraph import isomorphic, saturate
from redspider.greengraph import GreenGraph, has_12_pattern, is_alpha_beta_word, rules_tgds, words
from redspider.relcore import Structure, exists_homomorphism
from redspider.sepexample import (
    DEFAULT_CODES, GRID_TRIGGER, Codes, SkeletonCodes, build_Dy_Dn, build_M_truncated, build_Mt,
    build_two_path, chase_inf, chase_path, foam_lemma_report, frontier_violations, grid_experiment,
    late_fragment, t_box, t_inf, view_difference,
)

from figures import fig3, fig4

SK = DEFAULT_CODES.skeleton


def as_structure(g, constants):
    return Structure([(f"L{lab}", (x, y)) for lab, x, y in g.edges], constants=constants)


def test_codes_are_distinct_and_parity_respecting():
    c = DEFAULT_CODES
    assert c.g("n", "alpha", False, False) == 1 and c.g("w", "alpha", False, False) == 2
    others = [v for lab, v in c.grid.items() if v not in (1, 2)]
    assert all(v % 2 == 0 and v > max(SK.symbols().values()) for v in others)
    with pytest.raises(ValueError):
        SkeletonCodes(alpha=5)


def test_rule_counts():
    assert len(t_inf()) == 3
    assert len(t_box()) == 41
    assert t_box()[0].tgds()[0] == rules_tgds(t_box())[GRID_TRIGGER]


def test_path_chase_is_an_alpha_beta_path():
    g = chase_inf(9).graph
    p = chase_path(g)
    assert p.squares == 4
    ab = {w[:-1] for w in words(g, 11) if w[-1] == SK.eta1}
    assert all(is_alpha_beta_word(w, SK.alpha, SK.beta1, SK.beta0) for w in ab)


def test_figure4_is_the_second_honest_grid():
    mt = build_Mt(2)
    assert isomorphic(GreenGraph(list(mt.graph.edges) + [(None, "a", "b")]), fig4())


def test_figure3_embeds_into_the_glued_grid():
    border = {"v10": "p.b1", "v20": "p.a1", "v30": "p.b2", "v40": "p.a2", "v50": "p.b3",
              "v52": "q.b1", "v51": "q.a1"}
    drawn = fig3().rename(border)
    built = saturate(rules_tgds(t_inf() + t_box()), build_two_path(2, 1), 7).graph
    consts = ("a", "b") + tuple(border.values())
    assert exists_homomorphism(as_structure(drawn, consts), as_structure(built, consts))


@pytest.mark.parametrize("t,tp", [(1, 2), (2, 1), (3, 1), (2, 4)])
def test_unequal_paths_give_a_pattern(t, tp):
    rep = grid_experiment(t, tp)
    assert rep["pattern_found"] and rep["status"] == "pattern"


@pytest.mark.parametrize("t", [1, 2, 3])
def test_equal_paths_never_give_a_pattern(t):
    rep = grid_experiment(t, t)
    assert not rep["pattern_found"]
    assert rep["status"] == "inconclusive"  # the path rules never stop


@pytest.mark.parametrize("t", range(1, 5))
def test_honest_grid(t):
    mt = build_Mt(t)
    assert mt.reached_fixpoint
    assert not has_12_pattern(mt.graph)[0]


def test_honest_grid_sizes_grow_quadratically():
    sizes = [len(build_Mt(t).foam) for t in range(1, 5)]
    assert sizes == [18, 50, 98, 162]


@pytest.mark.parametrize("n", [1, 4, 7, 10])
def test_truncation(n):
    tr = build_M_truncated(n)
    assert not has_12_pattern(tr.graph)[0]
    viol = frontier_violations(tr)
    assert viol["nonlocal"] == []
    assert all(v == [] for v in foam_lemma_report(tr).values())


def test_wider_locality_window_keeps_the_single_violation():
    tr = build_M_truncated(6)
    viol = frontier_violations(tr, distance=2)
    assert len(viol["local"]) == 1 and viol["nonlocal"] == []


def test_foam_report_catches_a_planted_defect():
    tr = build_M_truncated(5)
    mt = tr.grids[1]
    inner = next(e for e in mt.foam if DEFAULT_CODES.grid_label_of(e[0]).border is False)
    tr.graph = GreenGraph(list(tr.graph.edges) + [(SK.alpha, inner[1], "zz")])
    assert foam_lemma_report(tr)["item1"] or foam_lemma_report(tr)["item2"]


def test_late_fragment_at_one(level0):
    setup, pre = level0
    late = late_fragment(1, pre)
    assert set(late.atoms) == set(pre[2].atoms) - set(pre[1].atoms)
    assert not set(late.atoms) & set(pre[1].atoms)
    with pytest.raises(ValueError):
        late_fragment(6, pre)


@pytest.mark.parametrize("i", [1, 2, 3, 4, 5])
def test_green_and_red_halves_differ_by_one_tuple(level0, i):
    setup, pre = level0
    assert view_difference(i, pre, setup)["inf_total"] == 1


@pytest.mark.parametrize("i", [1, 2])
def test_dy_dn(level0, i):
    setup, pre = level0
    rep = build_Dy_Dn(i, pre, setup)
    assert rep["components"] == {"yes": 1 + 2 * i, "no": 1 + 2 * i}
    assert rep["yes_has_spider"] and not rep["no_has_spider"]
    assert rep["view_difference_total"] == 1
