import itertools

import pytest

from redspider.chase import apply_tgd, frontier_matches, tgd_from_cq
from redspider.relcore import Structure, exists_homomorphism, paint
from redspider.spider import (
    IdealSpider, LabelUniverse, NoMatch, apply_spider_algebra, binary_query, compile_swarm,
    decompile_structure, make_spider, spider_query,
)
from redspider.swarm import Swarm

S = 12
LEGS = [None] + list(range(1, S + 1))


def real(kind, s=S):
    return Structure(make_spider(kind, "t", "n", "x.", s).atoms, constants=("c",))


def test_spider_size():
    sp = make_spider(IdealSpider("G", 3, None), "a", "b", "p.", 5)
    assert len(sp) == 1 + 4 * 5
    reds = [p for p, _ in sp.atoms if p.startswith("R:")]
    assert reds == ["R:Cu3"]


def test_universe_needs_reserved_codes():
    with pytest.raises(ValueError):
        LabelUniverse(3)
    with pytest.raises(ValueError):
        spider_query(13, None, 12)


def test_club_rule_matching_is_exact():
    spiders = {(c, u, l): real(IdealSpider(c, u, l)) for c in "GR" for u in LEGS for l in LEGS}
    wrong = []
    for i, j in itertools.product(LEGS, LEGS):
        q = spider_query(i, j, S).canonical
        for color in "GR":
            body = paint(q, color).canonical
            for u, l in itertools.product(LEGS, LEGS):
                try:
                    apply_spider_algebra((i, j), IdealSpider(color, u, l))
                    expected = True
                except NoMatch:
                    expected = False
                if exists_homomorphism(body, spiders[(color, u, l)]) != expected:
                    wrong.append((i, j, color, u, l))
    assert wrong == []


@pytest.mark.parametrize("color", "GR")
def test_club_rule_products(color):
    """Firing f^I_J on a matching spider yields the spider the algebra predicts."""
    s = 6
    legs = [None] + list(range(1, s + 1))
    other = "R" if color == "G" else "G"
    for i, j in itertools.product(legs, legs):
        q = spider_query(i, j, s).canonical
        t = tgd_from_cq(q, (color, other))
        for u in {None, i}:
            for l in {None, j}:
                sp = IdealSpider(color, u, l)
                d = Structure(make_spider(sp, "a", "b", "x.", s).atoms, constants=("a", "b", "c"))
                (fr,) = frontier_matches(t, d)
                out = decompile_structure(apply_tgd(d, t, fr), s)
                made = [lab for lab, _, _ in out.edges if lab.color == other]
                assert made == [apply_spider_algebra((i, j), sp)]


def test_binary_query_glues_at_the_right_vertex():
    w = binary_query((5, None), (6, None), "wedge", 6)
    v = binary_query((5, None), (6, None), "vee", 6)
    heads_w = [args for p, args in w.canonical.canonical.atoms if p == "H"]
    heads_v = [args for p, args in v.canonical.canonical.atoms if p == "H"]
    assert heads_w[0][2] == heads_w[1][2] and heads_w[0][1] != heads_w[1][1]
    assert heads_v[0][1] == heads_v[1][1] and heads_v[0][2] != heads_v[1][2]


def test_compile_merges_knees_by_class():
    m = Swarm([(IdealSpider("G"), "a", "b"), (IdealSpider("R", 5, None), "b", "v")])
    d = compile_swarm(m, 6)
    # the red spider's marked leg 5 has a green calf, so it shares the green knee
    assert {args[1] for p, args in d.atoms if p.endswith(":Tu5")} == {"k.G.u5"}
    assert {args[1] for p, args in d.atoms if p.endswith(":Tu4")} == {"k.G.u4", "k.R.u4"}
    assert decompile_structure(d, 6) == m


def test_decompile_ignores_broken_spiders():
    d = Structure(make_spider(IdealSpider("G"), "a", "b", "x.", 5).atoms[:-1], constants=("a", "b", "c"))
    assert len(decompile_structure(d, 5)) == 0


def test_tail_must_differ_from_antenna():
    with pytest.raises(ValueError):
        make_spider(IdealSpider("G"), "a", "a", "x.", 5)
