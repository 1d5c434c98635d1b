from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from redspider.chase import (
    NotATrigger, apply_tgd, chase, chase_prefixes, check_determinacy_condition, satisfies,
    tgd_from_cq, tgds_for_queries, views_agree,
)
from redspider.edgegraph import saturate
from redspider.greengraph import GreenGraph, precompile_rules, rules_tgds
from redspider.relcore import ConjunctiveQuery, Structure, dalt, exists_homomorphism, paint
from redspider.sepexample import level0_seed, t_inf
from redspider.swarm import compile_rules, universe_for

from test_relcore import queries, structures


def path_query():
    return ConjunctiveQuery(Structure([("E", ("x", "y")), ("E", ("y", "z"))]), ("x", "z"))


def test_tgd_copies_a_match_to_the_other_color():
    t = tgd_from_cq(path_query(), ("G", "R"))
    d = paint(Structure([("E", ("u", "v")), ("E", ("v", "w"))]), "G")
    out = apply_tgd(d, t, ("u", "w"))
    reds = [a for a in out.atoms if a[0] == "R:E"]
    assert len(reds) == 2
    assert {reds[0][1][0], reds[1][1][1]} == {"u", "w"}


def test_application_is_lazy():
    t = tgd_from_cq(path_query(), ("G", "R"))
    d = paint(Structure([("E", ("u", "v")), ("E", ("v", "w"))]), "G")
    once = apply_tgd(d, t, ("u", "w"))
    assert apply_tgd(once, t, ("u", "w")) is once


def test_non_trigger_rejected():
    t = tgd_from_cq(path_query(), ("G", "R"))
    d = paint(Structure([("E", ("u", "v"))]), "G")
    with pytest.raises(NotATrigger):
        apply_tgd(d, t, ("u", "v"))


def test_chase_reaches_fixpoint_and_models_the_rules():
    ts = tgds_for_queries([path_query()])
    d = paint(Structure([("E", ("u", "v")), ("E", ("v", "w"))]), "G")
    res = chase(ts, d, 5)
    assert res.reached_fixpoint
    assert satisfies(res.structure, ts)
    assert views_agree([path_query()], res.structure)


def test_chase_is_deterministic():
    ts = tgds_for_queries([path_query()])
    d = paint(Structure([("E", ("u", "v")), ("E", ("v", "w")), ("E", ("w", "u"))]), "G")
    a, b = chase(ts, d, 3), chase(ts, d, 3)
    assert a.structure.atoms == b.structure.atoms
    assert a.trigger_log == b.trigger_log


def test_prefixes_agree_with_budgeted_runs():
    ts = tgds_for_queries([path_query()])
    d = paint(Structure([("E", ("u", "v")), ("E", ("v", "w"))]), "G")
    pre = chase_prefixes(ts, d, 3)
    for i, p in enumerate(pre):
        assert p == chase(ts, d, i).structure


def test_query_determines_itself():
    q = path_query()
    d = chase(tgds_for_queries([q]), paint(Structure([("E", ("u", "v")), ("E", ("v", "w"))]), "G"), 5).structure
    assert check_determinacy_condition([q], q, d).holds


def test_condition_on_small_models():
    edge = ConjunctiveQuery(Structure([("E", ("x", "y"))]), ("x", "y"))
    loop = ConjunctiveQuery(Structure([("E", ("x", "x"))]), ())
    d = Structure([("G:E", ("u", "u")), ("R:E", ("u", "u"))])
    assert check_determinacy_condition([edge], loop, d).holds
    d2 = Structure([("G:E", ("u", "u")), ("R:E", ("u", "u")), ("G:E", ("v", "w")), ("R:E", ("v", "w"))])
    assert check_determinacy_condition([edge], loop, d2).holds
    bad = check_determinacy_condition([path_query()], loop, Structure([("G:E", ("u", "u")), ("R:E", ("u", "v"))]))
    assert not bad.models_dependencies and bad.holds


def test_path_rules_fire_once_per_stage_after_the_first():
    l1 = precompile_rules(t_inf())
    s = universe_for(l1)
    qs = [b.canonical for b in compile_rules(l1, s)]
    res = chase(tgds_for_queries(qs), level0_seed(s), 5)
    per_stage = Counter(r.stage for r in res.trigger_log)
    assert per_stage[1] == len(qs)
    assert all(per_stage[k] == 1 for k in range(2, 6))
    g = saturate(rules_tgds(t_inf()), GreenGraph.seed(), 8)
    assert Counter(a.stage for a in g.log) == Counter(range(1, 9))


@settings(max_examples=40, deadline=None)
@given(st.lists(queries(), min_size=1, max_size=2), structures(max_elems=3, max_atoms=5))
def test_chase_collapses_back_onto_its_source(qs, d):
    res = chase(tgds_for_queries(qs), paint(d, "G"), 4)
    assert exists_homomorphism(dalt(res.structure), d)
