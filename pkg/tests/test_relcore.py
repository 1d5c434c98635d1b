import itertools

import pytest
from hypothesis import given, settings, strategies as st

from redspider.relcore import (
    ConjunctiveQuery, SignatureError, Structure, dalt, disjoint_union, eval_cq,
    exists_homomorphism, find_homomorphisms, paint, restrict,
)

PREDS = ("E", "F")


def brute_force_view(q: ConjunctiveQuery, d: Structure) -> set:
    """Try every assignment of query elements to structure elements."""
    consts = q.canonical.constants
    vars_ = [e for e in q.canonical.elements if e not in consts]
    atoms = set(d.atoms)
    out = set()
    for image in itertools.product(d.elements, repeat=len(vars_)):
        h = dict(zip(vars_, image))
        h.update({c: c for c in consts})
        if all((p, tuple(h[e] for e in args)) in atoms for p, args in q.canonical.atoms):
            out.add(tuple(h[v] for v in q.free))
    return out


@st.composite
def structures(draw, max_elems=4, max_atoms=8):
    n = draw(st.integers(1, max_elems))
    elems = [f"e{i}" for i in range(n)]
    atoms = draw(st.lists(st.tuples(st.sampled_from(PREDS), st.tuples(st.sampled_from(elems), st.sampled_from(elems))),
                          max_size=max_atoms))
    return Structure(atoms, elements=elems)


@st.composite
def queries(draw):
    vars_ = ["x", "y", "z"]
    atoms = draw(st.lists(st.tuples(st.sampled_from(PREDS), st.tuples(st.sampled_from(vars_), st.sampled_from(vars_))),
                          min_size=1, max_size=3))
    used = sorted({v for _, args in atoms for v in args})
    free = draw(st.lists(st.sampled_from(used), unique=True, max_size=len(used)))
    return ConjunctiveQuery(Structure(atoms), tuple(free))


@settings(max_examples=300, deadline=None)
@given(queries(), structures())
def test_eval_cq_matches_brute_force(q, d):
    assert eval_cq(q, d) == brute_force_view(q, d)


@settings(max_examples=150, deadline=None)
@given(queries(), structures())
def test_every_enumerated_homomorphism_is_one(q, d):
    atoms = set(d.atoms)
    for h in itertools.islice(find_homomorphisms(q.canonical, d), 50):
        for p, args in q.canonical.atoms:
            assert (p, tuple(h.mapping[e] for e in args)) in atoms


def test_constants_are_fixed():
    q = Structure([("E", ("a", "x"))], constants=("a",))
    assert exists_homomorphism(q, Structure([("E", ("a", "u"))], constants=("a",)))
    assert not exists_homomorphism(q, Structure([("E", ("u", "a"))], constants=("a",)))


def test_seed_restricts_search():
    q = Structure([("E", ("x", "y"))])
    d = Structure([("E", ("u", "v")), ("E", ("v", "w"))])
    hs = list(find_homomorphisms(q, d, seed={"x": "v"}))
    assert [h.mapping["y"] for h in hs] == ["w"]


@settings(max_examples=100, deadline=None)
@given(structures())
def test_paint_then_dalt_is_identity(d):
    assert dalt(paint(d, "G")) == d
    assert len(restrict(paint(d, "G"), "R")) == 0
    assert restrict(paint(d, "R"), "R").atom_set == paint(d, "R").atom_set


def test_paint_twice_rejected():
    with pytest.raises(SignatureError):
        paint(paint(Structure([("E", ("x", "y"))]), "G"), "R")


def test_dalt_merges_coinciding_atoms():
    d = Structure([("G:E", ("x", "y")), ("R:E", ("x", "y"))])
    assert len(dalt(d)) == 1


def test_disjoint_union_shares_only_constants():
    part = Structure([("E", ("a", "x"))], constants=("a",))
    u = disjoint_union([part, part], ["p.", "q."])
    assert set(u.atoms) == {("E", ("a", "p.x")), ("E", ("a", "q.x"))}


def test_arity_mismatch_is_rejected():
    with pytest.raises(SignatureError):
        Structure([("E", ("x", "y")), ("E", ("x",))])


@settings(max_examples=50, deadline=None)
@given(structures())
def test_json_round_trip(d):
    assert Structure.from_json(d.to_json()) == d


def test_free_variable_must_occur():
    with pytest.raises(ValueError):
        ConjunctiveQuery(Structure([("E", ("x", "y"))]), ("z",))
