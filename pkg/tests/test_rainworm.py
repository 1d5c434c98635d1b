import json

import pytest

from redspider import rainworm as rw
from redspider.greengraph import RuleL2, has_12_pattern
from redspider.rainworm import (
    ALPHA, BETA0, BETA1, ETA0, ETA1, ETA11, GAMMA1, INITIAL, OMEGA0, ConsistencyError, Instruction,
    RainwormMachine, compile_to_greengraph, config_violations, delta_halt, delta_halt_grid, delta_loop,
    find_matches, finite_model_procedure, full_counterexample, loop_invariants, machine_codes,
    predecessor_bound, predecessor_closure, predecessors, reaches, run, slime_trail, step,
    validate_machine, words_of_saturation,
)
from redspider.spider import VEE, WEDGE

MACHINES = {"halt": delta_halt, "loop": delta_loop, "halt-grid": delta_halt_grid}
HALTING = {"halt": delta_halt, "halt-grid": delta_halt_grid}


def test_fixtures_are_valid():
    for make in MACHINES.values():
        assert validate_machine(make()) == []


def test_duplicate_left_side_is_reported():
    m = RainwormMachine({"A0": ("b0", "b2")}, (Instruction("d2", (ETA0,), ("b0", ETA1)),
                                                Instruction("d2", (ETA0,), ("b2", ETA1))))
    assert any("partial function" in v for v in validate_machine(m))


def test_wrong_slot_is_reported():
    lp = delta_loop()
    bad = Instruction("d4", ("b0", "ql0"), ("ql1", "b0"))  # b0 is even, the slot needs an odd symbol
    m = RainwormMachine(lp.parts, (bad,))
    assert validate_machine(m) and "d4" in validate_machine(m)[0]


def test_partition_clash_is_reported():
    m = RainwormMachine({"A0": ("x",), "A1": ("x",)}, ())
    assert validate_machine(m)


def test_json_round_trip_and_primed_alias():
    m = delta_loop()
    again = RainwormMachine.from_json(json.loads(json.dumps(m.to_json())))
    assert again.instructions == m.instructions
    obj = m.to_json()
    obj["instructions"][4]["shape"] = "d4p"
    assert RainwormMachine.from_json(obj).instructions[4].shape == "d4'"
    with pytest.raises(rw.MachineError):
        RainwormMachine.from_json({"bogus": 1, "instructions": []})


def test_first_steps():
    assert step(delta_halt(), INITIAL) == (ALPHA, GAMMA1, ETA0)
    assert step(delta_halt(), (ALPHA, GAMMA1, ETA0)) is None
    res = run(delta_halt(), 10)
    assert res.halted and res.steps == 1 and res.final == (ALPHA, GAMMA1, ETA0)


def test_gamma_step_lengthens_the_trail():
    m = delta_loop()
    w = (ALPHA, GAMMA1, "ql0", "b1", OMEGA0)
    nxt = step(m, w)
    assert nxt == (ALPHA, BETA1, "qg0", "b1", OMEGA0)
    assert len(slime_trail(nxt)) == len(slime_trail(w)) + 1


def test_two_redexes_raise():
    lp = delta_loop()
    with pytest.raises(ConsistencyError):
        step(lp, (ALPHA, GAMMA1, ETA0, ETA0))


def test_predecessors():
    assert predecessors(delta_halt(), (ALPHA, GAMMA1, ETA0)) == [INITIAL]
    assert predecessors(delta_loop(), INITIAL) == []


@pytest.mark.parametrize("name", sorted(MACHINES))
def test_reachable_configurations_are_well_formed(name):
    m = MACHINES[name]()
    res = run(m, 2000)
    assert config_violations(m, INITIAL) == [4]  # the start precedes any γ symbol
    for w, nxt in zip(res.trace[1:], res.trace[2:]):
        assert config_violations(m, w) == []
        assert step(m, w) == nxt
    for w in res.trace[1:]:
        assert config_violations(m, w) == []


@pytest.mark.parametrize("name", sorted(MACHINES))
def test_predecessors_of_reachable_words(name):
    m = MACHINES[name]()
    for w in run(m, 300).trace:
        preds = predecessors(m, w)
        assert len(preds) <= predecessor_bound(m, w)
        for p in preds:
            assert not set(config_violations(m, p)) & {1, 2, 3}


def test_loop_never_halts_and_trails_are_alpha_beta():
    m = delta_loop()
    res = run(m, 10_000)
    assert not res.halted
    for w in res.trace[1:]:
        trail = slime_trail(w)
        assert all(trail[i] == (BETA1 if i % 2 else BETA0) for i in range(1, len(trail)))


@pytest.mark.parametrize("name", sorted(HALTING))
def test_predecessor_closure_is_finite_and_reaches_the_end(name):
    m = HALTING[name]()
    res = run(m, 1000)
    closure = predecessor_closure(m, res.final)
    assert INITIAL in closure
    for w in closure:
        k = reaches(m, w, res.final, res.steps)
        assert k is not None and k <= res.steps


def test_compiler_shapes():
    m = delta_loop()
    codes, _ = machine_codes(m)
    rules = compile_to_greengraph(m, codes)
    assert len(rules) == 2 + len(m.instructions) - 1
    assert rules[0] == RuleL2(None, None, codes[ALPHA], codes[ETA11], WEDGE)
    assert rules[1] == RuleL2(codes[ETA11], None, codes[GAMMA1], codes[ETA0], VEE)
    assert RuleL2(codes[ETA0], None, codes["b0"], codes[ETA1], WEDGE) in rules
    for sym, c in codes.items():
        assert c % 2 == (0 if m.is_even(sym) else 1)


def test_codes_leave_room_for_the_grid():
    _, grid = machine_codes(delta_loop())
    codes, _ = machine_codes(delta_loop())
    assert not set(grid.grid.values()) & set(codes.values())


def test_forward_simulation_lands_in_words():
    m = delta_loop()
    trace = run(m, 6).trace
    assert set(trace) <= words_of_saturation(m, 7, 12)


def test_seed_has_one_interesting_match():
    from redspider.greengraph import GreenGraph
    m = delta_loop()
    found = [x for x in find_matches(GreenGraph.seed(), compile_to_greengraph(m)) if x.interesting]
    assert [(x.rule, x.side, x.frontier) for x in found] == [(0, "left", ("a", "a"))]


def test_halting_model_by_hand():
    fm = finite_model_procedure(delta_halt())
    c = fm.codes
    assert set(fm.graph.edges) == {(None, "a", "b"), (c[ALPHA], "a", "u1"), (c[GAMMA1], "u2", "u1"),
                                   (c[ETA0], "u2", "b"), (c[ETA11], "a", "u1")}


@pytest.mark.parametrize("name", sorted(HALTING))
def test_finite_model_invariants(name):
    m = HALTING[name]()
    fm = finite_model_procedure(m)
    assert max(fm.edge_stage.values()) <= fm.k
    assert fm.snapshots[-1] == fm.snapshots[-2]
    for g in fm.snapshots:
        assert all(v == [] for v in loop_invariants(fm, m, g).values())
    for j, g in enumerate(fm.snapshots):
        left = [(x.rule, x.frontier) for x in find_matches(g, fm.rules) if x.interesting and x.side == "left"]
        # the seed's own left side waits for the αη11 edge, created last
        assert left == ([] if j > fm.k - 1 else [(0, ("a", "a"))])
    assert not [x for x in find_matches(fm.graph, fm.rules) if x.interesting]
    beta = {fm.codes[BETA0], fm.codes[BETA1]}
    assert {e for e in fm.graph.edges if e[0] in beta} <= set(fm.snapshots[0].edges)


@pytest.mark.parametrize("name", sorted(HALTING))
def test_counterexample(name):
    ce = full_counterexample(HALTING[name]())
    assert ce.report["discrepancies"] == []
    assert not has_12_pattern(ce.graph)[0]


def test_grid_closure_happens_for_the_longer_machine():
    ce = full_counterexample(delta_halt_grid())
    assert ce.report["frak_M_edges"] > ce.report["M_edges"]


def test_finite_model_needs_halting():
    with pytest.raises(ConsistencyError):
        finite_model_procedure(delta_loop(), step_budget=50)


def test_loop_trails_glue_into_a_pattern():
    rep = rw.trail_pattern_demo(delta_loop())
    assert rep["pattern_found"] and rep["t"] != rep["t_prime"]
