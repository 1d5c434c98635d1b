"""Rainworm machines: validation, simulation, the green-graph compiler and the
finite counter-model for halting machines.

A configuration is a tuple of symbol names.  The fixed symbols are
``alpha beta0 beta1 gamma0 gamma1 omega0`` (tape) and ``eta11 eta0 eta1``
(head).  Everything else is declared per machine in one of the partition
lists of :class:`RainwormMachine`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .edgegraph import EdgeGraph, saturate, unsatisfied
from .greengraph import GreenGraph, RuleL2, has_12_pattern, rules_tgds, words
from .sepexample import Codes, SkeletonCodes, t_box
from .spider import VEE, WEDGE

Config = Tuple[str, ...]

ALPHA, BETA0, BETA1 = "alpha", "beta0", "beta1"
GAMMA0, GAMMA1, OMEGA0 = "gamma0", "gamma1", "omega0"
ETA11, ETA0, ETA1 = "eta11", "eta0", "eta1"
FIXED_TAPE = (ALPHA, BETA0, BETA1, GAMMA0, GAMMA1, OMEGA0)
FIXED_STATES = (ETA11, ETA0, ETA1)
INITIAL: Config = (ALPHA, ETA11)
FINAL_SYMBOLS = (ETA11, ETA0, ETA1, OMEGA0)

PARTS = ("A0", "A1", "Q_right_0", "Q_left_0", "Q_right_1", "Q_left_1", "Q_gamma_0", "Q_gamma_1")
SHAPES = ("d1", "d2", "d3", "d4", "d4'", "d5", "d5'", "d6", "d6'", "d7", "d7'", "d8")
# shapes whose compiled rule shares the source; the rest share the target
VEE_SHAPES = {"d1", "d3", "d4", "d5", "d6", "d7", "d8"}


class MachineError(ValueError):
    """Malformed machine description."""


class ConsistencyError(RuntimeError):
    """A property the construction guarantees did not hold."""


@dataclass(frozen=True)
class Instruction:
    shape: str
    lhs: Config
    rhs: Config

    def to_json(self) -> dict:
        return {"shape": self.shape, "lhs": list(self.lhs), "rhs": list(self.rhs)}

    def __str__(self) -> str:
        return f"{self.shape}: {' '.join(self.lhs)} -> {' '.join(self.rhs)}"


@dataclass(frozen=True)
class RainwormMachine:
    parts: Dict[str, Tuple[str, ...]] = field(hash=False)
    instructions: Tuple[Instruction, ...] = ()

    # -- symbol classes ---------------------------------------------------
    def part(self, name: str) -> FrozenSet[str]:
        return frozenset(self.parts.get(name, ()))

    @property
    def states(self) -> FrozenSet[str]:
        out = set(FIXED_STATES)
        for p in PARTS[2:]:
            out |= self.part(p)
        return frozenset(out)

    @property
    def tape(self) -> FrozenSet[str]:
        return frozenset(FIXED_TAPE) | self.part("A0") | self.part("A1")

    def is_even(self, sym: str) -> bool:
        if sym in (ALPHA, BETA0, GAMMA0, ETA0, OMEGA0):
            return True
        if sym in (BETA1, GAMMA1, ETA1, ETA11):
            return False
        for p in ("A0", "Q_right_0", "Q_left_0", "Q_gamma_0"):
            if sym in self.part(p):
                return True
        for p in ("A1", "Q_right_1", "Q_left_1", "Q_gamma_1"):
            if sym in self.part(p):
                return False
        raise MachineError(f"unknown symbol {sym!r}")

    def symbols(self) -> List[str]:
        out = list(FIXED_TAPE) + list(FIXED_STATES)
        for p in PARTS:
            out.extend(self.parts.get(p, ()))
        return out

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        obj = {p: list(self.parts.get(p, ())) for p in PARTS}
        obj["instructions"] = [i.to_json() for i in self.instructions]
        return obj

    @classmethod
    def from_json(cls, obj) -> "RainwormMachine":
        if not isinstance(obj, dict) or "instructions" not in obj:
            raise MachineError("machine JSON needs an 'instructions' list")
        unknown = set(obj) - set(PARTS) - {"instructions", "name"}
        if unknown:
            raise MachineError(f"unknown machine fields {sorted(unknown)}")
        parts = {p: tuple(obj.get(p, ())) for p in PARTS}
        instr = []
        for raw in obj["instructions"]:
            shape = str(raw["shape"]).replace("p", "'")
            instr.append(Instruction(shape, tuple(raw["lhs"]), tuple(raw["rhs"])))
        return cls(parts, tuple(instr))

    @classmethod
    def load(cls, path: str) -> "RainwormMachine":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# --------------------------------------------------------------------------
# Validation


def _shape_violations(m: RainwormMachine, ins: Instruction) -> List[str]:
    P = m.part
    A0, A1 = P("A0"), P("A1")
    QR0, QL0, QR1, QL1 = P("Q_right_0"), P("Q_left_0"), P("Q_right_1"), P("Q_left_1")
    QG0, QG1 = P("Q_gamma_0"), P("Q_gamma_1")
    l, r = ins.lhs, ins.rhs

    def need(cond: bool, what: str) -> List[str]:
        return [] if cond else [f"{ins}: {what}"]

    s = ins.shape
    if s == "d1":
        return need(l == (ETA11,) and r == (GAMMA1, ETA0), "expected eta11 -> gamma1 eta0")
    if s == "d2":
        return need(l == (ETA0,) and len(r) == 2 and r[0] in A0 and r[1] == ETA1, "expected eta0 -> b eta1, b in A0")
    if s == "d3":
        return need(l == (ETA1,) and len(r) == 2 and r[0] in QL1 and r[1] == OMEGA0,
                    "expected eta1 -> q omega0, q left-moving odd")
    if len(l) != 2 or len(r) != 2:
        return [f"{ins}: both sides need two symbols"]
    if s == "d4":
        return need(l[0] in A1 and l[1] in QL0 and r[0] in QL1 and r[1] in A0, "expected b' q -> q' b")
    if s == "d4'":
        return need(l[0] in A0 and l[1] in QL1 and r[0] in QL0 and r[1] in A1, "expected b q' -> q b'")
    if s == "d5":
        return need(l[0] == GAMMA1 and l[1] in QL0 and r[0] == BETA1 and r[1] in QG0, "expected gamma1 q -> beta1 q'")
    if s == "d5'":
        return need(l[0] == GAMMA0 and l[1] in QL1 and r[0] == BETA0 and r[1] in QG1, "expected gamma0 q -> beta0 q'")
    if s == "d6":
        return need(l[0] in QG1 and l[1] in A0 and r[0] == GAMMA1 and r[1] in QR0, "expected q b -> gamma1 q'")
    if s == "d6'":
        return need(l[0] in QG0 and l[1] in A1 and r[0] == GAMMA0 and r[1] in QR1, "expected q b -> gamma0 q'")
    if s == "d7":
        return need(l[0] in QR1 and l[1] in A0 and r[0] in A1 and r[1] in QR0, "expected q' b -> b' q")
    if s == "d7'":
        return need(l[0] in QR0 and l[1] in A1 and r[0] in A0 and r[1] in QR1, "expected q b' -> b q'")
    if s == "d8":
        return need(l[0] in QR1 and l[1] == OMEGA0 and r[0] in A1 and r[1] == ETA0, "expected q omega0 -> b eta0")
    return [f"{ins}: unknown shape {s!r}"]


def validate_machine(m: RainwormMachine) -> List[str]:
    """All violations found; an empty list means the machine is well formed."""
    out = []
    seen: Dict[str, str] = {}
    fixed = set(FIXED_TAPE) | set(FIXED_STATES)
    for p in PARTS:
        for sym in m.parts.get(p, ()):
            if sym in fixed:
                out.append(f"{sym!r} in {p} clashes with a fixed symbol")
            elif sym in seen:
                out.append(f"{sym!r} is in both {seen[sym]} and {p}")
            else:
                seen[sym] = p
    lhs_seen: Dict[Config, Instruction] = {}
    for ins in m.instructions:
        out.extend(_shape_violations(m, ins))
        if ins.lhs in lhs_seen:
            out.append(f"partial function violated: {lhs_seen[ins.lhs]} and {ins} share a left side")
        lhs_seen.setdefault(ins.lhs, ins)
    return out


def config_violations(m: RainwormMachine, w: Sequence[str]) -> List[int]:
    """Which of the four configuration conditions ``w`` fails (1-based)."""
    w = tuple(w)
    bad = []
    states, tape = m.states, m.tape
    heads = [i for i, s in enumerate(w) if s in states]
    if len(heads) != 1 or heads[0] == 0 or any(s not in tape and s not in states for s in w):
        bad.append(1)
    if not w or w[-1] not in FINAL_SYMBOLS:
        bad.append(2)
    try:
        par = [m.is_even(s) for s in w]
        if any(par[i] == par[i + 1] for i in range(len(par) - 1)):
            bad.append(3)
    except MachineError:
        bad.append(3)
    if not _trail_split_ok(m, w):
        bad.append(4)
    return bad


def _trail_split_ok(m: RainwormMachine, w: Config) -> bool:
    if not w or w[0] != ALPHA:
        return False
    i = 1
    expect = BETA1
    while i < len(w) and w[i] == expect:
        i += 1
        expect = BETA0 if expect == BETA1 else BETA1
    rest = w[i:]
    starters = {GAMMA0, GAMMA1} | m.part("Q_gamma_0") | m.part("Q_gamma_1")
    if not rest or rest[0] not in starters:
        return False
    return not any(s in (ALPHA, BETA0, BETA1) for s in rest)


def slime_trail(w: Sequence[str]) -> Config:
    """The longest prefix of the form α(β1β0)* or α(β1β0)*β1."""
    w = tuple(w)
    if not w or w[0] != ALPHA:
        return ()
    i, expect = 1, BETA1
    while i < len(w) and w[i] == expect:
        i += 1
        expect = BETA0 if expect == BETA1 else BETA1
    return w[:i]


# --------------------------------------------------------------------------
# Simulation


def _redexes(m: RainwormMachine, w: Config) -> List[Tuple[int, Instruction]]:
    out = []
    for ins in m.instructions:
        n = len(ins.lhs)
        for i in range(len(w) - n + 1):
            if w[i:i + n] == ins.lhs:
                out.append((i, ins))
    return out


def step(m: RainwormMachine, w: Sequence[str]) -> Optional[Config]:
    """The unique successor of ``w``, or ``None`` when no instruction applies."""
    w = tuple(w)
    found = _redexes(m, w)
    if len(found) > 1:
        raise ConsistencyError(f"{len(found)} redexes in {' '.join(w)}")
    if not found:
        return None
    i, ins = found[0]
    return w[:i] + ins.rhs + w[i + len(ins.lhs):]


def predecessor_bound(m: RainwormMachine, v: Sequence[str]) -> int:
    """Instructions × positions: no word can have more predecessors."""
    return len(m.instructions) * max(1, len(v))


def predecessors(m: RainwormMachine, v: Sequence[str]) -> List[Config]:
    v = tuple(v)
    out: Dict[Config, None] = {}
    for ins in m.instructions:
        n = len(ins.rhs)
        for i in range(len(v) - n + 1):
            if v[i:i + n] == ins.rhs:
                out[v[:i] + ins.lhs + v[i + n:]] = None
    return list(out)


@dataclass
class RunResult:
    trace: List[Config]
    halted: bool

    @property
    def final(self) -> Optional[Config]:
        return self.trace[-1] if self.halted else None

    @property
    def steps(self) -> Optional[int]:
        return len(self.trace) - 1 if self.halted else None

    def to_json(self) -> dict:
        return {"halted": self.halted,
                "k": self.steps,
                "u": list(self.final) if self.final else None,
                "trace": [" ".join(c) for c in self.trace]}


def run(m: RainwormMachine, step_budget: int, start: Config = INITIAL) -> RunResult:
    trace = [tuple(start)]
    for _ in range(step_budget):
        nxt = step(m, trace[-1])
        if nxt is None:
            return RunResult(trace, True)
        trace.append(nxt)
    return RunResult(trace, step(m, trace[-1]) is None)


def reaches(m: RainwormMachine, w: Config, target: Config, budget: int) -> Optional[int]:
    """Steps from ``w`` to ``target`` if that happens within ``budget``."""
    cur = tuple(w)
    for k in range(budget + 1):
        if cur == target:
            return k
        cur = step(m, cur)
        if cur is None:
            return None
    return None


def predecessor_closure(m: RainwormMachine, v: Config, limit: int = 100000) -> Set[Config]:
    seen = {tuple(v)}
    todo = [tuple(v)]
    while todo:
        w = todo.pop()
        for p in predecessors(m, w):
            if p not in seen:
                seen.add(p)
                if len(seen) > limit:
                    raise ConsistencyError("predecessor closure exceeds the limit")
                todo.append(p)
    return seen


# --------------------------------------------------------------------------
# Codes and the green-graph compiler


def machine_codes(m: RainwormMachine, skeleton: SkeletonCodes = SkeletonCodes()) -> Tuple[Dict[str, int], Codes]:
    """Symbol codes respecting parity, then grid codes above all of them."""
    fixed = {ALPHA: skeleton.alpha, BETA0: skeleton.beta0, BETA1: skeleton.beta1,
             GAMMA0: skeleton.gamma0, GAMMA1: skeleton.gamma1, OMEGA0: skeleton.omega0,
             ETA0: skeleton.eta0, ETA1: skeleton.eta1, ETA11: skeleton.eta11}
    used = set(fixed.values()) | {1, 2, 3, 4}
    codes = dict(fixed)
    nxt = {True: 6, False: 5}
    for sym in m.symbols():
        if sym in codes:
            continue
        even = m.is_even(sym)
        c = nxt[even]
        while c in used:
            c += 2
        codes[sym] = c
        used.add(c)
        nxt[even] = c + 2
    grid = Codes.make(skeleton, grid_start=max(used) + 1)
    return codes, grid


def compile_to_greengraph(m: RainwormMachine, codes: Optional[Dict[str, int]] = None) -> List[RuleL2]:
    """Two fixed rules, then one rule per instruction (the η11 step is the second fixed rule)."""
    bad = validate_machine(m)
    if bad:
        raise MachineError("; ".join(bad))
    c = codes if codes is not None else machine_codes(m)[0]
    rules = [RuleL2(None, None, c[ALPHA], c[ETA11], WEDGE),
             RuleL2(c[ETA11], None, c[GAMMA1], c[ETA0], VEE)]
    for ins in m.instructions:
        if ins.shape == "d1":
            continue
        if len(ins.lhs) == 1:
            left = (c[ins.lhs[0]], None)
        else:
            left = (c[ins.lhs[0]], c[ins.lhs[1]])
        mode = VEE if ins.shape in VEE_SHAPES else WEDGE
        rules.append(RuleL2(left[0], left[1], c[ins.rhs[0]], c[ins.rhs[1]], mode))
    return rules


def decode_word(word: Sequence[int], codes: Dict[str, int]) -> Config:
    back = {v: k for k, v in codes.items()}
    return tuple(back.get(x, str(x)) for x in word)


# --------------------------------------------------------------------------
# Matches


@dataclass(frozen=True)
class Match:
    rule: int
    side: str            # "right": the rule's right side is present; "left": its left side
    frontier: Tuple[str, str]
    interesting: bool


def find_matches(g: EdgeGraph, rules: Sequence[RuleL2]) -> List[Match]:
    out = []
    for k, r in enumerate(rules):
        fwd, bwd = r.tgds()
        for side, t in (("left", fwd), ("right", bwd)):
            for fr in t.frontiers(g):
                out.append(Match(k, side, fr, not t.is_witnessed(g, fr)))
    return out


# --------------------------------------------------------------------------
# Finite model


def word_path(u: Sequence[int], prefix: str = "u") -> List[Tuple[int, str, str]]:
    """Edges laying ``u`` out as a parity-glasses path from a.

    Even letters point forward, odd letters backward.  The path ends at b
    after an even last letter and at a after an odd one.
    """
    n = len(u)
    end = "b" if u[-1] % 2 == 0 else "a"
    vs = ["a"] + [f"{prefix}{i}" for i in range(1, n)] + [end]
    edges = []
    for i, lab in enumerate(u):
        x, y = vs[i], vs[i + 1]
        edges.append((lab, x, y) if lab % 2 == 0 else (lab, y, x))
    return edges


@dataclass
class FiniteModel:
    graph: GreenGraph
    snapshots: List[GreenGraph]
    edge_stage: Dict[Tuple, int]
    rules: List[RuleL2]
    codes: Dict[str, int]
    grid_codes: Codes
    k: int
    u: Config


def finite_model_procedure(m: RainwormMachine, step_budget: int = 10000,
                           keep_snapshots: bool = True) -> FiniteModel:
    """Build M backwards from the halting configuration by right-to-left rule steps."""
    res = run(m, step_budget)
    if not res.halted:
        raise ConsistencyError(f"machine did not halt within {step_budget} steps")
    k, u = res.steps, res.final
    codes, grid = machine_codes(m)
    rules = compile_to_greengraph(m, codes)
    g0 = GreenGraph([(None, "a", "b")] + word_path([codes[s] for s in u]))
    cur = g0
    snapshots = [g0]
    edge_stage = {e: 0 for e in g0.edges}
    counter = 1
    for it in range(k + 1):
        snap = cur
        added = []
        done = set()
        for idx, r in enumerate(rules):
            _, bwd = r.tgds()
            for fr in bwd.frontiers(snap):
                key = (idx, fr)
                if key in done or bwd.is_witnessed(snap, fr):
                    continue
                done.add(key)
                c, c2 = fr
                if r.i2 is None:
                    # reuse b (wedge) or a (vee) together with the seed edge
                    added.append((r.i1, c, "b") if r.mode == WEDGE else (r.i1, "a", c))
                else:
                    d = f"d{counter}"
                    counter += 1
                    added.extend(bwd.produce(fr, d))
        new = [e for e in added if e not in cur]
        for e in new:
            edge_stage.setdefault(e, it + 1)
        cur = GreenGraph(list(cur.edges) + new, vertices=cur.vertices)
        if keep_snapshots:
            snapshots.append(cur)
    return FiniteModel(cur, snapshots if keep_snapshots else [g0, cur], edge_stage, rules, codes, grid, k, u)


# --------------------------------------------------------------------------
# Invariants over snapshots


def ab_paths(g: EdgeGraph, max_len: Optional[int] = None) -> List[List[Tuple]]:
    """Walks in the parity-glasses view from a that stop at their first return to a or b."""
    adj: Dict[str, List[Tuple[Tuple, str]]] = {}
    for e in g.edges:
        lab, x, y = e
        if lab is None:
            continue
        src, dst = (y, x) if lab % 2 else (x, y)
        adj.setdefault(src, []).append((e, dst))
    max_len = max_len or len(g) + 1
    out = []
    stack = [("a", [])]
    while stack:
        v, path = stack.pop()
        if len(path) >= max_len:
            continue
        for e, w in adj.get(v, ()):
            p = path + [e]
            if w in ("a", "b"):
                out.append(p)
            else:
                stack.append((w, p))
    return out


def loop_invariants(fm: FiniteModel, m: RainwormMachine, g: EdgeGraph) -> Dict[str, list]:
    """Violations of the four snapshot invariants; empty lists mean they hold."""
    state_codes = {fm.codes[s] for s in m.states}
    paths = ab_paths(g)
    on_path = {e for p in paths for e in p}
    inv1 = []
    for p in paths:
        w = decode_word([e[0] for e in p], fm.codes)
        if reaches(m, w, fm.u, fm.k + 1) is None:
            inv1.append(" ".join(w))
    inv2 = [e for e in g.edges if e[0] is not None and e not in on_path]
    inv3 = [p for p in paths if sum(1 for e in p if e[0] in state_codes) != 1]
    count: Dict[Tuple, int] = {}
    for p in paths:
        for e in p:
            if e[0] in state_codes:
                count[e] = count.get(e, 0) + 1
    inv4 = [e for e in g.edges if e[0] in state_codes and count.get(e, 0) != 1]
    return {"words_reach_final": inv1, "edge_on_ab_path": inv2,
            "one_state_edge_per_path": inv3, "state_edge_on_one_path": inv4}


@dataclass
class Counterexample:
    model: FiniteModel
    graph: GreenGraph
    report: dict


def full_counterexample(m: RainwormMachine, step_budget: int = 10000, grid_budget: int = 200) -> Counterexample:
    """Close M under the grid rules and check it is a finite model without a 1-2 pattern."""
    fm = finite_model_procedure(m, step_budget, keep_snapshots=False)
    box = t_box(fm.grid_codes)
    res = saturate(rules_tgds(box), fm.graph, grid_budget)
    g = GreenGraph(res.graph.edges, vertices=res.graph.vertices)
    found, where = has_12_pattern(g)
    tri_left = unsatisfied(rules_tgds(fm.rules), g)
    box_left = unsatisfied(rules_tgds(box), g)
    beta = {fm.codes[BETA0], fm.codes[BETA1]}
    m0 = set(fm.snapshots[0].edges)
    report = {
        "k": fm.k, "u": list(fm.u),
        "M_edges": len(fm.graph), "frak_M_edges": len(g),
        "grid_stages": res.stages_run,
        "finite": res.reached_fixpoint,
        "pattern_12": found, "pattern_witness": list(where) if where else None,
        "unsatisfied_triangle": len(tri_left), "unsatisfied_box": len(box_left),
        "beta_edges_outside_M0": [list(map(str, e)) for e in fm.graph.edges if e[0] in beta and e not in m0],
    }
    report["discrepancies"] = [name for name, bad in (
        ("1-2 pattern present", found), ("grid closure did not finish", not res.reached_fixpoint),
        ("not a model of the rainworm rules", bool(tri_left)), ("not a model of the grid rules", bool(box_left)),
        ("beta edge created after M0", bool(report["beta_edges_outside_M0"]))) if bad]
    return Counterexample(fm, g, report)


def words_of_saturation(m: RainwormMachine, stages: int, bound: int) -> Set[Config]:
    codes, _ = machine_codes(m)
    rules = compile_to_greengraph(m, codes)
    res = saturate(rules_tgds(rules), GreenGraph.seed(), stages)
    return {decode_word(w, codes) for w in words(res.graph, bound)}


def trail_squares(w: Sequence[str]) -> int:
    """Number of β1β0 pairs in the slime trail."""
    return (len(slime_trail(w)) - 1) // 2


# --------------------------------------------------------------------------
# Fixtures


def delta_halt() -> RainwormMachine:
    """Only the first instruction: halts after one step at α γ1 η0."""
    return RainwormMachine({p: () for p in PARTS}, (Instruction("d1", (ETA11,), (GAMMA1, ETA0)),))


def delta_loop() -> RainwormMachine:
    """One tape symbol per parity and one state per role; creeps forever."""
    parts = {"A0": ("b0",), "A1": ("b1",),
             "Q_left_0": ("ql0",), "Q_left_1": ("ql1",),
             "Q_gamma_0": ("qg0",), "Q_gamma_1": ("qg1",),
             "Q_right_0": ("qr0",), "Q_right_1": ("qr1",)}
    I = Instruction
    instr = (
        I("d1", (ETA11,), (GAMMA1, ETA0)),
        I("d2", (ETA0,), ("b0", ETA1)),
        I("d3", (ETA1,), ("ql1", OMEGA0)),
        I("d4", ("b1", "ql0"), ("ql1", "b0")),
        I("d4'", ("b0", "ql1"), ("ql0", "b1")),
        I("d5", (GAMMA1, "ql0"), (BETA1, "qg0")),
        I("d5'", (GAMMA0, "ql1"), (BETA0, "qg1")),
        I("d6", ("qg1", "b0"), (GAMMA1, "qr0")),
        I("d6'", ("qg0", "b1"), (GAMMA0, "qr1")),
        I("d7", ("qr1", "b0"), ("b1", "qr0")),
        I("d7'", ("qr0", "b1"), ("b0", "qr1")),
        I("d8", ("qr1", OMEGA0), ("b1", ETA0)),
    )
    return RainwormMachine(parts, instr)


def delta_halt_grid() -> RainwormMachine:
    """The looping machine without its d7' step: halts after 13 steps with one β1β0 square."""
    lp = delta_loop()
    return RainwormMachine(lp.parts, tuple(i for i in lp.instructions if i.shape != "d7'"))


def trail_pattern_demo(m: RainwormMachine, steps: int = 3000) -> dict:
    """Two slime trails of different length from one run, glued at their ends, give a 1-2 pattern."""
    from .sepexample import grid_experiment
    res = run(m, steps)
    lengths = sorted({trail_squares(c) for c in res.trace} - {0})
    if len(lengths) < 2:
        return {"trail_lengths": lengths, "pattern_found": False, "status": "inconclusive"}
    t, t2 = lengths[0], lengths[1]
    _, grid = machine_codes(m)
    rep = grid_experiment(t, t2, codes=grid)
    return {"trail_lengths": lengths[:10], "t": t, "t_prime": t2,
            "pattern_found": rep["pattern_found"], "status": rep["status"]}
