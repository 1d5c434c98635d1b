"""The separating example: an infinite αβ-path chase plus a grid builder.

Rule sets:

* :func:`t_inf` grows one αβ-path forever from the seed edge;
* :func:`t_box` builds a grid over two αβ-paths that share their last
  vertex, and marks its north-west corner with codes 1 and 2 unless that
  corner lies on the grid's diagonal.

Grid labels are quadruples (direction, kind, diagonal?, border?).  Only
``<n,α,d̄,b̄>`` and ``<w,α,d̄,b̄>`` get the reserved codes 1 and 2; every other
grid label gets an even code above the skeleton range.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .edgegraph import EdgeGraph, Saturation, saturate, unsatisfied
from .greengraph import GreenGraph, RuleL2, has_12_pattern, rules_tgds
from .spider import VEE, WEDGE, IdealSpider, make_spider

DIRECTIONS = ("n", "e", "s", "w")
KINDS = ("alpha", "beta")


@dataclass(frozen=True)
class SkeletonCodes:
    """Codes of the path symbols; the rainworm symbols ride along for reuse."""

    alpha: int = 6
    beta0: int = 8
    eta0: int = 10
    gamma0: int = 12
    omega0: int = 14
    beta1: int = 5
    eta1: int = 7
    gamma1: int = 9
    eta11: int = 11

    EVEN = ("alpha", "beta0", "eta0", "gamma0", "omega0")
    ODD = ("beta1", "eta1", "gamma1", "eta11")

    def __post_init__(self):
        vals = [getattr(self, n) for n in self.EVEN + self.ODD]
        if len(set(vals)) != len(vals):
            raise ValueError("skeleton codes must be pairwise distinct")
        if any(v in (1, 2, 3, 4) for v in vals):
            raise ValueError("codes 1-4 are reserved")
        for n in self.EVEN:
            if getattr(self, n) % 2:
                raise ValueError(f"{n} needs an even code")
        for n in self.ODD:
            if not getattr(self, n) % 2:
                raise ValueError(f"{n} needs an odd code")

    def symbols(self) -> Dict[str, int]:
        return {n: getattr(self, n) for n in self.EVEN + self.ODD}


@dataclass(frozen=True, order=True)
class GridLabel:
    direction: str
    kind: str
    diagonal: bool
    border: bool

    def name(self) -> str:
        kind = "α" if self.kind == "alpha" else "β"
        return (f"<{self.direction},{kind},{'d' if self.diagonal else 'd̄'},"
                f"{'b' if self.border else 'b̄'}>")


NW_NORTH_LABEL = GridLabel("n", "alpha", False, False)
NW_WEST_LABEL = GridLabel("w", "alpha", False, False)
ALL_GRID_LABELS = tuple(GridLabel(*p) for p in itertools.product(DIRECTIONS, KINDS, (True, False), (True, False)))


@dataclass(frozen=True)
class Codes:
    """Skeleton codes plus a code for each of the 32 grid labels."""

    skeleton: SkeletonCodes = SkeletonCodes()
    grid: Dict[GridLabel, int] = field(default_factory=dict, hash=False, compare=False)

    @classmethod
    def make(cls, skeleton: SkeletonCodes = SkeletonCodes(), grid_start: Optional[int] = None) -> "Codes":
        """Grid codes are even, starting above every skeleton code (or at ``grid_start``)."""
        top = max(skeleton.symbols().values())
        start = grid_start if grid_start is not None else top + 1
        start += start % 2
        grid = {NW_NORTH_LABEL: 1, NW_WEST_LABEL: 2}
        nxt = start
        for lab in ALL_GRID_LABELS:
            if lab in grid:
                continue
            grid[lab] = nxt
            nxt += 2
        codes = cls(skeleton, grid)
        codes.validate()
        return codes

    def validate(self) -> None:
        vals = list(self.grid.values())
        if len(self.grid) != 32 or len(set(vals)) != 32:
            raise ValueError("need 32 distinct grid codes")
        clash = set(vals) & set(self.skeleton.symbols().values())
        if clash or any(v in (3, 4) for v in vals):
            raise ValueError(f"grid codes collide with reserved or skeleton codes: {sorted(clash)}")

    def g(self, direction: str, kind: str, diagonal: bool, border: bool) -> int:
        return self.grid[GridLabel(direction, kind, diagonal, border)]

    def symbol_table(self) -> Dict[str, int]:
        table = {("∅"): None}
        table.update({k: v for k, v in self.skeleton.symbols().items()})
        for lab, code in sorted(self.grid.items(), key=lambda kv: kv[1]):
            table[lab.name()] = code
        return table

    def names(self) -> Dict[Optional[int], str]:
        """Code to display name, for DOT export and reports."""
        glyph = {"alpha": "α", "beta0": "β0", "beta1": "β1", "eta0": "η0", "eta1": "η1",
                 "gamma0": "γ0", "gamma1": "γ1", "omega0": "ω0", "eta11": "η11"}
        out: Dict[Optional[int], str] = {None: "∅"}
        for k, v in self.skeleton.symbols().items():
            out[v] = glyph[k]
        for lab, code in self.grid.items():
            out[code] = lab.name()
        return out

    def skeleton_labels(self) -> Set[Optional[int]]:
        s = self.skeleton
        return {None, s.alpha, s.beta0, s.beta1, s.eta0, s.eta1}

    def grid_label_of(self, code) -> Optional[GridLabel]:
        for lab, c in self.grid.items():
            if c == code:
                return lab
        return None


DEFAULT_CODES = Codes.make()


# --------------------------------------------------------------------------
# Rule sets


def t_inf(codes: Codes = DEFAULT_CODES) -> List[RuleL2]:
    """The three rules whose chase is one infinite αβ-path."""
    s = codes.skeleton
    return [RuleL2(None, None, s.alpha, s.eta1, WEDGE),
            RuleL2(None, s.eta1, s.eta0, s.beta1, VEE),
            RuleL2(None, s.eta0, s.eta1, s.beta0, WEDGE)]


def t_box(codes: Codes = DEFAULT_CODES) -> List[RuleL2]:
    """Grid trigger, 4 southern-strip, 4 eastern-strip and 32 interior rules."""
    s = codes.skeleton
    g = codes.g
    A, B = "alpha", "beta"
    rules = [RuleL2(s.beta0, s.beta0, g("n", B, True, True), g("w", B, True, True), WEDGE)]
    # southern strip
    rules += [
        RuleL2(s.beta1, g("n", B, True, True), g("s", B, False, True), g("e", B, True, False), VEE),
        RuleL2(s.beta0, g("s", B, False, True), g("n", B, False, True), g("w", B, False, False), WEDGE),
        RuleL2(s.beta1, g("n", B, False, True), g("s", B, False, True), g("e", B, False, False), VEE),
        RuleL2(s.alpha, g("s", B, False, True), g("n", B, False, True), g("w", A, False, False), WEDGE),
    ]
    # eastern strip; the last one is the mirror image of the southern one
    rules += [
        RuleL2(s.beta1, g("w", B, True, True), g("e", B, False, True), g("s", B, True, False), VEE),
        RuleL2(s.beta0, g("e", B, False, True), g("w", B, False, True), g("n", B, False, False), WEDGE),
        RuleL2(s.beta1, g("w", B, False, True), g("e", B, False, True), g("s", B, False, False), VEE),
        RuleL2(s.alpha, g("e", B, False, True), g("w", B, False, True), g("n", A, False, False), WEDGE),
    ]
    for x, y, th, om in itertools.product((True, False), (True, False), (A, B), (A, B)):
        rules.append(RuleL2(g("e", th, x, False), g("s", om, y, False),
                            g("n", om, x, False), g("w", th, y, False), WEDGE))
    for x, y, th, om in itertools.product((True, False), (True, False), (A, B), (A, B)):
        rules.append(RuleL2(g("w", th, x, False), g("n", om, y, False),
                            g("s", om, x, False), g("e", th, y, False), VEE))
    return rules


GRID_TRIGGER = 0  # index of the forward grid-trigger TGD in rules_tgds(t_box())


# --------------------------------------------------------------------------
# Paths


@dataclass(frozen=True)
class AlphaBetaPath:
    """Vertices ``a, b_1, a_1, ..., a_t, b_{t+1}`` of a path reading α(β1β0)^t."""

    a_vertices: Tuple[str, ...]  # a_0 = 'a', a_1 .. a_t
    b_vertices: Tuple[str, ...]  # b_1 .. b_{t+1}

    @property
    def squares(self) -> int:
        return len(self.a_vertices) - 1

    def vertices(self) -> List[str]:
        out = [self.a_vertices[0]]
        for i, b in enumerate(self.b_vertices):
            out.append(b)
            if i + 1 < len(self.a_vertices):
                out.append(self.a_vertices[i + 1])
        return out

    def edges(self, codes: Codes = DEFAULT_CODES) -> List[Tuple[int, str, str]]:
        s = codes.skeleton
        out = [(s.alpha, self.a_vertices[0], self.b_vertices[0])]
        for i in range(1, len(self.a_vertices)):
            out.append((s.beta1, self.a_vertices[i], self.b_vertices[i - 1]))
            out.append((s.beta0, self.a_vertices[i], self.b_vertices[i]))
        return out


def alpha_beta_path(prefix: str, t: int, end: Optional[str] = None) -> AlphaBetaPath:
    a_vs = ("a",) + tuple(f"{prefix}a{i}" for i in range(1, t + 1))
    b_vs = tuple(f"{prefix}b{i}" for i in range(1, t + 2))
    if end is not None:
        b_vs = b_vs[:-1] + (end,)
    return AlphaBetaPath(a_vs, b_vs)


def build_two_path(t: int, t_prime: int, codes: Codes = DEFAULT_CODES) -> GreenGraph:
    """Seed plus two paths α(β1β0)^t and α(β1β0)^t' from a sharing their last vertex.

    ``t`` counts β1β0 pairs.  Equal lengths give one path.
    """
    if t < 1 or t_prime < 1:
        raise ValueError("path lengths must be at least 1")
    first = alpha_beta_path("p.", t)
    edges = [(None, "a", "b")] + first.edges(codes)
    if t != t_prime:
        second = alpha_beta_path("q.", t_prime, end=first.b_vertices[-1])
        edges += second.edges(codes)
    return GreenGraph(edges)


def chase_path(g: EdgeGraph, codes: Codes = DEFAULT_CODES) -> AlphaBetaPath:
    """Read the αβ-path of a 𝔗_∞ chase prefix (it is unique there)."""
    s = codes.skeleton
    b_vs = list(g.out(s.alpha, "a"))
    if len(b_vs) > 1:
        raise ValueError("more than one α edge leaves a")
    if not b_vs:
        return AlphaBetaPath(("a",), ())
    a_vs = ["a"]
    while True:
        nxt_a = g.into(s.beta1, b_vs[-1])
        if not nxt_a:
            break
        a_vs.append(nxt_a[0])
        nxt_b = g.out(s.beta0, a_vs[-1])
        if not nxt_b:
            break
        b_vs.append(nxt_b[0])
    return AlphaBetaPath(tuple(a_vs), tuple(b_vs))


def chase_inf(stages: int, codes: Codes = DEFAULT_CODES) -> Saturation:
    return saturate(rules_tgds(t_inf(codes)), GreenGraph.seed(), stages)


# --------------------------------------------------------------------------
# Grid experiments


def _is_12(g: EdgeGraph) -> bool:
    return has_12_pattern(g)[0]


def grid_experiment(t: int, t_prime: int, budget: Optional[int] = None,
                    codes: Codes = DEFAULT_CODES) -> dict:
    """Saturate 𝔗_∞ ∪ 𝔗_⊞ over two merged paths until a 1-2 pattern shows up.

    Status is ``pattern`` when one was found, ``fixpoint`` when the rules
    stopped without one, and ``inconclusive`` when the stage budget ran out.
    """
    if budget is None:
        budget = 4 * max(t, t_prime) + 8
    g = build_two_path(t, t_prime, codes)
    rules = t_inf(codes) + t_box(codes)
    res = saturate(rules_tgds(rules), g, budget, stop_when=_is_12)
    found, where = has_12_pattern(res.graph)
    grid_codes = set(codes.grid.values())
    if found:
        status = "pattern"
    elif res.reached_fixpoint:
        status = "fixpoint"
    else:
        status = "inconclusive"
    return {
        "t": t, "t_prime": t_prime,
        "pattern_found": found,
        "witness": list(where) if where else None,
        "status": status,
        "stages": res.stages_run,
        "grid_size": sum(1 for lab, _, _ in res.graph.edges if lab in grid_codes),
        "edges": len(res.graph),
        "vertices": len(res.graph.vertices),
    }


@dataclass
class HonestGrid:
    """One grid over the unquotiented chase path; interior vertices carry ``prefix``."""

    t: int
    graph: GreenGraph          # path edges up to b_{t+1} plus the grid's foam
    path: AlphaBetaPath
    foam: Tuple[Tuple[int, str, str], ...]
    stages: int
    reached_fixpoint: bool


def build_Mt(t: int, codes: Codes = DEFAULT_CODES, prefix: Optional[str] = None,
             budget: Optional[int] = None) -> HonestGrid:
    """The grid the trigger rule starts at H_β0(a_t, b_{t+1}) of the chase path."""
    if t < 1:
        raise ValueError("t must be at least 1")
    prefix = f"m{t}." if prefix is None else prefix
    base = chase_inf(2 * t + 1, codes).graph
    path = chase_path(base, codes)
    if path.squares < t:
        raise AssertionError(f"chase prefix too short for t={t}")
    a_t = path.a_vertices[t]

    def only_here(k, fr):
        return k != GRID_TRIGGER or fr == (a_t, a_t)

    budget = 8 * t + 16 if budget is None else budget
    res = saturate(rules_tgds(t_box(codes)), base, budget, trigger_filter=only_here)
    old = set(base.vertices)
    rename = {v: prefix + v for v in res.graph.vertices if v not in old}
    grid_codes = set(codes.grid.values())
    foam = tuple((lab, rename.get(x, x), rename.get(y, y))
                 for lab, x, y in res.graph.edges if lab in grid_codes)
    trimmed = AlphaBetaPath(path.a_vertices[:t + 1], path.b_vertices[:t + 1])
    graph = GreenGraph(trimmed.edges(codes) + list(foam))
    return HonestGrid(t, graph, trimmed, foam, res.stages_run, res.reached_fixpoint)


@dataclass
class Truncation:
    """A finite piece of the infinite model: chase prefix plus finished grids."""

    depth: int
    graph: GreenGraph
    prefix_graph: GreenGraph
    vertex_stage: Dict[str, int]
    grids: Dict[int, HonestGrid]

    def foam_owner(self) -> Dict[Tuple[int, str, str], int]:
        return {e: t for t, mt in self.grids.items() for e in mt.foam}


def build_M_truncated(n: int, codes: Codes = DEFAULT_CODES) -> Truncation:
    """Chase prefix of depth ``n`` joined with every grid whose trigger edge is present."""
    if n < 1:
        raise ValueError("depth must be at least 1")
    pre = chase_inf(n, codes)
    path = chase_path(pre.graph, codes)
    grids = {}
    for t in range(1, path.squares + 1):
        if len(path.b_vertices) > t:  # needs H_β0(a_t, b_{t+1})
            grids[t] = build_Mt(t, codes)
    g = pre.graph
    for mt in grids.values():
        g = g.union(mt.graph)
    return Truncation(n, GreenGraph(g.edges, vertices=g.vertices), pre.graph, dict(pre.vertex_stage), grids)


def frontier_violations(tr: Truncation, codes: Codes = DEFAULT_CODES, distance: int = 0) -> dict:
    """Unsatisfied 𝔗-triggers, split by whether they touch the newest chase vertices.

    A trigger is local when its frontier or body vertices include a chase
    vertex born at stage ≥ depth − 1, or lie within ``distance`` undirected
    steps of one.
    """
    tgds = rules_tgds(t_inf(codes) + t_box(codes))
    g = tr.graph
    newest = {v for v, st in tr.vertex_stage.items() if st >= tr.depth - 1 and st > 0}
    near = set(newest)
    if distance:
        adj: Dict[str, Set[str]] = {}
        for _, x, y in g.edges:
            adj.setdefault(x, set()).add(y)
            adj.setdefault(y, set()).add(x)
        frontier = set(newest)
        for _ in range(distance):
            frontier = {w for v in frontier for w in adj.get(v, ()) if w not in g.constants} - near
            near |= frontier
    local, far = [], []
    for k, fr in unsatisfied(tgds, g):
        touched = set(fr) | set(tgds[k].body_witnesses(g, fr))
        (local if touched & near else far).append((k, fr))
    return {"local": local, "nonlocal": far}


def foam_lemma_report(tr: Truncation, codes: Codes = DEFAULT_CODES) -> Dict[str, List]:
    """Violations of the four structural foam facts; empty lists mean all hold.

    Constants belong to every grid, so shared constant vertices are not
    counted as meeting points between different pieces.
    """
    g = tr.graph
    skel_labels = codes.skeleton_labels()
    grid_codes = set(codes.grid.values())
    border_codes = {c for lab, c in codes.grid.items() if lab.border}
    north_codes = {c for lab, c in codes.grid.items() if lab.direction == "n"}
    owner = tr.foam_owner()
    consts = set(g.constants)
    skeleton = [e for e in g.edges if e[0] in skel_labels]
    foam = [e for e in g.edges if e[0] in grid_codes]
    at: Dict[str, List] = {}
    for e in g.edges:
        for v in set(e[1:]):
            at.setdefault(v, []).append(e)
    skel_at = {v for e in skeleton for v in e[1:]}
    grid_vertices = {t: {v for e in mt.graph.edges for v in e[1:]} for t, mt in tr.grids.items()}

    item1 = [e for e in foam if e[0] not in border_codes and any(v in skel_at for v in e[1:])]
    item2 = []
    for e in foam:
        vt = grid_vertices[owner[e]]
        for v in set(e[1:]) - consts:
            for e1 in at[v]:
                if e1[0] in skel_labels and not set(e1[1:]) <= vt | consts:
                    item2.append((e1, e))
    item3 = []
    for v, es in at.items():
        if v in consts:
            continue
        owners = {owner[e] for e in es if e in owner}
        if len(owners) > 1 and v not in skel_at:
            item3.append(v)
    item4 = []
    for e in foam:
        if e[0] not in north_codes:
            continue
        end = e[2]
        for e2 in at[end]:
            if e2 is e or e2 == e:
                continue
            if e2 in owner:
                if owner[e2] != owner[e]:
                    item4.append((e, e2))
            elif e2[0] in skel_labels and end not in consts:
                if not set(e2[1:]) <= grid_vertices[owner[e]] | consts:
                    item4.append((e, e2))
    return {"item1": item1, "item2": item2, "item3": item3, "item4": item4}


# --------------------------------------------------------------------------
# Level-0 view experiments


@dataclass
class Level0Setup:
    """Compiled query sets for the union of both rule sets, sharing one numbering."""

    s: int
    queries: list
    inf: list
    box: list


def level0_queries(codes: Codes = DEFAULT_CODES) -> Level0Setup:
    from .swarm import compile_rules, universe_for
    from .greengraph import precompile_rules

    n_inf = len(t_inf(codes))
    l1 = precompile_rules(t_inf(codes) + t_box(codes))
    s = universe_for(l1)
    qs = [b.canonical for b in compile_rules(l1, s)]
    cut = 3 + 2 * n_inf
    return Level0Setup(s, qs, qs[:cut], qs[:3] + qs[cut:])


def level0_seed(s: int):
    from .relcore import GREEN, Structure
    sp = make_spider(IdealSpider(GREEN), "a", "b", "sp.", s)
    return Structure(sp.atoms, constants=("a", "b", "c"))


def level0_prefixes(stages: int, setup: Optional[Level0Setup] = None) -> list:
    """``[chase_0, ..., chase_stages]`` of the path queries from the green seed spider."""
    from .chase import chase_prefixes, tgds_for_queries
    setup = setup or level0_queries()
    return chase_prefixes(tgds_for_queries(setup.inf), level0_seed(setup.s), stages)


def late_fragment(i: int, prefixes: Sequence) -> "Structure":
    """Atoms of chase_{2i} missing from chase_i; a, b and c stay as constants."""
    from .relcore import Structure
    if i < 1:
        raise ValueError("i must be at least 1")
    if len(prefixes) <= 2 * i:
        raise ValueError(f"need {2 * i + 1} chase prefixes, got {len(prefixes)}")
    old = set(prefixes[i].atoms)
    return Structure([a for a in prefixes[2 * i].atoms if a not in old], constants=("a", "b", "c"))


def view_symmetric_difference(queries: Sequence, left, right) -> List[int]:
    from .relcore import eval_cq
    return [len(eval_cq(q, left) ^ eval_cq(q, right)) for q in queries]


def _halves(d):
    from .relcore import GREEN, RED, dalt, restrict
    return dalt(restrict(d, GREEN)), dalt(restrict(d, RED))


def close_under_grid(d, setup: Level0Setup, budget: int = 40):
    """Chase a colored component with the grid queries; it must reach a fixpoint."""
    from .chase import chase, tgds_for_queries
    res = chase(tgds_for_queries(setup.box), d, budget)
    if not res.reached_fixpoint:
        raise AssertionError(f"grid closure did not finish within {budget} stages")
    return res.structure


def view_difference(i: int, prefixes: Sequence, setup: Level0Setup, with_grids: bool = False) -> dict:
    """Per-query symmetric differences between the green and red halves of chase_i."""
    d = prefixes[i]
    if with_grids:
        d = close_under_grid(d, setup)
    green, red = _halves(d)
    inf = view_symmetric_difference(setup.inf, green, red)
    out = {"i": i, "atoms": len(d), "inf_difference": inf, "inf_total": sum(inf)}
    if with_grids:
        box = view_symmetric_difference(setup.box, green, red)
        out.update(box_difference=box, box_total=sum(box))
    return out


def _spider_match(d, s: int) -> bool:
    from .relcore import GREEN, Structure, dalt, exists_homomorphism
    sp = dalt(make_spider(IdealSpider(GREEN), "t", "n", "q.", s))
    return exists_homomorphism(Structure(sp.atoms, constants=("c",)), d)


def build_Dy_Dn(i: int, prefixes: Optional[Sequence] = None, setup: Optional[Level0Setup] = None,
                with_grids: bool = False) -> dict:
    """The two disjoint unions: a chase_i half plus i late copies of each color.

    The red side also gets two red-only gadgets at (a, b), each missing one
    lower leg, so both sides can answer the same lame-spider queries at the
    constants.  A literal copy of a red 7- or 9-spider would contain the
    green leg too and with it a full colourless spider.
    """
    from .relcore import GREEN, RED, Structure, dalt, disjoint_union, eval_cq, restrict
    setup = setup or level0_queries()
    prefixes = prefixes if prefixes is not None else level0_prefixes(2 * i, setup)
    head = prefixes[i]
    late = late_fragment(i, prefixes)
    if with_grids:
        head = close_under_grid(head, setup)
        late = close_under_grid(late, setup)
    head_g, head_r = _halves(head)
    late_g, late_r = _halves(late)
    copies = [late_g] * i + [late_r] * i
    names = [f"lg{k}." for k in range(i)] + [f"lr{k}." for k in range(i)]
    gadgets = [dalt(restrict(Structure(make_spider(IdealSpider(RED, None, lo), "a", "b", f"x{lo}.", setup.s).atoms,
                                       constants=("a", "b", "c")), RED)) for lo in (7, 9)]
    d_yes = disjoint_union([head_g] + copies, ["h."] + names)
    d_no = disjoint_union([head_r] + copies + gadgets, ["h."] + names + ["x7.", "x9."])
    queries = setup.queries if with_grids else setup.inf
    views = []
    for q in queries:
        vy, vn = eval_cq(q, d_yes), eval_cq(q, d_no)
        views.append({"yes": len(vy), "no": len(vn), "difference": sorted(map(list, vy ^ vn))})
    return {
        "i": i, "with_grids": with_grids, "s": setup.s,
        "components": {"yes": 1 + 2 * i, "no": 1 + 2 * i},
        "gadgets": 2,
        "atoms": {"yes": len(d_yes), "no": len(d_no), "late": len(late)},
        "late_at_constants": {c: sum(1 for _, args in late.atoms if c in args) for c in ("a", "b")},
        "yes_has_spider": _spider_match(d_yes, setup.s),
        "no_has_spider": _spider_match(d_no, setup.s),
        "views": views,
        "view_difference_total": sum(len(v["difference"]) for v in views),
        "D_yes": d_yes, "D_no": d_no,
    }
