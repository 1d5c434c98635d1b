"""Labelled directed graphs and the binary edge rules both abstraction levels share.

Every Level-1 and Level-2 rule expands into :class:`EdgeTGD` values of one
of two shapes::

    target:  H(l1,x,y) ∧ H(l2,x',y)  ⇒  ∃y' H(h1,x,y') ∧ H(h2,x',y')   frontier (x, x')
    source:  H(l1,x,y) ∧ H(l2,x,y')  ⇒  ∃x' H(h1,x',y) ∧ H(h2,x',y')   frontier (y, y')
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Set, Tuple

import networkx as nx

SHARED_TARGET = "target"
SHARED_SOURCE = "source"

Edge = Tuple[Hashable, str, str]


class EdgeGraph:
    """Immutable edge-labelled graph; vertex order is first-appearance order."""

    __slots__ = ("_vertices", "_edges", "_constants", "_out", "_in", "_by_label")

    def __init__(self, edges: Iterable[Edge] = (), vertices: Iterable[str] = (),
                 constants: Iterable[str] = ("a", "b")):
        self._constants = tuple(dict.fromkeys(constants))
        self._vertices: Dict[str, int] = {}
        for v in list(self._constants) + list(vertices):
            self._vertices.setdefault(v, len(self._vertices))
        self._edges: Dict[Edge, None] = {}
        self._out: Dict[Tuple[Hashable, str], Dict[str, None]] = {}
        self._in: Dict[Tuple[Hashable, str], Dict[str, None]] = {}
        self._by_label: Dict[Hashable, List[Tuple[str, str]]] = {}
        for e in edges:
            self._add(e)

    def _add(self, e: Edge) -> bool:
        label, x, y = e
        if e in self._edges:
            return False
        self._edges[e] = None
        for v in (x, y):
            self._vertices.setdefault(v, len(self._vertices))
        self._out.setdefault((label, x), {})[y] = None
        self._in.setdefault((label, y), {})[x] = None
        self._by_label.setdefault(label, []).append((x, y))
        return True

    def _copy(self) -> "EdgeGraph":
        new = self.__class__.__new__(self.__class__)
        new._constants = self._constants
        new._vertices = dict(self._vertices)
        new._edges = dict(self._edges)
        new._out = {k: dict(v) for k, v in self._out.items()}
        new._in = {k: dict(v) for k, v in self._in.items()}
        new._by_label = {k: list(v) for k, v in self._by_label.items()}
        return new

    # -- read access -------------------------------------------------------
    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(self._vertices)

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return tuple(self._edges)

    @property
    def constants(self) -> Tuple[str, ...]:
        return self._constants

    def order(self, v: str) -> int:
        return self._vertices[v]

    def has_edge(self, label, x, y) -> bool:
        return (label, x, y) in self._edges

    def out(self, label, x) -> Tuple[str, ...]:
        return tuple(self._out.get((label, x), ()))

    def into(self, label, y) -> Tuple[str, ...]:
        return tuple(self._in.get((label, y), ()))

    def edges_with(self, label) -> List[Tuple[str, str]]:
        return list(self._by_label.get(label, ()))

    def labels(self) -> List[Hashable]:
        return list(self._by_label)

    def __contains__(self, e) -> bool:
        return e in self._edges

    def __len__(self) -> int:
        return len(self._edges)

    def __iter__(self):
        return iter(self._edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EdgeGraph):
            return NotImplemented
        return self._edges.keys() == other._edges.keys() and set(self._vertices) == set(other._vertices)

    def __hash__(self):
        return hash(frozenset(self._edges))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({len(self._vertices)} vertices, {len(self._edges)} edges)"

    # -- building ------------------------------------------------------------
    def with_edges(self, edges: Iterable[Edge]) -> "EdgeGraph":
        new = self._copy()
        for e in edges:
            new._add(e)
        return new

    def union(self, *others: "EdgeGraph") -> "EdgeGraph":
        new = self._copy()
        for o in others:
            for v in o._vertices:
                new._vertices.setdefault(v, len(new._vertices))
            for e in o._edges:
                new._add(e)
        return new

    def subgraph(self, edges: Iterable[Edge]) -> "EdgeGraph":
        keep = [e for e in self._edges if e in set(edges)]
        return self.__class__(keep, vertices=self._constants, constants=self._constants)

    def rename(self, mapping: Dict[str, str]) -> "EdgeGraph":
        f = lambda v: mapping.get(v, v)  # noqa: E731
        return self.__class__(((lab, f(x), f(y)) for lab, x, y in self._edges),
                              vertices=[f(v) for v in self._vertices],
                              constants=[f(c) for c in self._constants])

    def to_networkx(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for v in self._vertices:
            g.add_node(v, const=v if v in self._constants else None)
        for lab, x, y in self._edges:
            g.add_edge(x, y, label=lab)
        return g


def isomorphic(g1: EdgeGraph, g2: EdgeGraph) -> bool:
    """Label-preserving isomorphism that fixes the constants."""
    if len(g1) != len(g2) or len(g1.vertices) != len(g2.vertices):
        return False
    if sorted(map(repr, (e[0] for e in g1.edges))) != sorted(map(repr, (e[0] for e in g2.edges))):
        return False

    def collapse(g: EdgeGraph) -> nx.DiGraph:
        d = nx.DiGraph()
        for v in g.vertices:
            d.add_node(v, const=v if v in g.constants else None)
        for lab, x, y in g.edges:
            if d.has_edge(x, y):
                d[x][y]["labels"] = d[x][y]["labels"] | {lab}
            else:
                d.add_edge(x, y, labels=frozenset([lab]))
        return d

    return nx.is_isomorphic(collapse(g1), collapse(g2),
                            node_match=lambda a, b: a["const"] == b["const"],
                            edge_match=lambda a, b: a["labels"] == b["labels"])


# --------------------------------------------------------------------------
# Edge TGDs


@dataclass(frozen=True)
class EdgeTGD:
    body: Tuple[Hashable, Hashable]
    head: Tuple[Hashable, Hashable]
    shared: str
    tag: Any = None

    def frontiers(self, g: EdgeGraph) -> List[Tuple[str, str]]:
        """Body matches projected to the frontier, in vertex order."""
        l1, l2 = self.body
        found: Dict[Tuple[str, str], None] = {}
        if self.shared == SHARED_TARGET:
            for x, y in g._by_label.get(l1, ()):
                for x2 in g._in.get((l2, y), ()):
                    found[(x, x2)] = None
        else:
            for x, y in g._by_label.get(l1, ()):
                for y2 in g._out.get((l2, x), ()):
                    found[(y, y2)] = None
        order = g._vertices
        return sorted(found, key=lambda p: (order[p[0]], order[p[1]]))

    def body_witnesses(self, g: EdgeGraph, frontier: Tuple[str, str]) -> List[str]:
        """The shared vertices realising the body at ``frontier``."""
        return _shared_vertices(g, self.body, self.shared, frontier)

    def witnesses(self, g: EdgeGraph, frontier: Tuple[str, str]) -> List[str]:
        return _shared_vertices(g, self.head, self.shared, frontier)

    def is_witnessed(self, g: EdgeGraph, frontier: Tuple[str, str]) -> bool:
        h1, h2 = self.head
        u, v = frontier
        if self.shared == SHARED_TARGET:
            a = g._out.get((h1, u))
            b = g._out.get((h2, v))
        else:
            a = g._in.get((h1, u))
            b = g._in.get((h2, v))
        if not a or not b:
            return False
        if len(a) > len(b):
            a, b = b, a
        return any(w in b for w in a)

    def produce(self, frontier: Tuple[str, str], fresh: str) -> Tuple[Edge, Edge]:
        h1, h2 = self.head
        u, v = frontier
        if self.shared == SHARED_TARGET:
            return (h1, u, fresh), (h2, v, fresh)
        return (h1, fresh, u), (h2, fresh, v)


def _shared_vertices(g, labels, shared, frontier) -> List[str]:
    l1, l2 = labels
    u, v = frontier
    if shared == SHARED_TARGET:
        a, b = g._out.get((l1, u), {}), g._out.get((l2, v), {})
    else:
        a, b = g._in.get((l1, u), {}), g._in.get((l2, v), {})
    return [w for w in a if w in b]


@dataclass(frozen=True)
class Application:
    stage: int
    tgd: int
    frontier: Tuple[str, str]
    created: str
    edges: Tuple[Edge, Edge]


@dataclass
class Saturation:
    graph: EdgeGraph
    stages_run: int
    reached_fixpoint: bool
    log: List[Application] = field(default_factory=list)
    vertex_stage: Dict[str, int] = field(default_factory=dict)
    stopped_early: bool = False


def _fresh_start(g: EdgeGraph) -> int:
    top = 0
    for v in g.vertices:
        if v.startswith("_n") and v[2:].isdigit():
            top = max(top, int(v[2:]))
    return top + 1


def saturate(tgds: Sequence[EdgeTGD], g: EdgeGraph, stage_budget: int, *,
             trigger_filter: Optional[Callable[[int, Tuple[str, str]], bool]] = None,
             stop_when: Optional[Callable[[EdgeGraph], bool]] = None) -> Saturation:
    """Staged lazy chase over edges; same trigger discipline as the Level-0 chase."""
    tgds = list(tgds)
    work = g._copy()
    counter = _fresh_start(g)
    vertex_stage = {v: 0 for v in g.vertices}
    log: List[Application] = []
    stages = 0
    fixpoint = False
    stopped = False
    if stop_when is not None and stop_when(work):
        return Saturation(work, 0, False, log, vertex_stage, True)
    while stages < stage_budget:
        snapshot = work._copy()
        pending = []
        for k, t in enumerate(tgds):
            for fr in t.frontiers(snapshot):
                if trigger_filter is None or trigger_filter(k, fr):
                    pending.append((k, fr))
        fired = 0
        for k, fr in pending:
            t = tgds[k]
            if t.is_witnessed(work, fr):
                continue
            name = f"_n{counter}"
            counter += 1
            while name in work._vertices:
                name = f"_n{counter}"
                counter += 1
            e1, e2 = t.produce(fr, name)
            work._add(e1)
            work._add(e2)
            vertex_stage[name] = stages + 1
            log.append(Application(stages + 1, k, fr, name, (e1, e2)))
            fired += 1
        if fired == 0:
            fixpoint = True
            break
        stages += 1
        if stop_when is not None and stop_when(work):
            stopped = True
            break
    if not fixpoint and not stopped:
        fixpoint = not unsatisfied(tgds, work, trigger_filter)
    return Saturation(work, stages, fixpoint, log, vertex_stage, stopped)


def unsatisfied(tgds: Sequence[EdgeTGD], g: EdgeGraph,
                trigger_filter: Optional[Callable[[int, Tuple[str, str]], bool]] = None
                ) -> List[Tuple[int, Tuple[str, str]]]:
    out = []
    for k, t in enumerate(tgds):
        for fr in t.frontiers(g):
            if trigger_filter is not None and not trigger_filter(k, fr):
                continue
            if not t.is_witnessed(g, fr):
                out.append((k, fr))
    return out


def stage_by_stage(tgds: Sequence[EdgeTGD], g: EdgeGraph, stages: int) -> List[EdgeGraph]:
    """``[g_0, g_1, ...]`` one graph per stage (stops early at a fixpoint)."""
    out = [g]
    cur = g
    for _ in range(stages):
        res = saturate(tgds, cur, 1)
        if res.stages_run == 0:
            break
        cur = res.graph
        out.append(cur)
    return out
