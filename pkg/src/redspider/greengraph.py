"""Level 2: green graphs, biconditional edge rules, parity glasses and words.

Labels are integer codes; ``None`` stands for the full green spider (the
seed label ∅).  Codes 1 and 2 are the grid's north-west corner labels, so a
1-2 pattern is two edges labelled 1 and 2 into the same vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from .edgegraph import (
    SHARED_SOURCE, SHARED_TARGET, EdgeGraph, EdgeTGD, Saturation, saturate,
)
from .spider import VEE, WEDGE

Code = Optional[int]
SEED = None
NW_NORTH = 1
NW_WEST = 2


class GreenGraph(EdgeGraph):
    """Edges ``(code | None, src, dst)``; constants ``a`` and ``b``."""

    __slots__ = ()

    @classmethod
    def seed(cls) -> "GreenGraph":
        return cls([(SEED, "a", "b")])

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "constants": list(self.constants),
                "edges": [{"label": lab, "src": x, "dst": y} for lab, x, y in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "GreenGraph":
        edges = [(e["label"], e["src"], e["dst"]) for e in obj["edges"]]
        for lab, _, _ in edges:
            if lab is not None and not isinstance(lab, int):
                raise ValueError(f"green graph labels are integers or null, got {lab!r}")
        return cls(edges, vertices=obj.get("vertices", ()), constants=obj.get("constants", ("a", "b")))


def _fmt(code: Code) -> str:
    return "∅" if code is None else str(code)


@dataclass(frozen=True)
class RuleL2:
    """``i1 ⊙ i2 ⇄ i3 ⊙ i4`` with ⊙ the wedge (shared target) or vee (shared source)."""

    i1: Code
    i2: Code
    i3: Code
    i4: Code
    mode: str

    def __post_init__(self):
        if self.mode not in (WEDGE, VEE):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.i1 == self.i3 or self.i2 == self.i4:
            raise ValueError(f"degenerate rule {self}")
        for c in self.codes():
            if c in (3, 4):
                raise ValueError("codes 3 and 4 are reserved for the precompile base rules")

    def codes(self) -> List[Code]:
        return [self.i1, self.i2, self.i3, self.i4]

    @property
    def shared(self) -> str:
        return SHARED_TARGET if self.mode == WEDGE else SHARED_SOURCE

    def tgds(self) -> List[EdgeTGD]:
        return [EdgeTGD((self.i1, self.i2), (self.i3, self.i4), self.shared, (self, ">")),
                EdgeTGD((self.i3, self.i4), (self.i1, self.i2), self.shared, (self, "<"))]

    def __str__(self) -> str:
        op = "⩚̈" if self.mode == WEDGE else "⩛̈"
        return f"{_fmt(self.i1)}{op}{_fmt(self.i2)} ⇄ {_fmt(self.i3)}{op}{_fmt(self.i4)}"

    def to_json(self) -> dict:
        return {"codes": self.codes(), "mode": self.mode}

    @classmethod
    def from_json(cls, obj) -> "RuleL2":
        return cls(*obj["codes"], obj["mode"])


def rules_tgds(rules: Iterable) -> List[EdgeTGD]:
    out: List[EdgeTGD] = []
    for r in rules:
        out.extend(r.tgds())
    return out


def saturate_greengraph(rules: Sequence[RuleL2], g: GreenGraph, stage_budget: int, **kw) -> Saturation:
    return saturate(rules_tgds(rules), g, stage_budget, **kw)


def has_12_pattern(g: EdgeGraph) -> Tuple[bool, Optional[Tuple[str, str, str]]]:
    """``(True, (a, a', b))`` for edges H_1(a,b), H_2(a',b); a = a' is allowed."""
    for x, y in g.edges_with(NW_NORTH):
        for x2 in g.into(NW_WEST, y):
            return True, (x, x2, y)
    return False, None


# --------------------------------------------------------------------------
# Precompile


def precompile_rules(t2: Sequence[RuleL2]):
    """The base triple plus two Level-1 rules per Level-2 rule (numbered from 2)."""
    from .swarm import RuleL1
    out = [RuleL1((1, 1), (2, 2), WEDGE),
           RuleL1((3, 1), (4, 2), WEDGE),
           RuleL1((3, None), (4, 3), WEDGE)]
    for i, r in enumerate(t2, start=2):
        lo1, lo2 = 2 * i + 1, 2 * i + 2
        out.append(RuleL1((r.i1, lo1), (r.i2, lo2), r.mode))
        out.append(RuleL1((r.i3, lo1), (r.i4, lo2), r.mode))
    return out


# --------------------------------------------------------------------------
# Parity glasses and words


def _require_seed(g: EdgeGraph) -> None:
    if not g.has_edge(SEED, "a", "b"):
        raise ValueError("graph lacks the seed edge H_∅(a,b)")


def parity_glasses(g: EdgeGraph) -> List[Tuple[int, str, str]]:
    """Drop seed-labelled edges, reverse odd-labelled ones."""
    _require_seed(g)
    out = []
    for lab, x, y in g.edges:
        if lab is None:
            continue
        out.append((lab, y, x) if lab % 2 else (lab, x, y))
    return out


def words(g: EdgeGraph, length_bound: int) -> Set[Tuple[int, ...]]:
    """Words of PG-runs from a that first return to {a, b} at their last letter.

    A word counts when some run of it ends in a or b and no nonempty proper
    prefix has a run ending in a or b.  The empty word is excluded.
    """
    split = words_by_target(g, length_bound)
    return split["a"] | split["b"]


def words_by_target(g: EdgeGraph, length_bound: int) -> Dict[str, Set[Tuple[int, ...]]]:
    """Same as :func:`words`, split by the endpoint reached."""
    adj: Dict[str, Dict[int, Set[str]]] = {}
    for lab, x, y in parity_glasses(g):
        adj.setdefault(x, {}).setdefault(lab, set()).add(y)
    res: Dict[str, Set[Tuple[int, ...]]] = {"a": set(), "b": set()}
    frontier: List[Tuple[Tuple[int, ...], FrozenSet[str]]] = [((), frozenset(["a"]))]
    for _ in range(length_bound):
        nxt = []
        for word, states in frontier:
            step: Dict[int, Set[str]] = {}
            for v in states:
                for lab, ys in adj.get(v, {}).items():
                    step.setdefault(lab, set()).update(ys)
            for lab in sorted(step):
                w = word + (lab,)
                st = frozenset(step[lab])
                hit = False
                for end in ("a", "b"):
                    if end in st:
                        res[end].add(w)
                        hit = True
                if not hit:
                    nxt.append((w, st))
        frontier = nxt
    return res


def is_alpha_beta_word(word: Sequence[int], alpha: int, beta1: int, beta0: int) -> bool:
    """Membership in α(β1β0)* by direct scanning."""
    if not word or word[0] != alpha:
        return False
    rest = word[1:]
    if len(rest) % 2:
        return False
    return all(rest[i] == (beta1 if i % 2 == 0 else beta0) for i in range(len(rest)))
