"""Level 1: swarms of ideal spiders and their rewriting rules."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

from .edgegraph import (
    SHARED_SOURCE, SHARED_TARGET, EdgeGraph, EdgeTGD, Saturation, saturate, unsatisfied,
)
from .greengraph import GreenGraph, RuleL2, has_12_pattern, precompile_rules, rules_tgds
from .relcore import GREEN, RED
from .spider import VEE, WEDGE, BinaryQuery, IdealSpider, apply_spider_algebra, binary_query

Leg = Optional[int]

SEED_SPIDER = IdealSpider(GREEN)
RED_SPIDER = IdealSpider(RED)


class PreconditionError(ValueError):
    """Input violates an operation's stated precondition."""


class Swarm(EdgeGraph):
    """Edges ``(IdealSpider, tail, antenna)``."""

    __slots__ = ()

    @classmethod
    def seed(cls) -> "Swarm":
        return cls([(SEED_SPIDER, "a", "b")])

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "constants": list(self.constants),
                "edges": [{"label": lab.to_json(), "src": x, "dst": y} for lab, x, y in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "Swarm":
        return cls([(IdealSpider.from_json(e["label"]), e["src"], e["dst"]) for e in obj["edges"]],
                   vertices=obj.get("vertices", ()), constants=obj.get("constants", ("a", "b")))

    def codes(self) -> List[int]:
        out = []
        for lab, _, _ in self.edges:
            out.extend(c for c in (lab.upper, lab.lower) if c is not None)
        return out


def _subsets(leg: Leg) -> List[Leg]:
    return [None] if leg is None else [None, leg]


@dataclass(frozen=True)
class RuleL1:
    """``f^{I1}_{J1} ⊙ f^{I2}_{J2}``; wedge shares the target, vee the source."""

    left: Tuple[Leg, Leg]
    right: Tuple[Leg, Leg]
    mode: str

    def __post_init__(self):
        if self.mode not in (WEDGE, VEE):
            raise ValueError(f"unknown mode {self.mode!r}")

    @property
    def shared(self) -> str:
        return SHARED_TARGET if self.mode == WEDGE else SHARED_SOURCE

    def codes(self) -> List[int]:
        return [c for c in self.left + self.right if c is not None]

    def tgds(self) -> List[EdgeTGD]:
        """One edge TGD per color and per choice of matched sub-legs."""
        out = []
        (i1, j1), (i2, j2) = self.left, self.right
        for color in (GREEN, RED):
            for a, b, c, d in product(_subsets(i1), _subsets(j1), _subsets(i2), _subsets(j2)):
                s1, s2 = IdealSpider(color, a, b), IdealSpider(color, c, d)
                h1 = apply_spider_algebra(self.left, s1)
                h2 = apply_spider_algebra(self.right, s2)
                out.append(EdgeTGD((s1, s2), (h1, h2), self.shared, (self, color)))
        return out

    def __str__(self) -> str:
        def f(leg):
            u, lo = leg
            return f"f[{'' if u is None else u}|{'' if lo is None else lo}]"
        op = "⩚̇" if self.mode == WEDGE else "⩛̇"
        return f"{f(self.left)}{op}{f(self.right)}"

    def to_json(self) -> dict:
        return {"left": list(self.left), "right": list(self.right), "mode": self.mode}

    @classmethod
    def from_json(cls, obj) -> "RuleL1":
        return cls(tuple(obj["left"]), tuple(obj["right"]), obj["mode"])


def saturate_swarm(rules: Sequence[RuleL1], m: Swarm, stage_budget: int, **kw) -> Saturation:
    return saturate(rules_tgds(rules), m, stage_budget, **kw)


def compile_rules(t: Sequence[RuleL1], s: int) -> List[BinaryQuery]:
    return [binary_query(r.left, r.right, r.mode, s) for r in t]


def universe_for(rules: Iterable) -> int:
    """Smallest ``s`` hosting every code of the given Level-1 rules."""
    codes = [4]
    for r in rules:
        codes.extend(r.codes())
    return max(codes)


def has_red_spider(m: EdgeGraph) -> bool:
    return bool(m.edges_with(RED_SPIDER))


def has_green_spider(m: EdgeGraph) -> bool:
    return bool(m.edges_with(SEED_SPIDER))


# --------------------------------------------------------------------------
# Minimal models


def important_edges(m: EdgeGraph, rules: Sequence) -> List:
    """Least set containing the seed and closed under rule-witness pairs."""
    seed_label = SEED_SPIDER if isinstance(m, Swarm) else None
    seed = (seed_label, "a", "b")
    if seed not in m:
        raise PreconditionError("model lacks the seed edge")
    tgds = rules_tgds(rules)
    important = {seed}
    while True:
        sub = m.__class__(list(important), vertices=m.constants, constants=m.constants)
        new = set()
        for t in tgds:
            for fr in t.frontiers(sub):
                for w in t.witnesses(m, fr):
                    for e in t.produce(fr, w):
                        if e not in important:
                            new.add(e)
        if not new:
            break
        important |= new
    return [e for e in m.edges if e in important]


def is_minimal_model(m: EdgeGraph, rules: Sequence) -> bool:
    return not unsatisfied(rules_tgds(rules), m) and len(important_edges(m, rules)) == len(m)


# --------------------------------------------------------------------------
# precompile / deprecompile


def to_swarm(g: EdgeGraph) -> Swarm:
    """Read a green graph as a swarm: code i ↦ Sp_G^{i}, ∅ ↦ Sp_G."""
    return Swarm([(IdealSpider(GREEN, lab, None), x, y) for lab, x, y in g.edges],
                 vertices=g.vertices, constants=g.constants)


def precompile_map(g: GreenGraph, t2: Sequence[RuleL2], check: bool = True) -> Swarm:
    """One Level-1 stage of Precompile(t2) on the green graph read as a swarm."""
    if check:
        bad = unsatisfied(rules_tgds(t2), g)
        if bad:
            raise PreconditionError(f"green graph is not a model: {len(bad)} unsatisfied triggers")
        imp = important_edges(g, t2)
        if len(imp) != len(g):
            raise PreconditionError(f"green graph is not minimal: {len(g) - len(imp)} unimportant edges")
        found, where = has_12_pattern(g)
        if found:
            raise PreconditionError(f"green graph contains a 1-2 pattern at {where}")
    res = saturate_swarm(precompile_rules(t2), to_swarm(g), 1)
    return res.graph


def deprecompile_map(m: EdgeGraph) -> GreenGraph:
    """Keep full and upper 1-lame green edges, as green-graph edges."""
    keep = [(lab.upper, x, y) for lab, x, y in m.edges if lab.color == GREEN and lab.lower is None]
    return GreenGraph(keep, vertices=m.constants, constants=m.constants)
