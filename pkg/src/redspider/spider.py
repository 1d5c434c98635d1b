"""Spiders: the Level-0 gadgets behind swarm edges.

Anatomy over the uncolored signature, for a universe of ``s`` leg codes::

    H(head, tail, antenna)
    Tu<j>(head, knee)   Cu<j>(knee, c)     upper leg j, 1 <= j <= s
    Tl<j>(head, knee)   Cl<j>(knee, c)     lower leg j

``c`` is a constant shared by every calf.  An ideal spider of color X has
every atom in X except the calf of its (at most one) marked upper leg and
marked lower leg, which carry the other color.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .relcore import (
    GREEN, RED, ConjunctiveQuery, Structure, color_of, opposite,
)

CALF_END = "c"
HEAD = "H"
RESERVED_CODES = (1, 2, 3, 4)


class NoMatch(ValueError):
    """A spider query does not apply to the given spider."""


def thigh(role: str, j: int) -> str:
    return f"T{role}{j}"


def calf(role: str, j: int) -> str:
    return f"C{role}{j}"


@dataclass(frozen=True)
class LabelUniverse:
    """Leg codes ``1..s``; parity is the parity of the integer."""

    s: int

    def __post_init__(self):
        if self.s < max(RESERVED_CODES):
            raise ValueError(f"s must be at least {max(RESERVED_CODES)} to host the reserved codes")

    @classmethod
    def covering(cls, codes: Iterable[Optional[int]]) -> "LabelUniverse":
        return cls(max([c for c in codes if c is not None] + list(RESERVED_CODES)))

    @property
    def codes(self) -> range:
        return range(1, self.s + 1)

    def check(self, code: Optional[int]) -> None:
        if code is not None and not 1 <= code <= self.s:
            raise ValueError(f"code {code} is not registered (s={self.s})")

    @staticmethod
    def is_even(code: int) -> bool:
        return code % 2 == 0


@dataclass(frozen=True, order=True)
class IdealSpider:
    """``color`` is ``"G"`` or ``"R"``; ``upper``/``lower`` is a code or ``None`` (empty)."""

    color: str
    upper: Optional[int] = None
    lower: Optional[int] = None

    def __post_init__(self):
        if self.color not in (GREEN, RED):
            raise ValueError(f"bad spider color {self.color!r}")

    @property
    def is_full(self) -> bool:
        return self.upper is None and self.lower is None

    def sort_key(self):
        return (self.color, self.upper or 0, self.lower or 0)

    def render(self) -> str:
        u = "" if self.upper is None else str(self.upper)
        lo = "" if self.lower is None else str(self.lower)
        return f"{self.color}[{u}|{lo}]"

    def to_json(self) -> dict:
        return {"color": self.color,
                "upper": [] if self.upper is None else [self.upper],
                "lower": [] if self.lower is None else [self.lower]}

    @classmethod
    def from_json(cls, obj) -> "IdealSpider":
        def one(v):
            if isinstance(v, list):
                if len(v) > 1:
                    raise ValueError("spider leg sets have at most one element")
                return v[0] if v else None
            return v
        return cls(obj["color"], one(obj.get("upper", [])), one(obj.get("lower", [])))

    def __str__(self) -> str:
        return self.render()


def full(color: str = GREEN) -> IdealSpider:
    return IdealSpider(color)


# --------------------------------------------------------------------------
# Concrete spiders


def make_spider(kind: IdealSpider, tail: str, antenna: str, prefix: str, s: int) -> Structure:
    """A real spider of the given kind, with element names starting with ``prefix``."""
    if tail == antenna:
        raise ValueError("tail and antenna must differ")
    return Structure(_spider_atoms(kind, tail, antenna, prefix, s), constants=(CALF_END,))


def _spider_atoms(kind: IdealSpider, tail: str, antenna: str, prefix: str, s: int,
                  knee_of=None) -> List[Tuple[str, Tuple[str, ...]]]:
    x = kind.color
    y = opposite(x)
    head = f"{prefix}h"
    atoms = [(f"{x}:{HEAD}", (head, tail, antenna))]
    for role, marked in (("u", kind.upper), ("l", kind.lower)):
        for j in range(1, s + 1):
            calf_color = y if j == marked else x
            knee = knee_of(role, j, calf_color) if knee_of else f"{prefix}k{role}{j}"
            atoms.append((f"{x}:{thigh(role, j)}", (head, knee)))
            atoms.append((f"{calf_color}:{calf(role, j)}", (knee, CALF_END)))
    return atoms


# --------------------------------------------------------------------------
# Spider queries


@dataclass(frozen=True)
class SpiderQuery:
    upper: Optional[int]
    lower: Optional[int]
    canonical: ConjunctiveQuery
    antenna: str
    tail: str

    @property
    def label(self) -> str:
        u = "" if self.upper is None else str(self.upper)
        lo = "" if self.lower is None else str(self.lower)
        return f"f[{u}|{lo}]"


def _spider_query_atoms(upper, lower, s, p):
    atoms = [(HEAD, (f"{p}h", f"{p}t", f"{p}ant"))]
    for role, marked in (("u", upper), ("l", lower)):
        for j in range(1, s + 1):
            knee = f"{p}k{role}{j}"
            atoms.append((thigh(role, j), (f"{p}h", knee)))
            if j != marked:
                atoms.append((calf(role, j), (knee, CALF_END)))
    return atoms


def _query_free(upper, lower, p):
    free = [f"{p}t"]
    if upper is not None:
        free.append(f"{p}ku{upper}")
    if lower is not None:
        free.append(f"{p}kl{lower}")
    return free


def spider_query(upper: Optional[int], lower: Optional[int], s: int, prefix: str = "") -> SpiderQuery:
    """``f^I_J``: a full spider without the calves of the marked legs.

    Free: the tail and the knees of the marked legs.
    """
    universe = LabelUniverse(s)
    universe.check(upper)
    universe.check(lower)
    p = prefix
    canon = Structure(_spider_query_atoms(upper, lower, s, p), constants=(CALF_END,))
    cq = ConjunctiveQuery(canon, tuple(_query_free(upper, lower, p)), _fname(upper, lower))
    return SpiderQuery(upper, lower, cq, f"{p}ant", f"{p}t")


def _fname(upper, lower):
    u = "" if upper is None else str(upper)
    lo = "" if lower is None else str(lower)
    return f"f[{u}|{lo}]"


WEDGE = "wedge"   # shared antenna, tails free
VEE = "vee"       # shared tail, antennas free


@dataclass(frozen=True)
class BinaryQuery:
    left: SpiderQuery
    right: SpiderQuery
    mode: str
    canonical: ConjunctiveQuery

    @property
    def name(self) -> str:
        return self.canonical.name


def binary_query(left: Tuple[Optional[int], Optional[int]], right: Tuple[Optional[int], Optional[int]],
                 mode: str, s: int) -> BinaryQuery:
    """Glue two spider queries at their antennas (wedge) or tails (vee)."""
    if mode not in (WEDGE, VEE):
        raise ValueError(f"unknown mode {mode!r}")
    lq = spider_query(left[0], left[1], s, "l.")
    rq = spider_query(right[0], right[1], s, "r.")
    l_atoms = _spider_query_atoms(left[0], left[1], s, "l.")
    r_atoms = _spider_query_atoms(right[0], right[1], s, "r.")
    glue = {"r.ant": "l.ant"} if mode == WEDGE else {"r.t": "l.t"}
    r_atoms = [(p, tuple(glue.get(e, e) for e in args)) for p, args in r_atoms]
    canon = Structure(l_atoms + r_atoms, constants=(CALF_END,))
    if mode == WEDGE:
        free = _query_free(*left, "l.") + _query_free(*right, "r.")
    else:
        free = (["l.ant", "r.ant"] + _query_free(*left, "l.")[1:] + _query_free(*right, "r.")[1:])
    sym = "⩚" if mode == WEDGE else "⩛"
    name = f"{_fname(*left)}{sym}{_fname(*right)}"
    return BinaryQuery(lq, rq, mode, ConjunctiveQuery(canon, tuple(free), name))


def apply_spider_algebra(f: Tuple[Optional[int], Optional[int]], spider: IdealSpider) -> IdealSpider:
    """The spider produced when ``f^I_J`` matches ``spider`` (raises :class:`NoMatch`)."""
    upper, lower = f
    if spider.upper is not None and spider.upper != upper:
        raise NoMatch(f"upper leg {spider.upper} not in {{{upper or ''}}}")
    if spider.lower is not None and spider.lower != lower:
        raise NoMatch(f"lower leg {spider.lower} not in {{{lower or ''}}}")
    new_upper = None if spider.upper == upper else upper
    new_lower = None if spider.lower == lower else lower
    return IdealSpider(opposite(spider.color), new_upper, new_lower)


# --------------------------------------------------------------------------
# compile / decompile


def knee_class(role: str, j: int, color: str) -> str:
    return f"k.{color}.{role}{j}"


def compile_swarm(m, s: int) -> Structure:
    """Replace every swarm edge by a real spider and merge knees by (calf, color)."""
    atoms = []
    elements = list(m.vertices)
    for n, (label, src, dst) in enumerate(m.edges):
        atoms.extend(_spider_atoms(label, src, dst, f"s{n}.", s,
                                   knee_of=lambda role, j, col: knee_class(role, j, col)))
    return Structure(atoms, elements=elements, constants=(CALF_END,) + tuple(m.constants))


def _real_spider(d: Structure, color: str, head: str, s: int) -> Optional[Tuple[Optional[int], Optional[int]]]:
    """Return the marked legs if ``head`` carries a real spider of ``color``."""
    idx = d._index
    marked = {"u": None, "l": None}
    y = opposite(color)
    seen = set()
    for role in ("u", "l"):
        for j in range(1, s + 1):
            legs = idx.by_pos.get((f"{color}:{thigh(role, j)}", 0, head), ())
            if len(legs) != 1:
                return None
            knee = legs[0][1]
            if knee in seen or knee in (head, CALF_END):
                return None
            seen.add(knee)
            own = any(a[1] == CALF_END for a in idx.by_pos.get((f"{color}:{calf(role, j)}", 0, knee), ()))
            other = any(a[1] == CALF_END for a in idx.by_pos.get((f"{y}:{calf(role, j)}", 0, knee), ()))
            if own == other:
                return None
            if other:
                if marked[role] is not None:
                    return None
                marked[role] = j
    return marked["u"], marked["l"]


def decompile_structure(d: Structure, s: int, swarm_cls=None):
    """One swarm edge per head atom that completes a real spider."""
    from .swarm import Swarm
    swarm_cls = swarm_cls or Swarm
    edges = []
    for color in (GREEN, RED):
        for head, tail, antenna in d.atoms_of(f"{color}:{HEAD}"):
            heads = d._index.by_pos.get((f"{color}:{HEAD}", 0, head), ())
            if len(heads) != 1 or tail == antenna:
                continue
            legs = _real_spider(d, color, head, s)
            if legs is not None:
                edges.append((IdealSpider(color, legs[0], legs[1]), tail, antenna))
    consts = [c for c in ("a", "b") if c in d.constants]
    verts = []
    for _, x, y in edges:
        verts.extend((x, y))
    return swarm_cls(edges, vertices=consts + verts, constants=consts)


def spider_signature(s: int) -> Dict[str, int]:
    preds = {HEAD: 3}
    for role in ("u", "l"):
        for j in range(1, s + 1):
            preds[thigh(role, j)] = 2
            preds[calf(role, j)] = 2
    return preds


def spider_color(structure: Structure) -> Optional[str]:
    cols = {color_of(p) for p in structure.predicates() if p.endswith(HEAD)}
    return cols.pop() if len(cols) == 1 else None
