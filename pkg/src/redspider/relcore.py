"""Relational structures, homomorphism search and conjunctive queries.

Elements are plain strings.  A structure remembers the order in which its
elements were first seen; that order drives every deterministic iteration
in the package (trigger order, fresh naming, enumeration order).

Colored predicates carry a ``"G:"`` or ``"R:"`` prefix.
"""

from __future__ import annotations

import heapq

import json
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Atom = Tuple[str, Tuple[str, ...]]

GREEN = "G"
RED = "R"
COLORS = (GREEN, RED)


class SignatureError(ValueError):
    """Raised when a query and a structure disagree on predicates."""


def opposite(color: str) -> str:
    if color == GREEN:
        return RED
    if color == RED:
        return GREEN
    raise ValueError(f"not a color: {color!r}")


def color_of(pred: str) -> Optional[str]:
    if len(pred) > 2 and pred[1] == ":" and pred[0] in COLORS:
        return pred[0]
    return None


def base_pred(pred: str) -> str:
    return pred[2:] if color_of(pred) else pred


# --------------------------------------------------------------------------
# Signature


@dataclass(frozen=True)
class Signature:
    predicates: Tuple[Tuple[str, int], ...] = ()
    constants: frozenset = frozenset()

    def __post_init__(self):
        names = [p for p, _ in self.predicates]
        if len(set(names)) != len(names):
            raise SignatureError("duplicate predicate names")
        for p, k in self.predicates:
            if k < 1:
                raise SignatureError(f"arity of {p} must be positive")
        if set(names) & set(self.constants):
            raise SignatureError("constant names clash with predicate names")

    @property
    def arity(self) -> Dict[str, int]:
        return dict(self.predicates)

    @property
    def colored(self) -> bool:
        return any(color_of(p) for p, _ in self.predicates)

    def union(self, other: "Signature") -> "Signature":
        merged = dict(self.predicates)
        for p, k in other.predicates:
            if merged.setdefault(p, k) != k:
                raise SignatureError(f"arity conflict on {p}")
        return Signature(tuple(sorted(merged.items())), self.constants | other.constants)

    def to_json(self) -> dict:
        return {"predicates": dict(self.predicates), "constants": sorted(self.constants)}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Signature":
        preds = obj.get("predicates", {})
        if isinstance(preds, list):
            preds = {p: k for p, k in preds}
        return cls(tuple(sorted((str(p), int(k)) for p, k in preds.items())),
                   frozenset(obj.get("constants", ())))


# --------------------------------------------------------------------------
# Atom index shared by frozen structures and the chase's working copy


class AtomIndex:
    """Append-only atom store with predicate and (pred, pos, elem) indexes."""

    __slots__ = ("atoms", "elements", "by_pred", "by_pos", "constants")

    def __init__(self):
        self.atoms: Dict[Atom, None] = {}
        self.elements: Dict[str, int] = {}
        self.by_pred: Dict[str, List[Tuple[str, ...]]] = {}
        self.by_pos: Dict[Tuple[str, int, str], List[Tuple[str, ...]]] = {}
        self.constants: Dict[str, None] = {}

    def add_element(self, e: str) -> None:
        if e not in self.elements:
            self.elements[e] = len(self.elements)

    def add(self, pred: str, args: Tuple[str, ...]) -> bool:
        atom = (pred, args)
        if atom in self.atoms:
            return False
        self.atoms[atom] = None
        for e in args:
            if e not in self.elements:
                self.elements[e] = len(self.elements)
        self.by_pred.setdefault(pred, []).append(args)
        by_pos = self.by_pos
        for i, e in enumerate(args):
            key = (pred, i, e)
            lst = by_pos.get(key)
            if lst is None:
                by_pos[key] = [args]
            else:
                lst.append(args)
        return True

    def copy(self) -> "AtomIndex":
        new = AtomIndex()
        new.atoms = dict(self.atoms)
        new.elements = dict(self.elements)
        new.by_pred = {k: list(v) for k, v in self.by_pred.items()}
        new.by_pos = {k: list(v) for k, v in self.by_pos.items()}
        new.constants = dict(self.constants)
        return new


# --------------------------------------------------------------------------
# Structure


class Structure:
    """Immutable finite structure.

    ``atoms`` is an iterable of ``(pred, args)``; extra isolated elements and
    constants may be given separately.  A constant is an element that every
    homomorphism must fix.
    """

    __slots__ = ("_index", "_signature", "_plans", "_hash")

    def __init__(self, atoms: Iterable[Atom] = (), elements: Iterable[str] = (),
                 constants: Iterable[str] = (), signature: Optional[Signature] = None):
        idx = AtomIndex()
        for c in constants:
            idx.constants[c] = None
            idx.add_element(c)
        for e in elements:
            idx.add_element(e)
        for pred, args in atoms:
            idx.add(pred, tuple(args))
        self._init(idx, signature)

    def _init(self, idx: AtomIndex, signature: Optional[Signature]) -> None:
        inferred: Dict[str, int] = {}
        for pred, args in idx.by_pred.items():
            inferred[pred] = len(args[0])
            for a in args:
                if len(a) != inferred[pred]:
                    raise SignatureError(f"predicate {pred} used with two arities")
        if signature is None:
            signature = Signature(tuple(sorted(inferred.items())), frozenset(idx.constants))
        else:
            declared = signature.arity
            for p, k in inferred.items():
                if declared.get(p, k) != k:
                    raise SignatureError(f"atom of {p} has arity {k}, signature says {declared[p]}")
                if p not in declared:
                    raise SignatureError(f"predicate {p} not in signature")
            for c in signature.constants:
                if c not in idx.constants:
                    idx.constants[c] = None
                    idx.add_element(c)
        self._index = idx
        self._signature = signature
        self._plans: Dict[Any, Any] = {}
        self._hash = None

    @classmethod
    def _from_index(cls, idx: AtomIndex, signature: Optional[Signature] = None) -> "Structure":
        obj = cls.__new__(cls)
        obj._init(idx, signature)
        return obj

    # -- read access ------------------------------------------------------
    @property
    def signature(self) -> Signature:
        return self._signature

    @property
    def atoms(self) -> Tuple[Atom, ...]:
        return tuple(self._index.atoms)

    @property
    def atom_set(self) -> frozenset:
        return frozenset(self._index.atoms)

    @property
    def elements(self) -> Tuple[str, ...]:
        return tuple(self._index.elements)

    @property
    def constants(self) -> frozenset:
        return frozenset(self._index.constants)

    @property
    def constant_binding(self) -> Dict[str, str]:
        return {c: c for c in self._index.constants}

    def order(self, e: str) -> int:
        return self._index.elements[e]

    def __contains__(self, atom: Atom) -> bool:
        return atom in self._index.atoms

    def __len__(self) -> int:
        return len(self._index.atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self._index.atoms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self._index.atoms.keys() == other._index.atoms.keys()
                and set(self._index.elements) == set(other._index.elements)
                and self._index.constants.keys() == other._index.constants.keys())

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self._index.atoms), frozenset(self._index.elements)))
        return self._hash

    def __repr__(self) -> str:
        return f"Structure({len(self)} atoms, {len(self._index.elements)} elements)"

    def atoms_of(self, pred: str) -> List[Tuple[str, ...]]:
        return list(self._index.by_pred.get(pred, ()))

    def predicates(self) -> List[str]:
        return list(self._index.by_pred)

    # -- building ---------------------------------------------------------
    def union(self, *others: "Structure") -> "Structure":
        idx = self._index.copy()
        sig = self._signature
        for o in others:
            for c in o._index.constants:
                idx.constants[c] = None
            for e in o._index.elements:
                idx.add_element(e)
            for pred, args in o._index.atoms:
                idx.add(pred, args)
            sig = sig.union(o._signature)
        return Structure._from_index(idx, None)

    def rename(self, mapping: Mapping[str, str]) -> "Structure":
        """Apply an element renaming; unmapped elements keep their names."""
        def f(e):
            return mapping.get(e, e)
        return Structure(((p, tuple(f(e) for e in args)) for p, args in self._index.atoms),
                         elements=(f(e) for e in self._index.elements),
                         constants=(f(c) for c in self._index.constants))

    def with_prefix(self, prefix: str) -> "Structure":
        """Rename every non-constant element by prefixing it."""
        consts = self._index.constants
        return self.rename({e: prefix + e for e in self._index.elements if e not in consts})

    # -- JSON ---------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "signature": self._signature.to_json(),
            "elements": list(self._index.elements),
            "atoms": [[p, list(args)] for p, args in self._index.atoms],
            "constants": {c: c for c in self._index.constants},
        }

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "Structure":
        binding = obj.get("constants", {})
        if isinstance(binding, list):
            binding = {c: c for c in binding}
        rename = {v: k for k, v in binding.items()}
        def f(e):
            return rename.get(e, e)
        sig = Signature.from_json(obj["signature"]) if "signature" in obj else None
        return cls(((p, tuple(f(e) for e in args)) for p, args in obj.get("atoms", [])),
                   elements=(f(e) for e in obj.get("elements", [])),
                   constants=binding.keys(), signature=sig)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# --------------------------------------------------------------------------
# Homomorphism search


@dataclass(frozen=True)
class Homomorphism:
    mapping: Mapping[str, str]

    def __call__(self, e: str) -> str:
        return self.mapping[e]


class _Plan:
    """Static matching order for a source structure under a set of pre-bound vars.

    Every step lists, per argument position, whether the value is known
    before the step (check) or is bound by it; this is fixed by the order,
    so the search never has to undo bindings.
    """

    __slots__ = ("steps", "free_vars", "slot_of")

    def __init__(self, source: Structure, prebound: frozenset):
        idx = source._index
        consts = idx.constants
        slot_of: Dict[str, int] = {}
        for v in prebound:
            slot_of.setdefault(v, len(slot_of))
        known = set(prebound) | set(consts)
        atoms = list(idx.atoms)
        # atoms per variable, to update "bound count" incrementally
        occurs: Dict[str, List[int]] = {}
        for i, (_, args) in enumerate(atoms):
            for e in set(args):
                occurs.setdefault(e, []).append(i)
        # links to bound variables rank first; constants only break ties, so
        # atoms like C(k, c) cannot start an unanchored cross product
        score = [sum(1 for e in set(args) if e in known and e not in consts) for _, args in atoms]
        n_const = [sum(1 for e in args if e in consts) for _, args in atoms]
        done = [False] * len(atoms)
        pred_size = {p: len(v) for p, v in idx.by_pred.items()}

        def key(i):
            pred, args = atoms[i]
            return (score[i] <= 0, -score[i] / len(args), n_const[i] <= 0, pred_size[pred], i)

        heap = [key(i) for i in range(len(atoms))]
        heapq.heapify(heap)
        steps = []
        while heap:
            k = heapq.heappop(heap)
            best = k[-1]
            if done[best] or k != key(best):
                continue
            done[best] = True
            pred, args = atoms[best]
            checks = []
            binds = []
            eqs = []
            first_pos: Dict[str, int] = {}
            for pos, e in enumerate(args):
                if e in consts:
                    checks.append((pos, True, e))
                elif e in known:
                    checks.append((pos, False, slot_of[e]))
                elif e in first_pos:
                    eqs.append((pos, first_pos[e]))
                else:
                    first_pos[e] = pos
                    slot_of[e] = len(slot_of)
                    binds.append((pos, slot_of[e]))
            for e in first_pos:
                known.add(e)
                for j in occurs.get(e, ()):
                    score[j] += 1
                    if not done[j]:
                        heapq.heappush(heap, key(j))
            steps.append((pred, tuple(checks), tuple(binds), tuple(eqs)))
        # isolated non-constant elements range over the whole target
        free_vars = []
        for e in idx.elements:
            if e not in known and e not in consts:
                slot_of[e] = len(slot_of)
                free_vars.append(slot_of[e])
                known.add(e)
        self.steps = steps
        self.free_vars = free_vars
        self.slot_of = slot_of


def _plan_for(source: Structure, prebound: frozenset) -> _Plan:
    plan = source._plans.get(prebound)
    if plan is None:
        plan = _Plan(source, prebound)
        source._plans[prebound] = plan
    return plan


def _search(plan: _Plan, target: AtomIndex, seed_values: Dict[int, str]) -> Iterator[List[Optional[str]]]:
    """Yield the slot vector of every extension; the vector is reused, copy it."""
    slots: List[Optional[str]] = [None] * len(plan.slot_of)
    for k, v in seed_values.items():
        slots[k] = v
    steps = plan.steps
    n = len(steps)
    by_pos = target.by_pos
    by_pred = target.by_pred
    empty: Tuple = ()

    def candidates(i):
        pred, checks, _, _ = steps[i]
        if not checks:
            return by_pred.get(pred, empty)
        best = None
        for pos, is_const, ref in checks:
            lst = by_pos.get((pred, pos, ref if is_const else slots[ref]), empty)
            if best is None or len(lst) < len(best):
                best = lst
                if not best:
                    break
        return best

    def extend_free():
        if not plan.free_vars:
            yield slots
            return
        elems = list(target.elements)
        fv = plan.free_vars

        def rec(j):
            if j == len(fv):
                yield slots
                return
            for e in elems:
                slots[fv[j]] = e
                yield from rec(j + 1)
        yield from rec(0)

    if n == 0:
        yield from extend_free()
        return
    iters: List[Any] = [None] * n
    iters[0] = iter(candidates(0))
    i = 0
    while i >= 0:
        _, checks, binds, eqs = steps[i]
        advanced = False
        for cand in iters[i]:
            ok = True
            for pos, is_const, ref in checks:
                if cand[pos] != (ref if is_const else slots[ref]):
                    ok = False
                    break
            if not ok:
                continue
            for pos, other in eqs:
                if cand[pos] != cand[other]:
                    ok = False
                    break
            if not ok:
                continue
            for pos, slot in binds:
                slots[slot] = cand[pos]
            advanced = True
            break
        if not advanced:
            i -= 1
            continue
        if i + 1 == n:
            yield from extend_free()
            continue
        i += 1
        iters[i] = iter(candidates(i))


def _target_index(target: Any) -> AtomIndex:
    return target._index if isinstance(target, Structure) else target


def iter_assignments(source: Structure, target: Any, seed: Optional[Mapping[str, str]] = None
                     ) -> Iterator[Tuple[Dict[str, int], List[Optional[str]]]]:
    """Low-level form of :func:`find_homomorphisms` yielding (slot map, slot vector)."""
    seed = dict(seed or {})
    tidx = _target_index(target)
    consts = source._index.constants
    for c in consts:
        if c in seed and seed[c] != c:
            return
    seed = {k: v for k, v in seed.items() if k not in consts}
    for c in consts:
        if c not in tidx.elements:
            return
    plan = _plan_for(source, frozenset(seed))
    seed_values = {plan.slot_of[k]: v for k, v in seed.items()}
    for slots in _search(plan, tidx, seed_values):
        yield plan.slot_of, slots


def find_homomorphisms(source: Structure, target: Any,
                       seed: Optional[Mapping[str, str]] = None) -> Iterator[Homomorphism]:
    """Lazily enumerate homomorphisms ``source -> target`` extending ``seed``.

    Constants map to themselves.  The order is fixed by a greedy
    most-constrained-atom plan over the source and the insertion order of
    the target's atoms, so repeated calls agree.
    """
    consts = source.constants
    for slot_of, slots in iter_assignments(source, target, seed):
        m = {e: slots[k] for e, k in slot_of.items()}
        for c in consts:
            m[c] = c
        yield Homomorphism(m)


def exists_homomorphism(source: Structure, target: Any,
                        seed: Optional[Mapping[str, str]] = None) -> bool:
    for _ in iter_assignments(source, target, seed):
        return True
    return False


# --------------------------------------------------------------------------
# Conjunctive queries


@dataclass(frozen=True)
class ConjunctiveQuery:
    canonical: Structure
    free: Tuple[str, ...] = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        elems = set(self.canonical.elements)
        for v in self.free:
            if v not in elems:
                raise ValueError(f"free variable {v!r} is not a vertex of the query")
            if v in self.canonical.constants:
                raise ValueError(f"constant {v!r} cannot be free")

    @property
    def is_boolean(self) -> bool:
        return not self.free

    def to_json(self) -> dict:
        return {"canonical": self.canonical.to_json(), "free": list(self.free), "name": self.name}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "ConjunctiveQuery":
        return cls(Structure.from_json(obj["canonical"]), tuple(obj.get("free", ())), obj.get("name", ""))


def _check_compatible(q: Structure, d: Structure) -> None:
    d_arity = d.signature.arity
    d_colored = d.signature.colored
    for pred, args in q._index.by_pred.items():
        k = d_arity.get(pred)
        if k is not None and k != len(args[0]):
            raise SignatureError(f"{pred} has arity {len(args[0])} in the query, {k} in the structure")
        if d_arity and k is None and (color_of(pred) is not None) != d_colored:
            raise SignatureError(f"query predicate {pred} does not fit the structure's signature")


def eval_cq(q: ConjunctiveQuery, d: Structure) -> set:
    """The view ``{ā : d ⊨ q(ā)}`` as a set of tuples ordered like ``q.free``."""
    _check_compatible(q.canonical, d)
    if q.is_boolean:
        return {()} if exists_homomorphism(q.canonical, d) else set()
    out = set()
    plan_slots = None
    for slot_of, slots in iter_assignments(q.canonical, d):
        if plan_slots is None:
            plan_slots = [slot_of[v] for v in q.free]
        out.add(tuple(slots[k] for k in plan_slots))
    return out


# --------------------------------------------------------------------------
# Colors


def _map_preds(x, f):
    if isinstance(x, ConjunctiveQuery):
        return ConjunctiveQuery(_map_preds(x.canonical, f), x.free, x.name)
    idx = x._index
    return Structure(((f(p), args) for p, args in idx.atoms), elements=idx.elements, constants=idx.constants)


def _structure_of(x) -> Structure:
    return x.canonical if isinstance(x, ConjunctiveQuery) else x


def paint(x, color: str):
    """Replace every predicate by its colored copy."""
    if color not in COLORS:
        raise ValueError(f"not a color: {color!r}")
    for p in _structure_of(x).predicates():
        if color_of(p):
            raise SignatureError(f"{p} is already colored")
    return _map_preds(x, lambda p: f"{color}:{p}")


def dalt(x):
    """Erase colors; atoms that coincide afterwards are merged."""
    return _map_preds(x, base_pred)


def restrict(d: Structure, color: str) -> Structure:
    """Keep only atoms of one color (plus constants)."""
    prefix = f"{color}:"
    idx = d._index
    return Structure(((p, a) for p, a in idx.atoms if p.startswith(prefix)), constants=idx.constants)


def disjoint_union(parts: Sequence[Structure], prefixes: Sequence[str]) -> Structure:
    """Union after renaming the non-constants of each part apart; constants are shared."""
    renamed = [p.with_prefix(pre) for p, pre in zip(parts, prefixes)]
    if not renamed:
        return Structure()
    return renamed[0].union(*renamed[1:])
