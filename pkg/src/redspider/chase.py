"""TGDs over green-red structures and the staged lazy chase."""

from __future__ import annotations

import json
import logging
import re
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from .relcore import (
    GREEN, RED, AtomIndex, ConjunctiveQuery, SignatureError, Structure,
    _check_compatible, color_of, eval_cq, exists_homomorphism, iter_assignments, paint,
)

log = logging.getLogger(__name__)

G_TO_R = (GREEN, RED)
R_TO_G = (RED, GREEN)


class NotATrigger(ValueError):
    """The frontier tuple given to :func:`apply_tgd` does not match the body."""


@dataclass(frozen=True)
class Dependency:
    """``body(frontier, x̄) ⇒ ∃z̄ head(frontier, z̄)``; both sides share ``body.free``."""

    body: ConjunctiveQuery
    head: ConjunctiveQuery
    name: str = ""

    def __post_init__(self):
        if tuple(self.body.free) != tuple(self.head.free):
            raise ValueError("head and body must have the same frontier")
        frontier = set(self.body.free)
        shared = (set(self.body.canonical.elements) & set(self.head.canonical.elements)) - frontier
        shared -= set(self.body.canonical.constants) | set(self.head.canonical.constants)
        if shared:
            raise ValueError(f"body and head share existential names: {sorted(shared)}")

    @property
    def frontier(self) -> Tuple[str, ...]:
        return self.body.free

    @property
    def existentials(self) -> List[str]:
        fr = set(self.frontier)
        consts = self.head.canonical.constants
        return [e for e in self.head.canonical.elements if e not in fr and e not in consts]


def tgd_from_cq(q: ConjunctiveQuery, direction: Tuple[str, str]) -> Dependency:
    """The TGD that copies a match of ``q`` from one color to the other."""
    src, dst = direction
    for p in q.canonical.predicates():
        if color_of(p):
            raise SignatureError(f"query predicate {p} is already colored")
    body = paint(q, src)
    fr = set(q.free)
    consts = q.canonical.constants
    renaming = {e: f"{e}'" for e in q.canonical.elements if e not in fr and e not in consts}
    head = ConjunctiveQuery(paint(q.canonical.rename(renaming), dst), q.free)
    return Dependency(body, head, f"{q.name or 'q'}:{src}>{dst}")


def tgds_for_queries(queries: Iterable[ConjunctiveQuery]) -> List[Dependency]:
    """Both color directions for every query, in query order."""
    out = []
    for q in queries:
        out.append(tgd_from_cq(q, G_TO_R))
        out.append(tgd_from_cq(q, R_TO_G))
    return out


# --------------------------------------------------------------------------
# Fresh names


_FRESH = re.compile(r"^_n(\d+)$")


def _next_fresh(elements: Iterable[str]) -> int:
    top = 0
    for e in elements:
        m = _FRESH.match(e)
        if m:
            top = max(top, int(m.group(1)))
    return top + 1


class _Working:
    """Mutable copy of a structure used inside one chase run."""

    def __init__(self, d: Structure, counter: Optional[int] = None):
        self.index = d._index.copy()
        self.counter = _next_fresh(self.index.elements) if counter is None else counter

    def fresh(self) -> str:
        name = f"_n{self.counter}"
        self.counter += 1
        while name in self.index.elements:
            name = f"_n{self.counter}"
            self.counter += 1
        self.index.add_element(name)
        return name

    def freeze(self) -> Structure:
        return Structure._from_index(self.index.copy())


def _witnessed(index: AtomIndex, t: Dependency, frontier: Sequence[str]) -> bool:
    return exists_homomorphism(t.head.canonical, index, dict(zip(t.frontier, frontier)))


def _fire(work: _Working, t: Dependency, frontier: Sequence[str]) -> Tuple[str, ...]:
    sub = dict(zip(t.frontier, frontier))
    created = []
    for z in t.existentials:
        sub[z] = work.fresh()
        created.append(sub[z])
    for pred, args in t.head.canonical:
        work.index.add(pred, tuple(sub.get(e, e) for e in args))
    return tuple(created)


def frontier_matches(t: Dependency, target) -> List[Tuple[str, ...]]:
    """Distinct frontier projections of body matches, in interned order."""
    seen = set()
    slots_idx = None
    for slot_of, slots in iter_assignments(t.body.canonical, target):
        if slots_idx is None:
            slots_idx = [slot_of[v] for v in t.frontier]
        seen.add(tuple(slots[k] for k in slots_idx))
    index = target._index if isinstance(target, Structure) else target
    order = index.elements
    return sorted(seen, key=lambda tup: [order[e] for e in tup])


def apply_tgd(d: Structure, t: Dependency, frontier: Sequence[str]) -> Structure:
    """Apply one trigger lazily: no-op when the head is already witnessed."""
    frontier = tuple(frontier)
    if len(frontier) != len(t.frontier):
        raise ValueError(f"frontier has {len(frontier)} entries, dependency needs {len(t.frontier)}")
    if not exists_homomorphism(t.body.canonical, d, dict(zip(t.frontier, frontier))):
        raise NotATrigger(f"body of {t.name or 'dependency'} does not match at {frontier}")
    if _witnessed(d._index, t, frontier):
        return d
    work = _Working(d)
    _fire(work, t, frontier)
    return work.freeze()


# --------------------------------------------------------------------------
# Staged chase


@dataclass(frozen=True)
class TriggerRecord:
    stage: int
    dependency: int
    frontier: Tuple[str, ...]
    created: Tuple[str, ...]

    def to_json(self) -> dict:
        return {"stage": self.stage, "dependency": self.dependency,
                "frontier": list(self.frontier), "created": list(self.created)}


@dataclass(frozen=True)
class ChaseResult:
    structure: Structure
    stages_run: int
    reached_fixpoint: bool
    trigger_log: Tuple[TriggerRecord, ...] = ()
    fresh_counter: int = 1
    stage_sizes: Tuple[int, ...] = field(default=(), compare=False)

    def log_jsonl(self) -> str:
        return "\n".join(json.dumps(r.to_json()) for r in self.trigger_log)


def _stage(work: _Working, ts: Sequence[Dependency], stage_no: int,
           records: Optional[list]) -> int:
    snapshot = work.index.copy()
    pending = [(k, fr) for k, t in enumerate(ts) for fr in frontier_matches(t, snapshot)]
    fired = 0
    for k, fr in pending:
        t = ts[k]
        if _witnessed(work.index, t, fr):
            continue
        created = _fire(work, t, fr)
        fired += 1
        if records is not None:
            records.append(TriggerRecord(stage_no, k, fr, created))
    return fired


def chase_stage(ts: Sequence[Dependency], d: Structure) -> Structure:
    """One pass over all triggers of ``d`` (discovered on ``d``, applied lazily)."""
    work = _Working(d)
    if _stage(work, list(ts), 1, None) == 0:
        return d
    return work.freeze()


def active_triggers(d: Structure, ts: Sequence[Dependency]) -> List[Tuple[int, Tuple[str, ...]]]:
    """Triggers whose head is not witnessed, as (dependency index, frontier)."""
    out = []
    for k, t in enumerate(ts):
        for fr in frontier_matches(t, d):
            if not _witnessed(d._index, t, fr):
                out.append((k, fr))
    return out


def satisfies(d: Structure, ts: Sequence[Dependency]) -> bool:
    for t in ts:
        for fr in frontier_matches(t, d):
            if not _witnessed(d._index, t, fr):
                return False
    return True


def chase(ts: Sequence[Dependency], d: Structure, stage_budget: int) -> ChaseResult:
    """Run up to ``stage_budget`` stages; stop early at a stage that adds nothing."""
    if stage_budget < 0:
        raise ValueError("stage budget must be non-negative")
    ts = list(ts)
    work = _Working(d)
    records: list = []
    sizes = [len(d)]
    stages = 0
    fixpoint = False
    while stages < stage_budget:
        fired = _stage(work, ts, stages + 1, records)
        if fired == 0:
            fixpoint = True
            break
        stages += 1
        sizes.append(len(work.index.atoms))
        log.debug("chase stage %d: %d triggers, %d atoms", stages, fired, sizes[-1])
    result = work.freeze()
    if not fixpoint:
        fixpoint = satisfies(result, ts)
    return ChaseResult(result, stages, fixpoint, tuple(records), work.counter, tuple(sizes))


def chase_prefixes(ts: Sequence[Dependency], d: Structure, stages: int) -> List[Structure]:
    """``[chase_0, chase_1, ..., chase_stages]`` (the list stops early at a fixpoint)."""
    ts = list(ts)
    work = _Working(d)
    out = [d]
    for n in range(stages):
        if _stage(work, ts, n + 1, None) == 0:
            break
        out.append(work.freeze())
    return out


def replay(ts: Sequence[Dependency], d: Structure, records: Iterable[TriggerRecord]) -> Structure:
    """Re-apply a trigger log; the fresh names come out identical."""
    ts = list(ts)
    work = _Working(d)
    for r in records:
        created = _fire(work, ts[r.dependency], r.frontier)
        if created != r.created:
            raise ValueError(f"replay diverged at stage {r.stage}: {created} != {r.created}")
    return work.freeze()


# --------------------------------------------------------------------------
# Determinacy condition


@dataclass(frozen=True)
class DeterminacyCheck:
    holds: bool
    witness: Optional[Tuple[str, ...]]
    models_dependencies: bool


def check_determinacy_condition(queries: Sequence[ConjunctiveQuery], q0: ConjunctiveQuery,
                                d: Structure) -> DeterminacyCheck:
    """Fails (``holds=False``) iff d models T_Q and some G(q0) answer is not an R(q0) answer."""
    green_q0 = paint(q0, GREEN)
    red_q0 = paint(q0, RED)
    _check_compatible(green_q0.canonical, d)
    ts = tgds_for_queries(queries)
    models = satisfies(d, ts)
    if not models:
        return DeterminacyCheck(True, None, False)
    red_view = eval_cq(red_q0, d)
    for tup in sorted(eval_cq(green_q0, d)):
        if tup not in red_view:
            return DeterminacyCheck(False, tup, True)
    return DeterminacyCheck(True, None, True)


def views_agree(queries: Sequence[ConjunctiveQuery], d: Structure) -> bool:
    """Whether G(Q)(d) = R(Q)(d) for each query (the premise of the condition)."""
    return all(eval_cq(paint(q, GREEN), d) == eval_cq(paint(q, RED), d) for q in queries)
