"""Probabilistic skyline and candidate skyline over a window of uncertain objects.

An object belongs to the skyline when no other object dominates it with
probability 1; the candidate skyline is the skyline of what is left once the
skyline is removed. Certain dominance between normalized objects is a strict
partial order, which is what makes the incremental maintenance below exact:
removals can only lift objects that the departed ones dominated, and
insertions can only push objects down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import ProtocolError
from .rtree import RTree
from .uncertain import EPS, CostCounter, UncertainObject, certainly_dominates

Objects = dict[int, UncertainObject]


@dataclass
class SkylineState:
    sk1: Objects = field(default_factory=dict)
    sk2: Objects = field(default_factory=dict)

    def copy(self) -> "SkylineState":
        return SkylineState(dict(self.sk1), dict(self.sk2))

    def ids(self) -> tuple[set[int], set[int]]:
        return set(self.sk1), set(self.sk2)


class _Skip:
    """Membership test over several id containers plus one extra id."""

    __slots__ = ("containers", "extra")

    def __init__(self, *containers, extra=None):
        self.containers = containers
        self.extra = extra

    def __contains__(self, oid) -> bool:
        if oid == self.extra:
            return True
        return any(oid in c for c in self.containers)


class _Outside:
    __slots__ = ("objs", "extra")

    def __init__(self, objs: Mapping, extra=None):
        self.objs = objs
        self.extra = extra

    def __contains__(self, oid) -> bool:
        return oid == self.extra or oid not in self.objs


def _is_dominated(obj, pool: Mapping[int, UncertainObject], index: RTree,
                  counter: CostCounter | None) -> bool:
    for did in index.iter_certain_dominators(obj.mbr, strict=False, counter=counter,
                                             skip=_Outside(pool, obj.id)):
        if certainly_dominates(pool[did], obj, counter, boxes_tested=True):
            return True
    return False


def compute_skyline(objects: Iterable[UncertainObject], index: RTree | None = None,
                    counter: CostCounter | None = None, exclude=()) -> set[int]:
    """Index-pruned skyline of `objects` (minus `exclude`).

    `index` may cover a superset of the objects; ids outside the input are
    ignored. Only boxes whose max corner is weakly below the target's min
    corner can certainly dominate it, so that is all the index is asked for.
    """
    pool = {o.id: o for o in objects if o.id not in exclude}
    if index is None:
        index = RTree.bulk_load(pool.values())
    return {oid for oid in sorted(pool) if not _is_dominated(pool[oid], pool, index, counter)}


def compute_candidate_skyline(objects: Iterable[UncertainObject], sk1_ids,
                              index: RTree | None = None,
                              counter: CostCounter | None = None) -> set[int]:
    return compute_skyline(objects, index, counter, exclude=set(sk1_ids))


def dominance_matrix(objects: list[UncertainObject]) -> np.ndarray:
    """P[a, b] = probability that object a dominates object b, all pairs at once."""
    N = len(objects)
    nmax = max(len(o.instances) for o in objects)
    d = objects[0].dims
    X = np.zeros((N, nmax, d))
    p = np.zeros((N, nmax))
    for i, o in enumerate(objects):
        k = len(o.instances)
        X[i, :k] = [inst.attrs for inst in o.instances]
        p[i, :k] = [inst.prob for inst in o.instances]
    X = X.reshape(N * nmax, d)
    p = p.reshape(N * nmax)
    out = np.empty((N, N))
    block = max(1, 2_000_000 // max(1, N * nmax * nmax))
    for start in range(0, N, block):
        stop = min(N, start + block)
        cols = slice(start * nmax, stop * nmax)
        le = np.ones((N * nmax, (stop - start) * nmax), dtype=bool)
        lt = np.zeros_like(le)
        for k in range(d):
            a = X[:, k][:, None]
            b = X[cols, k][None, :]
            le &= a <= b
            lt |= a < b
        w = (le & lt) * (p[:, None] * p[None, cols])
        out[:, start:stop] = w.reshape(N, nmax, stop - start, nmax).sum(axis=(1, 3))
    np.fill_diagonal(out, 0.0)
    return out


def brute_force_skyline(objects: Iterable[UncertainObject],
                        counter: CostCounter | None = None) -> set[int]:
    """All-pairs skyline with no index: every instance pair of every object pair."""
    objs = sorted(objects, key=lambda o: o.id)
    if not objs:
        return set()
    if counter is not None:
        sizes = [len(o.instances) for o in objs]
        counter.add(sum(sizes) ** 2 - sum(s * s for s in sizes))
    if len(objs) == 1:
        return {objs[0].id}
    dominated = (dominance_matrix(objs) >= 1.0 - EPS).any(axis=0)
    return {o.id for o, dom in zip(objs, dominated) if not dom}


# -- incremental maintenance ---------------------------------------------


def _refill(state: SkylineState, triggers: list[UncertainObject], window: Mapping,
            index: RTree, excluded, counter) -> list[int]:
    """Re-examine window objects that only the triggers were holding down.

    A window object outside both sets is dominated by some candidate-set
    member; it can surface only if every such member departed or was
    promoted, so the departed/promoted objects are the only places to look.
    """
    sk1, sk2 = state.sk1, state.sk2
    skip = _Skip(excluded, sk1, sk2)
    cands: Objects = {}
    for t in triggers:
        for cid in index.iter_dominated(t.mbr, counter=counter, skip=skip):
            if cid in cands:
                continue
            c = window[cid]
            if certainly_dominates(t, c, counter, boxes_tested=True):
                cands[cid] = c

    doms: dict[int, list[int] | None] = {}
    for cid in sorted(cands):
        c = cands[cid]
        found: list[int] | None = []
        for did in index.iter_certain_dominators(c.mbr, strict=False, counter=counter,
                                                 skip=_Skip(excluded, extra=cid)):
            if certainly_dominates(window[did], c, counter, boxes_tested=True):
                if did not in sk1 and did not in cands:
                    found = None
                    break
                found.append(did)
        doms[cid] = found

    lifted = [cid for cid in sorted(doms) if doms[cid] == []]
    for cid in lifted:
        sk1[cid] = cands[cid]
    for cid in sorted(doms):
        ds = doms[cid]
        if ds and all(d in sk1 for d in ds):
            sk2[cid] = cands[cid]
    return lifted


def _absorb(state: SkylineState, news: list[UncertainObject], counter) -> list[int]:
    sk1, sk2 = state.sk1, state.sk2
    old1 = [sk1[i] for i in sorted(sk1)]
    sk1.update((x.id, x) for x in news)

    down: Objects = {}
    for s in old1:
        if any(certainly_dominates(x, s, counter) for x in news):
            down[s.id] = s
    for x in news:
        if any(certainly_dominates(s, x, counter) for s in old1) or any(
                certainly_dominates(y, x, counter) for y in news if y.id != x.id):
            down[x.id] = x
    for oid in down:
        del sk1[oid]
    demoted = [s.id for s in old1 if s.id in down]

    incoming = [down[i] for i in sorted(down)]
    if not incoming:
        return demoted
    existing = [sk2[i] for i in sorted(sk2)]
    beaten = [e.id for e in existing
              if any(certainly_dominates(w, e, counter) for w in incoming)]
    for oid in beaten:
        del sk2[oid]
    for c in incoming:
        if any(certainly_dominates(w, c, counter) for w in existing):
            continue
        if any(certainly_dominates(w, c, counter) for w in incoming if w.id != c.id):
            continue
        sk2[c.id] = c
    return demoted


def update_skyline(state: SkylineState, new_objects: Iterable[UncertainObject],
                   obsolete_objects: Iterable[UncertainObject], window: Mapping,
                   index: RTree, counter: CostCounter | None = None,
                   check: bool = False) -> tuple[SkylineState, list[int], list[int]]:
    """Move `state` from the old window to the current one in place.

    `window` and `index` already reflect the step: obsolete objects evicted,
    new ones added. An id may appear as both obsolete and new, meaning "drop
    its old placement and place it again". Returns the state together with
    the ids lifted into the skyline from below and the skyline ids pushed
    down into the candidate set.
    """
    new = {o.id: o for o in new_objects}
    gone = {o.id: o for o in obsolete_objects}
    excluded = set(new) | set(gone)
    sk1, sk2 = state.sk1, state.sk2

    dropped = [sk2.pop(i) for i in sorted(gone) if i in sk2]

    departed = [sk1.pop(i) for i in sorted(gone) if i in sk1]
    promoted: list[UncertainObject] = []
    if departed:
        survivors = [sk1[i] for i in sorted(sk1)]
        for cid in sorted(sk2):
            c = sk2[cid]
            if not any(certainly_dominates(o, c, counter) for o in departed):
                continue
            if any(certainly_dominates(s, c, counter) for s in survivors):
                continue
            promoted.append(c)
        for c in promoted:
            del sk2[c.id]
            sk1[c.id] = c

    lifted: list[int] = []
    if dropped or promoted:
        lifted = _refill(state, dropped + promoted, window, index, excluded, counter)

    demoted: list[int] = []
    if new:
        demoted = _absorb(state, [new[i] for i in sorted(new)], counter)

    if check:
        verify_state(state, list(window))
    return state, sorted([c.id for c in promoted] + lifted), demoted


def verify_state(state: SkylineState, objects: list[UncertainObject]) -> None:
    sky = brute_force_skyline(objects)
    cand = brute_force_skyline([o for o in objects if o.id not in sky])
    if set(state.sk1) != sky or set(state.sk2) != cand:
        raise ProtocolError(
            f"skyline state diverged: sk1={sorted(state.sk1)} expected {sorted(sky)}, "
            f"sk2={sorted(state.sk2)} expected {sorted(cand)}"
        )
