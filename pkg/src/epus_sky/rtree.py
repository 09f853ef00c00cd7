"""In-memory R-tree over object MBRs.

Uncertain objects are indexed as whole-object boxes, so pruning treats them
as certain data. Trees are packed with sort-tile-recursive (STR) bulk loading
and maintained incrementally with Guttman's insert (quadratic split) and
delete (condense + reinsert).
"""

from __future__ import annotations

import math
from typing import Callable, Iterable, Iterator, Sequence

from .errors import UsageError
from .uncertain import CostCounter, Mbr

DEFAULT_FANOUT = 8


class _Entry:
    __slots__ = ("oid", "lo", "hi")

    def __init__(self, oid: int, lo: tuple, hi: tuple):
        self.oid = oid
        self.lo = lo
        self.hi = hi


class _Node:
    __slots__ = ("leaf", "children", "lo", "hi", "parent")

    def __init__(self, leaf: bool, children: list):
        self.leaf = leaf
        self.children = children
        self.parent: _Node | None = None
        if not leaf:
            for c in children:
                c.parent = self
        self.refit()

    def refit(self) -> None:
        if not self.children:
            self.lo = self.hi = None
            return
        cs = self.children
        self.lo = tuple(map(min, *(c.lo for c in cs))) if len(cs) > 1 else cs[0].lo
        self.hi = tuple(map(max, *(c.hi for c in cs))) if len(cs) > 1 else cs[0].hi


def _area(lo, hi) -> float:
    a = 1.0
    for l, h in zip(lo, hi):
        a *= h - l
    return a


def _union(a_lo, a_hi, b_lo, b_hi):
    return tuple(map(min, a_lo, b_lo)), tuple(map(max, a_hi, b_hi))


def _enlargement(node_lo, node_hi, lo, hi) -> float:
    u_lo, u_hi = _union(node_lo, node_hi, lo, hi)
    return _area(u_lo, u_hi) - _area(node_lo, node_hi)


def _le_all(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _str_groups(items: list, fanout: int, dims: int, axis: int = 0) -> list[list]:
    """Partition items into runs of at most `fanout` by sort-tile-recursive tiling."""
    items = sorted(items, key=lambda e: (e.lo[axis] + e.hi[axis], e.lo, e.hi))
    if axis == dims - 1 or len(items) <= fanout:
        return [items[i:i + fanout] for i in range(0, len(items), fanout)]
    pages = math.ceil(len(items) / fanout)
    k = dims - axis
    slabs = 1
    while slabs ** k < pages:
        slabs += 1
    slab_size = fanout * math.ceil(pages / slabs)
    groups = []
    for i in range(0, len(items), slab_size):
        groups.extend(_str_groups(items[i:i + slab_size], fanout, dims, axis + 1))
    return groups


class RTree:
    def __init__(self, fanout: int = DEFAULT_FANOUT):
        if fanout < 2:
            raise UsageError("R-tree fanout must be at least 2")
        self.fanout = fanout
        self.min_fill = max(1, int(0.4 * fanout))
        self.root = _Node(True, [])
        self._leaf_of: dict[int, _Node] = {}

    # -- construction ---------------------------------------------------

    @classmethod
    def bulk_load(cls, objects: Iterable, fanout: int = DEFAULT_FANOUT) -> "RTree":
        """Pack objects (anything with `.id` and `.mbr`) into a balanced tree."""
        tree = cls(fanout)
        entries = [_Entry(o.id, o.mbr.lo, o.mbr.hi) for o in objects]
        if len({e.oid for e in entries}) != len(entries):
            raise UsageError("duplicate ids in bulk load")
        if not entries:
            return tree
        dims = len(entries[0].lo)
        nodes = [_Node(True, g) for g in _str_groups(entries, fanout, dims)]
        for n in nodes:
            for e in n.children:
                tree._leaf_of[e.oid] = n
        while len(nodes) > 1:
            nodes = [_Node(False, g) for g in _str_groups(nodes, fanout, dims)]
        tree.root = nodes[0]
        return tree

    def __len__(self) -> int:
        return len(self._leaf_of)

    def __contains__(self, oid: int) -> bool:
        return oid in self._leaf_of

    @property
    def height(self) -> int:
        """Number of node levels; a lone entry needs no directory level."""
        if len(self) <= 1:
            return 0
        h, node = 1, self.root
        while not node.leaf:
            node = node.children[0]
            h += 1
        return h

    def leaves(self) -> list[_Node]:
        out, stack = [], [self.root]
        while stack:
            n = stack.pop()
            if n.leaf:
                out.append(n)
            else:
                stack.extend(n.children)
        return out

    def ids(self) -> set[int]:
        return set(self._leaf_of)

    # -- mutation -------------------------------------------------------

    def insert(self, obj) -> None:
        if obj.id in self._leaf_of:
            raise UsageError(f"object {obj.id} already indexed")
        self._insert_entry(_Entry(obj.id, obj.mbr.lo, obj.mbr.hi))

    def _insert_entry(self, entry: _Entry) -> None:
        node = self.root
        while not node.leaf:
            best = None
            for c in node.children:
                key = (_enlargement(c.lo, c.hi, entry.lo, entry.hi), _area(c.lo, c.hi))
                if best is None or key < best[0]:
                    best = (key, c)
            node = best[1]
        node.children.append(entry)
        self._leaf_of[entry.oid] = node
        self._adjust(node)

    def _adjust(self, node: _Node) -> None:
        while node is not None:
            if len(node.children) > self.fanout:
                sibling = self._split(node)
                parent = node.parent
                if parent is None:
                    self.root = _Node(False, [node, sibling])
                    return
                parent.children.append(sibling)
                sibling.parent = parent
            node.refit()
            node = node.parent

    def _split(self, node: _Node) -> _Node:
        items = node.children
        # quadratic seed pick: the pair wasting the most area together
        worst, seeds = -math.inf, (0, 1)
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                u_lo, u_hi = _union(items[i].lo, items[i].hi, items[j].lo, items[j].hi)
                waste = (_area(u_lo, u_hi) - _area(items[i].lo, items[i].hi)
                         - _area(items[j].lo, items[j].hi))
                if waste > worst:
                    worst, seeds = waste, (i, j)
        a, b = [items[seeds[0]]], [items[seeds[1]]]
        a_box = (items[seeds[0]].lo, items[seeds[0]].hi)
        b_box = (items[seeds[1]].lo, items[seeds[1]].hi)
        rest = [it for k, it in enumerate(items) if k not in seeds]
        while rest:
            if len(a) + len(rest) <= self.min_fill:
                a.extend(rest)
                break
            if len(b) + len(rest) <= self.min_fill:
                b.extend(rest)
                break
            pick, pick_k, pick_diff = None, 0, -1.0
            for k, it in enumerate(rest):
                da = _enlargement(*a_box, it.lo, it.hi)
                db = _enlargement(*b_box, it.lo, it.hi)
                if abs(da - db) > pick_diff:
                    pick, pick_k, pick_diff = (da, db), k, abs(da - db)
            it = rest.pop(pick_k)
            da, db = pick
            to_a = (da, _area(*a_box), len(a)) <= (db, _area(*b_box), len(b))
            if to_a:
                a.append(it)
                a_box = _union(*a_box, it.lo, it.hi)
            else:
                b.append(it)
                b_box = _union(*b_box, it.lo, it.hi)
        node.children = a
        sibling = _Node(node.leaf, b)
        if node.leaf:
            for e in b:
                self._leaf_of[e.oid] = sibling
        else:
            for c in a:
                c.parent = node
        node.refit()
        return sibling

    def delete(self, oid: int) -> None:
        leaf = self._leaf_of.pop(oid, None)
        if leaf is None:
            raise UsageError(f"object {oid} is not indexed")
        leaf.children = [e for e in leaf.children if e.oid != oid]
        orphans: list[_Entry] = []
        node = leaf
        while node.parent is not None:
            parent = node.parent
            if len(node.children) < self.min_fill:
                parent.children.remove(node)
                orphans.extend(self._drain(node))
            else:
                node.refit()
            node = parent
        self.root.refit()
        while not self.root.leaf and len(self.root.children) == 1:
            self.root = self.root.children[0]
            self.root.parent = None
        if not self.root.leaf and not self.root.children:
            self.root = _Node(True, [])
        for e in orphans:
            self._insert_entry(e)

    def _drain(self, node: _Node) -> list[_Entry]:
        out, stack = [], [node]
        while stack:
            n = stack.pop()
            if n.leaf:
                for e in n.children:
                    del self._leaf_of[e.oid]
                out.extend(n.children)
            else:
                stack.extend(n.children)
        return out

    # -- queries --------------------------------------------------------

    def _search(self, node_ok: Callable, entry_ok: Callable,
                counter: CostCounter | None, skip: Sequence | set = ()) -> Iterator[int]:
        if not self.root.children:
            return
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.leaf:
                for e in node.children:
                    if e.oid in skip:
                        continue
                    if counter is not None:
                        counter.add()
                    if entry_ok(e):
                        yield e.oid
            else:
                if counter is not None:
                    counter.add(len(node.children))
                for c in reversed(node.children):
                    if node_ok(c):
                        stack.append(c)

    def iter_potential_dominators(self, target: Mbr, counter=None, skip=()) -> Iterator[int]:
        """Ids whose box reaches into the region that could dominate `target`."""
        hi = target.hi
        ok = lambda n: _le_all(n.lo, hi)
        return self._search(ok, ok, counter, skip)

    def iter_certain_dominators(self, target: Mbr, strict: bool = True,
                                counter=None, skip=()) -> Iterator[int]:
        lo = target.lo

        def entry_ok(e):
            sep = False
            for h, l in zip(e.hi, lo):
                if h > l:
                    return False
                if h < l:
                    sep = True
            return sep or not strict

        return self._search(lambda n: _le_all(n.lo, lo), entry_ok, counter, skip)

    def iter_dominated(self, source: Mbr, counter=None, skip=()) -> Iterator[int]:
        """Ids whose box lies wholly on the worse side of `source`'s max corner."""
        hi = source.hi
        return self._search(lambda n: _le_all(hi, n.hi), lambda e: _le_all(hi, e.lo),
                            counter, skip)

    def query_potential_dominators(self, target: Mbr, counter=None) -> list[int]:
        return sorted(self.iter_potential_dominators(target, counter))

    def query_certain_dominators(self, target: Mbr, counter=None) -> list[int]:
        return sorted(self.iter_certain_dominators(target, True, counter))

    # -- debugging ------------------------------------------------------

    def check_invariants(self) -> None:
        depths = set()
        stack = [(self.root, 0)]
        while stack:
            node, depth = stack.pop()
            assert len(node.children) <= self.fanout, "fanout exceeded"
            if node.children:
                lo = tuple(map(min, *(c.lo for c in node.children))) if len(node.children) > 1 \
                    else node.children[0].lo
                hi = tuple(map(max, *(c.hi for c in node.children))) if len(node.children) > 1 \
                    else node.children[0].hi
                assert node.lo == lo and node.hi == hi, "stale node MBR"
            if node.leaf:
                depths.add(depth)
                for e in node.children:
                    assert self._leaf_of.get(e.oid) is node, "leaf map out of sync"
            else:
                assert node.children, "empty internal node"
                for c in node.children:
                    assert c.parent is node, "broken parent link"
                    assert _le_all(node.lo, c.lo) and _le_all(c.hi, node.hi), "child escapes parent"
                    stack.append((c, depth + 1))
        assert len(depths) <= 1, f"leaves at unequal depths {depths}"
        n = sum(len(l.children) for l in self.leaves())
        assert n == len(self._leaf_of), "entry count mismatch"


def bulk_load(objects: Iterable, fanout: int = DEFAULT_FANOUT) -> RTree:
    return RTree.bulk_load(objects, fanout)
