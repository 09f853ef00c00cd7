"""Count-based FIFO sliding window."""

from __future__ import annotations

from typing import Iterable, Iterator

from .errors import UsageError
from .uncertain import UncertainObject


class SlidingWindow:
    """Bounded FIFO of uncertain objects with keyed membership.

    Dicts keep insertion order, so one dict serves as both the arrival-ordered
    entry list and the id lookup.
    """

    def __init__(self, capacity: int):
        if capacity < 1:
            raise UsageError("window capacity must be positive")
        self.capacity = capacity
        self._entries: dict[int, UncertainObject] = {}

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, oid: int) -> bool:
        return oid in self._entries

    def __iter__(self) -> Iterator[UncertainObject]:
        return iter(self._entries.values())

    def __getitem__(self, oid: int) -> UncertainObject:
        return self._entries[oid]

    def get(self, oid: int) -> UncertainObject | None:
        return self._entries.get(oid)

    def ids(self) -> list[int]:
        return list(self._entries)

    def objects(self) -> list[UncertainObject]:
        return list(self._entries.values())

    def collect_obsolete(self, incoming_count: int) -> list[UncertainObject]:
        if incoming_count < 0:
            raise UsageError("incoming_count must be non-negative")
        excess = len(self._entries) + incoming_count - self.capacity
        if excess <= 0:
            return []
        out = []
        for obj in self._entries.values():
            if len(out) == excess:
                break
            out.append(obj)
        return out

    def remove(self, oid: int) -> bool:
        return self._entries.pop(oid, None) is not None

    def add(self, objects: Iterable[UncertainObject]) -> None:
        objects = sorted(objects, key=lambda o: o.seq)
        if len(self._entries) + len(objects) > self.capacity:
            raise UsageError(
                f"adding {len(objects)} objects overflows window "
                f"({len(self._entries)}/{self.capacity})"
            )
        seen = set()
        for o in objects:
            if o.id in self._entries or o.id in seen:
                raise UsageError(f"duplicate object id {o.id} in window")
            seen.add(o.id)
        for o in objects:
            self._entries[o.id] = o
