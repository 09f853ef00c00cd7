"""Discrete probabilistic uncertain objects and their dominance probabilities.

Smaller attribute values are better in every dimension. An object is a set
of weighted instances whose probabilities sum to at most one; object A
dominates object B with probability equal to the summed products of
instance probabilities over all instance pairs (a, b) where a dominates b.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import UsageError

EPS = 1e-9


class CostCounter:
    """Shared unit of computation cost: instance-pair evaluations plus MBR tests."""

    __slots__ = ("n",)

    def __init__(self) -> None:
        self.n = 0

    def add(self, k: int = 1) -> None:
        self.n += k

    def reset(self) -> int:
        n, self.n = self.n, 0
        return n

    def __repr__(self) -> str:
        return f"CostCounter({self.n})"


@dataclass(frozen=True)
class Mbr:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise UsageError("MBR corners differ in dimensionality")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise UsageError(f"MBR min corner {self.lo} exceeds max corner {self.hi}")

    @property
    def dims(self) -> int:
        return len(self.lo)

    def contains(self, other: "Mbr") -> bool:
        return all(a <= b for a, b in zip(self.lo, other.lo)) and all(
            a >= b for a, b in zip(self.hi, other.hi)
        )

    def union(self, other: "Mbr") -> "Mbr":
        return Mbr(
            tuple(map(min, self.lo, other.lo)), tuple(map(max, self.hi, other.hi))
        )

    def area(self) -> float:
        a = 1.0
        for lo, hi in zip(self.lo, self.hi):
            a *= hi - lo
        return a


@dataclass(frozen=True)
class Instance:
    attrs: tuple[float, ...]
    prob: float

    def __post_init__(self):
        object.__setattr__(self, "attrs", tuple(float(x) for x in self.attrs))
        if len(self.attrs) < 2:
            raise UsageError("instances need at least two attributes")
        if not 0.0 < self.prob <= 1.0:
            raise UsageError(f"instance probability {self.prob} outside (0, 1]")


def mbr_of(instances: Iterable[Instance]) -> Mbr:
    instances = list(instances)
    if not instances:
        raise UsageError("MBR of an empty instance list")
    cols = list(zip(*(i.attrs for i in instances)))
    return Mbr(tuple(min(c) for c in cols), tuple(max(c) for c in cols))


@dataclass(frozen=True)
class UncertainObject:
    id: int
    seq: int
    instances: tuple[Instance, ...]
    mbr: Mbr = field(init=False, repr=False, compare=False)
    total_prob: float = field(init=False, repr=False, compare=False)
    min_prob: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        insts = tuple(self.instances)
        object.__setattr__(self, "instances", insts)
        if not insts:
            raise UsageError(f"object {self.id} has no instances")
        d = len(insts[0].attrs)
        if any(len(i.attrs) != d for i in insts):
            raise UsageError(f"object {self.id} mixes instance dimensionalities")
        total = sum(i.prob for i in insts)
        if total > 1.0 + EPS:
            raise UsageError(f"object {self.id} total probability {total} exceeds 1")
        object.__setattr__(self, "mbr", mbr_of(insts))
        object.__setattr__(self, "total_prob", total)
        object.__setattr__(self, "min_prob", min(i.prob for i in insts))

    @property
    def dims(self) -> int:
        return len(self.instances[0].attrs)

    @classmethod
    def build(cls, id: int, seq: int, points: Sequence[Sequence[float]],
              probs: Sequence[float]) -> "UncertainObject":
        if len(points) != len(probs):
            raise UsageError("points and probabilities differ in length")
        return cls(id, seq, tuple(Instance(tuple(p), float(q)) for p, q in zip(points, probs)))


def _check_dims(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) != len(b):
        raise UsageError(f"dimensionality mismatch: {len(a)} vs {len(b)}")


def _dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    strict = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strict = True
    return strict


def instance_dominates(a: Instance, b: Instance) -> bool:
    _check_dims(a.attrs, b.attrs)
    return _dominates(a.attrs, b.attrs)


def instance_dominance_probability(a: Instance, b: Instance) -> float:
    return a.prob * b.prob if instance_dominates(a, b) else 0.0


def object_dominance_probability(ua: UncertainObject, ub: UncertainObject,
                                 counter: CostCounter | None = None) -> float:
    """Probability that `ua` dominates `ub`, summed over every instance pair."""
    if ua.id == ub.id:
        raise UsageError(f"object {ua.id} compared with itself")
    _check_dims(ua.mbr.lo, ub.mbr.lo)
    if counter is not None:
        counter.add(len(ua.instances) * len(ub.instances))
    total = 0.0
    for a in ua.instances:
        for b in ub.instances:
            if _dominates(a.attrs, b.attrs):
                total += a.prob * b.prob
    return total


def mbr_separated(upper: Mbr, lower: Mbr, strict: bool = True) -> bool:
    """True when every point of `upper` is <= every point of `lower`.

    With `strict`, one dimension must also be strictly separated, which makes
    every instance pair a strict dominance.
    """
    sep = False
    for h, l in zip(upper.hi, lower.lo):
        if h > l:
            return False
        if h < l:
            sep = True
    return sep or not strict


def certainly_dominates(ua: UncertainObject, ub: UncertainObject,
                        counter: CostCounter | None = None, boxes_tested: bool = False) -> bool:
    """Whether `ua` dominates `ub` with probability 1 (within EPS).

    Pass `boxes_tested` when the caller already compared the two MBRs (an
    index leaf test), so that comparison is not charged twice.
    """
    if ua.id == ub.id:
        raise UsageError(f"object {ua.id} compared with itself")
    _check_dims(ua.mbr.lo, ub.mbr.lo)
    mass = ua.total_prob * ub.total_prob
    if mass < 1.0 - EPS:
        return False
    if counter is not None and not boxes_tested:
        counter.add()
    if mbr_separated(ua.mbr, ub.mbr, strict=True):
        return True
    if not mbr_separated(ua.mbr, ub.mbr, strict=False):
        # some instance pair fails; it carries at least min_prob * min_prob
        if mass - ua.min_prob * ub.min_prob < 1.0 - EPS:
            return False
    return object_dominance_probability(ua, ub, counter) >= 1.0 - EPS
