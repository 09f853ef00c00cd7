"""Edge-to-server update messages: canonical line encoding and byte accounting.

One message encodes to one line of compact JSON with a fixed key order.
Floats are written with Python's shortest round-trip repr so a decoded
object is bit-identical to the one encoded; dominance at probability 1 is
decided against a 1e-9 margin, which a lossy float rendering could cross.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import DecodeError, UsageError
from .uncertain import Instance, UncertainObject

OBJECT_PACKET_BYTES = 3 * 1024
MESSAGE_FIELDS = ("ecn_id", "step", "obsolete_ids", "new_skyline", "new_candidates")
_OBJECT_FIELDS = ("id", "seq", "instances")
_INSTANCE_FIELDS = ("p", "attrs")


@dataclass
class UpdateMessage:
    ecn_id: int
    step: int
    obsolete_ids: list[int] = field(default_factory=list)
    new_skyline: list[UncertainObject] = field(default_factory=list)
    new_candidates: list[UncertainObject] = field(default_factory=list)

    def __post_init__(self):
        overlap = {o.id for o in self.new_skyline} & {o.id for o in self.new_candidates}
        if overlap:
            raise UsageError(f"objects {sorted(overlap)} sent as both skyline and candidate")

    def is_empty(self) -> bool:
        return not (self.obsolete_ids or self.new_skyline or self.new_candidates)

    def object_count(self) -> int:
        return len(self.obsolete_ids) + len(self.new_skyline) + len(self.new_candidates)


def message_cost_bytes(msg: UpdateMessage, object_bytes: int = OBJECT_PACKET_BYTES,
                       obsolete_bytes: int | None = None) -> int:
    """Bytes charged for a message: one fixed-size packet per carried object or id.

    `obsolete_bytes` lets id-only retractions be priced below a full object.
    """
    if obsolete_bytes is None:
        obsolete_bytes = object_bytes
    objects = len(msg.new_skyline) + len(msg.new_candidates)
    return object_bytes * objects + obsolete_bytes * len(msg.obsolete_ids)


# -- encoding -------------------------------------------------------------


def _object_to_json(o: UncertainObject) -> dict:
    return {
        "id": o.id,
        "seq": o.seq,
        "instances": [{"p": i.prob, "attrs": list(i.attrs)} for i in o.instances],
    }


def encode(msg: UpdateMessage) -> bytes:
    body = {
        "ecn_id": msg.ecn_id,
        "step": msg.step,
        "obsolete_ids": list(msg.obsolete_ids),
        "new_skyline": [_object_to_json(o) for o in msg.new_skyline],
        "new_candidates": [_object_to_json(o) for o in msg.new_candidates],
    }
    return json.dumps(body, separators=(",", ":"), allow_nan=False).encode() + b"\n"


# -- decoding -------------------------------------------------------------


class _Pairs(list):
    """A JSON object kept as its ordered key/value pairs."""


def _expect_fields(pairs, names, where: str, offset: int) -> dict:
    keys = tuple(k for k, _ in pairs) if isinstance(pairs, _Pairs) else None
    if keys != names:
        raise DecodeError(f"{where}: expected fields {list(names)}, got {list(keys or [])}",
                          offset)
    return dict(pairs)


def _int(value, what: str, offset: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DecodeError(f"{what} must be an integer", offset)
    return value


def _object_from_json(pairs, offset: int) -> UncertainObject:
    raw = _expect_fields(pairs, _OBJECT_FIELDS, "object", offset)
    if not isinstance(raw["instances"], list):
        raise DecodeError("object instances must be a list", offset)
    instances = []
    for ip in raw["instances"]:
        inst = _expect_fields(ip, _INSTANCE_FIELDS, "instance", offset)
        attrs, p = inst["attrs"], inst["p"]
        if not isinstance(attrs, list) or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) for x in attrs):
            raise DecodeError("instance attrs must be a list of numbers", offset)
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise DecodeError("instance probability must be a number", offset)
        try:
            instances.append(Instance(tuple(attrs), float(p)))
        except UsageError as exc:
            raise DecodeError(str(exc), offset) from None
    try:
        return UncertainObject(_int(raw["id"], "object id", offset),
                               _int(raw["seq"], "object seq", offset), tuple(instances))
    except UsageError as exc:
        raise DecodeError(str(exc), offset) from None


def decode(data: bytes | str, offset: int = 0) -> UpdateMessage:
    """Parse one encoded message; `offset` is added to reported error positions."""
    text = data.decode() if isinstance(data, (bytes, bytearray)) else data
    text = text.rstrip("\n")
    try:
        pairs = json.loads(text, object_pairs_hook=_Pairs)
    except json.JSONDecodeError as exc:
        raise DecodeError(f"malformed message: {exc.msg}", offset + exc.pos) from None
    raw = _expect_fields(pairs, MESSAGE_FIELDS, "message", offset)
    if not isinstance(raw["obsolete_ids"], list):
        raise DecodeError("obsolete_ids must be a list", offset)
    for name in ("new_skyline", "new_candidates"):
        if not isinstance(raw[name], list):
            raise DecodeError(f"{name} must be a list", offset)
    try:
        return UpdateMessage(
            ecn_id=_int(raw["ecn_id"], "ecn_id", offset),
            step=_int(raw["step"], "step", offset),
            obsolete_ids=[_int(i, "obsolete id", offset) for i in raw["obsolete_ids"]],
            new_skyline=[_object_from_json(o, offset) for o in raw["new_skyline"]],
            new_candidates=[_object_from_json(o, offset) for o in raw["new_candidates"]],
        )
    except UsageError as exc:
        raise DecodeError(str(exc), offset) from None


def write_trace(messages: Iterable[UpdateMessage], fh) -> None:
    for m in messages:
        fh.write(encode(m))


def read_trace(fh) -> Iterator[UpdateMessage]:
    """Yield messages from a binary trace file, one per line."""
    offset = 0
    for line in fh:
        if line.strip():
            yield decode(line, offset)
        offset += len(line)
