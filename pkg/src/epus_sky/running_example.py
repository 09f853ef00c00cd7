"""Small hand-built datasets with known answers.

`table_objects` is a three-object, two-dimensional set with published
instance coordinates. `scenario_objects` is a 16-object stream laid out so
that a single edge with a 10-object window walks through six distinct
update situations between t=11 and t=16; `SCENARIO_STATES` and
`SCENARIO_MESSAGES` record the expected layers and deltas.
"""

from __future__ import annotations

from .uncertain import UncertainObject

TABLE_POINTS = {
    1: ([(28, 37), (27, 35), (25, 38)], [0.4, 0.1, 0.5]),
    2: ([(9, 35), (9, 38), (10, 37)], [0.1, 0.2, 0.7]),
    3: ([(24, 92), (22, 91), (22, 88)], [0.5, 0.3, 0.2]),
}


def table_objects() -> dict[int, UncertainObject]:
    return {i: UncertainObject.build(i, i, pts, ps) for i, (pts, ps) in TABLE_POINTS.items()}


SCENARIO_WINDOW = 10

# object centers; each object gets three instances spread around its center
SCENARIO_CENTERS = {
    1: (90, 90), 2: (65, 50), 3: (30, 65), 4: (66, 40),
    5: (10, 10), 6: (25, 70), 7: (20, 60), 8: (85, 18),
    9: (90, 25), 10: (80, 15), 11: (60, 20), 12: (70, 75),
    13: (5, 80), 14: (15, 90), 15: (75, 85), 16: (65, 30),
}
_OFFSETS = [((0, 0), 0.5), ((1, -1), 0.3), ((-1, 1), 0.2)]


def scenario_objects() -> list[UncertainObject]:
    out = []
    for i in sorted(SCENARIO_CENTERS):
        cx, cy = SCENARIO_CENTERS[i]
        pts = [(cx + dx, cy + dy) for (dx, dy), _ in _OFFSETS]
        out.append(UncertainObject.build(i, i, pts, [p for _, p in _OFFSETS]))
    return out


# t -> (skyline ids, candidate ids) after the step at time t
SCENARIO_STATES = {
    11: ({5}, {7, 10, 11}),
    12: ({5}, {7, 10, 11}),
    13: ({5, 13}, {7, 10, 11}),
    14: ({5, 13}, {7, 10, 11, 14}),
    15: ({7, 10, 11, 13}, {6, 8, 14}),
    16: ({7, 10, 11, 13}, {8, 14, 16}),
}

# t -> (obsolete ids, new skyline ids, new candidate ids)
SCENARIO_MESSAGES = {
    12: ([2], [], []),
    13: ([3], [13], []),
    14: ([4], [], [14]),
    15: ([5], [7, 10, 11], [6, 8]),
    16: ([6], [], [16]),
}
