"""Reference implementations written straight from the definitions.

Deliberately naive: plain loops over raw (point, prob) lists, no MBRs,
no numpy, no shortcuts, so they share no code path with the package.
"""

import random

from epus_sky.uncertain import UncertainObject

THRESHOLD = 1.0 - 1e-9


def raw(obj):
    return [(inst.attrs, inst.prob) for inst in obj.instances]


def point_dominates(a, b):
    return all(x <= y for x, y in zip(a, b)) and any(x < y for x, y in zip(a, b))


def dominance_probability(a, b):
    total = 0.0
    for pa, qa in raw(a):
        for pb, qb in raw(b):
            if point_dominates(pa, pb):
                total += qa * qb
    return total


def skyline(objects):
    objects = list(objects)
    return {u.id for u in objects
            if not any(v.id != u.id and dominance_probability(v, u) >= THRESHOLD
                       for v in objects)}


def layers(objects):
    objects = list(objects)
    first = skyline(objects)
    return first, skyline([o for o in objects if o.id not in first])


def random_object(rng, oid, d, n, spread=100.0, radius=5.0, grid=None):
    """Random object; `grid` snaps coordinates to force ties."""
    center = [rng.uniform(0, spread) for _ in range(d)]
    pts = []
    for _ in range(n):
        p = [c + rng.uniform(-radius, radius) for c in center]
        if grid:
            p = [round(x / grid) * grid for x in p]
        pts.append(p)
    w = [rng.random() + 1e-6 for _ in range(n)]
    s = sum(w)
    probs = [x / s for x in w]
    probs[0] += 1.0 - sum(probs)
    return UncertainObject.build(oid, oid, pts, probs)


def random_objects(seed, count, d=2, n=3, **kw):
    rng = random.Random(seed)
    return [random_object(rng, i, d, n, **kw) for i in range(1, count + 1)]
