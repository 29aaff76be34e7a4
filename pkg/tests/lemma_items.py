"""Set identities and inclusions between region kinds, sampled on grids.

A set is (k, first, second, alpha, beta): first/second name the vectors fed
to the kind as its g and h. "a" and "b" stand for the shared sample weights.
"""

import numpy as np

from gddkit.regions import GridSampler, build_region_set, union_bbox

ALPHA, BETA = 0.37, 0.61
def _v(t):
    return {"a": ALPHA, "b": BETA}.get(t, t)


def S(k, first, second, alpha=1.0, beta=1.0):
    return (k, first, second, alpha, beta)


GENERIC_ITEMS = [
    # (equal group, sets inside it, sets containing it)
    ([S(1, "g", "h"), S(2, "g", "g", "a"), S(3, "g", "g", "a"), S(14, "g", "h", 1), S(16, "g", "h", 1)]
     + [S(k, "g", "h", 1) for k in (2, 3, 15, 17)]
     + [S(k, "g", "h", 1, 1) for k in range(18, 28)]
     + [S(k, "g", "h", 0, 1) for k in (18, 20, 22, 24, 26)]
     + [S(k, "g", "h", 0, 0) for k in (19, 21, 23, 25, 27)],
     [S(4, "g", "h"), S(14, "g", "h", "a")], []),
    ([S(2, "g", "h", "a")] + [S(k, "g", "h", 1, "a") for k in (18, 19, 22, 23, 26, 27)],
     [S(6, "g", "h", "a"), S(18, "g", "h", "a", "a")], []),
    ([S(3, "g", "h", "a")] + [S(k, "g", "h", 1, "a") for k in (20, 21, 24, 25)],
     [S(2, "g", "h", "a"), S(10, "g", "h", "a"), S(24, "g", "h", "a", "a")], []),
    ([S(4, "g", "h"), S(14, "g", "h", 0.5), S(5, "g", "g")]
     + [S(k, "g", "g", "a") for k in range(6, 12)]
     + [S(k, "g", "h", 1) for k in (6, 8, 10, 12)]
     + [S(k, "g", "h", 0.5, 1) for k in (18, 20, 24)], [], []),
    ([S(5, "g", "h"), S(15, "g", "h", 0.5)] + [S(k, "g", "h", 1) for k in (7, 9, 11, 13)]
     + [S(k, "g", "h", 0.5, 1) for k in (19, 21, 25)], [], []),
    ([S(6, "g", "h", "a"), S(18, "g", "h", 0.5, "a")], [], [S(k, "g", "h", "a") for k in (8, 10, 12)]),
    ([S(7, "g", "h", "a"), S(19, "g", "h", 0.5, "a")], [], [S(k, "g", "h", "a") for k in (9, 11, 13)]),
    ([S(10, "g", "h", "a"), S(24, "g", "h", 0.5, "a")], [], []),
    ([S(11, "g", "h", "a"), S(25, "g", "h", 0.5, "a")], [], []),
    ([S(14, "g", "h", "a"), S(15, "g", "g", "a")]
     + [S(k, "g", "g", "a", "b") for k in (18, 19, 20, 21, 24, 25)]
     + [S(k, "g", "h", "a", 1) for k in (18, 20, 24)],
     [], [S(16, "g", "h", "a"), S(17, "g", "g", "a"), S(22, "g", "h", "a", 1), S(26, "g", "h", "a", 1)]),
    ([S(15, "g", "h", "a")] + [S(k, "g", "h", "a", 1) for k in (19, 21, 25)],
     [], [S(17, "g", "h", "a"), S(23, "g", "h", "a", 1), S(27, "g", "h", "a", 1)]),
    ([S(18, "g", "h", "a", "b")], [], [S(k, "g", "h", "a", "b") for k in (20, 22, 24, 26)]),
    ([S(19, "g", "h", "a", "b")], [], [S(k, "g", "h", "a", "b") for k in (21, 23, 25, 27)]),
]

CONCRETE_ITEMS = [
    ([S(1, "R", "R"), S(3, "R", "R", "a"), S(4, "R", "R", "a"), S(16, "R", "R", 1), S(19, "R", "R", 1)]
     + [S(k, "R", "C", 1) for k in (3, 4, 18, 21)]
     + [S(k, "R", "C", 1, 1) for k in range(22, 32)]
     + [S(k, "R", "C", 0, 1) for k in (22, 24, 26, 28, 30)]
     + [S(k, "R", "C", 0, 0) for k in (23, 25, 27, 29, 31)],
     [S(5, "R", "C"), S(16, "R", "C", "a")], []),
    ([S(2, "R", "C"), S(3, "C", "C", "a"), S(4, "C", "C", "a"), S(17, "R", "C", 0), S(20, "R", "C", 0)]
     + [S(k, "R", "C", 0) for k in (3, 4, 18, 21)]
     + [S(k, "R", "C", 1, 0) for k in range(22, 32)]
     + [S(k, "R", "C", 0, 0) for k in (22, 24, 26, 28, 30)]
     + [S(k, "R", "C", 0, 1) for k in (23, 25, 27, 29, 31)],
     [S(6, "R", "C"), S(17, "R", "C", "a")], []),
    ([S(3, "R", "C", "a")] + [S(k, "R", "C", 1, "a") for k in (22, 23, 26, 27, 30, 31)],
     [S(8, "R", "C", "a"), S(22, "R", "C", "a", "a")], []),
    ([S(4, "R", "C", "a")] + [S(k, "R", "C", 1, "a") for k in (24, 25, 28, 29)],
     [S(3, "R", "C", "a"), S(12, "R", "C", "a"), S(28, "R", "C", "a", "a")], []),
    ([S(5, "R", "C"), S(7, "R", "R"), S(16, "R", "C", 0.5)]
     + [S(k, "R", "R", "a") for k in range(8, 14)]
     + [S(k, "R", "C", 1) for k in (8, 10, 12, 14)]
     + [S(k, "R", "C", 0.5, 1) for k in (22, 24, 28)], [], []),
    ([S(6, "R", "C"), S(7, "C", "C"), S(17, "R", "C", 0.5)]
     + [S(k, "C", "C", "a") for k in range(8, 14)]
     + [S(k, "R", "C", 0) for k in (8, 10, 12, 14)]
     + [S(k, "R", "C", 0.5, 0) for k in (22, 24, 28)], [], []),
    ([S(7, "R", "C"), S(18, "R", "C", 0.5)] + [S(k, "R", "C", 1) for k in (9, 11, 13, 15)]
     + [S(k, "R", "C", 0.5, 1) for k in (23, 25, 29)], [], []),
    ([S(8, "R", "C", "a"), S(22, "R", "C", 0.5, "a")], [], [S(k, "R", "C", "a") for k in (10, 12, 14)]),
    ([S(9, "R", "C", "a"), S(23, "R", "C", 0.5, "a")], [], [S(k, "R", "C", "a") for k in (11, 13, 15)]),
    ([S(12, "R", "C", "a"), S(28, "R", "C", 0.5, "a")], [], []),
    ([S(13, "R", "C", "a"), S(29, "R", "C", 0.5, "a")], [], []),
    ([S(16, "R", "C", "a"), S(18, "R", "R", "a")]
     + [S(k, "R", "R", "a", "b") for k in (22, 23, 24, 25, 28, 29)]
     + [S(k, "R", "C", "a", 1) for k in (22, 24, 28)],
     [], [S(19, "R", "C", "a")] + [S(k, "R", "C", "a", 1) for k in (26, 30)]),
    ([S(17, "R", "C", "a"), S(18, "C", "C", "a")]
     + [S(k, "C", "C", "a", "b") for k in (22, 23, 24, 25, 28, 29)]
     + [S(k, "R", "C", "a", 0) for k in (22, 24, 28)],
     [], [S(20, "R", "C", "a")] + [S(k, "R", "C", "a", 0) for k in (26, 30)]),
    ([S(18, "R", "C", "a")] + [S(k, "R", "C", "a", 1) for k in (23, 25, 29)],
     [], [S(21, "R", "C", "a")] + [S(k, "R", "C", "a", 1) for k in (27, 31)]),
    ([S(22, "R", "C", "a", "b")], [], [S(k, "R", "C", "a", "b") for k in (24, 26, 28, 30)]),
    ([S(23, "R", "C", "a", "b")], [], [S(k, "R", "C", "a", "b") for k in (25, 27, 29, 31)]),
]


def _build(a, definition, spec, vectors):
    k, first, second, alpha, beta = spec
    return build_region_set(a, definition, k, vectors[first], vectors[second], _v(alpha), _v(beta))


def check_items(a, definition, items, vectors, resolution=(96, 96)):
    """Human-readable failures; equal groups must give identical masks, inclusions no stray cells."""
    failures = []
    for n_item, (equal, inner, outer) in enumerate(items, 1):
        built = {spec: _build(a, definition, spec, vectors) for spec in equal + inner + outer}
        sampler = GridSampler(union_bbox(built.values()), resolution)
        ref = sampler.inside(built[equal[0]])
        for spec in equal[1:]:
            if not np.array_equal(sampler.inside(built[spec]), ref):
                failures.append(f"item {n_item}: {equal[0]} != {spec}")
        for spec in inner:
            if np.any(sampler.inside(built[spec]) & ~ref):
                failures.append(f"item {n_item}: {spec} not inside {equal[0]}")
        for spec in outer:
            if np.any(ref & ~sampler.inside(built[spec])):
                failures.append(f"item {n_item}: {equal[0]} not inside {spec}")
    return failures


