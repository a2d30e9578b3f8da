"""Independent re-implementations used to cross-check library results."""
import itertools

import numpy as np


def side_interiors(t, cycle):
    """Vertices strictly inside each side of ``cycle``, found by flooding triangles across non-cycle edges."""
    L = len(cycle)
    blocked = {frozenset((cycle[i], cycle[(i + 1) % L])) for i in range(L)}
    by_edge = {}
    for k, tri in enumerate(t.triangles):
        for i in range(3):
            by_edge.setdefault(frozenset((tri[i], tri[(i + 1) % 3])), []).append(k)
    region = [-1] * len(t.triangles)
    count = 0
    for s in range(len(t.triangles)):
        if region[s] >= 0:
            continue
        region[s] = count
        stack = [s]
        while stack:
            k = stack.pop()
            tri = t.triangles[k]
            for i in range(3):
                e = frozenset((tri[i], tri[(i + 1) % 3]))
                if e in blocked:
                    continue
                for j in by_edge[e]:
                    if region[j] < 0:
                        region[j] = count
                        stack.append(j)
        count += 1
    on = set(cycle)
    return [
        {v for k, tri in enumerate(t.triangles) if region[k] == r for v in tri} - on
        for r in range(count)
    ]


def all_simple_cycles(t):
    """Every simple cycle of the edge graph, each once, by plain depth-first search."""
    adj = {v: set() for v in range(t.n)}
    for a, b in t.edges:
        adj[a].add(b)
        adj[b].add(a)
    out = []

    def extend(path, seen):
        last = path[-1]
        for w in adj[last]:
            if w == path[0] and len(path) >= 3 and path[1] < path[-1]:
                out.append(tuple(path))
            elif w > path[0] and w not in seen:
                seen.add(w)
                path.append(w)
                extend(path, seen)
                path.pop()
                seen.discard(w)

    for s in range(t.n):
        extend([s], {s})
    return out


def reducing(t, cycle):
    sides = side_interiors(t, cycle)
    return len(sides) == 2 and all(len(s) >= 2 for s in sides)


def corner_jacobian_bruteforce(corners, order):
    """Scaled Jacobian from an explicit list of (corner, three neighbours) in right-handed order."""
    P = np.asarray(corners, dtype=float)
    worst = np.inf
    for c, (i, j, k) in zip(range(8), order):
        vs = [P[x] - P[c] for x in (i, j, k)]
        vs = [v / np.linalg.norm(v) for v in vs]
        a, b, d = vs
        det = a[0] * (b[1] * d[2] - b[2] * d[1]) - a[1] * (b[0] * d[2] - b[2] * d[0]) + a[2] * (b[0] * d[1] - b[1] * d[0])
        worst = min(worst, det)
    return worst


def grid_counts(nx, ny, nz):
    """Closed-form vertex, face and edge counts of a structured grid."""
    V = (nx + 1) * (ny + 1) * (nz + 1)
    F = (nx + 1) * ny * nz + nx * (ny + 1) * nz + nx * ny * (nz + 1)
    E = nx * (ny + 1) * (nz + 1) + (nx + 1) * ny * (nz + 1) + (nx + 1) * (ny + 1) * nz
    B = 2 * (nx * ny + ny * nz + nx * nz)
    return V, F, E, B


