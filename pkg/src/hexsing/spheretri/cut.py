"""Vertex-reducing cuts for triangulations that contain a vertex of degree >= 6.

For such a vertex ``u`` with umbrella ring ``C`` we look for ring vertices
``a``, ``b`` and a path ``p`` between them avoiding ``u`` and ``C`` so that
the cycle ``u, a, p, b`` leaves at least two vertices strictly inside each
side.  Splitting along such a cycle strictly lowers the vertex count of both
halves.  The search follows a fixed case analysis keyed on degree-3 ring
vertices ("isolated" vertices, which have no edge into the rest of the
disk); two configurations only admit cuts into base cases.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import catalog
from .triangulation import SphereTriangulation, TriangulationError, cycles_by_length, interior_counts


class NoCutError(TriangulationError):
    pass


@dataclass(frozen=True)
class CutResult:
    cycle: tuple[int, ...]
    case: str
    u: int | None
    base_case: bool = False


def reduces(t: SphereTriangulation, cycle) -> bool:
    try:
        k1, k2 = interior_counts(t, cycle)
    except TriangulationError:
        return False
    return k1 >= 2 and k2 >= 2


def general_cut(t: SphereTriangulation) -> CutResult:
    high = [w for w in range(t.n) if t.degrees[w] >= 6]
    if not high:
        raise NoCutError("no vertex of degree >= 6")
    for u in high:
        hit = _cut_at(t, u)
        if hit is not None:
            return hit
    # not reached on any triangulation we have generated; kept so failures are explicit
    for c in cycles_by_length(t):
        if reduces(t, c):
            return CutResult(c, "search", None)
    raise NoCutError("no reducing cycle found")


def _interior_path(t, inner, a, b):
    """Shortest path a -> b whose intermediate vertices all lie in ``inner``; excludes endpoints."""
    start = sorted(x for x in t.neighbors[a] if x in inner)
    goal = {x for x in t.neighbors[b] if x in inner}
    prev = {x: None for x in start}
    queue = deque(start)
    while queue:
        x = queue.popleft()
        if x in goal:
            path = [x]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for y in sorted(t.neighbors[x]):
            if y in inner and y not in prev:
                prev[y] = x
                queue.append(y)
    return None


def _arc(ring, start, stop, avoid):
    """Walk ``ring`` from ``start`` to ``stop`` in the direction that does not meet ``avoid``."""
    d = len(ring)
    i, j = ring.index(start), ring.index(stop)
    for step in (1, -1):
        out = [ring[(i + step * k) % d] for k in range(((j - i) * step) % d + 1)]
        if not avoid.intersection(out):
            return out
    return None


def _cut_at(t: SphereTriangulation, u: int) -> CutResult | None:
    ring = list(t.rotation[u])
    m = len(ring)
    pos = {c: k for k, c in enumerate(ring)}
    on_ring = set(ring)
    inner = set(range(t.n)) - on_ring - {u}

    def ring_dist(a, b):
        k = abs(pos[a] - pos[b])
        return min(k, m - k)

    def first_valid(label, cycles, base_case=False):
        for c in cycles:
            if c is not None and len(set(c)) == len(c) and reduces(t, c):
                return CutResult(tuple(c), label, u, base_case)
        return None

    def via_inner(a, b):
        p = _interior_path(t, inner, a, b)
        return None if p is None else (u, a, *p, b)

    pairs = sorted((min(a, b), max(a, b)) for i, a in enumerate(ring) for b in ring[i + 1:] if ring_dist(a, b) >= 3)
    chords = sorted(
        (min(a, b), max(a, b)) for a in ring for b in t.neighbors[a] if b in on_ring and ring_dist(a, b) >= 2
    )
    isolated = sorted(c for c in ring if t.degrees[c] == 3)

    if not isolated:
        hit = first_valid("0", (via_inner(a, b) for a, b in pairs))
        if hit is None:
            hit = first_valid("0", ((u, a, b) for a, b in chords))
        return hit

    for i0 in isolated:
        k = pos[i0]
        for i1, i2, d in ((ring[k - 1], ring[(k + 1) % m], ring[(k + 2) % m]),
                          (ring[(k + 1) % m], ring[k - 1], ring[(k - 2) % m])):
            z = t.apex(i1, i2) if t.apex(i1, i2) != i0 else t.apex(i2, i1)
            if z in on_ring:
                if z == d:
                    hit = first_valid("1a", [(u, i1, z)])
                elif m >= 7:
                    hit = first_valid("1b", [(u, i1, z), (u, i2, z)])
                else:
                    hit = _explicit(t, u, "1c", "(3,0,3,1)")
                    if hit is None:
                        hit = first_valid("1b", [(u, i1, z), (u, i2, z)])
                if hit is not None:
                    return hit
                continue
            i3 = z
            walk = _arc(list(t.rotation[i2]), i3, d, {i1, u})
            if walk is None:
                continue
            hits = [x for x in walk[1:-1] if x in on_ring]
            if not hits:
                hit = first_valid("2a", [(u, i1, *walk)])
                if hit is not None:
                    return hit
            if m >= 7:
                if hits:
                    f = hits[0]
                    prefix = walk[: walk.index(f) + 1]
                    hit = first_valid("2b", [(u, i1, *prefix)])
                    if hit is None:
                        hit = first_valid("2c", [(u, i2, f), _path_from(t, inner, u, i1, i3, f)])
                    if hit is not None:
                        return hit
                continue
            # |C| = 6
            hit = first_valid("3a", (_path_from(t, inner, u, a, i3, b) for a in (i1, i2) for b in ring if b not in (i0, i1, i2)))
            if hit is not None:
                return hit
            if len(inner) > 1:
                hit = first_valid("3b", ((u, a, b) for a, b in chords))
                if hit is None:
                    hit = first_valid("3c", (c for c in cycles_by_length(t, 8)))
                if hit is not None:
                    return hit
            else:
                hit = _explicit(t, u, "3d", "(4,0,0,4)")
                if hit is not None:
                    return hit
    # isolated-vertex branches exhausted: fall back on the generic ring search
    return first_valid("0", [via_inner(a, b) for a, b in pairs] + [(u, a, b) for a, b in chords])


def _path_from(t, inner, u, a, i3, b):
    if b in t.neighbors[i3]:
        rest = []
    else:
        rest = _interior_path(t, inner - {i3}, i3, b)
        if rest is None:
            return None
    return (u, a, i3, *rest, b)


def _explicit(t, u, label, name):
    """Hard-coded splitting of a configuration that is a known base case."""
    hit = catalog.match(t)
    if hit is None or hit[0].name != name:
        return None
    return CutResult(catalog.recipe_for(t), label, u, base_case=True)
