"""Closed, oriented, genus-0 triangulations and the operations on them.

Triangles are stored as index triples oriented counterclockwise when seen
from outside the sphere.  Everything here is purely combinatorial.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

Triangle = tuple[int, int, int]


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True)
class SphereTriangulation:
    n: int
    triangles: tuple[Triangle, ...]
    check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "triangles", tuple(tuple(int(i) for i in t) for t in self.triangles))
        if self.check:
            problems = self.problems()
            if problems:
                raise TriangulationError("; ".join(problems))

    # -- derived connectivity -------------------------------------------------

    @cached_property
    def _next(self) -> dict[tuple[int, int], int]:
        # (w, x) -> neighbour following x counterclockwise around w
        nxt: dict[tuple[int, int], int] = {}
        for a, b, c in self.triangles:
            for w, x, y in ((a, b, c), (b, c, a), (c, a, b)):
                nxt[(w, x)] = y
        return nxt

    @cached_property
    def rotation(self) -> tuple[tuple[int, ...], ...]:
        """Counterclockwise neighbour ring of every vertex, starting at its smallest neighbour."""
        nxt = self._next
        starts: dict[int, int] = {}
        for (w, x) in nxt:
            if w not in starts or x < starts[w]:
                starts[w] = x
        rings = []
        for w in range(self.n):
            if w not in starts:
                rings.append(())
                continue
            ring = [starts[w]]
            while True:
                y = nxt.get((w, ring[-1]))
                if y is None or y == ring[0] or len(ring) > self.n:
                    break
                ring.append(y)
            rings.append(tuple(ring))
        return tuple(rings)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        deg = [0] * self.n
        for tri in self.triangles:
            for v in tri:
                deg[v] += 1
        return tuple(deg)

    @cached_property
    def edges(self) -> tuple[tuple[int, int], ...]:
        es = set()
        for a, b, c in self.triangles:
            for x, y in ((a, b), (b, c), (c, a)):
                es.add((min(x, y), max(x, y)))
        return tuple(sorted(es))

    @cached_property
    def neighbors(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(r) for r in self.rotation)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self.neighbors[a]

    def apex(self, a: int, b: int) -> int:
        """Third vertex of the triangle containing the directed edge a -> b."""
        return self._next[(a, b)]

    def problems(self) -> list[str]:
        out = []
        if self.n < 4:
            out.append(f"need at least 4 vertices, got {self.n}")
        darts = Counter()
        for tri in self.triangles:
            if len(tri) != 3 or len(set(tri)) != 3:
                out.append(f"degenerate triangle {tri}")
                continue
            if any(v < 0 or v >= self.n for v in tri):
                out.append(f"triangle {tri} out of range")
                continue
            a, b, c = tri
            for d in ((a, b), (b, c), (c, a)):
                darts[d] += 1
        if out:
            return out
        for d, k in darts.items():
            if k > 1:
                out.append(f"directed edge {d} used {k} times")
            if darts.get((d[1], d[0]), 0) != 1:
                out.append(f"edge {d} lacks an oppositely oriented partner")
        if out:
            return out
        for w, ring in enumerate(self.rotation):
            if not ring:
                out.append(f"vertex {w} unused")
            elif len(ring) != self.degrees[w]:
                out.append(f"vertex {w} has a pinched neighbourhood")
            elif len(ring) < 3:
                out.append(f"vertex {w} has degree {len(ring)}")
        if out:
            return out
        tri_keys = Counter(frozenset(t) for t in self.triangles)
        if any(k > 1 for k in tri_keys.values()):
            out.append("repeated triangle")
        if self.n - len(self.edges) + len(self.triangles) != 2:
            out.append("Euler characteristic is not 2")
        if _components(self) != 1:
            out.append("not connected")
        return out

    def singular_count(self) -> int:
        """Number of vertices whose degree differs from 4."""
        return sum(1 for d in self.degrees if d != 4)

    def is_terminal(self) -> bool:
        return self.singular_count() <= 2

    def relabeled(self, perm: Sequence[int]) -> "SphereTriangulation":
        """Rename vertex ``v`` to ``perm[v]``."""
        return SphereTriangulation(self.n, tuple(tuple(perm[v] for v in t) for t in self.triangles))

    def mirrored(self) -> "SphereTriangulation":
        return SphereTriangulation(self.n, tuple((a, c, b) for a, b, c in self.triangles))


def _components(t: SphereTriangulation) -> int:
    seen = set()
    count = 0
    for s in range(t.n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            w = stack.pop()
            for x in t.rotation[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
    return count


def signature(t: SphereTriangulation) -> tuple[int, ...]:
    """Histogram of vertex degrees from degree 3 upward, at least three entries."""
    hist = Counter(t.degrees)
    top = max(5, max(hist))
    return tuple(hist.get(k, 0) for k in range(3, top + 1))


def format_signature(sig: Sequence[int]) -> str:
    return "(" + ",".join(str(k) for k in sig) + ")"


def parse_signature(text: str) -> tuple[int, ...]:
    body = text.strip().strip("()")
    sig = tuple(int(x) for x in body.replace(" ", "").split(",") if x)
    if len(sig) < 3 or any(k < 0 for k in sig):
        raise ValueError(f"bad signature {text!r}")
    return sig


# -- canonical codes and isomorphism ---------------------------------------


def _code_from(t: SphereTriangulation, u: int, v: int, direction: int, bound=None):
    rot = t.rotation
    num = {u: 0}
    order = [u]
    first = {u: v}
    code = []
    i = 0
    while i < len(order):
        w = order[i]
        ring = rot[w]
        d = len(ring)
        p = ring.index(first[w])
        for k in range(d):
            x = ring[(p + direction * k) % d]
            if x not in num:
                num[x] = len(order)
                order.append(x)
                first[x] = w
            code.append(num[x])
        code.append(-1)
        if bound is not None:
            head = tuple(code)
            ref = bound[: len(head)]
            if head > ref:
                return None, None
        i += 1
    return tuple(code), order


def canonical_form(t: SphereTriangulation, want_all: bool = False):
    """Minimal traversal code over all darts and both orientations.

    Returns ``(code, orders)`` where each entry of ``orders`` is a tuple
    ``(vertex_order, direction)`` attaining the minimum; ``vertex_order[k]``
    is the vertex numbered ``k``.
    """
    best = None
    orders = []
    max_deg = max(t.degrees)
    # only darts leaving a max-degree vertex can start a minimal code
    starts = [w for w in range(t.n) if t.degrees[w] == max_deg]
    for direction in (1, -1):
        for u in starts:
            for v in t.rotation[u]:
                code, order = _code_from(t, u, v, direction, best)
                if code is None:
                    continue
                if best is None or code < best:
                    best = code
                    orders = [(order, direction)]
                elif code == best and want_all:
                    orders.append((order, direction))
    return (max_deg,) + best, orders


def canonical_code(t: SphereTriangulation) -> tuple:
    return canonical_form(t)[0]


def isomorphism(a: SphereTriangulation, b: SphereTriangulation):
    """Vertex map ``a -> b`` (as a list) if the triangulations are isomorphic, else ``None``."""
    if a.n != b.n or sorted(a.degrees) != sorted(b.degrees):
        return None
    ca, oa = canonical_form(a)
    cb, ob = canonical_form(b)
    if ca != cb:
        return None
    order_a, order_b = oa[0][0], ob[0][0]
    mapping = [0] * a.n
    for k, x in enumerate(order_a):
        mapping[x] = order_b[k]
    return mapping


def is_isomorphic(a: SphereTriangulation, b: SphereTriangulation) -> bool:
    return isomorphism(a, b) is not None


def automorphisms(t: SphereTriangulation) -> list[list[int]]:
    """All combinatorial automorphisms, orientation-reversing ones included."""
    _, orders = canonical_form(t, want_all=True)
    ref = orders[0][0]
    out = []
    for order, _ in orders:
        m = [0] * t.n
        for k, x in enumerate(ref):
            m[x] = order[k]
        out.append(m)
    return out


# -- cycles -----------------------------------------------------------------


def check_cycle(t: SphereTriangulation, cycle: Sequence[int]) -> None:
    if len(cycle) < 3:
        raise TriangulationError(f"cycle {tuple(cycle)} shorter than 3")
    if len(set(cycle)) != len(cycle):
        raise TriangulationError(f"cycle {tuple(cycle)} is not simple")
    for i, a in enumerate(cycle):
        if not 0 <= a < t.n:
            raise TriangulationError(f"cycle vertex {a} out of range")
        b = cycle[(i + 1) % len(cycle)]
        if not t.has_edge(a, b):
            raise TriangulationError(f"cycle edge ({a},{b}) absent")


def cycle_sides(t: SphereTriangulation, cycle: Sequence[int]) -> tuple[list[int], list[int]]:
    """Triangle indices left and right of an oriented simple cycle."""
    check_cycle(t, cycle)
    L = len(cycle)
    cut = set()
    for i in range(L):
        a, b = cycle[i], cycle[(i + 1) % L]
        cut.add((a, b))
        cut.add((b, a))
    tri_of = {}
    for k, (a, b, c) in enumerate(t.triangles):
        for d in ((a, b), (b, c), (c, a)):
            tri_of[d] = k
    left_seed = tri_of[(cycle[0], cycle[1])]
    side = {left_seed}
    stack = [left_seed]
    while stack:
        k = stack.pop()
        a, b, c = t.triangles[k]
        for x, y in ((a, b), (b, c), (c, a)):
            if (x, y) in cut:
                continue
            j = tri_of[(y, x)]
            if j not in side:
                side.add(j)
                stack.append(j)
    right = [k for k in range(len(t.triangles)) if k not in side]
    if tri_of[(cycle[1], cycle[0])] in side:
        raise TriangulationError("cycle does not separate the sphere")
    return sorted(side), right


def interior_counts(t: SphereTriangulation, cycle: Sequence[int]) -> tuple[int, int]:
    """Number of vertices strictly inside the left and right disks of ``cycle``."""
    left, right = cycle_sides(t, cycle)
    on = set(cycle)
    lv = {v for k in left for v in t.triangles[k]} - on
    rv = {v for k in right for v in t.triangles[k]} - on
    return len(lv), len(rv)


@dataclass(frozen=True)
class SplitResult:
    halves: tuple[SphereTriangulation, SphereTriangulation]
    # per half: original vertex -> new vertex index (cycle vertices appear in both)
    maps: tuple[dict[int, int], dict[int, int]]
    apexes: tuple[int, int]
    cycle: tuple[int, ...]


def split_detailed(t: SphereTriangulation, cycle: Sequence[int]) -> SplitResult:
    cycle = tuple(int(v) for v in cycle)
    left, right = cycle_sides(t, cycle)
    L = len(cycle)
    halves = []
    maps = []
    apexes = []
    for side, flip in ((left, False), (right, True)):
        verts = sorted({v for k in side for v in t.triangles[k]})
        m = {v: i for i, v in enumerate(verts)}
        apex = len(verts)
        tris = [tuple(m[v] for v in t.triangles[k]) for k in side]
        for i in range(L):
            a, b = m[cycle[i]], m[cycle[(i + 1) % L]]
            # left disk holds a->b, so its cap runs b->a; mirrored on the right
            tris.append((a, b, apex) if flip else (b, a, apex))
        halves.append(SphereTriangulation(apex + 1, tuple(tris)))
        maps.append(m)
        apexes.append(apex)
    return SplitResult(tuple(halves), tuple(maps), tuple(apexes), cycle)


def split(t: SphereTriangulation, cycle: Sequence[int]) -> tuple[SphereTriangulation, SphereTriangulation]:
    return split_detailed(t, cycle).halves


def join(t1: SphereTriangulation, w1: int, t2: SphereTriangulation, w2: int, offset: int) -> SphereTriangulation:
    """Glue ``t1`` and ``t2`` after deleting apexes ``w1`` and ``w2``.

    With ``ring1 = t1.rotation[w1]`` and ``ring2 = t2.rotation[w2]`` the
    gluing identifies ``ring1[i]`` with ``ring2[(offset - i) % L]``, which
    reverses orientation along the seam as required.
    """
    ring1, ring2 = t1.rotation[w1], t2.rotation[w2]
    L = len(ring1)
    if len(ring2) != L:
        raise TriangulationError(f"apex degrees differ: {L} vs {len(ring2)}")
    m1 = {}
    for v in range(t1.n):
        if v != w1:
            m1[v] = len(m1)
    m2 = {ring2[(offset - i) % L]: m1[ring1[i]] for i in range(L)}
    nxt = len(m1)
    for v in range(t2.n):
        if v != w2 and v not in m2:
            m2[v] = nxt
            nxt += 1
    tris = [tuple(m1[v] for v in tri) for tri in t1.triangles if w1 not in tri]
    tris += [tuple(m2[v] for v in tri) for tri in t2.triangles if w2 not in tri]
    out = SphereTriangulation(nxt, tuple(tris), check=False)
    problems = out.problems()
    if problems:
        raise TriangulationError("invalid alignment: " + "; ".join(problems))
    return SphereTriangulation(nxt, tuple(tris))


def join_alignment(split_result: SplitResult) -> int:
    """Offset that makes ``join`` invert the split described by ``split_result``."""
    (h1, h2), (m1, m2) = split_result.halves, split_result.maps
    w1, w2 = split_result.apexes
    ring1, ring2 = h1.rotation[w1], h2.rotation[w2]
    inv1 = {v: k for k, v in m1.items()}
    # ring vertex in half 2 that corresponds to ring1[0]
    target = m2[inv1[ring1[0]]]
    return ring2.index(target) % len(ring1)


def simple_cycles(t: SphereTriangulation, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every simple cycle once, starting at its minimal vertex, second vertex < last."""
    limit = t.n if max_len is None else max_len
    nbrs = [sorted(r) for r in t.rotation]
    for s in range(t.n):
        path = [s]
        on_path = {s}
        stack = [iter([x for x in nbrs[s] if x > s])]
        while stack:
            x = next(stack[-1], None)
            if x is None:
                stack.pop()
                on_path.discard(path.pop())
                continue
            if x in on_path:
                continue
            if len(path) >= 2 and s in t.neighbors[x] and path[1] < x:
                yield tuple(path) + (x,)
            if len(path) < limit - 1:
                path.append(x)
                on_path.add(x)
                stack.append(iter([y for y in nbrs[x] if y > s and y not in on_path]))
        # path back to [s]; nothing else to reset


def cycles_by_length(t: SphereTriangulation, max_len: int | None = None) -> Iterator[tuple[int, ...]]:
    limit = t.n if max_len is None else max_len
    for L in range(3, limit + 1):
        for c in simple_cycles(t, L):
            if len(c) == L:
                yield c


# -- named shapes and random generation ---------------------------------------


def tetrahedron() -> SphereTriangulation:
    return SphereTriangulation(4, ((0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)))


def bipyramid(k: int) -> SphereTriangulation:
    """Equator 0..k-1, north pole k, south pole k+1."""
    tris = []
    for i in range(k):
        j = (i + 1) % k
        tris.append((i, j, k))
        tris.append((j, i, k + 1))
    return SphereTriangulation(k + 2, tuple(tris))


def octahedron() -> SphereTriangulation:
    return bipyramid(4)


def icosahedron() -> SphereTriangulation:
    # top 0, upper ring 1..5, lower ring 6..10, bottom 11
    tris = []
    for i in range(5):
        a, b = 1 + i, 1 + (i + 1) % 5
        c, d = 6 + i, 6 + (i + 1) % 5
        tris.append((0, a, b))
        tris.append((a, c, b))
        tris.append((b, c, d))
        tris.append((11, d, c))
    return SphereTriangulation(12, tuple(tris))


def random_triangulation(seed, n: int, flips_per_vertex: int = 2) -> SphereTriangulation:
    """Grow a tetrahedron by random face insertions interleaved with random edge flips."""
    if n < 4:
        raise ValueError("need n >= 4")
    rng = random.Random(seed)
    tris = [list(t) for t in tetrahedron().triangles]
    deg = [3, 3, 3, 3]
    nv = 4
    while nv < n:
        k = rng.randrange(len(tris))
        a, b, c = tris[k]
        w = nv
        nv += 1
        deg.append(3)
        for x in (a, b, c):
            deg[x] += 1
        tris[k] = [a, b, w]
        tris.append([b, c, w])
        tris.append([c, a, w])
        for _ in range(flips_per_vertex):
            _random_flip(tris, deg, rng)
    return SphereTriangulation(nv, tuple(tuple(t) for t in tris))


def _random_flip(tris: list[list[int]], deg: list[int], rng: random.Random) -> bool:
    k = rng.randrange(len(tris))
    e = rng.randrange(3)
    tri = tris[k]
    a, b = tri[e], tri[(e + 1) % 3]
    c = tri[(e + 2) % 3]
    # find the triangle holding b -> a
    for j, other in enumerate(tris):
        if j == k:
            continue
        for f in range(3):
            if other[f] == b and other[(f + 1) % 3] == a:
                d = other[(f + 2) % 3]
                break
        else:
            continue
        break
    else:
        return False
    if deg[a] <= 3 or deg[b] <= 3 or c == d:
        return False
    for t in tris:
        if c in t and d in t:
            return False
    tris[k] = [c, a, d]
    tris[j] = [d, b, c]
    deg[a] -= 1
    deg[b] -= 1
    deg[c] += 1
    deg[d] += 1
    return True


def vertex_splits(t: SphereTriangulation) -> Iterator[SphereTriangulation]:
    """All triangulations with one more vertex obtained by splitting a vertex."""
    z = t.n
    for w in range(t.n):
        ring = t.rotation[w]
        d = len(ring)
        for i in range(d):
            for step in range(1, d):
                arc = [ring[(i + k) % d] for k in range(step + 1)]
                moved = {(arc[k], arc[k + 1]) for k in range(step)}
                tris = []
                for tri in t.triangles:
                    if w in tri:
                        p = tri.index(w)
                        x, y = tri[(p + 1) % 3], tri[(p + 2) % 3]
                        if (x, y) in moved:
                            tris.append((z, x, y))
                            continue
                    tris.append(tri)
                tris.append((w, arc[0], z))
                tris.append((w, z, arc[-1]))
                yield SphereTriangulation(t.n + 1, tuple(tris), check=False)


def enumerate_triangulations(n_max: int, keep=None) -> dict[int, list[SphereTriangulation]]:
    """Every triangulation with 4..n_max vertices up to isomorphism.

    ``keep`` filters what is reported for the last level only, which skips
    canonicalising children that cannot matter.
    """
    levels = {4: [tetrahedron()]}
    for n in range(5, n_max + 1):
        seen = {}
        last = n == n_max
        for parent in levels[n - 1]:
            for child in vertex_splits(parent):
                if last and keep is not None and not keep(child):
                    continue
                child = SphereTriangulation(child.n, child.triangles)
                code = canonical_code(child)
                if code not in seen:
                    seen[code] = child
        levels[n] = [seen[c] for c in sorted(seen)]
    if keep is not None:
        for n in levels:
            levels[n] = [t for t in levels[n] if keep(t)]
    return levels
