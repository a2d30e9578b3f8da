"""Sheets: seeding from a link cycle, propagation to the boundary, and inflation."""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field

import numpy as np

from .hexmesh import HexMesh, VertexLink
from .spheretri.plan import plan_size
from .spheretri.triangulation import canonical_code, check_cycle, cycle_sides, split


class SheetError(RuntimeError):
    pass


class NonManifoldSheet(SheetError):
    pass


class NoPathAtVertex(SheetError):
    pass


class NonOrientableSheet(SheetError):
    pass


class IncompleteSheet(SheetError):
    pass


@dataclass(frozen=True)
class PartialSheet:
    faces: frozenset[int]
    seed: tuple[int, int] | None = None  # (face, hex on the side that will be duplicated)

    def __len__(self):
        return len(self.faces)


@dataclass(frozen=True)
class Sheet:
    faces: tuple[int, ...]
    side: dict = field(repr=False)  # face -> hex on the duplicated side

    def __len__(self):
        return len(self.faces)

    def to_dict(self) -> dict:
        return {"faces": list(self.faces), "side": [self.side[f] for f in self.faces]}


def _link_face(link: VertexLink, a: int, b: int) -> int:
    return link.faces[frozenset((a, b))]


def cut_from_cycle(mesh: HexMesh, v: int, cycle) -> PartialSheet:
    """The quads around ``v`` named by the edges of a cycle in the link of ``v``.

    The seed side is the disk whose capped half has the smaller canonical code.
    """
    if mesh.is_boundary_vertex(v):
        raise SheetError(f"vertex {v} is on the boundary")
    link = mesh.vertex_link(v)
    t = link.triangulation()
    cycle = tuple(cycle)
    check_cycle(t, cycle)
    faces = frozenset(_link_face(link, cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
    left, right = cycle_sides(t, cycle)
    h1, h2 = split(t, cycle)
    disk = left if canonical_code(h1) <= canonical_code(h2) else right
    seed_face = _link_face(link, cycle[0], cycle[1])
    side = next(link.hexes[k] for k in disk if link.hexes[k] in mesh.face_hexes[seed_face])
    return PartialSheet(faces, (seed_face, side))


def opposite_face(mesh: HexMesh, e: int, f: int) -> int | None:
    """Face across a degree-4 interior edge ``e`` from ``f``, sharing no hex with it."""
    if mesh.edge_degree[e] != 4 or mesh.boundary_edge_mask[e]:
        return None
    own = set(mesh.face_hexes[f])
    for g in mesh.edge_faces[e]:
        if g != f and not own.intersection(mesh.face_hexes[g]):
            return g
    return None


def _face_edges(mesh: HexMesh, f: int) -> list[int]:
    q = mesh.face_vertices[f]
    return [mesh.edge_id(q[i], q[(i + 1) % 4]) for i in range(4)]


def is_parallel(mesh: HexMesh, s: PartialSheet, f: int) -> bool:
    """``f`` shares a regular interior edge with a sheet face but no hex with that face."""
    if f in s.faces:
        return False
    for e in _face_edges(mesh, f):
        for g in mesh.edge_faces[e]:
            if g in s.faces and opposite_face(mesh, e, g) == f:
                return True
    return False


class _Growth:
    def __init__(self, mesh: HexMesh, faces):
        self.mesh = mesh
        self.faces: set[int] = set()
        self.count = defaultdict(int)
        for f in sorted(faces):
            self.add(f)

    def add(self, f):
        if f in self.faces:
            return
        if len(self.mesh.face_hexes[f]) != 2:
            raise NonManifoldSheet(f"face {f} is on the boundary")
        for e in _face_edges(self.mesh, f):
            self.count[e] += 1
            if self.count[e] > 2:
                raise NonManifoldSheet(f"edge {self.mesh.edges[e]} would carry three sheet faces")
        self.faces.add(f)

    def open_edges(self):
        m = self.mesh
        return sorted(e for e, k in self.count.items() if k == 1 and not m.boundary_edge_mask[e])

    def face_at(self, e):
        return next(g for g in self.mesh.edge_faces[e] if g in self.faces)


def propagate(mesh: HexMesh, s: PartialSheet, max_faces: int | None = None) -> Sheet:
    """Grow ``s`` until its boundary lies on the mesh boundary."""
    grow = _Growth(mesh, s.faces)
    limit = max_faces if max_faces is not None else len(mesh.faces)
    while True:
        # parallel faces across open regular edges, smallest face index first
        while True:
            cands = set()
            for e in grow.open_edges():
                g = opposite_face(mesh, e, grow.face_at(e))
                if g is not None:
                    cands.add(g)
            if not cands:
                break
            for g in sorted(cands):
                grow.add(g)
            if len(grow.faces) > limit:
                raise NonManifoldSheet("sheet exceeds the face budget")
        open_edges = grow.open_edges()
        if not open_edges:
            break
        stuck = sorted({v for e in open_edges for v in mesh.edges[e] if not mesh.is_boundary_vertex(v)})
        if not stuck:
            raise NoPathAtVertex("open sheet edges with both ends on the boundary")
        for f in _close_at_vertex(mesh, grow, stuck[0]):
            grow.add(f)
    faces = tuple(sorted(grow.faces))
    _check_vertex_manifold(mesh, faces)
    seed = s.seed if s.seed is not None else (faces[0], mesh.face_hexes[faces[0]][0])
    return Sheet(faces, orient(mesh, faces, seed))


def _sheet_link_edges(mesh, link, faces):
    by_face = {f: k for k, f in link.faces.items()}
    return [tuple(sorted(by_face[f])) for f in mesh.vertex_faces[link.vertex] if f in faces]


def _close_at_vertex(mesh: HexMesh, grow: _Growth, v: int) -> list[int]:
    """Faces closing the sheet around ``v`` along a shortest link path, preferring regular edges."""
    link = mesh.vertex_link(v)
    t = link.triangulation()
    used = _sheet_link_edges(mesh, link, grow.faces)
    adj = defaultdict(list)
    for a, b in used:
        adj[a].append(b)
        adj[b].append(a)
    ends = sorted(x for x, ys in adj.items() if len(ys) == 1)
    if len(ends) != 2 or any(len(ys) > 2 for ys in adj.values()) or _components(adj) != 1:
        raise NonManifoldSheet(f"sheet meets vertex {v} in more than one strip")
    p, q = ends
    blocked = set(adj) - {p, q}
    path_so_far = _walk_path(adj, p)
    for regular_only in (True, False):
        paths = _shortest_paths(t, p, q, blocked, lambda x: not regular_only or t.degrees[x] == 4, set(used))
        if paths:
            best = min(paths, key=lambda path: (_leftover(t, path_so_far, path), sum(t.degrees[x] != 4 for x in path[1:-1]), path))
            return [_link_face(link, best[i], best[i + 1]) for i in range(len(best) - 1)]
    raise NoPathAtVertex(f"no link path closes the sheet at vertex {v}")


def _walk_path(adj, start):
    out = [start]
    prev = None
    while True:
        nxt = [y for y in adj[out[-1]] if y != prev]
        if not nxt:
            return out
        prev = out[-1]
        out.append(nxt[0])


def _leftover(t, sheet_path, closing):
    """Plan size left at the vertex after cutting along the closed cycle; ties broken toward simpler results."""
    if t.singular_count() <= 2:
        return 0
    cycle = tuple(sheet_path) + tuple(closing[-2:0:-1])
    halves = split(t, cycle)
    return sum(plan_size(h) for h in halves)


def _shortest_paths(t, p, q, blocked, allowed, used_edges, cap=256):
    """All shortest p-q paths through allowed, unblocked vertices avoiding ``used_edges``."""
    dist = {p: 0}
    preds = defaultdict(list)
    queue = deque([p])
    while queue:
        x = queue.popleft()
        if x == q:
            continue
        for y in sorted(t.neighbors[x]):
            if tuple(sorted((x, y))) in used_edges:
                continue
            if y != q and (y in blocked or not allowed(y)):
                continue
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
            if dist[y] == dist[x] + 1:
                preds[y].append(x)
    if q not in dist:
        return []
    out = []

    def back(x, tail):
        if len(out) >= cap:
            return
        if x == p:
            out.append([p] + tail)
            return
        for y in preds[x]:
            back(y, [x] + tail)

    back(q, [])
    return out


def _components(adj) -> int:
    seen = set()
    n = 0
    for s in adj:
        if s in seen:
            continue
        n += 1
        stack = [s]
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            stack.extend(adj[x])
    return n


def _hex_groups(mesh: HexMesh, v: int, faces) -> dict[int, int]:
    """Component label of each hex at ``v`` when hexes are joined across non-sheet faces."""
    label = {}
    hexes = mesh.vertex_hexes[v]
    comp = 0
    for h in hexes:
        if h in label:
            continue
        stack = [h]
        while stack:
            x = stack.pop()
            if x in label:
                continue
            label[x] = comp
            for f in mesh.hex_faces[x]:
                if f in faces or v not in mesh.faces[f]:
                    continue
                stack.extend(y for y in mesh.face_hexes[f] if y not in label)
        comp += 1
    return label


def _check_vertex_manifold(mesh: HexMesh, faces):
    fs = set(faces)
    for v in sorted({v for f in faces for v in mesh.faces[f]}):
        groups = _hex_groups(mesh, v, fs)
        if len(set(groups.values())) != 2:
            raise NonManifoldSheet(f"sheet splits the hexes around vertex {v} into {len(set(groups.values()))} parts")
    for e, (a, b) in enumerate(mesh.edges):
        if not mesh.boundary_edge_mask[e]:
            continue
        if sum(1 for f in mesh.edge_faces[e] if f in fs) > 1:
            raise NonManifoldSheet(f"sheet folds along boundary edge ({a},{b})")


def orient(mesh: HexMesh, faces, seed: tuple[int, int]) -> dict[int, int]:
    """Pick the duplicated side of every face, consistently with ``seed``."""
    fs = set(faces)
    side = {seed[0]: seed[1]}
    queue = deque([seed[0]])
    by_edge = defaultdict(list)
    for f in faces:
        for e in _face_edges(mesh, f):
            by_edge[e].append(f)
    while queue:
        f = queue.popleft()
        for e in _face_edges(mesh, f):
            for g in by_edge[e]:
                if g == f:
                    continue
                want = _same_side_hex(mesh, e, f, side[f], g, fs)
                if g in side:
                    if side[g] != want:
                        raise NonOrientableSheet(f"faces {f} and {g} disagree about the sheet side")
                else:
                    side[g] = want
                    queue.append(g)
    if len(side) != len(fs):
        # disconnected pieces are oriented independently from their smallest face
        rest = sorted(fs - set(side))
        side.update(orient(mesh, rest, (rest[0], mesh.face_hexes[rest[0]][0])))
    return side


def _same_side_hex(mesh, e, f, hf, g, fs):
    """Hex of ``g`` lying on the same side of the sheet as hex ``hf`` of ``f`` around edge ``e``."""
    hexes = set(mesh.edge_hexes[e])
    parent = {h: h for h in hexes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k in mesh.edge_faces[e]:
        if k in fs:
            continue
        hs = mesh.face_hexes[k]
        if len(hs) == 2:
            parent[find(hs[0])] = find(hs[1])
    cands = [h for h in mesh.face_hexes[g] if find(h) == find(hf)]
    if len(cands) != 1:
        raise NonOrientableSheet(f"cannot carry the side of face {f} to face {g}")
    return cands[0]


@dataclass(frozen=True)
class Inflation:
    mesh: HexMesh
    duplicates: dict  # original sheet vertex -> its copy on the chosen side
    new_hexes: tuple[int, ...]


def inflate_detailed(mesh: HexMesh, sheet: Sheet, thickness: float = 0.3) -> Inflation:
    fs = set(sheet.faces)
    if not fs:
        raise IncompleteSheet("empty sheet")
    for f in fs:
        for e in _face_edges(mesh, f):
            if mesh.boundary_edge_mask[e]:
                continue
            if sum(1 for g in mesh.edge_faces[e] if g in fs) != 2:
                raise IncompleteSheet(f"sheet boundary edge {mesh.edges[e]} is interior")
    verts = sorted({v for f in fs for v in mesh.faces[f]})
    dup = {v: mesh.n_vertices + i for i, v in enumerate(verts)}
    positive: dict[int, set[int]] = {}
    for v in verts:
        groups = _hex_groups(mesh, v, fs)
        if len(set(groups.values())) != 2:
            raise NonManifoldSheet(f"vertex {v} is not split into two sides")
        labels = {groups[sheet.side[f]] for f in mesh.vertex_faces[v] if f in fs}
        if len(labels) != 1:
            raise NonOrientableSheet(f"inconsistent sides at vertex {v}")
        lab = labels.pop()
        positive[v] = {h for h, g in groups.items() if g == lab}

    hexes = [list(h) for h in mesh.hexes]
    for v in verts:
        for h in positive[v]:
            k = hexes[h].index(v)
            hexes[h][k] = dup[v]
    new = []
    for f in sorted(fs):
        neg = next(h for h in mesh.face_hexes[f] if h != sheet.side[f])
        q = mesh.oriented_face(f, neg)  # normal points into the duplicated side
        new.append(tuple(q) + tuple(dup[v] for v in q))

    X = mesh.vertices
    normals = defaultdict(lambda: np.zeros(3))
    for f in fs:
        neg = next(h for h in mesh.face_hexes[f] if h != sheet.side[f])
        q = mesh.oriented_face(f, neg)
        n = 0.5 * np.cross(X[q[2]] - X[q[0]], X[q[3]] - X[q[1]])
        for v in q:
            normals[v] = normals[v] + n
    offsets = []
    for v in verts:
        n = normals[v]
        norm = np.linalg.norm(n)
        local = mesh.mean_edge_length(mesh.vertex_edges[v])
        if norm == 0:
            cen = np.mean([X[list(mesh.hexes[h])].mean(axis=0) for h in positive[v]], axis=0)
            n, norm = cen - X[v], np.linalg.norm(cen - X[v])
        offsets.append(X[v] + thickness * local * n / max(norm, 1e-300))
    vertices = np.vstack([X, np.array(offsets)])
    out = HexMesh(vertices, [tuple(h) for h in hexes] + new)
    return Inflation(out, dup, tuple(range(mesh.n_hexes, mesh.n_hexes + len(new))))


def inflate(mesh: HexMesh, sheet: Sheet, thickness: float = 0.3) -> HexMesh:
    return inflate_detailed(mesh, sheet, thickness).mesh
