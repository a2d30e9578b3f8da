"""Hexahedral meshes: derived connectivity, validation and boundary padding.

Corner convention (same as the VTK hexahedron): corners 0-3 form the bottom
quad, 4-7 the top quad with corner ``i + 4`` above corner ``i``.  For a unit
cube ``0=(0,0,0) 1=(1,0,0) 2=(1,1,0) 3=(0,1,0)``, so the frame
``(p1 - p0, p3 - p0, p4 - p0)`` is right-handed.

All topological predicates are combinatorial; positions are carried along
but never consulted for connectivity.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .spheretri.triangulation import SphereTriangulation

# outward-oriented faces (right-hand normal points out of the hex)
HEX_FACES = ((0, 3, 2, 1), (4, 5, 6, 7), (0, 1, 5, 4), (1, 2, 6, 5), (2, 3, 7, 6), (3, 0, 4, 7))
HEX_EDGES = ((0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7))
# the three neighbours of every corner, ordered so that their edge vectors form a right-handed frame
CORNER_NEIGHBORS = ((1, 3, 4), (2, 0, 5), (3, 1, 6), (0, 2, 7), (7, 5, 0), (4, 6, 1), (5, 7, 2), (6, 4, 3))


class MeshError(ValueError):
    pass


def _key(vs) -> tuple[int, ...]:
    return tuple(sorted(vs))


@dataclass(frozen=True)
class EdgeRecord:
    endpoints: tuple[int, int]
    degree: int
    interior: bool


class HexMesh:
    """Immutable hex mesh; connectivity is derived lazily and cached."""

    def __init__(self, vertices, hexes):
        self.vertices = np.array(vertices, dtype=float).reshape(-1, 3)
        self.vertices.setflags(write=False)
        self.hexes = tuple(tuple(int(i) for i in h) for h in hexes)
        n = len(self.vertices)
        for k, h in enumerate(self.hexes):
            if len(h) != 8:
                raise MeshError(f"hex {k} has {len(h)} corners")
            if any(i < 0 or i >= n for i in h):
                raise MeshError(f"hex {k} references a vertex outside 0..{n - 1}")
            if len(set(h)) != 8:
                raise MeshError(f"hex {k} repeats a corner")

    def __repr__(self):
        return f"HexMesh({self.n_vertices} vertices, {self.n_hexes} hexes)"

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_hexes(self) -> int:
        return len(self.hexes)

    def with_vertices(self, vertices) -> "HexMesh":
        return HexMesh(vertices, self.hexes)

    # -- faces ------------------------------------------------------------------

    @cached_property
    def _face_data(self):
        by_key = defaultdict(list)  # key -> [(hex, local face)]
        for h, corners in enumerate(self.hexes):
            for lf, f in enumerate(HEX_FACES):
                by_key[_key(corners[i] for i in f)].append((h, lf))
        keys = sorted(by_key)
        index = {k: i for i, k in enumerate(keys)}
        face_hexes = []
        face_verts = []
        hex_faces = [[0] * 6 for _ in self.hexes]
        for i, k in enumerate(keys):
            owners = by_key[k]
            face_hexes.append(tuple(h for h, _ in owners))
            h0, lf0 = owners[0]
            face_verts.append(tuple(self.hexes[h0][c] for c in HEX_FACES[lf0]))
            for h, lf in owners:
                hex_faces[h][lf] = i
        return keys, index, tuple(face_hexes), tuple(face_verts), tuple(tuple(r) for r in hex_faces)

    @property
    def faces(self) -> tuple[tuple[int, ...], ...]:
        """Faces as sorted vertex keys, in sorted order."""
        return tuple(self._face_data[0])

    @property
    def face_index(self) -> dict[tuple[int, ...], int]:
        return self._face_data[1]

    @property
    def face_hexes(self) -> tuple[tuple[int, ...], ...]:
        return self._face_data[2]

    @property
    def face_vertices(self) -> tuple[tuple[int, ...], ...]:
        """Cyclic vertex order of each face, outward for its first hex."""
        return self._face_data[3]

    @property
    def hex_faces(self) -> tuple[tuple[int, ...], ...]:
        return self._face_data[4]

    def oriented_face(self, f: int, h: int) -> tuple[int, ...]:
        """Vertices of face ``f`` ordered outward from hex ``h``."""
        lf = self.hex_faces[h].index(f)
        return tuple(self.hexes[h][c] for c in HEX_FACES[lf])

    @cached_property
    def boundary_faces(self) -> tuple[int, ...]:
        return tuple(i for i, hs in enumerate(self.face_hexes) if len(hs) == 1)

    # -- edges ------------------------------------------------------------------

    @cached_property
    def _edge_data(self):
        hexes_of = defaultdict(set)
        for h, corners in enumerate(self.hexes):
            for a, b in HEX_EDGES:
                hexes_of[_key((corners[a], corners[b]))].add(h)
        faces_of = defaultdict(list)
        for f, verts in enumerate(self.face_vertices):
            for i in range(4):
                faces_of[_key((verts[i], verts[(i + 1) % 4]))].append(f)
        keys = sorted(hexes_of)
        index = {k: i for i, k in enumerate(keys)}
        return (
            keys,
            index,
            tuple(tuple(sorted(hexes_of[k])) for k in keys),
            tuple(tuple(faces_of[k]) for k in keys),
        )

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(self._edge_data[0])

    @property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return self._edge_data[1]

    @property
    def edge_hexes(self) -> tuple[tuple[int, ...], ...]:
        return self._edge_data[2]

    @property
    def edge_faces(self) -> tuple[tuple[int, ...], ...]:
        return self._edge_data[3]

    def edge_id(self, a: int, b: int) -> int:
        return self.edge_index[_key((a, b))]

    @cached_property
    def edge_degree(self) -> tuple[int, ...]:
        return tuple(len(hs) for hs in self.edge_hexes)

    @cached_property
    def boundary_edge_mask(self) -> tuple[bool, ...]:
        bf = set(self.boundary_faces)
        return tuple(any(f in bf for f in fs) for fs in self.edge_faces)

    def edge_record(self, e: int) -> EdgeRecord:
        return EdgeRecord(self.edges[e], self.edge_degree[e], not self.boundary_edge_mask[e])

    def edge_records(self) -> list[EdgeRecord]:
        return [self.edge_record(e) for e in range(len(self.edges))]

    # -- vertices ---------------------------------------------------------------

    @cached_property
    def vertex_hexes(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n_vertices)]
        for h, corners in enumerate(self.hexes):
            for v in corners:
                out[v].append(h)
        return tuple(tuple(x) for x in out)

    @cached_property
    def vertex_edges(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(self.edges):
            out[a].append(e)
            out[b].append(e)
        return tuple(tuple(x) for x in out)

    @cached_property
    def vertex_faces(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n_vertices)]
        for f, key in enumerate(self.faces):
            for v in key:
                out[v].append(f)
        return tuple(tuple(x) for x in out)

    @cached_property
    def boundary_vertex_mask(self) -> tuple[bool, ...]:
        mask = [False] * self.n_vertices
        for f in self.boundary_faces:
            for v in self.faces[f]:
                mask[v] = True
        return tuple(mask)

    def is_boundary_vertex(self, v: int) -> bool:
        return self.boundary_vertex_mask[v]

    def mean_edge_length(self, edges: Sequence[int] | None = None) -> float:
        es = self.edges if edges is None else [self.edges[e] for e in edges]
        if not es:
            return 0.0
        a = np.array(es)
        return float(np.linalg.norm(self.vertices[a[:, 0]] - self.vertices[a[:, 1]], axis=1).mean())

    # -- vertex links -------------------------------------------------------------

    def vertex_link(self, v: int) -> "VertexLink":
        edges = sorted(self.vertex_edges[v])
        local = {e: i for i, e in enumerate(edges)}
        tris = []
        hexes = []
        for h in self.vertex_hexes[v]:
            corners = self.hexes[h]
            i = corners.index(v)
            tris.append(tuple(local[self.edge_id(v, corners[j])] for j in CORNER_NEIGHBORS[i]))
            hexes.append(h)
        faces = {}
        for f in self.vertex_faces[v]:
            verts = self.face_vertices[f]
            k = verts.index(v)
            a, b = verts[k - 1], verts[(k + 1) % 4]
            faces[frozenset((local[self.edge_id(v, a)], local[self.edge_id(v, b)]))] = f
        return VertexLink(v, tuple(edges), tuple(tris), tuple(hexes), faces)


@dataclass(frozen=True)
class VertexLink:
    """Triangles around a vertex: link vertex ``i`` is mesh edge ``edges[i]``, triangle ``k`` is hex ``hexes[k]``."""

    vertex: int
    edges: tuple[int, ...]
    triangles: tuple[tuple[int, int, int], ...]
    hexes: tuple[int, ...]
    faces: dict = field(repr=False)  # frozenset of two link vertices -> mesh face

    def triangulation(self, check: bool = True) -> SphereTriangulation:
        return SphereTriangulation(len(self.edges), self.triangles, check=check)

    def disk_problems(self) -> list[str]:
        """Problems preventing the link from being a triangulated disk."""
        darts = defaultdict(int)
        for a, b, c in self.triangles:
            for d in ((a, b), (b, c), (c, a)):
                darts[d] += 1
        out = []
        if any(k > 1 for k in darts.values()):
            return ["inconsistent orientation"]
        border = {d for d in darts if (d[1], d[0]) not in darts}
        nxt = {}
        for a, b in border:
            if a in nxt:
                return ["boundary pinched at a vertex"]
            nxt[a] = b
        if not border:
            return ["closed link at a boundary vertex"]
        start = next(iter(nxt))
        seen = {start}
        x = nxt[start]
        while x != start:
            if x in seen or x not in nxt:
                return ["boundary is not a single cycle"]
            seen.add(x)
            x = nxt[x]
        if len(seen) != len(border):
            out.append("boundary has several cycles")
        n_edges = len({frozenset(d) for d in darts})
        if len(self.edges) - n_edges + len(self.triangles) != 1:
            out.append("link is not a disk")
        return out


def build_adjacency(vertices, hexes) -> HexMesh:
    """Construct a mesh and compute all derived connectivity eagerly."""
    mesh = HexMesh(vertices, hexes)
    mesh.faces, mesh.edges, mesh.vertex_hexes, mesh.vertex_edges, mesh.boundary_edge_mask
    return mesh


# -- validation -----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    elements: tuple[int, ...]
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind, elements, message):
        self.violations.append(Violation(kind, tuple(int(e) for e in elements), message))

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.__dict__ for v in self.violations]}


def validate(mesh: HexMesh) -> ValidationReport:
    report = ValidationReport()
    bad_faces = set()
    for f, hs in enumerate(mesh.face_hexes):
        if len(hs) > 2:
            report.add("face_sharing", (f,), f"face {mesh.faces[f]} shared by {len(hs)} hexes")
            bad_faces.add(f)
        elif len(hs) == 2:
            a = mesh.oriented_face(f, hs[0])
            b = mesh.oriented_face(f, hs[1])
            if not _reversed_cycles(a, b):
                report.add("orientation", (f,), f"hexes {hs} induce the same orientation on face {mesh.faces[f]}")
    bf = set(mesh.boundary_faces)
    for e, (a, b) in enumerate(mesh.edges):
        deg = mesh.edge_degree[e]
        if mesh.boundary_edge_mask[e]:
            nb = sum(1 for f in mesh.edge_faces[e] if f in bf)
            if nb != 2:
                report.add("edge_degree", (a, b),
                           f"boundary edge ({a},{b}) in {deg} hexes touches {nb} boundary faces")
        elif deg <= 2:
            report.add("edge_degree", (a, b), f"interior edge ({a},{b}) has degree {deg}")
    if bad_faces:
        return report
    for v in range(mesh.n_vertices):
        if not mesh.vertex_hexes[v]:
            continue
        link = mesh.vertex_link(v)
        if mesh.is_boundary_vertex(v):
            problems = link.disk_problems()
        else:
            problems = link.triangulation(check=False).problems()
        if problems:
            report.add("vertex_link", (v,), f"vertex {v}: " + "; ".join(problems))
    return report


def _reversed_cycles(a, b) -> bool:
    rb = tuple(reversed(b))
    k = rb.index(a[0])
    return tuple(rb[k:] + rb[:k]) == tuple(a)


# -- padding --------------------------------------------------------------------


def boundary_vertex_normals(mesh: HexMesh) -> dict[int, np.ndarray]:
    normals = defaultdict(lambda: np.zeros(3))
    X = mesh.vertices
    for f in mesh.boundary_faces:
        q = mesh.face_vertices[f]
        # area-weighted normal of a quad from its diagonals
        n = 0.5 * np.cross(X[q[2]] - X[q[0]], X[q[3]] - X[q[1]])
        for v in q:
            normals[v] = normals[v] + n
    out = {}
    for v, n in normals.items():
        norm = np.linalg.norm(n)
        out[v] = n / norm if norm > 0 else n
    return out


def pad_boundary(mesh: HexMesh, thickness: float = 0.3) -> HexMesh:
    """Add one hex on top of every boundary quad."""
    if not mesh.boundary_faces:
        return HexMesh(mesh.vertices, mesh.hexes)
    bverts = sorted({v for f in mesh.boundary_faces for v in mesh.faces[f]})
    normals = boundary_vertex_normals(mesh)
    bedges = [e for e, m in enumerate(mesh.boundary_edge_mask) if m]
    step = thickness * mesh.mean_edge_length(bedges)
    new_id = {v: mesh.n_vertices + i for i, v in enumerate(bverts)}
    new_pos = [mesh.vertices[v] + step * normals[v] for v in bverts]
    hexes = list(mesh.hexes)
    for f in mesh.boundary_faces:
        q = mesh.face_vertices[f]
        if len(mesh.face_hexes[f]) != 1:
            raise MeshError("boundary face owned by several hexes")
        hexes.append(tuple(q) + tuple(new_id[v] for v in q))
    vertices = np.vstack([mesh.vertices, np.array(new_pos).reshape(-1, 3)])
    return HexMesh(vertices, hexes)
