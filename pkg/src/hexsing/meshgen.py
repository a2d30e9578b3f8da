"""Test-mesh generators: structured grids and cone meshes realizing a given vertex link."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hexmesh import HexMesh, pad_boundary
from .spheretri import catalog
from .spheretri.triangulation import SphereTriangulation, bipyramid, icosahedron, octahedron, tetrahedron


def grid(nx: int, ny: int, nz: int, spacing: float = 1.0) -> HexMesh:
    if min(nx, ny, nz) < 1:
        raise ValueError("grid dimensions must be >= 1")

    def vid(i, j, k):
        return i + (nx + 1) * (j + (ny + 1) * k)

    xs = np.arange(nx + 1) * spacing
    ys = np.arange(ny + 1) * spacing
    zs = np.arange(nz + 1) * spacing
    Z, Y, X = np.meshgrid(zs, ys, xs, indexing="ij")
    vertices = np.stack([X.ravel(), Y.ravel(), Z.ravel()], axis=1)
    hexes = []
    for k in range(nz):
        for j in range(ny):
            for i in range(nx):
                bottom = (vid(i, j, k), vid(i + 1, j, k), vid(i + 1, j + 1, k), vid(i, j + 1, k))
                hexes.append(bottom + tuple(v + (nx + 1) * (ny + 1) for v in bottom))
    return HexMesh(vertices, hexes)


@dataclass(frozen=True)
class ConeMeshMap:
    """Where each cone-mesh vertex comes from in the link triangulation."""

    center: int
    link_vertex: tuple[int, ...]  # link vertex i -> mesh vertex
    link_edge: dict  # (i, j) with i < j -> mesh vertex
    link_triangle: tuple[int, ...]  # triangle k -> mesh vertex

    def origin(self, v: int):
        if v == self.center:
            return ("center",)
        if v in self.link_vertex:
            return ("vertex", self.link_vertex.index(v))
        for e, w in self.link_edge.items():
            if w == v:
                return ("edge", e)
        return ("triangle", self.link_triangle.index(v))


def sphere_layout(t: SphereTriangulation, iterations: int = 200) -> np.ndarray:
    """Unit-sphere positions for the vertices of ``t``.

    Tutte embedding with the first triangle as outer face, lifted by inverse
    stereographic projection, then relaxed on the sphere so that neighbours
    spread out evenly.
    """
    n = t.n
    outer = t.triangles[0]
    pos = np.zeros((n, 2))
    for k, v in enumerate(outer):
        a = 2 * np.pi * k / 3
        pos[v] = (np.cos(a), np.sin(a))
    free = [v for v in range(n) if v not in outer]
    if free:
        idx = {v: i for i, v in enumerate(free)}
        A = np.zeros((len(free), len(free)))
        b = np.zeros((len(free), 2))
        for v in free:
            i = idx[v]
            for w in t.neighbors[v]:
                A[i, i] += 1
                if w in idx:
                    A[i, idx[w]] -= 1
                else:
                    b[i] += pos[w]
        pos[free] = np.linalg.solve(A, b)
    # outer face becomes a cap around the south pole; scale to centre the mass
    pos -= pos[free].mean(axis=0) if free else 0.0
    best = None
    for s in np.geomspace(0.05, 20, 60):
        P = _lift(pos * s)
        score = np.linalg.norm(P.mean(axis=0))
        if best is None or score < best[0]:
            best = (score, P)
    P = best[1]
    # spherical relaxation with mild repulsion; degree-3 vertices can fold over,
    # so keep the iterate whose worst triangle orientation is best
    edges = np.array(t.edges)
    tris = np.array(t.triangles)

    def worst(P):
        return np.linalg.det(P[tris]).min()

    keep = (worst(P), P)
    for _ in range(iterations):
        F = np.zeros_like(P)
        d = P[edges[:, 1]] - P[edges[:, 0]]
        np.add.at(F, edges[:, 0], d)
        np.add.at(F, edges[:, 1], -d)
        diff = P[:, None, :] - P[None, :, :]
        r2 = (diff ** 2).sum(-1) + np.eye(n)
        F += 0.2 * (diff / r2[..., None] ** 1.5).sum(axis=1) / max(n, 1) * 4
        P = P + 0.1 * F
        P -= P.mean(axis=0) * 0.5
        P /= np.linalg.norm(P, axis=1, keepdims=True)
        w = worst(P)
        if w > keep[0]:
            keep = (w, P)
    return keep[1]


def _lift(xy):
    r2 = (xy ** 2).sum(axis=1)
    return np.stack([2 * xy[:, 0], 2 * xy[:, 1], r2 - 1], axis=1) / (1 + r2)[:, None]


def cone_hexification(t: SphereTriangulation) -> tuple[HexMesh, ConeMeshMap]:
    """One hex per triangle of ``t`` around a central vertex whose link is ``t``.

    Triangle ``(A, B, C)`` becomes the hex ``(O, A, AB, B, C, CA, F, BC)``.
    """
    V = t.n
    edges = t.edges
    center = 0
    vmap = tuple(1 + i for i in range(V))
    emap = {e: 1 + V + k for k, e in enumerate(edges)}
    fmap = tuple(1 + V + len(edges) + k for k in range(len(t.triangles)))

    P = sphere_layout(t)
    X = np.zeros((1 + V + len(edges) + len(t.triangles), 3))
    X[list(vmap)] = P
    for (a, b), w in emap.items():
        m = P[a] + P[b]
        X[w] = m / np.linalg.norm(m)
    for k, tri in enumerate(t.triangles):
        m = P[list(tri)].sum(axis=0)
        X[fmap[k]] = m / np.linalg.norm(m)

    def ed(a, b):
        return emap[(a, b) if a < b else (b, a)]

    hexes = []
    for k, (a, b, c) in enumerate(t.triangles):
        hexes.append((center, vmap[a], ed(a, b), vmap[b], vmap[c], ed(c, a), fmap[k], ed(b, c)))
    return HexMesh(X, hexes), ConeMeshMap(center, vmap, emap, fmap)


_NAMED = {
    "tetrahedron": tetrahedron,
    "octahedron": octahedron,
    "icosahedron": icosahedron,
}


def link_for(name: str) -> SphereTriangulation:
    """Triangulation from a signature like ``"(4,0,0)"``, a solid name, or ``bipyramid:<k>``."""
    key = name.strip().replace(" ", "")
    if key in _NAMED:
        return _NAMED[key]()
    if key.startswith("bipyramid:"):
        return bipyramid(int(key.split(":", 1)[1]))
    return catalog.representative(key)


def cone_mesh(name: str, pad: bool = False, thickness: float = 0.3) -> HexMesh:
    mesh, _ = cone_hexification(link_for(name))
    return pad_boundary(mesh, thickness) if pad else mesh
