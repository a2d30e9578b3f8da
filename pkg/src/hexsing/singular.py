"""Singular edges, nodes and curves of a hex mesh."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum

from .hexmesh import HexMesh


class VertexClass(str, Enum):
    REGULAR = "regular"
    CURVE_INTERIOR = "curve-interior"
    NODE = "node"
    BOUNDARY_SINGULAR = "boundary-singular"
    ANOMALY = "anomaly"  # interior vertex with a single singular edge


def singular_edges(mesh: HexMesh) -> tuple[int, ...]:
    """Interior edges whose degree is not 4."""
    return tuple(
        e for e, d in enumerate(mesh.edge_degree) if d != 4 and not mesh.boundary_edge_mask[e]
    )


def singular_incidence(mesh: HexMesh) -> dict[int, list[int]]:
    inc = defaultdict(list)
    for e in singular_edges(mesh):
        a, b = mesh.edges[e]
        inc[a].append(e)
        inc[b].append(e)
    return inc


def classify_vertex(mesh: HexMesh, v: int) -> VertexClass:
    k = sum(1 for e in mesh.vertex_edges[v] if mesh.edge_degree[e] != 4 and not mesh.boundary_edge_mask[e])
    if mesh.is_boundary_vertex(v):
        return VertexClass.BOUNDARY_SINGULAR if k else VertexClass.REGULAR
    if k == 0:
        return VertexClass.REGULAR
    if k == 1:
        return VertexClass.ANOMALY
    if k == 2:
        return VertexClass.CURVE_INTERIOR
    return VertexClass.NODE


def singular_nodes(mesh: HexMesh) -> tuple[int, ...]:
    return tuple(
        v for v, es in sorted(singular_incidence(mesh).items())
        if len(es) > 2 and not mesh.is_boundary_vertex(v)
    )


@dataclass(frozen=True)
class SingularCurve:
    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    valences: tuple[int, ...]
    closed: bool
    ends: tuple[str, str]  # each "node" | "boundary" | "anomaly"; ("cycle", "cycle") when closed

    @property
    def valence(self) -> int | str:
        return self.valences[0] if len(set(self.valences)) == 1 else "mixed"

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": list(self.edges),
            "valence": self.valence,
            "closed": self.closed,
            "ends": list(self.ends),
        }


@dataclass(frozen=True)
class SingularGraph:
    edges: tuple[int, ...]
    nodes: tuple[int, ...]
    curves: tuple[SingularCurve, ...] = field(default_factory=tuple)

    def to_dict(self, mesh: HexMesh | None = None) -> dict:
        out = {
            "singular_edges": len(self.edges),
            "nodes": list(self.nodes),
            "curves": [c.to_dict() for c in self.curves],
        }
        if mesh is not None:
            out["edge_endpoints"] = [list(mesh.edges[e]) for e in self.edges]
        return out


def trace_curves(mesh: HexMesh) -> SingularGraph:
    edges = singular_edges(mesh)
    inc = singular_incidence(mesh)
    nodes = singular_nodes(mesh)

    def end_kind(v):
        if mesh.is_boundary_vertex(v):
            return "boundary"
        return "node" if len(inc[v]) > 2 else "anomaly"

    stops = {v for v, es in inc.items() if len(es) != 2 or mesh.is_boundary_vertex(v)}
    used: set[int] = set()
    curves = []

    def walk(v, e):
        vs, es = [v], []
        while True:
            used.add(e)
            es.append(e)
            a, b = mesh.edges[e]
            v = b if a == v else a
            vs.append(v)
            if v in stops:
                return vs, es
            nxt = [x for x in inc[v] if x not in used]
            if not nxt:  # closed back onto the start
                return vs, es
            e = nxt[0]

    for v in sorted(stops):
        for e in sorted(inc[v]):
            if e in used:
                continue
            vs, es = walk(v, e)
            if vs[-1] < vs[0] or (vs[-1] == vs[0] and len(es) > 1 and es[-1] < es[0]):
                vs, es = vs[::-1], es[::-1]
            curves.append(SingularCurve(
                tuple(vs), tuple(es), tuple(mesh.edge_degree[x] for x in es), False,
                (end_kind(vs[0]), end_kind(vs[-1])),
            ))
    # whatever remains lies on closed cycles through curve-interior vertices only
    for e in edges:
        if e in used:
            continue
        cyc_vertices = set()
        stack = [e]
        seen = set()
        while stack:
            x = stack.pop()
            if x in seen:
                continue
            seen.add(x)
            for w in mesh.edges[x]:
                cyc_vertices.add(w)
                stack.extend(y for y in inc[w] if y not in seen)
        start = min(cyc_vertices)
        first = min(inc[start], key=lambda x: _other(mesh, x, start))
        vs, es = walk(start, first)
        curves.append(SingularCurve(
            tuple(vs), tuple(es), tuple(mesh.edge_degree[x] for x in es), True, ("cycle", "cycle"),
        ))
    curves.sort(key=lambda c: (c.vertices[0], c.vertices[1], c.vertices[-1]))
    return SingularGraph(edges, nodes, tuple(curves))


def _other(mesh, e, v):
    a, b = mesh.edges[e]
    return b if a == v else a
