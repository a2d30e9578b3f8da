"""Mesh and triangulation files: legacy VTK (ASCII), MEDIT, OFF, OBJ polylines and JSON.

Hex corner order in files is the internal one, so no permutation happens on
the way in or out.  Writers are deterministic: fixed ordering and positions
printed with 17 significant digits.
"""
from __future__ import annotations

import enum
import json
import logging
from pathlib import Path

import numpy as np

from .hexmesh import HexMesh, ValidationReport, validate
from .singular import SingularGraph, trace_curves
from .spheretri.triangulation import SphereTriangulation

log = logging.getLogger(__name__)

VTK_HEXAHEDRON = 12


class MeshFileFormat(str, enum.Enum):
    VTK = "vtk-legacy-ascii"
    MEDIT = "medit-mesh"
    OFF = "off"


_SUFFIXES = {".vtk": MeshFileFormat.VTK, ".mesh": MeshFileFormat.MEDIT, ".off": MeshFileFormat.OFF}


class ParseError(ValueError):
    def __init__(self, path, line: int | None, message: str):
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")
        self.path = str(path)
        self.line = line


class MeshValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        first = report.violations[0].message if report.violations else ""
        super().__init__(f"mesh fails validation ({len(report.violations)} violations): {first}")
        self.report = report


def guess_format(path) -> MeshFileFormat:
    suffix = Path(path).suffix.lower()
    if suffix not in _SUFFIXES:
        raise ValueError(f"cannot infer file format from suffix {suffix!r}")
    return _SUFFIXES[suffix]


def _fmt(x: float) -> str:
    return f"{float(x) + 0.0:.17g}"  # + 0.0 folds -0.0 into 0


class _Tokens:
    """Whitespace tokens with the line each came from; ``#`` starts a comment when ``comments`` is set."""

    def __init__(self, path, lines, first_line=1, comments=True):
        self.path = path
        self.items = []
        for k, line in enumerate(lines, start=first_line):
            if comments:
                line = line.split("#", 1)[0]
            self.items.extend((tok, k) for tok in line.split())
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def line(self) -> int | None:
        if self.done():
            return self.items[-1][1] if self.items else None
        return self.items[self.pos][1]

    def error(self, message):
        return ParseError(self.path, self.line(), message)

    def next(self, what="token") -> str:
        if self.done():
            raise self.error(f"unexpected end of file, expected {what}")
        tok = self.items[self.pos][0]
        self.pos += 1
        return tok

    def peek(self) -> str | None:
        return None if self.done() else self.items[self.pos][0]

    def int(self, what="integer") -> int:
        tok = self.next(what)
        try:
            return int(tok)
        except ValueError:
            self.pos -= 1
            raise self.error(f"expected {what}, got {tok!r}") from None

    def float(self, what="number") -> float:
        tok = self.next(what)
        try:
            return float(tok)
        except ValueError:
            self.pos -= 1
            raise self.error(f"expected {what}, got {tok!r}") from None


# -- legacy VTK -------------------------------------------------------------------------


def read_vtk(path) -> HexMesh:
    lines = Path(path).read_text().splitlines()
    if len(lines) < 3 or not lines[0].startswith("# vtk DataFile"):
        raise ParseError(path, 1, "missing '# vtk DataFile' header")
    if lines[2].strip().upper() != "ASCII":
        raise ParseError(path, 3, f"only ASCII files are supported, got {lines[2].strip()!r}")
    tok = _Tokens(path, lines[3:], first_line=4, comments=False)
    points = cells = types = None
    while not tok.done():
        key = tok.next().upper()
        if key == "DATASET":
            kind = tok.next("dataset type")
            if kind.upper() != "UNSTRUCTURED_GRID":
                raise ParseError(path, tok.items[tok.pos - 1][1], f"unsupported dataset {kind!r}")
        elif key == "POINTS":
            n = tok.int("point count")
            tok.next("point data type")
            points = np.array([tok.float("coordinate") for _ in range(3 * n)]).reshape(n, 3)
        elif key == "CELLS":
            m = tok.int("cell count")
            tok.int("cell list size")
            cells = []
            for _ in range(m):
                line = tok.line()
                k = tok.int("corner count")
                if k != 8:
                    raise ParseError(path, line, f"cell with {k} corners; only hexahedra are supported")
                cells.append(tuple(tok.int("corner index") for _ in range(k)))
        elif key == "CELL_TYPES":
            m = tok.int("cell count")
            types = []
            for _ in range(m):
                line = tok.line()
                t = tok.int("cell type")
                if t != VTK_HEXAHEDRON:
                    raise ParseError(path, line, f"cell type {t} is not a hexahedron ({VTK_HEXAHEDRON})")
                types.append(t)
        elif key in ("POINT_DATA", "CELL_DATA"):
            break  # attributes are not read
        else:
            raise ParseError(path, tok.items[tok.pos - 1][1], f"unexpected keyword {key!r}")
    if points is None or cells is None:
        raise ParseError(path, None, "POINTS and CELLS sections are required")
    if types is not None and len(types) != len(cells):
        raise ParseError(path, None, f"{len(types)} cell types for {len(cells)} cells")
    return HexMesh(points, cells)


def write_vtk(mesh: HexMesh, path, title: str = "hexsing mesh") -> None:
    out = ["# vtk DataFile Version 3.0", title, "ASCII", "DATASET UNSTRUCTURED_GRID"]
    out.append(f"POINTS {mesh.n_vertices} double")
    out += [" ".join(_fmt(x) for x in p) for p in mesh.vertices]
    out.append(f"CELLS {mesh.n_hexes} {9 * mesh.n_hexes}")
    out += ["8 " + " ".join(str(v) for v in h) for h in mesh.hexes]
    out.append(f"CELL_TYPES {mesh.n_hexes}")
    out += [str(VTK_HEXAHEDRON)] * mesh.n_hexes
    Path(path).write_text("\n".join(out) + "\n")


# -- MEDIT ------------------------------------------------------------------------------

# entries per row (including the trailing reference) of sections we skip over
_MEDIT_ROWS = {"Edges": 3, "Triangles": 4, "Quadrilaterals": 5, "Corners": 1, "Ridges": 1,
               "RequiredVertices": 1, "RequiredEdges": 1}


def read_medit(path) -> HexMesh:
    tok = _Tokens(path, Path(path).read_text().splitlines())
    dim = 3
    points = None
    cells = []
    while not tok.done():
        key = tok.next()
        if key == "MeshVersionFormatted":
            tok.int("version")
        elif key == "Dimension":
            dim = tok.int("dimension")
            if dim != 3:
                raise ParseError(path, tok.items[tok.pos - 1][1], f"dimension {dim} is not 3")
        elif key == "Vertices":
            n = tok.int("vertex count")
            rows = [[tok.float("coordinate") for _ in range(dim)] + [tok.int("reference")] for _ in range(n)]
            points = np.array([r[:dim] for r in rows], dtype=float).reshape(n, dim)
        elif key == "Hexahedra":
            m = tok.int("hexahedron count")
            for _ in range(m):
                line = tok.line()
                h = [tok.int("corner index") - 1 for _ in range(8)]
                tok.int("reference")
                if min(h) < 0:
                    raise ParseError(path, line, "MEDIT indices are 1-based")
                cells.append(tuple(h))
        elif key in ("Tetrahedra", "Prisms", "Pyramids"):
            line = tok.items[tok.pos - 1][1]
            if tok.int("element count"):
                raise ParseError(path, line, f"{key} are not supported; only hexahedra")
        elif key in _MEDIT_ROWS:
            n = tok.int("entry count")
            for _ in range(n * _MEDIT_ROWS[key]):
                tok.next("entry")
        elif key == "End":
            break
        else:
            raise ParseError(path, tok.items[tok.pos - 1][1], f"unexpected keyword {key!r}")
    if points is None:
        raise ParseError(path, None, "no Vertices section")
    return HexMesh(points, cells)


def write_medit(mesh: HexMesh, path) -> None:
    out = ["MeshVersionFormatted 2", "Dimension 3", "Vertices", str(mesh.n_vertices)]
    out += [" ".join(_fmt(x) for x in p) + " 0" for p in mesh.vertices]
    out += ["Hexahedra", str(mesh.n_hexes)]
    out += [" ".join(str(v + 1) for v in h) + " 0" for h in mesh.hexes]
    out.append("End")
    Path(path).write_text("\n".join(out) + "\n")


# -- OFF (triangulations) -----------------------------------------------------------------


def read_off(path) -> SphereTriangulation:
    tok = _Tokens(path, Path(path).read_text().splitlines())
    if tok.next("OFF header") != "OFF":
        raise ParseError(path, 1, "missing OFF header")
    n = tok.int("vertex count")
    f = tok.int("face count")
    tok.int("edge count")
    for _ in range(3 * n):
        tok.float("coordinate")
    tris = []
    for _ in range(f):
        line = tok.line()
        k = tok.int("face size")
        if k != 3:
            raise ParseError(path, line, f"face with {k} vertices; a triangulation needs triangles")
        tri = tuple(tok.int("vertex index") for _ in range(3))
        if not all(0 <= v < n for v in tri):
            raise ParseError(path, line, f"vertex index out of range in {tri}")
        tris.append(tri)
    return SphereTriangulation(n, tuple(tris))


def write_off(t: SphereTriangulation, path, positions=None) -> None:
    """Triangles counterclockwise seen from outside; positions default to a sphere layout."""
    if positions is None:
        from .meshgen import sphere_layout
        positions = sphere_layout(t)
    out = ["OFF", f"{t.n} {len(t.triangles)} {len(t.edges)}"]
    out += [" ".join(_fmt(x) for x in p) for p in positions]
    out += ["3 " + " ".join(str(v) for v in tri) for tri in t.triangles]
    Path(path).write_text("\n".join(out) + "\n")


# -- dispatch ------------------------------------------------------------------------------


def read_mesh(path, format: MeshFileFormat | str | None = None, strict: bool = False):
    """Read a hex mesh (VTK, MEDIT) or a sphere triangulation (OFF).

    Hex meshes are validated; problems are logged as warnings, or raised as
    :class:`MeshValidationError` when ``strict``.
    """
    fmt = MeshFileFormat(format) if format is not None else guess_format(path)
    if fmt is MeshFileFormat.OFF:
        return read_off(path)
    mesh = read_vtk(path) if fmt is MeshFileFormat.VTK else read_medit(path)
    report = validate(mesh)
    if not report.ok:
        if strict:
            raise MeshValidationError(report)
        for v in report.violations:
            log.warning("%s: %s", path, v.message)
    return mesh


def write_mesh(obj, path, format: MeshFileFormat | str | None = None) -> None:
    fmt = MeshFileFormat(format) if format is not None else guess_format(path)
    if fmt is MeshFileFormat.OFF:
        if not isinstance(obj, SphereTriangulation):
            raise TypeError("OFF output is for sphere triangulations")
        write_off(obj, path)
        return
    if not isinstance(obj, HexMesh):
        raise TypeError(f"{fmt.value} output needs a HexMesh")
    (write_vtk if fmt is MeshFileFormat.VTK else write_medit)(obj, path)


# -- singular graph and JSON ------------------------------------------------------------------


def write_singular_obj(mesh: HexMesh, path, graph: SingularGraph | None = None) -> None:
    """One ``l`` polyline per singular curve; each mesh vertex is written once."""
    graph = graph or trace_curves(mesh)
    index: dict[int, int] = {}
    for curve in graph.curves:
        for v in curve.vertices:
            index.setdefault(v, len(index) + 1)
    for v in graph.nodes:
        index.setdefault(v, len(index) + 1)
    out = [f"# singular graph: {len(graph.curves)} curves, {len(graph.nodes)} nodes"]
    out += ["v " + " ".join(_fmt(x) for x in mesh.vertices[v]) for v in index]
    out += ["l " + " ".join(str(index[v]) for v in curve.vertices) for curve in graph.curves]
    Path(path).write_text("\n".join(out) + "\n")


def read_obj_polylines(path) -> tuple[np.ndarray, list[list[int]]]:
    points, lines = [], []
    for k, line in enumerate(Path(path).read_text().splitlines(), start=1):
        parts = line.split("#", 1)[0].split()
        if not parts:
            continue
        try:
            if parts[0] == "v":
                points.append([float(x) for x in parts[1:4]])
            elif parts[0] == "l":
                lines.append([int(x) - 1 for x in parts[1:]])
        except ValueError as exc:
            raise ParseError(path, k, str(exc)) from None
    return np.array(points).reshape(-1, 3), lines


def dumps(data) -> str:
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def write_json(data, path) -> None:
    if hasattr(data, "to_dict"):
        data = data.to_dict()
    Path(path).write_text(dumps(data))


DECOMPOSITION_LOG_SCHEMA = {
    "type": "object",
    "required": ["seed", "padded", "initial_nodes", "initial_complexity", "steps", "remaining_nodes", "success"],
    "properties": {
        "seed": {"type": "integer"},
        "padded": {"type": "boolean"},
        "initial_nodes": {"type": "integer", "minimum": 0},
        "initial_complexity": {"type": "integer", "minimum": 0},
        "success": {"type": "boolean"},
        "remaining_nodes": {"type": "array", "items": {"type": "integer"}},
        "steps": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["node", "signature", "cycle", "how", "halves", "sheet_size",
                             "hexes_after", "nodes_after", "complexity_after", "retries"],
                "properties": {
                    "node": {"type": "integer"},
                    "signature": {"type": "string"},
                    "cycle": {"type": "array", "items": {"type": "integer"}, "minItems": 3},
                    "how": {"type": "string"},
                    "halves": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "sheet_size": {"type": "integer", "minimum": 1},
                    "hexes_after": {"type": "integer"},
                    "nodes_after": {"type": "integer", "minimum": 0},
                    "complexity_after": {"type": "integer", "minimum": 0},
                    "retries": {"type": "integer", "minimum": 0},
                },
            },
        },
    },
}
