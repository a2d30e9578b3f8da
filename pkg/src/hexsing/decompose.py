"""Remove every singular node from a hex mesh by repeated sheet inflation."""
from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass, field
from typing import Iterator, Literal

from .hexmesh import HexMesh, pad_boundary, validate
from .sheets import SheetError, cut_from_cycle, inflate_detailed, propagate
from .singular import singular_incidence, singular_nodes
from .spheretri import catalog
from .spheretri.cut import NoCutError, general_cut
from .spheretri.plan import plan_size
from .spheretri.triangulation import (
    SphereTriangulation,
    automorphisms,
    cycles_by_length,
    format_signature,
    is_isomorphic,
    signature,
    split,
)

log = logging.getLogger(__name__)

SEARCH_MAX_CYCLE = 8


class RetriesExhausted(RuntimeError):
    def __init__(self, message, mesh: HexMesh, log: "DecompositionLog"):
        super().__init__(message)
        self.mesh = mesh
        self.log = log


@dataclass(frozen=True)
class DecomposeConfig:
    seed: int = 0
    max_retries: int = 200
    pad: bool | None = None  # None: pad only if a node sits on the boundary
    node_order: Literal["random", "index"] = "random"
    thickness: float = 0.3
    check_links: bool = True


@dataclass
class Step:
    node: int
    signature: str
    cycle: list[int]
    how: str
    halves: list[str]
    sheet_size: int
    hexes_after: int
    nodes_after: int
    complexity_after: int
    retries: int


@dataclass
class DecompositionLog:
    seed: int
    padded: bool = False
    initial_nodes: int = 0
    initial_complexity: int = 0
    steps: list[Step] = field(default_factory=list)
    remaining_nodes: list[int] = field(default_factory=list)
    success: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True)


def needs_padding(mesh: HexMesh) -> bool:
    """A boundary vertex with more than two incident interior singular edges is a node we cannot cut."""
    return any(len(es) > 2 and mesh.is_boundary_vertex(v) for v, es in singular_incidence(mesh).items())


def node_link(mesh: HexMesh, v: int) -> SphereTriangulation:
    return mesh.vertex_link(v).triangulation()


def complexity(mesh: HexMesh) -> int:
    """Total number of splits the nodes of ``mesh`` still need; strictly decreases on every accepted step."""
    return sum(plan_size(node_link(mesh, v)) for v in singular_nodes(mesh))


def candidate_cycles(t: SphereTriangulation) -> Iterator[tuple[tuple[int, ...], str]]:
    """Cycles to try at a node, best first: catalog recipe and its symmetric images, general cut, then search."""
    seen = set()

    def fresh(c):
        key = frozenset(zip(c, c[1:] + c[:1])) | frozenset(zip(c[1:] + c[:1], c))
        if key in seen:
            return False
        seen.add(key)
        return True

    recipe = catalog.recipe_for(t)
    if recipe is not None:
        if fresh(recipe):
            yield recipe, "catalog"
        for perm in automorphisms(t):
            c = tuple(perm[v] for v in recipe)
            if fresh(c):
                yield c, "catalog-image"
    if max(t.degrees) >= 6:
        try:
            r = general_cut(t)
            if fresh(r.cycle):
                yield r.cycle, f"general:{r.case}"
        except NoCutError:
            pass
    base = plan_size(t)
    for c in cycles_by_length(t, SEARCH_MAX_CYCLE):
        h1, h2 = split(t, c)
        if plan_size(h1) + plan_size(h2) < base and fresh(c):
            yield c, "search"


def _order(nodes, rng, config):
    if config.node_order == "index":
        return list(nodes)
    first = rng.choice(nodes)
    rest = [v for v in nodes if v != first]
    rng.shuffle(rest)
    return [first] + rest


def _candidates(mesh, rng, config):
    for v in _order(singular_nodes(mesh), rng, config):
        t = node_link(mesh, v)
        for cycle, how in candidate_cycles(t):
            yield v, t, cycle, how


def _attempt(mesh, v, t, cycle, config):
    sheet = propagate(mesh, cut_from_cycle(mesh, v, cycle))
    inf = inflate_detailed(mesh, sheet, config.thickness)
    out = inf.mesh
    report = validate(out)
    if not report.ok:
        raise SheetError(f"inflation produced an invalid mesh: {report.violations[0].message}")
    a = node_link(out, v)
    b = node_link(out, inf.duplicates[v])
    if config.check_links:
        h1, h2 = split(t, cycle)
        if not ((is_isomorphic(a, h1) and is_isomorphic(b, h2)) or (is_isomorphic(a, h2) and is_isomorphic(b, h1))):
            raise SheetError("new vertex links do not match the triangulation split")
    halves = sorted([format_signature(signature(a)), format_signature(signature(b))])
    return out, sheet, halves


@dataclass
class _Frame:
    mesh: HexMesh
    complexity: int
    options: Iterator
    retries: int = 0
    step: Step | None = None  # the step that produced this state


def decompose_all(mesh: HexMesh, config: DecomposeConfig | None = None, **overrides) -> tuple[HexMesh, DecompositionLog]:
    """Inflate sheets through nodes until none remain.

    Each accepted step must strictly lower :func:`complexity`.  Candidates are
    explored depth first: when a state has no admissible sheet left the
    previous step is undone and its next candidate tried.  Every failed
    candidate and every undo counts against ``max_retries``; running out
    raises :class:`RetriesExhausted` with the deepest partial result.
    """
    config = config or DecomposeConfig()
    if overrides:
        config = DecomposeConfig(**{**asdict(config), **overrides})
    rng = random.Random(config.seed)
    out = DecompositionLog(seed=config.seed)
    if config.pad or (config.pad is None and needs_padding(mesh)):
        log.info("padding boundary")
        mesh = pad_boundary(mesh, config.thickness)
        out.padded = True
    start = complexity(mesh)
    out.initial_nodes = len(singular_nodes(mesh))
    out.initial_complexity = start
    stack = [_Frame(mesh, start, _candidates(mesh, rng, config))]
    deepest = stack[:]
    failures = 0
    while singular_nodes(stack[-1].mesh):
        frame = stack[-1]
        accepted = None
        for v, t, cycle, how in frame.options:
            try:
                new, sheet, halves = _attempt(frame.mesh, v, t, cycle, config)
                score = complexity(new)
            except SheetError as exc:
                log.debug("node %d cycle %s failed: %s", v, cycle, exc)
                score = None
            if score is not None and score < frame.complexity:
                accepted = (v, t, cycle, how, new, sheet, halves, score)
                break
            frame.retries += 1
            failures += 1
            if failures > config.max_retries:
                break
        if accepted is None:
            failures += 1
            if failures > config.max_retries or len(stack) == 1:
                best = deepest[-1]
                out.steps = [f.step for f in deepest[1:]]
                out.remaining_nodes = list(singular_nodes(best.mesh))
                raise RetriesExhausted(
                    f"no admissible sheet for nodes {out.remaining_nodes}", best.mesh, out
                )
            log.info("backtracking from depth %d", len(stack) - 1)
            stack.pop()
            stack[-1].retries += 1
            continue
        v, t, cycle, how, new, sheet, halves, score = accepted
        step = Step(
            node=v,
            signature=format_signature(signature(t)),
            cycle=list(cycle),
            how=how,
            halves=halves,
            sheet_size=len(sheet),
            hexes_after=new.n_hexes,
            nodes_after=len(singular_nodes(new)),
            complexity_after=score,
            retries=frame.retries,
        )
        log.info("step %d: node %d %s -> %s", len(stack), v, step.signature, " + ".join(halves))
        stack.append(_Frame(new, score, _candidates(new, rng, config), step=step))
        if score < deepest[-1].complexity:
            deepest = stack[:]
    out.steps = [f.step for f in stack[1:]]
    out.success = True
    return stack[-1].mesh, out
