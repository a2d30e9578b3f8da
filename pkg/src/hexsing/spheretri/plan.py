"""Recursive decomposition plans: binary trees of splits ending in curve links."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import catalog
from .cut import NoCutError, general_cut
from .triangulation import (
    SphereTriangulation,
    canonical_code,
    cycles_by_length,
    format_signature,
    signature,
    split,
)


class PlanError(RuntimeError):
    pass


@dataclass
class PlanNode:
    triangulation: SphereTriangulation
    how: str  # terminal | catalog | general:<case> | search
    cycle: tuple[int, ...] | None = None
    children: tuple["PlanNode", ...] = field(default_factory=tuple)

    @property
    def signature(self) -> tuple[int, ...]:
        return signature(self.triangulation)

    def splits(self) -> int:
        return (1 if self.cycle is not None else 0) + sum(c.splits() for c in self.children)

    def depth(self) -> int:
        return 0 if not self.children else 1 + max(c.depth() for c in self.children)

    def leaves(self) -> list["PlanNode"]:
        if not self.children:
            return [self]
        return [leaf for c in self.children for leaf in c.leaves()]

    def nodes(self):
        yield self
        for c in self.children:
            yield from c.nodes()

    def to_dict(self) -> dict:
        out = {"signature": format_signature(self.signature), "vertices": self.triangulation.n, "how": self.how}
        if self.cycle is not None:
            out["cycle"] = list(self.cycle)
            out["children"] = [c.to_dict() for c in self.children]
        return out


def choose_cycle(t: SphereTriangulation) -> tuple[tuple[int, ...] | None, str]:
    """The first split a plan would make, with how it was chosen."""
    if t.is_terminal():
        return None, "terminal"
    c = catalog.recipe_for(t)
    if c is not None:
        return c, "catalog"
    if max(t.degrees) >= 6:
        try:
            r = general_cut(t)
            return r.cycle, f"general:{r.case}"
        except NoCutError:
            pass
    c = _search(t)
    if c is None:
        raise PlanError(f"no split found for {format_signature(signature(t))} on {t.n} vertices")
    return c, "search"


def _search(t: SphereTriangulation):
    base = t.singular_count()
    for c in cycles_by_length(t):
        halves = split(t, c)
        if all(h.is_terminal() or h.singular_count() < base for h in halves):
            return c
    return None


def decomposition_plan(t: SphereTriangulation, max_depth: int | None = None) -> PlanNode:
    limit = max_depth if max_depth is not None else 2 * t.n + 8
    return _plan(t, limit)


def _plan(t: SphereTriangulation, budget: int) -> PlanNode:
    cycle, how = choose_cycle(t)
    if cycle is None:
        return PlanNode(t, how)
    if budget <= 0:
        raise PlanError("plan recursion budget exhausted")
    halves = split(t, cycle)
    return PlanNode(t, how, tuple(cycle), tuple(_plan(h, budget - 1) for h in halves))


_SIZES: dict[tuple, int] = {}


def plan_size(t: SphereTriangulation) -> int:
    """Number of splits in the plan of ``t``; zero exactly for terminal links."""
    if t.is_terminal():
        return 0
    hit = catalog.match(t)
    if hit is not None:
        return hit[0].plan_size
    code = canonical_code(t)
    if code not in _SIZES:
        _SIZES[code] = decomposition_plan(t).splits()
    return _SIZES[code]
