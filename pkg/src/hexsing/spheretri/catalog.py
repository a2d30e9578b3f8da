"""Frozen base cases: representatives, split recipes, and the join identities.

The data file is produced by ``scripts/build_catalog.py``.  Every recipe is
re-validated when the catalog is first loaded.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .triangulation import (
    SphereTriangulation,
    canonical_code,
    format_signature,
    is_isomorphic,
    isomorphism,
    join,
    signature,
    split,
)


class CatalogError(RuntimeError):
    pass


@dataclass(frozen=True)
class BaseCaseEntry:
    name: str
    triangulation: SphereTriangulation
    recipe: tuple[int, ...] | None  # None means terminal
    plan_size: int

    @property
    def signature(self) -> tuple[int, ...]:
        return signature(self.triangulation)

    @property
    def terminal(self) -> bool:
        return self.recipe is None


@dataclass(frozen=True)
class JoinIdentity:
    lhs: str
    left: str
    right: str
    n: int
    left_apex: int
    right_apex: int
    offset: int

    def __str__(self):
        return f"{self.lhs} = {self.left} +_{self.n} {self.right}"


@lru_cache(maxsize=None)
def _load():
    raw = json.loads(resources.files("hexsing.spheretri").joinpath("catalog_data.json").read_text())
    entries = []
    for e in raw["entries"]:
        t = SphereTriangulation(e["n"], tuple(tuple(x) for x in e["triangles"]))
        if format_signature(signature(t)) != e["signature"]:
            raise CatalogError(f"entry {e['signature']} has signature {signature(t)}")
        recipe = None if e["recipe"] == "terminal" else tuple(e["recipe"])
        entries.append(BaseCaseEntry(e["signature"], t, recipe, e["plan_size"]))
    identities = [JoinIdentity(**j) for j in raw["identities"]]
    by_code = {canonical_code(e.triangulation): e for e in entries}
    by_name = {e.name: e for e in entries}
    _validate(entries, by_code, by_name, identities)
    return entries, by_code, by_name, identities


def _validate(entries, by_code, by_name, identities):
    for e in entries:
        if e.terminal:
            if not e.triangulation.is_terminal() or e.plan_size != 0:
                raise CatalogError(f"{e.name} marked terminal but is not")
            continue
        total = 1
        for h in split(e.triangulation, e.recipe):
            if h.is_terminal():
                continue
            child = by_code.get(canonical_code(h))
            if child is None:
                raise CatalogError(f"recipe of {e.name} yields unknown {format_signature(signature(h))}")
            total += child.plan_size
        if total != e.plan_size:
            raise CatalogError(f"{e.name}: recorded plan size {e.plan_size}, recipe gives {total}")
    for ident in identities:
        a, b, lhs = by_name[ident.left], by_name[ident.right], by_name[ident.lhs]
        glued = join(a.triangulation, ident.left_apex, b.triangulation, ident.right_apex, ident.offset)
        if not is_isomorphic(glued, lhs.triangulation):
            raise CatalogError(f"identity {ident} does not hold")


def catalog() -> list[BaseCaseEntry]:
    return list(_load()[0])


def identities() -> list[JoinIdentity]:
    return list(_load()[3])


def entry(name: str) -> BaseCaseEntry:
    """Entry by its printed signature, e.g. ``"(0,4,4,1)"``."""
    try:
        return _load()[2][name.replace(" ", "")]
    except KeyError:
        raise KeyError(f"no catalog entry {name}") from None


def representative(name: str) -> SphereTriangulation:
    return entry(name).triangulation


def match(t: SphereTriangulation):
    """``(entry, mapping)`` with ``mapping`` sending representative vertices into ``t``, or ``None``."""
    e = _load()[1].get(canonical_code(t))
    if e is None:
        return None
    m = isomorphism(e.triangulation, t)
    return e, m


def recipe_for(t: SphereTriangulation):
    """Catalog split cycle expressed in ``t``'s own vertex labels, or ``None``."""
    hit = match(t)
    if hit is None or hit[0].terminal:
        return None
    e, m = hit
    return tuple(m[v] for v in e.recipe)
