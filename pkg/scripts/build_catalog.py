"""Regenerate src/hexsing/spheretri/catalog_data.json.

Representatives come from exhaustive enumeration (max-degree <= 5 links are
unique per signature) or from splitting a parent along a searched cycle.
Recipes are found by exhaustive simple-cycle search constrained to the
stated outcome, then frozen.

    python scripts/build_catalog.py
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

from hexsing.spheretri.triangulation import (
    SphereTriangulation,
    canonical_form,
    cycles_by_length,
    enumerate_triangulations,
    format_signature,
    interior_counts,
    is_isomorphic,
    join,
    signature,
    simple_cycles,
    split,
)

OUT = Path(__file__).resolve().parents[1] / "src" / "hexsing" / "spheretri" / "catalog_data.json"


def canonical_relabel(t: SphereTriangulation) -> SphereTriangulation:
    _, orders = canonical_form(t)
    order = orders[0][0]
    perm = [0] * t.n
    for k, v in enumerate(order):
        perm[v] = k
    tris = sorted(tuple(_rotate_min(tuple(perm[v] for v in tri))) for tri in t.triangles)
    return SphereTriangulation(t.n, tuple(tris))


def _rotate_min(tri):
    k = tri.index(min(tri))
    return tri[k:] + tri[:k]


def name(t):
    return format_signature(signature(t))


def main() -> int:
    levels = enumerate_triangulations(8)
    small = enumerate_triangulations(12, keep=lambda t: max(t.degrees) <= 5)
    reps: dict[str, SphereTriangulation] = {}
    for n, ts in small.items():
        for t in ts:
            reps[name(t)] = canonical_relabel(t)

    def find_split(t, targets, lengths=None):
        """First cycle (shortest first) whose halves are isomorphic to ``targets`` in some order."""
        for c in cycles_by_length(t):
            if lengths and len(c) not in lengths:
                continue
            h1, h2 = split(t, c)
            for a, b in ((targets[0], targets[1]), (targets[1], targets[0])):
                if _matches(h1, a) and _matches(h2, b):
                    return c, (h1, h2)
        return None, None

    def _matches(h, target):
        if isinstance(target, SphereTriangulation):
            return is_isomorphic(h, target)
        return name(h) == target

    recipes: dict[str, list[int]] = {}
    notes: dict[str, str] = {}

    # icosahedron roadmap: 6-cycle into (0,2,8,1) + (0,4,4,1)
    ico = reps["(0,0,12)"]
    for c in cycles_by_length(ico, 6):
        if len(c) != 6:
            continue
        h1, h2 = split(ico, c)
        names = sorted([name(h1), name(h2)])
        if names != ["(0,2,8,1)", "(0,4,4,1)"]:
            continue
        big = h1 if name(h1) == "(0,2,8,1)" else h2
        small_half = h2 if big is h1 else h1
        c_big, _ = find_split(big, ["(0,3,6)", "(0,3,6)"], {5})
        c_small, _ = find_split(small_half, ["(0,4,4)", "(0,4,4)"], {5})
        if c_big and c_small:
            recipes["(0,0,12)"] = list(c)
            reps["(0,2,8,1)"] = canonical_relabel(big)
            reps["(0,4,4,1)"] = canonical_relabel(small_half)
            break
    else:
        print("no roadmap 6-cycle", file=sys.stderr)
        return 1

    # base cases from the case analysis: (3,0,3,1) and (4,0,0,4)
    def no_reducing_cycle(t):
        for c in simple_cycles(t):
            k1, k2 = interior_counts(t, c)
            if k1 >= 2 and k2 >= 2:
                return False
        return True

    cands_3031 = [t for t in levels[7] if name(t) == "(3,0,3,1)"]
    cands_4004 = [t for t in levels[8] if name(t) == "(4,0,0,4)"]
    cands_2302 = [t for t in levels[7] if name(t) == "(2,3,0,2)"]
    notes["(3,0,3,1)"] = f"{len(cands_3031)} triangulation(s) with this signature"
    notes["(4,0,0,4)"] = f"{len(cands_4004)} triangulation(s) with this signature"
    notes["(2,3,0,2)"] = f"{len(cands_2302)} triangulation(s) with this signature"
    t3031 = [t for t in cands_3031 if no_reducing_cycle(t)]
    assert len(t3031) == 1, t3031
    reps["(3,0,3,1)"] = canonical_relabel(t3031[0])
    found = False
    # (4,0,0,4) is unique; unlike (3,0,3,1) it does admit a vertex-reducing cycle
    for t in cands_4004:
        c, halves = find_split(t, [reps["(3,0,3,1)"], "(1,3,3,1)"], {5})
        if c:
            reps["(4,0,0,4)"] = canonical_relabel(t)
            h = halves[0] if name(halves[0]) == "(1,3,3,1)" else halves[1]
            reps["(1,3,3,1)"] = canonical_relabel(h)
            found = True
            break
    assert found
    reps["(2,3,0,2)"] = canonical_relabel(cands_2302[0])

    fixed_targets = {
        "(4,0,0)": ["(2,3,0)", "(2,3,0)"],
        "(2,2,2)": ["(2,3,0)", "(0,5,2)"],
        "(0,4,4)": ["(0,5,2)", "(0,5,2)"],
        "(0,3,6)": ["(0,4,4)", "(0,4,4)"],
        "(0,2,8)": ["(0,3,6)", "(0,4,4)"],
        "(2,0,6)": ["(1,3,3)", "(1,3,3)"],
        "(0,4,4,1)": ["(0,4,4)", "(0,4,4)"],
        "(0,2,8,1)": ["(0,3,6)", "(0,3,6)"],
        "(3,0,3,1)": ["(2,2,2)", "(1,3,3)"],
        "(4,0,0,4)": ["(3,0,3,1)", "(1,3,3,1)"],
    }
    for key, targets in fixed_targets.items():
        # degree-6 halves are not determined by their signature
        tg = [reps[x] if x.count(",") >= 3 else x for x in targets]
        c, _ = find_split(reps[key], tg)
        assert c is not None, key
        recipes[key] = list(c)
    # roadmap cycle is stored in the canonical relabelling of the icosahedron already
    terminal = {k for k, t in reps.items() if t.is_terminal()}

    # remaining entries: cheapest split whose halves are already resolved
    sizes = {k: 0 for k in terminal}

    def plan_size(key):
        if key in sizes:
            return sizes[key]
        c = recipes.get(key)
        if c is None:
            return None
        halves = split(reps[key], c)
        parts = []
        for h in halves:
            hk = lookup(h)
            if hk is None:
                return None
            s = plan_size(hk)
            if s is None:
                return None
            parts.append(s)
        sizes[key] = 1 + sum(parts)
        return sizes[key]

    def lookup(h):
        if h.is_terminal():
            return name(h) if name(h) in reps else "terminal"
        for k, r in reps.items():
            if is_isomorphic(h, r):
                return k
        return None

    sizes["terminal"] = 0
    pending = [k for k in reps if k not in recipes and k not in terminal]
    while pending:
        progress = False
        for key in list(pending):
            best = None
            t = reps[key]
            for c in cycles_by_length(t):
                h1, h2 = split(t, c)
                if h1.n >= t.n and h2.n >= t.n:
                    continue
                parts = []
                for h in (h1, h2):
                    hk = lookup(h)
                    s = None if hk is None or hk == key else plan_size(hk)
                    parts.append(s)
                if None in parts:
                    continue
                cost = (1 + sum(parts), len(c))
                if best is None or cost < best[0]:
                    best = (cost, c)
            if best is not None:
                recipes[key] = list(best[1])
                pending.remove(key)
                progress = True
        if not progress:
            print("unresolved:", pending, file=sys.stderr)
            return 1
    for k in reps:
        plan_size(k)

    # join alignments for the identities
    identities = [
        ("(0,3,6)", "(0,4,4)", "(0,4,4)", 5),
        ("(0,2,8)", "(0,3,6)", "(0,4,4)", 5),
        ("(2,0,6)", "(1,3,3)", "(1,3,3)", 4),
        ("(3,0,3,1)", "(2,2,2)", "(1,3,3)", 4),
        ("(4,0,0,4)", "(3,0,3,1)", "(1,3,3,1)", 5),
        ("(0,2,8,1)", "(0,3,6)", "(0,3,6)", 5),
        ("(0,4,4,1)", "(0,4,4)", "(0,4,4)", 5),
        ("(0,0,12)", "(0,2,8,1)", "(0,4,4,1)", 6),
    ]
    joins = []
    for lhs, a, b, n in identities:
        ta, tb, tl = reps[a], reps[b], reps[lhs]
        hit = None
        for w1 in range(ta.n):
            if ta.degrees[w1] != n:
                continue
            for w2 in range(tb.n):
                if tb.degrees[w2] != n:
                    continue
                for off in range(n):
                    try:
                        j = join(ta, w1, tb, w2, off)
                    except ValueError:
                        continue
                    if is_isomorphic(j, tl):
                        hit = (w1, w2, off)
                        break
                if hit:
                    break
            if hit:
                break
        assert hit, lhs
        joins.append({"lhs": lhs, "left": a, "right": b, "n": n,
                      "left_apex": hit[0], "right_apex": hit[1], "offset": hit[2]})

    data = {
        "entries": [
            {
                "signature": k,
                "n": reps[k].n,
                "triangles": [list(t) for t in reps[k].triangles],
                "recipe": recipes.get(k, "terminal") if k not in terminal else "terminal",
                "plan_size": sizes[k],
            }
            for k in sorted(reps, key=lambda s: (reps[s].n, s))
        ],
        "identities": joins,
        "notes": notes,
    }
    OUT.write_text(json.dumps(data, indent=1) + "\n")
    for e in data["entries"]:
        print(e["signature"], e["n"], e["recipe"], e["plan_size"])
    print(notes)
    return 0


if __name__ == "__main__":
    sys.exit(main())
