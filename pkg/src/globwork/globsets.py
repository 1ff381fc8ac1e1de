"""Finite truncated globular sets and their colimit/factorization toolkit.

Cells are identified by hashable tuples; colimits pick deterministic
minimal representatives so every construction is reproducible bit for bit.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from .errors import DomainError, TypingError
from .trees import Tree, dim as tree_dim


class FinGlobSet:
    """An n-truncated globular set on finite cell sets.

    ``cells[k]`` is a sorted tuple of cell ids, ``src[k]``/``tgt[k]`` are
    total maps ``cells[k] -> cells[k-1]`` for ``k >= 1``.  ``n = -1`` is the
    empty globular set.
    """

    def __init__(self, n, cells, src, tgt, check=True):
        self.n = n
        self.cells = tuple(tuple(sorted(c, key=repr)) for c in cells)
        self.src = tuple(dict(d) for d in src)
        self.tgt = tuple(dict(d) for d in tgt)
        if len(self.cells) != n + 1 or len(self.src) != n + 1 or len(self.tgt) != n + 1:
            raise TypingError("cells/src/tgt must have length n+1")
        if check:
            self.validate()

    def validate(self):
        for k in range(1, self.n + 1):
            for c in self.cells[k]:
                for mp in (self.src[k], self.tgt[k]):
                    if c not in mp or mp[c] not in set(self.cells[k - 1]):
                        raise TypingError(f"missing or dangling boundary for {c!r}")
        for k in range(2, self.n + 1):
            for c in self.cells[k]:
                s, t = self.src[k][c], self.tgt[k][c]
                if self.src[k - 1][s] != self.src[k - 1][t] or self.tgt[k - 1][s] != self.tgt[k - 1][t]:
                    raise TypingError(f"globularity fails at {c!r}")

    def counts(self):
        return tuple(len(c) for c in self.cells)

    def cell_dims(self):
        return range(self.n + 1)

    def iter_cells(self):
        for k in range(self.n + 1):
            for c in self.cells[k]:
                yield k, c

    def boundary_pair(self, k, c):
        return (self.src[k][c], self.tgt[k][c])

    def iterated(self, k, c, steps, which):
        mp = self.src if which == "s" else self.tgt
        d = k
        for _ in range(steps):
            c = mp[d][c]
            d -= 1
        return c

    def __eq__(self, other):
        return (
            isinstance(other, FinGlobSet)
            and self.n == other.n
            and self.cells == other.cells
            and self.src == other.src
            and self.tgt == other.tgt
        )

    def __repr__(self):
        return f"FinGlobSet(n={self.n}, counts={self.counts()})"

    def to_json(self):
        return {
            "n": self.n,
            "cells": [[repr(c) for c in layer] for layer in self.cells],
            "src": [sorted([repr(c), repr(v)] for c, v in d.items()) for d in self.src],
            "tgt": [sorted([repr(c), repr(v)] for c, v in d.items()) for d in self.tgt],
        }

    def dot_1_skeleton(self):
        lines = ["digraph skel {"]
        names = {c: f"v{i}" for i, c in enumerate(self.cells[0])} if self.n >= 0 else {}
        for c, nm in names.items():
            lines.append(f'  {nm} [label="{c}"];')
        if self.n >= 1:
            for e in self.cells[1]:
                lines.append(f'  {names[self.src[1][e]]} -> {names[self.tgt[1][e]]} [label="{e}"];')
        lines.append("}")
        return "\n".join(lines)


EMPTY = FinGlobSet(-1, (), (), ())


class GlobMap:
    """A map of globular sets: per-dimension functions commuting with src/tgt."""

    def __init__(self, dom: FinGlobSet, cod: FinGlobSet, maps, check=True):
        self.dom = dom
        self.cod = cod
        self.maps = tuple(dict(m) for m in maps)
        if check:
            self.validate()

    def validate(self):
        if len(self.maps) != self.dom.n + 1:
            raise TypingError("component count must match domain truncation")
        if self.dom.n > self.cod.n:
            raise TypingError("codomain truncation too small")
        for k in range(self.dom.n + 1):
            for c in self.dom.cells[k]:
                if c not in self.maps[k]:
                    raise TypingError(f"no image for {c!r}")
                if self.maps[k][c] not in set(self.cod.cells[k]):
                    raise TypingError(f"image of {c!r} is not a cell")
        for k in range(1, self.dom.n + 1):
            for c in self.dom.cells[k]:
                if self.cod.src[k][self.maps[k][c]] != self.maps[k - 1][self.dom.src[k][c]]:
                    raise TypingError(f"src not preserved at {c!r}")
                if self.cod.tgt[k][self.maps[k][c]] != self.maps[k - 1][self.dom.tgt[k][c]]:
                    raise TypingError(f"tgt not preserved at {c!r}")

    def __call__(self, k, c):
        return self.maps[k][c]

    def __eq__(self, other):
        return (
            isinstance(other, GlobMap)
            and self.dom == other.dom
            and self.cod == other.cod
            and self.maps == other.maps
        )

    def then(self, other: "GlobMap") -> "GlobMap":
        if other.dom != self.cod:
            raise TypingError("composition mismatch")
        maps = [
            {c: other.maps[k][v] for c, v in self.maps[k].items()}
            for k in range(self.dom.n + 1)
        ]
        return GlobMap(self.dom, other.cod, maps)

    def is_injective_at(self, k):
        vals = list(self.maps[k].values())
        return len(vals) == len(set(vals))

    def is_bijective_at(self, k):
        return self.is_injective_at(k) and set(self.maps[k].values()) == set(self.cod.cells[k])


def identity_map(X: FinGlobSet) -> GlobMap:
    return GlobMap(X, X, [{c: c for c in X.cells[k]} for k in range(X.n + 1)])


# ---------------------------------------------------------------------------
# realization of trees

@functools.lru_cache(maxsize=None)
def realize(t: Tree) -> FinGlobSet:
    """The globular set pasted together according to the tree.

    The d-cells are the gaps of the height-d vertices: cell ids are pairs
    ``(vertex path, gap index)``, so identifiers are canonical.
    """
    n = tree_dim(t)
    cells = [[] for _ in range(n + 1)]
    src = [dict() for _ in range(n + 1)]
    tgt = [dict() for _ in range(n + 1)]
    for path in t.nodes():
        h = len(path)
        node = t.subtree(path)
        for g in range(node.arity + 1):
            c = (path, g)
            cells[h].append(c)
            if h >= 1:
                src[h][c] = (path[:-1], path[-1])
                tgt[h][c] = (path[:-1], path[-1] + 1)
    return FinGlobSet(n, cells, src, tgt)


def globe_set(k: int) -> FinGlobSet:
    from .trees import globe

    return realize(globe(k))


def globe_src_map(k: int) -> GlobMap:
    """sigma_k : D_k -> D_{k+1} on realizations."""
    Dk, Dk1 = globe_set(k), globe_set(k + 1)
    maps = [{c: c for c in Dk.cells[h]} for h in range(k + 1)]
    return GlobMap(Dk, Dk1, maps)


def globe_tgt_map(k: int) -> GlobMap:
    Dk, Dk1 = globe_set(k), globe_set(k + 1)
    maps = [{c: c for c in Dk.cells[h]} for h in range(k)]
    top = Dk.cells[k][0]
    maps.append({top: (top[0], 1)})
    return GlobMap(Dk, Dk1, maps)


# ---------------------------------------------------------------------------
# colimits

class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic minimal representative
            lo, hi = sorted((ra, rb), key=repr)
            self.parent[hi] = lo


@dataclass
class Colimit:
    obj: FinGlobSet
    legs: dict  # vertex -> GlobMap

    def mediate(self, cocone: dict) -> GlobMap:
        """The induced map out of the colimit, given a compatible cocone."""
        maps = [dict() for _ in range(self.obj.n + 1)]
        target = None
        for v, leg in self.legs.items():
            u = cocone[v]
            target = u.cod
            for k in range(leg.dom.n + 1):
                for c in leg.dom.cells[k]:
                    rep = leg.maps[k][c]
                    img = u.maps[k][c]
                    if rep in maps[k] and maps[k][rep] != img:
                        raise TypingError("cocone is not compatible")
                    maps[k][rep] = img
        return GlobMap(self.obj, target, maps)


def colimit(spaces: dict, edges: list) -> Colimit:
    """Colimit of a finite diagram of globular sets.

    ``spaces`` maps vertex names to FinGlobSets; ``edges`` is a list of
    ``(v, w, GlobMap)`` with domain ``spaces[v]`` and codomain ``spaces[w]``.
    """
    n = max([X.n for X in spaces.values()], default=-1)
    uf = _UnionFind()
    for v, X in spaces.items():
        for k, c in X.iter_cells():
            uf.add((k, v, c))
    for v, w, f in edges:
        for k in range(f.dom.n + 1):
            for c in f.dom.cells[k]:
                uf.add((k, w, f.maps[k][c]))
                uf.union((k, v, c), (k, w, f.maps[k][c]))
    cells = [set() for _ in range(n + 1)]
    for v, X in spaces.items():
        for k, c in X.iter_cells():
            cells[k].add(uf.find((k, v, c)))
    src = [dict() for _ in range(n + 1)]
    tgt = [dict() for _ in range(n + 1)]
    for v, X in spaces.items():
        for k in range(1, X.n + 1):
            for c in X.cells[k]:
                rep = uf.find((k, v, c))
                s = uf.find((k - 1, v, X.src[k][c]))
                t = uf.find((k - 1, v, X.tgt[k][c]))
                if src[k].setdefault(rep, s) != s or tgt[k].setdefault(rep, t) != t:
                    raise TypingError("colimit boundaries are not well defined")
    P = FinGlobSet(n, cells, src, tgt)
    legs = {}
    for v, X in spaces.items():
        maps = [
            {c: uf.find((k, v, c)) for c in X.cells[k]} for k in range(X.n + 1)
        ]
        legs[v] = GlobMap(X, P, maps)
    return Colimit(P, legs)


def pushout(f: GlobMap, g: GlobMap):
    """Degreewise pushout of ``Y <- X -> Z``; returns (P, Y->P, Z->P, colim)."""
    if f.dom != g.dom:
        raise TypingError("pushout needs a common domain")
    co = colimit(
        {"X": f.dom, "Y": f.cod, "Z": g.cod},
        [("X", "Y", f), ("X", "Z", g)],
    )
    return co.obj, co.legs["Y"], co.legs["Z"], co


# ---------------------------------------------------------------------------
# spheres and latching objects

_SPHERE_COLIMITS: dict[int, Colimit] = {}


def _sphere_colimit(k: int) -> Colimit:
    """The defining pushout of S^k = D_k u_{S^{k-1}} D_k, for k >= 0."""
    if k not in _SPHERE_COLIMITS:
        jk = boundary_inclusion(k)
        _, _, _, co = pushout(jk, jk)
        _SPHERE_COLIMITS[k] = co
    return _SPHERE_COLIMITS[k]


def sphere(k: int) -> FinGlobSet:
    if k < -1:
        raise DomainError("sphere index must be >= -1")
    if k == -1:
        return EMPTY
    return _sphere_colimit(k).obj


def sphere_inclusions(k: int):
    """The two pushout injections D_k -> S^k."""
    co = _sphere_colimit(k)
    return co.legs["Y"], co.legs["Z"]


def boundary_inclusion(k: int) -> GlobMap:
    """j_k : S^{k-1} -> D_k, induced by the globe source and target maps."""
    if k == 0:
        return GlobMap(EMPTY, globe_set(0), [])
    co = _sphere_colimit(k - 1)
    glue = (
        GlobMap(EMPTY, globe_set(k), [])
        if k == 1
        else boundary_inclusion(k - 1).then(globe_src_map(k - 1))
    )
    return co.mediate(
        {"X": glue, "Y": globe_src_map(k - 1), "Z": globe_tgt_map(k - 1)}
    )


def sphere_collapse(k: int) -> GlobMap:
    """(1, 1) : S^k -> D_k, folding the two parallel top cells together."""
    co = _sphere_colimit(k)
    ident = identity_map(globe_set(k))
    glue = (
        GlobMap(EMPTY, globe_set(k), [])
        if k == 0
        else boundary_inclusion(k)
    )
    return co.mediate({"X": glue, "Y": ident, "Z": ident})


def canonical_globe_family(n: int):
    """The coglobular family D_0 -> D_1 -> ... -> D_n with both structure maps."""
    spaces = [globe_set(k) for k in range(n + 1)]
    sigmas = [globe_src_map(k) for k in range(n)]
    taus = [globe_tgt_map(k) for k in range(n)]
    return spaces, sigmas, taus


def latching(family, m: int) -> FinGlobSet:
    """Latching object at m of a coglobular family.

    The indexing slice has one object per map j -> m in the globe category
    (two for each j < m, named by the bottom letter), and one morphism
    between consecutive stages for each matching bottom letter.
    """
    spaces, sigmas, taus = family
    if m > len(spaces) - 1 + 1:
        raise DomainError("latching index beyond family truncation")
    verts = {}
    for j in range(m):
        for eps in ("s", "t"):
            verts[(j, eps)] = spaces[j]
    edges = []
    for j in range(m - 1):
        for eps in ("s", "t"):
            step = sigmas[j] if eps == "s" else taus[j]
            for eps2 in ("s", "t"):
                edges.append(((j, eps), (j + 1, eps2), step))
    if not verts:
        return EMPTY
    return colimit(verts, edges).obj


# ---------------------------------------------------------------------------
# the (bij_m, ff_m) factorization system

def pad_to(X: FinGlobSet, n: int) -> FinGlobSet:
    """The same globular set viewed at a higher truncation (empty on top)."""
    if n < X.n:
        raise DomainError("cannot pad downwards")
    extra = n - X.n
    return FinGlobSet(
        n,
        list(X.cells) + [()] * extra,
        list(X.src) + [{}] * extra,
        list(X.tgt) + [{}] * extra,
    )


def pad_map(f: GlobMap, n: int) -> GlobMap:
    return GlobMap(pad_to(f.dom, n), pad_to(f.cod, n), list(f.maps) + [{}] * (n - f.dom.n))


def is_m_bijective(f: GlobMap, m: int) -> bool:
    for k in range(m + 1):
        if k > f.cod.n:
            break
        if k > f.dom.n:
            if f.cod.cells[k]:
                return False
            continue
        if not f.is_bijective_at(k):
            return False
    return True


def is_m_fully_faithful(f: GlobMap, m: int) -> bool:
    """Cartesian boundary squares above m.

    The pullback ranges over parallel pairs: with the bare product reading
    no factorization would exist at all (a non-parallel pair with equal
    images would demand a cell gluing them, breaking globularity).
    """
    X, Y = f.dom, f.cod

    def xs_at(k):
        return X.cells[k] if k <= X.n else ()

    for i in range(m, Y.n):
        seen = {}
        for c in xs_at(i + 1):
            key = (f.maps[i + 1][c], X.src[i + 1][c], X.tgt[i + 1][c])
            if key in seen:
                return False
            seen[key] = c
        for y in Y.cells[i + 1]:
            for xs in xs_at(i):
                for xt in xs_at(i):
                    if i >= 1 and (
                        X.src[i][xs] != X.src[i][xt] or X.tgt[i][xs] != X.tgt[i][xt]
                    ):
                        continue
                    if f.maps[i][xs] == Y.src[i + 1][y] and f.maps[i][xt] == Y.tgt[i + 1][y]:
                        if (y, xs, xt) not in seen:
                            return False
    return True


def classify(f: GlobMap, m: int):
    return is_m_bijective(f, m), is_m_fully_faithful(f, m)


def factor_bij_ff(f: GlobMap, m: int):
    """Factor f = g . h with h m-bijective and g m-fully faithful.

    The middle object keeps the domain's cells through dimension m and is
    the iterated pullback above it.
    """
    if f.dom.n < f.cod.n:
        f = pad_map(f, f.cod.n)
    X, Y = f.dom, f.cod
    n = X.n
    cells = []
    src = [dict() for _ in range(n + 1)]
    tgt = [dict() for _ in range(n + 1)]
    h_maps = []
    g_maps = []
    for k in range(min(m, n) + 1):
        cells.append(list(X.cells[k]))
        if k >= 1:
            src[k] = dict(X.src[k])
            tgt[k] = dict(X.tgt[k])
        h_maps.append({c: c for c in X.cells[k]})
        g_maps.append({c: f.maps[k][c] for c in X.cells[k]})
    for k in range(m + 1, n + 1):
        layer = []
        g_maps.append({})
        for y in Y.cells[k]:
            for ws in cells[k - 1]:
                for wt in cells[k - 1]:
                    if g_maps[k - 1][ws] == Y.src[k][y] and g_maps[k - 1][wt] == Y.tgt[k][y]:
                        if k >= 2 and (src[k - 1].get(ws, None) != src[k - 1].get(wt, None)
                                       or tgt[k - 1].get(ws, None) != tgt[k - 1].get(wt, None)):
                            continue
                        w = ("pb", y, ws, wt)
                        layer.append(w)
                        src[k][w] = ws
                        tgt[k][w] = wt
                        g_maps[k][w] = y
        cells.append(layer)
        h_maps.append({})
        for c in X.cells[k]:
            h_maps[k][c] = ("pb", f.maps[k][c], h_maps[k - 1][X.src[k][c]], h_maps[k - 1][X.tgt[k][c]])
    W = FinGlobSet(n, cells, src, tgt)
    h = GlobMap(X, W, h_maps)
    g = GlobMap(W, Y, g_maps)
    return h, g


def find_lifts(i: GlobMap, p: GlobMap, top: GlobMap, bottom: GlobMap):
    """All diagonals d with d.i = top and p.d = bottom.

    Exhaustive search over dimensionwise assignments, pruned by the square
    and by src/tgt commutation with the layers already placed.
    """
    A, B = i.dom, i.cod
    X = p.dom
    if top.dom != A or bottom.dom != B or top.cod != X or bottom.cod != p.cod:
        raise TypingError("square does not type-check")
    for k in range(A.n + 1):
        for c in A.cells[k]:
            if p.maps[k][top.maps[k][c]] != bottom.maps[k][i.maps[k][c]]:
                raise TypingError("square does not commute")

    results = []

    def go(k, layers):
        if k > B.n:
            results.append(GlobMap(B, X, [dict(m) for m in layers]))
            return
        forced = {}
        if k <= A.n:
            for c in A.cells[k]:
                b, v = i.maps[k][c], top.maps[k][c]
                if forced.setdefault(b, v) != v:
                    return
        options = []
        for b in B.cells[k]:
            cands = []
            for x in X.cells[k] if k <= X.n else ():
                if p.maps[k][x] != bottom.maps[k][b]:
                    continue
                if b in forced and forced[b] != x:
                    continue
                if k >= 1 and (
                    X.src[k][x] != layers[k - 1][B.src[k][b]]
                    or X.tgt[k][x] != layers[k - 1][B.tgt[k][b]]
                ):
                    continue
                cands.append(x)
            options.append((b, cands))

        def assign(idx, layer):
            if idx == len(options):
                go(k + 1, layers + [layer])
                return
            b, cands = options[idx]
            for x in cands:
                assign(idx + 1, {**layer, b: x})

        assign(0, {})

    go(0, [])
    return results


def check_orthogonal(i: GlobMap, p: GlobMap, top: GlobMap, bottom: GlobMap) -> GlobMap:
    """The unique filler of a (bij_m, ff_m) lifting square."""
    lifts = find_lifts(i, p, top, bottom)
    if not lifts:
        raise DomainError("no filler: orthogonality violated")
    if len(lifts) > 1:
        raise DomainError("filler is not unique: orthogonality violated")
    return lifts[0]


# ---------------------------------------------------------------------------
# loop space

def loopspace(X: FinGlobSet, a, b) -> FinGlobSet:
    if X.n < 0 or a not in set(X.cells[0]) or b not in set(X.cells[0]):
        raise DomainError("loopspace needs two 0-cells of X")
    n = X.n - 1
    cells = [[] for _ in range(n + 1)]
    for k in range(n + 1):
        for x in X.cells[k + 1]:
            if X.iterated(k + 1, x, k + 1, "s") == a and X.iterated(k + 1, x, k + 1, "t") == b:
                cells[k].append(x)
    keep = [set(c) for c in cells]
    src = [dict() for _ in range(n + 1)]
    tgt = [dict() for _ in range(n + 1)]
    for k in range(1, n + 1):
        for x in cells[k]:
            s, t = X.src[k + 1][x], X.tgt[k + 1][x]
            if s not in keep[k - 1] or t not in keep[k - 1]:
                raise TypingError("loopspace boundaries escaped the fiber")
            src[k][x] = s
            tgt[k][x] = t
    return FinGlobSet(n, cells, src, tgt)


# ---------------------------------------------------------------------------
# isomorphism search (used by sphere/latching comparisons)

def find_iso(X: FinGlobSet, Y: FinGlobSet):
    """A boundary-preserving dimensionwise bijection, or None."""
    if X.n != Y.n or X.counts() != Y.counts():
        return None

    assignment = [dict() for _ in range(X.n + 1)]

    def extend(k):
        if k > X.n:
            return True
        xs = list(X.cells[k])

        def place(idx, used):
            if idx == len(xs):
                return extend(k + 1)
            x = xs[idx]
            for y in Y.cells[k]:
                if y in used:
                    continue
                if k >= 1:
                    if Y.src[k][y] != assignment[k - 1][X.src[k][x]]:
                        continue
                    if Y.tgt[k][y] != assignment[k - 1][X.tgt[k][x]]:
                        continue
                assignment[k][x] = y
                if place(idx + 1, used | {y}):
                    return True
                del assignment[k][x]
            return False

        return place(0, set())

    if extend(0):
        return GlobMap(X, Y, assignment)
    return None


# ---------------------------------------------------------------------------
# locally posetal bicategory checklist on a 2-truncated globular set

def chi_check(X: FinGlobSet, structure: dict) -> list:
    """Check the seven structure items for the inhabitation bicategory of X.

    ``structure`` provides the choice tables: ``comp1`` maps composable
    pairs (f, g) [f then g] to a 1-cell, ``id1`` maps 0-cells to 1-cells.
    Item (2), (3) and (5) are inhabitation conditions (at most one 2-cell
    between parallel 1-cells); items (6) and (7) are nonemptiness of the
    relevant 2-cell sets.
    """
    if X.n != 2:
        raise TypingError("chi_check needs a 2-truncated globular set")
    ones = set(X.cells[1])
    zeros = set(X.cells[0])
    comp1 = dict(structure.get("comp1", {}))
    id1 = dict(structure.get("id1", {}))
    for (f, g), h in comp1.items():
        if f not in ones or g not in ones or h not in ones:
            raise TypingError(f"comp1 entry {(f, g, h)!r} mentions unknown 1-cells")
    for a, f in id1.items():
        if a not in zeros or f not in ones:
            raise TypingError(f"id1 entry {(a, f)!r} is ill-typed")

    def two_cell(f, g):
        return any(
            X.src[2][c] == f and X.tgt[2][c] == g for c in X.cells[2]
        )

    report = []

    def item(number, ok, witnesses, detail):
        report.append({"item": number, "ok": ok, "witnesses": witnesses, "detail": detail})

    # (1) composition of 1-cells
    bad = []
    for f in X.cells[1]:
        for g in X.cells[1]:
            if X.tgt[1][f] != X.src[1][g]:
                continue
            h = comp1.get((f, g))
            if h is None:
                bad.append((f, g, "missing"))
            elif X.src[1][h] != X.src[1][f] or X.tgt[1][h] != X.tgt[1][g]:
                bad.append((f, g, "bad boundary"))
    item(1, not bad, bad, "composites for all composable pairs")

    # (2) vertical composition of 2-cells (transitivity of inhabitation)
    bad = []
    rel = set()
    for c in X.cells[2]:
        rel.add((X.src[2][c], X.tgt[2][c]))
    for (f, g) in rel:
        for (g2, h) in rel:
            if g2 == g and (f, h) not in rel:
                bad.append((f, g, h))
    item(2, not bad, bad, "2-cell inhabitation closed under vertical pasting")

    # (3) whiskerings on both sides
    bad = []
    for (f, g) in rel:
        for h in X.cells[1]:
            if X.src[1][h] == X.tgt[1][f]:
                fh, gh = comp1.get((f, h)), comp1.get((g, h))
                if fh is not None and gh is not None and (fh, gh) not in rel:
                    bad.append(("right", f, g, h))
            if X.tgt[1][h] == X.src[1][f]:
                hf, hg = comp1.get((h, f)), comp1.get((h, g))
                if hf is not None and hg is not None and (hf, hg) not in rel:
                    bad.append(("left", f, g, h))
    item(3, not bad, bad, "whiskered 2-cells exist")

    # (4) identity 1-cells
    bad = []
    for a in X.cells[0]:
        f = id1.get(a)
        if f is None:
            bad.append((a, "missing"))
        elif X.src[1][f] != a or X.tgt[1][f] != a:
            bad.append((a, "not an endo-cell"))
    item(4, not bad, bad, "identity 1-cells chosen for every object")

    # (5) identity 2-cells
    bad = [f for f in X.cells[1] if (f, f) not in rel]
    item(5, not bad, bad, "reflexive 2-cells on every 1-cell")

    # (6) unit constraints (nonemptiness)
    bad = []
    for f in X.cells[1]:
        a, b = X.src[1][f], X.tgt[1][f]
        if a in id1 and (id1[a], f) in comp1:
            c = comp1[(id1[a], f)]
            for pair in ((c, f), (f, c)):
                if pair not in rel:
                    bad.append(("pre-unit", f, pair))
        if b in id1 and (f, id1[b]) in comp1:
            c = comp1[(f, id1[b])]
            for pair in ((c, f), (f, c)):
                if pair not in rel:
                    bad.append(("post-unit", f, pair))
    item(6, not bad, bad, "unit constraint 2-cells inhabit both directions")

    # (7) associators (nonemptiness)
    bad = []
    for f in X.cells[1]:
        for g in X.cells[1]:
            if X.tgt[1][f] != X.src[1][g]:
                continue
            for h in X.cells[1]:
                if X.tgt[1][g] != X.src[1][h]:
                    continue
                fg = comp1.get((f, g))
                gh = comp1.get((g, h))
                if fg is None or gh is None:
                    continue
                left = comp1.get((fg, h))
                right = comp1.get((f, gh))
                if left is None or right is None:
                    continue
                if (left, right) not in rel or (right, left) not in rel:
                    bad.append((f, g, h))
    item(7, not bad, bad, "associator 2-cells inhabit both directions")
    return report


# ---------------------------------------------------------------------------
# seeded random instances for the property suites

def random_finglobset(rng, n=2, max_cells=4) -> FinGlobSet:
    cells = [[("r", 0, i) for i in range(rng.randint(1, max_cells))]]
    src = [dict()]
    tgt = [dict()]
    for k in range(1, n + 1):
        layer = []
        src.append({})
        tgt.append({})
        # group (k-1)-cells by boundary so globularity can be respected
        groups = {}
        for c in cells[k - 1]:
            key = (src[k - 1].get(c), tgt[k - 1].get(c)) if k >= 2 else None
            groups.setdefault(key, []).append(c)
        wanted = rng.randint(0, max_cells) if groups else 0
        for i in range(wanted):
            group = groups[rng.choice(sorted(groups, key=repr))]
            c = ("r", k, i)
            layer.append(c)
            src[k][c] = rng.choice(group)
            tgt[k][c] = rng.choice(group)
        cells.append(layer)
    return FinGlobSet(n, cells, src, tgt)


def random_globmap(rng, X: FinGlobSet, Y: FinGlobSet, tries=50):
    for _ in range(tries):
        maps = []
        ok = True
        for k in range(X.n + 1):
            maps.append({})
            for c in X.cells[k]:
                if k == 0:
                    cands = list(Y.cells[0])
                else:
                    cands = [
                        y
                        for y in Y.cells[k]
                        if Y.src[k][y] == maps[k - 1][X.src[k][c]]
                        and Y.tgt[k][y] == maps[k - 1][X.tgt[k][c]]
                    ]
                if not cands:
                    ok = False
                    break
                maps[k][c] = rng.choice(cands)
            if not ok:
                break
        if ok:
            return GlobMap(X, Y, maps)
    return None
