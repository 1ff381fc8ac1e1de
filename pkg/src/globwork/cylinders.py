"""Cylinder presentations and the ordered stack over tree extensions.

The cylinder on a globe is presented by two globe copies, two connecting
1-cells, one seam cell per level and a top filler.  The cylinder on a
general sum is the colimit over the one-vertex extensions of its tree; each
extension contributes a structural inclusion, and for a homogeneous
operation the extensions index a stack of squares that composes vertically
from the whiskered top to the whiskered bottom.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from .errors import DomainError, TypingError
from .trees import (
    LEAF,
    ExtendedTree,
    Tree,
    boundary as tree_boundary,
    dim as tree_dim,
    globe,
    insert_at,
    linearization,
)
from . import trees as tree_mod
from .computads import Computad, FCell, fcomp, funit, whisker_l, whisker_r
from .theta import ThetaMap, compose, hg_factorize, is_homogeneous, render, sigma_theta, tau_theta
from .theory import TheoryPresentation


def _require_systems(th: TheoryPresentation, k: int):
    for j in range(1, max(k, 1) + 1):
        if f"c{j}" not in th.chosen:
            raise DomainError("cylinder presentations need chosen systems")


# ---------------------------------------------------------------------------
# cylinders on globes

def _bd_to(cell: FCell, d: int, which: str) -> FCell:
    while cell.dim > d:
        cell = cell.src if which == "s" else cell.tgt
    return cell


def _add_globe_pair(P: Computad, name: str, k: int):
    """A free k-globe worth of generators, returning the top one."""
    lo_s = P.add(f"{name}0s", 0)
    lo_t = P.add(f"{name}0t", 0)
    src, tgt = lo_s, lo_t
    for d in range(1, k):
        src2 = P.add(f"{name}{d}s", d, src, tgt)
        tgt2 = P.add(f"{name}{d}t", d, src, tgt)
        src, tgt = src2, tgt2
    top = P.add(f"{name}{k}", k, src, tgt) if k >= 1 else None
    return top


def cyl_presentation(k: int, th: TheoryPresentation) -> Computad:
    """The finite computad corepresenting k-cylinders, for k <= 3."""
    if k < 0 or k > 3:
        raise DomainError("cylinder presentations are built for k <= 3")
    _require_systems(th, k)
    P = Computad(f"cyl(D{k})")
    if k == 0:
        a = P.add("a", 0)
        b = P.add("b", 0)
        P.designated["iota0"] = a
        P.designated["iota1"] = b
        P.designated["filler"] = P.add("C", 1, a, b)
        return P
    A = _add_globe_pair(P, "A", k)
    B = _add_globe_pair(P, "B", k)
    f = P.add("f", 1, P["A0s"], P["B0s"])
    g = P.add("g", 1, P["A0t"], P["B0t"])
    top = whisker_r(A, g)
    bottom = whisker_l(f, B)
    # connecting seams enter bottom-up in dimension, each whiskering the
    # remaining pair one homotopy level deeper
    for level in range(2, k + 1):
        e_s = P.add(
            f"E{level}s", level, _bd_to(top, level - 1, "s"), _bd_to(bottom, level - 1, "s")
        )
        e_t = P.add(
            f"E{level}t", level, _bd_to(top, level - 1, "t"), _bd_to(bottom, level - 1, "t")
        )
        top = whisker_r(top, e_t)
        bottom = whisker_l(e_s, bottom)
    P.designated["filler"] = P.add("C", top.dim + 1, top, bottom)
    P.designated["iota0"] = A
    P.designated["iota1"] = B
    P.typecheck()
    return P


def boundary_cyl(k: int, th: TheoryPresentation):
    """The boundary presentation of the k-cylinder with its gluing data.

    The presentation is the pushout of the cylinder on the (k-1)-sphere
    with two free k-cells: concretely, all generators of cyl(D_k) except
    the top filler.  Returned with the itemized boundary data and the
    inclusion (which adds exactly the filler).
    """
    if k < 1:
        raise DomainError("the 0-cylinder has no boundary presentation")
    full = cyl_presentation(k, th)
    P = Computad(f"bdcyl(D{k})")
    filler_name = full.designated["filler"].name
    for name in full.order:
        if name == filler_name:
            continue
        c = full.gens[name]
        P.gens[name] = c
        P.order.append(name)
    P.designated["iota0"] = full.designated["iota0"]
    P.designated["iota1"] = full.designated["iota1"]
    data = {
        "parallel_cylinders": [
            sorted(n for n in P.order if n.startswith("E") and n.endswith("s"))
            + ["f", "g"]
            + sorted(n for n in P.order if n.endswith("s") and not n.startswith("E")),
            sorted(n for n in P.order if n.startswith("E") and n.endswith("t"))
            + ["f", "g"]
            + sorted(n for n in P.order if n.endswith("t") and not n.startswith("E")),
        ],
        "top_cells": [full.designated["iota0"].name, full.designated["iota1"].name],
        "inclusion_adds": [filler_name],
    }
    return P, data


def degenerate_cyl(k: int, p, q, th: TheoryPresentation) -> Computad:
    """Cylinder presentation with collapsed iterated source/target sides.

    ``p`` (resp. ``q``) is the dimension at which the iterated source
    (resp. target) cylinder collapses; ``None`` means no collapse.
    """
    if k < 1 or k > 2:
        raise DomainError("degenerate cylinders are built for k in {1, 2}")
    for v in (p, q):
        if v is not None and not (0 <= v < k):
            raise DomainError("collapse index out of range")
    _require_systems(th, k)
    P = Computad(f"cyl^{p}_{q}(D{k})")
    f_unit = p in (0, 1) or q == 1
    g_unit = q in (0, 1) or p == 1
    merge_src = p == 1
    merge_tgt = q == 1

    a = P.add("a", 0)
    b = P.add("b", 0)
    c = a if f_unit else P.add("c", 0)
    d = b if g_unit else P.add("d", 0)
    if k == 1:
        alpha = P.add("alpha", 1, a, b)
        beta = P.add("beta", 1, c, d)
        f = funit(a) if f_unit else P.add("f", 1, a, c)
        g = funit(b) if g_unit else P.add("g", 1, b, d)
        P.designated["filler"] = P.add(
            "C", 2, fcomp([alpha, g]) if not g_unit else alpha,
            fcomp([f, beta]) if not f_unit else beta,
        )
        P.designated["iota0"] = alpha
        P.designated["iota1"] = beta
        P.typecheck()
        return P
    # k == 2
    sA = P.add("sA", 1, a, b)
    tA = P.add("tA", 1, a, b)
    sB = sA if merge_src else P.add("sB", 1, c, d)
    tB = tA if merge_tgt else P.add("tB", 1, c, d)
    A = P.add("A", 2, sA, tA)
    B = P.add("B", 2, sB, tB)
    f = funit(a) if f_unit else P.add("f", 1, a, c)
    g = funit(b) if g_unit else P.add("g", 1, b, d)
    top = whisker_r(A, g) if not g_unit else A
    bottom = whisker_l(f, B) if not f_unit else B
    if merge_src:
        e_s = funit(top.src)
    else:
        e_s = P.add("Es", 2, top.src, bottom.src)
    if merge_tgt:
        e_t = funit(top.tgt)
    else:
        e_t = P.add("Et", 2, top.tgt, bottom.tgt)
    P.designated["filler"] = P.add("C", 3, fcomp([top, e_t]), fcomp([e_s, bottom]))
    P.designated["iota0"] = A
    P.designated["iota1"] = B
    P.typecheck()
    return P


# ---------------------------------------------------------------------------
# cylinders on globular sums, with the structural inclusions

@dataclass
class SumCylinder:
    tree: Tree
    presentation: Computad
    atoms: dict
    inclusions: list  # one per linearization element: dict cell -> FCell


def _block_shapes(A: Tree):
    """Per block: 'edge' for a line, or the cell count of a suspension."""
    shapes = []
    for child in A.children:
        if child.is_leaf:
            shapes.append(("edge", 0))
        else:
            shapes.append(("susp", child.arity))
    return shapes


def cyl_glob_sum(A: Tree, th: TheoryPresentation) -> SumCylinder:
    """Present cyl(A) for dim(A) <= 2 with one inclusion per tree extension."""
    if tree_dim(A) > 2:
        raise DomainError("sum cylinders are implemented through dimension 2")
    _require_systems(th, max(tree_dim(A), 1))
    P = Computad(f"cyl({A})")
    p = A.arity
    atoms = {}
    for side in ("u", "v"):
        for j in range(p + 1):
            atoms[(side, j)] = P.add(f"{side}{j}", 0)
    for j in range(p + 1):
        atoms[("c", j)] = P.add(f"c{j}", 1, atoms[("u", j)], atoms[("v", j)])
    shapes = _block_shapes(A)
    for j, (kind, m) in enumerate(shapes, start=1):
        lo = {("u", j): atoms[("u", j - 1)], ("v", j): atoms[("v", j - 1)]}
        hi = {("u", j): atoms[("u", j)], ("v", j): atoms[("v", j)]}
        if kind == "edge":
            for side in ("u", "v"):
                atoms[(side, j, "e", 0)] = P.add(
                    f"{side}e{j}", 1, lo[(side, j)], hi[(side, j)]
                )
            atoms[("seam", j, 0)] = P.add(
                f"s{j}_0",
                2,
                fcomp([atoms[("u", j, "e", 0)], atoms[("c", j)]]),
                fcomp([atoms[("c", j - 1)], atoms[("v", j, "e", 0)]]),
            )
            continue
        for side in ("u", "v"):
            for level in range(m + 1):
                atoms[(side, j, "e", level)] = P.add(
                    f"{side}e{j}_{level}", 1, lo[(side, j)], hi[(side, j)]
                )
            for r in range(1, m + 1):
                atoms[(side, j, "x", r)] = P.add(
                    f"{side}x{j}_{r}",
                    2,
                    atoms[(side, j, "e", r - 1)],
                    atoms[(side, j, "e", r)],
                )
        for level in range(m + 1):
            atoms[("seam", j, level)] = P.add(
                f"s{j}_{level}",
                2,
                fcomp([atoms[("u", j, "e", level)], atoms[("c", j)]]),
                fcomp([atoms[("c", j - 1)], atoms[("v", j, "e", level)]]),
            )
        for r in range(1, m + 1):
            atoms[("fill", j, r)] = P.add(
                f"om{j}_{r}",
                3,
                fcomp(
                    [whisker_r(atoms[("u", j, "x", r)], atoms[("c", j)]), atoms[("seam", j, r)]]
                ),
                fcomp(
                    [atoms[("seam", j, r - 1)], whisker_l(atoms[("c", j - 1)], atoms[("v", j, "x", r)])]
                ),
            )
    P.typecheck()
    inclusions = [
        _structural_inclusion(A, e, atoms) for e in linearization(A)
    ]
    for incl in inclusions:
        _verify_inclusion(incl)
    return SumCylinder(A, P, atoms, inclusions)


def _cells_of(t: Tree):
    out = []
    for path in t.nodes():
        node = t.subtree(path)
        for gap in range(node.arity + 1):
            out.append((path, gap))
    return out


def _copy_atom(atoms, side, block, path_rest, gap):
    """An untouched cell of a non-seam block (coordinates local to it)."""
    if not path_rest:
        return atoms[(side, block, "e", gap)]
    return atoms[(side, block, "x", path_rest[0] + 1)]


def _structural_inclusion(A: Tree, ext: ExtendedTree, atoms) -> dict:
    """Map the cells of the extension's scheme into the cylinder presentation.

    Cells left of the seam read off the top copy, cells right of it read
    off the bottom copy (whiskered through the side below the seam); the
    new vertex lands on the side, seam or filler generator its sector
    points at.
    """
    B = ext.result
    sector = ext.sector
    mapping = {}
    if sector.path == ():
        s = sector.gap
        for (path, gap) in _cells_of(B):
            if path == ():
                side = "u" if gap <= s else "v"
                mapping[(path, gap)] = atoms[(side, gap if gap <= s else gap - 1)]
            elif path == (s,):
                mapping[(path, gap)] = atoms[("c", s)]
            else:
                i = path[0] if path[0] < s else path[0] - 1
                side = "u" if i < s else "v"
                mapping[(path, gap)] = _copy_atom(atoms, side, i + 1, path[1:], gap)
        return {"extension": ext, "scheme": B, "mapping": mapping}

    i = sector.path[0]
    j = i + 1
    cl, cr = atoms[("c", j - 1)], atoms[("c", j)]
    for (path, gap) in _cells_of(B):
        if path == ():
            side = "u" if gap <= i else "v"
            mapping[(path, gap)] = atoms[(side, gap)]
            continue
        if path[0] != i:
            side = "u" if path[0] < i else "v"
            mapping[(path, gap)] = _copy_atom(atoms, side, path[0] + 1, path[1:], gap)
            continue
        mapping[(path, gap)] = _seam_block_image(ext, atoms, j, cl, cr, path, gap)
    return {"extension": ext, "scheme": B, "mapping": mapping}


def _seam_block_image(ext, atoms, j, cl, cr, path, gap) -> FCell:
    """Cells of the seam block, in the extended tree's own coordinates."""
    sector = ext.sector
    klass = ext.klass
    if klass == tree_mod.H2_OVER_EDGE:
        if len(path) == 1:
            if gap == 0:
                return fcomp([atoms[("u", j, "e", 0)], cr])
            return fcomp([cl, atoms[("v", j, "e", 0)]])
        return atoms[("seam", j, 0)]

    if klass in (tree_mod.H2_MAX, tree_mod.H2_MIN, tree_mod.H2_MID):
        s = sector.gap
        if len(path) == 1:
            if gap <= s:
                return fcomp([atoms[("u", j, "e", gap)], cr])
            return fcomp([cl, atoms[("v", j, "e", gap - 1)]])
        r = path[1] + 1
        if r <= s:
            return whisker_r(atoms[("u", j, "x", r)], cr)
        if r == s + 1:
            return atoms[("seam", j, s)]
        return whisker_l(cl, atoms[("v", j, "x", r - 1)])

    # H3 over the r-th cell of the block
    r = sector.path[1] + 1
    if len(path) == 1:
        if gap <= r - 1:
            return fcomp([atoms[("u", j, "e", gap)], cr])
        return fcomp([cl, atoms[("v", j, "e", gap)]])
    if len(path) == 2:
        t = path[1] + 1
        if t < r:
            return whisker_r(atoms[("u", j, "x", t)], cr)
        if t > r:
            return whisker_l(cl, atoms[("v", j, "x", t)])
        fill = atoms[("fill", j, r)]
        return fill.src if gap == 0 else fill.tgt
    return atoms[("fill", j, r)]


def _verify_inclusion(incl):
    """A structural inclusion must be a map of schemes into formal cells."""
    B = incl["scheme"]
    mapping = incl["mapping"]
    for (path, gap), cell in mapping.items():
        if len(path) == 0:
            continue
        src_cell = mapping[(path[:-1], path[-1])]
        tgt_cell = mapping[(path[:-1], path[-1] + 1)]
        if cell.src != src_cell or cell.tgt != tgt_cell:
            raise TypingError(
                f"structural inclusion breaks at {(path, gap)}: "
                f"{cell.src} vs {src_cell} / {cell.tgt} vs {tgt_cell}"
            )


# ---------------------------------------------------------------------------
# the stack of squares over the ordered tree extensions

@dataclass
class StackSquare:
    index: int
    element: ExtendedTree
    case: str
    top_state: tuple
    bottom_state: tuple
    top: str
    bottom: str
    left: dict | None
    right: dict | None
    source_degenerate: bool
    target_degenerate: bool
    p: int | None
    q: int | None

    def to_json(self):
        return {
            "index": self.index,
            "case": self.case,
            "sector": {"path": list(self.element.sector.path), "gap": self.element.sector.gap},
            "top": self.top,
            "bottom": self.bottom,
            "left": self.left,
            "right": self.right,
            "degenerate": [self.source_degenerate, self.target_degenerate],
        }


def _side_name(q: int, p: int) -> str:
    if q == 0:
        return "C_s"
    if q == p:
        return "C_t"
    return f"c{q}"


def _blocks(A: Tree):
    return A.arity, _block_shapes(A)


def _mixed_args(state, A: Tree) -> str:
    p, _ = _blocks(A)
    kind = state[0]
    j = state[1]
    parts = []
    if j > 1:
        parts.append(f"U_<{j}")
    if kind == "btau":
        parts.append(f"{_side_name(j, p)}*U_{j}")
    elif kind == "bsig":
        parts.append(f"V_{j}*{_side_name(j - 1, p)}")
    else:
        r = state[2]
        parts.append(f"{_side_name(j, p)}*U_{j}^<={r}, a_{j}.{r}, V_{j}^>{r}*{_side_name(j - 1, p)}")
    if j < p:
        parts.append(f"V_>{j}")
    return ", ".join(parts)


def render_edge(state, A: Tree) -> str:
    if state[0] == "pre":
        return "C_t*rho(U)"
    if state[0] == "post":
        return "rho(V)*C_s"
    return f"rho({_mixed_args(state, A)})"


def _corner(state, A: Tree, eps: str) -> str:
    """The 1-cell boundary of an edge, as a rendered restriction."""
    p, _ = _blocks(A)
    b = "s" if eps == "sigma" else "t"
    if state[0] == "pre":
        return f"C_t*rho{b}(d{b}U)"
    if state[0] == "post":
        return f"rho{b}(d{b}V)*C_s"
    j = state[1]
    if state[0] == "btau":
        seam = f"{_side_name(j, p)}*d{b}U_{j}"
    elif state[0] == "bsig":
        seam = f"d{b}V_{j}*{_side_name(j - 1, p)}"
    else:
        seam = (
            f"{_side_name(j, p)}*d{b}U_{j}"
            if eps == "sigma"
            else f"d{b}V_{j}*{_side_name(j - 1, p)}"
        )
    parts = []
    if j > 1:
        parts.append(f"d{b}U_<{j}")
    parts.append(seam)
    if j < p:
        parts.append(f"d{b}V_>{j}")
    return f"rho{b}(" + ", ".join(parts) + ")"


def boundary_plus(A: Tree, sector) -> Tree:
    """The boundary tree with the same sector re-applied.

    If the sector's parent was deleted (it sat at maximal height), the new
    vertex re-attaches to the deepest surviving ancestor; gaps are clamped
    to the surviving arity.
    """
    d = tree_dim(A)
    bt = tree_boundary(A)
    path = sector.path
    while True:
        node = bt
        ok = True
        for i in path:
            if i >= node.arity:
                ok = False
                break
            node = node.children[i]
        if ok:
            gap = min(sector.gap, node.arity)
            return insert_at(bt, tree_mod.Sector(path, gap))
        path = path[:-1]


def _rho_star(ρ: ThetaMap, A: Tree, ext: ExtendedTree, eps: str, args: str) -> dict:
    k = tree_dim(ρ.source)
    eps_map = sigma_theta(k - 1) if eps == "sigma" else tau_theta(k - 1)
    rho_eps = hg_factorize(compose(eps_map, ρ)).homogeneous
    plus = boundary_plus(A, ext.sector)
    return {
        "kind": "rho_star",
        "eps": eps,
        "args": args,
        "plus_tree": str(plus),
        "rho_eps": render(rho_eps),
        "boundary": f"(d_sigma . rho_{eps[0]}, d_tau . rho_{eps[0]})",
    }


def _square_states(ext: ExtendedTree, p: int):
    """Top and bottom edge states of the square attached to one extension."""
    klass = ext.klass
    sector = ext.sector
    if klass == tree_mod.H1_RIGHT:
        return ("pre",), (("btau", p) if p > 0 else ("post",))
    if klass == tree_mod.H1_LEFT:
        return ("bsig", 1), ("post",)
    if klass == tree_mod.H1_MID:
        q = sector.gap
        return ("bsig", q + 1), ("btau", q)
    j = sector.path[0] + 1
    if klass == tree_mod.H2_OVER_EDGE:
        return ("btau", j), ("bsig", j)
    if klass == tree_mod.H2_MAX:
        return ("btau", j), ("mid", j, sector.gap)
    if klass == tree_mod.H2_MIN:
        return ("mid", j, 0), ("bsig", j)
    if klass == tree_mod.H2_MID:
        return ("mid", j, sector.gap), ("mid", j, sector.gap)
    # H3 over the r-th cell
    r = sector.path[1] + 1
    return ("mid", j, r), ("mid", j, r - 1)


def stack(ρ: ThetaMap, th: TheoryPresentation):
    """The ordered squares interpreting a homogeneous operation on cylinders."""
    k = tree_dim(ρ.source)
    if k not in (1, 2):
        raise DomainError("stacks are built for operations of dimension 1 and 2")
    if ρ.source != globe(k):
        raise DomainError("stacks interpret globe-sourced operations")
    if not is_homogeneous(ρ):
        raise DomainError("stacks interpret homogeneous operations only")
    A = ρ.target
    _require_systems(th, k)
    p = A.arity
    squares = []
    for idx, ext in enumerate(linearization(A)):
        top_state, bottom_state = _square_states(ext, p)
        top = render_edge(top_state, A)
        bottom = render_edge(bottom_state, A)
        left = right = None
        src_degen = tgt_degen = False
        if k >= 2:
            s_top, s_bot = _corner(top_state, A, "sigma"), _corner(bottom_state, A, "sigma")
            t_top, t_bot = _corner(top_state, A, "tau"), _corner(bottom_state, A, "tau")
            src_degen = s_top == s_bot and ext.klass in (
                tree_mod.H2_MAX,
                tree_mod.H2_MID,
                tree_mod.H3,
            )
            tgt_degen = t_top == t_bot and ext.klass in (
                tree_mod.H2_MIN,
                tree_mod.H2_MID,
                tree_mod.H3,
            )
            if (s_top == s_bot) != (
                ext.klass in (tree_mod.H2_MAX, tree_mod.H2_MID, tree_mod.H3)
            ):
                raise TypingError(f"source corner mismatch at square {idx}")
            if (t_top == t_bot) != (
                ext.klass in (tree_mod.H2_MIN, tree_mod.H2_MID, tree_mod.H3)
            ):
                raise TypingError(f"target corner mismatch at square {idx}")
            j = ext.sector.path[0] + 1 if ext.sector.path else None
            if not src_degen:
                if ext.klass == tree_mod.H2_OVER_EDGE:
                    left = _rho_star(ρ, A, ext, "sigma", f"(dsU_<{j}, dsV_>{j}, F_{j})")
                elif ext.klass == tree_mod.H2_MIN:
                    left = _rho_star(ρ, A, ext, "sigma", f"(dsU_<{j}, a_{j}.0, dsV_>{j})")
                else:
                    left = {"kind": "coh", "src": s_top, "tgt": s_bot}
            if not tgt_degen:
                if ext.klass == tree_mod.H2_OVER_EDGE:
                    right = _rho_star(ρ, A, ext, "tau", f"(dtU_<{j}, dtV_>{j}, F_{j})")
                elif ext.klass == tree_mod.H2_MAX:
                    m = A.children[j - 1].arity
                    right = _rho_star(ρ, A, ext, "tau", f"(dtU_<{j}, a_{j}.{m}, dtV_>{j})")
                else:
                    right = {"kind": "coh", "src": t_top, "tgt": t_bot}
        squares.append(
            StackSquare(
                index=idx,
                element=ext,
                case=ext.klass,
                top_state=top_state,
                bottom_state=bottom_state,
                top=top,
                bottom=bottom,
                left=left,
                right=right,
                source_degenerate=src_degen,
                target_degenerate=tgt_degen,
                p=0 if src_degen else None,
                q=0 if tgt_degen else None,
            )
        )
    return squares


def vcompose_meta(squares) -> dict:
    """Bookkeeping for the vertical composite of a compatible stack."""
    if not squares:
        raise DomainError("empty stacks have no composite")
    for a, b in zip(squares, squares[1:]):
        if a.bottom_state != b.top_state:
            raise DomainError(
                f"stack is not composable between squares {a.index} and {b.index}"
            )
    ps = [sq.p for sq in squares]
    qs = [sq.q for sq in squares]
    return {
        "p": None if all(v is None for v in ps) else min(v for v in ps if v is not None),
        "q": None if all(v is None for v in qs) else min(v for v in qs if v is not None),
        "top": squares[0].top,
        "bottom": squares[-1].bottom,
        "source_record": tuple(
            "degenerate" if sq.source_degenerate else (sq.left or {}).get("kind", "coh")
            for sq in squares
        ),
        "target_record": tuple(
            "degenerate" if sq.target_degenerate else (sq.right or {}).get("kind", "coh")
            for sq in squares
        ),
    }


def stack_to_dot(squares) -> str:
    lines = ["digraph stack {", '  node [shape=box, fontsize=10];']
    for sq in squares:
        flags = []
        if sq.source_degenerate:
            flags.append("s-degen")
        if sq.target_degenerate:
            flags.append("t-degen")
        label = f"{sq.index}: {sq.case}" + (f" [{' '.join(flags)}]" if flags else "")
        lines.append(f'  sq{sq.index} [label="{label}\\n{sq.top}\\n{sq.bottom}"];')
    for a, b in zip(squares, squares[1:]):
        lines.append(f"  sq{a.index} -> sq{b.index};")
    lines.append("}")
    return "\n".join(lines)


def stack_to_json(squares) -> str:
    return json.dumps([sq.to_json() for sq in squares], indent=1, sort_keys=True)


# ---------------------------------------------------------------------------
# modifications

def modification_presentation(k: int, th: TheoryPresentation):
    """The computad corepresenting modifications of k-cylinders, with the
    restriction maps onto the two cylinder copies."""
    if k < 0 or k > 2:
        raise DomainError("modification presentations are built for k <= 2")
    _require_systems(th, max(k, 1))
    P = Computad(f"M{k}")
    if k == 0:
        a = P.add("a", 0)
        b = P.add("b", 0)
        C = P.add("C", 1, a, b)
        D = P.add("D", 1, a, b)
        P.designated["filler"] = P.add("Theta", 2, C, D)
        xi0 = {"a": "a", "b": "b", "C": "C"}
        xi1 = {"a": "a", "b": "b", "C": "D"}
        equations = []
    elif k == 1:
        a = P.add("a", 0)
        b = P.add("b", 0)
        c = P.add("c", 0)
        d = P.add("d", 0)
        alpha = P.add("alpha", 1, a, b)
        beta = P.add("beta", 1, c, d)
        f = P.add("f", 1, a, c)
        g = P.add("g", 1, b, d)
        f2 = P.add("f2", 1, a, c)
        g2 = P.add("g2", 1, b, d)
        FC = P.add("FC", 2, fcomp([alpha, g]), fcomp([f, beta]))
        FD = P.add("FD", 2, fcomp([alpha, g2]), fcomp([f2, beta]))
        Ts = P.add("Ts", 2, f, f2)
        Tt = P.add("Tt", 2, g2, g)
        P.designated["filler"] = P.add(
            "Theta",
            3,
            fcomp([whisker_l(alpha, Tt), FC, whisker_r(Ts, beta)]),
            FD,
        )
        xi0 = {
            "A0s": "a", "A0t": "b", "B0s": "c", "B0t": "d",
            "A1": "alpha", "B1": "beta", "f": "f", "g": "g", "C": "FC",
        }
        xi1 = {
            "A0s": "a", "A0t": "b", "B0s": "c", "B0t": "d",
            "A1": "alpha", "B1": "beta", "f": "f2", "g": "g2", "C": "FD",
        }
        equations = []
    else:
        a = P.add("a", 0)
        b = P.add("b", 0)
        c = P.add("c", 0)
        d = P.add("d", 0)
        sA = P.add("sA", 1, a, b)
        tA = P.add("tA", 1, a, b)
        sB = P.add("sB", 1, c, d)
        tB = P.add("tB", 1, c, d)
        A = P.add("A", 2, sA, tA)
        B = P.add("B", 2, sB, tB)
        f = P.add("f", 1, a, c)
        g = P.add("g", 1, b, d)
        f2 = P.add("f2", 1, a, c)
        g2 = P.add("g2", 1, b, d)
        Es = P.add("Es", 2, fcomp([sA, g]), fcomp([f, sB]))
        Et = P.add("Et", 2, fcomp([tA, g]), fcomp([f, tB]))
        Es2 = P.add("Es2", 2, fcomp([sA, g2]), fcomp([f2, sB]))
        Et2 = P.add("Et2", 2, fcomp([tA, g2]), fcomp([f2, tB]))
        OmC = P.add("OmC", 3, fcomp([whisker_r(A, g), Et]), fcomp([Es, whisker_l(f, B)]))
        OmD = P.add("OmD", 3, fcomp([whisker_r(A, g2), Et2]), fcomp([Es2, whisker_l(f2, B)]))
        Ts = P.add("Ts", 2, f, f2)
        Tt = P.add("Tt", 2, g2, g)
        # recursive modification data: its sides compare the whisker-corrected
        # seams (through the chosen whisker cylinders) with the second copy
        Gs = P.add("Gs", 3, fcomp([whisker_l(sA, Tt), Es, whisker_r(Ts, sB)]), Es2)
        Gt = P.add("Gt", 3, fcomp([whisker_l(tA, Tt), Et, whisker_r(Ts, tB)]), Et2)
        equations = [
            (
                "modification_top",
                "paste(OmC, Gs, Gt) = OmD",
            )
        ]
        xi0 = {
            "A0s": "a", "A0t": "b", "B0s": "c", "B0t": "d",
            "A1s": "sA", "A1t": "tA", "B1s": "sB", "B1t": "tB",
            "A2": "A", "B2": "B", "f": "f", "g": "g",
            "E2s": "Es", "E2t": "Et", "C": "OmC",
        }
        xi1 = {
            "A0s": "a", "A0t": "b", "B0s": "c", "B0t": "d",
            "A1s": "sA", "A1t": "tA", "B1s": "sB", "B1t": "tB",
            "A2": "A", "B2": "B", "f": "f2", "g": "g2",
            "E2s": "Es2", "E2t": "Et2", "C": "OmD",
        }
    P.typecheck()
    xi = {"Xi0": xi0, "Xi1": xi1, "equations": equations}
    _verify_xi(k, th, P, xi)
    return P, xi


def _verify_xi(k, th, P, xi):
    """The restriction maps must send cylinder generators to cells with the
    renamed boundaries."""
    from .computads import rename

    cyl = cyl_presentation(k, th)
    for key in ("Xi0", "Xi1"):
        mapping = xi[key]
        for name in cyl.order:
            gen = cyl.gens[name]
            img = P.gens[mapping[name]]
            if gen.dim != img.dim:
                raise TypingError(f"{key} changes dimension at {name}")
            if gen.dim > 0:
                if rename(gen.src, mapping) != img.src or rename(gen.tgt, mapping) != img.tgt:
                    raise TypingError(f"{key} breaks the boundary at {name}")


# ---------------------------------------------------------------------------
# coherence-cylinder boundary pairs

def _wrap(th, cell, target, lefts, rights, order="lr"):
    """Whisker a single-cell term by edges of the target, inner to outer."""
    from .theory import Term, app_cell, glob_cell
    from .theta import leaf_inclusion

    def one(cell, idx, side):
        d = th.cell_dim(cell)
        wk = th.chosen[f"w_{side}_{d}"]
        arity = th.symbol(wk).arity
        edge = glob_cell(leaf_inclusion(target, idx))
        entries = (edge, cell) if side == "l" else (cell, edge)
        return app_cell(wk, Term(arity, target, entries))

    seq = (
        [(i, "l") for i in lefts] + [(i, "r") for i in rights]
        if order == "lr"
        else [(i, "r") for i in rights] + [(i, "l") for i in lefts]
    )
    for idx, side in seq:
        cell = one(cell, idx, side)
    return cell


def coherence_boundary(kind: str, indices, level: int, th: TheoryPresentation):
    """The two boundary components of a coherence-cylinder extension problem.

    ``kind`` selects the family: "psi" bundles the middle with its nearest
    edge on either side; "phi" and "theta" carry an extra cell glued one
    codimension in, bundled by the suspended whiskering.  The extensions
    themselves are opaque choices; only their boundary pair is built.
    """
    from .theory import Term, app_cell, glob_cell, single
    from .theta import leaf_inclusion

    if kind == "psi":
        m, k = indices
        mid_dim = level + 1
        if mid_dim > th.n:
            raise DomainError("component dimension exceeds the truncation")
        M = Tree((LEAF,) * m + (globe(level),) + (LEAF,) * k)
        mid = glob_cell(leaf_inclusion(M, m))

        def bundle(side):
            if side == "l":
                edge = glob_cell(leaf_inclusion(M, m - 1))
                wk = th.chosen[f"w_l_{mid_dim}"]
                entries = (edge, mid)
            else:
                edge = glob_cell(leaf_inclusion(M, m + 1))
                wk = th.chosen[f"w_r_{mid_dim}"]
                entries = (mid, edge)
            return app_cell(wk, Term(th.symbol(wk).arity, M, entries))

        if m == 0 and k == 0:
            c1 = c2 = mid
        elif m == 0:
            c1 = _wrap(th, mid, M, [], range(m + 1, m + k + 1))
            c2 = _wrap(th, bundle("r"), M, [], range(m + 2, m + k + 1))
        elif k == 0:
            c1 = _wrap(th, bundle("l"), M, range(m - 2, -1, -1), [])
            c2 = _wrap(th, mid, M, range(m - 1, -1, -1), [])
        else:
            c1 = _wrap(th, bundle("l"), M, range(m - 2, -1, -1), range(m + 1, m + k + 1))
            c2 = _wrap(th, bundle("r"), M, range(m - 1, -1, -1), range(m + 2, m + k + 1))
        t1 = single(mid_dim, M, c1)
        t2 = single(mid_dim, M, c2)
        th.validate_term(t1)
        th.validate_term(t2)
        return t1, t2

    if kind not in ("phi", "theta"):
        raise DomainError(f"unknown coherence family {kind!r}")
    q, m, k = indices
    if m < 1:
        raise DomainError("the glued-cell families need m >= 1")
    j = level + m
    if j + 1 > th.n + 1 or j > th.n:
        raise DomainError("component dimension exceeds the truncation")
    from .trees import DimensionTable, table_to_tree

    fused = table_to_tree(
        DimensionTable((m + 1, j), (m,))
        if kind == "phi"
        else DimensionTable((j, m + 1), (m,))
    )
    M = Tree((LEAF,) * q + (fused.children[0],) + (LEAF,) * k)
    cellleaf = q if kind == "phi" else q + 1
    midleaf = q + 1 if kind == "phi" else q
    mid = glob_cell(leaf_inclusion(M, midleaf))
    extra = glob_cell(leaf_inclusion(M, cellleaf))
    if j == m + 1:
        bundle_sym = th.chosen[f"c{j}"]
    elif m == 1 and j == 3 and "sw_l_3" in th.chosen:
        bundle_sym = th.chosen["sw_l_3" if kind == "phi" else "sw_r_3"]
    else:
        raise DomainError("suspended whiskering outside the shipped range")
    entries = (extra, mid) if kind == "phi" else (mid, extra)
    core = app_cell(bundle_sym, Term(th.symbol(bundle_sym).arity, M, entries))
    lefts = range(q - 1, -1, -1)
    rights = range(q + 2, q + 2 + k)
    c1 = _wrap(th, core, M, lefts, rights, order="lr")
    c2 = _wrap(th, core, M, lefts, rights, order="rl")
    t1 = single(j, M, c1)
    t2 = single(j, M, c2)
    th.validate_term(t1)
    th.validate_term(t2)
    return t1, t2
