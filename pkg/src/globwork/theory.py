"""Presented globular theories: towers of operations over the globular site.

A presentation is a tower of freely added operation symbols, each with a
boundary pair of terms and (when one exists) a chosen cell of the strict
operation category as its image.  Terms are normal forms: tuples with one
entry per globe of the source decomposition, each entry either a globular
map or an opaque symbol applied to a term.
"""

from __future__ import annotations

from dataclasses import dataclass
from .errors import AdmissibilityError, DomainError, TypingError
from .trees import LEAF, Tree, dim as tree_dim, globe, suspend
from . import theta as th_ops
from .theta import (
    ThetaMap,
    assemble,
    compose,
    filler,
    identity,
    is_admissible_categorical,
    leaf_inclusion,
    leaf_paths,
    sigma_theta,
    tau_theta,
)

CATEGORICAL = "categorical"
GROUPOIDAL = "groupoidal"


def _junction_height(p: tuple, q: tuple) -> int:
    h = 0
    while h < len(p) and h < len(q) and p[h] == q[h]:
        h += 1
    return h


@dataclass(frozen=True)
class TermCell:
    """A single morphism D_k -> B: a globular map or an applied symbol."""

    glob: ThetaMap | None = None
    op: str | None = None
    args: "Term | None" = None

    def __post_init__(self):
        if (self.glob is None) == (self.op is None):
            raise TypingError("a term cell is either globular or a symbol application")

    @property
    def is_glob(self):
        return self.glob is not None

    def __str__(self):
        if self.is_glob:
            return f"<{th_ops.render(self.glob)}>"
        return f"{self.op}({self.args})"


@dataclass(frozen=True)
class Term:
    """A morphism source -> target: one cell per leaf of the source."""

    source: Tree
    target: Tree
    cells: tuple[TermCell, ...]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.cells) + ")"

    @property
    def sole(self) -> TermCell:
        if len(self.cells) != 1:
            raise TypingError("term has more than one entry")
        return self.cells[0]


def glob_cell(g: ThetaMap) -> TermCell:
    return TermCell(glob=g)


def app_cell(op: str, args: Term) -> TermCell:
    return TermCell(op=op, args=args)


def single(source_dim: int, target: Tree, cell: TermCell) -> Term:
    return Term(globe(source_dim), target, (cell,))


@dataclass(frozen=True)
class OperationSymbol:
    name: str
    arity: Tree
    dim: int
    src: Term | None
    tgt: Term | None
    theta_image: ThetaMap | None
    stage: int
    is_equation: bool = False


class TheoryPresentation:
    """A tower of operation batches over the n-truncated globular site."""

    def __init__(self, n: int, kind: str):
        if n < 1:
            raise DomainError("truncation must be at least 1")
        if kind not in (CATEGORICAL, GROUPOIDAL):
            raise DomainError(f"unknown theory kind {kind!r}")
        self.n = n
        self.kind = kind
        self.stages: dict[int, list[OperationSymbol]] = {}
        self.symbols: dict[str, OperationSymbol] = {}
        self.chosen: dict[str, str] = {}
        self._boundary_cache: dict = {}

    # -- basic views --------------------------------------------------------

    def copy(self) -> "TheoryPresentation":
        out = TheoryPresentation(self.n, self.kind)
        out.stages = {k: list(v) for k, v in self.stages.items()}
        out.symbols = dict(self.symbols)
        out.chosen = dict(self.chosen)
        return out

    def symbol(self, name: str) -> OperationSymbol:
        if name not in self.symbols:
            raise TypingError(f"unknown operation symbol {name!r}")
        return self.symbols[name]

    def equations(self):
        return [s for syms in self.stages.values() for s in syms if s.is_equation]

    def operations(self):
        return [s for syms in self.stages.values() for s in syms if not s.is_equation]

    # -- term calculus ------------------------------------------------------

    def cell_dim(self, cell: TermCell) -> int:
        if cell.is_glob:
            return tree_dim(cell.glob.source)
        return self.symbol(cell.op).dim

    def cell_target(self, cell: TermCell) -> Tree:
        if cell.is_glob:
            return cell.glob.target
        return cell.args.target

    def validate_cell(self, cell: TermCell):
        if cell.is_glob:
            if not th_ops.is_globular(cell.glob):
                raise TypingError("globular entries must be globular maps")
            return
        sym = self.symbol(cell.op)
        if cell.args.source != sym.arity:
            raise TypingError(f"arguments of {cell.op} must be shaped {sym.arity}")
        self.validate_term(cell.args)

    def validate_term(self, t: Term):
        paths = leaf_paths(t.source)
        if len(t.cells) != len(paths):
            raise TypingError("term needs one entry per source leaf")
        tbl_heights = [len(p) for p in paths]
        for cell, h in zip(t.cells, tbl_heights):
            self.validate_cell(cell)
            if self.cell_dim(cell) != h:
                raise TypingError("entry dimension does not match its leaf")
            if self.cell_target(cell) != t.target:
                raise TypingError("entry lands in the wrong target")
        # matched boundaries: consecutive leaves agree at the junction height
        for i in range(len(paths) - 1):
            join = _junction_height(paths[i], paths[i + 1])
            left = self.iterated_boundary_cell(t.cells[i], tbl_heights[i] - join, "t")
            right = self.iterated_boundary_cell(t.cells[i + 1], tbl_heights[i + 1] - join, "s")
            if left != right:
                raise TypingError(
                    f"leaves {i} and {i + 1} do not share their dim-{join} boundary"
                )

    def cell_src(self, cell: TermCell) -> TermCell:
        key = ("s", cell)
        hit = self._boundary_cache.get(key)
        if hit is not None:
            return hit
        k = self.cell_dim(cell)
        if k == 0:
            raise TypingError("0-cells have no source")
        if cell.is_glob:
            out = glob_cell(compose(sigma_theta(k - 1), cell.glob))
        else:
            sym = self.symbol(cell.op)
            out = self.substitute(sym.src, cell.args).sole
        self._boundary_cache[key] = out
        return out

    def cell_tgt(self, cell: TermCell) -> TermCell:
        key = ("t", cell)
        hit = self._boundary_cache.get(key)
        if hit is not None:
            return hit
        k = self.cell_dim(cell)
        if k == 0:
            raise TypingError("0-cells have no target")
        if cell.is_glob:
            out = glob_cell(compose(tau_theta(k - 1), cell.glob))
        else:
            sym = self.symbol(cell.op)
            out = self.substitute(sym.tgt, cell.args).sole
        self._boundary_cache[key] = out
        return out

    def iterated_boundary_cell(self, cell: TermCell, steps: int, which: str) -> TermCell:
        for _ in range(steps):
            cell = self.cell_src(cell) if which == "s" else self.cell_tgt(cell)
        return cell

    def term_cell_at(self, t: Term, cell_id) -> TermCell:
        """The entry of t over an arbitrary cell of its source scheme."""
        path, gap = cell_id
        node = t.source.subtree(path)
        paths = leaf_paths(t.source)
        if node.is_leaf:
            return t.cells[paths.index(path)]
        if gap < node.arity:
            deeper = self.term_cell_at(t, (path + (gap,), 0))
            return self.cell_src(deeper)
        deeper = self.term_cell_at(t, (path + (node.arity - 1,), 0))
        return self.cell_tgt(deeper)

    def substitute_cell(self, cell: TermCell, u: Term) -> TermCell:
        """Compose a cell D_k -> B with a term u : B -> C."""
        if cell.is_glob:
            return self.term_cell_at(u, th_ops.glob_top_image(cell.glob))
        return app_cell(cell.op, self.substitute(cell.args, u))

    def substitute(self, t: Term, u: Term) -> Term:
        """Composite term t ; u for t : A -> B and u : B -> C."""
        if t.target != u.source:
            raise TypingError("substitution mismatch")
        return Term(t.source, u.target, tuple(self.substitute_cell(c, u) for c in t.cells))

    def identity_term(self, A: Tree) -> Term:
        return Term(A, A, tuple(glob_cell(leaf_inclusion(A, i)) for i in range(A.n_leaves())))

    def term_src(self, t: Term) -> Term:
        """Source of a term out of a globe."""
        return single(tree_dim(t.source) - 1, t.target, self.cell_src(t.sole))

    def term_tgt(self, t: Term) -> Term:
        return single(tree_dim(t.source) - 1, t.target, self.cell_tgt(t.sole))

    # -- evaluation to the strict operation category ------------------------

    def eval_cell(self, cell: TermCell) -> ThetaMap:
        if cell.is_glob:
            return cell.glob
        sym = self.symbol(cell.op)
        if sym.theta_image is None:
            raise DomainError(f"symbol {sym.name!r} has no strict image")
        return compose(sym.theta_image, self.eval_term(cell.args))

    def eval_term(self, t: Term) -> ThetaMap:
        return assemble(t.source, t.target, [self.eval_cell(c) for c in t.cells])

    def evaluable(self, t: Term) -> bool:
        try:
            self.eval_term(t)
            return True
        except DomainError:
            return False

    # -- the tower ----------------------------------------------------------

    def admissible(self, k: int, src: Term, tgt: Term) -> bool:
        """Admissibility of the evaluated boundary pair, per the theory kind."""
        if self.kind == GROUPOIDAL:
            if k - 1 == 0:
                return tree_dim(src.target) <= k
            return (
                self.cell_src(src.sole) == self.cell_src(tgt.sole)
                and self.cell_tgt(src.sole) == self.cell_tgt(tgt.sole)
                and tree_dim(src.target) <= k
            )
        f, g = self.eval_term(src), self.eval_term(tgt)
        return is_admissible_categorical(f, g)

    def extend(self, batch) -> "TheoryPresentation":
        """Append freely added operations; each item is a dict with keys
        name, arity, k, src, tgt."""
        out = self.copy()
        for item in batch:
            name, arity, k = item["name"], item["arity"], item["k"]
            src, tgt = item["src"], item["tgt"]
            if name in out.symbols:
                raise DomainError(f"duplicate symbol {name!r}")
            if k < 1 or k > out.n + 1:
                raise DomainError(f"operation dimension {k} out of range")
            if tree_dim(arity) > out.n:
                raise DomainError("arity exceeds the truncation")
            for side in (src, tgt):
                if side.source != globe(k - 1) or side.target != arity:
                    raise TypingError(f"boundary of {name!r} must be D_{k-1} -> arity")
                out.validate_term(side)
            if k >= 2:
                if out.cell_src(src.sole) != out.cell_src(tgt.sole) or out.cell_tgt(
                    src.sole
                ) != out.cell_tgt(tgt.sole):
                    raise TypingError(f"boundary pair of {name!r} is not parallel")
            if not out.admissible(k, src, tgt):
                raise AdmissibilityError(
                    f"pair for {name!r} fails the {out.kind} admissibility predicate"
                )
            image = None
            is_eq = k == out.n + 1
            if not is_eq and out.evaluable(src) and out.evaluable(tgt):
                image = filler(out.eval_term(src), out.eval_term(tgt))
                if image is None and out.kind == CATEGORICAL:
                    raise AdmissibilityError(
                        f"no strict filler for categorical pair {name!r}"
                    )
            sym = OperationSymbol(
                name=name,
                arity=arity,
                dim=k,
                src=src,
                tgt=tgt,
                theta_image=image,
                stage=k,
                is_equation=is_eq,
            )
            out.stages.setdefault(k, []).append(sym)
            out.symbols[name] = sym
        return out

    def audit(self):
        """Re-check every stage: admissibility, parallelism, filler validity."""
        problems = []
        for k in sorted(self.stages):
            for sym in self.stages[k]:
                try:
                    self.validate_term(sym.src)
                    self.validate_term(sym.tgt)
                    if not self.admissible(sym.dim, sym.src, sym.tgt):
                        problems.append((sym.name, "inadmissible"))
                    if sym.theta_image is not None:
                        f = self.eval_term(sym.src)
                        g = self.eval_term(sym.tgt)
                        if compose(sigma_theta(sym.dim - 1), sym.theta_image) != f:
                            problems.append((sym.name, "image source mismatch"))
                        if compose(tau_theta(sym.dim - 1), sym.theta_image) != g:
                            problems.append((sym.name, "image target mismatch"))
                except (TypingError, DomainError) as e:
                    problems.append((sym.name, str(e)))
        return problems

    # -- equations as oriented rules ----------------------------------------

    def rewrite_once(self, cell: TermCell) -> TermCell | None:
        """One top-level left-to-right step along a stored equation.

        Only directly invertible left-hand patterns are matched: a bare
        identity over a globe arity, or a symbol applied to the identity
        arguments.  Deeper matching is not attempted; see the equations'
        overlap check for why these rules cannot run as a normalizer.
        """
        k = self.cell_dim(cell)
        for eq in self.equations():
            lhs = eq.src.sole
            if lhs.is_glob:
                if (
                    eq.arity == globe(tree_dim(eq.arity))
                    and lhs.glob == identity(eq.arity)
                    and k == tree_dim(eq.arity)
                ):
                    u = Term(eq.arity, self.cell_target(cell), (cell,))
                    return self.substitute(eq.tgt, u).sole
            elif not cell.is_glob and cell.op == lhs.op:
                if lhs.args == self.identity_term(eq.arity):
                    return self.substitute(eq.tgt, cell.args).sole
        return None

    def equations_overlap(self) -> bool:
        """Whether two distinct oriented rules share a top-level lhs symbol."""
        heads = []
        for eq in self.equations():
            head = eq.src.sole.op if not eq.src.sole.is_glob else "<glob>"
            heads.append(head)
        return len(heads) != len(set(heads))


def base_theory(n: int, kind: str = CATEGORICAL) -> TheoryPresentation:
    """The empty tower: morphisms are exactly the globular ones."""
    return TheoryPresentation(n, kind)


# ---------------------------------------------------------------------------
# canonical arity trees

def comp_arity(k: int) -> Tree:
    """The gluing D_k u_{D_{k-1}} D_k."""
    t = Tree((LEAF, LEAF))
    for _ in range(k - 1):
        t = suspend(t)
    return t


def whisker_right_arity(k: int) -> Tree:
    """D_k u_{D_0} D_1."""
    return Tree((globe(k - 1), LEAF))


def whisker_left_arity(k: int) -> Tree:
    return Tree((LEAF, globe(k - 1)))


def zero_cell_pick(A: Tree, a: int) -> TermCell:
    return glob_cell(ThetaMap(LEAF, A, (a,), ()))


# ---------------------------------------------------------------------------
# the standard systems

def standard_systems(th: TheoryPresentation) -> TheoryPresentation:
    """Adjoin chosen compositions, identities, left/right unit cells and the
    whiskering family; top-dimensional members become equations."""
    n = th.n
    out = th

    # compositions c_k : D_k -> D_k u_{D_{k-1}} D_k
    for k in range(1, n + 1):
        A = comp_arity(k)
        src = single(k - 1, A, glob_cell(compose(sigma_theta(k - 1), leaf_inclusion(A, 0))))
        tgt = single(k - 1, A, glob_cell(compose(tau_theta(k - 1), leaf_inclusion(A, 1))))
        out = out.extend([{"name": f"c{k}", "arity": A, "k": k, "src": src, "tgt": tgt}])
        out.chosen[f"c{k}"] = f"c{k}"

    # identities id_k : D_{k+1} -> D_k
    for k in range(0, n):
        A = globe(k)
        ident = single(k, A, glob_cell(identity(A)))
        out = out.extend([{"name": f"id{k}", "arity": A, "k": k + 1, "src": ident, "tgt": ident}])
        out.chosen[f"id{k}"] = f"id{k}"

    # whiskering maps: the bottom one is the chosen binary composition
    out.chosen["w_r_1"] = "c1"
    out.chosen["w_l_1"] = "c1"
    for k in range(2, n + 1):
        for side in ("r", "l"):
            A = whisker_right_arity(k) if side == "r" else whisker_left_arity(k)
            prev = out.chosen[f"w_{side}_{k - 1}"]
            lower_arity = out.symbol(prev).arity
            globe_leaf = 0 if side == "r" else 1
            edge_leaf = 1 - globe_leaf
            sigma_part = Term(
                lower_arity,
                A,
                _ordered_pair(
                    globe_leaf,
                    glob_cell(compose(sigma_theta(k - 1), leaf_inclusion(A, globe_leaf))),
                    glob_cell(leaf_inclusion(A, edge_leaf)),
                ),
            )
            tau_part = Term(
                lower_arity,
                A,
                _ordered_pair(
                    globe_leaf,
                    glob_cell(compose(tau_theta(k - 1), leaf_inclusion(A, globe_leaf))),
                    glob_cell(leaf_inclusion(A, edge_leaf)),
                ),
            )
            out = out.extend(
                [
                    {
                        "name": f"w_{side}_{k}",
                        "arity": A,
                        "k": k,
                        "src": single(k - 1, A, app_cell(prev, sigma_part)),
                        "tgt": single(k - 1, A, app_cell(prev, tau_part)),
                    }
                ]
            )
            out.chosen[f"w_{side}_{k}"] = f"w_{side}_{k}"

    # suspended whiskering: compose a 3-cell with a 2-cell along an edge
    # (the base of this family is the chosen codimension-1 composition)
    if n >= 3:
        out.chosen["sw_r_2"] = "c2"
        out.chosen["sw_l_2"] = "c2"
        for side in ("r", "l"):
            inner = (
                Tree((globe(1), LEAF)) if side == "r" else Tree((LEAF, globe(1)))
            )
            A = suspend(inner)
            globe_leaf = 0 if side == "r" else 1
            edge_leaf = 1 - globe_leaf
            lower_arity = comp_arity(2)
            sigma_part = Term(
                lower_arity,
                A,
                _ordered_pair(
                    globe_leaf,
                    glob_cell(compose(sigma_theta(2), leaf_inclusion(A, globe_leaf))),
                    glob_cell(leaf_inclusion(A, edge_leaf)),
                ),
            )
            tau_part = Term(
                lower_arity,
                A,
                _ordered_pair(
                    globe_leaf,
                    glob_cell(compose(tau_theta(2), leaf_inclusion(A, globe_leaf))),
                    glob_cell(leaf_inclusion(A, edge_leaf)),
                ),
            )
            out = out.extend(
                [
                    {
                        "name": f"sw_{side}_3",
                        "arity": A,
                        "k": 3,
                        "src": single(2, A, app_cell("c2", sigma_part)),
                        "tgt": single(2, A, app_cell("c2", tau_part)),
                    }
                ]
            )
            out.chosen[f"sw_{side}_3"] = f"sw_{side}_3"

    # unit comparison cells l_k, r_k : D_k -> D_{k-1}
    for k in range(2, n + 2):
        A = globe(k - 1)
        ident = glob_cell(identity(A))
        comp = out.chosen[f"c{k - 1}"]
        comp_args_l = Term(
            comp_arity(k - 1),
            A,
            (
                ident,
                app_cell(
                    out.chosen[f"id{k - 2}"],
                    single(k - 2, A, glob_cell(tau_theta(k - 2))),
                ),
            ),
        )
        comp_args_r = Term(
            comp_arity(k - 1),
            A,
            (
                app_cell(
                    out.chosen[f"id{k - 2}"],
                    single(k - 2, A, glob_cell(sigma_theta(k - 2))),
                ),
                ident,
            ),
        )
        out = out.extend(
            [
                {
                    "name": f"l{k}",
                    "arity": A,
                    "k": k,
                    "src": single(k - 1, A, ident),
                    "tgt": single(k - 1, A, app_cell(comp, comp_args_l)),
                },
                {
                    "name": f"r{k}",
                    "arity": A,
                    "k": k,
                    "src": single(k - 1, A, ident),
                    "tgt": single(k - 1, A, app_cell(comp, comp_args_r)),
                },
            ]
        )
        out.chosen[f"l{k}"] = f"l{k}"
        out.chosen[f"r{k}"] = f"r{k}"
    return out


def _ordered_pair(globe_leaf, globe_cell_entry, edge_cell_entry):
    if globe_leaf == 0:
        return (globe_cell_entry, edge_cell_entry)
    return (edge_cell_entry, globe_cell_entry)


def whisker_sum_right(th: TheoryPresentation, A: Tree):
    """The componentwise whiskering A -> A u_{D_0} D_1 as a term.

    Only the trailing suspension block can absorb the new edge: a whiskered
    block moves its target 0-boundary, so whiskering any earlier block would
    break the gluing at a 0-cell join.  On suspensions every cell is
    whiskered; in general the earlier blocks pass through untouched.
    """
    if A == LEAF:
        return Term(LEAF, globe(1), (zero_cell_pick(globe(1), 0),))
    target = Tree(A.children + (LEAF,))
    paths = leaf_paths(A)
    last_block = A.arity - 1
    cells = []
    for j, path in enumerate(paths):
        if path[0] < last_block:
            cells.append(glob_cell(leaf_inclusion(target, j)))
            continue
        k = len(path)
        wk = th.chosen[f"w_r_{k}"]
        arity = th.symbol(wk).arity
        args = Term(
            arity,
            target,
            (
                glob_cell(leaf_inclusion(target, j)),
                glob_cell(leaf_inclusion(target, A.n_leaves())),
            ),
        )
        cells.append(app_cell(wk, args))
    return Term(A, target, tuple(cells))


def whisker_sum_left(th: TheoryPresentation, A: Tree):
    """The componentwise whiskering A -> D_1 u_{D_0} A as a term (dual)."""
    if A == LEAF:
        return Term(LEAF, globe(1), (zero_cell_pick(globe(1), 1),))
    target = Tree((LEAF,) + A.children)
    paths = leaf_paths(A)
    cells = []
    for j, path in enumerate(paths):
        if path[0] > 0:
            cells.append(glob_cell(leaf_inclusion(target, j + 1)))
            continue
        k = len(path)
        wk = th.chosen[f"w_l_{k}"]
        arity = th.symbol(wk).arity
        args = Term(
            arity,
            target,
            (
                glob_cell(leaf_inclusion(target, 0)),
                glob_cell(leaf_inclusion(target, j + 1)),
            ),
        )
        cells.append(app_cell(wk, args))
    return Term(A, target, tuple(cells))


# ---------------------------------------------------------------------------
# groupoidalization

def groupoidalize(th: TheoryPresentation) -> TheoryPresentation:
    """Freely adjoin left and right inverse systems to a categorical tower.

    The gluing identifies the abstract composition/identity generators with
    the tower's chosen ones, so the pushout of theories is realized as a
    symbol-set union: only the genuinely new inverse symbols are added.
    """
    if th.kind == GROUPOIDAL:
        if any(name.startswith("inv_") for name in th.symbols):
            return th.copy()
        raise DomainError("groupoidalize expects a categorical presentation")
    for k in range(1, th.n + 1):
        if f"c{k}" not in th.chosen:
            raise DomainError("groupoidalize needs chosen composition/identity systems")
    out = th.copy()
    out.kind = GROUPOIDAL
    n = out.n

    for k in range(1, n + 1):
        A = globe(k)
        out = out.extend(
            [
                {
                    "name": f"inv_{side}_{k}",
                    "arity": A,
                    "k": k,
                    "src": single(k - 1, A, glob_cell(tau_theta(k - 1))),
                    "tgt": single(k - 1, A, glob_cell(sigma_theta(k - 1))),
                }
                for side in ("l", "r")
            ]
        )
        out.chosen[f"inv_l_{k}"] = f"inv_l_{k}"
        out.chosen[f"inv_r_{k}"] = f"inv_r_{k}"

    for k in range(2, n + 2):
        A = globe(k - 1)
        comp = out.chosen[f"c{k - 1}"]
        idk = out.chosen[f"id{k - 2}"]
        ident = glob_cell(identity(A))
        # left inverse witness: 1_{source} => (f then f^l)
        kl_src = single(
            k - 1, A, app_cell(idk, single(k - 2, A, glob_cell(sigma_theta(k - 2))))
        )
        kl_tgt = single(
            k - 1,
            A,
            app_cell(
                comp,
                Term(
                    comp_arity(k - 1),
                    A,
                    (ident, app_cell(f"inv_l_{k - 1}", out.identity_term(A))),
                ),
            ),
        )
        # right inverse witness: 1_{target} => (f^r then f)
        kr_src = single(
            k - 1, A, app_cell(idk, single(k - 2, A, glob_cell(tau_theta(k - 2))))
        )
        kr_tgt = single(
            k - 1,
            A,
            app_cell(
                comp,
                Term(
                    comp_arity(k - 1),
                    A,
                    (app_cell(f"inv_r_{k - 1}", out.identity_term(A)), ident),
                ),
            ),
        )
        out = out.extend(
            [
                {"name": f"k_l_{k}", "arity": A, "k": k, "src": kl_src, "tgt": kl_tgt},
                {"name": f"k_r_{k}", "arity": A, "k": k, "src": kr_src, "tgt": kr_tgt},
            ]
        )
        out.chosen[f"k_l_{k}"] = f"k_l_{k}"
        out.chosen[f"k_r_{k}"] = f"k_r_{k}"
    return out


# ---------------------------------------------------------------------------
# the shipped coherence batches (3-truncated tower)

def _chain_tree(k: int) -> Tree:
    return Tree((LEAF,) * k)


def _pick(A: Tree, j: int) -> TermCell:
    return glob_cell(leaf_inclusion(A, j))


def _vcomp(th: TheoryPresentation, k: int, x: TermCell, y: TermCell, target: Tree) -> TermCell:
    """x then y along their shared (k-1)-boundary, via the chosen c_k."""
    return app_cell(th.chosen[f"c{k}"], Term(comp_arity(k), target, (x, y)))


def _wr(th: TheoryPresentation, k: int, x: TermCell, e: TermCell, target: Tree) -> TermCell:
    return app_cell(th.chosen[f"w_r_{k}"], Term(whisker_right_arity(k), target, (x, e)))


def _wl(th: TheoryPresentation, k: int, e: TermCell, x: TermCell, target: Tree) -> TermCell:
    return app_cell(th.chosen[f"w_l_{k}"], Term(whisker_left_arity(k), target, (e, x)))


def _assoc_inst(th, x, y, z, target):
    return app_cell("assoc", Term(_chain_tree(3), target, (x, y, z)))


def standard_library(n: int = 3, kind: str = CATEGORICAL) -> TheoryPresentation:
    """The shipped deterministic tower: systems plus coherence batches.

    For n = 3 this adds an associator, an interchanger, the pentagon and
    the unit triangle on top of the chosen systems.
    """
    th = standard_systems(base_theory(n, kind))
    if n != 3:
        return th

    three = _chain_tree(3)
    e = [_pick(three, j) for j in range(3)]
    assoc_src = single(
        1, three, _vcomp(th, 1, _vcomp(th, 1, e[0], e[1], three), e[2], three)
    )
    assoc_tgt = single(
        1, three, _vcomp(th, 1, e[0], _vcomp(th, 1, e[1], e[2], three), three)
    )
    th = th.extend(
        [{"name": "assoc", "arity": three, "k": 2, "src": assoc_src, "tgt": assoc_tgt}]
    )
    th.chosen["assoc"] = "assoc"

    # interchanger on two horizontally adjacent 2-cells
    hh = Tree((globe(1), globe(1)))
    alpha, beta = _pick(hh, 0), _pick(hh, 1)
    f_edge = glob_cell(compose(sigma_theta(1), leaf_inclusion(hh, 0)))
    g_edge = glob_cell(compose(tau_theta(1), leaf_inclusion(hh, 0)))
    h_edge = glob_cell(compose(sigma_theta(1), leaf_inclusion(hh, 1)))
    k_edge = glob_cell(compose(tau_theta(1), leaf_inclusion(hh, 1)))
    lhs = _vcomp(
        th,
        2,
        _wr(th, 2, alpha, h_edge, hh),
        _wl(th, 2, g_edge, beta, hh),
        hh,
    )
    rhs = _vcomp(
        th,
        2,
        _wl(th, 2, f_edge, beta, hh),
        _wr(th, 2, alpha, k_edge, hh),
        hh,
    )
    th = th.extend(
        [
            {
                "name": "interchange",
                "arity": hh,
                "k": 3,
                "src": single(2, hh, lhs),
                "tgt": single(2, hh, rhs),
            }
        ]
    )
    th.chosen["interchange"] = "interchange"

    # pentagon on four composable edges
    four = _chain_tree(4)
    u = [_pick(four, j) for j in range(4)]

    def c(x, y):
        return _vcomp(th, 1, x, y, four)

    s1 = _wr(th, 2, _assoc_inst(th, u[0], u[1], u[2], four), u[3], four)
    s2 = _assoc_inst(th, u[0], c(u[1], u[2]), u[3], four)
    s3 = _wl(th, 2, u[0], _assoc_inst(th, u[1], u[2], u[3], four), four)
    path_a = _vcomp(th, 2, _vcomp(th, 2, s1, s2, four), s3, four)
    t1 = _assoc_inst(th, c(u[0], u[1]), u[2], u[3], four)
    t2 = _assoc_inst(th, u[0], u[1], c(u[2], u[3]), four)
    path_b = _vcomp(th, 2, t1, t2, four)
    th = th.extend(
        [
            {
                "name": "pentagon",
                "arity": four,
                "k": 3,
                "src": single(2, four, path_a),
                "tgt": single(2, four, path_b),
            }
        ]
    )

    # unit triangle on two composable edges
    two = _chain_tree(2)
    v0, v1 = _pick(two, 0), _pick(two, 1)
    middle_unit = app_cell("id0", single(0, two, zero_cell_pick(two, 1)))
    l_inst = app_cell("l2", single(1, two, v0))
    r_inst = app_cell("r2", single(1, two, v1))
    tri_src = _vcomp(
        th,
        2,
        _wr(th, 2, l_inst, v1, two),
        _assoc_inst(th, v0, middle_unit, v1, two),
        two,
    )
    tri_tgt = _wl(th, 2, v0, r_inst, two)
    th = th.extend(
        [
            {
                "name": "triangle",
                "arity": two,
                "k": 3,
                "src": single(2, two, tri_src),
                "tgt": single(2, two, tri_tgt),
            }
        ]
    )
    return th


# ---------------------------------------------------------------------------
# the interval presentation

def interval_presentation(th: TheoryPresentation):
    """The free model on the walking pair of one-sided-inverted 1-cells.

    Two objects, three 1-cells and two comparison 2-cells tying the two
    composites to identities; the designated cell is the backwards arrow.
    """
    from .computads import Computad, fop, funit

    P = Computad("interval")
    zero = P.add("0", 0)
    one = P.add("1", 0)
    g = P.add("g", 1, zero, one)
    f = P.add("f", 1, one, zero)
    k = P.add("k", 1, zero, one)
    c1 = th.chosen["c1"]
    fg = fop(c1, (g, f), 1, zero, zero)
    kf = fop(c1, (f, k), 1, one, one)
    P.add("left_cell", 2, funit(zero), fg)
    P.add("right_cell", 2, funit(one), kf)
    P.designated["alpha_1"] = f
    P.typecheck()
    return P


# ---------------------------------------------------------------------------
# division and promotion schemas

def division_term(n: int, th: TheoryPresentation):
    """The correction composite dividing a whiskered cell by the 1-cell.

    Returns the formal composite (a list of factors plus the assembled
    cell); the outer factors are opaque coherence constraints.
    """
    from .computads import fcomp, fop, fvar, typecheck as ftypecheck, whisker_r

    if n not in (1, 2):
        raise DomainError("division schema implemented for n = 1, 2")
    a = fvar("a", 0)
    b = fvar("b", 0)
    c = fvar("c", 0)
    f = fvar("f", 1, b, c)
    f_inv = fop(th.chosen["inv_l_1"], (f,), 1, c, b)
    if n == 1:
        A = fvar("A", 1, a, b)
        B = fvar("B", 1, a, b)
        fA = fcomp([A, f])
        fB = fcomp([B, f])
        H = fvar("H", 2, fA, fB)
        coh1 = fop("coh", (A,), 2, A, fcomp([fA, f_inv]))
        mid = whisker_r(H, f_inv)
        coh2 = fop("coh", (B,), 2, fcomp([fB, f_inv]), B)
        factors = [coh1, mid, coh2]
        out = fcomp(factors)
        ftypecheck(out)
        return factors, out
    sA = fvar("sA", 1, a, b)
    tA = fvar("tA", 1, a, b)
    A = fvar("A", 2, sA, tA)
    B = fvar("B", 2, sA, tA)
    fA = whisker_r(A, f)
    fB = whisker_r(B, f)
    H = fvar("H", 3, fA, fB)
    blown_A = whisker_r(fA, f_inv)
    blown_B = whisker_r(fB, f_inv)
    # coherence collars making the blown-up pasting parallel to A
    coh_s = fop("coh", (sA,), 2, sA, fcomp([sA, f, f_inv]))
    coh_t = fop("coh", (tA,), 2, fcomp([tA, f, f_inv]), tA)
    stage_a = fcomp([coh_s, blown_A, coh_t])
    stage_b = fcomp([coh_s, blown_B, coh_t])
    coh1 = fop("coh", (A,), 3, A, stage_a)
    mid = fop("whisker", (coh_s, whisker_r(H, f_inv), coh_t), 3, stage_a, stage_b)
    coh2 = fop("coh", (B,), 3, stage_b, B)
    factors = [coh1, mid, coh2]
    out = fcomp(factors)
    ftypecheck(out)
    return factors, out


def promote_inverse_term(th: TheoryPresentation):
    """From a left and a right inverse to a comparison cell between them.

    The two factors: whisker the right-inverse witness by the left inverse,
    then whisker the inverted left-inverse witness by the right inverse.
    Unit cells are absorbed by composite normalization.
    """
    from .computads import fcomp, fop, funit, fvar, typecheck as ftypecheck, whisker_l, whisker_r

    x = fvar("x", 0)
    y = fvar("y", 0)
    f = fvar("f", 1, x, y)
    k = fop(th.chosen["inv_l_1"], (f,), 1, y, x)
    g = fop(th.chosen["inv_r_1"], (f,), 1, y, x)
    # kappa^r f : 1_y => (g then f);  kappa^l f : 1_x => (f then k)
    kappa_r = fop(th.chosen["k_r_2"], (f,), 2, funit(y), fcomp([g, f]))
    kappa_l = fop(th.chosen["k_l_2"], (f,), 2, funit(x), fcomp([f, k]))
    inv_kappa_l = fop(th.chosen["inv_r_2"], (kappa_l,), 2, fcomp([f, k]), funit(x))
    first = whisker_r(kappa_r, k)  # k => k f g (units absorbed)
    second = whisker_l(g, inv_kappa_l)  # k f g => g
    factors = [first, second]
    out = fcomp(factors)
    ftypecheck(out)
    assert out.src == k and out.tgt == g
    return factors, out


# ---------------------------------------------------------------------------
# generating cofibrations

def generating_cofibrations(n: int):
    """(I_n, J_n): boundary inclusions with the parallel-pair collapse, and
    the source maps; all as realization-level data."""
    from . import globsets as gs

    I_n = [gs.boundary_inclusion(k) for k in range(n + 1)]
    I_n.append(gs.sphere_collapse(n))
    J_n = [gs.globe_src_map(k) for k in range(n)]
    return I_n, J_n


# ---------------------------------------------------------------------------
# JSON codecs for terms and batches

def glob_ref(t: Tree, cell) -> tuple:
    """Canonical (leaf index, boundary chain) addressing a scheme cell."""
    from .theta import leaf_paths

    path, gap = cell
    node = t.subtree(path)
    if node.is_leaf:
        return leaf_paths(t).index(path), ""
    if gap < node.arity:
        leaf, chain = glob_ref(t, (path + (gap,), 0))
        return leaf, chain + "s"
    leaf, chain = glob_ref(t, (path + (node.arity - 1,), 0))
    return leaf, chain + "t"


def ref_glob(t: Tree, leaf: int, chain: str) -> ThetaMap:
    from .theta import iterated_boundary, leaf_inclusion

    f = leaf_inclusion(t, leaf)
    for ch in chain:
        f = iterated_boundary(f, 1, ch)
    return f


def cell_to_json(th: TheoryPresentation, cell: TermCell):
    if cell.is_glob:
        leaf, chain = glob_ref(cell.glob.target, th_ops.glob_top_image(cell.glob))
        return {"leaf": leaf, "chain": chain}
    return {"op": cell.op, "args": term_to_json(th, cell.args)}


def term_to_json(th: TheoryPresentation, t: Term):
    return {"cells": [cell_to_json(th, c) for c in t.cells]}


def cell_from_json(th: TheoryPresentation, target: Tree, data) -> TermCell:
    if "leaf" in data:
        return glob_cell(ref_glob(target, data["leaf"], data.get("chain", "")))
    sym = th.symbol(data["op"])
    return app_cell(data["op"], term_from_json(th, sym.arity, target, data["args"]))


def term_from_json(th: TheoryPresentation, source: Tree, target: Tree, data) -> Term:
    cells = tuple(cell_from_json(th, target, c) for c in data["cells"])
    t = Term(source, target, cells)
    th.validate_term(t)
    return t


def batch_from_json(th: TheoryPresentation, item: dict) -> dict:
    from .trees import parse_tree

    arity = parse_tree(item["arity"])
    k = item["k"]
    return {
        "name": item["name"],
        "arity": arity,
        "k": k,
        "src": term_from_json(th, globe(k - 1), arity, item["src"]),
        "tgt": term_from_json(th, globe(k - 1), arity, item["tgt"]),
    }
