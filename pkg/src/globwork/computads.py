"""Formal cells over named generators, and finite computad presentations.

The cylinder and modification presentations, the interval, and the division
schemas all describe cells by formal composites: generators, applied
operations (with declared boundaries when the operation is an opaque chosen
filler), and unbiased codimension-1 composites.  Composites are normalized
by flattening and unit removal, which is the working notion of "omitting
bracketings" used throughout.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from .errors import TypingError

UNIT = "1"


@dataclass(frozen=True)
class FCell:
    kind: str  # "var" | "op" | "comp"
    name: str = ""
    args: tuple = ()
    dim: int = 0
    src: "FCell | None" = None
    tgt: "FCell | None" = None

    def __str__(self):
        if self.kind == "var":
            return self.name
        if self.kind == "comp":
            return "(" + " * ".join(str(a) for a in self.args) + ")"
        if self.name == UNIT:
            return f"1[{self.args[0]}]"
        return f"{self.name}(" + ", ".join(str(a) for a in self.args) + ")"

    @property
    def is_unit(self):
        return self.kind == "op" and self.name == UNIT


def fvar(name: str, dim: int, src=None, tgt=None) -> FCell:
    return FCell("var", name, (), dim, src, tgt)


def fop(name: str, args, dim: int, src=None, tgt=None) -> FCell:
    return FCell("op", name, tuple(args), dim, src, tgt)


def funit(base: FCell) -> FCell:
    return FCell("op", UNIT, (base,), base.dim + 1, base, base)


def fcomp(parts) -> FCell:
    """Unbiased codimension-1 composite; flattens and drops units."""
    flat = []
    for p in parts:
        if p.kind == "comp":
            flat.extend(p.args)
        elif not p.is_unit:
            flat.append(p)
    if not flat:
        parts = tuple(parts)
        if not parts:
            raise TypingError("empty composite")
        return funit(parts[0].src) if parts[0].is_unit else parts[0]
    for a, b in zip(flat, flat[1:]):
        if a.tgt != b.src:
            raise TypingError(f"composite chain breaks between {a} and {b}")
    if len(flat) == 1:
        return flat[0]
    return FCell("comp", "", tuple(flat), flat[0].dim, flat[0].src, flat[-1].tgt)


def whisker_r(cell: FCell, edge: FCell, op_name="w") -> FCell:
    """Whisker a cell on its target side by a lower- or equal-dimensional one."""
    if cell.dim < 1 or edge.dim < 1 or cell.dim < edge.dim:
        raise TypingError("whiskering needs positive compatible dimensions")
    if edge.is_unit:
        return cell
    if cell.dim == edge.dim:
        return fcomp([cell, edge])
    return fop(
        op_name + "r",
        (cell, edge),
        cell.dim,
        whisker_r(cell.src, edge, op_name),
        whisker_r(cell.tgt, edge, op_name),
    )


def whisker_l(edge: FCell, cell: FCell, op_name="w") -> FCell:
    if cell.dim < 1 or edge.dim < 1 or cell.dim < edge.dim:
        raise TypingError("whiskering needs positive compatible dimensions")
    if edge.is_unit:
        return cell
    if cell.dim == edge.dim:
        return fcomp([edge, cell])
    return fop(
        op_name + "l",
        (edge, cell),
        cell.dim,
        whisker_l(edge, cell.src, op_name),
        whisker_l(edge, cell.tgt, op_name),
    )


def typecheck(cell: FCell):
    """Boundary sanity: dims drop by one and higher boundaries are parallel."""
    if cell.dim > 0:
        if cell.src is None or cell.tgt is None:
            raise TypingError(f"{cell} lacks a boundary")
        if cell.src.dim != cell.dim - 1 or cell.tgt.dim != cell.dim - 1:
            raise TypingError(f"{cell} has off-dimension boundary")
        if cell.dim >= 2:
            if cell.src.src != cell.tgt.src or cell.src.tgt != cell.tgt.tgt:
                raise TypingError(f"{cell} has a non-parallel boundary pair")
        typecheck(cell.src)
        typecheck(cell.tgt)
    for a in cell.args:
        typecheck(a)


def rename(cell: FCell, mapping: dict) -> FCell:
    if cell.kind == "var":
        target = mapping.get(cell.name, cell.name)
        return FCell(
            "var",
            target,
            (),
            cell.dim,
            rename(cell.src, mapping) if cell.src else None,
            rename(cell.tgt, mapping) if cell.tgt else None,
        )
    return FCell(
        cell.kind,
        cell.name,
        tuple(rename(a, mapping) for a in cell.args),
        cell.dim,
        rename(cell.src, mapping) if cell.src else None,
        rename(cell.tgt, mapping) if cell.tgt else None,
    )


@dataclass
class Computad:
    """Generators by dimension with formal boundary cells."""

    label: str
    gens: dict = field(default_factory=dict)
    order: list = field(default_factory=list)
    designated: dict = field(default_factory=dict)

    def add(self, name: str, dim: int, src: FCell | None = None, tgt: FCell | None = None) -> FCell:
        if name in self.gens:
            raise TypingError(f"duplicate generator {name!r}")
        if dim > 0 and (src is None or tgt is None):
            raise TypingError(f"positive-dimensional generator {name!r} needs a boundary")
        cell = fvar(name, dim, src, tgt)
        typecheck(cell)
        self.gens[name] = cell
        self.order.append(name)
        return cell

    def __getitem__(self, name: str) -> FCell:
        return self.gens[name]

    def counts(self) -> tuple:
        top = max((c.dim for c in self.gens.values()), default=-1)
        out = [0] * (top + 1)
        for c in self.gens.values():
            out[c.dim] += 1
        return tuple(out)

    def by_dim(self, dim: int):
        return [self.gens[n] for n in self.order if self.gens[n].dim == dim]

    def typecheck(self):
        for c in self.gens.values():
            typecheck(c)

    def to_json(self):
        return {
            "label": self.label,
            "generators": [
                {
                    "name": n,
                    "dim": self.gens[n].dim,
                    "src": str(self.gens[n].src) if self.gens[n].src else None,
                    "tgt": str(self.gens[n].tgt) if self.gens[n].tgt else None,
                }
                for n in self.order
            ],
            "designated": {k: str(v) for k, v in self.designated.items()},
        }


def find_computad_iso(P: Computad, Q: Computad):
    """A dimension- and boundary-preserving bijection of generators, or None."""
    if P.counts() != Q.counts():
        return None
    dims = sorted({c.dim for c in P.gens.values()})
    mapping: dict = {}

    def extend(di):
        if di == len(dims):
            return True
        d = dims[di]
        ps = [n for n in P.order if P.gens[n].dim == d]
        qs = [n for n in Q.order if Q.gens[n].dim == d]

        def place(i, used):
            if i == len(ps):
                return extend(di + 1)
            p = ps[i]
            pc = P.gens[p]
            for q in qs:
                if q in used:
                    continue
                qc = Q.gens[q]
                if pc.dim > 0:
                    if rename(pc.src, mapping) != qc.src or rename(pc.tgt, mapping) != qc.tgt:
                        continue
                mapping[p] = q
                if place(i + 1, used | {q}):
                    return True
                del mapping[p]
            return False

        return place(0, set())

    if extend(0):
        return dict(mapping)
    return None
