"""Cohomology of finite cochain complexes by exact elimination."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from .errors import StructuralError
from .linalg import Echelon, SVec, complement_basis, kernel


@dataclass
class CochainComplex:
    """Graded pieces of a model and a differential between consecutive pieces.

    ``pieces[g]`` lists model basis indices of grade g and ``next_grade(g)``
    names the grade the differential lands in.
    """

    pieces: Dict[Hashable, List[int]]
    apply: Callable[[int], SVec]
    next_grade: Callable[[Hashable], Hashable]

    def columns(self, g) -> List[SVec]:
        return [self.apply(i) for i in self.pieces.get(g, [])]


@dataclass
class CohomologyTable:
    dims: Dict[Hashable, int]
    representatives: Dict[Hashable, List[SVec]] = field(default_factory=dict)
    order: str = "forward"

    def total(self) -> int:
        return sum(self.dims.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** _deg(g) * d for g, d in self.dims.items())


def _deg(g) -> int:
    return sum(g) if isinstance(g, tuple) else int(g)


def _lift(pieces: List[int], vec: SVec) -> SVec:
    return {pieces[j]: s for j, s in vec.items()}


def compute(cx: CochainComplex, order: str = "forward", representatives: bool = True,
            grades: Optional[Sequence] = None) -> CohomologyTable:
    dims: Dict[Hashable, int] = {}
    reps: Dict[Hashable, List[SVec]] = {}
    prev_of = {}
    for g in cx.pieces:
        prev_of[cx.next_grade(g)] = g
    for g in (grades if grades is not None else cx.pieces):
        basis = cx.pieces.get(g, [])
        if not basis:
            dims[g] = 0
            continue
        cols = cx.columns(g)
        if representatives:
            ker = [_lift(basis, v) for v in kernel(cols, order)]
        else:
            e = Echelon(order)
            for c in cols:
                if c:
                    e.insert(c)
            ker_dim = len(basis) - e.rank
        pg = prev_of.get(g)
        image = cx.columns(pg) if pg is not None else []
        if representatives:
            rep = complement_basis(ker, image)
            dims[g] = len(rep)
            reps[g] = rep
        else:
            e = Echelon(order)
            for c in image:
                if c:
                    e.insert(c)
            dims[g] = ker_dim - e.rank
    return CohomologyTable(dims, reps, order)


def model_complex(model, grading: str = "bigrade") -> CochainComplex:
    """The model's differential as a complex graded by bidegree or total degree."""
    pieces: Dict[Hashable, List[int]] = {}
    for i in range(model.size):
        key = model.bigrade(i) if grading == "bigrade" else model.degree(i)
        pieces.setdefault(key, []).append(i)
    if grading == "bigrade":
        if model.differential_kind == "d":
            raise StructuralError("the full exterior derivative does not preserve bidegree")
        nxt = lambda g: (g[0], g[1] + 1)  # noqa: E731
    else:
        nxt = lambda g: g + 1  # noqa: E731
    return CochainComplex(pieces, model.diff, nxt)


def cohomology(model, grading: str = "bigrade", representatives: bool = True,
               check_orders: bool = True) -> CohomologyTable:
    """Cohomology dimensions with both pivot orders compared."""
    cx = model_complex(model, grading)
    table = compute(cx, "forward", representatives)
    if check_orders:
        other = compute(cx, "reverse", False)
        if other.dims != table.dims:
            raise StructuralError("elimination orders disagree on cohomology dimensions")
    return table


def betti_numbers(model) -> List[int]:
    table = cohomology(model, "degree", representatives=False)
    top = max(table.dims) if table.dims else 0
    return [table.dims.get(k, 0) for k in range(top + 1)]
