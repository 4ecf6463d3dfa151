"""Exact linear algebra over Q(i) on sparse and small dense matrices.

Sparse vectors are dicts {index: Scalar}.  A linear map is given by the list
of images of the domain basis vectors (its columns).
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar

SVec = Dict[int, Scalar]


def axpy(y: SVec, a: Scalar, x: SVec) -> None:
    """y += a * x, in place."""
    for k, v in x.items():
        s = y.get(k)
        s = a * v if s is None else s + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


def scale(x: SVec, a: Scalar) -> SVec:
    if not a:
        return {}
    return {k: v * a for k, v in x.items()}


def add(x: SVec, y: SVec) -> SVec:
    out = dict(x)
    axpy(out, ONE, y)
    return out


def inner(x: SVec, y: SVec) -> Scalar:
    """Hermitian inner product, antilinear in the second slot."""
    if len(x) > len(y):
        s = ZERO
        for k, v in y.items():
            u = x.get(k)
            if u is not None:
                s = s + u * v.conj()
        return s
    s = ZERO
    for k, u in x.items():
        v = y.get(k)
        if v is not None:
            s = s + u * v.conj()
    return s


class Echelon:
    """Incremental row echelon form with a configurable pivot order.

    ``order='forward'`` pivots on the smallest index of each vector and
    ``'reverse'`` on the largest, which gives two independent elimination
    strategies for the same rank question.  Each stored row carries the
    combination of inserted vectors that produced it.
    """

    def __init__(self, order: str = "forward", track: bool = False):
        if order not in ("forward", "reverse"):
            raise ValueError(order)
        self.reverse = order == "reverse"
        self.track = track
        self.rows: Dict[int, Tuple[SVec, SVec]] = {}
        self.count = 0

    def _lead(self, v: SVec) -> int:
        return max(v) if self.reverse else min(v)

    def reduce(self, v: SVec, comb: Optional[SVec] = None):
        v = dict(v)
        comb = dict(comb) if comb is not None else None
        rows = self.rows
        while v:
            p = self._lead(v)
            row = rows.get(p)
            if row is None:
                break
            a = -v[p]
            axpy(v, a, row[0])
            if comb is not None:
                axpy(comb, a, row[1])
        return v, comb

    def insert(self, v: SVec, tag: Optional[int] = None) -> Optional[SVec]:
        """Insert v; return None if independent, else the kernel combination."""
        comb = {tag if tag is not None else self.count: ONE} if self.track else None
        self.count += 1
        v, comb = self.reduce(v, comb)
        if not v:
            return comb if self.track else {}
        p = self._lead(v)
        inv = ONE / v[p]
        v = scale(v, inv)
        if comb is not None:
            comb = scale(comb, inv)
        self.rows[p] = (v, comb or {})
        return None

    @property
    def rank(self) -> int:
        return len(self.rows)

    def contains(self, v: SVec) -> bool:
        return not self.reduce(v)[0]


def rank(vectors: Sequence[SVec], order: str = "forward") -> int:
    e = Echelon(order)
    for v in vectors:
        if v:
            e.insert(v)
    return e.rank


def span_basis(vectors: Sequence[SVec]) -> List[SVec]:
    e = Echelon()
    for v in vectors:
        if v:
            e.insert(v)
    return [e.rows[p][0] for p in sorted(e.rows)]


def kernel(columns: Sequence[SVec], order: str = "forward") -> List[SVec]:
    """Basis of the kernel of the map whose j-th column is ``columns[j]``.

    The j-th returned vector (in insertion order) has coefficient 1 at its own
    column index and otherwise involves earlier columns only.
    """
    e = Echelon(order, track=True)
    out = []
    for j, col in enumerate(columns):
        comb = e.insert(col, tag=j)
        if comb is not None:
            out.append(comb)
    return out


def complement_basis(kernel_vecs: Sequence[SVec], image_vecs: Sequence[SVec]) -> List[SVec]:
    """Kernel vectors independent modulo the image: cohomology representatives."""
    e = Echelon()
    for v in image_vecs:
        if v:
            e.insert(v)
    out = []
    for v in kernel_vecs:
        if e.insert(v) is None:
            out.append(v)
    return out


# --- dense helpers -----------------------------------------------------------

Dense = List[List[Scalar]]


def dense_identity(n: int) -> Dense:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def dense_mul(a: Dense, b: Dense) -> Dense:
    if not a:
        return []
    m = len(b[0]) if b else 0
    out = []
    for row in a:
        r = [ZERO] * m
        for k, x in enumerate(row):
            if not x:
                continue
            bk = b[k]
            for j in range(m):
                y = bk[j]
                if y:
                    r[j] = r[j] + x * y
        out.append(r)
    return out


def dense_adjoint(a: Dense) -> Dense:
    if not a:
        return []
    return [[a[i][j].conj() for i in range(len(a))] for j in range(len(a[0]))]


def dense_inverse(a: Dense, pivot: str = "first") -> Dense:
    """Gauss-Jordan inverse; ``pivot='last'`` scans candidate pivots from the bottom."""
    n = len(a)
    m = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        cand = range(col, n) if pivot == "first" else range(n - 1, col - 1, -1)
        p = next((r for r in cand if m[r][col]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[p] = m[p], m[col]
        inv = ONE / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                rowc = m[col]
                m[r] = [x - f * y for x, y in zip(m[r], rowc)]
    return [row[n:] for row in m]


def dense_kernel(a: Dense, ncols: int) -> List[List[Scalar]]:
    """Kernel basis of a dense matrix (rows x ncols) from its reduced row echelon form."""
    rows = [list(r) for r in a]
    pivots = []
    r = 0
    for col in range(ncols):
        p = next((i for i in range(r, len(rows)) if rows[i][col]), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = ONE / rows[r][col]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [ZERO] * ncols
        v[fcol] = ONE
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fcol]
        basis.append(v)
    return basis
