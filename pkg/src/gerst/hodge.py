"""Hodge theory on orthonormal monomial models and the Kuranishi recursion.

The basis words of every model are pointwise orthonormal and pairwise
L2-orthogonal, so the formal adjoint of the differential is its conjugate
transpose.  The Laplacian preserves bidegree and twist, which splits it into
small blocks where harmonic projection and the Green operator are computed
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import AssumptionError, InputError, StructuralError
from .exterior import COVB, VEC, VECB, COV, Element, merge_sign
from .linalg import (SVec, axpy, dense_inverse, dense_kernel, inner, rank, scale)
from .poly import Monomial, Poly, mono_mul
from .scalar import ONE, ZERO, Fraction, Scalar

HALF = Scalar(Fraction(1, 2))


class _Block:
    __slots__ = ("indices", "pos", "harmonic", "gram_inv", "green")

    def __init__(self, indices, pos, harmonic, gram_inv, green):
        self.indices = indices
        self.pos = pos
        self.harmonic = harmonic
        self.gram_inv = gram_inv
        self.green = green


class HodgePackage:
    """Adjoint, Laplacian, harmonic projection and Green operator of a model.

    ``order='reverse'`` runs every block elimination with the basis reversed
    and bottom-up pivoting, an independent route to the same operators.
    """

    def __init__(self, model, require_star: bool = True, order: str = "forward"):
        if order not in ("forward", "reverse"):
            raise ValueError("order must be 'forward' or 'reverse'")
        if not model.orthonormal:
            raise AssumptionError("Hodge theory needs an orthonormal basis")
        if require_star:
            ok, bad = model.star_closed()
            if not ok:
                raise StructuralError(f"the model is not closed under the Hodge star: {bad}")
        self.model = model
        self.order = order
        self._adj: Dict[int, SVec] = {}
        self._adj_degrees: set = set()
        self._blocks: Dict[int, Dict[tuple, _Block]] = {}
        self._block_of: Dict[int, Tuple[int, tuple]] = {}
        self._sign: Dict[int, int] = {}

    # -- adjoint and Laplacian ----------------------------------------------

    def _ensure_adjoint(self, k: int):
        """Fill in adjoints of all degree-k basis vectors."""
        if k in self._adj_degrees:
            return
        m = self.model
        for i in m.indices(degree=k):
            self._adj.setdefault(i, {})
        for j in m.indices(degree=k - 1):
            for i, s in m.diff(j).items():
                self._adj.setdefault(i, {})[j] = s.conj()
        self._adj_degrees.add(k)

    def adjoint(self, i: int) -> SVec:
        self._ensure_adjoint(self.model.degree(i))
        return self._adj.get(i, {})

    def adjoint_vec(self, v: SVec) -> SVec:
        out: SVec = {}
        for i, s in v.items():
            axpy(out, s, self.adjoint(i))
        return out

    def laplacian_vec(self, v: SVec) -> SVec:
        m = self.model
        out = self.adjoint_vec(m.diff_vec(v))
        axpy(out, ONE, m.diff_vec(self.adjoint_vec(v)))
        return out

    # -- blocks -------------------------------------------------------------

    def blocks(self, k: int) -> Dict[tuple, _Block]:
        bl = self._blocks.get(k)
        if bl is not None:
            return bl
        m = self.model
        groups: Dict[tuple, List[int]] = {}
        for i in m.indices(degree=k):
            key = (m.bigrade(i), m.words[i][0])
            groups.setdefault(key, []).append(i)
        bl = {}
        for key, idx in sorted(groups.items(), key=lambda kv: kv[1][0]):
            bl[key] = self._make_block(idx)
            for i in idx:
                self._block_of[i] = (k, key)
        self._blocks[k] = bl
        return bl

    def _make_block(self, idx: List[int]) -> _Block:
        if self.order == "reverse":
            idx = idx[::-1]
        pivot = "last" if self.order == "reverse" else "first"
        pos = {i: a for a, i in enumerate(idx)}
        size = len(idx)
        lap = [[ZERO] * size for _ in range(size)]
        for a, i in enumerate(idx):
            for j, s in self.laplacian_vec({i: ONE}).items():
                b = pos.get(j)
                if b is None:
                    raise StructuralError("the Laplacian mixes blocks")
                lap[b][a] = s
        ker = dense_kernel(lap, size)
        harmonic = [{idx[a]: s for a, s in enumerate(v) if s} for v in ker]
        h = len(harmonic)
        gram = [[inner(harmonic[a], harmonic[b]) for b in range(h)] for a in range(h)]
        gram_inv = dense_inverse(gram, pivot) if h else []
        # dense projector P[i][j] (output i, input j)
        proj = [[ZERO] * size for _ in range(size)]
        for a in range(h):
            for b in range(h):
                g = gram_inv[b][a]
                if not g:
                    continue
                for i, x in harmonic[a].items():
                    for j, y in harmonic[b].items():
                        proj[pos[i]][pos[j]] = proj[pos[i]][pos[j]] + x * g * y.conj()
        shifted = [[lap[r][c] + proj[r][c] for c in range(size)] for r in range(size)]
        inv = dense_inverse(shifted, pivot)
        green = [[inv[r][c] - proj[r][c] for c in range(size)] for r in range(size)]
        return _Block(idx, pos, harmonic, gram_inv, green)

    def _split(self, v: SVec) -> Dict[Tuple[int, tuple], SVec]:
        out: Dict[Tuple[int, tuple], SVec] = {}
        for i, s in v.items():
            loc = self._block_of.get(i)
            if loc is None:
                self.blocks(self.model.degree(i))
                loc = self._block_of[i]
            out.setdefault(loc, {})[i] = s
        return out

    # -- operators ----------------------------------------------------------

    def harmonic_basis(self, k: int) -> List[SVec]:
        out = []
        for b in self.blocks(k).values():
            out.extend(b.harmonic)
        return out

    def harmonic_coordinates(self, v: SVec, k: int) -> List[Scalar]:
        """Coefficients of the harmonic part of v in ``harmonic_basis(k)``."""
        parts = self._split(v) if v else {}
        out = []
        for key, b in self.blocks(k).items():
            part = parts.get((k, key), {})
            g = [inner(part, eta) for eta in b.harmonic]
            for a in range(len(b.harmonic)):
                out.append(sum((g[c] * b.gram_inv[c][a] for c in range(len(g))), ZERO))
        return out

    def project(self, v: SVec) -> SVec:
        out: SVec = {}
        for (k, key), part in self._split(v).items():
            b = self._blocks[k][key]
            g = [inner(part, eta) for eta in b.harmonic]
            for a, eta in enumerate(b.harmonic):
                c = sum((g[c2] * b.gram_inv[c2][a] for c2 in range(len(g))), ZERO)
                if c:
                    axpy(out, c, eta)
        return out

    def green(self, v: SVec) -> SVec:
        out: SVec = {}
        for (k, key), part in self._split(v).items():
            b = self._blocks[k][key]
            for j, s in part.items():
                col = b.pos[j]
                for r, i in enumerate(b.indices):
                    x = b.green[r][col]
                    if x:
                        out[i] = out.get(i, ZERO) + x * s
        return {i: s for i, s in out.items() if s}

    def is_harmonic(self, v: SVec) -> bool:
        return not self.laplacian_vec(v)

    # -- Hodge star -----------------------------------------------------------

    def star_sign(self, i: int) -> int:
        """Sign with  word ^ (sign * complement) = +top word."""
        s = self._sign.get(i)
        if s is None:
            m = self.model
            j = m.complement(i)
            if j is None:
                raise StructuralError(f"no complement for {m.label(i)}")
            # with this sign -star dbar star is the adjoint of dbar
            s = merge_sign((m.words[i][1], m.words[j][1]))[0]
            self._sign[i] = s
        return s

    def star(self, v: SVec) -> SVec:
        """Conjugate-linear Hodge star: basis word to signed complement word."""
        m = self.model
        out: SVec = {}
        for i, s in v.items():
            j = m.complement(i)
            if j is None:
                raise StructuralError(f"no complement for {m.label(i)}")
            c = s.conj()
            out[j] = c if self.star_sign(i) > 0 else -c
        return out

    def hodge_dimensions(self, k: int) -> Dict[str, int]:
        """dim C^k = dim H^k + rank d_k + rank d_{k-1}."""
        m = self.model
        total = len(m.indices(degree=k))
        harm = len(self.harmonic_basis(k))
        r_out = rank([m.diff(i) for i in m.indices(degree=k)])
        r_in = rank([m.diff(i) for i in m.indices(degree=k - 1)])
        return {"total": total, "harmonic": harm, "exact": r_in, "coexact": r_out}


# --- polynomial-valued vectors --------------------------------------------------

PolyVec = Dict[Monomial, SVec]


def pv_add(x: PolyVec, y: PolyVec, c: Scalar = ONE) -> PolyVec:
    out = {k: dict(v) for k, v in x.items()}
    for k, v in y.items():
        tgt = out.setdefault(k, {})
        axpy(tgt, c, v)
        if not tgt:
            del out[k]
    return out


def pv_map(x: PolyVec, f) -> PolyVec:
    out = {}
    for k, v in x.items():
        w = f(v)
        if w:
            out[k] = w
    return out


def pv_bracket(model, x: PolyVec, y: PolyVec) -> PolyVec:
    out: PolyVec = {}
    for k1, v1 in x.items():
        for k2, v2 in y.items():
            w = model.bracket_vec(v1, v2)
            if not w:
                continue
            k = mono_mul(k1, k2)
            tgt = out.setdefault(k, {})
            axpy(tgt, ONE, w)
            if not tgt:
                del out[k]
    return out


def pv_to_terms(x: PolyVec) -> Dict[int, Poly]:
    """Transpose to {basis index: polynomial coefficient}."""
    out: Dict[int, Dict[Monomial, Scalar]] = {}
    for k, v in x.items():
        for i, s in v.items():
            out.setdefault(i, {})[k] = s
    return {i: Poly(t) for i, t in out.items()}


# --- parameters -----------------------------------------------------------------

def _gen_label(name: str) -> str:
    stripped = name.lstrip("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz")
    return stripped or name


def parameter_alias(model, vec: SVec, position: int) -> str:
    """Subscript/superscript style name for a parameter attached to a single word."""
    if len(vec) != 1:
        return f"t_{{{position + 1}}}"
    (i,) = vec
    T = model.algebra
    _, w = model.words[i]
    sub = [_gen_label(T.frame.names[T.index_of(g)]) for g in w if T.kind_of(g) == VEC]
    sup = [_gen_label(T.frame.names[T.index_of(g)]) for g in w if T.kind_of(g) == COVB]
    out = "t"
    if sub:
        out += "_{" + "".join(sub) + "}"
    if sup:
        out += "^{" + "".join("\\bar" + (l if len(l) == 1 else "{" + l + "}") for l in sup) + "}"
    return out


# --- Kuranishi ------------------------------------------------------------------

@dataclass
class KuranishiResult:
    model: object
    hodge: HodgePackage
    eta: List[SVec]
    names: List[str]
    aliases: List[str]
    phi: Dict[int, PolyVec]
    obstructions: List[Poly]
    cutoff: dict
    exact: bool
    smooth: Optional[bool]
    smooth_certificate: Optional[str]
    bracket_square: PolyVec = field(default_factory=dict)
    raw_obstructions: List[Poly] = field(default_factory=list)

    def phi_total(self) -> PolyVec:
        out: PolyVec = {}
        for r in sorted(self.phi):
            out = pv_add(out, self.phi[r])
        return out

    def phi_terms(self, order: Optional[int] = None) -> Dict[int, Poly]:
        return pv_to_terms(self.phi_total() if order is None else self.phi.get(order, {}))

    def format_obstructions(self, aliases: bool = True) -> List[str]:
        names = self.aliases if aliases else self.names
        return [p.format(names) for p in self.obstructions]


def certify_cutoff(model, hodge: HodgePackage, eta: List[SVec]) -> dict:
    """Decide a finite-termination certificate for the recursion, if one applies."""
    from .manifest import lower_central_length
    from .models import check_condition_D  # noqa: F401

    spec = model.spec
    # harmonic closure: brackets of harmonic 2-vectors stay harmonic
    closed = True
    for a in range(len(eta)):
        for b in range(a, len(eta)):
            x = model.bracket_vec(eta[a], eta[b])
            if x and hodge.green(x):
                closed = False
                break
        if not closed:
            break
    if closed:
        return {"reason": "harmonic-closure", "order": 1}
    if spec is not None and spec.algebra().frame.is_complex_lie():
        T = model.algebra
        nu = lower_central_length(T)
        if nu is not None:
            if spec.kind == "nilmanifold":
                return {"reason": "nilpotency", "order": nu, "nu": nu}
            if _condition_b(spec):
                return {"reason": "nilpotency", "order": nu, "nu": nu}
    return {"reason": None}


def _condition_b(spec) -> bool:
    """beta_J^-1 gamma_L trivial on the lattice iff alpha_J conj(alpha_L)^-1 is, for all J, L."""
    from .errors import UnresolvableError
    from .models import _subset_products, unitary_parts
    n = spec.n
    alphas, betas, gammas = unitary_parts(spec)
    pa = _subset_products(alphas, n)
    pb = _subset_products(betas, n)
    pg = _subset_products(gammas, n)
    pab = _subset_products([a.conj() for a in alphas], n)
    try:
        for J in pa:
            for L in pa:
                lhs = spec.oracle.is_trivial(pb[J].inverse() * pg[L])
                rhs = spec.oracle.is_trivial(pa[J] * pab[L].inverse())
                if lhs != rhs:
                    return False
    except UnresolvableError:
        return False
    return True


def kuranishi_expand(model, max_order: int = 8, hodge: Optional[HodgePackage] = None,
                     use_certificate: bool = True) -> KuranishiResult:
    """Solve the deformation recursion on the harmonic degree-2 space.

    phi_1 = sum_i t_i eta_i and phi_r = -1/2 sum_s dbar^* G [phi_s, phi_{r-s}],
    so that dbar phi + 1/2 [phi, phi] equals half the harmonic part of [phi, phi].
    """
    if max_order < 1:
        raise ValueError("max_order must be positive")
    hodge = hodge or HodgePackage(model)
    eta = hodge.harmonic_basis(2)
    names = [f"t[{model.to_label(v) if hasattr(model, 'to_label') else _vec_label(model, v)}]"
             for v in eta]
    aliases = [parameter_alias(model, v, i) for i, v in enumerate(eta)]
    if len(set(aliases)) != len(aliases):
        aliases = [f"{a}#{i + 1}" for i, a in enumerate(aliases)]
    phi: Dict[int, PolyVec] = {1: {(i,): dict(v) for i, v in enumerate(eta)}}
    cert = certify_cutoff(model, hodge, eta) if use_certificate else {"reason": None}
    reason = cert.get("reason")
    if reason == "harmonic-closure":
        last = 1
    elif reason == "nilpotency":
        last = cert["order"] + 1
    else:
        last = max_order
    coef = Scalar(Fraction(-1, 2))
    exact = reason is not None
    support_end = None
    for r in range(2, last + 1):
        acc: PolyVec = {}
        for s in range(1, r):
            acc = pv_add(acc, pv_bracket(model, phi.get(s, {}), phi.get(r - s, {})))
        term = pv_map(acc, lambda v: hodge.adjoint_vec(hodge.green(v)))
        phi[r] = {k: scale(v, coef) for k, v in term.items()}
        if reason is None and r % 2 == 0:
            # phi_{K+1..2K} all zero forces every later term to vanish
            K = r // 2
            if all(not phi.get(j) for j in range(K + 1, r + 1)):
                support_end = K
                break
    if reason == "nilpotency":
        if phi.get(last):
            raise StructuralError("the nilpotency certificate failed: a term beyond the step survived")
    if reason is None:
        if support_end is not None:
            cert = {"reason": "finite-support", "order": support_end}
            exact = True
        else:
            cert = {"reason": "max-order", "order": max_order, "truncated": True}
    phi = {r: v for r, v in phi.items() if v or r == 1}
    total: PolyVec = {}
    for r in sorted(phi):
        total = pv_add(total, phi[r])
    square = pv_bracket(model, total, total)
    raw = _harmonic_polys(hodge, square)
    obstructions = []
    for p in raw:
        if p:
            q = p.normalized()
            if q not in obstructions:
                obstructions.append(q)
    if exact:
        smooth = not obstructions
    else:
        smooth = None
    certificate = None
    if exact and not obstructions:
        certificate = "trivial-bracket" if model_bracket_vanishes_on(model, eta) else "no-obstructions"
    return KuranishiResult(model, hodge, eta, names, aliases, phi, obstructions, cert, exact,
                           smooth, certificate, square, raw)


def _vec_label(model, v: SVec) -> str:
    parts = []
    for i in sorted(v):
        s = v[i]
        lab = model.label(i)
        parts.append(lab if s == 1 else f"({s})*{lab}")
    return " + ".join(parts)


def _harmonic_polys(hodge: HodgePackage, x: PolyVec) -> List[Poly]:
    basis3 = hodge.harmonic_basis(3)
    coeffs: List[Dict[Monomial, Scalar]] = [dict() for _ in basis3]
    for mono, v in x.items():
        for l, c in enumerate(hodge.harmonic_coordinates(v, 3)):
            if c:
                coeffs[l][mono] = coeffs[l].get(mono, ZERO) + c
    return [Poly(c) for c in coeffs]


def model_bracket_vanishes_on(model, eta: Sequence[SVec]) -> bool:
    return all(not model.bracket_vec(a, b) for a in eta for b in eta)


def obstruction_ideal(result: KuranishiResult) -> List[Poly]:
    return list(result.obstructions)


def mc_residual(result: KuranishiResult) -> PolyVec:
    """dbar phi + 1/2 [phi, phi] - 1/2 H[phi, phi].

    This vanishes where the obstructions do, not identically; see mc_defect.
    """
    model, hodge = result.model, result.hodge
    total = result.phi_total()
    out = pv_map(total, model.diff_vec)
    sq = result.bracket_square
    out = pv_add(out, sq, HALF)
    out = pv_add(out, pv_map(sq, hodge.project), -HALF)
    return out


def mc_defect(result: KuranishiResult) -> PolyVec:
    """1/2 dbar^* G dbar [phi, phi], which equals the residual for an exact expansion."""
    model, hodge = result.model, result.hodge
    return pv_map(result.bracket_square,
                  lambda v: scale(hodge.adjoint_vec(hodge.green(model.diff_vec(v))), HALF))


def mc_identity_holds(result: KuranishiResult) -> bool:
    """The residual identity; with H[phi, phi] = 0 it forces the residual to vanish."""
    return result.exact and mc_residual(result) == mc_defect(result)


def restrict_classical(result: KuranishiResult) -> Tuple[List[int], List[Poly]]:
    """Restrict to parameters whose harmonic vectors lie in bidegree (1,1)."""
    m = result.model
    keep = [i for i, v in enumerate(result.eta) if all(m.bigrade(j) == (1, 1) for j in v)]
    out = []
    for p in result.raw_obstructions:
        q = p.restrict(keep)
        if q:
            q = q.normalized()
            if q not in out:
                out.append(q)
    return keep, out


def deform_frame(model, eps: Element) -> List[Tuple[str, Element]]:
    """The deformed frame E + i_E eps of the structure's +i eigenbundle.

    The frame consists of the conjugate vectors and the holomorphic covectors;
    each is contracted into eps with the dual pairing.
    """
    if eps and eps.degrees() != {2}:
        raise InputError("bad-degree", "eps", "the deformation must have degree 2")
    T = model.algebra
    spec = model.spec
    alphas = spec.alphas() if spec is not None else [T.identity] * T.N
    out = []
    for a in range(T.N):
        al = alphas[a]
        for kind, twist in ((VECB, al.conj()), (COV, al.inverse())):
            g = T.gen_id(kind, a)
            base = T.gen(g, twist)
            out.append((T.label(twist, (g,)), base + T.contract(g, eps, twist)))
    return out
