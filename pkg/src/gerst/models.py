"""Finite-dimensional models built from a manifest.

Every model is the span of a finite list of monomial basis elements
c(z) * word.  Differentials and brackets are evaluated with the twisted
exterior engine and expressed back in the basis; anything landing outside the
span is reported as a closure failure.
"""

from __future__ import annotations

from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import AssumptionError, ClosureError, StructuralError
from .exterior import COV, COVB, VEC, VECB, Element, TwistedExterior, merge_sign
from .linalg import SVec, axpy, dense_inverse
from .manifest import ManifoldSpec
from .scalar import ONE, Character, Scalar, TrivialityOracle, char_mul, unitary_part

BasisWord = Tuple[Character, Tuple[int, ...]]


class FiniteDGA:
    """A finite monomial model with lazily evaluated structure maps.

    ``role`` is ``"dga"`` for polyvector-valued (0,q)-forms, ``"forms"`` for
    differential forms and ``"polyvectors"`` for real polyvector fields.
    """

    def __init__(self, name: str, algebra: TwistedExterior, words: Sequence[BasisWord], *,
                 role: str, differential: Optional[str] = "dbar", orthonormal: bool = True,
                 canonical_frame: Optional[Element] = None, spec: Optional[ManifoldSpec] = None):
        self.name = name
        self.algebra = algebra
        self.role = role
        self.differential_kind = differential
        self.orthonormal = orthonormal
        self.canonical_frame = canonical_frame
        self.spec = spec
        T = algebra
        keyed = sorted(words, key=lambda cw: (len(cw[1]), T.bigrade(cw[1])[0], cw[1], cw[0].sort_key()))
        self.words: List[BasisWord] = keyed
        self.index: Dict[BasisWord, int] = {cw: i for i, cw in enumerate(keyed)}
        if len(self.index) != len(keyed):
            raise StructuralError("duplicate basis words")
        self._deg = [len(w) for _, w in keyed]
        self._bigrade = [T.bigrade(w) for _, w in keyed]
        self._diff: Dict[int, SVec] = {}
        self._br: Dict[Tuple[int, int], SVec] = {}
        self._wedge: Dict[Tuple[int, int], SVec] = {}
        self._differential_element: Optional[Callable[[Element], Element]] = None
        self._bracket_hook: Optional[Callable[[int, int], SVec]] = None

    # -- bookkeeping --------------------------------------------------------

    def __len__(self):
        return len(self.words)

    @property
    def size(self) -> int:
        return len(self.words)

    def degree(self, i: int) -> int:
        return self._deg[i]

    def bigrade(self, i: int) -> Tuple[int, int]:
        return self._bigrade[i]

    def indices(self, degree: Optional[int] = None, bigrade: Optional[Tuple[int, int]] = None) -> List[int]:
        return [i for i in range(len(self.words))
                if (degree is None or self._deg[i] == degree)
                and (bigrade is None or self._bigrade[i] == bigrade)]

    def dims_by_degree(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for d in self._deg:
            out[d] = out.get(d, 0) + 1
        return out

    def dims_by_bigrade(self) -> Dict[Tuple[int, int], int]:
        out: Dict[Tuple[int, int], int] = {}
        for b in self._bigrade:
            out[b] = out.get(b, 0) + 1
        return out

    def label(self, i: int) -> str:
        c, w = self.words[i]
        return self.algebra.label(c, w)

    def element(self, i: int) -> Element:
        c, w = self.words[i]
        return Element._raw({(c, w): ONE})

    def to_element(self, vec: SVec) -> Element:
        return Element({self.words[i]: s for i, s in vec.items()})

    def coords(self, x: Element, what: str = "result") -> SVec:
        out: SVec = {}
        for key, s in x.terms.items():
            i = self.index.get(key)
            if i is None:
                raise ClosureError(
                    f"{what} leaves the model {self.name}: term {self.algebra.label(*key)}")
            out[i] = s
        return out

    def try_coords(self, x: Element) -> Optional[SVec]:
        try:
            return self.coords(x)
        except ClosureError:
            return None

    # -- structure maps -----------------------------------------------------

    def _apply_d(self, x: Element) -> Element:
        if self._differential_element is not None:
            return self._differential_element(x)
        kind = self.differential_kind
        if kind is None:
            return Element()
        if kind == "dbar":
            return self.algebra.dbar(x)
        if kind == "d":
            return self.algebra.d(x)
        raise StructuralError(f"unknown differential {kind!r}")

    def diff(self, i: int) -> SVec:
        out = self._diff.get(i)
        if out is None:
            out = self._diff[i] = self.coords(self._apply_d(self.element(i)), "differential")
        return out

    def diff_vec(self, v: SVec) -> SVec:
        out: SVec = {}
        for i, s in v.items():
            axpy(out, s, self.diff(i))
        return out

    def diff_columns(self, degree: int) -> Tuple[List[int], List[SVec]]:
        idx = self.indices(degree=degree)
        return idx, [self.diff(i) for i in idx]

    def bracket(self, i: int, j: int) -> SVec:
        key = (i, j)
        out = self._br.get(key)
        if out is None:
            if self._bracket_hook is not None:
                out = self._bracket_hook(i, j)
            else:
                out = self.coords(self.algebra.bracket(self.element(i), self.element(j)), "bracket")
            self._br[key] = out
        return out

    def bracket_vec(self, x: SVec, y: SVec) -> SVec:
        out: SVec = {}
        for i, s in x.items():
            for j, t in y.items():
                axpy(out, s * t, self.bracket(i, j))
        return out

    def wedge(self, i: int, j: int) -> SVec:
        key = (i, j)
        out = self._wedge.get(key)
        if out is None:
            out = self._wedge[key] = self.coords(
                self.algebra.wedge(self.element(i), self.element(j)), "product")
        return out

    def wedge_vec(self, x: SVec, y: SVec) -> SVec:
        out: SVec = {}
        for i, s in x.items():
            for j, t in y.items():
                axpy(out, s * t, self.wedge(i, j))
        return out

    # -- checks -------------------------------------------------------------

    def check_d_squared(self, degrees: Optional[Sequence[int]] = None) -> bool:
        for i in range(len(self.words)):
            if degrees is not None and self._deg[i] not in degrees:
                continue
            if self.diff_vec(self.diff(i)):
                raise StructuralError(f"d^2 != 0 on {self.label(i)} in {self.name}")
        return True

    def complement(self, i: int) -> Optional[int]:
        """Index of the basis word with complementary generators (and twist)."""
        c, w = self.words[i]
        full = self._full_word()
        rest = tuple(g for g in full if g not in w)
        for j in self._by_word.get(rest, ()):
            return j
        return None

    def _full_word(self) -> Tuple[int, ...]:
        if not hasattr(self, "_full"):
            T = self.algebra
            kinds = {"dga": (VEC, COVB), "forms": (COV, COVB), "polyvectors": (VEC, VECB)}[self.role]
            self._full = tuple(T.gen_id(k, a) for k in kinds for a in range(T.N))
            by: Dict[Tuple[int, ...], List[int]] = {}
            for j, (_, w) in enumerate(self.words):
                by.setdefault(w, []).append(j)
            self._by_word = by
        return self._full

    def star_closed(self) -> Tuple[bool, Optional[str]]:
        """Every basis word has a complementary word in the basis."""
        for i in range(len(self.words)):
            if self.complement(i) is None:
                return False, self.label(i)
        return True, None

    def bracket_is_trivial_certificate(self) -> bool:
        """All twists constant and all generator brackets among used generators zero."""
        if not all(c.is_identity() for c, _ in self.words):
            return False
        gens = self._full_word()
        T = self.algebra
        for g in gens:
            for h in gens:
                kg, kh = T.kind_of(g), T.kind_of(h)
                if kg in (COV, COVB) and kh in (COV, COVB):
                    continue
                if T.gen_bracket(g, h):
                    return False
        return True

    def differential_is_trivial_certificate(self) -> bool:
        if self.differential_kind is None and self._differential_element is None:
            return True
        if self._differential_element is not None:
            return False
        T = self.algebra
        parts = ("dbar",) if self.differential_kind == "dbar" else ("dbar", "del")
        for c, _ in self.words:
            if any(c.anti) and "dbar" in parts:
                return False
            if any(c.holo) and "del" in parts:
                return False
        for g in self._full_word():
            for part in parts:
                if T.kind_of(g) in (VEC, VECB) and part == "del":
                    continue
                if T.kind_of(g) == VECB:
                    continue
                if T.gen_differential(g, part):
                    return False
        return True


# --- subsets ----------------------------------------------------------------

def _subsets(k: int):
    for r in range(k + 1):
        yield from combinations(range(k), r)


def _subset_products(chars: Sequence[Character], n: int) -> Dict[Tuple[int, ...], Character]:
    out = {(): Character.identity(n)}
    for r in range(1, len(chars) + 1):
        for s in combinations(range(len(chars)), r):
            out[s] = char_mul(out[s[:-1]], chars[s[-1]])
    return out


# --- nilmanifolds -------------------------------------------------------------

def build_nilmanifold_model(spec: ManifoldSpec) -> FiniteDGA:
    """The model on polyvectors of type (1,0) with (0,1)-form coefficients."""
    if spec.kind != "nilmanifold":
        raise AssumptionError(f"{spec.name} is not a nilmanifold manifest")
    T = spec.algebra()
    N = T.N
    one = T.identity
    words = []
    for I in _subsets(N):
        for K in _subsets(N):
            words.append((one, tuple(T.gen_id(VEC, a) for a in I) + tuple(T.gen_id(COVB, a) for a in K)))
    frame = T.word([T.gen_id(COV, a) for a in range(N)])
    if T.d(frame):
        raise StructuralError("the holomorphic volume form of the frame is not closed")
    model = FiniteDGA(f"{spec.name}:dG", T, words, role="dga", canonical_frame=frame, spec=spec)
    return model


def build_forms_model(spec: ManifoldSpec, differential: str = "d") -> FiniteDGA:
    """Left-invariant differential forms of a nilmanifold frame."""
    T = spec.algebra()
    N = T.N
    one = T.identity
    words = []
    for I in _subsets(N):
        for K in _subsets(N):
            words.append((one, tuple(T.gen_id(COV, a) for a in I) + tuple(T.gen_id(COVB, a) for a in K)))
    return FiniteDGA(f"{spec.name}:forms", T, words, role="forms", differential=differential, spec=spec)


# --- splitting type -------------------------------------------------------------

def unitary_parts(spec: ManifoldSpec):
    alphas = [c for _, c in spec.fiber]
    betas = [unitary_part(a) for a in alphas]
    gammas = [unitary_part(a.conj()) for a in alphas]
    return alphas, betas, gammas


def build_splitting_models(spec: ManifoldSpec) -> Tuple[FiniteDGA, FiniteDGA]:
    """The forms model B and the polyvector model C of a splitting-type solvmanifold."""
    if spec.kind == "nilmanifold":
        raise AssumptionError("nilmanifold manifests use build_nilmanifold_model")
    T = spec.algebra()
    n, m = spec.n, spec.m
    oracle = spec.oracle
    alphas, betas, gammas = unitary_parts(spec)
    abar = [a.conj() for a in alphas]
    P = lambda cs: _subset_products(cs, n)  # noqa: E731
    pa, pb, pg, pab = P(alphas), P(betas), P(gammas), P(abar)
    fsub = list(_subsets(m))
    bsub = list(_subsets(n))
    c_words, b_words = [], []
    for J in fsub:
        for L in fsub:
            key_c = char_mul(pb[J].inverse(), pg[L])
            key_b = char_mul(pb[J], pg[L])
            tail = tuple(T.gen_id(COVB, n + j) for j in L)
            if oracle.is_trivial(key_c):
                twist = char_mul(char_mul(pa[J], pb[J].inverse()), char_mul(pab[L].inverse(), pg[L]))
                fv = tuple(T.gen_id(VEC, n + j) for j in J)
                for I in bsub:
                    head = tuple(T.gen_id(VEC, a) for a in I) + fv
                    for K in bsub:
                        c_words.append((twist, head + tuple(T.gen_id(COVB, a) for a in K) + tail))
            if oracle.is_trivial(key_b):
                twist = char_mul(char_mul(pa[J].inverse(), pb[J]), char_mul(pab[L].inverse(), pg[L]))
                fc = tuple(T.gen_id(COV, n + j) for j in J)
                for I in bsub:
                    head = tuple(T.gen_id(COV, a) for a in I) + fc
                    for K in bsub:
                        b_words.append((twist, head + tuple(T.gen_id(COVB, a) for a in K) + tail))
    frame = T.word([T.gen_id(COV, a) for a in range(n + m)])
    if T.dbar(frame):
        raise StructuralError("the canonical frame is not holomorphic")
    B = FiniteDGA(f"{spec.name}:B", T, b_words, role="forms", canonical_frame=frame, spec=spec)
    C = FiniteDGA(f"{spec.name}:C", T, c_words, role="dga", canonical_frame=frame, spec=spec)
    return B, C


def build_parallelizable_models(spec: ManifoldSpec) -> Tuple[FiniteDGA, FiniteDGA]:
    """(0,q)-forms B* and polyvector model C* of a complex parallelizable solvmanifold."""
    for i, (nm, c) in enumerate(spec.fiber):
        if not c.is_holomorphic():
            raise AssumptionError(f"character of {nm} is not holomorphic")
    B, C = build_splitting_models(spec)
    b0 = [cw for cw in B.words if B.algebra.bigrade(cw[1])[0] == 0]
    Bstar = FiniteDGA(f"{spec.name}:B*", B.algebra, b0, role="forms", spec=spec)
    return Bstar, C


def build_complex_model(spec: ManifoldSpec) -> FiniteDGA:
    """The polyvector model appropriate for the manifest kind."""
    if spec.kind == "nilmanifold":
        return build_nilmanifold_model(spec)
    return build_splitting_models(spec)[1]


# --- conditions -----------------------------------------------------------------

def _ordered_pairs(m: int, r: int):
    pairs = []
    for J in _subsets(m):
        for L in _subsets(m):
            if len(J) + len(L) <= r:
                pairs.append((len(J) + len(L), len(J), J, L))
    pairs.sort()
    return [(J, L) for _, _, J, L in pairs]


def check_condition_D(spec: ManifoldSpec, r: int):
    """For |J|+|L| <= r: beta_J^-1 gamma_L trivial on the lattice iff alpha_J conj(alpha_L)^-1 = 1.

    Returns (holds, witness) with 1-based fiber indices in the witness.
    """
    n, m = spec.n, spec.m
    alphas, betas, gammas = unitary_parts(spec)
    pa = _subset_products(alphas, n)
    pb = _subset_products(betas, n)
    pg = _subset_products(gammas, n)
    pab = _subset_products([a.conj() for a in alphas], n)
    for J, L in _ordered_pairs(m, r):
        lhs = spec.oracle.is_trivial(char_mul(pb[J].inverse(), pg[L]))
        rhs = char_mul(pa[J], pab[L].inverse()).is_identity()
        if lhs != rhs:
            return False, {"J": [j + 1 for j in J], "L": [l + 1 for l in L]}
    return True, None


def check_condition_E(spec: ManifoldSpec, r: int):
    """For frame subsets |I| <= r: conj(alpha_I)/alpha_I trivial on the lattice iff alpha_I = 1."""
    alphas = spec.alphas()
    prods = _subset_products(alphas, spec.n)
    for size in range(r + 1):
        for I in combinations(range(len(alphas)), size):
            a = prods[I]
            lhs = spec.oracle.is_trivial(char_mul(a.conj(), a.inverse()))
            rhs = a.is_identity()
            if lhs != rhs:
                return False, {"I": [i + 1 for i in I]}
    return True, None


# --- duality with forms ---------------------------------------------------------

def duality_map(C: FiniteDGA, B: Optional[FiniteDGA] = None) -> Dict[int, SVec]:
    """Contraction with the canonical frame, from polyvectors to forms.

    A basis word c * V_A ^ xi (V_A holomorphic vectors, xi a (0,q)-form) goes
    to c * eps * e_{A'} ^ xi, where A' is the complement of A and eps is the
    sign with e_A ^ eps e_{A'} = +frame.  Returns images in coordinates of B
    when B is given, else as words keyed by B-like tuples.
    """
    T = C.algebra
    N = T.N
    out: Dict[int, SVec] = {}
    for i, (c, w) in enumerate(C.words):
        vecs = [T.index_of(g) for g in w if T.kind_of(g) == VEC]
        rest = tuple(g for g in w if T.kind_of(g) != VEC)
        comp = [a for a in range(N) if a not in vecs]
        sign, _ = merge_sign(([T.gen_id(COV, a) for a in vecs], [T.gen_id(COV, a) for a in comp]))
        img = T.word([T.gen_id(COV, a) for a in comp] + list(rest), c, sign)
        if B is not None:
            out[i] = B.coords(img, "duality image")
        else:
            out[i] = img
    return out


# --- symplectic models ------------------------------------------------------------

class SymplecticPair:
    """Forms model A, polyvector model D and the transport between them."""

    def __init__(self, A: FiniteDGA, D: FiniteDGA, omega: Element, flat: Dict[int, Element],
                 sharp: Dict[int, Element]):
        self.A = A
        self.D = D
        self.omega = omega
        self.flat = flat
        self.sharp = sharp

    def transport(self, i: int) -> SVec:
        """Image in A of the D basis word i under the wedge power of omega-flat."""
        T = self.D.algebra
        c, w = self.D.words[i]
        x = T.function(c)
        for g in w:
            x = T.wedge(x, self.flat[g])
        return self.A.coords(x, "transport")

    def transport_inverse(self, i: int) -> SVec:
        T = self.A.algebra
        c, w = self.A.words[i]
        x = T.function(c)
        for g in w:
            x = T.wedge(x, self.sharp[g])
        return self.D.coords(x, "inverse transport")


def build_symplectic_models(spec: ManifoldSpec) -> SymplecticPair:
    if spec.kind != "symplectic-splitting":
        raise AssumptionError(f"{spec.name} is not a symplectic manifest")
    T = spec.algebra()
    n, N = spec.n, T.N
    oracle = spec.oracle
    alphas = spec.alphas()
    fib = [alphas[a] for a in range(n, N)]
    # real characters: the conjugate direction carries the same character
    chars = fib + [a.conj() for a in fib]
    m = N - n
    fdirs = [(VEC, n + j) for j in range(m)] + [(VECB, n + j) for j in range(m)]
    bdirs = [(VEC, a) for a in range(n)] + [(VECB, a) for a in range(n)]
    prods = _subset_products(chars, n)
    a_words, d_words = [], []
    one = T.identity
    bsubs = list(_subsets(2 * n))
    for S, ch in prods.items():
        if not oracle.is_trivial(ch):
            continue
        for Bs in bsubs:
            dirs = [bdirs[b] for b in Bs] + [fdirs[f] for f in S]
            d_words.append((one, tuple(sorted(T.gen_id(k, a) for k, a in dirs))))
            a_words.append((one, tuple(sorted(T.gen_id(COV if k == VEC else COVB, a) for k, a in dirs))))
    A = FiniteDGA(f"{spec.name}:A", T, a_words, role="forms", differential="d", spec=spec)
    D = FiniteDGA(f"{spec.name}:D", T, d_words, role="polyvectors", differential=None, spec=spec)
    omega = Element()
    for t in spec.omega or []:
        omega = omega + T.parse_word(t.word, t.twist, t.coef)
    if A.try_coords(omega) is None:
        raise AssumptionError("omega is not an invariant form of the model")
    if T.d(omega):
        raise AssumptionError("omega is not closed")
    vec_ids = [T.gen_id(VEC, a) for a in range(N)] + [T.gen_id(VECB, a) for a in range(N)]
    cov_ids = [T.gen_id(COV, a) for a in range(N)] + [T.gen_id(COVB, a) for a in range(N)]
    flat = {g: T.contract(g, omega) for g in vec_ids}
    # matrix of flat: rows = covectors, columns = vectors
    mat = [[Scalar(0)] * (2 * N) for _ in range(2 * N)]
    pos = {g: k for k, g in enumerate(cov_ids)}
    for col, g in enumerate(vec_ids):
        for (c, w), s in flat[g].terms.items():
            if not c.is_identity() or len(w) != 1:
                raise AssumptionError("omega must have constant coefficients")
            mat[pos[w[0]]][col] = s
    try:
        inv = dense_inverse(mat)
    except ZeroDivisionError:
        raise AssumptionError("omega is degenerate") from None
    sharp = {}
    for row, g in enumerate(cov_ids):
        x = Element()
        for col, h in enumerate(vec_ids):
            s = inv[col][row]
            if s:
                x = x + T.gen(h).scale(s)
        sharp[g] = x
    pair = SymplecticPair(A, D, omega, flat, sharp)

    def transported(i: int, j: int) -> SVec:
        x = pair.transport_inverse(i)
        y = pair.transport_inverse(j)
        out: SVec = {}
        for k, s in D.bracket_vec(x, y).items():
            axpy(out, s, pair.transport(k))
        return out

    A._bracket_hook = transported
    return pair
