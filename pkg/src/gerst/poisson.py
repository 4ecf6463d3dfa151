"""Holomorphic Poisson cohomology and the weak mirror comparison.

A holomorphic Poisson bivector mu acts on a polyvector model by L = [mu, -].
Since the differential and L anticommute, D = dbar + L squares to zero and the
Poisson cohomology is the cohomology of D graded by total degree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, List, Optional, Sequence, Tuple

from .cohomology import CochainComplex, CohomologyTable, compute
from .errors import AssumptionError, RejectionError, StructuralError
from .exterior import COV, COVB, VEC, VECB, Element, merge_sign
from .linalg import SVec, axpy
from .manifest import ManifoldSpec
from .models import FiniteDGA, build_splitting_models, build_symplectic_models, check_condition_D
from .scalar import Character, char_mul, unitary_part


@dataclass
class PoissonStructure:
    model: FiniteDGA
    mu: Element
    vec: SVec
    _cache: Dict[int, SVec] = field(default_factory=dict, repr=False)

    def apply(self, i: int) -> SVec:
        """[mu, e_i] in model coordinates."""
        out = self._cache.get(i)
        if out is None:
            out = self._cache[i] = self.model.bracket_vec(self.vec, {i: 1})
        return out

    def apply_vec(self, v: SVec) -> SVec:
        out: SVec = {}
        for i, s in v.items():
            axpy(out, s, self.apply(i))
        return out

    def total(self, i: int) -> SVec:
        out = dict(self.model.diff(i))
        axpy(out, 1, self.apply(i))
        return out


def mu_from_spec(spec: ManifoldSpec) -> Element:
    T = spec.algebra()
    mu = Element()
    for t in spec.mu or []:
        mu = mu + T.parse_word(t.word, t.twist, t.coef)
    return mu


def verify_poisson(model: FiniteDGA, mu: Element) -> PoissonStructure:
    T = model.algebra
    for (c, w), _ in mu.terms.items():
        if len(w) != 2 or any(T.kind_of(g) != VEC for g in w):
            raise RejectionError(f"{T.label(c, w)} is not a holomorphic bivector term", mu, T.format(mu))
    vec = model.coords(mu, "mu")
    for what, res in (("mu is not holomorphic: dbar mu != 0", model.diff_vec(vec)),
                      ("mu is not Poisson: [mu, mu] != 0", model.bracket_vec(vec, vec))):
        if res:
            el = model.to_element(res)
            raise RejectionError(what, el, T.format(el))
    return PoissonStructure(model, mu, vec)


def check_double_complex(ps: PoissonStructure) -> None:
    """dbar L + L dbar = 0 and L^2 = 0 on every basis word."""
    m = ps.model
    for i in range(m.size):
        acc = ps.apply_vec(m.diff(i))
        axpy(acc, 1, m.diff_vec(ps.apply(i)))
        if acc:
            raise StructuralError(f"dbar and [mu, -] do not anticommute on {m.label(i)}")
        if ps.apply_vec(ps.apply(i)):
            raise StructuralError(f"[mu, -]^2 != 0 on {m.label(i)}")


def poisson_complex(ps: PoissonStructure) -> CochainComplex:
    m = ps.model
    pieces: Dict[int, List[int]] = {}
    for i in range(m.size):
        pieces.setdefault(m.degree(i), []).append(i)
    return CochainComplex(pieces, ps.total, lambda g: g + 1)


def poisson_cohomology(model: FiniteDGA, ps: PoissonStructure, check: bool = True) -> CohomologyTable:
    """Total cohomology of (model, dbar + [mu, -]) by total degree.

    Both pivot orders must agree and the Euler characteristic must equal the
    alternating sum of the model's dimensions.
    """
    if ps.model is not model:
        raise StructuralError("Poisson structure belongs to a different model")
    if check:
        check_double_complex(ps)
    cx = poisson_complex(ps)
    table = compute(cx, "forward")
    other = compute(cx, "reverse", representatives=False)
    if other.dims != table.dims:
        raise StructuralError("elimination orders disagree on Poisson cohomology")
    chi = sum((-1) ** k * d for k, d in model.dims_by_degree().items())
    if table.euler_characteristic() != chi:
        raise StructuralError("Euler characteristic of Poisson cohomology is inconsistent")
    return table


def dims_list(table: CohomologyTable, top: int) -> List[int]:
    return [table.dims.get(k, 0) for k in range(top + 1)]


# --- weak mirror symmetry ---------------------------------------------------------

@dataclass
class MirrorReport:
    left: Dict[int, int]
    right: Dict[int, int]
    matched: bool
    explicit_map: Optional[List[Tuple[str, str, int]]] = None
    failure_witness: Optional[dict] = None
    checks: Dict[str, bool] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "matched": self.matched,
            "witness": self.failure_witness,
            "dims_left": {str(k): v for k, v in sorted(self.left.items())},
            "dims_right": {str(k): v for k, v in sorted(self.right.items())},
            "checks": dict(sorted(self.checks.items())),
            "map": [list(p) for p in self.explicit_map] if self.explicit_map is not None else None,
        }


def mirror_layout(spec: ManifoldSpec) -> int:
    """Number d of paired fiber directions, checking the pairing alpha_{d+i} = alpha_i^-1."""
    m = spec.m
    if m % 2:
        raise AssumptionError("the fiber must have an even number of directions")
    d = m // 2
    chars = [c for _, c in spec.fiber]
    for i in range(d):
        if not chars[i].is_real():
            raise AssumptionError(f"character of {spec.fiber[i][0]} is not real")
        if chars[d + i] != chars[i].inverse():
            raise AssumptionError(f"{spec.fiber[d + i][0]} does not carry the inverse character "
                                  f"of {spec.fiber[i][0]}")
    return d


def _signed_product(chars: Sequence[Character], e: Sequence[int], n: int) -> Character:
    out = Character.identity(n)
    for c, k in zip(chars, e):
        if k:
            out = char_mul(out, c ** k)
    return out


def mirror_hypothesis(spec: ManifoldSpec) -> Optional[dict]:
    """Check that beta-words and alpha-words are trivial on the lattice together.

    Words depend only on e = 1_{J'} - 1_{J''} + 1_{L'} - 1_{L''}; returns None
    when the hypothesis holds, else a witnessing quadruple (1-based indices).
    """
    d = mirror_layout(spec)
    n = spec.n
    alphas = [c for _, c in spec.fiber[:d]]
    betas = [unitary_part(a) for a in alphas]
    seen = set()
    subsets = [s for r in range(d + 1) for s in combinations(range(d), r)]
    for Jp, Jpp, Lp, Lpp in product(subsets, repeat=4):
        e = [(i in Jp) - (i in Jpp) + (i in Lp) - (i in Lpp) for i in range(d)]
        key = tuple(e)
        if key in seen:
            continue
        seen.add(key)
        bt = spec.oracle.is_trivial(_signed_product(betas, e, n))
        at = spec.oracle.is_trivial(_signed_product(alphas, e, n))
        if bt != at:
            return {"J'": [i + 1 for i in Jp], "J''": [i + 1 for i in Jpp],
                    "L'": [i + 1 for i in Lp], "L''": [i + 1 for i in Lpp],
                    "beta_trivial": bt, "alpha_trivial": at}
    return None


def smss_hypothesis(spec: ManifoldSpec) -> Tuple[bool, Optional[dict]]:
    """beta_J^-1 gamma_L trivial iff alpha_J conj(alpha_L)^-1 trivial, for all J, L."""
    return check_condition_D(spec, 2 * spec.m)


def mirror_word(A: FiniteDGA, C: FiniteDGA, i: int, d: int) -> Tuple[int, SVec]:
    """Image in C of the A basis word i, swapping the two halves of the fiber vectors."""
    T = A.algebra
    n = T.N - 2 * d
    c, w = A.words[i]
    gens = []
    for g in w:
        k, a = T.kind_of(g), T.index_of(g)
        if k == COV:
            if a >= n:
                j = a - n
                a = n + (j + d if j < d else j - d)
            gens.append(T.gen_id(VEC, a))
        elif k == COVB:
            gens.append(g)
        else:
            raise StructuralError(f"{A.label(i)} is not a form")
    res = merge_sign([[g] for g in gens])
    if res is None:
        raise StructuralError("repeated generator in mirror image")
    sign, word = res
    return sign, C.coords(T.word(word, c, sign), "mirror image")


def mirror_compare(complex_model: FiniteDGA, symplectic_model: FiniteDGA, spec: ManifoldSpec,
                   exhaustive_degree: int = 2) -> MirrorReport:
    """Certify the quasi-isomorphism of the complex and symplectic sides.

    The certificate is the explicit one: trivial differentials and brackets on
    both sides plus a degree-preserving bijection of basis words.
    """
    C, A = complex_model, symplectic_model
    dims_c = C.dims_by_degree()
    dims_a = A.dims_by_degree()
    checks: Dict[str, bool] = {}
    witness = mirror_hypothesis(spec)
    checks["hypothesis"] = witness is None
    if witness is not None:
        return MirrorReport(dims_a, dims_c, False, None, {"reason": "hypothesis", **witness}, checks)
    checks["trivial_differentials"] = (C.differential_is_trivial_certificate()
                                       and _differential_vanishes(A))
    checks["trivial_brackets"] = (C.bracket_is_trivial_certificate()
                                  and _bracket_vanishes(A, exhaustive_degree)
                                  and _bracket_vanishes(C, exhaustive_degree))
    d = mirror_layout(spec)
    pairs: List[Tuple[str, str, int]] = []
    hit = set()
    ok = True
    for i in range(A.size):
        try:
            sign, img = mirror_word(A, C, i, d)
        except StructuralError:
            ok = False
            witness = {"reason": "unmatched word", "word": A.label(i)}
            break
        (j, s), = img.items()
        if C.degree(j) != A.degree(i) or j in hit:
            ok = False
            witness = {"reason": "degree mismatch", "word": A.label(i)}
            break
        hit.add(j)
        pairs.append((A.label(i), C.label(j), sign))
    if ok and len(hit) != C.size:
        ok = False
        missing = next(j for j in range(C.size) if j not in hit)
        witness = {"reason": "unmatched word", "word": C.label(missing)}
    checks["bijection"] = ok
    checks["dims"] = dims_a == dims_c
    if ok and not checks["dims"]:
        witness = {"reason": "dimension mismatch"}
    matched = all(checks.values())
    if not matched and witness is None:
        witness = {"reason": ", ".join(k for k, v in checks.items() if not v)}
    return MirrorReport(dims_a, dims_c, matched, pairs if ok else None, witness, checks)


def _differential_vanishes(model: FiniteDGA) -> bool:
    return all(not model.diff(i) for i in range(model.size))


def _bracket_vanishes(model: FiniteDGA, max_degree: int) -> bool:
    idx = [i for i in range(model.size) if model.degree(i) <= max_degree]
    return all(not model.bracket(i, j) for i in idx for j in idx)


def mirror_models(spec: ManifoldSpec) -> Tuple[FiniteDGA, FiniteDGA]:
    """(complex-side model C, symplectic-side forms model A) of a symplectic manifest."""
    _, C = build_splitting_models(spec)
    A = build_symplectic_models(spec).A
    return C, A
