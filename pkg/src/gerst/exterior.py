"""Twisted exterior calculus on a complex Lie algebra frame.

A frame is a basis E_1..E_N of the holomorphic tangent directions, together
with their brackets.  Four families of degree-one generators are built from
it: vectors E_a, antiholomorphic vectors conj(E_a), holomorphic covectors e_a
and antiholomorphic covectors conj(e_a).  Elements are finite sums of
c(z) * (wedge word), where c is a :class:`Character` and a word is a sorted
tuple of generator ids.

Some frame directions may be the coordinate fields d/dz_k of C^n; characters
are differentiated along those directions and are constant along the rest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import InputError, StructuralError
from .scalar import ONE, ZERO, Character, Scalar, char_mul

VEC, COV, VECB, COVB = 0, 1, 2, 3
KIND_NAMES = ("vector", "covector", "conjugate vector", "conjugate covector")

Word = Tuple[int, ...]


@dataclass(frozen=True)
class Frame:
    """Complex frame with structure constants.

    ``hh[(a, b)]`` for a < b maps c -> coefficient of E_c in [E_a, E_b].
    ``ah[(a, b)]`` maps (kind, c) -> coefficient in [conj(E_a), E_b], with kind
    VEC or VECB.  Brackets of two conjugate vectors are the conjugates of ``hh``.
    ``coord[a]`` is k when E_a is the coordinate field d/dz_k of the abelian
    factor, else None.
    """

    names: Tuple[str, ...]
    n: int
    coord: Tuple[Optional[int], ...]
    hh: Mapping[Tuple[int, int], Mapping[int, Scalar]] = field(default_factory=dict)
    ah: Mapping[Tuple[int, int], Mapping[Tuple[int, int], Scalar]] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.names)

    def is_complex_lie(self) -> bool:
        return not any(any(v for v in t.values()) for t in self.ah.values())


def merge_sign(parts: Sequence[Sequence[int]]):
    """Sign and sorted word of the concatenation of ``parts``; None on a repeat."""
    seq = [g for p in parts for g in p]
    if len(set(seq)) != len(seq):
        return None
    # count inversions
    inv = 0
    for i in range(len(seq)):
        si = seq[i]
        for j in range(i + 1, len(seq)):
            if seq[j] < si:
                inv += 1
    return (-1 if inv & 1 else 1), tuple(sorted(seq))


class Element:
    """Finite sum of twisted words with Gaussian rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        self.terms: Dict[Tuple[Character, Word], Scalar] = {}
        if terms:
            for k, v in terms.items():
                if v:
                    self.terms[k] = v

    @classmethod
    def _raw(cls, terms: dict) -> "Element":
        e = cls.__new__(cls)
        e.terms = terms
        return e

    def __bool__(self):
        return bool(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k)
            s = v if s is None else s + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Element._raw(out)

    def __sub__(self, other: "Element") -> "Element":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "Element":
        s = Scalar.coerce(s)
        if not s:
            return Element()
        return Element._raw({k: v * s for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms

    def degrees(self) -> set:
        return {len(w) for (_, w) in self.terms}

    def homogeneous_degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("element is not homogeneous")
        return ds.pop() if ds else 0

    def __repr__(self):
        return f"Element({len(self.terms)} terms)"


def _acc(out: dict, key, val):
    s = out.get(key)
    if s is None:
        out[key] = val
    else:
        s = s + val
        if s:
            out[key] = s
        else:
            del out[key]


class TwistedExterior:
    """Generators, wedge, contraction, bracket and differentials for a frame."""

    def __init__(self, frame: Frame):
        self.frame = frame
        self.N = frame.size
        self.n = frame.n
        self.identity = Character.identity(frame.n)
        self.coord_index = {}
        for a, k in enumerate(frame.coord):
            if k is not None:
                self.coord_index[k] = a
        self._names = []
        for kind in range(4):
            for a in range(self.N):
                self._names.append(self._make_name(kind, frame.names[a]))
        self._ids = {nm: i for i, nm in enumerate(self._names)}
        self._gb_cache: dict = {}
        self._gd_cache: dict = {}

    # -- naming -------------------------------------------------------------

    @staticmethod
    def _make_name(kind: int, base: str) -> str:
        if kind == VEC:
            return base
        if kind == VECB:
            return base + "~"
        if kind == COV:
            return base.lower()
        return base.lower() + "~"

    def gen_id(self, kind: int, a: int) -> int:
        return kind * self.N + a

    def kind_of(self, g: int) -> int:
        return g // self.N

    def index_of(self, g: int) -> int:
        return g % self.N

    def name(self, g: int) -> str:
        return self._names[g]

    def lookup(self, token: str) -> int:
        try:
            return self._ids[token]
        except KeyError:
            raise InputError("unknown-generator", "", f"unknown generator {token!r}") from None

    def word_name(self, w: Word) -> str:
        return "^".join(self._names[g] for g in w) if w else "1"

    def label(self, c: Character, w: Word) -> str:
        body = self.word_name(w)
        if c.is_identity():
            return body
        return f"{c}*{body}"

    def format(self, x: Element) -> str:
        """Readable sum, terms sorted by word then twist."""
        if not x:
            return "0"
        parts = []
        for (c, w), s in sorted(x.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0][1],
                                                                  kv[0][0].sort_key())):
            lab = self.label(c, w)
            parts.append(lab if s == 1 else f"({s})*{lab}")
        return " + ".join(parts)

    def bigrade(self, w: Word) -> Tuple[int, int]:
        p = sum(1 for g in w if g // self.N in (VEC, COV))
        return p, len(w) - p

    # -- constructors -------------------------------------------------------

    def gen(self, token, twist: Optional[Character] = None) -> Element:
        g = self.lookup(token) if isinstance(token, str) else token
        return Element._raw({(twist or self.identity, (g,)): ONE})

    def word(self, tokens: Iterable, twist: Optional[Character] = None, coef=1) -> Element:
        ids = [self.lookup(t) if isinstance(t, str) else t for t in tokens]
        ms = merge_sign([ids])
        if ms is None:
            return Element()
        sign, w = ms
        return Element._raw({(twist or self.identity, w): Scalar.coerce(coef) * sign})

    def function(self, c: Character, coef=1) -> Element:
        return Element({(c, ()): Scalar.coerce(coef)})

    def parse_word(self, text: str, twist: Optional[Character] = None, coef=1) -> Element:
        text = text.strip()
        if text in ("", "1"):
            return self.function(twist or self.identity, coef)
        return self.word([t.strip() for t in text.split("^")], twist, coef)

    # -- products -----------------------------------------------------------

    def wedge(self, x: Element, y: Element) -> Element:
        out: dict = {}
        for (c1, w1), v1 in x.terms.items():
            for (c2, w2), v2 in y.terms.items():
                ms = merge_sign((w1, w2))
                if ms is None:
                    continue
                sign, w = ms
                v = v1 * v2
                _acc(out, (char_mul(c1, c2), w), v if sign > 0 else -v)
        return Element._raw(out)

    def dual(self, g: int) -> int:
        kind, a = divmod(g, self.N)
        return self.gen_id(_DUAL[kind], a)

    def contract(self, g: int, x: Element, twist: Optional[Character] = None) -> Element:
        """Interior product of the generator g (times ``twist``) into x.

        g pairs with its dual generator: vectors with covectors of the same
        type, normalized so the pairing of dual generators is 1.
        """
        target = self.dual(g)
        out: dict = {}
        for (c, w), v in x.terms.items():
            if target not in w:
                continue
            i = w.index(target)
            rest = w[:i] + w[i + 1:]
            c2 = c if twist is None else char_mul(twist, c)
            _acc(out, (c2, rest), v if i % 2 == 0 else -v)
        return Element._raw(out)

    # -- brackets -----------------------------------------------------------

    def log_derivative(self, c: Character, g: int) -> Scalar:
        kind, a = divmod(g, self.N)
        k = self.frame.coord[a]
        if k is None or kind in (COV, COVB):
            return ZERO
        return c.holo[k] if kind == VEC else c.anti[k]

    def gen_bracket(self, g: int, h: int) -> Dict[int, Scalar]:
        """[g, h] for untwisted degree-one generators, as {generator: coefficient}."""
        key = (g, h)
        out = self._gb_cache.get(key)
        if out is None:
            out = self._gb_cache[key] = self._gen_bracket(g, h)
        return out

    def _gen_bracket(self, g: int, h: int) -> Dict[int, Scalar]:
        N = self.N
        kg, a = divmod(g, N)
        kh, b = divmod(h, N)
        fr = self.frame
        out: Dict[int, Scalar] = {}
        if kg in (COV, COVB) and kh in (COV, COVB):
            return out
        if kg == VEC and kh == VEC:
            if a == b:
                return out
            if a < b:
                for c, v in fr.hh.get((a, b), {}).items():
                    out[VEC * N + c] = v
            else:
                for c, v in fr.hh.get((b, a), {}).items():
                    out[VEC * N + c] = -v
            return {k: v for k, v in out.items() if v}
        if kg == VECB and kh == VECB:
            if a == b:
                return out
            sign = 1 if a < b else -1
            for c, v in fr.hh.get((min(a, b), max(a, b)), {}).items():
                out[VECB * N + c] = v.conj() if sign > 0 else -v.conj()
            return {k: v for k, v in out.items() if v}
        if kg == VECB and kh == VEC:
            for (kind, c), v in fr.ah.get((a, b), {}).items():
                if v:
                    out[kind * N + c] = v
            return out
        if kg == VEC and kh == VECB:
            for (kind, c), v in fr.ah.get((b, a), {}).items():
                if v:
                    out[kind * N + c] = -v
            return out
        if kg == VEC and kh == COVB:
            # L_{E_a} conj(e_b) = sum_c conj(e_b)([conj(E_c), E_a]) conj(e_c)
            for c in range(N):
                v = fr.ah.get((c, a), {}).get((VECB, b))
                if v:
                    out[COVB * N + c] = v
            return out
        if kg == COVB and kh == VEC:
            return {k: -v for k, v in self.gen_bracket(h, g).items()}
        raise StructuralError(
            f"bracket of {self.name(g)} with {self.name(h)} is not tabulated")

    def _word_bracket(self, u: Word, v: Word) -> Dict[Word, Scalar]:
        out: dict = {}
        for i, gi in enumerate(u):
            urest = u[:i] + u[i + 1:]
            for j, gj in enumerate(v):
                br = self.gen_bracket(gi, gj)
                if not br:
                    continue
                vrest = v[:j] + v[j + 1:]
                base = 1 if (i + j) % 2 == 0 else -1
                for k, coef in br.items():
                    ms = merge_sign(((k,), urest, vrest))
                    if ms is None:
                        continue
                    sign, w = ms
                    _acc(out, w, coef if sign * base > 0 else -coef)
        return out

    def _twist_derivation(self, c: Character, u: Word) -> Dict[Word, Scalar]:
        """D_c(U) with [U, c] = c * D_c(U)."""
        out: dict = {}
        p = len(u)
        for i, gi in enumerate(u):
            lam = self.log_derivative(c, gi)
            if not lam:
                continue
            w = u[:i] + u[i + 1:]
            _acc(out, w, lam if (p - 1 - i) % 2 == 0 else -lam)
        return out

    def bracket(self, x: Element, y: Element) -> Element:
        """Graded bracket extending the Lie bracket and Lie derivative as a biderivation."""
        out: dict = {}
        for (c1, u), s1 in x.terms.items():
            p = len(u)
            for (c2, v), s2 in y.terms.items():
                q = len(v)
                coef = s1 * s2
                c = char_mul(c1, c2)
                for w, val in self._word_bracket(u, v).items():
                    _acc(out, (c, w), val * coef)
                if p:
                    for w1, val in self._twist_derivation(c2, u).items():
                        ms = merge_sign((w1, v))
                        if ms is not None:
                            val2 = val * coef
                            _acc(out, (c, ms[1]), val2 if ms[0] > 0 else -val2)
                if q:
                    outer = -1 if ((p - 1) * (q - 1)) % 2 == 0 else 1
                    for w1, val in self._twist_derivation(c1, v).items():
                        ms = merge_sign((w1, u))
                        if ms is not None:
                            val2 = val * coef
                            _acc(out, (c, ms[1]), val2 if ms[0] * outer > 0 else -val2)
        return Element._raw(out)

    # -- differentials ------------------------------------------------------

    def gen_differential(self, g: int, part: str) -> Dict[Word, Scalar]:
        key = (g, part)
        out = self._gd_cache.get(key)
        if out is None:
            out = self._gd_cache[key] = self._gen_differential(g, part)
        return out

    def _gen_differential(self, g: int, part: str) -> Dict[Word, Scalar]:
        N = self.N
        fr = self.frame
        kind, b = divmod(g, N)
        out: dict = {}

        def add(parts, v):
            if not v:
                return
            ms = merge_sign(parts)
            if ms is not None:
                _acc(out, ms[1], v if ms[0] > 0 else -v)

        if part == "dbar":
            if kind == VEC:
                # dbar E_b = sum_c conj(e_c) ^ [conj(E_c), E_b]^{1,0}
                for c in range(N):
                    for (k2, e), v in fr.ah.get((c, b), {}).items():
                        if k2 == VEC:
                            add(((COVB * N + c,), (VEC * N + e,)), v)
            elif kind == COVB:
                for (c, d), tab in fr.hh.items():
                    v = tab.get(b)
                    if v:
                        add(((COVB * N + c,), (COVB * N + d,)), -v.conj())
            elif kind == COV:
                for c in range(N):
                    for d in range(N):
                        v = fr.ah.get((d, c), {}).get((VEC, b))
                        if v:
                            add(((COV * N + c,), (COVB * N + d,)), v)
            else:
                raise StructuralError("dbar of conjugate vectors is not part of any model")
        elif part == "del":
            if kind == COV:
                for (c, d), tab in fr.hh.items():
                    v = tab.get(b)
                    if v:
                        add(((COV * N + c,), (COV * N + d,)), -v)
            elif kind == COVB:
                for c in range(N):
                    for d in range(N):
                        v = fr.ah.get((d, c), {}).get((VECB, b))
                        if v:
                            add(((COV * N + c,), (COVB * N + d,)), v)
            else:
                raise StructuralError("del is defined on forms only")
        else:
            raise ValueError(part)
        return out

    def _char_differential(self, c: Character, part: str) -> Dict[Word, Scalar]:
        out = {}
        for k in range(self.n):
            a = self.coord_index.get(k)
            w = c.anti[k] if part == "dbar" else c.holo[k]
            if not w:
                continue
            if a is None:
                raise StructuralError(f"coordinate z{k + 1} has no frame direction")
            kind = COVB if part == "dbar" else COV
            out[(kind * self.N + a,)] = w
        return out

    def _differential(self, x: Element, parts: Sequence[str]) -> Element:
        out: dict = {}
        for (c, w), s in x.terms.items():
            for part in parts:
                for w1, v in self._char_differential(c, part).items():
                    ms = merge_sign((w1, w))
                    if ms is not None:
                        val = v * s
                        _acc(out, (c, ms[1]), val if ms[0] > 0 else -val)
                for i, g in enumerate(w):
                    dg = self.gen_differential(g, part)
                    if not dg:
                        continue
                    before, after = w[:i], w[i + 1:]
                    for w1, v in dg.items():
                        ms = merge_sign((before, w1, after))
                        if ms is not None:
                            sign = ms[0] if i % 2 == 0 else -ms[0]
                            val = v * s
                            _acc(out, (c, ms[1]), val if sign > 0 else -val)
        return Element._raw(out)

    def dbar(self, x: Element) -> Element:
        return self._differential(x, ("dbar",))

    def delta(self, x: Element) -> Element:
        """The (1,0) part of the exterior derivative on forms."""
        return self._differential(x, ("del",))

    def d(self, x: Element) -> Element:
        """Full exterior derivative on forms."""
        return self._differential(x, ("del", "dbar"))


_DUAL = {VEC: COV, COV: VEC, VECB: COVB, COVB: VECB}
