"""Exact Gaussian rationals, characters of C^n and a triviality oracle.

A character is c(z) = exp(sum a_k z_k + b_k zbar_k).  The holomorphic weights
``a`` and antiholomorphic weights ``b`` are Gaussian rationals, so products of
characters are exact weight sums and triviality on a lattice reduces to
membership in an integer lattice.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InputError, UnresolvableError

_NUM = r"[+-]?\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    r"^\s*(?:(?P<re>" + _NUM + r")\s*)?"
    r"(?:(?P<sign>[+-])?\s*(?P<im>\d+(?:/\d+)?)?\s*\*?\s*(?P<i>[ij]))?\s*$"
)


class Scalar:
    """Element re + i*im of Q(i)."""

    __slots__ = ("re", "im", "_hash")

    def __init__(self, re_part=0, im_part=0):
        self.re = re_part if type(re_part) is Fraction else Fraction(re_part)
        self.im = im_part if type(im_part) is Fraction else Fraction(im_part)
        self._hash = None

    @classmethod
    def coerce(cls, value) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls(value)
        if isinstance(value, str):
            return parse_scalar(value)
        if isinstance(value, complex):
            raise TypeError("floating complex values are not exact")
        raise TypeError(f"cannot convert {value!r} to Scalar")

    def __add__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        return Scalar(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not self.im and not other.im:
            return Scalar(self.re * other.re)
        return Scalar(self.re * other.re - self.im * other.im,
                      self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Scalar):
            other = Scalar.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero scalar")
        if not other.im:
            return Scalar(self.re / other.re, self.im / other.re)
        n = other.re * other.re + other.im * other.im
        return Scalar((self.re * other.re + self.im * other.im) / n,
                      (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other):
        return Scalar.coerce(other) / self

    def __neg__(self):
        return Scalar(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash((self.re, self.im)) if self.im else hash(self.re)
        return h

    def conj(self) -> "Scalar":
        return Scalar(self.re, -self.im)

    def norm2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return not self.im

    def sort_key(self):
        return (self.re, self.im)

    def __repr__(self):
        return f"Scalar({str(self)!r})"

    def __str__(self):
        return format_scalar(self)


ZERO = Scalar(0)
ONE = Scalar(1)
I = Scalar(0, 1)


def format_scalar(s: Scalar) -> str:
    re_part, im_part = s.re, s.im
    if not im_part:
        return str(re_part)
    mag = abs(im_part)
    im_txt = "i" if mag == 1 else f"{mag} i"
    if not re_part:
        return ("-" if im_part < 0 else "") + im_txt
    return f"{re_part}{'-' if im_part < 0 else '+'}{im_txt}"


def parse_scalar(text: str) -> Scalar:
    """Parse strings such as ``"-1/2"``, ``"i"``, ``"3/4 i"``, ``"1/2+3/4 i"``."""
    if not isinstance(text, str):
        if isinstance(text, int) and not isinstance(text, bool):
            return Scalar(text)
        raise InputError("bad-scalar", "", f"expected a rational string, got {text!r}")
    m = _SCALAR_RE.match(text)
    if not m or (m.group("re") is None and m.group("i") is None):
        raise InputError("bad-scalar", "", f"cannot parse scalar {text!r}")
    re_part = Fraction(m.group("re")) if m.group("re") else Fraction(0)
    im_part = Fraction(0)
    if m.group("i"):
        if m.group("re") is not None and m.group("sign") is None:
            # "3/4i" reads as real digits followed by i: the digits are imaginary
            im_part, re_part = re_part, Fraction(0)
        else:
            im_part = Fraction(m.group("im")) if m.group("im") else Fraction(1)
            if m.group("sign") == "-":
                im_part = -im_part
    return Scalar(re_part, im_part)


class Character:
    """c(z) = exp(sum_k holo[k] z_k + anti[k] zbar_k)."""

    __slots__ = ("holo", "anti", "_hash")

    def __init__(self, holo: Sequence, anti: Sequence):
        if len(holo) != len(anti):
            raise ValueError("holomorphic and antiholomorphic weight lengths differ")
        self.holo = tuple(Scalar.coerce(x) for x in holo)
        self.anti = tuple(Scalar.coerce(x) for x in anti)
        self._hash = hash((self.holo, self.anti))

    @classmethod
    def identity(cls, n: int) -> "Character":
        return _identity(n)

    @property
    def n(self) -> int:
        return len(self.holo)

    def __mul__(self, other: "Character") -> "Character":
        return char_mul(self, other)

    def __pow__(self, k: int) -> "Character":
        return Character([a * k for a in self.holo], [b * k for b in self.anti])

    def inverse(self) -> "Character":
        return Character([-a for a in self.holo], [-b for b in self.anti])

    def conj(self) -> "Character":
        """The pointwise complex conjugate function."""
        return Character([b.conj() for b in self.anti], [a.conj() for a in self.holo])

    def is_identity(self) -> bool:
        return not any(self.holo) and not any(self.anti)

    def is_holomorphic(self) -> bool:
        return not any(self.anti)

    def is_unitary(self) -> bool:
        # |c| = 1 iff Re(a z + b zbar) = 0 for all z, i.e. b = -conj(a)
        return all(b == -a.conj() for a, b in zip(self.holo, self.anti))

    def is_real(self) -> bool:
        return all(b == a.conj() for a, b in zip(self.holo, self.anti))

    def __eq__(self, other):
        if not isinstance(other, Character):
            return NotImplemented
        return self._hash == other._hash and self.holo == other.holo and self.anti == other.anti

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return tuple(x.sort_key() for x in self.holo + self.anti)

    def to_json(self) -> dict:
        return {"holo": [str(a) for a in self.holo], "anti": [str(b) for b in self.anti]}

    def __repr__(self):
        return f"Character({format_character(self)})"

    def __str__(self):
        return format_character(self)


_IDENTITIES: dict = {}


def _identity(n: int) -> Character:
    c = _IDENTITIES.get(n)
    if c is None:
        c = _IDENTITIES[n] = Character([0] * n, [0] * n)
    return c


_MUL_CACHE: dict = {}


def char_mul(c1: Character, c2: Character) -> Character:
    key = (c1, c2)
    out = _MUL_CACHE.get(key)
    if out is None:
        if c1.n != c2.n:
            raise InputError("dimension-mismatch", "", f"characters on C^{c1.n} and C^{c2.n}")
        if c1.is_identity():
            out = c2
        elif c2.is_identity():
            out = c1
        else:
            out = Character([a + b for a, b in zip(c1.holo, c2.holo)],
                            [a + b for a, b in zip(c1.anti, c2.anti)])
        if len(_MUL_CACHE) > 200000:
            _MUL_CACHE.clear()
        _MUL_CACHE[key] = out
    return out


def unitary_part(c: Character) -> Character:
    """The unitary character beta with c = |c| * beta.

    With c = exp(a z + b zbar), |c| = exp(Re((a + conj b) z)), so
    beta = exp(-conj(b) z + b zbar).
    """
    return Character([-b.conj() for b in c.anti], list(c.anti))


def log_derivative(c: Character, k: int, conjugated: bool = False) -> Scalar:
    """(d/dz_k c) / c, or (d/dzbar_k c) / c when ``conjugated``."""
    if not 0 <= k < c.n:
        raise InputError("bad-direction", "", f"direction {k} out of range for C^{c.n}")
    return c.anti[k] if conjugated else c.holo[k]


def format_character(c: Character) -> str:
    if c.is_identity():
        return "1"
    parts = []
    for k, (a, b) in enumerate(zip(c.holo, c.anti), start=1):
        for coef, var in ((a, f"z{k}"), (b, f"zb{k}")):
            if not coef:
                continue
            txt = str(coef)
            if coef.re and coef.im:
                txt = f"({txt})"
            if coef == 1:
                term = var
            elif coef == -1:
                term = "-" + var
            else:
                term = f"{txt}*{var}"
            if parts and not term.startswith("-"):
                term = "+" + term
            parts.append(term)
    return "exp(" + "".join(parts) + ")"


def character_from_json(obj, n: int, path: str = "") -> Character:
    if not isinstance(obj, dict) or "holo" not in obj or "anti" not in obj:
        raise InputError("bad-character", path, "a character needs 'holo' and 'anti' weight lists")
    holo, anti = obj["holo"], obj["anti"]
    if not isinstance(holo, list) or not isinstance(anti, list):
        raise InputError("bad-character", path, "character weights must be lists")
    if len(holo) != n or len(anti) != n:
        raise InputError("bad-character", path,
                         f"character weights must have length {n}")
    try:
        return Character([parse_scalar(x) for x in holo], [parse_scalar(x) for x in anti])
    except InputError as err:
        raise InputError("bad-character", path, err.message) from None


# --- integer lattices -------------------------------------------------------

def _char_vector(c: Character) -> list:
    v = []
    for x in c.holo + c.anti:
        v.append(x.re)
        v.append(x.im)
    return v


def _hnf_rows(rows: list) -> list:
    """Row-style Hermite normal form basis of the integer span of ``rows``."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    if not rows:
        return basis
    width = len(rows[0])
    col = 0
    while rows and col < width:
        nz = [r for r in rows if r[col]]
        zero = [r for r in rows if not r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                (rest if r2[col] else zero).append(r2)
            nz = [piv] + rest
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [r for r in zero if any(r)]
        col += 1
    return basis


def _in_span(basis: list, v: list) -> bool:
    v = list(v)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return not any(v)


class TrivialityOracle:
    """Decides whether a character restricts trivially to the lattice.

    In ``sublattice`` mode the caller lists characters generating the relevant
    character group and integer exponent vectors whose products are trivial;
    their integer span is the trivial subgroup.  In ``rule-table`` mode an
    explicit finite table of verdicts is consulted.
    """

    def __init__(self, mode: str = "sublattice", generators: Sequence[Character] = (),
                 trivial: Sequence[Sequence[int]] = (), rules: Sequence = (), n: int = 0):
        self.mode = mode
        self.n = n
        self.generators = tuple(generators)
        self.trivial = tuple(tuple(int(e) for e in t) for t in trivial)
        self.rules = tuple(rules)
        self._cache: dict = {}
        if mode == "sublattice":
            for g in self.generators:
                if g.n != n:
                    raise InputError("bad-oracle", "oracle.generators", "generator length mismatch")
            for t in self.trivial:
                if len(t) != len(self.generators):
                    raise InputError("bad-oracle", "oracle.trivial",
                                     "exponent vector length must match the generator count")
            vecs = [_char_vector(g) for g in self.generators]
            den = 1
            for v in vecs:
                for x in v:
                    den = den * x.denominator // _gcd(den, x.denominator)
            self._den = den
            ivecs = [[int(x * den) for x in v] for v in vecs]
            self._gen_basis = _hnf_rows(ivecs)
            triv = [[sum(e * v[i] for e, v in zip(t, ivecs)) for i in range(4 * n)]
                    for t in self.trivial]
            self._triv_basis = _hnf_rows(triv)
        elif mode == "rule-table":
            self._table = {}
            for c, verdict in self.rules:
                self._table[c] = bool(verdict)
        else:
            raise InputError("bad-oracle", "oracle.mode", f"unknown oracle mode {mode!r}")

    @classmethod
    def everything_trivial(cls, n: int) -> "TrivialityOracle":
        """Oracle for a trivial action: only the identity character occurs."""
        return cls("sublattice", (), (), n=n)

    def is_trivial(self, c: Character) -> bool:
        out = self._cache.get(c)
        if out is None:
            out = self._cache[c] = self._decide(c)
        return out

    def _decide(self, c: Character) -> bool:
        if c.is_identity():
            return True
        if self.mode == "rule-table":
            if c in self._table:
                return self._table[c]
            if c.inverse() in self._table:
                return self._table[c.inverse()]
            raise UnresolvableError(f"character {c} is not listed in the rule table")
        v = _char_vector(c)
        scaled = [x * self._den for x in v]
        if any(x.denominator != 1 for x in scaled):
            raise UnresolvableError(f"character {c} lies outside the declared generator span")
        iv = [int(x) for x in scaled]
        if not _in_span(self._gen_basis, iv):
            raise UnresolvableError(f"character {c} lies outside the declared generator span")
        return _in_span(self._triv_basis, iv)

    def describe(self) -> dict:
        if self.mode == "rule-table":
            return {"mode": "rule-table",
                    "rules": [{"character": c.to_json(), "trivial": v} for c, v in self.rules]}
        return {"mode": "sublattice",
                "generators": [g.to_json() for g in self.generators],
                "trivial": [list(t) for t in self.trivial]}


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def is_trivial_on_lattice(c: Character, oracle: TrivialityOracle) -> bool:
    return oracle.is_trivial(c)


def product(chars: Iterable[Character], n: int) -> Character:
    out = Character.identity(n)
    for c in chars:
        out = char_mul(out, c)
    return out
