"""Multivariate polynomials with Gaussian rational coefficients."""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .scalar import ONE, ZERO, Scalar

Monomial = Tuple[int, ...]  # sorted variable indices with repetition


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(sorted(a + b))


def exponents(m: Monomial, nvars: int) -> Tuple[int, ...]:
    e = [0] * nvars
    for v in m:
        e[v] += 1
    return tuple(e)


class Poly:
    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Monomial, Scalar]] = None):
        self.terms: Dict[Monomial, Scalar] = {}
        for k, v in (terms or {}).items():
            v = Scalar.coerce(v)
            if v:
                self.terms[tuple(sorted(k))] = v

    @classmethod
    def var(cls, i: int) -> "Poly":
        return cls({(i,): ONE})

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): Scalar.coerce(c)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for k, v in other.terms.items():
            s = out.get(k, ZERO) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Poly(out)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + other.scale(-1)

    def __mul__(self, other: "Poly") -> "Poly":
        out: Dict[Monomial, Scalar] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = mono_mul(k1, k2)
                out[k] = out.get(k, ZERO) + v1 * v2
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = Scalar.coerce(c)
        return Poly({k: v * c for k, v in self.terms.items()})

    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=-1)

    def variables(self) -> set:
        return {v for k in self.terms for v in k}

    def restrict(self, keep: Iterable[int]) -> "Poly":
        """Set every variable outside ``keep`` to zero."""
        keep = set(keep)
        return Poly({k: v for k, v in self.terms.items() if all(x in keep for x in k)})

    def sorted_monomials(self) -> List[Monomial]:
        """Monomials in descending lexicographic order of exponent vectors."""
        nv = max((max(k) for k in self.terms if k), default=-1) + 1
        return sorted(self.terms, key=lambda k: exponents(k, nv), reverse=True)

    def leading(self) -> Tuple[Monomial, Scalar]:
        m = self.sorted_monomials()[0]
        return m, self.terms[m]

    def normalized(self) -> "Poly":
        """Scaled so that the lexicographically first monomial has coefficient 1."""
        if not self.terms:
            return self
        _, c = self.leading()
        return self.scale(ONE / c)

    def format(self, names: Sequence[str]) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in self.sorted_monomials():
            c = self.terms[m]
            body = "*".join(names[v] for v in m)
            if not body:
                txt = str(c)
            elif c == 1:
                txt = body
            elif c == -1:
                txt = "-" + body
            else:
                cs = str(c)
                if c.re and c.im:
                    cs = f"({cs})"
                txt = f"{cs}*{body}"
            if parts:
                txt = (" - " + txt[1:]) if txt.startswith("-") else " + " + txt
            parts.append(txt)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self.format([f't{i}' for i in range(64)])})"
