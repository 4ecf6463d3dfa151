"""Manifest parsing and validation.

A manifest describes a group G = C^n x N with a frame of N, the characters by
which C^n acts on that frame, brackets, a triviality oracle for the lattice and
optional symplectic or Poisson data.  JSON and TOML files share one schema.
Validation collects every violation instead of stopping at the first.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .errors import InputError, ManifestError
from .exterior import VEC, VECB, Frame, TwistedExterior
from .scalar import Character, Scalar, TrivialityOracle, character_from_json, parse_scalar, product

KINDS = ("nilmanifold", "splitting", "parallelizable", "symplectic-splitting")
_NAME_RE = re.compile(r"^[A-Z][A-Za-z0-9_]*$")


@dataclass
class Term:
    coef: Scalar
    twist: Optional[Character]
    word: str


@dataclass
class ManifoldSpec:
    name: str
    kind: str
    n: int
    base_names: Tuple[str, ...]
    fiber: Tuple[Tuple[str, Character], ...]
    hh: Dict[Tuple[int, int], Dict[int, Scalar]]
    ah: Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]]
    oracle: TrivialityOracle
    omega: Optional[List[Term]] = None
    mu: Optional[List[Term]] = None
    description: str = ""
    params: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.fiber)

    @property
    def names(self) -> Tuple[str, ...]:
        return self.base_names + tuple(nm for nm, _ in self.fiber)

    def alphas(self) -> List[Character]:
        """Characters of all frame directions, base ones trivial."""
        one = Character.identity(self.n)
        return [one] * self.n + [c for _, c in self.fiber]

    def frame(self) -> Frame:
        coord = tuple(range(self.n)) + (None,) * self.m
        return Frame(self.names, self.n, coord, self.hh, self.ah)

    def algebra(self) -> TwistedExterior:
        return TwistedExterior(self.frame())


def _viol(out: list, code: str, path: str, message: str):
    out.append(InputError(code, path, message))


def load_manifest_file(path) -> dict:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as err:
        raise InputError("unreadable", str(p), str(err)) from None
    if p.suffix.lower() == ".toml":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as err:
            raise InputError("bad-toml", str(p), str(err)) from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError("bad-json", str(p), str(err)) from None


def parse_manifest(obj) -> ManifoldSpec:
    """Parse and validate a manifest mapping (or a path to a JSON/TOML file)."""
    if isinstance(obj, (str, Path)):
        obj = load_manifest_file(obj)
    if not isinstance(obj, dict):
        raise ManifestError([InputError("bad-manifest", "", "manifest must be a mapping")])
    v: list = []
    kind = obj.get("kind")
    if kind not in KINDS:
        _viol(v, "bad-kind", "kind", f"kind must be one of {', '.join(KINDS)}")
    n = obj.get("n", 0)
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        _viol(v, "bad-n", "n", "n must be a non-negative integer")
        n = 0
    if kind == "nilmanifold" and n:
        _viol(v, "bad-n", "n", "nilmanifold manifests list every direction under 'fiber' and use n = 0")
    base = obj.get("base_names")
    if base is None:
        base = [f"Z{k + 1}" for k in range(n)]
    if not isinstance(base, list) or len(base) != n:
        _viol(v, "bad-base-names", "base_names", f"base_names must list {n} names")
        base = [f"Z{k + 1}" for k in range(n)]

    fiber_raw = obj.get("fiber", [])
    fiber: List[Tuple[str, Character]] = []
    if not isinstance(fiber_raw, list):
        _viol(v, "bad-fiber", "fiber", "fiber must be a list")
        fiber_raw = []
    for i, entry in enumerate(fiber_raw):
        path = f"fiber[{i}]"
        if not isinstance(entry, dict) or "name" not in entry:
            _viol(v, "bad-fiber", path, "fiber entries need a name")
            continue
        alpha = Character.identity(n)
        if "alpha" in entry:
            try:
                alpha = character_from_json(entry["alpha"], n, path + ".alpha")
            except InputError as err:
                v.append(err)
        fiber.append((str(entry["name"]), alpha))

    names = list(base) + [nm for nm, _ in fiber]
    seen = set()
    for i, nm in enumerate(names):
        path = f"base_names[{i}]" if i < n else f"fiber[{i - n}].name"
        if not isinstance(nm, str) or not _NAME_RE.match(nm):
            _viol(v, "bad-name", path, f"name {nm!r} must start with an uppercase letter")
        elif nm.lower() in seen:
            _viol(v, "duplicate-name", path, f"name {nm!r} is not unique (case-insensitively)")
        seen.add(str(nm).lower())
    index = {nm: a for a, nm in enumerate(names)}

    hh: Dict[Tuple[int, int], Dict[int, Scalar]] = {}
    ah: Dict[Tuple[int, int], Dict[Tuple[int, int], Scalar]] = {}
    brackets = obj.get("brackets", [])
    if not isinstance(brackets, list):
        _viol(v, "bad-brackets", "brackets", "brackets must be a list")
        brackets = []
    for i, entry in enumerate(brackets):
        path = f"brackets[{i}]"
        if not isinstance(entry, dict) or "pair" not in entry or "value" not in entry:
            _viol(v, "bad-bracket", path, "bracket entries need 'pair' and 'value'")
            continue
        pair = entry["pair"]
        value = entry["value"]
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(p, str) for p in pair)):
            _viol(v, "bad-bracket", path + ".pair", "pair must be two generator names")
            continue
        if isinstance(value, list):
            value = dict(value)
        if not isinstance(value, dict):
            _viol(v, "bad-bracket", path + ".value", "value must map generator names to coefficients")
            continue
        left, right = pair
        lbar, rbar = left.endswith("~"), right.endswith("~")
        a, b = index.get(left.rstrip("~")), index.get(right.rstrip("~"))
        if a is None or b is None:
            _viol(v, "unknown-generator", path + ".pair", f"unknown generator in {pair}")
            continue
        terms: Dict[Tuple[int, int], Scalar] = {}
        ok = True
        for key, coef in value.items():
            c = index.get(str(key).rstrip("~"))
            if c is None:
                _viol(v, "unknown-generator", f"{path}.value.{key}", f"unknown generator {key!r}")
                ok = False
                continue
            try:
                s = parse_scalar(coef)
            except InputError as err:
                _viol(v, "bad-scalar", f"{path}.value.{key}", err.message)
                ok = False
                continue
            if s:
                terms[(VECB if str(key).endswith("~") else VEC, c)] = s
        if not ok:
            continue
        if lbar and rbar:
            _viol(v, "bad-bracket", path, "list brackets of conjugate vectors through their holomorphic pair")
            continue
        if lbar == rbar:
            if any(k == VECB for k, _ in terms):
                _viol(v, "bad-bracket", path, "brackets of two vectors of the same type stay in that type")
                continue
            if a == b:
                if terms:
                    _viol(v, "antisymmetry", path, "[A, A] must vanish")
                continue
            sgn = 1 if a < b else -1
            key2 = (min(a, b), max(a, b))
            tab = {c: s if sgn > 0 else -s for (_, c), s in terms.items()}
            if key2 in hh and hh[key2] != tab:
                _viol(v, "antisymmetry", path, f"conflicting entries for {pair}")
            hh[key2] = tab
        else:
            # store [conj(E_a), E_b]
            if lbar:
                ah[(a, b)] = terms
            else:
                ah[(b, a)] = {k: -s for k, s in terms.items()}

    # the bracket is the complexification of a real one: conj([E~_a, E_b]) = -[E~_b, E_a]
    for (a, b), terms in list(ah.items()):
        mirror = {(VEC if k == VECB else VECB, c): -s.conj() for (k, c), s in terms.items()}
        if (b, a) in ah and ah[(b, a)] != mirror:
            _viol(v, "reality", "brackets",
                  f"mixed brackets of {names[a]} and {names[b]} are not conjugate-compatible")
        ah[(b, a)] = mirror

    oracle = None
    oracle_raw = obj.get("oracle", {"mode": "sublattice", "generators": [], "trivial": []})
    try:
        oracle = _parse_oracle(oracle_raw, n)
    except InputError as err:
        v.append(err)

    omega = _parse_terms(obj.get("omega"), n, "omega", v)
    mu = _parse_terms(obj.get("mu"), n, "mu", v)

    spec = None
    if not v and kind in KINDS:
        spec = ManifoldSpec(
            name=str(obj.get("name", "unnamed")), kind=kind, n=n, base_names=tuple(base),
            fiber=tuple(fiber), hh=hh, ah=ah, oracle=oracle, omega=omega, mu=mu,
            description=str(obj.get("description", "")), params=dict(obj.get("params", {})),
            raw=obj)
        _check_structure(spec, v)
    if v:
        raise ManifestError(v)
    return spec


def _parse_oracle(raw, n: int) -> TrivialityOracle:
    if not isinstance(raw, dict):
        raise InputError("bad-oracle", "oracle", "oracle must be a mapping")
    mode = raw.get("mode", "sublattice")
    if mode == "sublattice":
        gens = [character_from_json(g, n, f"oracle.generators[{i}]")
                for i, g in enumerate(raw.get("generators", []))]
        triv = raw.get("trivial", [])
        if not isinstance(triv, list) or not all(
                isinstance(t, list) and all(isinstance(e, int) and not isinstance(e, bool) for e in t)
                for t in triv):
            raise InputError("bad-oracle", "oracle.trivial", "trivial must be a list of integer vectors")
        return TrivialityOracle("sublattice", gens, triv, n=n)
    if mode == "rule-table":
        rules = []
        for i, r in enumerate(raw.get("rules", [])):
            if not isinstance(r, dict) or "character" not in r or "trivial" not in r:
                raise InputError("bad-oracle", f"oracle.rules[{i}]", "rules need 'character' and 'trivial'")
            rules.append((character_from_json(r["character"], n, f"oracle.rules[{i}].character"),
                          bool(r["trivial"])))
        table = dict(rules)
        for c, verdict in rules:
            inv = c.inverse()
            if inv in table and table[inv] != verdict:
                raise InputError("inconsistent-rules", "oracle.rules",
                                 f"{c} and its inverse receive different verdicts")
        for (c1, v1), (c2, v2) in combinations(rules, 2):
            prod = c1 * c2
            if v1 and v2 and prod in table and not table[prod]:
                raise InputError("inconsistent-rules", "oracle.rules",
                                 f"the product of trivial characters {c1} and {c2} is marked non-trivial")
        return TrivialityOracle("rule-table", rules=rules, n=n)
    raise InputError("bad-oracle", "oracle.mode", f"unknown oracle mode {mode!r}")


def _parse_terms(raw, n: int, key: str, v: list) -> Optional[List[Term]]:
    if raw is None:
        return None
    if not isinstance(raw, list):
        _viol(v, "bad-terms", key, f"{key} must be a list of terms")
        return None
    out = []
    for i, t in enumerate(raw):
        path = f"{key}[{i}]"
        if not isinstance(t, dict) or "word" not in t:
            _viol(v, "bad-terms", path, "terms need a 'word'")
            continue
        try:
            coef = parse_scalar(t.get("coef", "1"))
            twist = character_from_json(t["twist"], n, path + ".twist") if "twist" in t else None
        except InputError as err:
            _viol(v, err.code, path, err.message)
            continue
        out.append(Term(coef, twist, str(t["word"])))
    return out


def _check_structure(spec: ManifoldSpec, v: list):
    T = spec.algebra()
    N = T.N
    alphas = spec.alphas()
    # characters must be compatible with the brackets so the twisted frame is invariant
    for (a, b), tab in spec.hh.items():
        for c, s in tab.items():
            if s and alphas[a] * alphas[b] != alphas[c]:
                _viol(v, "character-mismatch", "brackets",
                      f"[{spec.names[a]}, {spec.names[b]}] has a {spec.names[c]} component "
                      f"but the characters do not multiply accordingly")
    for (a, b), tab in spec.ah.items():
        for (kind, c), s in tab.items():
            target = alphas[c] if kind == VEC else alphas[c].conj()
            if s and alphas[a].conj() * alphas[b] != target:
                _viol(v, "character-mismatch", "brackets",
                      f"[{spec.names[a]}~, {spec.names[b]}] is incompatible with the characters")
    for a in range(spec.n):
        for key in list(spec.hh) + list(spec.ah):
            if a in key:
                _viol(v, "bad-bracket", "brackets",
                      f"base coordinate {spec.names[a]} must not appear in fiber brackets")
                break
    # Jacobi on the complexified algebra
    vecs = [T.gen_id(VEC, a) for a in range(N)] + [T.gen_id(VECB, a) for a in range(N)]
    try:
        for x, y, z in combinations(vecs, 3):
            if _jacobi(T, x, y, z):
                _viol(v, "jacobi", "brackets",
                      f"Jacobi fails on ({T.name(x)}, {T.name(y)}, {T.name(z)})")
                break
    except Exception as err:  # pragma: no cover - defensive
        _viol(v, "jacobi", "brackets", str(err))
    if spec.kind == "nilmanifold":
        if lower_central_length(T) is None:
            _viol(v, "not-nilpotent", "brackets", "the Lie algebra is not nilpotent")
        for i, (nm, c) in enumerate(spec.fiber):
            if not c.is_identity():
                _viol(v, "bad-character", f"fiber[{i}].alpha", "nilmanifold frames carry no characters")
    else:
        if not product([c for _, c in spec.fiber], spec.n).is_identity():
            _viol(v, "not-unimodular", "fiber", "the product of all fiber characters must be trivial")
    if spec.kind == "parallelizable":
        for i, (nm, c) in enumerate(spec.fiber):
            if not c.is_holomorphic():
                _viol(v, "not-holomorphic", f"fiber[{i}].alpha",
                      "holomorphically parallelizable models need holomorphic characters")
        if spec.ah:
            _viol(v, "bad-bracket", "brackets", "complex Lie groups have no mixed brackets")
    if spec.kind == "symplectic-splitting":
        for i, (nm, c) in enumerate(spec.fiber):
            if not c.is_real():
                _viol(v, "not-real", f"fiber[{i}].alpha", "symplectic models need real-valued characters")
        if not spec.omega:
            _viol(v, "missing-omega", "omega", "symplectic models need a 2-form omega")
    for key, terms in (("omega", spec.omega), ("mu", spec.mu)):
        for i, t in enumerate(terms or []):
            try:
                T.parse_word(t.word)
            except InputError as err:
                _viol(v, "unknown-generator", f"{key}[{i}].word", err.message)


def _jacobi(T: TwistedExterior, x: int, y: int, z: int) -> bool:
    def br(u: dict, g: int) -> dict:
        out: dict = {}
        for h, s in u.items():
            for k, t in T.gen_bracket(h, g).items():
                out[k] = out.get(k, 0) + s * t
        return out

    def add(*ds):
        out: dict = {}
        for d in ds:
            for k, s in d.items():
                out[k] = out.get(k, 0) + s
        return {k: s for k, s in out.items() if s}

    one = Scalar(1)
    return bool(add(br(br({x: one}, y), z), br(br({y: one}, z), x), br(br({z: one}, x), y)))


def lower_central_length(T: TwistedExterior) -> Optional[int]:
    """Nilpotency step of the complexified frame algebra, or None if not nilpotent."""
    from .linalg import span_basis
    N = T.N
    vecs = [T.gen_id(VEC, a) for a in range(N)] + [T.gen_id(VECB, a) for a in range(N)]
    current = [{g: Scalar(1)} for g in vecs]
    step = 0
    while True:
        nxt = []
        for u in current:
            for g in vecs:
                out: dict = {}
                for h, s in u.items():
                    for k, t in T.gen_bracket(h, g).items():
                        out[k] = out.get(k, Scalar(0)) + s * t
                out = {k: s for k, s in out.items() if s}
                if out:
                    nxt.append(out)
        nxt = span_basis(nxt)
        step += 1
        if not nxt:
            return step
        if len(nxt) >= len(span_basis(current)):
            return None
        current = nxt
