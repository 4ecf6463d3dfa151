"""Built-in example manifests and user example packs.

Built-in examples are generated from parameters, so families such as
``tyy-family`` accept ``n`` and ``cxn1n2-k1-k2`` accepts ``k1`` and ``k2``.
Extra manifests are picked up from the directory named by the
``GERST_EXAMPLES_DIR`` environment variable; the file stem is the key.
"""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from .errors import InputError
from .manifest import ManifoldSpec, load_manifest_file, parse_manifest


def _q(x) -> str:
    return str(Fraction(x))


def _char(holo, anti) -> dict:
    return {"holo": [_q(a) for a in holo], "anti": [_q(b) for b in anti]}


def _exp_x(weights) -> dict:
    """exp(sum_k w_k x_k) with x_k = Re z_k."""
    half = [Fraction(w) / 2 for w in weights]
    return _char(half, half)


def _exp_minus_iy(weights) -> dict:
    """exp(-i sum_k w_k y_k) with y_k = Im z_k."""
    half = [Fraction(w) / 2 for w in weights]
    return _char([-h for h in half], half)


def _unit(n: int, k: int, scale=1) -> list:
    return [scale if j == k else 0 for j in range(n)]


def heisenberg_c(params: dict) -> dict:
    return {
        "name": "heisenberg-c",
        "description": "complex Heisenberg group times C with the Poisson bivector X^Z + Y^W",
        "kind": "nilmanifold",
        "fiber": [{"name": nm} for nm in ("X", "Y", "Z", "W")],
        "brackets": [{"pair": ["X", "Y"], "value": {"Z": "1"}}],
        "mu": [{"coef": "1", "word": "X^Z"}, {"coef": "1", "word": "Y^W"}],
    }


def iwasawa(params: dict) -> dict:
    return {
        "name": "iwasawa",
        "description": "Iwasawa manifold: quotient of the complex Heisenberg group",
        "kind": "nilmanifold",
        "fiber": [{"name": nm} for nm in ("X", "Y", "Z")],
        "brackets": [{"pair": ["X", "Y"], "value": {"Z": "1"}}],
    }


def filiform(params: dict) -> dict:
    return {
        "name": "filiform-4",
        "description": "complex filiform nilpotent Lie group of dimension 4 (3-step)",
        "kind": "nilmanifold",
        "fiber": [{"name": f"X{k}"} for k in range(1, 5)],
        "brackets": [{"pair": ["X1", "X2"], "value": {"X3": "1"}},
                     {"pair": ["X1", "X3"], "value": {"X4": "1"}}],
    }


def cxn1n2(params: dict) -> dict:
    k1 = int(params.get("k1", 1))
    k2 = int(params.get("k2", 2))
    if k1 == 0 or k2 == 0 or k1 == k2:
        raise InputError("bad-param", "params", "k1 and k2 must be distinct and nonzero")
    ks = [k1, k2, k1 + k2]
    fiber = [{"name": f"Y1{j + 1}", "alpha": _exp_x([k])} for j, k in enumerate(ks)]
    fiber += [{"name": f"Y2{j + 1}", "alpha": _exp_x([-k])} for j, k in enumerate(ks)]
    return {
        "name": f"cxn1n2-k{k1}-k{k2}",
        "description": "C acting on two copies of the complex Heisenberg group by exp(k x)",
        "kind": "splitting",
        "n": 1,
        "fiber": fiber,
        "brackets": [{"pair": ["Y11", "Y12"], "value": {"Y13": "1"}},
                     {"pair": ["Y21", "Y22"], "value": {"Y23": "1"}}],
        "oracle": {"mode": "sublattice", "generators": [_exp_x([1]), _exp_minus_iy([1])], "trivial": []},
        "params": {"k1": k1, "k2": k2},
    }


def nakamura(pi_case: bool) -> Callable[[dict], dict]:
    def build(params: dict) -> dict:
        out = {
            "name": "nakamura-pi" if pi_case else "nakamura-generic",
            "description": ("Nakamura manifold, lattice with exp(zbar - z) trivial"
                            if pi_case else "Nakamura manifold, generic lattice"),
            "kind": "parallelizable",
            "n": 1,
            "fiber": [{"name": "Z2", "alpha": _char([1], [0])},
                      {"name": "Z3", "alpha": _char([-1], [0])}],
            "oracle": {"mode": "sublattice", "generators": [_char([-1], [1])],
                       "trivial": [[1]] if pi_case else []},
            "mu": [{"coef": "1", "twist": _char([1], [0]), "word": "Z1^Z2"}],
        }
        return out
    return build


def nak_family(params: dict) -> dict:
    a = [int(x) for x in params.get("a", [1])]
    extra = bool(params.get("extra_factor", True))
    if not a or any(x == 0 for x in a):
        raise InputError("bad-param", "params.a", "weights must be nonzero integers")
    n = 2 if extra else 1
    d = len(a)
    fiber = [{"name": f"W1_{i + 1}", "alpha": _exp_x([w] + [0] * (n - 1))} for i, w in enumerate(a)]
    fiber += [{"name": f"W2_{i + 1}", "alpha": _exp_x([-w] + [0] * (n - 1))} for i, w in enumerate(a)]
    omega = [{"coef": "i", "word": f"z{k}^z{k}~"} for k in range(1, n + 1)]
    for i in range(1, d + 1):
        omega.append({"coef": "1", "word": f"w1_{i}^w2_{i}~"})
        omega.append({"coef": "1", "word": f"w1_{i}~^w2_{i}"})
    out = {
        "name": "nak-family",
        "description": "C acting on C^2d by exp(a_i x) and exp(-a_i x), generic lattice"
                       + (", times an extra factor C" if extra else ""),
        "kind": "symplectic-splitting",
        "n": n,
        "fiber": fiber,
        "oracle": {"mode": "sublattice",
                   "generators": [_exp_x(_unit(n, 0)), _exp_minus_iy(_unit(n, 0))],
                   "trivial": []},
        "omega": omega,
        "params": {"a": a, "extra_factor": extra},
    }
    if extra:
        out["mu"] = [{"coef": "1", "word": "Z1^Z2"}] + [
            {"coef": "1", "word": f"W1_{i}^W2_{i}"} for i in range(1, d + 1)]
    return out


def tyy_family(params: dict) -> dict:
    n = int(params.get("n", 1))
    if n < 1:
        raise InputError("bad-param", "params.n", "n must be positive")
    weights = [_unit(n, j) for j in range(n)] + [[-1] * n]
    fiber = [{"name": f"W1_{j + 1}", "alpha": _exp_x(w)} for j, w in enumerate(weights)]
    fiber += [{"name": f"W2_{j + 1}", "alpha": _exp_x([-x for x in w])} for j, w in enumerate(weights)]
    omega = [{"coef": "i", "word": f"z{k}^z{k}~"} for k in range(1, n + 1)]
    for i in range(1, n + 2):
        omega.append({"coef": "1", "word": f"w1_{i}^w2_{i}~"})
        omega.append({"coef": "1", "word": f"w1_{i}~^w2_{i}"})
    gens = [_exp_x(_unit(n, j)) for j in range(n)] + [_exp_minus_iy(_unit(n, j)) for j in range(n)]
    return {
        "name": "tyy-family",
        "description": f"C^{n} acting on C^{2 * n + 2} with real weights summing to zero",
        "kind": "symplectic-splitting",
        "n": n,
        "fiber": fiber,
        "oracle": {"mode": "sublattice", "generators": gens, "trivial": []},
        "omega": omega,
        "params": {"n": n},
    }


def torus(k: int) -> Callable[[dict], dict]:
    def build(params: dict) -> dict:
        return {
            "name": f"torus-{k}",
            "description": f"complex torus of dimension {k} with the standard Kaehler form",
            "kind": "symplectic-splitting",
            "n": k,
            "fiber": [],
            "omega": [{"coef": "i", "word": f"z{j}^z{j}~"} for j in range(1, k + 1)],
        }
    return build


BUILTINS: Dict[str, Callable[[dict], dict]] = {
    "heisenberg-c": heisenberg_c,
    "iwasawa": iwasawa,
    "filiform-4": filiform,
    "cxn1n2-k1-k2": cxn1n2,
    "nakamura-generic": nakamura(False),
    "nakamura-pi": nakamura(True),
    "nak-family": nak_family,
    "tyy-family": tyy_family,
    "torus-1": torus(1),
    "torus-2": torus(2),
    "torus-3": torus(3),
}


def _user_dir() -> Optional[Path]:
    d = os.environ.get("GERST_EXAMPLES_DIR")
    if not d:
        return None
    p = Path(d)
    return p if p.is_dir() else None


def _user_files() -> Dict[str, Path]:
    d = _user_dir()
    out: Dict[str, Path] = {}
    if d is None:
        return out
    for f in sorted(d.iterdir()):
        if f.suffix.lower() in (".json", ".toml") and f.stem not in BUILTINS:
            out[f.stem] = f
    return out


def list_examples() -> List[Tuple[str, str, str]]:
    """(key, source, description) for every available example."""
    out = []
    for key, fn in BUILTINS.items():
        out.append((key, "builtin", fn({}).get("description", "")))
    for key, f in _user_files().items():
        try:
            desc = load_manifest_file(f).get("description", "")
        except InputError:
            desc = "(unreadable)"
        out.append((key, str(f), desc))
    return out


def get_manifest(key: str, params: Optional[dict] = None) -> dict:
    params = dict(params or {})
    if key in BUILTINS:
        return BUILTINS[key](params)
    files = _user_files()
    if key in files:
        obj = load_manifest_file(files[key])
        if params:
            obj = dict(obj)
            obj["params"] = {**obj.get("params", {}), **params}
        return obj
    raise InputError("unknown-example", key, f"no example named {key!r}")


def load_spec(key: str, params: Optional[dict] = None) -> ManifoldSpec:
    return parse_manifest(get_manifest(key, params))
