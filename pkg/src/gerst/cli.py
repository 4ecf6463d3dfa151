"""Command line entry point.

    gerst <command> (<example-key> | --manifest FILE) [--param K=V] [--max-order N]
                    [--out FILE] [--format json|text]

Exit status is 0 on success, 1 when a computation rejects its input and 2 on
malformed input.  JSON output is sorted and indented so repeated runs produce
identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import __version__
from .cohomology import betti_numbers, cohomology
from .errors import GerstError, InputError, ManifestError
from .examples import get_manifest, list_examples
from .exterior import Element
from .hodge import HodgePackage, kuranishi_expand, mc_identity_holds, mc_residual, restrict_classical
from .manifest import ManifoldSpec, load_manifest_file, parse_manifest
from .models import build_complex_model, build_forms_model, check_condition_D, check_condition_E
from .poisson import (dims_list, mirror_compare, mirror_models, mu_from_spec, poisson_cohomology,
                      verify_poisson)
from .scalar import format_character

COMMANDS = ("validate", "cohomology", "kuranishi", "poisson", "mirror", "list-examples",
            "show-example")


@dataclass
class RunConfig:
    command: str
    key: Optional[str] = None
    manifest: Optional[str] = None
    params: Dict[str, object] = field(default_factory=dict)
    max_order: int = 8
    out: Optional[str] = None
    fmt: str = "json"
    mu: str = "builtin"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError("bad-command", "command", f"unknown command {self.command!r}")
        needs_input = self.command not in ("list-examples",)
        if needs_input and (self.key is None) == (self.manifest is None):
            raise InputError("bad-input", "input", "give exactly one of an example key or --manifest")
        if self.fmt not in ("json", "text"):
            raise InputError("bad-format", "format", "format must be json or text")
        if self.max_order < 1:
            raise InputError("bad-max-order", "max-order", "max-order must be positive")


def _parse_param(text: str):
    if "=" not in text:
        raise InputError("bad-param", "param", f"expected K=V, got {text!r}")
    k, v = text.split("=", 1)
    try:
        return k, json.loads(v)
    except json.JSONDecodeError:
        return k, v


def _raw_manifest(cfg: RunConfig) -> dict:
    if cfg.manifest is not None:
        obj = load_manifest_file(cfg.manifest)
        if cfg.params:
            obj = dict(obj)
            obj["params"] = {**obj.get("params", {}), **cfg.params}
        return obj
    return get_manifest(cfg.key, cfg.params)


def _spec(cfg: RunConfig) -> ManifoldSpec:
    return parse_manifest(_raw_manifest(cfg))


def _grade_key(g) -> str:
    return ",".join(str(x) for x in g) if isinstance(g, tuple) else str(g)


# --- commands ---------------------------------------------------------------------

def cmd_validate(cfg: RunConfig) -> dict:
    spec = _spec(cfg)
    out = {
        "name": spec.name,
        "kind": spec.kind,
        "n": spec.n,
        "valid": True,
        "generators": list(spec.names),
        "characters": {nm: format_character(c) for nm, c in spec.fiber},
        "oracle": spec.oracle.describe(),
    }
    if spec.kind != "nilmanifold" and spec.m:
        out["condition_D"] = check_condition_D(spec, 2 * spec.m)[0]
        out["condition_E2"] = check_condition_E(spec, 2)[0]
    return out


def cmd_cohomology(cfg: RunConfig) -> dict:
    spec = _spec(cfg)
    C = build_complex_model(spec)
    table = cohomology(C, "bigrade", representatives=False)
    total = cohomology(C, "degree", representatives=False)
    out = {
        "name": spec.name,
        "model": C.name,
        "size": C.size,
        "bigraded": {_grade_key(g): d for g, d in sorted(table.dims.items())},
        "total": {str(k): d for k, d in sorted(total.dims.items())},
        "euler_characteristic": total.euler_characteristic(),
    }
    if spec.kind == "nilmanifold":
        out["de_rham_betti"] = betti_numbers(build_forms_model(spec, "d"))
    return out


def cmd_kuranishi(cfg: RunConfig) -> dict:
    spec = _spec(cfg)
    C = build_complex_model(spec)
    hodge = HodgePackage(C)
    res = kuranishi_expand(C, cfg.max_order, hodge)
    keep, classical = restrict_classical(res)
    phi = {}
    for r in sorted(res.phi):
        terms = {}
        for mono, vec in sorted(res.phi[r].items()):
            name = "*".join(res.aliases[v] for v in mono)
            terms[name] = {C.label(i): str(s) for i, s in sorted(vec.items())}
        phi[str(r)] = terms
    return {
        "name": spec.name,
        "model": C.name,
        "parameters": [{"alias": a, "harmonic": {C.label(i): str(s) for i, s in sorted(v.items())}}
                       for a, v in zip(res.aliases, res.eta)],
        "phi": phi,
        "cutoff": res.cutoff,
        "exact": res.exact,
        "smooth": res.smooth,
        "smooth_certificate": res.smooth_certificate,
        "obstructions": res.format_obstructions(),
        "mc_identity": mc_identity_holds(res),
        "mc_residual_zero": not mc_residual(res),
        "classical": {"parameters": [res.aliases[i] for i in keep],
                      "obstructions": [p.format(res.aliases) for p in classical]},
    }


def cmd_poisson(cfg: RunConfig) -> dict:
    spec = _spec(cfg)
    C = build_complex_model(spec)
    if cfg.mu == "builtin":
        if not spec.mu:
            raise InputError("missing-mu", "mu", f"{spec.name} declares no Poisson bivector")
        mu = mu_from_spec(spec)
    elif cfg.mu == "zero":
        mu = Element()
    else:
        raise InputError("bad-mu", "mu", "mu must be 'builtin' or 'zero'")
    ps = verify_poisson(C, mu)
    table = poisson_cohomology(C, ps)
    top = max(C.dims_by_degree())
    return {
        "name": spec.name,
        "model": C.name,
        "mu": {C.label(i): str(s) for i, s in sorted(ps.vec.items())},
        "dims": {str(k): d for k, d in enumerate(dims_list(table, top))},
        "euler_characteristic": table.euler_characteristic(),
    }


def cmd_mirror(cfg: RunConfig) -> dict:
    spec = _spec(cfg)
    C, A = mirror_models(spec)
    report = mirror_compare(C, A, spec)
    out = {"name": spec.name, "complex_model": C.name, "symplectic_model": A.name}
    out.update(report.to_json())
    return out


def cmd_list(cfg: RunConfig) -> dict:
    return {"examples": [{"key": k, "source": src, "description": d}
                         for k, src, d in list_examples()]}


def cmd_show(cfg: RunConfig) -> dict:
    return _raw_manifest(cfg)


HANDLERS: Dict[str, Callable[[RunConfig], dict]] = {
    "validate": cmd_validate,
    "cohomology": cmd_cohomology,
    "kuranishi": cmd_kuranishi,
    "poisson": cmd_poisson,
    "mirror": cmd_mirror,
    "list-examples": cmd_list,
    "show-example": cmd_show,
}


# --- rendering --------------------------------------------------------------------

def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render_text(obj, indent: int = 0) -> str:
    pad = "  " * indent
    lines: List[str] = []
    if isinstance(obj, dict):
        if obj and all(not isinstance(v, (dict, list)) for v in obj.values()):
            width = max(len(str(k)) for k in obj)
            for k in sorted(obj, key=str):
                lines.append(f"{pad}{str(k).ljust(width)}  {obj[k]}")
        else:
            for k in sorted(obj, key=str):
                v = obj[k]
                if isinstance(v, (dict, list)) and v:
                    lines.append(f"{pad}{k}:")
                    lines.append(render_text(v, indent + 1).rstrip("\n"))
                else:
                    lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1).rstrip("\n"))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return "\n".join(lines) + "\n"


def exit_status(cfg: RunConfig, result: dict) -> int:
    if cfg.command == "mirror" and not result.get("matched"):
        return 1
    return 0


def run(cfg: RunConfig):
    """Execute a command; returns (exit status, rendered output)."""
    try:
        result = HANDLERS[cfg.command](cfg)
        status = exit_status(cfg, result)
    except ManifestError as err:
        result = {"error": "invalid manifest", "violations": [v.to_json() for v in err.violations]}
        status = err.exit_code
    except InputError as err:
        result = {"error": "invalid input", "violations": [err.to_json()]}
        status = err.exit_code
    except GerstError as err:
        result = {"error": type(err).__name__, "message": str(err)}
        text = getattr(err, "residual_text", "")
        if text:
            result["residual"] = text
        status = err.exit_code
    text = render_json(result) if cfg.fmt == "json" else render_text(result)
    return status, text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gerst", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"gerst {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("key", nargs="?", help="built-in or user example key")
    p.add_argument("--manifest", help="JSON or TOML manifest file")
    p.add_argument("--param", action="append", default=[], metavar="K=V",
                   help="example parameter (value parsed as JSON when possible)")
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--out", help="write output to this file instead of stdout")
    p.add_argument("--format", dest="fmt", default="json", choices=("json", "text"))
    p.add_argument("--mu", default="builtin", help="'builtin' (manifest bivector) or 'zero'")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        params = dict(_parse_param(t) for t in ns.param)
        cfg = RunConfig(ns.command, ns.key, ns.manifest, params, ns.max_order, ns.out, ns.fmt, ns.mu)
    except InputError as err:
        sys.stdout.write(render_json({"error": "invalid input", "violations": [err.to_json()]}))
        return err.exit_code
    status, text = run(cfg)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
