"""Exact deformation and cohomology computations for Gerstenhaber models of
complex solvmanifolds and nilmanifolds."""

from .errors import (AssumptionError, ClosureError, GerstError, InputError,
                     RejectionError, StructuralError, UnresolvableError)
from .scalar import Character, Scalar, TrivialityOracle, log_derivative, unitary_part
from .examples import get_manifest, load_spec
from .manifest import parse_manifest
from .models import build_complex_model
from .cohomology import cohomology
from .hodge import HodgePackage, kuranishi_expand
from .poisson import mirror_compare, mirror_models, poisson_cohomology, verify_poisson

__version__ = "0.1.0"

__all__ = [
    "AssumptionError", "Character", "ClosureError", "GerstError", "HodgePackage", "InputError",
    "RejectionError", "Scalar", "StructuralError", "TrivialityOracle", "UnresolvableError",
    "build_complex_model", "cohomology", "get_manifest", "kuranishi_expand", "load_spec",
    "log_derivative", "mirror_compare", "mirror_models", "parse_manifest", "poisson_cohomology",
    "unitary_part", "verify_poisson",
]
