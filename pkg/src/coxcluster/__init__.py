"""Noncrossing partition lattices and cluster complexes of finite root systems.

Exact-arithmetic realization of the lattice [I, gamma] under absolute order,
the cluster complex Delta(gamma) and its positive parts X(w), the bijection
phi from facets to lattice elements, and the explicit shelling that relates
h-vectors to rank counts.
"""
from .absolute_order import (
    CoxeterContext,
    GroupElement,
    absolute_length,
    build_context,
    leq_abs,
)
from .kernels import BACKEND
from .root_system import build_root_system, parse_cartan_type

__version__ = "0.1.0"


def context(type_name: str, allow_large: bool = False) -> CoxeterContext:
    """Root system and Coxeter context for a type string such as ``"B3"``."""
    return build_context(build_root_system(parse_cartan_type(type_name, allow_large)))


__all__ = [
    "BACKEND",
    "CoxeterContext",
    "GroupElement",
    "absolute_length",
    "build_context",
    "build_root_system",
    "context",
    "leq_abs",
    "parse_cartan_type",
]
