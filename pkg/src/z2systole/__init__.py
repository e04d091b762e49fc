"""Mod-2 systolic invariants of finite simplicial complexes."""
from .complex import (
    Chain,
    Cochain,
    SimplicialComplex,
    Subcomplex,
    build_complex,
    load_complex,
    save_complex,
)

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "Cochain",
    "SimplicialComplex",
    "Subcomplex",
    "build_complex",
    "load_complex",
    "save_complex",
    "__version__",
]
