"""Quaplectic algebras, their Fock and Gel'fand-Tsetlin representations, and Casimir field operators."""

from __future__ import annotations

from .lie_core import build_algebra, load_preset, verify_jacobi

__all__ = ["build_algebra", "load_preset", "verify_jacobi"]
__version__ = "0.1.0"
