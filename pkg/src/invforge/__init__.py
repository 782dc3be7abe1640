"""Invariant rings of GL2, SL2 and O2 conjugation actions over finite fields."""
from .constructions import CaseSpec, build_suite
from .gf import build_field, field_of_order
from .groups import Group, Space, conjugation_action
from .lab import hilbert_function, hsop_check, subring_membership, verify_case

__version__ = "0.1.0"

__all__ = ["CaseSpec", "Group", "Space", "build_field", "build_suite", "conjugation_action",
           "field_of_order", "hilbert_function", "hsop_check", "subring_membership", "verify_case"]
