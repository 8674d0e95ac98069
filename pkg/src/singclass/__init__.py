"""Exact invariants and classification of isolated hypersurface singularities over Q and F_p."""

from .classify import ClassLabel, UnivariateReport, classify_contact, classify_right, classify_univariate, detect_nonisolated_type
from .determinacy import DeterminacyBound, contact_determinacy_bound, right_determinacy_bound
from .deform import Unfolding, adjacency_scan, evaluate_unfolding, semicontinuity_scan, tjurina_basis_unfolding
from .errors import InputError, NotIsolated, SingclassError
from .invariants import InvariantValue, higher_algebra_dims, milnor_number, tjurina_number
from .ring import FieldSpec, JetAutomorphism, Monomial, Polynomial, parse_poly, random_automorphism, substitute_jet
from .splitting import SplitResult, split
from .stdbasis import StandardBasis, highcorner, standard_basis

__version__ = "0.1.0"

__all__ = [
    "ClassLabel",
    "DeterminacyBound",
    "FieldSpec",
    "InputError",
    "InvariantValue",
    "JetAutomorphism",
    "Monomial",
    "NotIsolated",
    "Polynomial",
    "SingclassError",
    "SplitResult",
    "StandardBasis",
    "Unfolding",
    "UnivariateReport",
    "adjacency_scan",
    "classify_contact",
    "classify_right",
    "classify_univariate",
    "contact_determinacy_bound",
    "detect_nonisolated_type",
    "evaluate_unfolding",
    "higher_algebra_dims",
    "highcorner",
    "milnor_number",
    "parse_poly",
    "random_automorphism",
    "right_determinacy_bound",
    "semicontinuity_scan",
    "split",
    "standard_basis",
    "substitute_jet",
    "tjurina_basis_unfolding",
    "tjurina_number",
]
