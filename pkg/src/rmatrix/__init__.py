"""Exact rational R-matrices of GL_N type, their gauge (IRF-Vertex)
construction, and a pointwise identity verifier."""

from .algebra import Rat, Series, SeriesWindowError, TensorOperator, embed, identity, permutation
from .families import FAMILIES, RFamilyDescriptor, get_family, r_explicit, r_vertex
from .gauge import DegenerateParametersError, DynParams, SingularPointError, g_inverse, g_matrix
from .verify import REGISTRY, CheckReport, SamplePlan, run_suite

__all__ = [
    "Rat",
    "Series",
    "SeriesWindowError",
    "TensorOperator",
    "embed",
    "identity",
    "permutation",
    "FAMILIES",
    "RFamilyDescriptor",
    "get_family",
    "r_explicit",
    "r_vertex",
    "DegenerateParametersError",
    "DynParams",
    "SingularPointError",
    "g_inverse",
    "g_matrix",
    "REGISTRY",
    "CheckReport",
    "SamplePlan",
    "run_suite",
]
