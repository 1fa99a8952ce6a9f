"""Finite categories, span (2-)categories, biadjointable coefficient systems
and the extension of such coefficients to spans."""
from .fincat import FinCat, Functor, NatTransform
from .classes import MorphismFamily, Verdict, check_suitable_decomposition
from .spancat import Span, build_span_category, check_adequate
from .span2 import Span2
from .catfun import CatFunctor, check_biadjointable
from .extend import SpanFormalism, build_formalism

__version__ = "0.1.0"

__all__ = [
    "FinCat", "Functor", "NatTransform", "MorphismFamily", "Verdict", "check_suitable_decomposition",
    "Span", "build_span_category", "check_adequate", "Span2", "CatFunctor", "check_biadjointable",
    "SpanFormalism", "build_formalism",
]
