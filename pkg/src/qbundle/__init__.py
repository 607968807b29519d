"""Exact computer algebra for quantum principal bundles and their differential calculi."""

from .catalog import EXAMPLES, HOPF_ALGEBRAS, load_example, load_hopf, verify_example
from .coeff import ParamScalar, lam, q
from .freealg import Alphabet, Generator, NcPoly, TensorElement
from .parser import parse_element, parse_expression, parse_tensor
from .rewrite import Presentation

__version__ = "0.1.0"

__all__ = [
    "EXAMPLES", "HOPF_ALGEBRAS", "load_example", "load_hopf", "verify_example",
    "ParamScalar", "q", "lam", "Alphabet", "Generator", "NcPoly", "TensorElement",
    "parse_element", "parse_expression", "parse_tensor", "Presentation",
]
