"""Numerical geometry of finite-dimensional normed spaces."""
from .optimize import Estimate, OptConfig, maximize
from .spaces import (
    DEFAULT_CATALOG,
    Euclidean,
    GridSup,
    Lp,
    LpLq,
    Polyhedral,
    format_space_spec,
    norm,
    parse_space_spec,
)

__version__ = "0.1.0"
