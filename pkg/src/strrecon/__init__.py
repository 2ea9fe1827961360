"""Reconstruct a hidden binary string from substring queries."""

from .average import expected_queries, reconstruct_average
from .basic import basic
from .bitstr import BitString
from .oracle import Oracle, make_oracle
from .randomized import Outcome, Params, derive_params, double_seed
from .verify import check_run

__version__ = "0.1.0"

__all__ = [
    "BitString",
    "Oracle",
    "Outcome",
    "Params",
    "basic",
    "check_run",
    "derive_params",
    "double_seed",
    "expected_queries",
    "make_oracle",
    "reconstruct_average",
]
