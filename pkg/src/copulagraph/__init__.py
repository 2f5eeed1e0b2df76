"""Random graphs with target degree assortativity from copula graphons."""

from .copulas import C_MINUS, C_PLUS, PI, CopulaSpec, Family, clayton, frank, gumbel, joe
from .densities import DensityReport, density_report, theoretical_assortativity
from .errors import (CopulaGraphError, DimensionMismatch, DomainError, SizeError,
                     UndefinedError, UsageError)
from .graphons import (Graphon, Kind, make_copula_graphon, make_density_graphon,
                       make_tensor_graphon, parse_graphon, parse_template)
from .metrics import (combinatorial_assortativity, empirical_assortativity,
                      subgraph_counts)
from .sampler import SampledGraph, sample, sample_batch

__version__ = "0.1.0"

__all__ = [
    "C_MINUS", "C_PLUS", "PI", "CopulaSpec", "Family", "clayton", "frank", "gumbel", "joe",
    "DensityReport", "density_report", "theoretical_assortativity",
    "CopulaGraphError", "DimensionMismatch", "DomainError", "SizeError", "UndefinedError",
    "UsageError", "Graphon", "Kind", "make_copula_graphon", "make_density_graphon",
    "make_tensor_graphon", "parse_graphon", "parse_template", "combinatorial_assortativity",
    "empirical_assortativity", "subgraph_counts", "SampledGraph", "sample", "sample_batch",
]
