"""Mutation, singularity content and classification of Fano polygons."""

from .lattice import Polygon, UnimodularMap, normal_form
from .singularity import QuotientSingularity, parse_basket, singularity_content

__version__ = "0.1.0"

__all__ = ["Polygon", "UnimodularMap", "normal_form", "QuotientSingularity",
           "parse_basket", "singularity_content", "__version__"]
