"""Hom-twist: exact Hom-bialgebras, Drinfeld twists and R-matrices"""

__version__ = "0.1.0"
__author__ = "Algebra Verification Team"
__description__ = "Exact verification of Hom-bialgebras, twists and their representation categories"

from .examples_library import get_instance, list_instances
from .hom_structures import HomBialgebraData, verify_suite

__all__ = ["HomBialgebraData", "get_instance", "list_instances", "verify_suite"]
