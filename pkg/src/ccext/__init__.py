"""Cyclic complementary extensions of finite groups.

A finite group G = A<c> with A and <c> meeting trivially is determined by a
skew-morphism phi of A together with an extended power function Pi.  This
package enumerates both, builds the extension Ext(A, phi, Pi), reads the
pair back off a Cayley table, and classifies the case where A is cyclic and
phi is an automorphism.
"""

from .cyclic_auto import AutoTriple, classify, enumerate_triples, epf_from_triple, presentation, tau
from .epf import ExtendedPowerFunction, enumerate_epfs, sigma_Pi, validate_epf
from .extension import (
    ExtSkewProduct,
    build_extension,
    classify_equivalence,
    equivalent_pairs,
    extract_pair,
    to_cayley,
    verify_structure,
)
from .groups import FiniteGroup, cyclic_group, dihedral_group, direct_product, from_cayley_table
from .skewmorph import SkewMorphism, enumerate_skew, sigma_pi, validate_skew

__version__ = "0.1.0"

__all__ = [
    "AutoTriple",
    "ExtSkewProduct",
    "ExtendedPowerFunction",
    "FiniteGroup",
    "SkewMorphism",
    "build_extension",
    "classify",
    "classify_equivalence",
    "cyclic_group",
    "dihedral_group",
    "direct_product",
    "enumerate_epfs",
    "enumerate_skew",
    "enumerate_triples",
    "epf_from_triple",
    "equivalent_pairs",
    "extract_pair",
    "from_cayley_table",
    "presentation",
    "sigma_Pi",
    "sigma_pi",
    "tau",
    "to_cayley",
    "validate_epf",
    "validate_skew",
    "verify_structure",
]
