"""Exact computations around Weil-etale cohomology over finite fields.

Submodules:

* ``fga`` -- finitely generated abelian groups, Smith normal form, complexes
* ``gmod`` -- modules over the Weil group Z, group cohomology, cup product with e
* ``weil_complex`` -- level-m complexes, their colimits, the comparison with Z^c
* ``weil_cohomology`` -- splicing Weil-etale groups from etale and rational data
* ``zeta`` -- zeta functions of curves and special values
* ``checks`` -- seeded verification suites
"""

from .fga import FgAbGroup, Homomorphism, abelian_group, cokernel, free, kernel, smith_normal_form
from .gmod import GModule, QMod, cup_e, group_cohomology, make_gmodule, tensor_N
from .matrix import Matrix

__version__ = "0.1.0"

__all__ = [
    "FgAbGroup",
    "GModule",
    "Homomorphism",
    "Matrix",
    "QMod",
    "abelian_group",
    "cokernel",
    "cup_e",
    "free",
    "group_cohomology",
    "kernel",
    "make_gmodule",
    "smith_normal_form",
    "tensor_N",
]
