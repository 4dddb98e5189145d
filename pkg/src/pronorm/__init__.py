"""Finite permutation groups, finite-field matrices and pronormality checks.

Submodules:

* :mod:`pronorm.algebra` - prime fields, matrices, polynomials, symplectic forms
* :mod:`pronorm.perm` - permutations, stabilizer chains, subgroup algorithms
* :mod:`pronorm.constructors` - symmetric, dihedral, classical, wreath and Frobenius groups
* :mod:`pronorm.pronormal` - pronormality checkers and odd-index subgroup scans
* :mod:`pronorm.scenarios` - the scenario registry behind the ``verify`` CLI
"""

from .perm import CapExceeded, GroupError, Perm, PermGroup
from .pronormal import is_pronormal, is_pronormal_sylow

__all__ = ["CapExceeded", "GroupError", "Perm", "PermGroup", "is_pronormal", "is_pronormal_sylow"]
__version__ = "0.1.0"
