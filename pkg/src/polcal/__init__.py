"""Exact finite polarization calculus on affine spaces.

Polarizations (multidirectional finite differences) of fields and maps,
their Leibniz and chain rules, homogeneity classification, derivatives as
limits of scaled polarizations, and Taylor polynomials built from them.
"""

from .combinatorics import delta_chi, distinct_subset_covers, euler_alternating_sum, leibniz_pairs, subsets
from .derivative import DerivativeEstimate, derive, derive_exact, derive_numeric
from .expr import AffineMap, ScalarField, parse
from .homogeneity import HomogeneityVerdict, is_homogeneous, is_homogeneous_polynomial
from .numeric import Direction, Point, TolerancePolicy
from .polarization import ExtendedField, chain_expand, leibniz_expand, polarize, polarize_unidirectional
from .polynomial import Polynomial
from .taylor import remainder_profile, taylor_polynomial

__version__ = "0.1.0"
