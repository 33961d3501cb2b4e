"""Aromatic B-series: aromatic trees, elementary differentials, aromatic Runge-Kutta methods."""

from .ark import AromaticScalar, AromaticTableau, ark_step, builtin_methods, get_method, integrate
from .eldiff import eval_scalar, eval_vector, index_string
from .graph import (
    AromaticForest,
    Composition,
    canonicalize,
    composition,
    decompose,
    derived_composition,
    enumerate_trees,
    parse,
)
from .polyfield import AffineMap, PolyVectorField, affine_act, divergence, partial, random_field
from .series import BSeriesCoefficients, collapse_1d, degeneracy_2d, divfree_combination, eval_series
from .tensormap import orbit_classes, perm_to_tree, target_map

__version__ = "0.1.0"
