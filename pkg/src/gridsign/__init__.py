"""True and false sign assignments on grid diagrams and integral grid homology."""

from .complex import FULL, TILDE, BigradedComplex, build_complex, d_squared, specialize
from .errors import GridSignError
from .grid import GridDiagram, EmptyRect, empty_rectangles, grid_states, index2_classes, parse_grid
from .homology import HomologyTable, bigraded_homology, compare_true_false, euler_characteristic
from .signs import (
    FALSE,
    TRUE,
    GaugeFunction,
    OrientationSystem,
    SignAssignment,
    count_solutions,
    gauge_apply,
    gauge_difference,
    orientation_to_signs,
    signs_to_orientation,
    solve_signs,
    twist,
    verify_axioms,
)

__version__ = "0.1.0"
