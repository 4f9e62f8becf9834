"""Hyperplanes that split sets of disjoint unit balls while cutting few of them."""
from .errors import *  # noqa: F401,F403
from .geometry import (BallSet, DualLine, Hyperplane, LineSet, ball_intersects_hyperplane,
                       dual_segment_for_line, dualize_line, dualize_point, dualize_points,
                       rotate_to_general_position, signed_distance)
from .instances import clusters, collinear_row, jittered_grid, load, parse, save
from .planar import PlanarParams, halving_line
from .selection import count_inversions, kth_index, rank_select
from .separator import (build_directions, check_conditions, find_separator_nd, params_from_alpha,
                        params_from_f)

__version__ = "0.1.0"
