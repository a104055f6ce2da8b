"""
Fourier transforms of convex indicator functions, their dilation and rotation averages, and
spectral weight tables.
"""
from .averages import (RayAverages, dilation_avg_sq, ray_table, rotation_dilation_avg_sq,
                       rotation_dilation_curve, spherical_avg_sq, weight_at)
from .bounds import BoundSample, bound_sample, dilation_threshold
from .filon import filon_moments, filon_sum, panel_nodes
from .transform import Profile, ft_body, ft_polygon, ft_profile
from .weights import (SpectralWeightTable, build_weight_table, load_weight_table, refined_angles,
                      save_weight_table, trace_boundaries, validate_weight_table)
