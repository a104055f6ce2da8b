"""
Point sets on the torus: structure tags, lattice families and general-N composition.
"""
from .compose import (CompositionPlan, anisotropic_builder, compose_general_N,
                      composition_for_alpha, plan_composition, remainder_violations,
                      rotated_builder)
from .lattices import (ROTATION_EXPONENTS, AnisotropicLatticeSpec, RotatedLatticeSpec,
                       anisotropic_exponents, anisotropic_lattice, floor_power, rotated_lattice,
                       square_lattice)
from .pointset import (Composite, Generic, PointSet, Product, Sublattice, format_points_csv,
                       read_points_csv, structure_from_json, write_points_csv)
