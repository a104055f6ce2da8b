"""
Numeric constants shared by the geometry, Fourier and discrepancy code.
"""
import math

# Angles
TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

# Geometry tolerances
ANGULAR_JOINT_TOL = 1e-9         # one-sided tangents closer than this are a smooth joint
FLAT_TOL = 1e-12                 # |velocity . u| below this (relative) marks a flat piece
LEVEL_TOL = 1e-12                # relative tolerance on support-line levels
ROOT_XTOL = 1e-12                # parameter tolerance for bracketed root finding
BISECTION_STEPS = 60
ARC_LENGTH_RTOL = 1e-9
ARC_LENGTH_TABLE_SIZE = 33
MAX_PIECE_TURN = math.pi - 1e-6  # every boundary piece turns by less than this
ENVELOPE_SAMPLES = 4096          # samples per piece for arc-body membership envelopes

# Diameter search
DIAMETER_GRID = 720

# Fourier quadrature
FILON_SERIES_THRESHOLD = 0.5     # below this |theta| the Filon moments use their Taylor series
FILON_SERIES_TERMS = 10
MIN_PANELS = 64
MAX_PANELS = 512
PANELS_PER_RHO_WIDTH = 4.0
RAY_SAMPLES_PER_PERIOD = 8
RAY_CHUNK = 512
SMALL_XI = 1e-6                  # |xi| * diameter below this switches to the moment expansion
ANGULAR_NODES = 8                # Gauss-Legendre nodes per angular sub-interval

# Weight tables
RADII_PER_OCTAVE = 48
MIN_ANGLES = 256
MAX_ANGLES = 8192
ANGLE_REFINEMENT = 4             # extra angle density within one grid step of a trace boundary
SPOT_CHECK_RTOL = 0.01

# Torus conventions
TORUS_DIAMETER = 0.8
TORUS_CENTER = (0.5, 0.5)

# Body constructions
DEFAULT_EPS = 0.1
ALPHA_MIN = 1.05
ALPHA_MAX = 8.0

# Discrepancy budgets
GENERIC_EXPSUM_BUDGET = 5e8
EXPSUM_CHUNK = 4096

# Schema versions
REPORT_SCHEMA_VERSION = 1
RESULT_SCHEMA_VERSION = 1
