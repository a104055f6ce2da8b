"""
Core package: angles, boundary pieces, convex bodies and their chord and normal geometry.
"""
from .angles import AngleInterval, canonical, eta, rotation_matrix, unit, unit_perp
from .body import ConvexBody
from .errors import (AcceptanceError, BudgetExceededError, ConfigError, ConvexError,
                     EmptyChordError, InvalidBodyError, NumericalError, QuadratureError,
                     RootFindingError, TableCoverageError, WeightTableError)
from .pieces import CircularPiece, LinePiece, Piece, PowerPiece, Similarity, split_circle
from .records import AngularPoint, AngularTrace, ChordRecord, SemiChordRecord
from .report import ReportField, Reportable, report_field
from .serialization import body_from_json, load_body, save_body
from .slicing import DirectionalSlice, corner_chord_limit
