"""
Body constructions: named bodies, corner bodies with power-curve boundaries, chord oracles.
"""
from .intermediate import IntermediateBodySpec, make_C, make_G_body, make_H
from .oracles import (F_alpha_chord_oracle, G_alpha_chord_oracle, OracleRow, dump_oracle_rows,
                      f_alpha_level, solve_f_alpha)
from .zoo import (body_kind, body_kinds, make_disc, make_rectangle, make_regular_polygon,
                  make_square, parse_angle, parse_body_spec, register_body_kind)
