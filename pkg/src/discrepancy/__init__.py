"""
Discrepancy of point sets on the torus against affine copies of a convex body.
"""
from .cassels import CasselsMontgomeryReport, cassels_montgomery_check
from .counting import DiscrepancyCounter, discrepancy
from .d2 import D2Result, d2_montecarlo, d2_parseval, tail_constant
from .expsum import annulus_order, exp_sum, frequency_disc, support_frequencies
from .transform import AffineTransform, circumscribed_disc, normalize_for_torus
