"""
Filon quadrature for oscillatory integrals

    I(omega) = int_a^b f(t) exp(-i omega t) dt

on arbitrary panels. On every panel f is replaced by its quadratic interpolant through the two
panel ends and the midpoint, and the resulting moments are integrated exactly, so the cost per
panel does not grow with omega. Piecewise linear f are integrated exactly.
"""
import math

import numpy as np

from core.constants import FILON_SERIES_TERMS, FILON_SERIES_THRESHOLD, PANELS_PER_RHO_WIDTH


def _series_moments(theta: np.ndarray):
    """M_k(theta) = int_{-1}^{1} x^k exp(-i theta x) dx for k = 0, 1, 2 by their Taylor series."""
    z = -1j * theta
    m = [np.zeros(theta.shape, dtype=complex) for _ in range(3)]
    term = np.ones(theta.shape, dtype=complex)
    for j in range(2 * FILON_SERIES_TERMS):
        if j:
            term = term * z / j
        for k in range(3):
            if (k + j) % 2 == 0:
                m[k] += term * (2.0 / (k + j + 1))
    return m


def filon_moments(theta):
    """(M0, M1, M2) for an array of panel phases theta = omega * h."""
    theta = np.asarray(theta, dtype=float)
    small = np.abs(theta) < FILON_SERIES_THRESHOLD
    safe = np.where(small, 1.0, theta)
    s, c = np.sin(safe), np.cos(safe)
    m0 = 2.0 * s / safe
    m1 = -2j * (s - safe * c) / safe ** 2
    m2 = 2.0 * ((safe ** 2 - 2.0) * s + 2.0 * safe * c) / safe ** 3
    m0 = m0.astype(complex)
    m2 = m2.astype(complex)
    if np.any(small):
        s0, s1, s2 = _series_moments(theta[small])
        m0[small], m1[small], m2[small] = s0, s1, s2
    return m0, m1, m2


def panel_nodes(edges: np.ndarray) -> np.ndarray:
    """Sample points: every edge plus every panel midpoint, in increasing order."""
    edges = np.asarray(edges, dtype=float)
    nodes = np.empty(2 * len(edges) - 1)
    nodes[0::2] = edges
    nodes[1::2] = 0.5 * (edges[:-1] + edges[1:])
    return nodes


def filon_sum(edges: np.ndarray, values: np.ndarray, omegas) -> np.ndarray:
    """
    I(omega) for every omega, given f sampled at panel_nodes(edges).
    """
    edges = np.asarray(edges, dtype=float)
    values = np.asarray(values, dtype=complex)
    omegas = np.atleast_1d(np.asarray(omegas, dtype=float))
    f0, f1, f2 = values[0:-1:2], values[1::2], values[2::2]
    centers = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    c1 = 0.5 * (f2 - f0)
    c2 = 0.5 * (f2 - 2.0 * f1 + f0)

    theta = omegas[:, None] * half[None, :]
    m0, m1, m2 = filon_moments(theta)
    phase = np.exp(-1j * omegas[:, None] * centers[None, :])
    panel = half[None, :] * phase * (f1[None, :] * m0 + c1[None, :] * m1 + c2[None, :] * m2)
    return panel.sum(axis=1)


def panel_count(width: float, rho_max: float, min_panels: int, max_panels: int) -> int:
    """Panels for one smooth stretch of width `width` at frequencies up to rho_max."""
    wanted = math.ceil(PANELS_PER_RHO_WIDTH * rho_max * width)
    return int(min(max(wanted, min_panels), max_panels))
