"""Product quadrature on the unit sphere and frame helpers."""

from __future__ import annotations

from functools import lru_cache

import numpy as np

N_POLAR = 128
N_AZIMUTH = 256


def orthonormal_frame(axis) -> np.ndarray:
    """Rows (e1, e2, e3) of a right-handed frame with e3 along ``axis``."""
    e3 = np.asarray(axis, dtype=float)
    e3 = e3 / np.linalg.norm(e3)
    # pick the lab axis least aligned with e3 as the seed for e1
    seed = np.zeros(3)
    seed[np.argmin(np.abs(e3))] = 1.0
    e1 = seed - (seed @ e3) * e3
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(e3, e1)
    return np.stack([e1, e2, e3])


@lru_cache(maxsize=8)
def _polar_nodes(n_polar: int, split: bool):
    if not split:
        x, w = np.polynomial.legendre.leggauss(n_polar)
        return x, w
    half = n_polar // 2
    x, w = np.polynomial.legendre.leggauss(half)
    # map [-1, 1] onto [-1, 0] and [0, 1]
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    return np.concatenate([lo, hi]), np.concatenate([w, w]) / 2.0


def sphere_grid(axis=(0.0, 0.0, 1.0), n_polar: int = N_POLAR, n_azimuth: int = N_AZIMUTH,
                split_equator: bool = True):
    """Nodes and weights for integrating over the unit sphere.

    Gauss-Legendre in cos(polar angle) measured from ``axis`` times the
    trapezoid rule in azimuth. With ``split_equator`` the polar rule is split at
    the great circle orthogonal to ``axis``, so integrands with a kink or jump
    there (hemisphere supports) are still integrated to high order.

    Returns ``(points, weights)`` with shapes ``(M, 3)`` and ``(M,)``.
    """
    c, wc = _polar_nodes(n_polar, split_equator)
    beta = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    s = np.sqrt(1.0 - c**2)
    local = np.stack(
        [
            s[:, None] * np.cos(beta)[None, :],
            s[:, None] * np.sin(beta)[None, :],
            np.broadcast_to(c[:, None], (c.size, n_azimuth)),
        ],
        axis=-1,
    ).reshape(-1, 3)
    weights = (wc[:, None] * np.full(n_azimuth, 2.0 * np.pi / n_azimuth)[None, :]).reshape(-1)
    points = local @ orthonormal_frame(axis)
    return points, weights


def integrate(f, axis=(0.0, 0.0, 1.0), **kw) -> float:
    """Integral of a vectorized function ``f(points)`` over the sphere."""
    points, weights = sphere_grid(axis, **kw)
    return float(np.asarray(f(points)) @ weights)
