"""Tensor Gauss-Legendre quadrature on the Weyl chamber of BC_r.

Integrals over the box [0, pi]^r of W-invariant, pi-periodic integrands are
folded onto the chamber C = {pi/2 >= t_1 >= ... >= t_r >= 0} (|W| = 2^r r!
copies) and the chamber is pulled back to the unit cube by the collapsed
coordinates

    t_1 = (pi/2) u_1,   t_j = t_{j-1} u_j.

In these coordinates the Jacobi density has no kinks along t_j = t_k, so
Gauss-Legendre converges quickly even for odd multiplicities.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def chamber_rule(r: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes t (N, r) and weights w (N,) with sum w f(t) ~ int_{[0,pi]^r} f.

    Valid for integrands invariant under signed permutations and
    pi-periodic in each coordinate.
    """
    x, wx = np.polynomial.legendre.leggauss(order)
    u = 0.5 * (x + 1.0)
    wu = 0.5 * wx
    grids = np.meshgrid(*([u] * r), indexing="ij")
    wgrids = np.meshgrid(*([wu] * r), indexing="ij")
    U = np.stack([g.ravel() for g in grids], axis=-1)
    W = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    t = np.empty_like(U)
    t[:, 0] = 0.5 * np.pi * U[:, 0]
    jac = np.full(len(U), 0.5 * np.pi)
    for j in range(1, r):
        t[:, j] = t[:, j - 1] * U[:, j]
        jac = jac * t[:, j - 1]
    w = W * jac * (2**r) * math.factorial(r)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


def flip_last(t: np.ndarray) -> np.ndarray:
    s = np.array(t, copy=True)
    s[..., -1] = -s[..., -1]
    return s


def box_integral(func, r: int, order: int = 48, d_symmetric: bool = False) -> float | complex:
    """Integral of ``func`` over [0, pi]^r.

    ``func`` takes an (N, r) array.  With ``d_symmetric=True`` the integrand
    is only assumed invariant under even sign changes and is averaged over
    t_r -> -t_r first.
    """
    t, w = chamber_rule(r, order)
    vals = func(t)
    if d_symmetric:
        vals = 0.5 * (vals + func(flip_last(t)))
    return np.dot(w, vals)


def checked_box_integral(func, r: int, order: int = 48, d_symmetric: bool = False, scale: float | None = None, rtol: float = 1e-10):
    """Integral at ``order`` and ``order + order // 2``; also returns the gap.

    The gap is divided by ``scale`` (default: the larger |value|).
    """
    lo = box_integral(func, r, order, d_symmetric)
    hi = box_integral(func, r, order + order // 2, d_symmetric)
    s = scale if scale is not None else max(abs(lo), abs(hi), 1e-300)
    return hi, abs(hi - lo) / s
