"""Frames, principal angles and Monte Carlo on real, complex and quaternionic Grassmannians.

Quaternionic matrices are stored through the complex embedding

    chi(Z + W j) = [[Z, W], [-conj(W), conj(Z)]],

so an n x r quaternionic matrix is a 2n x 2r complex array whose columns k
and r + k form the k-th quaternionic column.  The reduced real determinant
det_R(M) is det M (R), |det M|^2 (C) or |det chi(M)|^2 (H); in all cases
det_R(M)^{1/(2a)} is the product of the singular values of M.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import spectra
from .jacobi import evaluate_grassmannian, jacobi_polynomial
from .rootsystem import FIELD_DIM, even_dominant_weights, grassmannian_preset

CHUNK = 1 << 15


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("GRASSTRANS_THREADS", "1")))
    except ValueError:
        return 1


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox counter-based generator for (seed, stream)."""
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(ss))


# ----------------------------------------------------------- embeddings


def quat_embed(z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """chi(Z + W j) for arrays of shape (..., n, r)."""
    top = np.concatenate([z, w], axis=-1)
    bot = np.concatenate([-np.conj(w), np.conj(z)], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def quat_parts(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n2, r2 = x.shape[-2:]
    n, r = n2 // 2, r2 // 2
    return x[..., :n, :r], x[..., :n, r:]


def _rows(field: str, n: int, idx: Sequence[int]) -> list[int]:
    idx = list(idx)
    return idx + [n + i for i in idx] if field == "H" else idx


def det_real(field: str, m: np.ndarray) -> np.ndarray:
    """Reduced real determinant of square (embedded) matrices, batched."""
    d = np.linalg.det(m)
    if field == "R":
        return np.real(d)
    return np.abs(d) ** 2


def _sv_product(field: str, m: np.ndarray) -> np.ndarray:
    """prod of (quaternionic) singular values; avoids det round-off."""
    s = np.linalg.svd(m, compute_uv=False)
    if field == "H":
        s = s[..., ::2]
    return np.prod(s, axis=-1)


# ----------------------------------------------------------- frames


@dataclass
class StiefelFrame:
    """Orthonormal frame of an r-plane in K^n (embedded for K = H)."""

    field: str
    n: int
    r: int
    data: np.ndarray

    def __post_init__(self):
        if self.field not in FIELD_DIM:
            raise ValueError(f"unknown field {self.field!r}")
        shape = (2 * self.n, 2 * self.r) if self.field == "H" else (self.n, self.r)
        if self.data.shape != shape:
            raise ValueError(f"frame data must have shape {shape}, got {self.data.shape}")

    def gram(self) -> np.ndarray:
        return self.data.conj().T @ self.data

    def orthonormality_error(self) -> float:
        return float(np.abs(self.gram() - np.eye(self.gram().shape[0])).max())

    def complement(self) -> "StiefelFrame":
        """Orthonormal frame of the orthogonal complement."""
        n, r = self.n, self.r
        if self.field != "H":
            q, _ = np.linalg.qr(self.data, mode="complete")
            return StiefelFrame(self.field, n, n - r, q[:, r:])
        # project a fixed structured matrix off the frame, then orthonormalise
        rng = make_rng(0, 99)
        z = rng.standard_normal((n, n - r)) + 1j * rng.standard_normal((n, n - r))
        w = rng.standard_normal((n, n - r)) + 1j * rng.standard_normal((n, n - r))
        x = quat_embed(z, w)
        for _ in range(2):
            x = x - self.data @ (self.data.conj().T @ x)
        return StiefelFrame("H", n, n - r, _block_gram_schmidt(x[None])[0])


def standard_frame(field: str, n: int, r: int) -> StiefelFrame:
    """Frame of xi_0 = span(e_1, ..., e_r)."""
    if field == "H":
        z = np.eye(n, r, dtype=complex)
        return StiefelFrame("H", n, r, quat_embed(z, np.zeros_like(z)))
    dtype = float if field == "R" else complex
    return StiefelFrame(field, n, r, np.eye(n, r, dtype=dtype))


def _block_gram_schmidt(x: np.ndarray) -> np.ndarray:
    """Quaternionic Gram-Schmidt on embedded (N, 2n, 2r) arrays, in place order."""
    n2, r2 = x.shape[-2:]
    r = r2 // 2
    q = np.array(x, dtype=complex, copy=True)
    for k in range(r):
        cols = [k, r + k]
        v = q[:, :, cols]
        for _ in range(2):
            for i in range(k):
                qi = q[:, :, [i, r + i]]
                v = v - qi @ (np.conj(np.swapaxes(qi, -1, -2)) @ v)
        nrm = np.sqrt(np.sum(np.abs(v[:, :, 0]) ** 2, axis=-1))
        q[:, :, cols] = v / nrm[:, None, None]
    return q


def haar_frames(field: str, n: int, r: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` Haar-distributed frames as an array (count, n, r) or (count, 2n, 2r)."""
    if field == "R":
        g = rng.standard_normal((count, n, r))
    else:
        g = rng.standard_normal((count, n, r)) + 1j * rng.standard_normal((count, n, r))
    if field == "H":
        w = rng.standard_normal((count, n, r)) + 1j * rng.standard_normal((count, n, r))
        return _block_gram_schmidt(quat_embed(g, w))
    q, rr = np.linalg.qr(g)
    d = np.diagonal(rr, axis1=-2, axis2=-1)
    ph = d / np.abs(d)
    return q * ph[:, None, :]


def haar_frame(field: str, n: int, r: int, seed) -> StiefelFrame:
    """One Haar frame; ``seed`` is an int or a numpy Generator."""
    if r > n:
        raise ValueError(f"need r <= n, got r={r}, n={n}")
    rng = seed if isinstance(seed, np.random.Generator) else make_rng(int(seed))
    return StiefelFrame(field, n, r, haar_frames(field, n, r, 1, rng)[0])


# ----------------------------------------------------------- angles


def principal_angles(x: StiefelFrame, y: StiefelFrame) -> np.ndarray:
    """Principal angles in [0, pi/2], ascending, min(r, r') of them."""
    if x.field != y.field or x.n != y.n:
        raise ValueError("frames must live in the same K^n")
    s = np.linalg.svd(x.data.conj().T @ y.data, compute_uv=False)
    if x.field == "H":
        if np.abs(s[::2] - s[1::2]).max() > 1e-8:
            raise RuntimeError("quaternionic embedding lost its pair symmetry")
        s = s[::2]
    k = min(x.r, y.r)
    return np.arccos(np.clip(s[:k], 0.0, 1.0))


def cos_angle(x: StiefelFrame, y: StiefelFrame) -> float:
    """|Cos(x, y)| = det_R(y* x x* y)^{1/(2a)} for dim y <= dim x."""
    if y.r > x.r:
        x, y = y, x
    c = x.data.conj().T @ y.data
    a = FIELD_DIM[x.field]
    g = c.conj().T @ c
    dr = det_real(x.field, g)
    return float(max(dr, 0.0) ** (1.0 / (2 * a)))


def sin_angle(x: StiefelFrame, y: StiefelFrame) -> float:
    """|Sin(x, y)| = |Cos(x^perp, y)| for dim y <= dim x^perp."""
    return cos_angle(x.complement(), y)


# ----------------------------------------------------------- Monte Carlo


@dataclass
class MCResult:
    estimate: float
    stderr: float
    samples: int


def _cell_sums(field, n, r, cells, polys, frames):
    """Per-chunk sums for the ratio estimator of each (nu, kind, m) cell."""
    top = frames[:, _rows(field, n, range(r)), :]
    bot = frames[:, _rows(field, n, range(r, n)), :]
    s_top = np.linalg.svd(top, compute_uv=False)
    if field == "H":
        s_top = s_top[..., ::2]
    cos_prod = np.prod(s_top, axis=-1)
    sin_prod = _sv_product(field, bot)
    angles = np.arccos(np.clip(s_top, 0.0, 1.0))
    phi_vals = {}
    out = []
    for nu, kind, m in cells:
        base = cos_prod if kind == "cos" else sin_prod
        k = base ** (2 * float(nu))
        if m not in phi_vals:
            phi_vals[m] = evaluate_grassmannian(polys[m], angles)
        kp = k * phi_vals[m]
        out.append((k.sum(), kp.sum(), (k * k).sum(), (kp * kp).sum(), (k * kp).sum()))
    return out


def mc_symbols(field: str, n: int, r: int, cells: Sequence[tuple], samples: int, seed: int) -> list[MCResult]:
    """Monte Carlo estimates of E[K phi_m] / E[K] for many cells from one sample.

    ``cells`` holds (nu, kind, m) with kind 'cos' or 'sin'; K is the kernel
    |Cos(xi_0, y)|^{2nu} (or |Sin|^{2nu}) and y is Haar on G_{n,r}(K).  The
    estimate targets symbol / normalisation; stderr is the delta-method
    standard error of the ratio estimator.  Deterministic in ``seed`` for any
    GRASSTRANS_THREADS.
    """
    rs = grassmannian_preset(field, n, r)
    cells = [(nu, kind, tuple(m)) for nu, kind, m in cells]
    polys = {m: jacobi_polynomial(rs, m) for _, _, m in cells}
    sizes = [CHUNK] * (samples // CHUNK)
    if samples % CHUNK:
        sizes.append(samples % CHUNK)

    def work(i):
        rng = make_rng(seed, i)
        frames = haar_frames(field, n, r, sizes[i], rng)
        return _cell_sums(field, n, r, cells, polys, frames)

    with ThreadPoolExecutor(max_workers=_threads()) as ex:
        parts = list(ex.map(work, range(len(sizes))))

    results = []
    for c in range(len(cells)):
        s = [math.fsum(p[c][q] for p in parts) for q in range(5)]
        sk, skp, skk, skpkp, skkp = s
        ratio = skp / sk
        var = (skpkp - 2 * ratio * skkp + ratio * ratio * skk) / samples
        mean_k = sk / samples
        se = math.sqrt(max(var, 0.0) / (samples - 1)) / mean_k
        results.append(MCResult(ratio, se, samples))
    return results


def mc_symbol(field: str, n: int, r: int, nu, kind: str, m: Sequence[int], samples: int, seed: int) -> MCResult:
    kind = "cos" if kind.lower().startswith("cos") else "sin"
    return mc_symbols(field, n, r, [(nu, kind, tuple(m))], samples, seed)[0]


def mc_grid(field: str, n: int, r: int, nus, degree: int, samples: int, seed: int, sigma: float = 3.0, convention: str = "geometric") -> dict:
    """Compare Monte Carlo with closed forms on every (nu, kind, m) cell.

    A cell is flagged if it misses by more than ``sigma`` standard errors;
    flagged cells are re-estimated with an independent seed and count as
    failures only if the miss persists.  ``convention`` selects the
    multiplicities used for the closed-form targets (the sampling is always
    the true Haar measure).
    """
    rs = grassmannian_preset(field, n, r, convention)
    cells = [(nu, kind, m) for nu in nus for kind in ("cos", "sin") for m in even_dominant_weights(r, degree)]

    def target(nu, kind, m):
        sym = (spectra.cosine_symbol if kind == "cos" else spectra.sine_symbol)(rs, nu, m)
        return 0.0 if sym.is_exact_zero else float(sym.ratio)

    res = mc_symbols(field, n, r, cells, samples, seed)
    rows, flagged = [], []
    for cell, est in zip(cells, res):
        tgt = target(*cell)
        z = (est.estimate - tgt) / est.stderr if est.stderr > 0 else (0.0 if est.estimate == tgt else math.inf)
        rows.append({"nu": cell[0], "kind": cell[1], "m": list(cell[2]), "estimate": est.estimate, "stderr": est.stderr, "target": tgt, "z": z})
        if abs(z) > sigma:
            flagged.append(len(rows) - 1)
    persistent = []
    if flagged:
        redo = mc_symbols(field, n, r, [cells[i] for i in flagged], samples, seed + 1_000_003)
        for i, est in zip(flagged, redo):
            tgt = rows[i]["target"]
            z2 = (est.estimate - tgt) / est.stderr
            rows[i]["z_rerun"] = z2
            if abs(z2) > sigma:
                persistent.append(i)
    worst = max(abs(r_["z"]) for r_ in rows)
    return {
        "field": field,
        "n": n,
        "r": r,
        "samples": samples,
        "seed": seed,
        "cells": rows,
        "max_abs_z": worst,
        "flagged": len(flagged),
        "persistent": len(persistent),
        "passed": not persistent,
    }


# ----------------------------------------------------------- Knapp-Stein kernel


def random_matrices(field: str, r: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if field == "R":
        return rng.standard_normal((count, r, r))
    z = rng.standard_normal((count, r, r)) + 1j * rng.standard_normal((count, r, r))
    if field == "C":
        return z
    w = rng.standard_normal((count, r, r)) + 1j * rng.standard_normal((count, r, r))
    return quat_embed(z, w)


def _graph_frames(field: str, y: np.ndarray) -> np.ndarray:
    """Orthonormal frames of span [I; Y] (embedded for H)."""
    count, k, _ = y.shape
    if field == "H":
        r = k // 2
        z, w = quat_parts(y)
        eye = np.broadcast_to(np.eye(r, dtype=complex), z.shape)
        zz = np.concatenate([eye, z], axis=-2)
        ww = np.concatenate([np.zeros_like(eye), w], axis=-2)
        return _block_gram_schmidt(quat_embed(zz, ww))
    eye = np.broadcast_to(np.eye(k, dtype=y.dtype), y.shape)
    q, _ = np.linalg.qr(np.concatenate([eye, y], axis=-2))
    return q


def _n_matrix(field: str, y: np.ndarray) -> np.ndarray:
    """n_Y = [[I, 0], [Y, I]] in GL(2r, K) (embedded for H)."""
    count = y.shape[0]
    if field == "H":
        r = y.shape[-1] // 2
        z, w = quat_parts(y)
        eye = np.broadcast_to(np.eye(r, dtype=complex), z.shape)
        zero = np.zeros_like(z)
        zz = np.block([[eye, zero], [z, eye]])
        ww = np.block([[zero, zero], [w, zero]])
        return quat_embed(zz, ww)
    k = y.shape[-1]
    eye = np.broadcast_to(np.eye(k, dtype=y.dtype), y.shape)
    zero = np.zeros_like(y)
    return np.block([[eye, zero], [y, eye]])


def knapp_stein_kernel_check(field: str, r: int, t_param: float, samples: int, seed: int) -> dict:
    """Max relative errors of two kernel identities on random Y in M_r(K).

    'sin': |Sin(xi_0, span[I;Y])|^a = |det_R Y| / det_R(I + Y*Y)^{1/2}.
    'delta': with n_Y = k p (Iwasawa, p block upper triangular with diagonal
    blocks B, D), |det_R(B D^{-1})|^s = det_R(I + Y*Y)^s, checked at
    s = t and s = (r - 2t)/2, the exponent of the Knapp-Stein kernel.
    'triangular' is the size of the strictly lower block of p.
    """
    a = FIELD_DIM[field]
    s_values = (float(t_param), (r - 2 * float(t_param)) / 2)
    n = 2 * r
    rng = make_rng(seed, 0)
    y = random_matrices(field, r, samples, rng)
    k = y.shape[-1]
    eye = np.eye(k)
    gram = eye + np.conj(np.swapaxes(y, -1, -2)) @ y
    det_gram = det_real(field, gram)
    det_y = np.abs(det_real(field, y))

    frames = _graph_frames(field, y)
    comp = frames[:, _rows(field, n, range(r, n)), :]
    sin_a = _sv_product(field, comp) ** a
    expect = det_y / np.sqrt(det_gram)
    err_sin = float(np.max(np.abs(sin_a - expect) / expect))

    nmat = _n_matrix(field, y)
    if field == "H":
        q = _block_gram_schmidt(nmat)
    else:
        q, _ = np.linalg.qr(nmat)
    p = np.conj(np.swapaxes(q, -1, -2)) @ nmat
    top, bot = _rows(field, n, range(r)), _rows(field, n, range(r, n))
    bb = p[:, top][:, :, top]
    dd = p[:, bot][:, :, bot]
    low = p[:, bot][:, :, top]
    bd = bb @ np.linalg.inv(dd)
    det_bd = np.abs(det_real(field, bd))
    err_delta = 0.0
    for s in s_values:
        lhs, rhs = det_bd**s, det_gram**s
        err_delta = max(err_delta, float(np.max(np.abs(lhs - rhs) / rhs)))
    err_tri = float(np.max(np.abs(low)))
    return {"sin": err_sin, "delta": err_delta, "triangular": err_tri}
