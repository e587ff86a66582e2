"""Floating-point Hermitian spectra: frame bounds, Bessel bounds, operator norms.

Eigenvalues come from a cyclic Jacobi iteration, which is deterministic for a
given input and accurate for the small dense matrices this package produces.
Complex Hermitian input is handled through the real symmetric embedding
``[[Re, -Im], [Im, Re]]``, whose spectrum is that of the input with every
eigenvalue doubled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonHermitian

SYMMETRY_TOL = 1e-9
OFFDIAG_TOL = 1e-13
ZERO_CUTOFF = 1e-10  # relative to lambda_max


@dataclass(frozen=True)
class SpectralSummary:
    lambda_min: float
    lambda_max: float
    sigma_min: float
    tolerance: float

    def to_dict(self):
        return {
            "lambda_min": self.lambda_min,
            "lambda_max": self.lambda_max,
            "sigma_min": self.sigma_min,
            "tolerance": self.tolerance,
        }


def as_float_matrix(m) -> np.ndarray:
    """Exact or float list-of-rows matrix -> complex ndarray (real if possible)."""
    a = np.array([[complex(x) for x in row] for row in m], dtype=complex)
    if a.size == 0:
        return a.real
    if not np.any(a.imag):
        return a.real.copy()
    return a


def _jacobi_real(a: np.ndarray, want_vectors: bool):
    a = a.copy()
    n = a.shape[0]
    v = np.eye(n) if want_vectors else None
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(100):
        off = math.sqrt(max(0.0, float(np.sum(a * a) - np.sum(np.diag(a) ** 2))))
        if off < OFFDIAG_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                if abs(apq) < 1e-300 * max(abs(a[p, p]), abs(a[q, q]), 1.0):
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta  # theta^2 would overflow
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                cp = a[:, p].copy()
                cq = a[:, q]
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                rp = a[p, :].copy()
                rq = a[q, :]
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                a[p, q] = a[q, p] = 0.0
                if v is not None:
                    vp = v[:, p].copy()
                    vq = v[:, q]
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
    return np.diag(a).copy(), v


def _prepare(g) -> np.ndarray:
    g = g if isinstance(g, np.ndarray) else as_float_matrix(g)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("square matrix expected")
    asym = float(np.max(np.abs(g - g.conj().T))) if g.size else 0.0
    if asym > SYMMETRY_TOL:
        raise NonHermitian(f"asymmetry {asym:.3e} exceeds {SYMMETRY_TOL}")
    return (g + g.conj().T) / 2.0


def hermitian_eigh(g):
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""
    g = _prepare(g)
    n = g.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    if np.iscomplexobj(g):
        emb = np.block([[g.real, -g.imag], [g.imag, g.real]])
        w, v = _jacobi_real(emb, True)
        order = np.argsort(w, kind="stable")[::2]
        vecs = v[:n, order] + 1j * v[n:, order]
        vecs /= np.linalg.norm(vecs, axis=0)
        return w[order], vecs
    w, v = _jacobi_real(g, True)
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def hermitian_eigs(g) -> list[float]:
    """Ascending real eigenvalues of a Hermitian matrix."""
    g = _prepare(g)
    n = g.shape[0]
    if n == 0:
        return []
    if np.iscomplexobj(g):
        emb = np.block([[g.real, -g.imag], [g.imag, g.real]])
        w, _ = _jacobi_real(emb, False)
        return sorted(float(x) for x in w)[::2]
    w, _ = _jacobi_real(g, False)
    return sorted(float(x) for x in w)


def nonzero_spectrum(synthesis) -> list[float]:
    """Nonzero eigenvalues of F F^* (equivalently F^* F) for a d x N synthesis."""
    f = synthesis if isinstance(synthesis, np.ndarray) else as_float_matrix(synthesis)
    if f.size == 0:
        return []
    d, n = f.shape
    gram = f.conj().T @ f if n <= d else f @ f.conj().T
    eigs = hermitian_eigs(gram)
    top = max(eigs) if eigs else 0.0
    if top <= 0.0:
        return []
    return [x for x in eigs if x >= ZERO_CUTOFF * top]


def bounds_of_synthesis(synthesis, tolerance: float = 1e-9) -> SpectralSummary:
    """Optimal frame-sequence bounds of the columns of ``synthesis``."""
    eigs = nonzero_spectrum(synthesis)
    if not eigs:
        return SpectralSummary(0.0, 0.0, 0.0, tolerance)
    lo, hi = max(eigs[0], 0.0), max(eigs[-1], 0.0)
    return SpectralSummary(lo, hi, math.sqrt(lo), tolerance)


def frame_bounds(w, tolerance: float = 1e-9) -> SpectralSummary:
    """Frame-sequence bounds of a window (restricted to its span)."""
    return bounds_of_synthesis(w.float_synthesis(), tolerance)


def full_space_lambda_min(synthesis) -> float:
    """Smallest eigenvalue of F F^* on the whole ambient space (0 if not complete)."""
    f = synthesis if isinstance(synthesis, np.ndarray) else as_float_matrix(synthesis)
    d = f.shape[0]
    eigs = hermitian_eigs(f @ f.conj().T) if d else []
    return max(eigs[0], 0.0) if eigs else 0.0


def operator_norm(t) -> float:
    """Largest singular value of ``t``."""
    a = t if isinstance(t, np.ndarray) else as_float_matrix(t)
    if a.size == 0:
        return 0.0
    eigs = hermitian_eigs(a.conj().T @ a)
    return math.sqrt(max(eigs[-1], 0.0))
