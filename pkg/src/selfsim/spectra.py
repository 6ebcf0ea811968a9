"""Symmetric eigensolver plumbing and spectral set comparisons.

All operators in scope are real symmetric, so spectra are eigenvalue
multisets.  The solver contract adds two guarantees on top of LAPACK:

* determinism: identical input bytes give identical output bytes;
* exact scale equivariance under powers of two: matrices are divided by a
  power-of-two prescale factor before the backend call (an exact float
  operation), so eigvals(4 M) == 4 * eigvals(M) bitwise whenever the entries
  of 4 M are representable.

A torch backend is used for large dense problems when available; the thread
count is capped by the SELFSIM_THREADS environment variable for
reproducibility across machines.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import NotSymmetric, RadiusTooSmall
from .renorm import IntervalUnion

_TORCH_MIN_DIM = 1024   # below this LAPACK via numpy wins on latency
_VECTOR_MAX_DIM = 2048  # above this residuals use the a priori backward bound

_ASYM_REL_TOL = 1e-12


def _entries(M) -> np.ndarray:
    return np.asarray(getattr(M, "entries", M), dtype=float)


def _check_symmetric(M: np.ndarray) -> None:
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSymmetric(f"expected a square matrix, got shape {M.shape}")
    scale = 1.0 + float(np.abs(M).max(initial=0.0))
    asym = float(np.abs(M - M.T).max(initial=0.0))
    if asym > _ASYM_REL_TOL * scale:
        raise NotSymmetric(f"asymmetry {asym:.3e} exceeds {_ASYM_REL_TOL:.0e} * {scale:.3e}")


def _prescale(M: np.ndarray) -> tuple[np.ndarray, float]:
    """Divide by the power of two bracketing the largest entry (exact).

    The scaled matrix has max entry in [1/2, 1); matrices that differ by an
    exact power-of-two factor scale to bit-identical arrays, which is what
    makes the solver exactly equivariant under such factors.
    """
    top = float(np.abs(M).max(initial=0.0))
    if top == 0.0 or not math.isfinite(top):
        return M, 1.0
    _, e = math.frexp(top)
    p = math.ldexp(1.0, e)
    return M / p, p


def _solve_values(scaled: np.ndarray) -> np.ndarray:
    if scaled.shape[0] >= _TORCH_MIN_DIM:
        try:
            import torch
        except ImportError:
            torch = None
        if torch is not None:
            threads = os.environ.get("SELFSIM_THREADS")
            if threads:
                torch.set_num_threads(max(1, int(threads)))
            return torch.linalg.eigvalsh(torch.from_numpy(scaled)).numpy()
    return np.linalg.eigvalsh(scaled)


def sym_eigvals(M) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending, deterministic."""
    A = _entries(M)
    _check_symmetric(A)
    scaled, p = _prescale(A)
    return p * _solve_values(scaled)


@dataclass(frozen=True)
class EigReport:
    eigenvalues: tuple[float, ...]
    residual_bound: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def to_csv(self) -> str:
        lines = [f"# dim={self.dim} residual_bound={self.residual_bound!r}", "value"]
        lines.extend(repr(v) for v in self.eigenvalues)
        return "\n".join(lines) + "\n"


def sym_eigs(M) -> EigReport:
    """Eigenvalue report with a residual bound on max ||Mv - lambda v|| / ||M||.

    Up to the vector cutoff the bound is measured from computed eigenpairs;
    beyond it, forming the full eigenvector matrix is not worth the memory
    and time, and the report falls back on the backward-stability bound
    dim * eps of the underlying solver.
    """
    A = _entries(M)
    _check_symmetric(A)
    scaled, p = _prescale(A)
    dim = A.shape[0]
    if dim <= _VECTOR_MAX_DIM:
        w, V = np.linalg.eigh(scaled)
        values = p * w
        norm = float(np.abs(values).max(initial=0.0))
        if norm == 0.0:
            residual = 0.0
        else:
            gap = A @ V - V * values
            residual = float(np.sqrt((gap * gap).sum(axis=0)).max()) / norm
    else:
        values = p * _solve_values(scaled)
        residual = dim * float(np.finfo(float).eps)
    return EigReport(tuple(float(v) for v in values), residual)


def hausdorff_to_set(points, target: IntervalUnion) -> tuple[float, float]:
    """Directed distances between a finite point set and an interval union.

    Forward: how far points stray from the target.  Backward: how much of the
    target the points fail to cover; the supremum over the continuum is exact
    because the distance-to-points function is piecewise linear with local
    maxima only at interval endpoints and midpoints of consecutive points.
    """
    pts = sorted(float(p) for p in points)
    if not pts:
        raise ValueError("need at least one point")
    if target.is_empty():
        raise ValueError("target union is empty")
    forward = max(target.distance(p) for p in pts)

    def dist_to_points(x: float) -> float:
        i = np.searchsorted(pts, x)
        best = math.inf
        if i < len(pts):
            best = pts[i] - x
        if i > 0:
            best = min(best, x - pts[i - 1])
        return best

    backward = 0.0
    mids = [(a + b) / 2.0 for a, b in zip(pts, pts[1:])]
    for lo, hi in target:
        candidates = [lo, hi]
        candidates.extend(m for m in mids if lo < m < hi)
        backward = max(backward, max(dist_to_points(c) for c in candidates))
    return forward, backward


@dataclass(frozen=True)
class ShiftReport:
    """Agreement record for the resolvent-free spectral membership identity.

    For symmetric M the shifted operator S = I - (M - alpha I)^2 / R^2 has
    eigenvalues 1 - (lambda - alpha)^2 / R^2, so membership of alpha in the
    spectrum maps to membership of 1 in sigma(S).  The shifted test uses the
    threshold tol / R^2 on |mu - 1|, i.e. it accepts |lambda - alpha| up to
    sqrt(tol); probes should stay clear of the band (tol, sqrt(tol)) where
    the two tolerances disagree by construction.
    """

    alpha: float
    radius: float
    tol_direct: float
    tol_shifted: float
    gap_direct: float
    gap_shifted: float

    @property
    def direct_member(self) -> bool:
        return self.gap_direct <= self.tol_direct

    @property
    def shifted_member(self) -> bool:
        return self.gap_shifted <= self.tol_shifted

    @property
    def agree(self) -> bool:
        return self.direct_member == self.shifted_member


def spectral_shift_check(M, alpha: float, R: float, tol: float) -> ShiftReport:
    """Test alpha in sigma(M) directly and through the shifted operator."""
    A = _entries(M)
    values = sym_eigvals(A)
    norm = float(np.abs(values).max(initial=0.0))
    if R < 2.0 * norm:
        raise RadiusTooSmall(f"need R >= 2 ||M|| = {2.0 * norm}, got {R}")
    if R <= 0.0:
        raise RadiusTooSmall("need a positive radius")
    gap_direct = float(np.abs(values - alpha).min())
    K = A - alpha * np.eye(A.shape[0])
    S = np.eye(A.shape[0]) - (K @ K) / (R * R)
    mu = sym_eigvals(S)
    gap_shifted = float(np.abs(mu - 1.0).min())
    return ShiftReport(alpha, R, tol, tol / (R * R), gap_direct, gap_shifted)


@dataclass(frozen=True)
class Histogram:
    counts: tuple[int, ...]
    lo: float
    hi: float
    underflow: int
    overflow: int

    def total(self) -> int:
        return sum(self.counts) + self.underflow + self.overflow


def eig_histogram(points, bins: int, bounds: tuple[float, float]) -> Histogram:
    """Fixed-range histogram; out-of-range values land in overflow buckets."""
    lo, hi = float(bounds[0]), float(bounds[1])
    if bins < 1:
        raise ValueError("need at least one bin")
    if not lo < hi:
        raise ValueError("need lo < hi")
    pts = np.asarray(list(points), dtype=float)
    inside = pts[(pts >= lo) & (pts <= hi)]
    counts, _ = np.histogram(inside, bins=bins, range=(lo, hi))
    return Histogram(
        tuple(int(c) for c in counts),
        lo,
        hi,
        int((pts < lo).sum()),
        int((pts > hi).sum()),
    )
