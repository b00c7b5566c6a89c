"""Dense spectral functionals: singular values, matrix norms, effective rank.

The SVD is a one-sided Jacobi orthogonalization (Hestenes), vectorized over
stacks of same-shaped matrices with a round-robin ordering so that the n/2
disjoint column pairs of each round rotate simultaneously.  At the matrix
sizes this package works with (attention matrices, n <= 64) this is both
simple and fast, and it leaves ``numpy.linalg`` free to serve as an
independent test oracle.

All operations are pure functions of their inputs and hold no shared state;
they are safe to call from any number of threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SvdConvergenceError",
    "MatrixFormatError",
    "SpectralSummary",
    "as_matrix",
    "svd",
    "singular_values",
    "singular_values_batch",
    "effective_rank",
    "renyi2_rank",
    "spectral_summary",
    "load_matrix_csv",
    "save_matrix_csv",
]

#: Convergence tolerance for Jacobi rotations (relative off-diagonal mass).
SVD_TOL = 1e-12

#: Default cap on Jacobi sweeps before declaring non-convergence.
SVD_MAX_SWEEPS = 100

#: Singular values below this fraction of sigma_1 are treated as exact zeros
#: when forming the spectral probability distribution (avoids log underflow).
SIGMA_RELATIVE_CUTOFF = 1e-12


class SvdConvergenceError(RuntimeError):
    """Jacobi sweeps exceeded the configured cap without converging."""


class MatrixFormatError(ValueError):
    """A matrix file could not be parsed; message names file and line."""


def as_matrix(obj) -> np.ndarray:
    """Validate and return ``obj`` as a dense 2-D float64 array.

    Rejects empty shapes and non-finite entries; NaN/Inf never get past
    construction.
    """
    m = np.asarray(obj, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix contains non-finite entries")
    return m


def _round_robin_rounds(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    # Circle method: n-1 rounds (n even) of n/2 disjoint pairs covering all
    # column pairs exactly once.  Odd n gets a sit-out dummy.
    players = list(range(n)) + ([n] if n % 2 else [])
    size = len(players)
    rounds = []
    for _ in range(size - 1):
        left = []
        right = []
        for k in range(size // 2):
            a, b = players[k], players[size - 1 - k]
            if a < n and b < n:
                left.append(min(a, b))
                right.append(max(a, b))
        rounds.append((np.asarray(left, dtype=np.intp), np.asarray(right, dtype=np.intp)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def _jacobi_orthogonalize(a: np.ndarray, tol: float, max_sweeps: int):
    # a: (batch, m, n) with m >= n.  Returns (u, s, v) with a = u @ diag(s) @ v.T
    # per batch element, s descending.
    batch, m, n = a.shape
    w = np.array(a, dtype=np.float64, copy=True)
    v = np.broadcast_to(np.eye(n), (batch, n, n)).copy()
    if n >= 2:
        rounds = _round_robin_rounds(n)
        converged = False
        for _ in range(max_sweeps):
            rotated = False
            for idx_i, idx_j in rounds:
                wi = w[:, :, idx_i]
                wj = w[:, :, idx_j]
                aa = np.einsum("bmp,bmp->bp", wi, wi)
                bb = np.einsum("bmp,bmp->bp", wj, wj)
                cc = np.einsum("bmp,bmp->bp", wi, wj)
                need = np.abs(cc) > tol * np.sqrt(aa * bb)
                if not need.any():
                    continue
                rotated = True
                safe_c = np.where(need, cc, 1.0)
                zeta = np.where(need, (bb - aa) / (2.0 * safe_c), 0.0)
                # Stable root of t^2 + 2*zeta*t - 1 = 0; zeta == 0 means a
                # 45-degree rotation, not a no-op.
                t = np.where(
                    zeta == 0.0,
                    1.0,
                    np.sign(zeta) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta)),
                )
                t = np.where(need, t, 0.0)
                cs = 1.0 / np.sqrt(1.0 + t * t)
                sn = cs * t
                cs_w = cs[:, None, :]
                sn_w = sn[:, None, :]
                new_i = cs_w * wi - sn_w * wj
                new_j = sn_w * wi + cs_w * wj
                w[:, :, idx_i] = new_i
                w[:, :, idx_j] = new_j
                vi = v[:, :, idx_i]
                vj = v[:, :, idx_j]
                v[:, :, idx_i] = cs_w * vi - sn_w * vj
                v[:, :, idx_j] = sn_w * vi + cs_w * vj
            if not rotated:
                converged = True
                break
        if not converged:
            raise SvdConvergenceError(
                f"one-sided Jacobi did not converge within {max_sweeps} sweeps "
                f"(shape {m}x{n}, batch {batch})"
            )
    s = np.sqrt(np.einsum("bmn,bmn->bn", w, w))
    order = np.argsort(-s, axis=1, kind="stable")
    s = np.take_along_axis(s, order, axis=1)
    w = np.take_along_axis(w, order[:, None, :], axis=2)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    denom = np.where(s > 0.0, s, 1.0)
    u = np.where(s[:, None, :] > 0.0, w / denom[:, None, :], 0.0)
    return u, s, v


def svd(m, *, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS):
    """Full SVD ``m = u @ diag(s) @ vt`` with ``s`` nonincreasing.

    ``u`` is rows x min(rows, cols), ``vt`` is min(rows, cols) x cols.
    Raises :class:`SvdConvergenceError` past the sweep cap.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows >= cols:
        u, s, v = _jacobi_orthogonalize(a[None], tol, max_sweeps)
        return u[0], s[0], v[0].T
    u, s, v = _jacobi_orthogonalize(a.transpose(1, 0)[None], tol, max_sweeps)
    return v[0], s[0], u[0].T


def singular_values(m, *, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS) -> np.ndarray:
    """Full singular spectrum of ``m``, descending, length min(rows, cols)."""
    return svd(m, tol=tol, max_sweeps=max_sweeps)[1]


def singular_values_batch(
    stack, *, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS
) -> np.ndarray:
    """Singular spectra for a stack of same-shaped matrices.

    ``stack`` has shape (batch, rows, cols); returns (batch, min(rows, cols)).
    """
    a = np.asarray(stack, dtype=np.float64)
    if a.ndim != 3:
        raise ValueError(f"expected a (batch, rows, cols) stack, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("stack contains non-finite entries")
    if a.shape[1] < a.shape[2]:
        a = a.transpose(0, 2, 1)
    return _jacobi_orthogonalize(a, tol, max_sweeps)[1]


def _clean_spectrum(sigma) -> np.ndarray:
    s = np.asarray(sigma, dtype=np.float64).ravel()
    if s.size == 0:
        raise ValueError("empty spectrum")
    if not np.all(np.isfinite(s)):
        raise ValueError("spectrum contains non-finite values")
    if np.any(s < 0.0):
        raise ValueError("singular values must be nonnegative")
    smax = s.max()
    if smax == 0.0:
        raise ValueError("all singular values are zero")
    return np.where(s > smax * SIGMA_RELATIVE_CUTOFF, s, 0.0)


def spectrum_entropy(sigma) -> float:
    """Shannon entropy (natural log) of the normalized spectrum.

    Zero singular values contribute nothing (0 * log 0 = 0 convention);
    values below ``SIGMA_RELATIVE_CUTOFF`` times the largest are dropped.
    """
    s = _clean_spectrum(sigma)
    p = s / s.sum()
    nz = p[p > 0.0]
    return float(-(nz * np.log(nz)).sum())


def effective_rank(sigma) -> float:
    """exp of the spectral entropy: a continuous rank proxy in [1, nnz]."""
    return math.exp(spectrum_entropy(sigma))


def renyi2_rank(sigma) -> float:
    """(sum sigma)^2 / sum sigma^2, the order-2 lower bound on effective rank."""
    s = _clean_spectrum(sigma)
    return float(s.sum() ** 2 / (s * s).sum())


def _entropy_batch(sigmas: np.ndarray) -> np.ndarray:
    # sigmas: (batch, r) nonnegative with at least one positive per row.
    smax = sigmas.max(axis=1, keepdims=True)
    s = np.where(sigmas > smax * SIGMA_RELATIVE_CUTOFF, sigmas, 0.0)
    p = s / s.sum(axis=1, keepdims=True)
    logp = np.log(np.where(p > 0.0, p, 1.0))
    return -(p * logp).sum(axis=1)


def effective_rank_batch(sigmas: np.ndarray) -> np.ndarray:
    """Vectorized effective rank over rows of a (batch, r) spectrum array."""
    return np.exp(_entropy_batch(np.asarray(sigmas, dtype=np.float64)))


@dataclass
class SpectralSummary:
    """All spectral functionals of one matrix, derived from one SVD."""

    singular_values: np.ndarray
    effective_rank: float
    renyi2_rank: float
    nuclear_norm: float
    frobenius_norm: float
    operator_norm: float
    entropy: float

    def as_dict(self) -> dict:
        return {
            "singular_values": [float(x) for x in self.singular_values],
            "effective_rank": self.effective_rank,
            "renyi2_rank": self.renyi2_rank,
            "nuclear_norm": self.nuclear_norm,
            "frobenius_norm": self.frobenius_norm,
            "operator_norm": self.operator_norm,
            "entropy": self.entropy,
        }


def spectral_summary(
    m, *, tol: float = SVD_TOL, max_sweeps: int = SVD_MAX_SWEEPS
) -> SpectralSummary:
    """Singular values plus every derived functional of one matrix."""
    s = singular_values(m, tol=tol, max_sweeps=max_sweeps)
    h = spectrum_entropy(s)
    return SpectralSummary(
        singular_values=s,
        effective_rank=math.exp(h),
        renyi2_rank=renyi2_rank(s),
        nuclear_norm=float(s.sum()),
        frobenius_norm=float(math.sqrt((s * s).sum())),
        operator_norm=float(s[0]),
        entropy=h,
    )


def load_matrix_csv(path) -> np.ndarray:
    """Read a matrix from headerless CSV, one row per line.

    Raises :class:`MatrixFormatError` naming the file and line on any
    malformed content (bad float, ragged rows, non-finite values).
    """
    rows: list[list[float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            text = line.strip()
            if not text:
                continue
            cells = [c.strip() for c in text.split(",")]
            try:
                row = [float(c) for c in cells]
            except ValueError:
                raise MatrixFormatError(f"{path}:{lineno}: not a numeric row: {text!r}") from None
            if not all(math.isfinite(x) for x in row):
                raise MatrixFormatError(f"{path}:{lineno}: non-finite value")
            if rows and len(row) != len(rows[0]):
                raise MatrixFormatError(
                    f"{path}:{lineno}: expected {len(rows[0])} columns, got {len(row)}"
                )
            rows.append(row)
    if not rows:
        raise MatrixFormatError(f"{path}:1: empty matrix file")
    return np.asarray(rows, dtype=np.float64)


def save_matrix_csv(m, path) -> None:
    """Write a matrix as headerless CSV with 17 significant digits."""
    a = as_matrix(m)
    with open(path, "w", encoding="utf-8") as fh:
        for row in a:
            fh.write(",".join(f"{x:.17g}" for x in row))
            fh.write("\n")
