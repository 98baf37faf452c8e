"""Minimal Gaussian-state toolbox over covariance matrices.

Conventions: mode ordering (x1, p1, ..., xN, pN); vacuum covariance is the
identity, so a thermal mode with mean photon number n has covariance
(2n+1)*I and the entropy of a symplectic eigenvalue nu is g((nu-1)/2).
Means are never tracked; nothing here depends on them.
"""

from __future__ import annotations

import math

import numpy as np

_SYMMETRY_TOL = 1e-12
_PHYSICALITY_SLACK = 1e-9
_PHYSICALITY_HARD_FLOOR = 1e-6
_MAX_QUADRATURES = 10


class UnphysicalStateError(ValueError):
    """Covariance matrix with a symplectic eigenvalue below one."""


def entropy_g(x: float) -> float:
    """Bosonic entropy of a thermal state with mean photon number x, in bits.

    g(x) = (x+1) log2(x+1) - x log2(x), with g(0) = 0 by continuity.  The
    evaluation x*log1p(1/x) stays exact for large x, where the direct
    difference of the two terms loses every significant digit.
    """
    if x < 0:
        raise ValueError(f"mean photon number must be nonnegative, got {x!r}")
    if x == 0.0:
        return 0.0
    return math.log2(x + 1.0) + x * math.log1p(1.0 / x) / math.log(2.0)


def num_modes(cov: np.ndarray) -> int:
    n, m = cov.shape
    if n != m or n % 2:
        raise ValueError(f"covariance must be square with even size, got {cov.shape}")
    return n // 2


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal 2N x 2N form with 2x2 blocks [[0, 1], [-1, 0]]."""
    omega = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(n_modes), omega)


def check_covariance(cov: np.ndarray) -> None:
    """Enforce symmetry and physicality (every symplectic eigenvalue >= 1)."""
    n = num_modes(cov)
    if 2 * n > _MAX_QUADRATURES:
        raise ValueError(f"covariance exceeds the {_MAX_QUADRATURES}-quadrature cap")
    if not np.allclose(cov, cov.T, rtol=0.0, atol=_SYMMETRY_TOL):
        raise ValueError("covariance matrix is not symmetric")
    symplectic_eigenvalues(cov)


def tmsv_covariance(mu: float) -> np.ndarray:
    """Two-mode squeezed vacuum with mean photon number mu in each arm."""
    if mu < 0:
        raise ValueError(f"mu must be nonnegative, got {mu!r}")
    a = 2.0 * mu + 1.0
    c = 2.0 * math.sqrt(mu * (mu + 1.0))
    cov = np.diag([a, a, a, a])
    cross = np.diag([c, -c])
    cov[0:2, 2:4] = cross
    cov[2:4, 0:2] = cross
    return cov


def apply_beamsplitter(cov: np.ndarray, mode_i: int, mode_j: int, transmissivity: float) -> np.ndarray:
    """Mix modes i and j on a beamsplitter of the given transmissivity.

    Output mode i keeps sqrt(tau) of its input and gains sqrt(1-tau) of
    mode j; mode j gets the orthogonal combination.
    """
    n = num_modes(cov)
    if not 0.0 <= transmissivity <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {transmissivity!r}")
    if mode_i == mode_j or not (0 <= mode_i < n and 0 <= mode_j < n):
        raise ValueError(f"invalid mode pair ({mode_i}, {mode_j}) for {n} modes")
    t = math.sqrt(transmissivity)
    r = math.sqrt(1.0 - transmissivity)
    s = np.eye(2 * n)
    for k in range(2):
        a, b = 2 * mode_i + k, 2 * mode_j + k
        s[a, a] = t
        s[a, b] = r
        s[b, a] = -r
        s[b, b] = t
    return s @ cov @ s.T


def attach_mode(cov: np.ndarray, variance: float) -> np.ndarray:
    """Append one uncorrelated mode with covariance variance * I."""
    if variance < 1.0:
        raise ValueError(f"mode variance must be at least 1 (vacuum), got {variance!r}")
    n = num_modes(cov)
    out = np.zeros((2 * n + 2, 2 * n + 2))
    out[: 2 * n, : 2 * n] = cov
    out[2 * n, 2 * n] = variance
    out[2 * n + 1, 2 * n + 1] = variance
    return out


def _quadrature_indices(modes) -> np.ndarray:
    return np.array([2 * m + k for m in modes for k in range(2)])


def partial_trace(cov: np.ndarray, keep) -> np.ndarray:
    """Principal submatrix on the kept modes, in the order given."""
    n = num_modes(cov)
    keep = list(keep)
    if not keep:
        raise ValueError("keep set must be nonempty")
    if len(set(keep)) != len(keep) or any(not 0 <= m < n for m in keep):
        raise ValueError(f"invalid keep set {keep!r} for {n} modes")
    idx = _quadrature_indices(keep)
    return cov[np.ix_(idx, idx)]


def condition_on_heterodyne(cov: np.ndarray, measured_mode: int) -> np.ndarray:
    """Covariance of the remaining modes after ideal heterodyne on one mode.

    Schur complement sigma_A - sigma_AB (sigma_B + I)^-1 sigma_AB^T; the
    added identity is the vacuum unit of the heterodyne setup.  Gaussian
    conditioning is outcome-independent, so no outcome argument exists.
    """
    n = num_modes(cov)
    if not 0 <= measured_mode < n:
        raise ValueError(f"invalid mode {measured_mode} for {n} modes")
    if n == 1:
        raise ValueError("cannot condition away the only mode")
    rest = [m for m in range(n) if m != measured_mode]
    ia = _quadrature_indices(rest)
    ib = _quadrature_indices([measured_mode])
    sig_a = cov[np.ix_(ia, ia)]
    sig_ab = cov[np.ix_(ia, ib)]
    sig_b = cov[np.ix_(ib, ib)]
    return sig_a - sig_ab @ np.linalg.solve(sig_b + np.eye(2), sig_ab.T)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """Symplectic spectrum of a physical covariance, sorted descending.

    Computed as square roots of the eigenvalues of -(Omega sigma)^2, which
    is real with each nu appearing twice.  Values within 1e-9 below 1 are
    clamped to 1; anything lower is rejected as unphysical.
    """
    n = num_modes(cov)
    omega_sigma = symplectic_form(n) @ cov
    squared = np.linalg.eigvals(-(omega_sigma @ omega_sigma))
    squared = np.sort(np.real(squared))[::-1]
    nus = np.sqrt(np.maximum(squared, 0.0))[::2]
    floor = np.min(nus) if nus.size else 1.0
    if floor < 1.0 - _PHYSICALITY_HARD_FLOOR:
        raise UnphysicalStateError(
            f"symplectic eigenvalue {floor!r} below 1; state is unphysical"
        )
    return np.maximum(nus, np.where(nus >= 1.0 - _PHYSICALITY_SLACK, 1.0, nus))


def von_neumann_entropy(cov: np.ndarray) -> float:
    """Entropy in bits: sum of g((nu_i - 1)/2) over the symplectic spectrum.

    Eigenvalues inside the sub-vacuum noise band tolerated by
    symplectic_eigenvalues count as exactly vacuum here.
    """
    nus = symplectic_eigenvalues(cov)
    return float(sum(entropy_g(max((nu - 1.0) / 2.0, 0.0)) for nu in nus))
