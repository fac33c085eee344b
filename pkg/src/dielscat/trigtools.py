"""Trigonometric interpolation and singular product-quadrature weights.

Everything lives on the equispaced grid t_j = j*pi/n, j = 0..2n-1. Nodal
values of a function are identified with the unique interpolating
trigonometric polynomial of the form

    v(t) = sum_{m=0}^{n} a_m cos(m t) + sum_{m=1}^{n-1} b_m sin(m t),

i.e. Fourier modes -(n-1)..n with the unpaired mode n purely cosine.

Three product-quadrature weight families are provided. Each rule
sum_j W_j(t) q(t_j) integrates weight(t - tau) * q(tau) over [0, 2*pi]
exactly for every q in the trigonometric space above:

    weights_R : weight ln(4 sin^2((t-tau)/2))
    weights_Q : weight sin^2((t-tau)/2) ln(4 sin^2((t-tau)/2))
    weights_T : the principal-value operator
                (1/4pi) PV int cot((tau-t)/2) q'(tau) dtau,
                which maps e^{i m t} to -(|m|/2) e^{i m t}.

All three are pure cosine series in (t - t_j), so the collocation
matrices W_j(t_i) are circulants; their exact Fourier multipliers are
exposed for the spectral constructions in :mod:`dielscat.operators`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Grid", "NodalFunction", "fourier_coeffs", "inverse_fourier",
    "eval_interpolant", "weights_R", "weights_Q", "weights_T",
    "sin2log_fourier_coeff", "log_fourier_coeff", "sobolev_norm",
]


@dataclass(frozen=True)
class Grid:
    """Equispaced periodic grid with 2n nodes t_j = j*pi/n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid order n must be >= 1")

    @property
    def size(self) -> int:
        return 2 * self.n

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(2 * self.n) * (np.pi / self.n)

    def fft_modes(self) -> np.ndarray:
        """Signed integer mode of each FFT bin: [0..n-1, -n..-1]."""
        return np.fft.fftfreq(2 * self.n, d=1.0 / (2 * self.n))


@dataclass(frozen=True)
class NodalFunction:
    """Nodal values identified with their trigonometric interpolant."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        if np.asarray(self.values).shape != (self.grid.size,):
            raise ValueError("values must have length 2n")


def _values_of(f) -> tuple[Grid | None, np.ndarray]:
    if isinstance(f, NodalFunction):
        return f.grid, np.asarray(f.values)
    v = np.asarray(f)
    return None, v


def fourier_coeffs(f) -> tuple[np.ndarray, np.ndarray]:
    """Discrete Fourier coefficients of nodal values.

    Returns ``(modes, coeffs)`` with modes ascending -(n-1)..n and the
    1/(2n) normalization, so constants map to a single coefficient 1 at
    mode 0. Exact inverse of :func:`inverse_fourier`.
    """
    _, v = _values_of(f)
    n2 = v.size
    n = n2 // 2
    c = np.fft.fft(v) / n2
    modes = np.concatenate([np.arange(-(n - 1), 0), np.arange(0, n + 1)])
    # fft layout is [0..n-1, -n..-1]; bin n is the unpaired cosine mode,
    # relabelled +n (e^{int} and e^{-int} coincide on the nodes)
    coeffs = np.concatenate([c[n + 1:], c[:n + 1]])
    return modes, coeffs


def inverse_fourier(grid: Grid, coeffs: np.ndarray) -> np.ndarray:
    """Nodal values from mode-ordered coefficients (-(n-1)..n)."""
    n = grid.n
    coeffs = np.asarray(coeffs)
    if coeffs.shape != (2 * n,):
        raise ValueError("expected 2n coefficients")
    c = np.concatenate([coeffs[n - 1:], coeffs[:n - 1]])
    return np.fft.ifft(c) * (2 * n)


def eval_interpolant(grid: Grid, values: np.ndarray, t) -> np.ndarray:
    """Evaluate the trigonometric interpolant at arbitrary angles.

    The unpaired mode n is evaluated as cos(n t), matching the
    interpolation space.
    """
    t = np.asarray(t, dtype=np.float64)
    modes, c = fourier_coeffs(values)
    inner = modes[np.abs(modes) < grid.n]
    ci = c[np.abs(modes) < grid.n]
    out = np.tensordot(np.exp(1j * np.multiply.outer(t, inner)), ci, axes=1)
    out = out + c[-1] * np.cos(grid.n * t)
    return out


# ---------------------------------------------------------------------------
# Singular quadrature weights
# ---------------------------------------------------------------------------
def weights_R(grid: Grid, t: float) -> np.ndarray:
    """Kussmaul-Martensen weights for the log weight ln(4 sin^2((t-tau)/2)).

    R_j(t) = -(2 pi / n) sum_{m=1}^{n-1} cos(m (t - t_j))/m
             - (pi / n^2) cos(n (t - t_j)).
    """
    n = grid.n
    d = np.asarray(t, dtype=np.float64)[..., None] - grid.nodes
    m = np.arange(1, n)
    acc = np.zeros(d.shape)
    if n > 1:
        acc = np.tensordot(np.cos(np.multiply.outer(d, m)), 1.0 / m, axes=1)
    return -(2 * np.pi / n) * acc - (np.pi / n ** 2) * np.cos(n * d)


def sin2log_fourier_coeff(m) -> np.ndarray:
    """(1/2pi) int_0^{2pi} sin^2(t/2) ln(4 sin^2(t/2)) e^{imt} dt.

    Equals 1/2 at m = 0, -3/8 at |m| = 1 and
    (1/4)(1/|m+1| + 1/|m-1| - 2/|m|) otherwise.
    """
    m = np.abs(np.asarray(m, dtype=np.float64))
    out = np.empty_like(m)
    out[m == 0] = 0.5
    out[m == 1] = -0.375
    big = m > 1
    mb = m[big]
    out[big] = 0.25 * (1.0 / (mb + 1) + 1.0 / (mb - 1) - 2.0 / mb)
    return out[()] if out.ndim == 0 else out


def log_fourier_coeff(m) -> np.ndarray:
    """(1/2pi) int_0^{2pi} ln(4 sin^2(t/2)) e^{imt} dt = -1/|m| (0 at m=0)."""
    m = np.abs(np.asarray(m, dtype=np.float64))
    out = np.zeros_like(m)
    nz = m > 0
    out[nz] = -1.0 / m[nz]
    return out[()] if out.ndim == 0 else out


def weights_Q(grid: Grid, t: float) -> np.ndarray:
    """Weights for the weight sin^2((t-tau)/2) ln(4 sin^2((t-tau)/2)).

    Q_j(t) = (pi/n) (I(0) + 2 sum_{m=1}^{n-1} I(m) cos(m (t-t_j))
             + I(n) cos(n (t-t_j)))

    with I(m) = :func:`sin2log_fourier_coeff`. The pi/n prefactor makes
    the rule exact (equal to 2 pi I(m) per mode) on the interpolation
    space.
    """
    n = grid.n
    d = np.asarray(t, dtype=np.float64)[..., None] - grid.nodes
    m = np.arange(1, n)
    acc = np.zeros(d.shape)
    if n > 1:
        acc = 2.0 * np.tensordot(np.cos(np.multiply.outer(d, m)),
                                 sin2log_fourier_coeff(m), axes=1)
    acc = acc + sin2log_fourier_coeff(0) \
        + sin2log_fourier_coeff(n) * np.cos(n * d)
    return (np.pi / n) * acc


def weights_T(grid: Grid, t: float) -> np.ndarray:
    """Weights realizing the tangential principal-value operator.

    T_j(t) = -(1/2n) sum_{m=1}^{n-1} m cos(m (t-t_j))
             - (1/4) cos(n (t-t_j)),

    so that sum_j T_j(t) q(t_j) equals
    (1/4pi) PV int cot((tau-t)/2) q'(tau) dtau for q in the
    interpolation space, i.e. e^{imt} is multiplied by -|m|/2. (With the
    opposite kernel orientation cot((t-tau)/2) the weights flip sign.)
    """
    n = grid.n
    d = np.asarray(t, dtype=np.float64)[..., None] - grid.nodes
    m = np.arange(1, n)
    acc = np.zeros(d.shape)
    if n > 1:
        acc = np.tensordot(np.cos(np.multiply.outer(d, m)),
                           m.astype(np.float64), axes=1)
    return -acc / (2 * n) - 0.25 * np.cos(n * d)


def sobolev_norm(f, p: float) -> float:
    """Truncated periodic Sobolev norm of order p.

    Computed from the 2n resolved modes only:
    (sum_m (1+|m|^2)^p |c_m|^2)^(1/2). A diagnostic, not a solver
    ingredient.
    """
    modes, c = fourier_coeffs(f)
    return float(np.sqrt(np.sum((1.0 + modes.astype(np.float64) ** 2) ** p
                                * np.abs(c) ** 2)))
