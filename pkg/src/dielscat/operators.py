"""Dense collocation matrices for the discretized boundary operators.

Every operator is a (2n) x (2n) complex matrix acting on nodal values at
the grid t_j = j pi/n; row i collocates at t_i. Because the three
product-quadrature weight families are pure cosine series in t - t_j,
their collocation matrices are circulants with known exact Fourier
multipliers, and all purely spectral operators (tangential PV operator,
log-kernel convolution, principal symbols, Calderon correction tails)
are built directly as circulants diagonalized by the DFT:

    multiplier lambda(m) acting on e^{i m t_j},  m in [0..n-1, -n..-1].

Quadrature operators combine a weight circulant with pointwise kernel
factors:

    log type      entries[i,j] = R_j(t_i)   * part1(t_i, t_j)
    sin2log type  entries[i,j] = Q_j(t_i)   * part1(t_i, t_j)
    smooth type   entries[i,j] = (pi / n)   * kernel(t_i, t_j)

Operator composition is plain matrix multiplication (collocation values
determine the trigonometric interpolant, so no explicit interpolation
operator is needed between factors). Assembly is deterministic: equal
inputs produce bit-identical matrices.
"""

from __future__ import annotations

import struct

import numpy as np

from .geometry import Curve
from .kernels import SplitKernelPair, split_complex, split_real
from .trigtools import Grid, log_fourier_coeff, sin2log_fourier_coeff

__all__ = [
    "circulant_from_multipliers", "weight_multipliers",
    "assemble_logtype", "assemble_sin2logtype", "assemble_smoothtype",
    "assemble_T0", "assemble_A0", "assemble_PS", "assemble_Atilde",
    "layer_op", "save_op", "load_op",
]


# ---------------------------------------------------------------------------
# Circulant machinery
# ---------------------------------------------------------------------------
def circulant_from_multipliers(grid: Grid, lam: np.ndarray) -> np.ndarray:
    """Matrix of the operator with Fourier multipliers lam (FFT layout)."""
    n2 = grid.size
    lam = np.asarray(lam, dtype=np.complex128)
    if lam.shape != (n2,):
        raise ValueError("need one multiplier per FFT bin")
    gen = np.fft.ifft(lam)  # generator row g[d], d = (i - j) mod 2n
    idx = (np.arange(n2)[:, None] - np.arange(n2)[None, :]) % n2
    return gen[idx]


def weight_multipliers(grid: Grid, family: str) -> np.ndarray:
    """Exact Fourier multipliers of the weight circulants.

    family "R": -2 pi / |m| (0 at m = 0); family "Q": 2 pi I(|m|);
    family "T": -|m| / 2 (the tangential PV operator).
    """
    m = np.abs(grid.fft_modes())
    if family == "R":
        return 2.0 * np.pi * log_fourier_coeff(m)
    if family == "Q":
        return 2.0 * np.pi * sin2log_fourier_coeff(m)
    if family == "T":
        return -0.5 * m
    raise ValueError(f"unknown weight family {family!r}")


def _weight_matrix(grid: Grid, family: str) -> np.ndarray:
    return circulant_from_multipliers(grid, weight_multipliers(grid, family)).real


def _kernel_matrix(fn, grid: Grid) -> np.ndarray:
    t = grid.nodes
    return np.asarray(fn(t[:, None], t[None, :]), dtype=np.complex128)


# ---------------------------------------------------------------------------
# Quadrature operators
# ---------------------------------------------------------------------------
def assemble_logtype(pair: SplitKernelPair, grid: Grid) -> np.ndarray:
    """Quadrature operator for kernels part1 * ln(4 sin^2((t-tau)/2))."""
    if pair.weight != "log":
        raise ValueError(f"expected a log-weight pair, got {pair.weight!r}")
    return _weight_matrix(grid, "R") * _kernel_matrix(pair.part1, grid)


def assemble_sin2logtype(pair: SplitKernelPair, grid: Grid) -> np.ndarray:
    """Quadrature operator for part1 * sin^2(.) ln(4 sin^2(.)) kernels."""
    if pair.weight != "sin2log":
        raise ValueError(f"expected a sin2log-weight pair, got {pair.weight!r}")
    return _weight_matrix(grid, "Q") * _kernel_matrix(pair.part1, grid)


def assemble_smoothtype(kernel, grid: Grid) -> np.ndarray:
    """Trapezoid-rule operator for a smooth bivariate kernel.

    ``kernel`` is either a callable (t, tau) -> value or a
    SplitKernelPair, in which case its smooth remainder part2 is used.
    """
    fn = kernel.part2 if isinstance(kernel, SplitKernelPair) else kernel
    return (np.pi / grid.n) * _kernel_matrix(fn, grid)


# ---------------------------------------------------------------------------
# Spectral operators
# ---------------------------------------------------------------------------
def assemble_T0(grid: Grid) -> np.ndarray:
    """Tangential principal-value operator: e^{imt} -> -(|m|/2) e^{imt}."""
    return circulant_from_multipliers(grid, weight_multipliers(grid, "T")).real


def assemble_A0(grid: Grid) -> np.ndarray:
    """(1/4pi) times the log-kernel convolution: multiplier -1/(2|m|).

    Equals exactly 1/(4 pi) times the log-type operator with unit
    part1 (same circulant, scaled).
    """
    m = np.abs(grid.fft_modes())
    lam = 0.5 * log_fourier_coeff(m)  # -1/(2|m|), 0 at m = 0
    return circulant_from_multipliers(grid, lam).real


def _ps_symbols(symbol: str, kappa: complex, grid: Grid) -> np.ndarray:
    kappa = complex(kappa)
    if not (kappa.imag > 0 and kappa.real > 0):
        raise ValueError("principal symbols need Re kappa > 0, Im kappa > 0")
    m = grid.fft_modes()
    root = np.sqrt(m * m - kappa * kappa + 0j)  # principal branch: Im < 0
    if symbol == "N":
        sig = -0.5 * root
    elif symbol == "S":
        sig = 0.5 / root
    else:
        raise ValueError(f"unknown symbol {symbol!r}")
    if np.any(sig.imag <= 0):
        raise ArithmeticError("square-root branch violated Im sigma > 0")
    return sig


def assemble_PS(symbol: str, kappa: complex, grid: Grid) -> np.ndarray:
    """Principal-symbol operator of N_kappa or S_kappa.

    Fourier multipliers -(1/2) sqrt(m^2 - kappa^2) for symbol "N" and
    1/(2 sqrt(m^2 - kappa^2)) for symbol "S", with the square root taken
    so both symbols have positive imaginary part. Their product is
    exactly -(1/4) I.
    """
    return circulant_from_multipliers(grid, _ps_symbols(symbol, kappa, grid))


def assemble_Atilde(which: str, kappa: complex, grid: Grid) -> np.ndarray:
    """Smoothing tails of the spectral Calderon compositions.

    which "A0":  multiplier sigma0(N_kappa)(m)/|m| + 1/2  (m != 0),
    which "A00": multiplier -|m| sigma0(S_kappa)(m) + 1/2;
    both take the value +1/2 at m = 0 so that the composition
    identities -2 A0 PS(N) = -I/2 + Atilde0 and
    2 T0 PS(S) = -I/2 + Atilde00 hold on every mode, constants
    included. Multipliers decay like 1/m^2.
    """
    m = grid.fft_modes()
    absm = np.abs(m)
    if which == "A0":
        sig = _ps_symbols("N", kappa, grid)
        lam = np.where(absm > 0, sig / np.where(absm > 0, absm, 1.0) + 0.5,
                       0.5 + 0j)
    elif which == "A00":
        sig = _ps_symbols("S", kappa, grid)
        lam = -absm * sig + 0.5
    else:
        raise ValueError(f"unknown correction tail {which!r}")
    return circulant_from_multipliers(grid, lam)


# ---------------------------------------------------------------------------
# Layer operators
# ---------------------------------------------------------------------------
def layer_op(which: str, k: complex, curve: Curve, grid: Grid) -> np.ndarray:
    """Assemble a discrete layer operator S, K, KT or N.

    Real wavenumbers use the analytic splittings; wavenumbers with
    positive imaginary part use the cutoff-truncated ones (K is not
    needed, and not defined, at complex wavenumbers). Input/output
    scaling follows the parametrized convention: S and KT act on
    jacobian-weighted densities, K and N act on plain ones; KT and N
    return jacobian-weighted values.
    """
    is_complex = complex(k).imag > 0
    split = (lambda kind: split_complex(kind, k, curve)) if is_complex \
        else (lambda kind: split_real(kind, float(np.real(k)), curve))
    if which == "S":
        pair = split("SL")
        return assemble_logtype(pair, grid) + assemble_smoothtype(pair, grid)
    if which == "K":
        if is_complex:
            raise ValueError("double layer K is only assembled for real k")
        pair = split("DL")
        return assemble_logtype(pair, grid) + assemble_smoothtype(pair, grid)
    if which == "KT":
        pair = split("DLT")
        sing = assemble_logtype(pair, grid) if is_complex \
            else assemble_sin2logtype(pair, grid)
        return sing + assemble_smoothtype(pair, grid)
    if which == "N":
        pair = split("HYP")
        return (assemble_T0(grid) + assemble_logtype(pair, grid)
                + assemble_smoothtype(pair, grid))
    raise ValueError(f"unknown layer operator {which!r}")


# ---------------------------------------------------------------------------
# Binary matrix dump (debugging aid)
# ---------------------------------------------------------------------------
_MAGIC = b"DSOP1\x00"


def save_op(path, matrix: np.ndarray, kind: str, wavenumber: complex) -> None:
    """Dump a matrix with a small header (n, kind, wavenumber)."""
    m = np.ascontiguousarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError("expected a square (2n, 2n) matrix")
    n = m.shape[0] // 2
    kind_b = kind.encode()[:16].ljust(16, b"\x00")
    w = complex(wavenumber)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I16sdd", n, kind_b, w.real, w.imag))
        fh.write(m.tobytes(order="C"))


def load_op(path):
    """Inverse of :func:`save_op`; returns (matrix, kind, wavenumber)."""
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ValueError(f"{path}: not an operator dump")
        n, kind_b, wr, wi = struct.unpack("<I16sdd", fh.read(4 + 16 + 16))
        data = np.frombuffer(fh.read(), dtype=np.complex128)
    m = data.reshape(2 * n, 2 * n).copy()
    return m, kind_b.rstrip(b"\x00").decode(), complex(wr, wi)
