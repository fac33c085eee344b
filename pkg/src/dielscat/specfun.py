"""Bessel and Hankel functions of orders 0 and 1.

These are the only transcendental functions the layer-potential kernels
need: J_0, J_1 for real and complex arguments, Y_0, Y_1 for positive real
arguments, and H_0^(1), H_1^(1) on the closed first quadrant (the
regularizer wavenumber has positive imaginary part, so Hankel arguments
k*r always satisfy Re z >= 0, Im z >= 0).

Evaluation is delegated to the AMOS-backed routines in scipy.special,
wrapped with explicit domain checks so that no NaN/Inf ever escapes a
public call. The accepted domains are

    bessel_j : |z| <= 2e4, Re z >= 0, |Im z| <= 600
    bessel_y : 0 < x <= 2e4   (real only)
    hankel1  : |z| <= 2e4, Re z >= 0, Im z >= 0, z != 0

The imaginary-part cap keeps J_0(z) ~ e^|Im z| representable in double
precision. All functions accept scalars or numpy arrays.
"""

from __future__ import annotations

import numpy as np
from scipy import special as _sp

__all__ = ["DomainError", "bessel_j", "bessel_y", "hankel1"]

#: Euler-Mascheroni constant, used by kernel diagonal limits.
EULER_GAMMA = 0.5772156649015328606065

_MAX_ABS = 2.0e4
_MAX_IMAG = 600.0


class DomainError(ValueError):
    """Argument outside the declared evaluation domain."""


def _check_order(order: int) -> None:
    if order not in (0, 1):
        raise DomainError(f"order must be 0 or 1, got {order!r}")


def bessel_j(order: int, z):
    """Bessel function J_order(z) for real or complex z.

    Parameters
    ----------
    order : {0, 1}
    z : scalar or array_like, real or complex
        Must satisfy |z| <= 2e4, Re z >= 0 and |Im z| <= 600.

    Returns
    -------
    Same shape as ``z``; complex if ``z`` is complex, float otherwise.
    """
    _check_order(order)
    z = np.asarray(z)
    if np.any(np.abs(z) > _MAX_ABS):
        raise DomainError("bessel_j: |z| exceeds declared domain")
    if np.iscomplexobj(z):
        if np.any(z.real < 0.0) or np.any(np.abs(z.imag) > _MAX_IMAG):
            raise DomainError("bessel_j: complex argument outside sector "
                              "Re z >= 0, |Im z| <= 600")
        out = _sp.jv(order, z.astype(np.complex128))
    else:
        if np.any(z < 0.0):
            raise DomainError("bessel_j: negative real argument")
        z = z.astype(np.float64)
        out = _sp.j0(z) if order == 0 else _sp.j1(z)
    if not np.all(np.isfinite(out)):
        raise DomainError("bessel_j: evaluation overflowed inside domain")
    return out[()] if out.ndim == 0 else out


def bessel_y(order: int, x):
    """Bessel function Y_order(x) for positive real x <= 2e4."""
    _check_order(order)
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise DomainError("bessel_y: argument must be positive")
    if np.any(x > _MAX_ABS):
        raise DomainError("bessel_y: argument exceeds declared domain")
    out = _sp.y0(x) if order == 0 else _sp.y1(x)
    if not np.all(np.isfinite(out)):
        raise DomainError("bessel_y: evaluation overflowed inside domain")
    return out[()] if out.ndim == 0 else out


def hankel1(order: int, z):
    """Hankel function of the first kind H_order^(1)(z).

    Accepts real or complex z with Re z >= 0, Im z >= 0, z != 0 and
    |z| <= 2e4. For real z this equals bessel_j + i*bessel_y; for
    Im z > 0 it decays exponentially in Im z.
    """
    _check_order(order)
    z = np.asarray(z, dtype=np.complex128)
    if np.any(z == 0.0):
        raise DomainError("hankel1: argument 0 is a logarithmic singularity")
    if np.any(np.abs(z) > _MAX_ABS):
        raise DomainError("hankel1: |z| exceeds declared domain")
    if np.any(z.real < 0.0) or np.any(z.imag < -1e-300):
        raise DomainError("hankel1: argument outside first quadrant")
    if np.all(z.imag == 0.0):
        x = z.real
        if order == 0:
            out = _sp.j0(x) + 1j * _sp.y0(x)
        else:
            out = _sp.j1(x) + 1j * _sp.y1(x)
    else:
        out = _sp.hankel1(order, z)
    if not np.all(np.isfinite(out)):
        raise DomainError("hankel1: evaluation overflowed inside domain")
    return out[()] if out.ndim == 0 else out
