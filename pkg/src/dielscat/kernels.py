"""Singular/smooth splittings of the Helmholtz layer kernels.

With G_k(x) = (i/4) H_0^(1)(k|x|) and a counterclockwise curve x(t), the
parametrized kernels handled here are (r = |x(t) - x(tau)|, v = x(t) -
x(tau), nt(s) = (x2'(s), -x1'(s)) the unnormalized outward normal):

    SL   M(t,tau)  = (i/4) H_0^(1)(k r)
    DL   H(t,tau)  = (ik/4) H_1^(1)(k r) (v . nt(tau)) / r
    DLT  HT(t,tau) = -(ik/4) H_1^(1)(k r) (v . nt(t)) / r     [= H(tau,t)]
    HYP  D(t,tau)  = (ik^2/4) H_0^(1)(kr) B0 + (ik/4) H_1^(1)(kr) B1
                     - 1 / (8 pi sin^2((t-tau)/2))

with B0 = x'(t).x'(tau) - P/r^2, B1 = 2P/r^3 - (x'(t).x'(tau))/r and
P = (v.x'(t)) (v.x'(tau)). HYP is the remainder of the hypersingular
operator after the wavenumber-independent tangential principal-value
part has been factored out (that part is assembled spectrally in
:mod:`dielscat.operators`).

Each kernel is split as part1 * weight + part2 where the weight is
ln(4 sin^2((t-tau)/2)) or sin^2(.) times that log, part1 comes from the
J-Bessel content of the Hankel functions, and part2 is the smooth
remainder. Diagonal values are analytic limits derived from the
small-argument Bessel expansions; naive evaluation is never used on the
diagonal. For wavenumbers with positive imaginary part the J-based
splitting would subtract exponentially large terms away from the
diagonal, so there part1 is truncated by a C-infinity cutoff in
|kappa| r^4 and part2 absorbs the full kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Curve
from .specfun import EULER_GAMMA, bessel_j, hankel1

__all__ = ["SplitKernelPair", "split_real", "split_complex", "chi",
           "refined_sl_part"]

KINDS = ("SL", "DL", "DLT", "HYP")

#: diagonal detection threshold on |2 sin((t-tau)/2)|
_DIAG_TOL = 1e-14


@dataclass(frozen=True)
class SplitKernelPair:
    """One layer kernel split into singular factor and smooth remainder.

    ``part1`` and ``part2`` accept broadcastable angle arrays (t, tau)
    and are finite everywhere including t = tau. The reconstruction
    part1 * weight + part2 equals the kernel for t != tau, where the
    weight is ln(4 sin^2((t-tau)/2)) for ``weight="log"`` and
    sin^2((t-tau)/2) times that for ``weight="sin2log"``.
    """

    kind: str
    wavenumber: complex
    part1: Callable[[np.ndarray, np.ndarray], np.ndarray]
    part2: Callable[[np.ndarray, np.ndarray], np.ndarray]
    weight: str


def chi(t):
    """C-infinity cutoff: 1 on |t| <= 1/2, 0 on |t| >= 1.

    The bridge on 1/2 < |t| < 1 is the standard exp(-1/u) partition
    glue, monotone nonincreasing in |t| and smooth at both junctions.
    """
    s = 2.0 * np.abs(np.atleast_1d(np.asarray(t, dtype=np.float64))) - 1.0
    out = np.empty_like(s)
    out[s <= 0.0] = 1.0
    out[s >= 1.0] = 0.0
    mid = (s > 0.0) & (s < 1.0)
    sm = s[mid]
    h1 = np.exp(-1.0 / (1.0 - sm))
    h0 = np.exp(-1.0 / sm)
    out[mid] = h1 / (h1 + h0)
    return out.reshape(np.shape(t))[()] if np.ndim(t) == 0 \
        else out.reshape(np.shape(t))


def _bivariate(fn):
    """Wrap a flat-array kernel part so it broadcasts like a ufunc."""
    def wrapped(t, tau):
        t = np.asarray(t, dtype=np.float64)
        tau = np.asarray(tau, dtype=np.float64)
        tb, taub = np.broadcast_arrays(t, tau)
        shape = tb.shape
        out = fn(tb.ravel(), taub.ravel())
        return out.reshape(shape) if shape else out[0]
    return wrapped


# ---------------------------------------------------------------------------
# Geometry helpers (flat 1-d angle arrays)
# ---------------------------------------------------------------------------
def _geo(curve: Curve, t, tau):
    xt = curve.eval(t)
    xtau = curve.eval(tau)
    dxt = curve.deriv1(t)
    dxtau = curve.deriv1(tau)
    v = xt - xtau
    r2 = np.sum(v * v, axis=-1)
    diag = np.abs(2.0 * np.sin((t - tau) / 2.0)) < _DIAG_TOL
    r = np.sqrt(np.where(diag, 1.0, r2))  # dummy 1 on the diagonal
    return dict(t=t, tau=tau, dxt=dxt, dxtau=dxtau, v=v, r=r, diag=diag)


def _logweight(t, tau):
    return np.log(4.0 * np.sin((t - tau) / 2.0) ** 2)


def _w_curvature(curve: Curve, t):
    """W = x1'' x2' - x2'' x1' (curvature times |x'|^3, CCW positive)."""
    d1 = curve.deriv1(t)
    d2 = curve.deriv2(t)
    return d2[..., 0] * d1[..., 1] - d2[..., 1] * d1[..., 0]


def _dlt_factor(g):
    """v . (x2'(t), -x1'(t)) -- the transposed normal pairing."""
    return (g["v"][..., 0] * g["dxt"][..., 1]
            - g["v"][..., 1] * g["dxt"][..., 0])


def _hyp_brackets(g):
    dd = np.sum(g["dxt"] * g["dxtau"], axis=-1)
    p = (np.sum(g["v"] * g["dxt"], axis=-1)
         * np.sum(g["v"] * g["dxtau"], axis=-1))
    r = g["r"]
    b0 = dd - p / r ** 2
    b1 = 2.0 * p / r ** 3 - dd / r
    return b0, b1


def _cutoff(g, k):
    r = np.where(g["diag"], 0.0, g["r"])
    return chi(np.abs(k) * r ** 4)


# ---------------------------------------------------------------------------
# Analytic diagonal limits
# ---------------------------------------------------------------------------
def _sl_smooth_diag(curve, t, k):
    na = np.linalg.norm(curve.deriv1(t), axis=-1)
    return 0.25j - EULER_GAMMA / (2 * np.pi) \
        - np.log(k * na / 2.0) / (2 * np.pi)


def _dl_smooth_diag(curve, t, _k):
    na2 = np.sum(curve.deriv1(t) ** 2, axis=-1)
    return _w_curvature(curve, t) / (4 * np.pi * na2) + 0j


def _hyp_smooth_diag(curve, t, k):
    """Diagonal of the HYP smooth remainder.

    Fourth-order Taylor expansion of the parametrization against the
    small-argument Hankel expansions gives, with a = x', b = x'',
    c = x''' at t:

        (i k^2/8)|a|^2 - (k^2/4pi)(log(k|a|/2) + gamma)|a|^2
        + (k^2/8pi)|a|^2
        + (1/pi)[ (a.c)/(12|a|^2) - (a.b)^2/(4|a|^4)
                  + |b|^2/(8|a|^2) - 1/24 ].
    """
    a = curve.deriv1(t)
    b = curve.deriv2(t)
    c = curve.deriv3(t)
    na2 = np.sum(a * a, axis=-1)
    ab = np.sum(a * b, axis=-1)
    ac = np.sum(a * c, axis=-1)
    nb2 = np.sum(b * b, axis=-1)
    curv = (ac / (12.0 * na2) - ab ** 2 / (4.0 * na2 ** 2)
            + nb2 / (8.0 * na2) - 1.0 / 24.0) / np.pi
    kk = complex(k) if np.iscomplexobj(np.asarray(k)) else float(k)
    return (1j * kk * kk / 8.0) * na2 \
        - (kk * kk / (4 * np.pi)) * (np.log(kk * np.sqrt(na2) / 2.0)
                                     + EULER_GAMMA) * na2 \
        + (kk * kk / (8 * np.pi)) * na2 + curv


# ---------------------------------------------------------------------------
# part1 factors (J-Bessel content of the Hankel functions)
# ---------------------------------------------------------------------------
def _sl_part1(curve, k, cutoff):
    def flat(t, tau):
        g = _geo(curve, t, tau)
        ch = _cutoff(g, k) if cutoff else np.ones(t.shape)
        out = np.zeros(t.shape, dtype=np.complex128)
        m = ch > 0.0  # J_0(kappa r) overflows where the cutoff vanishes
        out[m] = -bessel_j(0, k * g["r"][m]) / (4 * np.pi) * ch[m]
        out = np.where(g["diag"], -1.0 / (4 * np.pi), out)
        return out.astype(np.complex128)
    return _bivariate(flat)


def _dl_part1(curve, k):
    def flat(t, tau):
        g = _geo(curve, t, tau)
        ct = (g["v"][..., 0] * g["dxtau"][..., 1]
              - g["v"][..., 1] * g["dxtau"][..., 0])
        out = -(k / (4 * np.pi)) * bessel_j(1, k * g["r"]) * ct / g["r"]
        out = np.where(g["diag"], 0.0, out)
        return out.astype(np.complex128)
    return _bivariate(flat)


def _dlt_part1_sin2log(curve, k):
    def flat(t, tau):
        g = _geo(curve, t, tau)
        s2 = np.where(g["diag"], 1.0, np.sin((t - tau) / 2.0) ** 2)
        out = (k / (4 * np.pi)) * bessel_j(1, k * g["r"]) \
            * _dlt_factor(g) / (g["r"] * s2)
        out = np.where(g["diag"],
                       -k * k * _w_curvature(curve, t) / (4 * np.pi), out)
        return out.astype(np.complex128)
    return _bivariate(flat)


def _dlt_part1_log(curve, k, cutoff):
    def flat(t, tau):
        g = _geo(curve, t, tau)
        ch = _cutoff(g, k) if cutoff else np.ones(t.shape)
        out = np.zeros(t.shape, dtype=np.complex128)
        m = ch > 0.0
        out[m] = (k / (4 * np.pi)) * bessel_j(1, k * g["r"][m]) \
            * _dlt_factor(g)[m] / g["r"][m] * ch[m]
        out = np.where(g["diag"], 0.0, out)
        return out.astype(np.complex128)
    return _bivariate(flat)


def _hyp_part1(curve, k, cutoff):
    def flat(t, tau):
        g = _geo(curve, t, tau)
        b0, b1 = _hyp_brackets(g)
        ch = _cutoff(g, k) if cutoff else np.ones(t.shape)
        out = np.zeros(t.shape, dtype=np.complex128)
        m = ch > 0.0
        out[m] = (-(k * k / (4 * np.pi)) * bessel_j(0, k * g["r"][m]) * b0[m]
                  - (k / (4 * np.pi)) * bessel_j(1, k * g["r"][m]) * b1[m]) \
            * ch[m]
        na2 = np.sum(curve.deriv1(t) ** 2, axis=-1)
        out = np.where(g["diag"], -k * k * na2 / (8 * np.pi), out)
        return out.astype(np.complex128)
    return _bivariate(flat)


# ---------------------------------------------------------------------------
# Full kernels and smooth remainders
# ---------------------------------------------------------------------------
def full_kernel(kind: str, k: complex, curve: Curve):
    """The unsplit kernel as a callable; singular on the diagonal."""
    if kind not in KINDS:
        raise ValueError(f"unsupported kernel kind {kind!r}")

    def flat(t, tau):
        g = _geo(curve, t, tau)
        if np.any(g["diag"]):
            raise ValueError("full kernel is singular on the diagonal")
        z = k * g["r"]
        if kind == "SL":
            return 0.25j * hankel1(0, z)
        if kind == "DL":
            ct = (g["v"][..., 0] * g["dxtau"][..., 1]
                  - g["v"][..., 1] * g["dxtau"][..., 0])
            return 0.25j * k * hankel1(1, z) * ct / g["r"]
        if kind == "DLT":
            return -0.25j * k * hankel1(1, z) * _dlt_factor(g) / g["r"]
        b0, b1 = _hyp_brackets(g)
        s2 = np.sin((t - tau) / 2.0) ** 2
        return (0.25j * k * k * hankel1(0, z) * b0
                + 0.25j * k * hankel1(1, z) * b1
                - 1.0 / (8 * np.pi * s2))
    return _bivariate(flat)


def _make_part2(kind, curve, k, part1, weight):
    kernel = full_kernel(kind, k, curve)
    diag_fn = {"SL": _sl_smooth_diag, "DL": _dl_smooth_diag,
               "DLT": _dl_smooth_diag, "HYP": _hyp_smooth_diag}[kind]

    def flat(t, tau):
        diag = np.abs(2.0 * np.sin((t - tau) / 2.0)) < _DIAG_TOL
        out = np.empty(t.shape, dtype=np.complex128)
        if np.any(~diag):
            ts, taus = t[~diag], tau[~diag]
            w = _logweight(ts, taus)
            if weight == "sin2log":
                w = w * np.sin((ts - taus) / 2.0) ** 2
            out[~diag] = kernel(ts, taus) - part1(ts, taus) * w
        if np.any(diag):
            out[diag] = diag_fn(curve, t[diag], k)
        return out
    return _bivariate(flat)


def split_real(kind: str, k: float, curve: Curve) -> SplitKernelPair:
    """Split a layer kernel at a real wavenumber k > 0.

    SL, DL and HYP use the plain log weight; DLT uses the sin^2-log
    weight, which reflects its extra two orders of smoothing and keeps
    compositions with the hypersingular operator stable.
    """
    if kind not in KINDS:
        raise ValueError(f"unsupported kernel kind {kind!r}")
    if np.iscomplexobj(np.asarray(k)) or not k > 0:
        raise ValueError("split_real requires a positive real wavenumber")
    k = float(k)
    if kind == "SL":
        p1, weight = _sl_part1(curve, k, cutoff=False), "log"
    elif kind == "DL":
        p1, weight = _dl_part1(curve, k), "log"
    elif kind == "DLT":
        p1, weight = _dlt_part1_sin2log(curve, k), "sin2log"
    else:
        p1, weight = _hyp_part1(curve, k, cutoff=False), "log"
    p2 = _make_part2(kind, curve, k, p1, weight)
    return SplitKernelPair(kind, complex(k), p1, p2, weight)


#: cutoff activation threshold on Im(kappa) * diameter. Below it the
#: J-splitting's e^{Im kappa r} growth stays under ~1e7, costing at most
#: seven digits of cancellation, and the untruncated analytic splitting
#: is far more accurate than any C-infinity blend; above it the
#: truncated decomposition is required to avoid subtracting
#: exponentially large terms.
_CANCEL_BUDGET = 16.0


def _needs_cutoff(kappa: complex, curve: Curve) -> bool:
    t = np.arange(128) * (np.pi / 64)
    x = curve.eval(t)
    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
    return kappa.imag * np.sqrt(np.max(d2)) > _CANCEL_BUDGET


def split_complex(kind: str, kappa: complex, curve: Curve) -> SplitKernelPair:
    """Split a layer kernel at a complex wavenumber with Im kappa > 0.

    For strongly absorbing kappa (Im kappa times the curve diameter
    beyond a fixed cancellation budget) the truncated decomposition is
    used: near the diagonal (chi(|kappa| r^4) = 1) the
    real-wavenumber-style J-splitting continued to complex kappa, away
    from it part1 = 0 and part2 carries the full (exponentially
    decaying) kernel, blended by the smooth cutoff chi. For moderate
    absorption the plain analytic splitting is kept on the whole domain,
    which preserves spectral accuracy that the C-infinity blend would
    forfeit. DLT uses the plain log weight here, not the sin^2-log
    weight of the real-wavenumber case.
    """
    kappa = complex(kappa)
    if kappa.imag <= 0:
        raise ValueError("split_complex requires Im kappa > 0")
    cutoff = _needs_cutoff(kappa, curve)
    if kind == "SL":
        p1 = _sl_part1(curve, kappa, cutoff=cutoff)
    elif kind == "DLT":
        p1 = _dlt_part1_log(curve, kappa, cutoff=cutoff)
    elif kind == "HYP":
        p1 = _hyp_part1(curve, kappa, cutoff=cutoff)
    else:
        raise ValueError(f"unsupported kind {kind!r} for complex wavenumber")
    p2 = _make_part2(kind, curve, kappa, p1, "log")
    return SplitKernelPair(kind, kappa, p1, p2, "log")


def refined_sl_part(k: float, curve: Curve) -> SplitKernelPair:
    """sin^2-log factor of the refined SL splitting.

    Writing the SL kernel as -(1/4pi) log-weight + part1 * sin2log-weight
    + smooth, this returns the middle piece:

        part1(t,tau) = -(J_0(k r) - 1) / (4 pi sin^2((t-tau)/2)),

    an analytic kernel with diagonal k^2 |x'|^2 / (4 pi); part2 is the
    same smooth SL remainder as in the plain splitting. Together with
    the pure-log operator this feeds the principal-symbol formulation's
    Calderon compositions.
    """
    if not k > 0:
        raise ValueError("refined_sl_part requires a positive wavenumber")
    k = float(k)

    def flat(t, tau):
        g = _geo(curve, t, tau)
        s2 = np.where(g["diag"], 1.0, np.sin((t - tau) / 2.0) ** 2)
        out = -(bessel_j(0, k * g["r"]) - 1.0) / (4 * np.pi * s2)
        na2 = np.sum(curve.deriv1(t) ** 2, axis=-1)
        out = np.where(g["diag"], k * k * na2 / (4 * np.pi), out)
        return out.astype(np.complex128)

    base = split_real("SL", k, curve)
    return SplitKernelPair("SL", complex(k), _bivariate(flat), base.part2,
                           "sin2log")
