"""Analytic 2*pi-periodic boundary curves.

A scatterer boundary is a simple closed curve given by a smooth periodic
parametrization t -> x(t) = (x1(t), x2(t)) with |x'(t)| > 0, oriented
counterclockwise so the outward unit normal is the 90-degree clockwise
rotation of the unit tangent. The kernel splittings need first and second
derivatives everywhere and the third derivative on the diagonal, so every
curve carries exact analytic derivative callables (never finite
differences).

Built-in shapes:
    kite        x(t) = (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
    five_petal  polar r(t) = 1 + 0.3 cos 5t
    circle(R)   x(t) = R (cos t, sin t)

Custom curves are trigonometric series read from a plain-text table; see
:func:`load_curve_table`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["Curve", "make_curve", "frame", "load_curve_table"]


@dataclass(frozen=True)
class Curve:
    """Closed boundary curve with analytic derivatives.

    ``eval``, ``deriv1``, ``deriv2``, ``deriv3`` map an array of angles t
    to arrays of shape t.shape + (2,). Immutable; safe to share.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv1: Callable[[np.ndarray], np.ndarray]
    deriv2: Callable[[np.ndarray], np.ndarray]
    deriv3: Callable[[np.ndarray], np.ndarray]
    label: str


def _stack(a, b):
    return np.stack([np.asarray(a, dtype=np.float64),
                     np.asarray(b, dtype=np.float64)], axis=-1)


def _kite() -> Curve:
    return Curve(
        eval=lambda t: _stack(np.cos(t) + 0.65 * np.cos(2 * t) - 0.65,
                              1.5 * np.sin(t)),
        deriv1=lambda t: _stack(-np.sin(t) - 1.3 * np.sin(2 * t),
                                1.5 * np.cos(t)),
        deriv2=lambda t: _stack(-np.cos(t) - 2.6 * np.cos(2 * t),
                                -1.5 * np.sin(t)),
        deriv3=lambda t: _stack(np.sin(t) + 5.2 * np.sin(2 * t),
                                -1.5 * np.cos(t)),
        label="kite",
    )


def _five_petal() -> Curve:
    # polar r(t) = 1 + 0.3 cos 5t; chain rule through x = r cos t, y = r sin t
    def r(t):
        return 1.0 + 0.3 * np.cos(5 * t)

    def r1(t):
        return -1.5 * np.sin(5 * t)

    def r2(t):
        return -7.5 * np.cos(5 * t)

    def r3(t):
        return 37.5 * np.sin(5 * t)

    def ev(t):
        return _stack(r(t) * np.cos(t), r(t) * np.sin(t))

    def d1(t):
        c, s = np.cos(t), np.sin(t)
        return _stack(r1(t) * c - r(t) * s, r1(t) * s + r(t) * c)

    def d2(t):
        c, s = np.cos(t), np.sin(t)
        return _stack((r2(t) - r(t)) * c - 2 * r1(t) * s,
                      (r2(t) - r(t)) * s + 2 * r1(t) * c)

    def d3(t):
        c, s = np.cos(t), np.sin(t)
        return _stack((r3(t) - 3 * r1(t)) * c - (3 * r2(t) - r(t)) * s,
                      (r3(t) - 3 * r1(t)) * s + (3 * r2(t) - r(t)) * c)

    return Curve(ev, d1, d2, d3, label="five_petal")


def _circle(radius: float) -> Curve:
    if radius <= 0:
        raise ValueError("circle radius must be positive")
    R = float(radius)
    return Curve(
        eval=lambda t: _stack(R * np.cos(t), R * np.sin(t)),
        deriv1=lambda t: _stack(-R * np.sin(t), R * np.cos(t)),
        deriv2=lambda t: _stack(-R * np.cos(t), -R * np.sin(t)),
        deriv3=lambda t: _stack(R * np.sin(t), -R * np.cos(t)),
        label=f"circle({R:g})",
    )


def _trig_series_curve(coeffs: np.ndarray, label: str) -> Curve:
    """Curve from a trigonometric coefficient table.

    ``coeffs`` has rows (m, a1, b1, a2, b2) meaning
    x_i(t) = sum_m a_i cos(m t) + b_i sin(m t).
    """
    coeffs = np.atleast_2d(np.asarray(coeffs, dtype=np.float64))
    if coeffs.shape[1] != 5 or coeffs.shape[0] == 0:
        raise ValueError("coefficient table must have rows (m, a1, b1, a2, b2)")
    m = coeffs[:, 0]
    if np.any(m < 0) or np.any(m != np.round(m)):
        raise ValueError("harmonic indices must be nonnegative integers")
    a1, b1, a2, b2 = coeffs[:, 1], coeffs[:, 2], coeffs[:, 3], coeffs[:, 4]

    def deriv(order):
        def f(t):
            t = np.asarray(t, dtype=np.float64)
            mt = np.multiply.outer(t, m)  # t.shape + (n_harm,)
            # d/dt^order of cos(mt), sin(mt)
            ph = order * np.pi / 2.0
            cos_d = (m ** order) * np.cos(mt + ph)
            sin_d = (m ** order) * np.sin(mt + ph)
            return _stack(cos_d @ a1 + sin_d @ b1, cos_d @ a2 + sin_d @ b2)

        return f

    return Curve(deriv(0), deriv(1), deriv(2), deriv(3), label=label)


def _validate(curve: Curve, samples: int = 720) -> Curve:
    """Reject degenerate, clockwise or self-intersecting parametrizations."""
    t = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    x = curve.eval(t)
    dx = curve.deriv1(t)
    jac = np.linalg.norm(dx, axis=-1)
    if np.any(jac <= 1e-12):
        raise ValueError(f"{curve.label}: parametrization is not regular")
    # shoelace area from the parametrization; > 0 means counterclockwise
    area = 0.5 * np.mean(x[:, 0] * dx[:, 1] - x[:, 1] * dx[:, 0]) * 2 * np.pi
    if area <= 0:
        raise ValueError(f"{curve.label}: curve must be counterclockwise "
                         f"(signed area {area:.3e})")
    # sampled self-intersection check: distant parameters, close points
    d2 = np.sum((x[:, None, :] - x[None, :, :]) ** 2, axis=-1)
    i, j = np.meshgrid(np.arange(samples), np.arange(samples), indexing="ij")
    gap = np.minimum(np.abs(i - j), samples - np.abs(i - j))
    far = gap > samples // 8
    if np.any(d2[far] < (0.05 * np.min(jac) * 2 * np.pi / samples) ** 2):
        raise ValueError(f"{curve.label}: sampled self-intersection detected")
    return curve


def make_curve(kind: str, radius: float = 1.0,
               coeffs: np.ndarray | None = None) -> Curve:
    """Construct a boundary curve.

    Parameters
    ----------
    kind : {"kite", "five_petal", "circle", "custom"}
    radius : float
        Radius for ``kind="circle"``.
    coeffs : array_like, shape (n, 5)
        Trigonometric table for ``kind="custom"``; rows (m, a1, b1, a2, b2).
    """
    if kind == "kite":
        return _validate(_kite())
    if kind == "five_petal":
        return _validate(_five_petal())
    if kind == "circle":
        return _validate(_circle(radius))
    if kind == "custom":
        if coeffs is None:
            raise ValueError("custom curve requires a coefficient table")
        return _validate(_trig_series_curve(coeffs, label="custom"))
    raise ValueError(f"unknown curve kind {kind!r}")


def load_curve_table(path) -> Curve:
    """Load a custom curve from a plain-text coefficient table.

    Each non-comment line holds five numbers ``m a1 b1 a2 b2``: the
    harmonic index and the cos/sin coefficients of x1 and x2. Lines
    starting with ``#`` are ignored.
    """
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 5:
                raise ValueError(f"bad curve table line: {line!r}")
            rows.append([float(p) for p in parts])
    if not rows:
        raise ValueError(f"curve table {path} is empty")
    curve = _trig_series_curve(np.array(rows), label=f"file:{path}")
    return _validate(curve)


def frame(curve: Curve, t):
    """Point, unit tangent, outward unit normal and jacobian at angle t.

    Works on scalars and arrays; vector outputs have shape t.shape + (2,).
    The normal points into the exterior domain.
    """
    t = np.asarray(t, dtype=np.float64)
    x = curve.eval(t)
    dx = curve.deriv1(t)
    jac = np.linalg.norm(dx, axis=-1)
    tangent = dx / jac[..., None]
    normal = np.stack([tangent[..., 1], -tangent[..., 0]], axis=-1)
    return x, tangent, normal, jac
