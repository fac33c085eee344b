"""Tour of the building blocks: singular quadratures and layer operators.

Shows the three product-quadrature rules hitting their analytic Fourier
integrals exactly, and the four discrete layer operators reproducing the
separation-of-variables eigenvalues on the unit circle to machine
precision.

Run: python demos/01_quadrature_and_operators.py
"""

import numpy as np
from scipy.special import h1vp, hankel1, jv, jvp

from dielscat.geometry import make_curve
from dielscat.operators import layer_op
from dielscat.trigtools import Grid, sin2log_fourier_coeff, weights_Q, \
    weights_R, weights_T

print("=" * 70)
print("Singular product quadratures on the 2n-point periodic grid")
print("=" * 70)
g = Grid(16)
t = 0.37
wr, wq, wt = weights_R(g, t), weights_Q(g, t), weights_T(g, t)
for m in (1, 3, 9):
    e = np.exp(1j * m * g.nodes)
    log_rule = np.sum(wr * e)
    log_exact = -(2 * np.pi / m) * np.exp(1j * m * t)
    q_rule = np.sum(wq * e)
    q_exact = 2 * np.pi * sin2log_fourier_coeff(m) * np.exp(1j * m * t)
    pv_rule = np.sum(wt * e)
    pv_exact = -(m / 2) * np.exp(1j * m * t)
    print(f"mode {m}: log-rule err {abs(log_rule - log_exact):.2e}   "
          f"sin^2-log err {abs(q_rule - q_exact):.2e}   "
          f"PV err {abs(pv_rule - pv_exact):.2e}")

print()
print("=" * 70)
print("Layer operators on the unit circle vs separation of variables")
print("=" * 70)
circle = make_curve("circle")
k = 2.0
g = Grid(32)
ops = {w: layer_op(w, k, circle, g) for w in ("S", "K", "KT", "N")}
print(f"{'m':>3} {'S err':>10} {'K err':>10} {'KT err':>10} {'N err':>10}")
for m in (0, 1, 3, 6):
    v = np.exp(1j * m * g.nodes)
    exact = {
        "S": 1j * np.pi / 2 * jv(m, k) * hankel1(m, k),
        "K": 1j * np.pi * k / 2 * jvp(m, k) * hankel1(m, k) - 0.5,
        "KT": 1j * np.pi * k / 2 * jv(m, k) * h1vp(m, k) + 0.5,
        "N": 1j * np.pi * k * k / 2 * jvp(m, k) * h1vp(m, k),
    }
    errs = [abs((ops[w] @ v)[0] / v[0] - exact[w]) for w in ("S", "K", "KT", "N")]
    print(f"{m:>3} " + " ".join(f"{e:10.2e}" for e in errs))

print()
print("Calderon identity N S = -I/4 + KT^2 on the kite, resolved modes:")
kite = make_curve("kite")
for n in (32, 64):
    g = Grid(n)
    S, KT, N = (layer_op(w, k, kite, g) for w in ("S", "KT", "N"))
    R = N @ S - (-0.25 * np.eye(g.size) + KT @ KT)
    modes = np.arange(-n // 2, n // 2 + 1)
    basis = np.exp(1j * np.outer(g.nodes, modes)) / np.sqrt(g.size)
    print(f"  n={n:3d}: band operator norm {np.linalg.norm(R @ basis, 2):.2e}")
