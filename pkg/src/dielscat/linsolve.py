"""Dense complex linear algebra: full GMRES and a direct-solve oracle.

The iterative path is unrestarted GMRES with modified Gram-Schmidt
Arnoldi and Givens rotations, stopping on the relative Arnoldi
least-squares residual ||b - A x|| / ||b||. Iteration counts equal the
Krylov dimension used and are deterministic for fixed inputs; they are
the conditioning metric the experiment harness reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["SolveReport", "SingularMatrixError", "gmres", "direct_solve"]


class SingularMatrixError(np.linalg.LinAlgError):
    """Matrix is singular to working precision."""


@dataclass
class SolveReport:
    """Result of an iterative solve."""

    solution: np.ndarray
    iterations: int
    residual_history: np.ndarray = field(repr=False)
    converged: bool = True


def _as_matvec(op):
    if callable(op):
        return op, None
    mat = np.asarray(op)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("gmres needs a square system")
    return (lambda v: mat @ v), mat.shape[0]


def gmres(op, b, tol: float = 1e-8, max_iter: int | None = None) -> SolveReport:
    """Full (unrestarted) GMRES for a complex square system.

    Parameters
    ----------
    op : (N, N) array or callable v -> A @ v
    b : (N,) right-hand side; a zero b returns the zero solution at once.
    tol : relative residual target ||b - A x|| / ||b||.
    max_iter : Krylov-space cap; defaults to the system dimension.

    Returns
    -------
    SolveReport with the iterate, the iteration count (= Krylov
    dimension), the non-increasing relative-residual history and a
    convergence flag. On stagnation the best iterate is still returned
    with ``converged=False``. A final true-residual check guards the
    recurrence: disagreement beyond 10x raises ArithmeticError.
    """
    matvec, dim = _as_matvec(op)
    b = np.asarray(b, dtype=np.complex128)
    if b.ndim != 1:
        raise ValueError("b must be a vector")
    N = b.size
    if dim is not None and dim != N:
        raise ValueError("dimension mismatch between operator and rhs")
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return SolveReport(np.zeros(N, dtype=np.complex128), 0,
                           np.zeros(0), True)
    m = N if max_iter is None else int(max_iter)

    V = np.zeros((N, m + 1), dtype=np.complex128)
    H = np.zeros((m + 1, m), dtype=np.complex128)
    cs = np.zeros(m, dtype=np.float64)
    sn = np.zeros(m, dtype=np.complex128)
    g = np.zeros(m + 1, dtype=np.complex128)
    V[:, 0] = b / bnorm
    g[0] = bnorm

    history = []
    k = 0
    converged = False
    for k in range(1, m + 1):
        j = k - 1
        w = matvec(V[:, j])
        for i in range(k):  # modified Gram-Schmidt
            H[i, j] = np.vdot(V[:, i], w)
            w = w - H[i, j] * V[:, i]
        hnext = np.linalg.norm(w)
        H[k, j] = hnext
        if hnext > 0.0:
            V[:, k] = w / hnext

        for i in range(j):  # apply stored rotations
            tmp = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
            H[i + 1, j] = -np.conj(sn[i]) * H[i, j] + cs[i] * H[i + 1, j]
            H[i, j] = tmp
        h1, h2 = H[j, j], H[k, j]
        rho = np.hypot(abs(h1), abs(h2))
        if rho == 0.0:
            cs[j], sn[j] = 1.0, 0.0
        elif h1 == 0.0:
            cs[j], sn[j] = 0.0, 1.0
        else:
            cs[j] = abs(h1) / rho
            sn[j] = (h1 / abs(h1)) * np.conj(h2) / rho
        H[j, j] = cs[j] * h1 + sn[j] * h2
        H[k, j] = 0.0
        g[k] = -np.conj(sn[j]) * g[j]
        g[j] = cs[j] * g[j]

        rel = abs(g[k]) / bnorm
        history.append(rel)
        if rel <= tol:
            converged = True
            break
        if hnext == 0.0:  # Krylov space exhausted without meeting tol
            break

    y = np.linalg.solve(H[:k, :k], g[:k])
    x = V[:, :k] @ y

    true_rel = np.linalg.norm(b - matvec(x)) / bnorm
    reported = history[-1] if history else 1.0
    if true_rel > 10.0 * max(reported, np.finfo(float).eps * N):
        raise ArithmeticError(
            f"GMRES residual recurrence drifted: reported {reported:.3e}, "
            f"true {true_rel:.3e}")
    return SolveReport(x, k, np.asarray(history), converged)


def direct_solve(matrix: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Partial-pivoting dense solve, the reference path for small systems."""
    matrix = np.asarray(matrix)
    rhs = np.asarray(rhs)
    try:
        x = np.linalg.solve(matrix, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularMatrixError("solution overflowed; matrix is "
                                  "singular to working precision")
    return x
