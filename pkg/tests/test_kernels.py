"""Kernel splittings: reconstruction, diagonals, smoothness, cutoff."""

import numpy as np
import pytest

from conftest import richardson_diagonal
from dielscat.kernels import (chi, full_kernel, refined_sl_part,
                              split_complex, split_real)

KINDS = ["SL", "DL", "DLT", "HYP"]


def _weight(pair, t, tau):
    w = np.log(4.0 * np.sin((t - tau) / 2.0) ** 2)
    if pair.weight == "sin2log":
        w = w * np.sin((t - tau) / 2.0) ** 2
    return w


@pytest.mark.parametrize("kind", KINDS)
def test_real_reconstruction(kite, kind):
    k = 2.0
    pair = split_real(kind, k, kite)
    kernel = full_kernel(kind, k, kite)
    rng = np.random.default_rng(11)
    t = rng.uniform(0, 2 * np.pi, 200)
    tau = t + rng.uniform(0.05, 2 * np.pi - 0.05, 200)
    lhs = pair.part1(t, tau) * _weight(pair, t, tau) + pair.part2(t, tau)
    ref = kernel(t, tau)
    scale = np.max(np.abs(ref))
    assert np.max(np.abs(lhs - ref)) <= 1e-12 * scale


def test_sl_diagonal_values(kite):
    pair = split_real("SL", 2.0, kite)
    assert pair.part1(0.4, 0.4) == pytest.approx(-1 / (4 * np.pi))
    # i/4 - gamma/(2 pi) - log(k |x'|/2)/(2 pi) at t = 0: |x'(0)| = 1.5
    gamma = 0.5772156649015329
    want = 0.25j - gamma / (2 * np.pi) - np.log(2.0 * 1.5 / 2) / (2 * np.pi)
    assert pair.part2(0.0, 0.0) == pytest.approx(want)


@pytest.mark.parametrize("kind", KINDS)
def test_diagonals_match_richardson(kite, kind):
    # oracle precision is a few 1e-7 near the kite's flat side, see
    # richardson_diagonal; the circle eigenvalue tests pin the diagonals
    # much harder (a diagonal slip of size d shifts eigenvalues by ~d/n)
    pair = split_real(kind, 2.0, kite)
    for t in (0.0, 0.73, 2.2, 4.4):
        for part in (pair.part1, pair.part2):
            extrap = richardson_diagonal(part, t)
            assert abs(part(t, t) - extrap) <= 1e-6 * max(1.0, abs(extrap))


@pytest.mark.parametrize("kind", ["SL", "DLT", "HYP"])
def test_complex_diagonals_match_richardson(kite, kind):
    pair = split_complex(kind, 5 + 8j, kite)
    for t in (0.4, 1.9):
        for part in (pair.part1, pair.part2):
            extrap = richardson_diagonal(part, t)
            assert abs(part(t, t) - extrap) <= 3e-6 * max(1.0, abs(extrap))


@pytest.mark.parametrize("kind", ["SL", "DLT", "HYP"])
def test_complex_reconstruction(kite, kind):
    kappa = 5 + 8j
    pair = split_complex(kind, kappa, kite)
    kernel = full_kernel(kind, kappa, kite)
    rng = np.random.default_rng(4)
    t = rng.uniform(0, 2 * np.pi, 200)
    tau = t + rng.uniform(0.02, 2 * np.pi - 0.02, 200)
    lhs = pair.part1(t, tau) * _weight(pair, t, tau) + pair.part2(t, tau)
    ref = kernel(t, tau)
    err = np.abs(lhs - ref)
    # compare against the local kernel scale; it decays over many orders
    assert np.max(err / np.maximum(np.abs(ref), 1e-250)) <= 1e-10 \
        or np.max(err) <= 1e-12 * np.max(np.abs(ref))


def test_complex_far_region_puts_kernel_in_part2(kite):
    kappa = 5 + 8j
    pair = split_complex("SL", kappa, kite)
    kernel = full_kernel("SL", kappa, kite)
    # far region: chi(|kappa| r^4) = 0 once r > |kappa|^{-1/4}
    t, tau = 0.0, np.pi
    r = np.linalg.norm(kite.eval(t) - kite.eval(tau))
    assert abs(kappa) * r ** 4 > 1.0
    assert pair.part1(t, tau) == 0.0
    assert pair.part2(t, tau) == pytest.approx(complex(kernel(t, tau)),
                                               rel=1e-14)


def test_complex_split_no_catastrophic_cancellation(kite):
    # split parts on the blend region stay within a factor 10 of the
    # kernel's own near-diagonal scale; the unguarded J-splitting would
    # exceed it by e^{Im kappa * diameter} ~ 1e11 here
    kappa = 5 + 8j
    pair = split_complex("SL", kappa, kite)
    kernel = full_kernel("SL", kappa, kite)
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    tt, tau = np.meshgrid(t, t, indexing="ij")
    off = np.abs(2 * np.sin((tt - tau) / 2)) > 1e-12
    r = np.linalg.norm(kite.eval(tt) - kite.eval(tau), axis=-1)
    blend = (np.abs(kappa) * r ** 4 > 0.5) & (np.abs(kappa) * r ** 4 < 1.0) \
        & off
    assert np.any(blend)
    kscale = np.max(np.abs(kernel(tt[off], tau[off])))
    for part in (pair.part1, pair.part2):
        assert np.max(np.abs(part(tt[blend], tau[blend]))) <= 10.0 * kscale


def test_moderate_absorption_skips_truncation(circle):
    # Im(kappa) * diameter under the cancellation budget: the analytic
    # splitting is kept everywhere and part1 never vanishes
    pair = split_complex("SL", 3 + 2j, circle)
    assert pair.part1(0.0, np.pi) != 0.0


def test_dlt_is_transposed_dl(kite):
    k = 2.0
    h = full_kernel("DL", k, kite)
    ht = full_kernel("DLT", k, kite)
    rng = np.random.default_rng(8)
    t = rng.uniform(0, 2 * np.pi, 50)
    tau = t + rng.uniform(0.3, 5.0, 50)
    np.testing.assert_allclose(ht(t, tau), h(tau, t), rtol=1e-13)


@pytest.mark.parametrize("kind", KINDS)
def test_parts_periodic(kite, kind):
    pair = split_real(kind, 2.0, kite)
    t = np.array([0.3, 1.7]); tau = np.array([2.9, 0.2])
    for part in (pair.part1, pair.part2):
        np.testing.assert_allclose(part(t, tau), part(t + 2 * np.pi, tau),
                                   atol=1e-11)
        np.testing.assert_allclose(part(t, tau), part(t, tau - 2 * np.pi),
                                   atol=1e-11)


@pytest.mark.parametrize("kind", KINDS)
def test_part2_second_differences_bounded(kite, kind):
    # no hidden singularity: cross-diagonal second differences settle to
    # the finite transverse second derivative as the step shrinks
    pair = split_real(kind, 2.0, kite)
    t0 = 1.3
    vals = []
    for h in (1e-1, 1e-2, 1e-3):
        d2 = (pair.part2(t0, t0 + h) - 2 * pair.part2(t0, t0)
              + pair.part2(t0, t0 - h)) / h ** 2
        vals.append(abs(d2))
    assert vals[2] < 2.0 * vals[1] + 10.0
    assert np.isfinite(vals).all()


def test_chi_plateau_and_support():
    assert chi(0.3) == 1.0
    assert chi(-0.5) == 1.0
    assert chi(1.5) == 0.0
    assert chi(-2.0) == 0.0
    mid = chi(0.75)
    assert 0.0 < mid < 1.0
    s = np.linspace(0.5, 1.0, 200)
    v = chi(s)
    assert np.all(np.diff(v) <= 1e-15)  # monotone nonincreasing bridge


def test_chi_smooth_junctions():
    # derivatives vanish to high order at |t| = 1/2 and 1
    for edge in (0.5, 1.0):
        h = 1e-3
        inner = chi(edge - h) if edge == 1.0 else chi(edge + h)
        ref = 0.0 if edge == 1.0 else 1.0
        assert abs(inner - ref) < 1e-2


def test_refined_sl_reconstruction(kite):
    k = 2.0
    pair = refined_sl_part(k, kite)
    kernel = full_kernel("SL", k, kite)
    rng = np.random.default_rng(2)
    t = rng.uniform(0, 2 * np.pi, 100)
    tau = t + rng.uniform(0.05, 6.0, 100)
    logw = np.log(4 * np.sin((t - tau) / 2) ** 2)
    s2 = np.sin((t - tau) / 2) ** 2
    lhs = -logw / (4 * np.pi) + pair.part1(t, tau) * s2 * logw \
        + pair.part2(t, tau)
    np.testing.assert_allclose(lhs, kernel(t, tau), atol=1e-13)
    # diagonal: k^2 |x'|^2 / (4 pi)
    na2 = np.sum(kite.deriv1(0.73) ** 2)
    assert pair.part1(0.73, 0.73) == pytest.approx(k * k * na2 / (4 * np.pi))


def test_split_argument_validation(kite):
    with pytest.raises(ValueError):
        split_real("XX", 2.0, kite)
    with pytest.raises(ValueError):
        split_real("SL", -1.0, kite)
    with pytest.raises(ValueError):
        split_complex("SL", 2.0 - 1j, kite)
    with pytest.raises(ValueError):
        split_complex("DL", 2 + 1j, kite)
    with pytest.raises(ValueError):
        full_kernel("SL", 2.0, kite)(0.5, 0.5)
