import os

import numpy as np
import pytest

from hskdv.phases import Coefficients
from hskdv.spectral import (Grid, SimState, SolverConfig, SpectralField,
                            StabilityError, invariants_eval, load_snapshot,
                            make_state, run, save_snapshot, sobolev_norm,
                            spectral_product, step, trajectory_csv)


def _cos_state(grid, params, amp_u=0.1, amp_v=0.1, mode=2):
    w = 2.0 * np.pi / grid.L
    u = lambda x: amp_u * np.cos(mode * w * x)
    v = lambda x: amp_v * np.sin(mode * w * x)
    return make_state(grid, u, v, params)


def test_grid_frequencies():
    g = Grid(2.0 * np.pi, 16)
    assert g.xi[0] == 0.0
    assert g.xi[1] == pytest.approx(1.0)
    assert g.xi[-1] == pytest.approx(-1.0)
    mask = g.dealias_mask()
    assert mask[0] and mask[5]
    assert not mask[6] and not mask[8]


def test_make_state_roundtrip():
    g = Grid(2.0 * np.pi, 32)
    st = _cos_state(g, Coefficients(0.5))
    u = st.uhat.to_physical().real
    assert np.max(np.abs(u - 0.1 * np.cos(2 * g.x))) < 1e-13
    # cosine splits into two modes of half amplitude
    assert st.uhat.coeffs[2] == pytest.approx(0.05)
    assert st.uhat.coeffs[-2] == pytest.approx(0.05)


def test_linear_evolution_exact():
    g = Grid(2.0 * np.pi, 64)
    p = Coefficients(0.5)
    st = _cos_state(g, p)
    cfg = SolverConfig(dt=1e-2, nonlinear_enabled=False)
    final, _ = run(st, cfg, 0.3)
    t = final.t
    expect_u = st.uhat.coeffs * np.exp(1j * p.a * t * g.xi ** 3)
    expect_v = st.vhat.coeffs * np.exp(1j * t * g.xi ** 3)
    assert np.max(np.abs(final.uhat.coeffs - expect_u)) < 1e-12
    assert np.max(np.abs(final.vhat.coeffs - expect_v)) < 1e-12


def test_rk4_self_convergence_order():
    g = Grid(2.0 * np.pi, 64)
    p = Coefficients(0.5)
    T = 0.02

    def final_coeffs(dt):
        st = _cos_state(g, p, amp_u=0.3, amp_v=0.3)
        fin, _ = run(st, SolverConfig(dt=dt), T)
        return np.concatenate([fin.uhat.coeffs, fin.vhat.coeffs])

    c1 = final_coeffs(1e-3)
    c2 = final_coeffs(5e-4)
    c3 = final_coeffs(2.5e-4)
    e12 = np.max(np.abs(c1 - c2))
    e23 = np.max(np.abs(c2 - c3))
    order = np.log2(e12 / e23)
    assert 3.8 <= order <= 4.2


def test_spectral_product_matches_direct_convolution():
    rng = np.random.default_rng(5)
    g = Grid(2.0 * np.pi, 32)
    n = g.n

    def band_limited():
        c = np.zeros(n, dtype=complex)
        for j in range(1, 6):
            z = rng.normal() + 1j * rng.normal()
            c[j] = z
            c[-j] = np.conj(z)
        c[0] = rng.normal()
        return c

    a = band_limited()
    b = band_limited()
    mask = g.dealias_mask()
    got = spectral_product(a, b, g, mask)

    idx = np.fft.fftfreq(n, 1.0 / n).astype(int)
    oracle = np.zeros(n, dtype=complex)
    for i in range(n):
        if not mask[i]:
            continue
        ki = idx[i]
        acc = 0.0 + 0.0j
        for j in range(n):
            kj = idx[j]
            kk = ki - kj
            if -n // 2 <= kk < n // 2:
                acc += a[j] * b[np.where(idx == kk)[0][0]]
        oracle[i] = acc
    assert np.max(np.abs(got - oracle)) < 1e-10


def test_mass_conservation_short():
    g = Grid(2.0 * np.pi, 128)
    p = Coefficients(0.5)
    st = _cos_state(g, p, amp_u=0.2, amp_v=0.2)
    inv0 = invariants_eval(st)
    fin, _ = run(st, SolverConfig(dt=2e-4), 0.05)
    inv1 = invariants_eval(fin)
    scale = max(abs(inv0["M"]), 1e-12)
    assert abs(inv1["M"] - inv0["M"]) / scale < 1e-8
    assert abs(inv1["mean_u"] - inv0["mean_u"]) < 1e-12


def test_stability_bound_raises():
    g = Grid(2.0 * np.pi, 128)
    st = _cos_state(g, Coefficients(0.5), amp_u=1.0, amp_v=1.0)
    with pytest.raises(StabilityError) as err:
        step(st, SolverConfig(dt=1.0))
    assert "stability bound" in str(err.value)


def test_sobolev_norm_single_mode():
    g = Grid(2.0 * np.pi, 32)
    c = np.zeros(32, dtype=complex)
    c[3] = 0.5
    c[-3] = 0.5
    f = SpectralField(g, c)
    # two modes of weight 1/4 each, bracket <3>^2 = 10
    for s in (0.0, 1.0, -0.5):
        expect = np.sqrt(2 * 0.25 * (1 + 9.0) ** s)
        assert sobolev_norm(f, s) == pytest.approx(expect, rel=1e-12)


def test_snapshot_roundtrip(tmp_path):
    g = Grid(2.0 * np.pi, 32)
    p = Coefficients(0.5)
    st = _cos_state(g, p)
    path = os.path.join(tmp_path, "s.snap")
    save_snapshot(path, st)
    back = load_snapshot(path, params=p)
    assert back.grid.n == 32
    assert back.t == st.t
    assert np.array_equal(back.uhat.coeffs, st.uhat.coeffs)
    assert np.array_equal(back.vhat.coeffs, st.vhat.coeffs)


def test_trajectory_csv_header(tmp_path):
    path = os.path.join(tmp_path, "t.csv")
    trajectory_csv(path, [(0.0, 1.0, 2.0, 0.0, 3.0, 4.0)])
    lines = open(path).read().splitlines()
    assert lines[0] == "t,u_norm,v_norm,mean_u,M,E"
    assert len(lines) == 2


def test_hermitian_check():
    g = Grid(2.0 * np.pi, 16)
    c = np.zeros(16, dtype=complex)
    c[1] = 1.0  # no conjugate partner
    with pytest.raises(ValueError):
        SpectralField(g, c, hermitian=True)


def test_run_stores_endpoints():
    g = Grid(2.0 * np.pi, 32)
    st = _cos_state(g, Coefficients(2.0))
    fin, stored = run(st, SolverConfig(dt=1e-3), 0.01, store_every=2)
    assert stored[0].t == 0.0
    assert stored[-1].t == pytest.approx(fin.t)
    assert len(stored) == 6
