"""Integration-by-parts decomposition of the Duhamel coupling terms.

On the "problematic" frequency regions the coupling integrals of the
profile equations oscillate with a phase comparable to |xi|^3, so the
time integral can be integrated by parts: each coupling term splits
into its complement part (N0), a boundary term (B) evaluated at the
endpoints, and cubic terms (N1, N2, N3) obtained by substituting the
profile equations for the differentiated factor. This module evaluates
every term on a periodic spectral grid and checks that the classical
and the integrated-by-parts reconstructions of the profiles agree.

All formulas use the normalized coupling beta = gamma = theta = 1.

Problematic regions (with f ~= g meaning |f-g| <= eta*max(|f|,|g|)):

  U1 = {xi1 ~= xi2 and |xi| > 1/delta_u}        (only for a < 1/4)
  U2 = {(xi ~= xi1 or xi ~= xi2) and |xi| > 1/delta_u}
  U  = U1 union U2 for a < 1/4, U2 alone for a in [1/4, inf) minus {1}
  V  = {xi ~= xi1 and |xi| > 1/delta_v}
"""

import numpy as np

from .phases import eval_phase
from .spectral import spectral_product

TERM_TAGS = ("N0u", "N1u", "N2u", "N3u", "N0v", "N1v", "N2v", "N3v",
             "Bu", "Bv")


class CutoffParams:
    def __init__(self, delta_u=0.05, delta_v=0.05, eta_sim=0.1):
        if delta_u <= 0 or delta_v <= 0:
            raise ValueError("cutoff thresholds must be positive")
        if not 0 < eta_sim < 1:
            raise ValueError("eta_sim must lie in (0,1)")
        self.delta_u = float(delta_u)
        self.delta_v = float(delta_v)
        self.eta_sim = float(eta_sim)


class PhaseFloorError(RuntimeError):
    pass


def _sim(f, g, eta):
    """The comparability relation f ~= g, elementwise."""
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    return np.abs(f - g) <= eta * np.maximum(np.abs(f), np.abs(g))


def _check_conv(xi, xi1, xi2):
    if np.any(np.abs(np.asarray(xi) - (np.asarray(xi1) + np.asarray(xi2)))
              > 1e-9 * (1.0 + np.abs(np.asarray(xi)))):
        raise ValueError("frequencies violate xi = xi1 + xi2")


def in_U(a, xi, xi1, xi2, cut):
    """Membership in the problematic set U of the u equation."""
    _check_conv(xi, xi1, xi2)
    big = np.abs(np.asarray(xi, dtype=float)) > 1.0 / cut.delta_u
    u2 = (_sim(xi, xi1, cut.eta_sim) | _sim(xi, xi2, cut.eta_sim)) & big
    if a < 0.25:
        return (_sim(xi1, xi2, cut.eta_sim) & big) | u2
    return u2


def in_V(xi, xi1, xi2, cut):
    """Membership in the problematic set V of the v equation."""
    _check_conv(xi, xi1, xi2)
    big = np.abs(np.asarray(xi, dtype=float)) > 1.0 / cut.delta_v
    return _sim(xi, xi1, cut.eta_sim) & big


def u_phase_floor_constant(a, eta):
    """Conservative c with |Phi1u| >= c|xi|^3 on U.

    For a < 1/4 the global vertex bound 1/4 - a applies; for a >= 1/4
    membership in U2 forces the small factor |xi_j| <= eta|xi|, leaving
    |1-a| - 3 eta - 3 eta^2 of the quadratic factor.
    """
    if a < 0.25:
        return 0.25 - a
    return max(abs(1.0 - a) - 3.0 * eta - 3.0 * eta ** 2, 0.0)


def v_phase_floor_constant(a, eta):
    """Conservative c with |Phiv| >= c|xi|^3 on V (|xi2| <= eta|xi|)."""
    return max(abs(1.0 - a) - 3.0 * abs(a) * eta
               - 3.0 * abs(a) * eta ** 2 - abs(1.0 - a) * eta ** 3, 0.0)


class _GridKernels:
    """Precomputed (xi, xi1) masks and phase kernels for one grid."""

    def __init__(self, grid, a, cut):
        self.grid = grid
        self.a = float(a)
        self.cut = cut
        n = grid.n
        xi = grid.xi
        XI = xi[:, None]          # output frequency
        XI1 = xi[None, :]         # first input frequency
        XI2 = XI - XI1            # forced by the convolution constraint
        # keep only pairs whose xi2 is a representable grid frequency
        dxi = 2.0 * np.pi / grid.L
        idx2 = np.rint(XI2 / dxi).astype(int)
        half = n // 2
        self.valid = (idx2 >= -half) & (idx2 <= half - 1)
        self.j2 = np.where(self.valid, idx2 % n, 0)

        big_u = np.abs(XI) > 1.0 / cut.delta_u
        u2 = (_sim(XI, XI1, cut.eta_sim)
              | _sim(XI, XI2, cut.eta_sim)) & big_u
        if self.a < 0.25:
            self.mask_U = (_sim(XI1, XI2, cut.eta_sim) & big_u) | u2
        else:
            self.mask_U = u2
        self.mask_U &= self.valid
        self.mask_V = (_sim(XI, XI1, cut.eta_sim)
                       & (np.abs(XI) > 1.0 / cut.delta_v)) & self.valid

        self.XI, self.XI1, self.XI2 = XI, XI1, XI2
        self.phi1u = eval_phase("Phi1u", self.a, (XI1, XI2))
        self.phiv = eval_phase("Phiv", self.a, (XI1, XI2))

        self._check_floor("Phi1u", self.phi1u, self.mask_U,
                          u_phase_floor_constant(self.a, cut.eta_sim))
        self._check_floor("Phiv", self.phiv, self.mask_V,
                          v_phase_floor_constant(self.a, cut.eta_sim))

        self.inv_phi1u = np.where(
            self.mask_U, 1.0 / np.where(self.mask_U, self.phi1u, 1.0), 0.0)
        self.inv_phiv = np.where(
            self.mask_V, 1.0 / np.where(self.mask_V, self.phiv, 1.0), 0.0)

        self.outmask = grid.dealias_mask()

    def _check_floor(self, name, phi, mask, c):
        if not np.any(mask):
            return
        floor = 0.5 * c * np.abs(self.XI + np.zeros_like(phi)) ** 3
        bad = mask & (np.abs(phi) < floor)
        if np.any(bad):
            i, j = np.argwhere(bad)[0]
            raise PhaseFloorError(
                "%s below its floor inside the region at (xi, xi1) = "
                "(%g, %g)" % (name, self.grid.xi[i], self.grid.xi[j]))

    def pair_sum(self, kernel, f1, f2):
        """sum over xi1 of kernel(xi, xi1) f1(xi1) f2(xi - xi1)."""
        f2m = f2[self.j2] * self.valid
        return np.einsum("ij,j,ij->i", kernel, f1 + 0j, f2m)


def _kernels(grid, a, cut, cache={}):
    key = (id(grid), float(a), cut.delta_u, cut.delta_v, cut.eta_sim)
    if key not in cache:
        if len(cache) > 8:
            cache.clear()
        cache[key] = _GridKernels(grid, a, cut)
    return cache[key]


def eval_term(tag, state, a, cut):
    """Evaluate one decomposition term on a spectral-grid state.

    Returns the term as a coefficient array over the grid, in profile
    coordinates at the state's time, for the normalized coupling.
    The grid's dealias mask is applied to the output so the partition
    N0 + (region part) reproduces exactly the solver's coupling term.
    """
    if tag not in TERM_TAGS:
        raise ValueError("unknown term tag %r" % (tag,))
    grid = state.grid
    ker = _kernels(grid, a, cut)
    xi = grid.xi
    t = state.t
    uh = state.uhat.coeffs
    vh = state.vhat.coeffs
    eu = np.exp(-1j * a * t * xi ** 3)
    ev = np.exp(-1j * t * xi ** 3)
    mask = ker.outmask

    if tag == "N3u":
        # uncoupled quadratic term, never split
        return eu * (1j * xi) * spectral_product(uh, uh, grid, mask)

    if tag == "N0u":
        kernel = np.where(ker.valid & ~ker.mask_U, 1j * ker.XI + 0j, 0.0)
        return mask * eu * ker.pair_sum(kernel, vh, vh)
    if tag == "Bu":
        kernel = ker.XI * ker.inv_phi1u + 0j
        return mask * eu * ker.pair_sum(kernel, vh, vh)
    if tag == "N0v":
        kernel = np.where(ker.valid & ~ker.mask_V, 1j * ker.XI2 + 0j, 0.0)
        return mask * ev * ker.pair_sum(kernel, uh, vh)
    if tag == "Bv":
        kernel = ker.XI2 * ker.inv_phiv + 0j
        return mask * ev * ker.pair_sum(kernel, uh, vh)

    # cubic terms: one inner dealiased convolution of physical spectra,
    # then a masked pair sum against 1/phase kernels
    w = -1j * spectral_product(uh, 1j * xi * vh, grid, mask)  # conv(uhat, xi vhat)
    if tag == "N1u":
        kernel = -1j * ker.XI * ker.inv_phi1u + 0j
        return mask * eu * ker.pair_sum(kernel, w, vh)
    if tag == "N2u":
        kernel = -1j * ker.XI * ker.inv_phi1u + 0j
        return mask * eu * ker.pair_sum(kernel, vh, w)
    if tag == "N1v":
        conv_vv = spectral_product(vh, vh, grid, mask)
        kernel = -1j * ker.XI1 * ker.XI2 * ker.inv_phiv + 0j
        return mask * ev * ker.pair_sum(kernel, conv_vv, vh)
    if tag == "N2v":
        conv_uu = spectral_product(uh, uh, grid, mask)
        kernel = -1j * ker.XI1 * ker.XI2 * ker.inv_phiv + 0j
        return mask * ev * ker.pair_sum(kernel, conv_uu, vh)
    # N3v
    kernel = -1j * ker.XI2 * ker.inv_phiv + 0j
    return mask * ev * ker.pair_sum(kernel, uh, w)


def coupling_terms(state, a, cut):
    """Classical profile-equation right sides (u and v), dealiased.

    Equals (N0u + region part + N3u, N0v + region part) and also the
    spectral module's rhs_nonlinear for the normalized coupling.
    """
    grid = state.grid
    ker = _kernels(grid, a, cut)
    xi = grid.xi
    uh = state.uhat.coeffs
    vh = state.vhat.coeffs
    mask = ker.outmask
    eu = np.exp(-1j * a * state.t * xi ** 3)
    ev = np.exp(-1j * state.t * xi ** 3)
    cu = eu * (1j * xi) * (spectral_product(vh, vh, grid, mask)
                           + spectral_product(uh, uh, grid, mask))
    cv = ev * spectral_product(uh, 1j * xi * vh, grid, mask)
    return cu, cv


def _simpson_weights(m, h):
    # composite Simpson over m intervals (m even)
    w = np.ones(m + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (h / 3.0)


def ibps_residual(trajectory, a, cut, nonlinear_enabled=True):
    """Discrepancy between the two profile reconstructions at the final time.

    trajectory: equally spaced SimStates from the spectral module (an
    even number of intervals, beta = gamma = theta = 1). Both right
    sides are integrated in time with composite Simpson over the stored
    states; the return value is the maximum over modes (u and v alike)
    of |classical - integrated-by-parts| divided by the largest profile
    coefficient magnitude.
    """
    if len(trajectory) < 3 or len(trajectory) % 2 == 0:
        raise ValueError("need an odd number of equally spaced states "
                         "(even interval count) for Simpson quadrature")
    t0 = trajectory[0].t
    t1 = trajectory[-1].t
    m = len(trajectory) - 1
    h = (t1 - t0) / m
    steps = np.diff([st.t for st in trajectory])
    if np.max(np.abs(steps - h)) > 1e-9 * max(abs(h), 1e-12):
        raise ValueError("trajectory states are not equally spaced")

    grid = trajectory[0].grid
    xi = grid.xi
    state0 = trajectory[0]
    util0 = np.exp(-1j * a * t0 * xi ** 3) * state0.uhat.coeffs
    vtil0 = np.exp(-1j * t0 * xi ** 3) * state0.vhat.coeffs

    if not nonlinear_enabled:
        # all coupling terms carry the switched-off coefficients
        return 0.0

    w = _simpson_weights(m, h)
    acc_cl_u = np.zeros(grid.n, dtype=complex)
    acc_cl_v = np.zeros(grid.n, dtype=complex)
    acc_ib_u = np.zeros(grid.n, dtype=complex)
    acc_ib_v = np.zeros(grid.n, dtype=complex)
    for wi, st in zip(w, trajectory):
        cu, cv = coupling_terms(st, a, cut)
        acc_cl_u += wi * cu
        acc_cl_v += wi * cv
        nu = sum(eval_term(tag, st, a, cut)
                 for tag in ("N0u", "N1u", "N2u", "N3u"))
        nv = sum(eval_term(tag, st, a, cut)
                 for tag in ("N0v", "N1v", "N2v", "N3v"))
        acc_ib_u += wi * nu
        acc_ib_v += wi * nv

    bu1 = eval_term("Bu", trajectory[-1], a, cut)
    bu0 = eval_term("Bu", trajectory[0], a, cut)
    bv1 = eval_term("Bv", trajectory[-1], a, cut)
    bv0 = eval_term("Bv", trajectory[0], a, cut)

    rec_cl_u = util0 + acc_cl_u
    rec_cl_v = vtil0 + acc_cl_v
    rec_ib_u = util0 + (bu1 - bu0) + acc_ib_u
    rec_ib_v = vtil0 + (bv1 - bv0) + acc_ib_v

    scale = max(np.max(np.abs(rec_cl_u)), np.max(np.abs(rec_cl_v)), 1e-300)
    diff = max(np.max(np.abs(rec_cl_u - rec_ib_u)),
               np.max(np.abs(rec_cl_v - rec_ib_v)))
    return float(diff / scale)


def terms_csv(path, tags, state, a, cut):
    """Dump decomposition terms as CSV rows (tag, xi, re, im)."""
    with open(path, "w") as fh:
        fh.write("tag,xi,re,im\n")
        for tag in tags:
            vals = eval_term(tag, state, a, cut)
            for x, v in zip(state.grid.xi, vals):
                fh.write("%s,%.17g,%.17g,%.17g\n"
                         % (tag, x, v.real, v.imag))
