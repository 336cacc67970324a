"""Frequency-restricted estimate (FRE) quantities and dual-form scans.

The bilinear space-time estimates behind the contraction argument
reduce to sup-over-one-frequency integrals over the level sets
{|Phi - alpha| < M} of a total phase. This module evaluates those
sup-integrals with exact level-set root isolation, measures quadratic
level sets in closed form, fits the growth of the sup against the
frequency cutoff (bounded inside the sharp validity region, power
growth outside), and Monte-Carlo-estimates the dual quadrilinear forms
used by the sharpness counterexample boxes.
"""

import math

import numpy as np

from .phases import eval_phase

ALPHA_EXPONENT = 0.99  # numerical stand-in for the <alpha>^(1-) weight


def _bracket(x):
    return np.sqrt(1.0 + np.asarray(x, dtype=float) ** 2)


def level_set_measure(alpha, M):
    """Exact Lebesgue measure of {q in R : |q^2 - alpha| < M}.

    The set is {max(alpha - M, 0) < q^2 < alpha + M}; its measure is
    2*(sqrt(alpha+M) - sqrt(max(alpha-M, 0))), empty when
    alpha + M <= 0. Always bounded by 2*sqrt(2)*sqrt(M).
    """
    if M <= 0:
        raise ValueError("M must be positive")
    hi = alpha + M
    if hi <= 0:
        return 0.0
    lo = max(alpha - M, 0.0)
    return 2.0 * (math.sqrt(hi) - math.sqrt(lo))


class RootFindingError(RuntimeError):
    pass


def _real_cubic_roots(c):
    """Real roots of c[0] x^3 + c[1] x^2 + c[2] x + c[3].

    Analytic solution of the depressed cubic (trigonometric form for
    three real roots, Cardano otherwise) followed by a Newton polish.
    Degenerate leading coefficients fall through to the quadratic and
    linear cases. Returns a (possibly empty) sorted list.
    """
    c3, c2, c1, c0 = (float(x) for x in c)
    scale = max(abs(c3), abs(c2), abs(c1), abs(c0))
    if scale == 0.0:
        return []
    tol = 1e-14 * scale
    if abs(c3) <= tol:
        if abs(c2) <= tol:
            if abs(c1) <= tol:
                return []
            return [-c0 / c1]
        disc = c1 * c1 - 4.0 * c2 * c0
        if disc < 0:
            return []
        r = math.sqrt(disc)
        return sorted([(-c1 - r) / (2 * c2), (-c1 + r) / (2 * c2)])

    b, cc, d = c2 / c3, c1 / c3, c0 / c3
    # depressed form y^3 + p y + q with x = y - b/3
    p = cc - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * cc / 3.0 + d
    shift = -b / 3.0
    roots = []
    disc = -4.0 * p ** 3 - 27.0 * q ** 2
    if disc >= 0 and p < 0:
        m = 2.0 * math.sqrt(-p / 3.0)
        arg = 3.0 * q / (p * m)
        arg = min(1.0, max(-1.0, arg))
        phi = math.acos(arg)
        for kk in range(3):
            roots.append(m * math.cos((phi - 2.0 * math.pi * kk) / 3.0)
                         + shift)
    else:
        half_q = -q / 2.0
        inner = half_q * half_q + (p / 3.0) ** 3
        if inner < 0:
            inner = 0.0
        sq = math.sqrt(inner)
        y = np.cbrt(half_q + sq) + np.cbrt(half_q - sq)
        roots.append(float(y) + shift)

    poly = np.array([c3, c2, c1, c0])
    dpoly = np.array([3 * c3, 2 * c2, c1])
    polished = []
    for r in roots:
        x = r
        for _ in range(3):
            fx = np.polyval(poly, x)
            dfx = np.polyval(dpoly, x)
            if dfx != 0:
                x -= fx / dfx
        if not np.isfinite(x):
            raise RootFindingError("Newton polish diverged for cubic %r"
                                   % (list(poly),))
        polished.append(float(x))
    return sorted(polished)


class FreSpec:
    """What to integrate: multiplier, Sobolev weights, phase, sup variable.

    multiplier: 'xi' (symbol of d/dx(v*v)), 'xi2' (symbol of u v_x) or
    'one'. weights = (s_out, s_1, s_2). fixed_var names the frequency
    held fixed by the sup; the integral runs over xi1 (fixed xi or xi2)
    or xi2 (fixed xi1).
    """

    def __init__(self, multiplier, weights, phase_tag, fixed_var="xi"):
        if multiplier not in ("xi", "xi2", "one"):
            raise ValueError("unknown multiplier %r" % (multiplier,))
        if fixed_var not in ("xi", "xi1", "xi2"):
            raise ValueError("unknown fixed_var %r" % (fixed_var,))
        from .phases import PhaseId
        pid = PhaseId(phase_tag) if isinstance(phase_tag, str) else phase_tag
        if pid.arity != 2:
            raise ValueError("FRE scans need a quadratic phase")
        self.multiplier = multiplier
        self.weights = tuple(float(wq) for wq in weights)
        self.phase = pid
        self.fixed_var = fixed_var


def make_fre_spec(kind, k, s):
    """Canonical FreSpec for the two bilinear interactions.

    kind 'dxv2': output u in H^k from v*v data in H^s (multiplier xi,
    phase Phi1u); kind 'uvx': output v in H^s from u in H^k and v in
    H^s (multiplier xi2, phase Phiv).
    """
    if kind == "dxv2":
        return FreSpec("xi", (k, s, s), "Phi1u", fixed_var="xi")
    if kind == "uvx":
        return FreSpec("xi2", (s, k, s), "Phiv", fixed_var="xi")
    raise ValueError("unknown FRE kind %r" % (kind,))


def _freqs_from(spec, w, free):
    """(xi, xi1, xi2) arrays given the fixed value w and free samples."""
    free = np.asarray(free, dtype=float)
    if spec.fixed_var == "xi":
        xi = np.full_like(free, w)
        xi1 = free
        xi2 = xi - xi1
    elif spec.fixed_var == "xi1":
        xi1 = np.full_like(free, w)
        xi2 = free
        xi = xi1 + xi2
    else:
        xi2 = np.full_like(free, w)
        xi1 = free
        xi = xi1 + xi2
    return xi, xi1, xi2


def _phase_cubic_coeffs(spec, a, w):
    """Coefficients of the phase as a polynomial in the free variable."""
    span = max(1.0, abs(w))
    nodes = np.array([-2.0, -0.5, 0.5, 2.0]) * span
    xi, xi1, xi2 = _freqs_from(spec, w, nodes)
    vals = eval_phase(spec.phase, a, (xi1, xi2))
    return np.polyfit(nodes, vals, 3)


def _weight_integrand(spec, a, xi, xi1, xi2):
    s_out, s1, s2 = spec.weights
    if spec.multiplier == "xi":
        m2 = xi ** 2
    elif spec.multiplier == "xi2":
        m2 = xi2 ** 2
    else:
        m2 = np.ones_like(xi)
    return (m2 * _bracket(xi) ** (2 * s_out)
            / (_bracket(xi1) ** (2 * s1) * _bracket(xi2) ** (2 * s2)))


_GL64 = np.polynomial.legendre.leggauss(64)


def _level_set_intervals(coeffs, alpha, M, clip):
    """Intervals of {free : |poly(free) - alpha| < M}, clipped."""
    upper = coeffs.copy()
    upper[3] -= alpha + M
    lower = coeffs.copy()
    lower[3] -= alpha - M
    pts = _real_cubic_roots(upper) + _real_cubic_roots(lower)
    pts = sorted(p for p in pts if -clip < p < clip)
    breaks = [-clip] + pts + [clip]
    out = []
    for lo, hi in zip(breaks, breaks[1:]):
        if hi - lo < 1e-300:
            continue
        mid = 0.5 * (lo + hi)
        val = np.polyval(coeffs, mid)
        if abs(val - alpha) < M:
            out.append((lo, hi))
    return out


def fre_sup(spec, a, alpha, M, lam):
    """Sup over the fixed frequency of the restricted weight integral.

    For each fixed value on a signed log grid up to lam, the level set
    {|Phi - alpha| < M} in the free variable is isolated by cubic root
    finding and the weight integrand is integrated over it with
    Gauss-Legendre nodes; the maximum over the grid is returned.
    """
    if lam <= 0 or M <= 0:
        raise ValueError("lam and M must be positive")
    # geometric grid with a fixed ratio so enlarging lam only appends
    # points; this keeps the sup monotone in lam
    mags = [0.1]
    while mags[-1] < lam:
        mags.append(mags[-1] * 1.15)
    mags[-1] = min(mags[-1], lam)
    mags = np.asarray(mags)
    grid = np.concatenate([-mags[::-1], mags])
    clip = 10.0 * lam
    best = 0.0
    gx, gw = _GL64
    for w in grid:
        coeffs = _phase_cubic_coeffs(spec, a, w)
        total = 0.0
        for lo, hi in _level_set_intervals(coeffs, alpha, M, clip):
            mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
            nodes = mid + half * gx
            xi, xi1, xi2 = _freqs_from(spec, w, nodes)
            total += half * float(
                np.sum(gw * _weight_integrand(spec, a, xi, xi1, xi2)))
        best = max(best, total)
    return best


class ScanReport:
    def __init__(self, sup_value, ratio, growth_slope, lams, sup_values):
        self.sup_value = float(sup_value)
        self.ratio = float(ratio)
        self.growth_slope = float(growth_slope)
        self.lams = list(lams)
        self.sup_values = list(sup_values)

    def as_dict(self):
        return {
            "sup_value": self.sup_value,
            "ratio": self.ratio,
            "growth_slope": self.growth_slope,
            "lams": self.lams,
            "sup_values": self.sup_values,
        }


DEFAULT_ALPHA_GRID = (0.0, 1.0, -1.0, 10.0, -10.0)
DEFAULT_M_GRID = (1.0, 4.0)


def ratio_scan(spec, a, lams=(1e2, 1e3, 1e4),
               alpha_grid=DEFAULT_ALPHA_GRID, m_grid=DEFAULT_M_GRID):
    """Growth of the normalized FRE sup against the cutoff ladder.

    For each cutoff the worst ratio sup/( <alpha>^0.99 * M ) over the
    (alpha, M) grid is recorded; the slope of log(ratio) vs log(cutoff)
    is the report's growth_slope. Near-zero slope certifies a bounded
    FRE (inside the validity region); a decisively positive slope
    reproduces the failure outside it.
    """
    lams = sorted(float(x) for x in lams)
    if len(lams) < 3:
        raise ValueError("need at least 3 ladder points for a slope fit")
    sups = []
    for lam in lams:
        worst = 0.0
        for alpha in alpha_grid:
            for M in m_grid:
                val = fre_sup(spec, a, alpha, M, lam)
                worst = max(worst,
                            val / (float(_bracket(alpha)) ** ALPHA_EXPONENT
                                   * M))
        sups.append(worst)
    logs = np.log(np.maximum(sups, 1e-300))
    slope = float(np.polyfit(np.log(lams), logs, 1)[0])
    return ScanReport(sups[-1], sups[-1], slope, lams, sups)


class SpaceTimeBox:
    """Product box: xi in [xi_lo, xi_hi], tau - r*xi^3 in [tau_lo, tau_hi].

    tau_slope r = 0 gives a plain rectangle; r != 0 lets the box follow
    a dispersion surface.
    """

    def __init__(self, xi_lo, xi_hi, tau_lo, tau_hi, tau_slope=0.0):
        if not (xi_lo < xi_hi and tau_lo < tau_hi):
            raise ValueError("degenerate space-time box")
        self.xi_lo = float(xi_lo)
        self.xi_hi = float(xi_hi)
        self.tau_lo = float(tau_lo)
        self.tau_hi = float(tau_hi)
        self.tau_slope = float(tau_slope)

    def volume(self):
        return (self.xi_hi - self.xi_lo) * (self.tau_hi - self.tau_lo)

    def contains(self, xi, tau):
        rel = tau - self.tau_slope * xi ** 3
        return ((self.xi_lo <= xi) & (xi <= self.xi_hi)
                & (self.tau_lo <= rel) & (rel <= self.tau_hi))

    def sample(self, rng, size):
        xi = rng.uniform(self.xi_lo, self.xi_hi, size)
        tau = (self.tau_slope * xi ** 3
               + rng.uniform(self.tau_lo, self.tau_hi, size))
        return xi, tau


def dual_form_estimate(h_box, h1_box, h2_box, a, weights, which,
                       n_samples=200000, n_strata=16, seed=1234):
    """Stratified Monte-Carlo value of a dual quadrilinear form.

    weights = (k, s, b, b'). For which='vv_to_u' the integrand is
      |xi| <xi>^k <tau - a xi^3>^{b'} /
      (<xi1>^s <tau1 - xi1^3>^b <xi2>^s <tau2 - xi2^3>^b)
    and for which='uv_to_v'
      |xi2| <xi>^s <tau - xi^3>^{b'} /
      (<xi1>^k <tau1 - a xi1^3>^b <xi2>^s <tau2 - xi2^3>^b),
    integrated over (xi1, tau1) in h1, (xi2, tau2) in h2 with the
    output point (xi1+xi2, tau1+tau2) restricted to h, normalized by
    the L^2 norms of the three box indicators.
    """
    if which not in ("vv_to_u", "uv_to_v"):
        raise ValueError("unknown dual form %r" % (which,))
    k, s, b, bp = (float(x) for x in weights)
    per = max(n_samples // n_strata, 1)
    width1 = (h1_box.xi_hi - h1_box.xi_lo) / n_strata
    total = 0.0
    hits = 0
    for strat in range(n_strata):
        rng = np.random.default_rng(seed + 7919 * strat)
        lo = h1_box.xi_lo + strat * width1
        sub1 = SpaceTimeBox(lo, lo + width1, h1_box.tau_lo, h1_box.tau_hi,
                            h1_box.tau_slope)
        xi1, tau1 = sub1.sample(rng, per)
        xi2, tau2 = h2_box.sample(rng, per)
        xi = xi1 + xi2
        tau = tau1 + tau2
        inside = h_box.contains(xi, tau)
        hits += int(np.count_nonzero(inside))
        if not np.any(inside):
            continue
        if which == "vv_to_u":
            num = np.abs(xi) * _bracket(xi) ** k * \
                _bracket(tau - a * xi ** 3) ** bp
            den = (_bracket(xi1) ** s * _bracket(tau1 - xi1 ** 3) ** b
                   * _bracket(xi2) ** s * _bracket(tau2 - xi2 ** 3) ** b)
        else:
            num = np.abs(xi2) * _bracket(xi) ** s * \
                _bracket(tau - xi ** 3) ** bp
            den = (_bracket(xi1) ** k
                   * _bracket(tau1 - a * xi1 ** 3) ** b
                   * _bracket(xi2) ** s * _bracket(tau2 - xi2 ** 3) ** b)
        vals = np.where(inside, num / den, 0.0)
        total += float(np.mean(vals)) * sub1.volume() * h2_box.volume()
    norm = math.sqrt(h_box.volume() * h1_box.volume() * h2_box.volume())
    return total / norm
