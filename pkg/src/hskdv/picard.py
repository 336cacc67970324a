"""Frequency-space evaluation of second and third Picard iterates.

The ill-posedness constructions evaluate the iterates of the Duhamel
formulation on explicit frequency-box initial data. In frequency space
a second iterate is a single convolution integral against the kernel

    K(phi, t) = (exp(i t phi) - 1) / (i phi)

with phi the relevant total phase, and the third iterate carries a
nested version of the kernel. Data live on the continuum (box widths
go down to N^-2), so everything here uses per-box Gauss-Legendre
quadrature, never a periodic grid.
"""

import numpy as np

from .phases import eval_phase

GL_NODES_DEFAULT = 64

# below this |t*phi| the kernel switches to its 4-term power series
SERIES_SWITCH = 1e-4


class FrequencyBox:
    """One frequency window [lo, hi] with amplitude <xi>^(-rho).

    weight_exponent rho = 0 means a plain indicator.
    """

    def __init__(self, lo, hi, weight_exponent=0.0):
        if not lo < hi:
            raise ValueError("box needs lo < hi")
        self.lo = float(lo)
        self.hi = float(hi)
        self.weight_exponent = float(weight_exponent)

    def amplitude(self, xi):
        xi = np.asarray(xi, dtype=float)
        if self.weight_exponent == 0.0:
            return np.ones_like(xi)
        return (1.0 + xi ** 2) ** (-self.weight_exponent / 2.0)

    def __repr__(self):
        return ("FrequencyBox(%g, %g, rho=%g)"
                % (self.lo, self.hi, self.weight_exponent))


class BoxData:
    """Initial datum given by disjoint frequency boxes.

    With conjugate_symmetric=True each box is mirrored to negative
    frequencies with the conjugate-symmetric (here: identical real)
    amplitude, as for the transform of a real field.
    """

    def __init__(self, boxes, conjugate_symmetric=False):
        boxes = list(boxes)
        ivs = sorted((b.lo, b.hi) for b in boxes)
        for (l0, h0), (l1, h1) in zip(ivs, ivs[1:]):
            if l1 < h0:
                raise ValueError("boxes must be pairwise disjoint")
        self.boxes = boxes
        self.conjugate_symmetric = bool(conjugate_symmetric)

    def effective_boxes(self):
        out = list(self.boxes)
        if self.conjugate_symmetric:
            out += [FrequencyBox(-b.hi, -b.lo, b.weight_exponent)
                    for b in self.boxes]
        return out

    def is_empty(self):
        return len(self.boxes) == 0


class PicardOutput:
    def __init__(self, xi_samples, values, t):
        xi_samples = np.asarray(xi_samples, dtype=float)
        values = np.asarray(values, dtype=complex)
        if xi_samples.shape != values.shape:
            raise ValueError("sample/value arrays differ in length")
        self.xi_samples = xi_samples
        self.values = values
        self.t = float(t)

    def to_csv(self, path):
        with open(path, "w") as fh:
            fh.write("xi,re,im\n")
            for x, v in zip(self.xi_samples, self.values):
                fh.write("%.17g,%.17g,%.17g\n" % (x, v.real, v.imag))


def duhamel_kernel(phi, t):
    """(exp(i t phi) - 1)/(i phi) with a series near the removable zero.

    For |t*phi| < 1e-4: t*(1 + i(t phi)/2 - (t phi)^2/6 - i(t phi)^3/24).
    Accepts scalars or arrays.
    """
    phi = np.asarray(phi, dtype=float)
    x = t * phi
    small = np.abs(x) < SERIES_SWITCH
    xs = np.where(small, x, 0.0)
    series = t * (1.0 + 1j * xs / 2.0 - xs ** 2 / 6.0 - 1j * xs ** 3 / 24.0)
    safe_phi = np.where(small, 1.0, phi)
    direct = (np.exp(1j * t * phi) - 1.0) / (1j * safe_phi)
    out = np.where(small, series, direct)
    if out.ndim == 0:
        return complex(out)
    return out


def _gl_nodes(lo, hi, n):
    x, w = np.polynomial.legendre.leggauss(n)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return mid + half * x, half * w


def _intersect(lo0, hi0, lo1, hi1):
    lo, hi = max(lo0, lo1), min(hi0, hi1)
    if lo < hi:
        return lo, hi
    return None


def _second_iterate(data1, data2, a, t, out_window, phase_tag, symbol,
                    carrier_a, n_out=256, gl_nodes=GL_NODES_DEFAULT):
    """Shared core: Ihat(xi) = i e^{i c t xi^3} *
    int symbol(xi, xi1, xi2) K(phase, t) f1(xi1) f2(xi2) dxi1."""
    lo, hi = float(out_window[0]), float(out_window[1])
    xi_s = np.linspace(lo, hi, n_out)
    values = np.zeros(n_out, dtype=complex)
    if t == 0 or data1.is_empty() or data2.is_empty():
        return PicardOutput(xi_s, values, t)
    boxes1 = data1.effective_boxes()
    boxes2 = data2.effective_boxes()
    for i, xi in enumerate(xi_s):
        acc = 0.0 + 0.0j
        for b1 in boxes1:
            for b2 in boxes2:
                # xi1 in b1 and xi2 = xi - xi1 in b2
                iv = _intersect(b1.lo, b1.hi, xi - b2.hi, xi - b2.lo)
                if iv is None:
                    continue
                x1, w = _gl_nodes(iv[0], iv[1], gl_nodes)
                x2 = xi - x1
                phi = eval_phase(phase_tag, a, (x1, x2))
                ker = duhamel_kernel(phi, t)
                amp = b1.amplitude(x1) * b2.amplitude(x2)
                acc += np.sum(w * symbol(xi, x1, x2) * ker * amp)
        values[i] = 1j * np.exp(1j * carrier_a * t * xi ** 3) * acc
    return PicardOutput(xi_s, values, t)


def second_iterate_v(u0, v0, a, t, out_window, gl_nodes=GL_NODES_DEFAULT):
    """Second iterate of the v equation on (u0, v0) box data.

    Ihat(xi) = i e^{i t xi^3} int xi2 K(Phiv, t) u0hat(xi1) v0hat(xi2) dxi1.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    return _second_iterate(u0, v0, a, t, out_window, "Phiv",
                           lambda xi, x1, x2: x2, 1.0, gl_nodes=gl_nodes)


def second_iterate_u(v0, a, t, out_window, gl_nodes=GL_NODES_DEFAULT):
    """Second iterate of the u equation on v0 box data.

    Ihat(xi) = i e^{i a t xi^3} int xi K(Phi1u, t) v0hat(xi1) v0hat(xi2) dxi1.
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    return _second_iterate(v0, v0, a, t, out_window, "Phi1u",
                           lambda xi, x1, x2: xi, a, gl_nodes=gl_nodes)


class PhaseFloorError(RuntimeError):
    pass


def third_iterate_v(v0, a, t, out_window, gl_nodes=GL_NODES_DEFAULT,
                    min_phase=1e-8, return_parts=False):
    """Third iterate of v on v0 box data (v -> u -> v cascade).

    With xi2 = xi - xi1 and xi1 = xi11 + xi12,

      Ihat(xi) = -e^{i t xi^3} * int int xi1 xi2
                 G(Phi1u1, Phiv, Theta, t)
                 v0hat(xi11) v0hat(xi12) v0hat(xi2) dxi11 dxi1,

    where Phi1u1 = -a xi1^3 + xi11^3 + xi12^3 is the phase of the inner
    u iterate, Phiv = -xi^3 + a xi1^3 + xi2^3, Theta = Phiv + Phi1u1 and

      G = (K(Theta, t) - K(Phiv, t)) / (i Phi1u1).

    The first part of G scales like |t|/|Phi1u1| on the ladder data,
    the second like 1/(|Phi1u1||Phiv|); both phases must stay away from
    zero on the support (checked, PhaseFloorError otherwise).
    """
    if a == 0:
        raise ValueError("a must be nonzero")
    lo, hi = float(out_window[0]), float(out_window[1])
    xi_s = np.linspace(lo, hi, 256)
    vals = np.zeros(256, dtype=complex)
    part1 = np.zeros(256, dtype=complex)
    part2 = np.zeros(256, dtype=complex)
    if t == 0 or v0.is_empty():
        out = PicardOutput(xi_s, vals, t)
        return (out, out, out) if return_parts else out
    boxes = v0.effective_boxes()
    for i, xi in enumerate(xi_s):
        acc1 = 0.0 + 0.0j
        acc2 = 0.0 + 0.0j
        for b2 in boxes:          # xi2 runs over this box
            x2, w2 = _gl_nodes(b2.lo, b2.hi, gl_nodes)
            for j in range(gl_nodes):
                xi2 = x2[j]
                xi1 = xi - xi2
                for b11 in boxes:     # xi11 in b11, xi12 = xi1 - xi11 in b12
                    for b12 in boxes:
                        iv = _intersect(b11.lo, b11.hi,
                                        xi1 - b12.hi, xi1 - b12.lo)
                        if iv is None:
                            continue
                        x11, w11 = _gl_nodes(iv[0], iv[1], gl_nodes)
                        x12 = xi1 - x11
                        phi_u1 = eval_phase("Phi1u", a, (x11, x12))
                        phi_v = eval_phase("Phiv", a, (xi1, xi2))
                        theta = phi_v + phi_u1
                        bad = np.abs(phi_u1) < min_phase
                        if np.any(bad):
                            k = int(np.argmax(bad))
                            raise PhaseFloorError(
                                "inner phase below floor at "
                                "(xi, xi1, xi11)=(%g, %g, %g)"
                                % (xi, xi1, x11[k]))
                        if abs(phi_v) < min_phase:
                            raise PhaseFloorError(
                                "outer phase below floor at (xi, xi1)="
                                "(%g, %g)" % (xi, xi1))
                        amp = (b11.amplitude(x11) * b12.amplitude(x12)
                               * b2.amplitude(xi2))
                        g1 = duhamel_kernel(theta, t) / (1j * phi_u1)
                        g2 = -duhamel_kernel(phi_v, t) / (1j * phi_u1)
                        common = w2[j] * xi1 * xi2 * amp
                        acc1 += np.sum(w11 * common * g1)
                        acc2 += np.sum(w11 * common * g2)
        carrier = -np.exp(1j * t * xi ** 3)
        part1[i] = carrier * acc1
        part2[i] = carrier * acc2
        vals[i] = part1[i] + part2[i]
    out = PicardOutput(xi_s, vals, t)
    if return_parts:
        return out, PicardOutput(xi_s, part1, t), PicardOutput(xi_s, part2, t)
    return out


def hs_norm_window(out, s, window):
    """H^s norm of a PicardOutput restricted to a window.

    Trapezoid quadrature of <xi>^{2s} |Ihat|^2 over the window samples.
    """
    lo, hi = float(window[0]), float(window[1])
    xs = out.xi_samples
    if lo < xs[0] - 1e-12 or hi > xs[-1] + 1e-12:
        raise ValueError("norm window outside the sampled range")
    sel = (xs >= lo) & (xs <= hi)
    x = xs[sel]
    if x.size < 2:
        raise ValueError("norm window contains fewer than 2 samples")
    integrand = (1.0 + x ** 2) ** s * np.abs(out.values[sel]) ** 2
    return float(np.sqrt(np.trapezoid(integrand, x)))
