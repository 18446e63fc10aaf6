"""Numerical Meijer G-function kernel.

Evaluation is a Mellin-Barnes line integral

    G(x) = (1/2*pi*i) \\int Prod_{j<=m} Gamma(b_j - s) Prod_{k<=n} Gamma(1 - a_k + s) x^s ds

over a vertical line separating the ascending pole ladders of the
Gamma(b_j - s) factors (right of the line) from the descending ladders of the
Gamma(1 - a_k + s) factors (left of the line). The contour route handles
repeated lower parameters (the logarithmic case) with no special bookkeeping,
which is exactly the case the supported parameter classes need.

Numerics:
  * the abscissa is placed at the saddle of the integrand magnitude on the
    real axis (the log-magnitude is convex on the legal strip), which keeps
    peak-to-result cancellation near O(1);
  * the integrand is evaluated in log space and rescaled by its peak, so
    results whose magnitude under/overflows double precision remain available
    through :func:`meijer_g_log`;
  * for arguments on the negative axis the principal branch arg x = +pi is
    taken; when the vertical line no longer converges there (decay index
    m + n - (p+q)/2 <= 1) the two contour tails are bent into the right
    half-plane, which is legitimate whenever m > n because the integrand then
    decays super-exponentially along the bent rays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numquad import (QuadratureSettings, QuadratureError, integrate_contour,
                      integrate_finite, integrate_semi_infinite)

__all__ = [
    "MeijerGSpec",
    "PoleLayout",
    "SUPPORTED_CLASSES",
    "UnsupportedClassError",
    "PoleSeparationError",
    "ContourError",
    "clgamma",
    "meijer_g",
    "meijer_g_log",
    "meijer_g_signed",
    "pole_layout",
]


class UnsupportedClassError(ValueError):
    """Order quadruple outside the supported classes."""


class PoleSeparationError(RuntimeError):
    """No legal contour abscissa separates the two pole ladders."""


class ContourError(RuntimeError):
    """Contour evaluation failed (non-convergence, residue check, overflow)."""


SUPPORTED_CLASSES = frozenset({(3, 0, 0, 3), (3, 1, 1, 3), (1, 0, 0, 1),
                               (2, 0, 0, 2), (0, 1, 1, 0)})


@dataclass(frozen=True)
class MeijerGSpec:
    """Order quadruple (m, n, p, q) plus parameter vectors a (upper, length p)
    and b (lower, length q). Repeated b entries are allowed."""

    m: int
    n: int
    p: int
    q: int
    a: tuple = ()
    b: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(float(v) for v in self.a))
        object.__setattr__(self, "b", tuple(float(v) for v in self.b))
        if len(self.a) != self.p or len(self.b) != self.q:
            raise UnsupportedClassError(
                f"parameter vector lengths {len(self.a)}/{len(self.b)} do not "
                f"match orders p={self.p}, q={self.q}")
        if not (0 <= self.m <= self.q and 0 <= self.n <= self.p):
            raise UnsupportedClassError(f"need m <= q and n <= p, got {self}")
        if (self.m, self.n, self.p, self.q) not in SUPPORTED_CLASSES:
            raise UnsupportedClassError(
                f"class (m,n,p,q)={(self.m, self.n, self.p, self.q)} is not supported")

    @property
    def orders(self) -> tuple:
        return (self.m, self.n, self.p, self.q)

    @property
    def decay_index(self) -> float:
        """m + n - (p+q)/2: vertical-line decay rate is this times pi."""
        return self.m + self.n - 0.5 * (self.p + self.q)


@dataclass(frozen=True)
class PoleLayout:
    """Chosen contour abscissa and the nearest poles on either side."""

    contour_abscissa: float
    left_poles: tuple
    right_poles: tuple

    def check(self):
        c = self.contour_abscissa
        if any(p <= c for p in self.right_poles):
            raise PoleSeparationError(
                f"abscissa {c} does not leave right poles {self.right_poles} on the right")
        if any(p >= c for p in self.left_poles):
            raise PoleSeparationError(
                f"abscissa {c} does not leave left poles {self.left_poles} on the left")


# ---------------------------------------------------------------------------
# complex log-gamma
# ---------------------------------------------------------------------------

# Stirling series coefficients B_{2n} / (2n (2n-1))
_STIRLING = np.array([
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
])
_LOG_2PI = math.log(2.0 * math.pi)
_SHIFT_RE = 10.0


def _clgamma_shifted(z):
    """Stirling series; requires Re(z) >= _SHIFT_RE."""
    out = (z - 0.5) * np.log(z) - z + 0.5 * _LOG_2PI
    zi = 1.0 / z
    zi2 = zi * zi
    term = zi
    for c in _STIRLING:
        out = out + c * term
        term = term * zi2
    return out

def _cexpm1(w):
    """exp(w) - 1 for complex w without cancellation near w = 0."""
    x, y = w.real, w.imag
    ex = np.expm1(x)
    cy = np.cos(y)
    # e^x cos y - 1 = expm1(x) cos y - 2 sin^2(y/2)
    re = ex * cy - 2.0 * np.sin(0.5 * y) ** 2
    im = (ex + 1.0) * np.sin(y)
    return re + 1j * im


def _logsin_pi(z):
    """log(sin(pi z)) up to multiples of 2*pi*i, stable for large |Im z|."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    up = z.imag >= 0.0
    # sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i); for Im z >= 0 the
    # exponential e^{2 i pi z} has modulus <= 1.
    zu = z[up]
    out[up] = (-1j * math.pi * zu + np.log(_cexpm1(2j * math.pi * zu))
               - math.log(2.0) - 0.5j * math.pi)
    zd = np.conj(z[~up])
    out[~up] = np.conj(-1j * math.pi * zd + np.log(_cexpm1(2j * math.pi * zd))
                       - math.log(2.0) - 0.5j * math.pi)
    return out


def clgamma(z):
    """Vectorized complex log-gamma, principal up to multiples of 2*pi*i.

    Real parts (i.e. log|Gamma|) are accurate to ~1e-14 relative across the
    strip used by the contour integrals; imaginary parts may differ from the
    principal branch by multiples of 2*pi, which is irrelevant inside exp().
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z).copy()
    out = np.zeros(z.shape, dtype=complex)
    # reflect arguments left of the line Re z = 0.5
    if z.real.min() < 0.5:
        refl = z.real < 0.5
        zr = z[refl]
        out[refl] = math.log(math.pi) - _logsin_pi(zr)
        z[refl] = 1.0 - zr
        sign = np.where(refl, -1.0, 1.0)
    else:
        sign = 1.0
    # uniform shift into the Stirling region (contour arguments share one real
    # part, so a fixed count costs nothing extra and avoids masked passes)
    nshift = max(0, math.ceil(_SHIFT_RE - z.real.min()))
    acc = np.zeros(z.shape, dtype=complex)
    for _ in range(nshift):
        acc -= np.log(z)
        z += 1.0
    out = out + sign * (_clgamma_shifted(z) + acc)
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# contour machinery
# ---------------------------------------------------------------------------

def _ladders(spec: MeijerGSpec, count: int = 3):
    right = sorted(b + k for b in spec.b[:spec.m] for k in range(count))
    left = sorted((a - 1.0 - k for a in spec.a[:spec.n] for k in range(count)),
                  reverse=True)
    return tuple(left[:count]), tuple(right[:count])


def _strip(spec: MeijerGSpec):
    right_start = min(spec.b[:spec.m]) if spec.m else math.inf
    left_end = max(spec.a[:spec.n]) - 1.0 if spec.n else -math.inf
    return left_end, right_start


def _real_log_magnitude(spec: MeijerGSpec, c: float, ln_abs_x: float) -> float:
    s = 0.0
    for b in spec.b[:spec.m]:
        s += math.lgamma(b - c)
    for a in spec.a[:spec.n]:
        s += math.lgamma(1.0 - a + c)
    return s + c * ln_abs_x


def _choose_abscissa(spec: MeijerGSpec, ln_abs_x: float) -> float:
    """Minimize the real-axis log magnitude (convex) over the legal strip."""
    left_end, right_start = _strip(spec)
    if left_end >= right_start:
        raise PoleSeparationError(
            f"pole ladders overlap: left ends at {left_end}, right starts at {right_start}")
    m_eff = max(spec.m, 1)
    n_eff = max(spec.n, 1)
    if math.isinf(left_end):
        # saddle of Prod Gamma(b-c) x^c sits near -x^(1/m)
        lo = right_start - 50.0 - 3.0 * math.exp(max(0.0, ln_abs_x) / m_eff)
    else:
        lo = left_end + min(0.05, (right_start - left_end) / 10.0)
    if math.isinf(right_start):
        hi = left_end + 50.0 + 3.0 * math.exp(max(0.0, -ln_abs_x) / n_eff)
    else:
        hi = right_start - min(0.05, (right_start - max(left_end, lo - 1.0)) / 10.0)
    if not lo < hi:
        raise PoleSeparationError(f"empty abscissa search range [{lo}, {hi}]")
    grid = np.linspace(lo, hi, 129)
    vals = [_real_log_magnitude(spec, c, ln_abs_x) for c in grid]
    i = int(np.argmin(vals))
    a = grid[max(0, i - 1)]
    b = grid[min(len(grid) - 1, i + 1)]
    # golden-section refinement on the convex objective
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1 = _real_log_magnitude(spec, x1, ln_abs_x)
    f2 = _real_log_magnitude(spec, x2, ln_abs_x)
    for _ in range(60):
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = _real_log_magnitude(spec, x1, ln_abs_x)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = _real_log_magnitude(spec, x2, ln_abs_x)
    return 0.5 * (a + b)


def pole_layout(spec: MeijerGSpec, x: float, abscissa: float | None = None) -> PoleLayout:
    """Contour abscissa for argument magnitude |x| plus nearby poles; the
    separation requirement is verified before returning."""
    if x == 0:
        raise ValueError("argument must be nonzero")
    c = _choose_abscissa(spec, math.log(abs(x))) if abscissa is None else abscissa
    left, right = _ladders(spec)
    layout = PoleLayout(contour_abscissa=c, left_poles=left, right_poles=right)
    layout.check()
    return layout


def _log_integrand_factory(spec: MeijerGSpec, log_x: complex, k_scale: float):
    bm = np.array(spec.b[:spec.m], dtype=float)
    an = np.array(spec.a[:spec.n], dtype=float)

    def logg(s):
        s = np.asarray(s, dtype=complex)
        tot = np.zeros(s.shape, dtype=complex)
        for b in bm:
            tot = tot + clgamma(b - s)
        for a in an:
            tot = tot + clgamma(1.0 - a + s)
        return tot + s * log_x - k_scale

    return logg


# arguments this far out are attempted via abscissa shifting; beyond them the
# real lgamma in the abscissa search would overflow, so fail loudly instead
_ARG_RANGE = (1e-12, 1e12)


def _eval_vertical(spec: MeijerGSpec, abs_x: float, arg_x: float,
                   settings: QuadratureSettings, abscissa: float | None = None):
    """Scaled vertical-line evaluation.

    Returns (scaled complex value, log scale K, err_estimate/|scaled|, evals):
    the function value is exp(K) * scaled.
    """
    if not (_ARG_RANGE[0] <= abs_x <= _ARG_RANGE[1]):
        raise ContourError(
            f"argument magnitude {abs_x:.3e} outside supported range {_ARG_RANGE}")
    layout = pole_layout(spec, abs_x, abscissa)
    c = layout.contour_abscissa
    k_scale = _real_log_magnitude(spec, c, math.log(abs_x))
    logg = _log_integrand_factory(spec, complex(math.log(abs_x), arg_x), k_scale)

    def g(tau):
        return np.exp(logg(c + 1j * np.asarray(tau)))

    res = integrate_contour(g, settings)
    if not res.converged:
        raise ContourError(
            f"Mellin-Barnes line integral did not converge for {spec.orders} at "
            f"|x|={abs_x:.6g}, arg={arg_x:.3f} (err={res.err_estimate:.2e})")
    scaled = complex(res.value) / (2.0 * math.pi)
    err = res.err_estimate / (2.0 * math.pi)
    return scaled, k_scale, err, res.evaluations


# Steep rays (1.0 rad below vertical) keep the phase-growth transient along the
# ray at e^O(5) before the super-exponential Gamma decay takes over at |arg x|
# = pi; the small start height limits the e^{pi*|Im s|} factor while still
# clearing every pole on the real axis (ray height grows 0.64 per unit Re).
_BEND_NU = 1.0
_BEND_HEIGHT = 0.5


def _eval_bent(spec: MeijerGSpec, abs_x: float, arg_x: float,
               settings: QuadratureSettings):
    """Bent-contour evaluation for |arg x| too large for the vertical line.

    Valid for m > n: along rays heading into the right half-plane the m
    Gamma(b - s) factors decay super-exponentially faster than the n
    Gamma(1 - a + s) factors grow.
    """
    if spec.m <= spec.n:
        raise ContourError(
            f"no convergent contour for {spec.orders} at arg x = {arg_x:.3f}")
    layout = pole_layout(spec, abs_x)
    c = layout.contour_abscissa
    k_scale = _real_log_magnitude(spec, c, math.log(abs_x))
    logg = _log_integrand_factory(spec, complex(math.log(abs_x), arg_x), k_scale)
    phi0 = 0.5 * math.pi - _BEND_NU
    e_up = complex(math.cos(phi0), math.sin(phi0))
    e_dn = np.conj(e_up)
    u0 = _BEND_HEIGHT

    def g_vert(tau):
        return np.exp(logg(c + 1j * np.asarray(tau)))

    def g_up(r):
        return np.exp(logg(c + 1j * u0 + e_up * np.asarray(r)))

    def g_dn(r):
        return np.exp(logg(c - 1j * u0 + e_dn * np.asarray(r)))

    vert = integrate_finite(g_vert, -u0, u0, settings, initial_panels=16)
    up = integrate_semi_infinite(g_up, settings, scale=5.0)
    dn = integrate_semi_infinite(g_dn, settings, scale=5.0)
    for piece, name in ((vert, "vertical"), (up, "upper ray"), (dn, "lower ray")):
        if not piece.converged:
            raise ContourError(f"bent contour: {name} failed to converge")
    two_pi_i = 2j * math.pi
    scaled = (complex(vert.value) * 1j + e_up * complex(up.value)
              - e_dn * complex(dn.value)) / two_pi_i
    err = (vert.err_estimate + up.err_estimate + dn.err_estimate) / (2.0 * math.pi)
    evals = vert.evaluations + up.evaluations + dn.evaluations
    return scaled, k_scale, err, evals


_IMAG_RESIDUE_TOL = 1e-10
_VERTICAL_DECAY_MARGIN = 0.5   # required pi*delta - |arg x|, radians


def _eval_signed(spec: MeijerGSpec, x: float, branch: str,
                 settings: QuadratureSettings):
    abs_x = abs(x)
    if x > 0:
        arg_x = 0.0
    elif branch == "upper":
        arg_x = math.pi
    else:
        arg_x = -math.pi
    decay = math.pi * spec.decay_index - abs(arg_x)
    if decay >= _VERTICAL_DECAY_MARGIN:
        return _eval_vertical(spec, abs_x, arg_x, settings)
    return _eval_bent(spec, abs_x, arg_x, settings)


def _default_settings(settings):
    return settings if settings is not None else QuadratureSettings(rel_tol=1e-11)


def meijer_g_log(spec: MeijerGSpec, x: float,
                 settings: QuadratureSettings | None = None):
    """(log|G|, sign) for positive real argument; usable when G itself
    under- or overflows double precision."""
    settings = _default_settings(settings)
    if not x > 0:
        raise ValueError(f"argument must be > 0, got {x}")
    scaled, k, err, _ = _eval_vertical(spec, x, 0.0, settings)
    re = scaled.real
    if abs(scaled.imag) > _IMAG_RESIDUE_TOL * max(abs(re), 1e-280):
        raise ContourError(
            f"imaginary residue {scaled.imag:.3e} exceeds {_IMAG_RESIDUE_TOL} of "
            f"value {re:.3e} for {spec.orders} at x={x:.6g}")
    if re == 0.0:
        return -math.inf, 0.0
    return k + math.log(abs(re)), math.copysign(1.0, re)


def _meijer_g_full(spec: MeijerGSpec, x: float,
                   settings: QuadratureSettings | None = None,
                   abscissa: float | None = None):
    """(value, err_estimate, evaluations) for positive real argument."""
    settings = _default_settings(settings)
    if not x > 0:
        raise ValueError(f"argument must be > 0, got {x}")
    scaled, k, err, evals = _eval_vertical(spec, x, 0.0, settings, abscissa)
    re = scaled.real
    if abs(scaled.imag) > _IMAG_RESIDUE_TOL * max(abs(re), 1e-280):
        raise ContourError(
            f"imaginary residue {scaled.imag:.3e} exceeds {_IMAG_RESIDUE_TOL} of "
            f"value {re:.3e} for {spec.orders} at x={x:.6g}")
    if k > 700.0:
        raise ContourError(f"result overflows double precision (log scale {k:.1f})")
    factor = math.exp(k)
    return factor * re, factor * err, evals


def meijer_g(spec: MeijerGSpec, x: float,
             settings: QuadratureSettings | None = None) -> float:
    """Meijer G value for real argument x > 0 in a supported class.

    The imaginary residue of the contour integral is checked against
    1e-10 * |value| and discarded. Deep underflow returns 0.0 (use
    :func:`meijer_g_log` when the scale matters).
    """
    value, _, _ = _meijer_g_full(spec, x, settings)
    return value


_BATCH_LOG_SPAN = math.log(100.0)   # max ln(x_max/x_min) per shared-abscissa chunk


def _batch_chunk(spec: MeijerGSpec, xs: np.ndarray, rel_tol: float):
    """Evaluate G on a chunk of arguments sharing one contour abscissa.

    With a shared abscissa c the integrand magnitude along the line is the
    same for every x (|x^{i tau}| = 1), so one truncation bound and one
    Gamma-product grid serve the whole chunk; each argument costs only a
    phase-weighted sum. Returns (values, errs).
    """
    ln_xs = np.log(xs)
    c = _choose_abscissa(spec, float(np.mean(ln_xs)))
    bm = np.array(spec.b[:spec.m], dtype=float)
    an = np.array(spec.a[:spec.n], dtype=float)

    def gamma_sum(tau):
        s = c + 1j * np.asarray(tau, dtype=float)
        tot = np.zeros(s.shape, dtype=complex)
        for b in bm:
            tot = tot + clgamma(b - s)
        for a in an:
            tot = tot + clgamma(1.0 - a + s)
        return tot

    h = 0.25
    t = 10.0
    k = np.arange(-round(t / h), round(t / h) + 1)
    glog = gamma_sum(k * h)
    peak = float(np.max(glog.real))
    # grow the truncation bound until the scaled tail is negligible
    for _ in range(30):
        edge = max(glog.real[0], glog.real[-1]) - peak
        if edge < -46.0:   # e^-46 ~ 1e-20 relative
            break
        k_hi = np.arange(round(t / h) + 1, 2 * round(t / h) + 1)
        seg_hi = gamma_sum(k_hi * h)
        seg_lo = gamma_sum(-k_hi * h)
        k = np.concatenate([-k_hi[::-1], k, k_hi])
        glog = np.concatenate([seg_lo[::-1], glog, seg_hi])
        t *= 2.0
        peak = float(np.max(glog.real))
    else:
        raise ContourError(f"batched contour for {spec.orders}: tail does not decay")
    tau = k * h
    base = np.exp(glog - peak)

    def sums(tau_v, base_v, step):
        phases = np.exp(1j * np.outer(ln_xs, tau_v))
        return step * (phases @ base_v)

    s_prev = sums(tau, base, h)
    err = np.full(xs.shape, math.inf)
    prev_worst = math.inf
    for _ in range(14):
        h *= 0.5
        nmax = round(t / h)
        if nmax > 400_000:
            raise ContourError(f"batched contour for {spec.orders}: grid blow-up")
        k_odd = np.arange(-nmax + 1 if nmax % 2 == 0 else -nmax, nmax + 1, 2)
        tau_o = k_odd * h
        base_o = np.exp(gamma_sum(tau_o) - peak)
        s_new = 0.5 * s_prev + sums(tau_o, base_o, h)
        err = np.abs(s_new - s_prev)
        s_prev = s_new
        if np.all(err <= rel_tol * np.abs(s_prev)):
            break
        # once in the spectral regime the estimate shrinks by orders of
        # magnitude per halving; a small-but-stalled error means phase
        # cancellation has hit the roundoff floor and cannot improve
        worst = float(np.max(err / np.maximum(np.abs(s_prev), 1e-300)))
        if worst < 1e-6 and worst > 0.25 * prev_worst:
            raise ContourError(
                f"batched contour for {spec.orders}: convergence stalled")
        prev_worst = worst
    else:
        raise ContourError(f"batched contour for {spec.orders} did not converge")
    bad = np.abs(s_prev.imag) > _IMAG_RESIDUE_TOL * np.maximum(np.abs(s_prev.real), 1e-280)
    if np.any(bad):
        raise ContourError(
            f"batched contour for {spec.orders}: imaginary residue check failed")
    log_scale = c * ln_xs + peak - math.log(2.0 * math.pi)
    vals = s_prev.real * np.exp(log_scale)
    errs = err * np.exp(log_scale)
    return vals, errs


def meijer_g_batch(spec: MeijerGSpec, xs, rel_tol: float = 1e-11) -> np.ndarray:
    """Vectorized :func:`meijer_g` over an array of positive arguments.

    Arguments are grouped into chunks of bounded log span; each chunk shares
    one contour grid. Identical results to the scalar path within tolerances.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 0:
        return np.asarray(meijer_g(spec, float(xs)))
    if np.any(xs <= 0):
        raise ValueError("arguments must be > 0")
    if np.any((xs < _ARG_RANGE[0]) | (xs > _ARG_RANGE[1])):
        raise ContourError(f"argument magnitude outside supported range {_ARG_RANGE}")
    out = np.empty(xs.shape, dtype=float)
    order = np.argsort(xs)
    sorted_x = xs[order]

    def eval_chunk(chunk: np.ndarray) -> np.ndarray:
        # far from the chunk's shared saddle the phase sum cancels; fall back
        # by bisection, and per-argument saddles for irreducible chunks
        if chunk.size == 1:
            v, _, _ = _meijer_g_full(spec, float(chunk[0]),
                                     QuadratureSettings(rel_tol=rel_tol))
            return np.array([v])
        try:
            vals, _ = _batch_chunk(spec, chunk, rel_tol)
            return vals
        except ContourError:
            mid = chunk.size // 2
            return np.concatenate([eval_chunk(chunk[:mid]), eval_chunk(chunk[mid:])])

    lo = 0
    while lo < sorted_x.size:
        hi = lo + 1
        while hi < sorted_x.size and (math.log(sorted_x[hi]) - math.log(sorted_x[lo])
                                      <= _BATCH_LOG_SPAN):
            hi += 1
        out[order[lo:hi]] = eval_chunk(sorted_x[lo:hi])
        lo = hi
    return out


def meijer_g_signed(spec: MeijerGSpec, x: float,
                    settings: QuadratureSettings | None = None,
                    branch: str = "upper") -> complex:
    """Principal-branch value for x != 0 (phase e^{+i pi} applied to |x| for
    x < 0; branch="lower" selects e^{-i pi}). Used by the reconciliation path
    only; the normative ABER path never evaluates at negative arguments."""
    settings = _default_settings(settings)
    if x == 0:
        raise ValueError("argument must be nonzero")
    if branch not in ("upper", "lower"):
        raise ValueError(f"branch must be 'upper' or 'lower', got {branch!r}")
    scaled, k, err, _ = _eval_signed(spec, float(x), branch, settings)
    if k > 700.0:
        raise ContourError(f"result overflows double precision (log scale {k:.1f})")
    return math.exp(k) * scaled
