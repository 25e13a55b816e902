"""Adaptive quadrature and roundtrip-series summation.

All physical integrals in this package are either rotated to the imaginary
frequency axis or expressed as time-domain roundtrip sums, so every integrand
reaching this module is smooth (at worst endpoint-log-singular) and decays
exponentially.  The engine is an embedded Gauss pair (7/15 point) on panels,
globally refined worst-panel-first, plus a series summator with a geometric
tail bound and two escape hatches for slowly decaying term sequences: exact
polylogarithm detection and an algebraic 1/l^k tail fit.

Integrand callables must accept numpy arrays of abscissae.
"""

import heapq
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import zeta as _hurwitz

from .special_functions import polylog

__all__ = [
    "QuadratureSpec",
    "IntegrationResult",
    "integrate_semi_infinite",
    "sum_roundtrip_series",
]

_X7, _W7 = leggauss(7)
_X15, _W15 = leggauss(15)

# panel-marching geometry for the semi-infinite transform
_GROWTH = 1.4
_MIN_EXTENT_SCALES = 6.0
_MAX_MARCH_PANELS = 400
_MAX_TOTAL_PANELS = 20000


@dataclass
class QuadratureSpec:
    """Tolerances and caps shared by the integration and summation engines.

    rel_tol / abs_tol control the final integral estimate, series_tail_tol
    the relative truncation level of roundtrip series, max_subdivisions the
    bisection depth of any single panel, and max_roundtrips the hard cap on
    the series length.
    """

    rel_tol: float = 1e-9
    abs_tol: float = 1e-14
    max_subdivisions: int = 60
    series_tail_tol: float = 1e-10
    max_roundtrips: int = 10000

    def __post_init__(self):
        if self.rel_tol <= 0 or self.abs_tol <= 0 or self.series_tail_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1 or self.max_roundtrips < 1:
            raise ValueError("max_subdivisions and max_roundtrips must be >= 1")


@dataclass
class IntegrationResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool


def _panel(f, a, b):
    """Embedded 7/15-point Gauss estimate of the integral of f on [a, b]."""
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    y15 = np.asarray(f(mid + half * _X15), dtype=float)
    y7 = np.asarray(f(mid + half * _X7), dtype=float)
    i15 = half * float(_W15 @ y15)
    i7 = half * float(_W7 @ y7)
    return i15, abs(i15 - i7)


def _refine(f, panels, evaluations, spec, extra_error=0.0):
    """Globally refine a list of [err, a, b, value, depth] panels.

    Bisects the worst panel until the summed error estimate (plus any fixed
    extra_error, e.g. a truncated-tail bound) meets the tolerance.  Returns
    an IntegrationResult; convergence fails when a panel would exceed the
    depth cap or the panel budget runs out.
    """

    def fails(value, error):
        return error > max(spec.abs_tol, spec.rel_tol * abs(value))

    heap = []
    total_value = 0.0
    total_error = extra_error
    counter = 0
    for err, a, b, val, depth in panels:
        heapq.heappush(heap, (-err, counter, a, b, val, err, depth))
        counter += 1
        total_value += val
        total_error += err

    pops = 0
    converged = True
    while fails(total_value, total_error):
        neg_err, _, a, b, val, err, depth = heapq.heappop(heap)
        if depth >= spec.max_subdivisions or len(heap) + 2 > _MAX_TOTAL_PANELS:
            heapq.heappush(heap, (neg_err, counter, a, b, val, err, depth))
            counter += 1
            converged = False
            break
        mid = 0.5 * (a + b)
        vl, el = _panel(f, a, mid)
        vr, er = _panel(f, mid, b)
        evaluations += 44
        total_value += vl + vr - val
        total_error += el + er - err
        heapq.heappush(heap, (-el, counter, a, mid, vl, el, depth + 1))
        counter += 1
        heapq.heappush(heap, (-er, counter, mid, b, vr, er, depth + 1))
        counter += 1
        pops += 1
        if pops % 512 == 0:
            # resum to flush floating-point drift in the running totals
            total_value = sum(item[4] for item in heap)
            total_error = extra_error + sum(item[5] for item in heap)

    total_value = sum(item[4] for item in heap)
    total_error = extra_error + sum(item[5] for item in heap)
    converged = converged and not fails(total_value, total_error)
    return IntegrationResult(total_value, total_error, evaluations, converged)


def integrate_semi_infinite(f, decay_scale, spec=None):
    """Integrate f over (0, inf) for an (at least) exponentially damped f.

    Parameters
    ----------
    f : callable
        Vectorized integrand; never evaluated at 0 (Gauss nodes are
        interior), so integrable endpoint singularities are admissible.
    decay_scale : float
        Scale of the exponential decay of f; sets the initial panel width
        and the minimum extent covered before tail truncation.
    spec : QuadratureSpec, optional

    Returns
    -------
    IntegrationResult
        Panel marching stops once two consecutive panels contribute below
        the tail tolerance; the truncated tail enters the error estimate
        through a geometric extrapolation of the last panels.
    """
    if decay_scale <= 0:
        raise ValueError("decay_scale must be positive")
    if spec is None:
        spec = QuadratureSpec()

    panels = []
    evaluations = 0
    a = 0.0
    width = 0.5 * decay_scale
    running = 0.0
    small_streak = 0
    contributions = []
    marched_out = False
    for _ in range(_MAX_MARCH_PANELS):
        b = a + width
        val, err = _panel(f, a, b)
        evaluations += 22
        panels.append([err, a, b, val, 0])
        running += val
        contributions.append(abs(val))
        cutoff = max(spec.series_tail_tol * abs(running), spec.abs_tol)
        if b >= _MIN_EXTENT_SCALES * decay_scale and abs(val) <= cutoff:
            small_streak += 1
            if small_streak >= 2:
                marched_out = True
                break
        else:
            small_streak = 0
        a = b
        width *= _GROWTH

    tail_error = 0.0
    if len(contributions) >= 2 and contributions[-2] > 0.0:
        ratio = min(0.9, contributions[-1] / contributions[-2])
        tail_error = contributions[-1] * ratio / (1.0 - ratio)

    result = _refine(f, panels, evaluations, spec, extra_error=tail_error)
    if not marched_out:
        result.converged = False
    return result


def _integrate_interval(f, a, b, spec):
    """Adaptive integral of f over the finite interval [a, b]."""
    val, err = _panel(f, a, b)
    return _refine(f, [[err, a, b, val, 0]], 22, spec)


def _detect_polylog(terms, first_ell):
    """Check whether terms follow c x^l / l^p exactly; return (c, x, p) or None.

    terms[i] corresponds to l = first_ell + i.  The match must hold to
    near machine precision across the whole window for one of the
    polylogarithm orders that occur in the closed-form limits (p = 2, 3, 4).
    """
    t = np.asarray(terms, dtype=float)
    n = t.size
    if n < 6 or np.any(t == 0.0):
        return None
    ells = np.arange(first_ell, first_ell + n, dtype=float)
    for p in (2, 3, 4):
        u = t * ells**p
        ratios = u[1:] / u[:-1]
        x = float(np.median(ratios))
        if np.isfinite(x) and 1.0 - 1e-9 < abs(x) <= 1.0 + 1e-9:
            # exactly-critical sequences land here up to roundoff
            x = 1.0 if x > 0 else -1.0
        if not np.isfinite(x) or abs(x) > 1.0 or x == 0.0:
            continue
        if abs(x) > 1.0 - 1e-6:
            # a fitted ratio this close to (but not at) 1 cannot be told
            # apart from a contaminated window at double precision
            continue
        c = float(u[0] / x**first_ell)
        model = c * x**ells / ells**p
        if np.max(np.abs(model - t)) <= 1e-12 * np.max(np.abs(t)):
            return c, x, p
    return None


def _fit_algebraic_tail(term_list, L):
    """Least-squares 1/l^k tail (k = 2..7) fitted on the window [L/2, L].

    Returns (tail, error_proxy) with the tail summed exactly through Hurwitz
    zeta functions, or None when the window is unsuitable (sign changes or
    non-decreasing magnitudes, both of which signal a non-algebraic regime).
    """
    kmax = 7
    los = np.unique(np.round(np.linspace(L // 2, L, 16)).astype(int))
    tvals = np.array([term_list[l - 1] for l in los])
    signs = np.sign(tvals)
    if np.any(signs == 0.0) or np.any(signs != signs[0]):
        return None
    mags = np.abs(tvals)
    if np.any(np.diff(mags) > 0.0):
        return None
    y = L / los.astype(float)  # O(1) abscissa keeps the fit well conditioned
    ks = np.arange(2, kmax + 1)
    design = np.column_stack([y**k for k in ks])
    coeff, *_ = np.linalg.lstsq(design, tvals, rcond=None)
    a = coeff * float(L) ** ks
    tail = float(np.sum(a * _hurwitz(ks, L + 1)))
    coeff2, *_ = np.linalg.lstsq(design[:, :-2], tvals, rcond=None)
    a2 = coeff2 * float(L) ** ks[:-2]
    tail2 = float(np.sum(a2 * _hurwitz(ks[:-2], L + 1)))
    return tail, abs(tail - tail2)


def _sum_series(term, spec, ratio_bound=None, algebraic_tail=False):
    """Shared series engine behind sum_roundtrip_series and the force sums.

    term(l) is evaluated for l = 1, 2, ... and accumulated.  Exit routes, in
    order of preference at each checkpoint: a priori geometric bound (when
    ratio_bound < 1 is supplied), observed-ratio geometric bound, exact
    polylogarithm detection, and (for the internal engines) an algebraic
    tail fit.  Returns an IntegrationResult whose evaluations field counts
    term() calls.
    """
    cap = spec.max_roundtrips
    terms = []
    partial = 0.0
    best = None  # (value, error) from tail fits that missed tolerance

    def tol_met(err, value):
        return err <= max(spec.series_tail_tol * abs(value), spec.abs_tol)

    checkpoints = sorted({min(c, cap) for c in (64, 128, 256, 512, 1024, cap)})
    ell = 0
    for stop in checkpoints:
        while ell < stop:
            ell += 1
            t = float(term(ell))
            terms.append(t)
            partial += t
            if ratio_bound is not None and ratio_bound < 1.0:
                tail = abs(t) * ratio_bound / (1.0 - ratio_bound)
                if tol_met(tail, partial):
                    return IntegrationResult(partial, tail, ell, True)

        window = np.abs(terms[-9:])
        if len(terms) >= 9 and np.max(window) == 0.0:
            # terms have underflowed to exact zero: the series is finished
            return IntegrationResult(partial, 0.0, ell, True)
        if len(terms) >= 9 and np.all(window[:-1] > 0.0):
            ratios = window[1:] / window[:-1]
            if np.all(ratios < 0.98):
                r = float(np.max(ratios))
                tail = window[-1] * r / (1.0 - r)
                if tol_met(tail, partial):
                    return IntegrationResult(partial, tail, ell, True)

        if np.max(np.abs(terms)) == 0.0:
            return IntegrationResult(0.0, 0.0, ell, True)

        nwin = min(16, ell)
        hit = _detect_polylog(terms[-nwin:], ell - nwin + 1)
        if hit is not None:
            c, x, p = hit
            ells = np.arange(1, ell + 1, dtype=float)
            covered = float(np.sum(c * x**ells / ells**p))
            tail = c * polylog(x, p, tol=spec.series_tail_tol) - covered
            value = partial + tail
            return IntegrationResult(value, spec.series_tail_tol * abs(value),
                                     ell, True)

        if algebraic_tail and ell >= 64:
            fit = _fit_algebraic_tail(terms, ell)
            if fit is not None:
                tail, proxy = fit
                value = partial + tail
                if tol_met(proxy, value):
                    return IntegrationResult(value, proxy, ell, True)
                if best is None or proxy < best[1]:
                    best = (value, proxy)

    if best is not None:
        return IntegrationResult(best[0], best[1], ell, False)
    tail = abs(terms[-1]) if terms else 0.0
    if ratio_bound is not None and ratio_bound < 1.0 and terms:
        tail = abs(terms[-1]) * ratio_bound / (1.0 - ratio_bound)
    return IntegrationResult(partial, tail, ell, False)


def sum_roundtrip_series(term, ratio_bound, spec=None):
    """Sum the roundtrip series sum_{l>=1} term(l).

    Parameters
    ----------
    term : callable
        term(l) returns the l-roundtrip contribution (a float).
    ratio_bound : float
        A priori bound on |term(l+1)/term(l)|.  For ratio_bound < 1 the
        truncation uses the geometric tail bound
        |term(L)| ratio_bound / (1 - ratio_bound).  At or above 1 - 1e-6
        (perfectly reflecting pairs) the sum is attempted only through exact
        polylogarithm detection of the term sequence; anything else is
        reported as non-converged rather than truncated blindly.
    spec : QuadratureSpec, optional

    Returns
    -------
    IntegrationResult
        evaluations counts calls to term.
    """
    if spec is None:
        spec = QuadratureSpec()
    if ratio_bound <= 0:
        raise ValueError("ratio_bound must be positive")

    if ratio_bound < 1.0 - 1e-6:
        return _sum_series(term, spec, ratio_bound=ratio_bound)

    # degenerate tail bound: polylog detection or bust
    probe = min(48, spec.max_roundtrips)
    terms = [float(term(l)) for l in range(1, probe + 1)]
    partial = float(np.sum(terms))
    if np.max(np.abs(terms)) == 0.0:
        return IntegrationResult(0.0, 0.0, probe, True)
    hit = _detect_polylog(terms, 1)
    if hit is not None:
        c, x, p = hit
        value = c * polylog(x, p, tol=spec.series_tail_tol)
        return IntegrationResult(value, spec.series_tail_tol * abs(value),
                                 probe, True)
    return IntegrationResult(partial, abs(terms[-1]), probe, False)
