"""Struve function H_nu and the difference K_nu = H_nu - Y_nu."""

from __future__ import annotations

import cmath
import math

import numpy as np

from ..errors import ConvergenceError
from ._core import EPS, SpecFunResult, rgamma_real
from .bessel import _cpow, bessel_y

_SQRT_PI = math.sqrt(math.pi)
# Below this relative error estimate a method is accepted without trying others.
_GOOD = 1e-13


def _h_series(nu, z):
    w = 0.25 * z * z
    c = 2.0 / _SQRT_PI + 0j  # (-w)^k / Gamma(k + 3/2)
    s = 0j
    mag = 0.0
    k = 0
    peak_seen = False
    while k < 3000:
        t = c * rgamma_real(k + nu + 1.5)
        s += t
        mag += abs(t)
        if k > abs(w) and abs(t) <= EPS * 0.01 * mag and t != 0:
            break
        if k > abs(w) and t == 0 and peak_seen:
            break
        peak_seen = peak_seen or t != 0
        c *= -w / (k + 1.5)
        k += 1
    pre = _cpow(0.5 * z, nu + 1)
    return pre * s, abs(pre) * EPS * (4 * mag + k * abs(s))


def _k_asymptotic(nu, z):
    """Large-|z| expansion of H_nu - Y_nu; returns (value, abs_err) or None."""
    if abs(cmath.phase(z)) > math.pi / 2 + 0.5:
        return None
    h = 0.5 * z
    s = 0j
    prev = math.inf
    g = _SQRT_PI  # Gamma(k + 1/2)
    hp = _cpow(h, nu - 1)
    inv = 1 / (h * h)
    last = 0.0
    for k in range(200):
        t = g * hp * rgamma_real(nu + 0.5 - k)
        at = abs(t)
        if at > prev and k > 2:
            break
        s += t
        last = at
        if at == 0 and k > abs(nu) + 2:
            break
        if at < EPS * 1e-3 * abs(s):
            break
        prev = at if at > 0 else prev
        g *= k + 0.5
        hp *= inv
    val = s / math.pi
    return val, last / math.pi + EPS * 4 * abs(val)


def _k_integral(nu, z):
    """K_nu(z) = 2 (z/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_0^inf e^{-zt}(1+t^2)^{nu-1/2} dt."""
    rg = rgamma_real(nu + 0.5)
    if rg == 0:
        return 0j, 0.0
    if z.real < 0 or (z.real == 0 and nu >= -0.5):
        return None
    from ..quad import integrate_halfline

    if z.real > 0:
        # rotate onto arg t = -arg z so that e^{-zt} does not oscillate; the ray
        # stays inside |arg t| < pi/2 and never meets the branch points t = +-i
        rot = abs(z) / z
        az = abs(z)

        def g(tau):
            t = tau * rot
            with np.errstate(all="ignore"):
                v = rot * np.exp(-az * tau + (nu - 0.5) * np.log1p(t * t))
            return np.where(np.isfinite(v), v, 0.0)

        decay, scale, pts = "exponential", 1.0, (1.0,)
    else:
        def g(t):
            return np.exp(-z * t + (nu - 0.5) * np.log1p(t * t))

        decay, scale, pts = "algebraic", 1.0, ()
    try:
        r = integrate_halfline(g, "positive", decay, 1e-300, rel_tol=1e-13, scale=scale, budget=400_000, points=pts)
        val, err = r.value, r.abs_err
    except ConvergenceError as exc:
        if exc.value is None:
            return None
        val, err = exc.value, exc.abs_err
    pre = 2 * _cpow(0.5 * z, nu) * rg / _SQRT_PI
    return pre * val, abs(pre) * err + EPS * 8 * abs(pre * val)


def _h_principal(nu, z):
    """H_nu on Re z >= 0."""
    v, e = _h_series(nu, z)
    if e <= _GOOD * abs(v) or abs(z) < 8:
        return v, e, "series"
    y = bessel_y(nu, z)
    best = (v, e, "series")
    k = _k_asymptotic(nu, z)
    if k is None or k[1] > _GOOD * abs(k[0]):
        kk = _k_integral(nu, z)
        if kk is not None and (k is None or kk[1] < k[1]):
            k = (kk[0], kk[1])
            tag = "integral"
        else:
            tag = "series"
    else:
        tag = "series"
    if k is not None:
        e2 = k[1] + y.abs_err_estimate
        if e2 < e:
            best = (y.value + k[0], e2, tag)
    return best


def struve_h(nu: float, z, rtol=None) -> SpecFunResult:
    """Struve function H_nu(z) for real order and complex argument."""
    nu = float(nu)
    z = complex(z)
    if z == 0:
        val = 0j if nu > -1 else complex(math.inf)
        return SpecFunResult(val, 0.0, "series")
    if z.real >= 0:
        v, e, tag = _h_principal(nu, z)
    else:
        # H_nu(z) = (z/2)^{nu+1} S(z^2) with S even: reuse the value at -z
        vm, em, tag = _h_principal(nu, -z)
        ratio = _cpow(0.5 * z, nu + 1) / _cpow(-0.5 * z, nu + 1)
        v, e = vm * ratio, em * abs(ratio)
    return SpecFunResult(v, e, tag).checked(rtol)


def struve_k(nu: float, z, rtol=None) -> SpecFunResult:
    """K_nu(z) = H_nu(z) - Y_nu(z), evaluated without cancellation where possible."""
    nu = float(nu)
    z = complex(z)
    cands = []
    if abs(z) >= 12:
        a = _k_asymptotic(nu, z)
        if a is not None:
            cands.append((a[0], a[1], "series"))
            if a[1] <= _GOOD * abs(a[0]):
                return SpecFunResult(*cands[0]).checked(rtol)
    if z.real >= 0:
        hv, he = _h_series(nu, z)
    else:
        h = struve_h(nu, z)
        hv, he = h.value, h.abs_err_estimate
    y = bessel_y(nu, z)
    v = hv - y.value
    e = he + y.abs_err_estimate
    cands.append((v, e, "series"))
    if e > _GOOD * abs(v) and abs(z) >= 4:
        kk = _k_integral(nu, z)
        if kk is not None:
            cands.append((kk[0], kk[1], "integral"))
    best = min(cands, key=lambda c: c[1])
    return SpecFunResult(*best).checked(rtol)
