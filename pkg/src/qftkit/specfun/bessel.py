"""Bessel functions J and Y of real order and complex argument."""

from __future__ import annotations

import cmath
import math

from ..errors import BranchPointError
from ._core import EPS, SpecFunResult, cospi, digamma_int, rgamma_real, sinpi


def _cpow(z, nu):
    return cmath.exp(nu * cmath.log(z)) if z != 0 else 0j


def _j_series(nu, z):
    """Ascending series; returns (value, abs_err)."""
    w = -0.25 * z * z
    t = complex(rgamma_real(nu + 1))
    s = t
    mag = abs(t)
    k = 0
    while True:
        k += 1
        t *= w / (k * (nu + k))
        s += t
        mag += abs(t)
        if abs(t) <= EPS * 0.01 * mag and k > abs(z) / 2:
            break
        if k > 2000:
            break
    pre = _cpow(0.5 * z, nu)
    return pre * s, abs(pre) * EPS * (4 * mag + k * abs(s))


def _j_miller(nu0, z, jmax):
    """J_{nu0+j}(z) for j = 0..jmax by backward recurrence (0 <= nu0 < 1).

    Returns (list of values, relative-to-scale abs error bound).
    """
    jmax = max(jmax, 1)
    m = max(jmax, int(abs(z))) + 30 + int(1.5 * abs(z))
    m += m % 2
    y = [0j] * (m + 2)
    y[m + 1] = 0j
    y[m] = 1e-30 + 0j
    for j in range(m, 0, -1):
        y[j - 1] = 2 * (nu0 + j) / z * y[j] - y[j + 1]
        if abs(y[j - 1]) > 1e250:
            for i in range(j - 1, m + 1):
                y[i] *= 1e-250
    # normalisation (z/2)^nu0 = sum_k (nu0+2k) Gamma(nu0+k)/k! J_{nu0+2k}
    ck = math.gamma(nu0 + 1)
    s = ck * y[0]
    mag = abs(s)
    r = ck  # Gamma(nu0+k)/k! at k = 1 equals Gamma(nu0+1)
    for k in range(1, m // 2 + 1):
        if k > 1:
            r *= (nu0 + k - 1) / k
        term = (nu0 + 2 * k) * r * y[2 * k]
        s += term
        mag += abs(term)
    scale = _cpow(0.5 * z, nu0) / s
    vals = [v * scale for v in y[: jmax + 1]]
    cond = mag / abs(s)
    return vals, cond


def bessel_j_chain(nu, z, count=2):
    """Return [J_nu, J_{nu+1}, ..., J_{nu+count-1}] with a common error bound."""
    z = complex(z)
    fl = math.floor(nu)
    nu0 = nu - fl
    lo = int(fl)
    hi = lo + count - 1
    vals, cond = _j_miller(nu0, z, max(hi, 1))
    if lo >= 0:
        out = vals[lo : hi + 1]
        bound = max(abs(v) for v in vals[: hi + 1])
        return out, EPS * 32 * cond * bound
    # downward recurrence into negative orders (dominant direction)
    cur = {0: vals[0], 1: vals[1]}
    for j in range(0, lo, -1):
        cur[j - 1] = 2 * (nu0 + j) / z * cur[j] - cur[j + 1]
    out = [cur[j] if j in cur else vals[j] for j in range(lo, hi + 1)]
    bound = max(abs(v) for v in cur.values())
    return out, EPS * 32 * cond * bound * (1 - lo)


def _bessel_j(nu, z):
    """(value, abs_err, tag) choosing the better of series and recurrence."""
    if nu < 0 and nu == round(nu):
        v, e, tag = _bessel_j(-nu, z)
        return (-v if int(-nu) % 2 else v), e, tag
    v1, e1 = _j_series(nu, z)
    if e1 <= 1e-14 * abs(v1) or abs(z) < 2:
        return v1, e1, "series"
    vals, e2 = bessel_j_chain(nu, z, 1)
    if e2 < e1:
        return vals[0], e2, "recurrence"
    return v1, e1, "series"


def bessel_j(nu: float, z) -> SpecFunResult:
    v, e, tag = _bessel_j(float(nu), complex(z))
    return SpecFunResult(v, e, tag)


def _y_integer(n, z):
    """Y_n for integer n >= 0 from the logarithmic series."""
    h = 0.5 * z
    w = h * h
    jn, ej, _ = _bessel_j(n, z)
    s1 = 0j
    mag1 = 0.0
    for k in range(n):
        t = math.factorial(n - k - 1) / math.factorial(k) * w**k
        s1 += t
        mag1 += abs(t)
    hn = _cpow(h, -n) if n else 1 + 0j
    s2 = 0j
    mag2 = 0.0
    t = 1.0 / math.factorial(n) + 0j
    k = 0
    while True:
        term = (digamma_int(k + 1) + digamma_int(n + k + 1)) * t
        s2 += term
        mag2 += abs(term)
        k += 1
        t *= -w / (k * (n + k))
        if abs(t) * (abs(math.log(k + 1)) + 1) * 4 <= EPS * 0.01 * mag2 and k > abs(z):
            break
        if k > 3000:
            break
    logh = cmath.log(h)
    hp = _cpow(h, n) if n else 1 + 0j
    val = -hn * s1 / math.pi + 2 / math.pi * logh * jn - hp * s2 / math.pi
    err = EPS * 8 * (abs(hn) * mag1 + abs(hp) * mag2 + abs(logh * jn)) + abs(logh) * ej
    return val, err


_EULER_GAMMA = 0.57721566490153286061


def _y_neumann(n, z):
    """Y_n from Neumann series in J_k (Miller chain) and forward recurrence in n.

    Y_0 = (2/pi)(ln(z/2)+gamma) J_0 - (4/pi) sum (-1)^k J_2k / k and Y_1 = -Y_0'.
    Free of the cancellation the log series suffers for large |z|.
    """
    kmax = int(abs(z)) + 40
    full, cond = _j_miller(0.0, z, 2 * kmax + 2)
    J = full
    L = cmath.log(0.5 * z) + _EULER_GAMMA
    s0 = 0j
    s1 = 0j
    mag = abs(L * J[0])
    for k in range(1, kmax + 1):
        sg = -1 if k % 2 else 1
        s0 += sg * J[2 * k] / k
        s1 += sg * (J[2 * k - 1] - J[2 * k + 1]) / k
        mag += abs(J[2 * k]) / k + abs(J[2 * k - 1]) / k
    y0 = 2 / math.pi * L * J[0] - 4 / math.pi * s0
    y1 = 2 / math.pi * (L * J[1] - J[0] / z) + 2 / math.pi * s1
    err = EPS * 32 * cond * (mag + abs(J[0] / z))
    if n == 0:
        return y0, err
    prev, cur = y0, y1
    for j in range(1, n):
        prev, cur = cur, 2 * j / z * cur - prev
        err = err * (1 + abs(2 * j / z))
    return cur, err + EPS * 4 * abs(cur) * n


_NEAR_INT = 0.01


def _y_near_integer(nu, n, z):
    """Lagrange interpolation in the order through n and n +- j/100 (j = 1..3).

    The J_{+-nu} combination is 0/0 next to an integer; every node used here is
    at least 0.01 away, so each costs under two digits.
    """
    nodes = [n + j * _NEAR_INT for j in range(-3, 4)]
    vals, err = [], 0.0
    for x in nodes:
        r = bessel_y(x, z) if x == n else _y_fractional(x, z)
        vals.append(r.value)
        err = max(err, r.abs_err_estimate)
    total = 0j
    leb = 0.0
    for i, xi in enumerate(nodes):
        w = 1.0
        for j, xj in enumerate(nodes):
            if j != i:
                w *= (nu - xj) / (xi - xj)
        total += w * vals[i]
        leb += abs(w)
    return SpecFunResult(total, leb * err + EPS * 8 * abs(total), "interpolation")


def bessel_y(nu: float, z) -> SpecFunResult:
    """Bessel function of the second kind (Neumann function) Y_nu(z)."""
    nu = float(nu)
    z = complex(z)
    if z == 0:
        raise BranchPointError("Y_nu is singular at z = 0")
    if nu == round(nu):
        n = int(abs(nu))
        v, e = _y_integer(n, z)
        tag = "series"
        if e > 1e-14 * abs(v) and abs(z) > 1:
            v2, e2 = _y_neumann(n, z)
            if e2 < e:
                v, e, tag = v2, e2, "neumann"
        if nu < 0 and n % 2:
            v = -v
        return SpecFunResult(v, e, tag)
    n = round(nu)
    if abs(nu - n) < _NEAR_INT * 0.999:
        return _y_near_integer(nu, n, z)
    return _y_fractional(nu, z)


def _y_fractional(nu, z):
    jp, ep, t1 = _bessel_j(nu, z)
    jm, em, t2 = _bessel_j(-nu, z)
    c = cospi(nu)
    s = sinpi(nu)
    val = (jp * c - jm) / s
    err = (abs(c) * ep + em) / abs(s) + EPS * 4 * (abs(jp * c) + abs(jm)) / abs(s)
    tag = "recurrence" if "recurrence" in (t1, t2) else "series"
    return SpecFunResult(val, err, tag)
