"""Gauss hypergeometric function 2F1 on the cut plane."""

from __future__ import annotations

import cmath
import math

from ..errors import BranchCutError, ConvergenceError, ParameterError
from ._core import EPS, SpecFunResult, gamma, is_nonpos_int, near_int, rgamma

# Series are summed directly only when the transformed argument is this small.
_SERIES_RADIUS = 0.75
# Distance from an integer below which a connection formula is considered degenerate.
_DEGENERATE = 0.05
_MAX_TERMS = 20000


def _series(a, b, c, w):
    """Sum the Gauss series at |w| < 1; returns (value, abs_err)."""
    term = 1 + 0j
    s = 1 + 0j
    mag = 1.0
    n = 0
    small = 0
    while n < _MAX_TERMS:
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * w
        n += 1
        s += term
        t = abs(term)
        mag += t
        if term == 0:
            break
        if t <= EPS * abs(s) * 0.1:
            small += 1
            # wait until the terms are also shrinking
            ratio = abs((a + n) * (b + n) / ((c + n) * (n + 1)) * w)
            if small >= 2 and ratio < 1:
                break
        else:
            small = 0
    else:
        raise ConvergenceError("2F1 series did not converge", value=s)
    return s, EPS * (4 * mag + n * abs(s))


def _polynomial(a, b, c, z):
    """Terminating series when a or b is a nonpositive integer."""
    m = -round((a if is_nonpos_int(a) else b).real)
    term = 1 + 0j
    s = 1 + 0j
    mag = 1.0
    for n in range(m):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        s += term
        mag += abs(term)
    return s, EPS * 4 * (mag + m * abs(s))


def _taylor_step(a, b, c, z0, f0, d0, h):
    """Advance (F, F') from z0 to z0 + h with the Taylor series of the ODE."""
    p0 = z0 * (1 - z0)
    p1 = 1 - 2 * z0
    q0 = c - (a + b + 1) * z0
    q1 = -(a + b + 1)
    ab = a * b
    cm1, cm0 = f0, d0  # c_0, c_1 (unscaled)
    # work with scaled coefficients e_n = c_n h^n to keep magnitudes tame
    e_prev, e_cur = cm1, cm0 * h
    val = e_prev + e_cur
    der = e_cur  # sum n e_n / h
    mag = abs(e_prev) + abs(e_cur)
    n = 0
    small = 0
    while n < 2000:
        # c_{n+2} from c_{n+1}, c_n ; scaled: e_{n+2} = c_{n+2} h^{n+2}
        e_next = -(
            (p1 * n * (n + 1) + q0 * (n + 1)) * e_cur * h
            + (-n * (n - 1) + q1 * n - ab) * e_prev * h * h
        ) / (p0 * (n + 1) * (n + 2))
        n += 1
        val += e_next
        der += (n + 1) * e_next
        mag += abs(e_next)
        e_prev, e_cur = e_cur, e_next
        if abs(e_next) <= EPS * 0.05 * mag and abs(e_prev) <= EPS * 0.05 * mag:
            small += 1
            if small >= 2:
                break
        else:
            small = 0
    return val, der / h, EPS * mag * 4


def _waypoints(z, side):
    s = side if side else (1 if z.imag >= 0 else -1)
    r = abs(z)
    if z.real > 0.5 and abs(z.imag) < 0.6:
        pts = [complex(0.35, 0.35 * s), complex(1.0, 0.6 * s)]
        if z.real > 1.0:
            pts.append(complex(z.real, 0.6 * s))
        pts.append(z)
        return pts
    start = 0.5 * z / r
    return [start, z]


def _continue(a, b, c, z, side):
    """Integrate the hypergeometric ODE from near 0 to z."""
    pts = _waypoints(z, side)
    z0 = pts[0]
    f0, e0 = _series(a, b, c, z0)
    d0, e1 = _series(a + 1, b + 1, c + 1, z0)
    d0 *= a * b / c
    e1 *= abs(a * b / c)
    err = e0 + e1
    fmax = abs(f0)
    steps = 0
    for target in pts[1:]:
        while z0 != target:
            rad = min(abs(z0), abs(1 - z0))
            h = target - z0
            if abs(h) > 0.5 * rad:
                h = h * (0.5 * rad / abs(h))
                znew = z0 + h
            else:
                znew = target
            f0, d0, e = _taylor_step(a, b, c, z0, f0, d0, znew - z0)
            z0 = znew
            err += e
            fmax = max(fmax, abs(f0), abs(d0 * z0))
            steps += 1
            if steps > 5000:
                raise ConvergenceError("2F1 continuation took too many steps", value=f0)
    err = err + EPS * fmax * (steps + 1) * 16
    return f0, err


def _via_one_minus(a, b, c, z):
    """1 - z connection (non-integer c - a - b)."""
    w = 1 - z
    s = c - a - b
    f1, e1 = _series(a, b, 1 - s, w)
    f2, e2 = _series(c - a, c - b, 1 + s, w)
    g = gamma(c)
    k1 = g * gamma(s) * rgamma(c - a) * rgamma(c - b)
    k2 = g * gamma(-s) * rgamma(a) * rgamma(b) * cmath.exp(s * cmath.log(w))
    val = k1 * f1 + k2 * f2
    err = abs(k1) * e1 + abs(k2) * e2 + EPS * 8 * (abs(k1 * f1) + abs(k2 * f2))
    return val, err


def _via_inverse(a, b, c, z):
    """1/z connection (non-integer b - a)."""
    w = 1 / z
    lmz = cmath.log(-z)
    g = gamma(c)
    f1, e1 = _series(a, a - c + 1, a - b + 1, w)
    f2, e2 = _series(b, b - c + 1, b - a + 1, w)
    k1 = g * gamma(b - a) * rgamma(b) * rgamma(c - a) * cmath.exp(-a * lmz)
    k2 = g * gamma(a - b) * rgamma(a) * rgamma(c - b) * cmath.exp(-b * lmz)
    val = k1 * f1 + k2 * f2
    err = abs(k1) * e1 + abs(k2) * e2 + EPS * 8 * (abs(k1 * f1) + abs(k2 * f2))
    return val, err


def _via_inv_one_minus(a, b, c, z):
    """1/(1 - z) connection (non-integer b - a)."""
    w = 1 / (1 - z)
    l1z = cmath.log(1 - z)
    g = gamma(c)
    f1, e1 = _series(a, c - b, a - b + 1, w)
    f2, e2 = _series(b, c - a, b - a + 1, w)
    k1 = g * gamma(b - a) * rgamma(b) * rgamma(c - a) * cmath.exp(-a * l1z)
    k2 = g * gamma(a - b) * rgamma(a) * rgamma(c - b) * cmath.exp(-b * l1z)
    val = k1 * f1 + k2 * f2
    err = abs(k1) * e1 + abs(k2) * e2 + EPS * 8 * (abs(k1 * f1) + abs(k2 * f2))
    return val, err


def _via_one_minus_inv(a, b, c, z):
    """1 - 1/z connection (non-integer c - a - b)."""
    w = 1 - 1 / z
    s = c - a - b
    lz = cmath.log(z)
    l1z = cmath.log(1 - z)
    g = gamma(c)
    f1, e1 = _series(a, a - c + 1, 1 - s, w)
    f2, e2 = _series(c - a, 1 - a, 1 + s, w)
    k1 = g * gamma(s) * rgamma(c - a) * rgamma(c - b) * cmath.exp(-a * lz)
    k2 = g * gamma(-s) * rgamma(a) * rgamma(b) * cmath.exp(s * l1z + (a - c) * lz)
    val = k1 * f1 + k2 * f2
    err = abs(k1) * e1 + abs(k2) * e2 + EPS * 8 * (abs(k1 * f1) + abs(k2 * f2))
    return val, err


def _via_pfaff(a, b, c, z):
    w = z / (z - 1)
    f, e = _series(a, c - b, c, w)
    k = cmath.exp(-a * cmath.log(1 - z))
    return k * f, abs(k) * e + EPS * 4 * abs(k * f)


def hyp2f1(a, b, c, z, side: int = 0) -> SpecFunResult:
    """Gauss 2F1(a, b; c; z) continued to the plane cut along [1, inf).

    ``side`` = +1 / -1 selects the boundary value from above / below when z is
    real and greater than 1; with side = 0 such z raise BranchCutError.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if is_nonpos_int(c) and not (
        (is_nonpos_int(a) and a.real >= c.real) or (is_nonpos_int(b) and b.real >= c.real)
    ):
        raise ParameterError(f"2F1 undefined: c = {c.real:g} is a nonpositive integer")
    if z == 0:
        return SpecFunResult(1 + 0j, 0.0, "series")
    if is_nonpos_int(a) or is_nonpos_int(b):
        v, e = _polynomial(a, b, c, z)
        return SpecFunResult(v, e, "series")
    on_cut = z.imag == 0 and z.real >= 1
    if on_cut and z.real == 1:
        s = c - a - b
        if s.real <= 0:
            raise BranchCutError("2F1 diverges at z = 1 unless Re(c-a-b) > 0")
        v = gamma(c) * gamma(s) * rgamma(c - a) * rgamma(c - b)
        return SpecFunResult(v, 16 * EPS * abs(v), "series")
    if on_cut:
        if side not in (1, -1):
            raise BranchCutError(f"z = {z.real:g} lies on the cut [1, inf); pass side=+1 or -1")
        v, e = _continue(a, b, c, z, side)
        return SpecFunResult(v, e, "continuation")

    cands = [(abs(z), "direct"), (abs(z / (z - 1)), "pfaff")]
    if not near_int(c - a - b, _DEGENERATE):
        cands.append((abs(1 - z), "one_minus"))
        cands.append((abs(1 - 1 / z), "one_minus_inv"))
    if not near_int(b - a, _DEGENERATE):
        cands.append((abs(1 / z), "inverse"))
        cands.append((abs(1 / (1 - z)), "inv_one_minus"))
    rho, how = min(cands, key=lambda t: t[0])
    if rho > _SERIES_RADIUS:
        v, e = _continue(a, b, c, z, 0)
        return SpecFunResult(v, e, "continuation")
    if how == "direct":
        v, e = _series(a, b, c, z)
        return SpecFunResult(v, e, "series")
    if how == "pfaff":
        v, e = _via_pfaff(a, b, c, z)
        return SpecFunResult(v, e, "series")
    fn = {
        "one_minus": _via_one_minus,
        "one_minus_inv": _via_one_minus_inv,
        "inverse": _via_inverse,
        "inv_one_minus": _via_inv_one_minus,
    }[how]
    v, e = fn(a, b, c, z)
    return SpecFunResult(v, e, "continuation")
