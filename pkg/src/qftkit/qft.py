"""Complex q-Fourier transform, its real-axis cut, inversion and helpers.

Conventions: the forward kernel is e_q(i k x f^{q-1}) (e^{+ikx} at q = 1) with
no prefactor; the inverse uses e^{-ikx}/(2 pi) on the two-leg contour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, ExtrapolationError, FitError
from .qcore import QIndex, _clog1p, as_qindex
from .quad import (
    ContourSpec,
    DensityFunction,
    FourierKernel,
    TransformResult,
    integrate_contour,
    integrate_halfline,
    integrate_interval,
    richardson,
)

DEFAULT_TOL = 1e-11
DELTA_LADDER = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
EPS_LADDER = (1e-2, 5e-3, 2.5e-3)


@dataclass
class SectionallyAnalytic:
    """A pair of half-plane analytic functions; both accept arrays of k."""

    upper: Callable
    lower: Callable
    growth_degree: int | None = None

    def __call__(self, k):
        k = np.asarray(k, dtype=complex)
        out = np.empty(k.shape, complex)
        up = k.imag > 0
        lo = k.imag < 0
        if np.any(k.imag == 0):
            raise DomainError("sectionally analytic functions are not defined on the real axis")
        if np.any(up):
            out[up] = self.upper(k[up])
        if np.any(lo):
            out[lo] = self.lower(k[lo])
        return out[()] if out.ndim == 0 else out

    def cut(self, k, delta=0.0):
        """F(k + i delta) - F(k - i delta)."""
        k = np.asarray(k, dtype=float)
        return self.upper(k + 1j * delta) - self.lower(k - 1j * delta)


@dataclass(frozen=True)
class QFTInput:
    f: DensityFunction
    q: QIndex

    def __post_init__(self):
        object.__setattr__(self, "q", as_qindex(self.q))


def kernel_integrand(f: DensityFunction, q: QIndex, ks):
    """x -> f(x) e_q(i k x f(x)^{q-1}) for every k in ``ks``; shape (n_x, n_k)."""
    q = as_qindex(q)
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))

    if q.is_classical:
        def g(x):
            fx = f(x)
            return fx[:, None] * np.exp(1j * x[:, None] * ks[None, :])
        return g

    e = q.eps

    def g(x):
        fx = f(x)
        fe = np.power(fx, e)
        w = -1j * e * (x * fe)[:, None] * ks[None, :]
        return fx[:, None] * np.exp(_clog1p(w) / (-e))

    return g


def _half(f: DensityFunction, q: QIndex, ks, side: str, tol: float, rel_tol: float):
    """Integral of the transform integrand over one half-line, vectorised in k."""
    g = kernel_integrand(f, q, ks)
    lo, hi = f.support
    edge = hi if side == "positive" else -lo
    pts = tuple(abs(b) for b in f.breakpoints if (b > 0 if side == "positive" else b < 0))
    if edge <= 0:
        return np.zeros(len(ks), complex), np.zeros(len(ks)), 1
    extent = edge if math.isfinite(edge) else None
    r = integrate_halfline(
        lambda x: g(x), side, f.decay, tol, rel_tol=rel_tol, scale=f.scale, extent=extent, points=pts
    )
    return np.asarray(r.value), np.asarray(r.abs_err), r.n_evals


def transform_values(f: DensityFunction, q, ks, tol=DEFAULT_TOL, rel_tol=1e-12):
    """Complex transform at many off-axis k; returns (values, errs, n_evals)."""
    q = as_qindex(q)
    ks = np.atleast_1d(np.asarray(ks, dtype=complex))
    if np.any(ks.imag == 0):
        raise DomainError("complex transform needs Im k != 0; use qft_real_cut on the axis")
    vals = np.empty(len(ks), complex)
    errs = np.empty(len(ks))
    n = 0
    up = ks.imag > 0
    if np.any(up):
        v, e, m = _half(f, q, ks[up], "positive", tol, rel_tol)
        vals[up], errs[up] = v, e
        n += m
    if np.any(~up):
        v, e, m = _half(f, q, ks[~up], "negative", tol, rel_tol)
        vals[~up], errs[~up] = -v, e
        n += m
    return vals, errs, n


def real_axis_values(f: DensityFunction, q, ks, tol=DEFAULT_TOL, rel_tol=1e-12):
    """Direct full-line integral at real k (absolutely convergent for 1 < q < 2)."""
    q = as_qindex(q)
    ks = np.atleast_1d(np.asarray(ks, dtype=float)).astype(complex)
    v1, e1, n1 = _half(f, q, ks, "positive", tol, rel_tol)
    v2, e2, n2 = _half(f, q, ks, "negative", tol, rel_tol)
    return v1 + v2, e1 + e2, n1 + n2


def qft_complex(inp: QFTInput, k, tol=DEFAULT_TOL) -> TransformResult:
    """Complex q-Fourier transform at a single off-axis k."""
    k = complex(k)
    if k.imag == 0:
        raise DomainError("k is real; use qft_real_cut")
    v, e, n = transform_values(inp.f, inp.q, [k], tol)
    return TransformResult(complex(v[0]), float(e[0]), n)


def transform_family(f: DensityFunction, tol=DEFAULT_TOL):
    """q -> SectionallyAnalytic built from qft_complex of ``f``."""

    def build(q):
        q = as_qindex(q)

        def upper(k):
            return transform_values(f, q, k, tol)[0]

        def lower(k):
            return transform_values(f, q, k, tol)[0]

        return SectionallyAnalytic(upper, lower)

    return build


def qft_real_direct(inp: QFTInput, k, tol=DEFAULT_TOL) -> TransformResult:
    """Full-line quadrature of the real-axis transform at real k."""
    v, e, n = real_axis_values(inp.f, inp.q, [float(k)], tol)
    return TransformResult(complex(v[0]), float(e[0]), n)


def qft_real_cut(inp: QFTInput, k, deltas=DELTA_LADDER, tol=1e-7) -> TransformResult:
    """F(k + i0) - F(k - i0) by Richardson extrapolation over a delta ladder."""
    k = float(k)
    d = np.asarray(deltas, dtype=float)
    ks = np.concatenate([k + 1j * d, k - 1j * d])
    vals, errs, n = transform_values(inp.f, inp.q, ks, tol=min(1e-12, tol * 1e-3))
    m = len(d)
    ladder = vals[:m] - vals[m:]
    v, e = richardson(d, ladder)
    e = float(e) + float(np.max(errs)) * 2
    if e > tol:
        raise ExtrapolationError(f"delta ladder did not settle at k={k:g} (err {e:.3g})", value=complex(v), abs_err=e)
    return TransformResult(complex(v), e, n, {"ladder": ladder})


def qft_inverse(Fq, x, eps_ladder=EPS_LADDER, spec: ContourSpec | None = None, tol=None) -> TransformResult:
    """Reconstruct f(x) from the family q -> F(., q) by contour inversion.

    For each eps the contour integral (1/2pi) oint F(k, 1+eps) e^{-ikx} dk is
    computed and the ladder is extrapolated to eps -> 0.  ``x`` may be an array.
    A ladder consisting of the single value 0 evaluates at q = 1 directly.
    """
    spec = spec or ContourSpec(tol=1e-7)
    kern = FourierKernel(x, 1.0 / (2 * math.pi))
    eps = [float(e) for e in eps_ladder]
    vals, errs, n = [], [], 0
    for e in eps:
        r = integrate_contour(Fq(1.0 + e), kern, spec)
        vals.append(np.asarray(r.value))
        errs.append(np.asarray(r.abs_err))
        n += r.n_evals
    if len(eps) == 1:
        v, ext = vals[0], np.zeros_like(errs[0])
    else:
        v, ext = richardson(eps, vals)
    err = ext + np.max(errs, axis=0)
    if tol is not None and np.any(err > tol):
        raise ExtrapolationError(f"epsilon ladder did not settle (err {np.max(err):.3g})", value=v, abs_err=float(np.max(err)))
    if np.ndim(x) == 0:
        return TransformResult(complex(np.ravel(v)[0]), float(np.ravel(err)[0]), n, {"ladder": [complex(np.ravel(a)[0]) for a in vals]})
    return TransformResult(v, err, n, {"ladder": vals})


def check_lambda_membership(f: DensityFunction, q, k, *, x_max=1e12, n=241, margin=0.02):
    """Tail test for absolute integrability of the transform integrand.

    Samples |f(x) e_q(ikx f^{q-1})| on a geometric grid out to ``x_max`` on both
    half-lines and fits the log-log slope over the last three decades.  Returns
    (ok, diagnostic) where the diagnostic holds the fitted exponents.
    """
    q = as_qindex(q)
    g = kernel_integrand(f, q, [complex(k)])
    xs = np.geomspace(1.0, x_max, n) * f.scale
    diag = {}
    ok = True
    for name, sgn in (("positive", 1.0), ("negative", -1.0)):
        with np.errstate(all="ignore"):
            v = np.abs(g(sgn * xs)[:, 0])
        if not np.all(np.isfinite(v)):
            diag[name] = {"exponent": math.inf, "ok": False}
            ok = False
            continue
        tail = xs >= x_max * f.scale * 1e-3
        vt = v[tail]
        if np.all(vt == 0):
            diag[name] = {"exponent": -math.inf, "ok": True}
            continue
        pos = vt > 0
        if pos.sum() < 3:
            diag[name] = {"exponent": -math.inf, "ok": True}
            continue
        slope = float(np.polyfit(np.log(xs[tail][pos]), np.log(vt[pos]), 1)[0])
        good = slope < -1.0 - margin
        diag[name] = {"exponent": slope, "ok": good}
        ok &= good
    return bool(ok), diag


def dirac_density_rep(f, z, tol=1e-11) -> TransformResult:
    """(1/(2 pi i)) int f(t)/(t - z) dt for Im z != 0."""
    z = complex(z)
    if z.imag == 0:
        raise DomainError("Dirac representation needs Im z != 0")
    if not isinstance(f, DensityFunction):
        f = DensityFunction(f)

    def g(t):
        return f(t) / (t - z)

    lo, hi = f.support
    c = z.real
    total = 0j
    err = 0.0
    n = 0
    pts = tuple(f.breakpoints)
    if math.isfinite(lo) and math.isfinite(hi):
        inner = tuple(p for p in (*pts, c) if lo < p < hi)
        r = integrate_interval(g, lo, hi, tol, rel_tol=1e-12, points=inner)
        total, err, n = r.value, r.abs_err, r.n_evals
    else:
        for side, edge in (("positive", hi), ("negative", -lo)):
            sp = tuple(abs(p) for p in (*pts, c) if (p > 0 if side == "positive" else p < 0))
            ext = edge if math.isfinite(edge) else None
            r = integrate_halfline(g, side, f.decay, tol, rel_tol=1e-12, scale=f.scale, extent=ext, points=sp)
            total += r.value
            err += r.abs_err
            n += r.n_evals
    pre = 1.0 / (2j * math.pi)
    return TransformResult(pre * total, abs(pre) * err, n)


def dirac_boundary_value(f, k, deltas=DELTA_LADDER, tol=1e-6) -> TransformResult:
    """rep(k + i0) - rep(k - i0), extrapolated over a delta ladder."""
    vals = []
    n = 0
    for d in deltas:
        a = dirac_density_rep(f, complex(k, d))
        b = dirac_density_rep(f, complex(k, -d))
        vals.append(a.value - b.value)
        n += a.n_evals + b.n_evals
    v, e = richardson(deltas, vals)
    if float(e) > tol:
        raise ExtrapolationError(f"boundary ladder did not settle (err {float(e):.3g})", value=complex(v), abs_err=float(e))
    return TransformResult(complex(v), float(e), n)


def growth_check(F: SectionallyAnalytic, contour: ContourSpec | None = None, degrees=range(0, 9), n=48):
    """Fit |F(k)| <= C |k|^p on both legs; returns (C, p) and sets F.growth_degree.

    p is the smallest admissible degree at least as large as the log-log slope
    of |F| over the outer part of the legs.
    """
    contour = contour or ContourSpec(truncation=50.0)
    zeta, T = contour.zeta, contour.T
    ts = np.geomspace(1.0, T, n)
    ks_u = np.concatenate([ts, -ts]) + 1j * zeta
    ks_l = np.concatenate([ts, -ts]) - 1j * zeta
    vals = np.abs(np.concatenate([np.asarray(F.upper(ks_u)), np.asarray(F.lower(ks_l))]))
    ks = np.concatenate([ks_u, ks_l])
    mod = np.abs(ks)
    if not np.all(np.isfinite(vals)):
        raise FitError("non-finite values on the contour")
    outer = mod >= math.sqrt(T * max(1.0, zeta))
    nz = outer & (vals > 0)
    degrees = list(degrees)
    if nz.sum() < 4:
        p = degrees[0]
        C = float(np.max(vals / mod**p)) if np.any(vals > 0) else 0.0
        F.growth_degree = p
        return C, p
    lm, lv = np.log(mod[nz]), np.log(vals[nz])
    slope = float(np.polyfit(lm, lv, 1)[0])
    # a steepening slope on the outermost quarter signals super-polynomial growth
    far = lm >= np.quantile(lm, 0.75)
    far_slope = float(np.polyfit(lm[far], lv[far], 1)[0]) if far.sum() >= 4 else slope
    need = max(slope, far_slope)
    cands = [p for p in degrees if p >= need - 0.05]
    if not cands or far_slope > slope + 1.0:
        raise FitError(f"|F| grows faster than |k|^{max(degrees)} (slope {need:.2f})", value=need)
    p = cands[0]
    C = float(np.max(vals / mod**p))
    F.growth_degree = p
    return C, p
