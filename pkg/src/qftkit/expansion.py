"""(q-1) expansion of the q-exponential kernel and the first-order transform.

Also holds the closed form of the half-line integrals
G(k, beta) = int_0^inf f(x)^beta e^{ikx} dx of a q'-Gaussian in terms of
K_nu = H_nu - Y_nu (Struve minus Neumann).
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import BudgetError, ConsistencyWarning, DomainError, ValidityError
from .qcore import QGaussianParams, QIndex, as_qindex, q_exponential_c
from .qft import QFTInput, transform_values
from .quad import TransformResult, integrate_halfline, richardson
from .specfun import gamma, struve_k

TERM_BUDGET = 100_000


@dataclass(frozen=True)
class SeriesTruncation:
    order_n: int
    validity_radius: float = 0.9

    def __post_init__(self):
        if self.order_n < 0:
            raise ValueError("order_n must be >= 0")
        if not 0 < self.validity_radius < 1:
            raise ValueError("validity_radius must lie in (0, 1)")


@lru_cache(maxsize=None)
def g_coeff_table(n_max: int):
    """Exact coefficients c[n][m] = (n-m+1)^{m-1}/m! of u^{n-m+1} L^m in g_n."""
    table = {}
    for n in range(n_max + 1):
        for m in range(n + 1):
            table[n, m] = Fraction(n - m + 1) ** (m - 1) / math.factorial(m)
    return table


def g_coeff(x, k, n: int, f_at_x) -> complex:
    """Coefficient of (q-1)^n in the exponent of e_q(ikx f^{q-1})."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if not f_at_x > 0:
        raise DomainError("f(x) must be positive (its logarithm is taken)")
    u = 1j * complex(k) * x
    L = math.log(f_at_x)
    return sum(
        (n - m + 1) ** (m - 1) / math.factorial(m) * u ** (n - m + 1) * L**m for m in range(n + 1)
    )


def _compositions(s, parts):
    """Ordered tuples of ``parts`` positive integers summing to s."""
    if parts == 1:
        yield (s,)
        return
    for first in range(1, s - parts + 2):
        for rest in _compositions(s - first, parts - 1):
            yield (first, *rest)


def l_term(x, k, n: int, q, f_at_x, cutoff_s: int, budget: int = TERM_BUDGET) -> complex:
    """(1/n!) sum_{s=n}^{cutoff} sum_{s_1+..+s_n=s} prod_j g(s_j) (q-1)^s."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if cutoff_s < n:
        raise ValueError("cutoff_s must be >= n")
    q = as_qindex(q)
    e = q.eps
    if e == 0:
        return 0j
    g = [0j] + [g_coeff(x, k, j, f_at_x) for j in range(1, cutoff_s + 1)]
    total = 0j
    used = 0
    for s in range(n, cutoff_s + 1):
        inner = 0j
        for comp in _compositions(s, n):
            used += 1
            if used > budget:
                raise BudgetError(f"l_term exceeded {budget} product terms", value=total)
            p = 1 + 0j
            for sj in comp:
                p *= g[sj]
            inner += p
        total += inner * e**s
    return total / math.factorial(n)


def h_series(x, k, q, trunc: SeriesTruncation, f_at_x) -> complex:
    """e^{ikx}[1 + sum_{n=1}^{N} l(x,k,n)] truncated at (q-1)^N."""
    q = as_qindex(q)
    base = cmath.exp(1j * complex(k) * x)
    if q.eps == 0 or trunc.order_n == 0:
        return base
    if not f_at_x > 0:
        raise DomainError("f(x) must be positive")
    w = abs(q.eps * complex(k) * x * f_at_x**q.eps)
    if w >= trunc.validity_radius:
        raise ValidityError(f"|(1-q) k x f^(q-1)| = {w:.3g} outside the radius {trunc.validity_radius}")
    N = trunc.order_n
    corr = sum(l_term(x, k, n, q, f_at_x, N) for n in range(1, N + 1))
    return base * (1 + corr)


def kernel_exact(x, k, q, f_at_x) -> complex:
    """The q-exponential kernel the series approximates."""
    q = as_qindex(q)
    return q_exponential_c(1j * complex(k) * x * f_at_x**q.eps, q)


# ------------------------------------------------------------ first order


def _first_order_direct(f, q: QIndex, k: complex, tol):
    e = q.eps
    side = "positive" if k.imag > 0 else "negative"
    sign = 1.0 if k.imag > 0 else -1.0

    def g(x):
        fx = f(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            lf = np.where(fx > 0, np.log(np.where(fx > 0, fx, 1.0)), 0.0)
        u = 1j * k * x
        return fx * np.exp(u) * (1 + e * (0.5 * u * u + u * lf))

    lo, hi = f.support
    edge = hi if side == "positive" else -lo
    r = integrate_halfline(
        g, side, f.decay, tol, rel_tol=1e-13, scale=f.scale, extent=edge if math.isfinite(edge) else None
    )
    return sign * r.value, r.abs_err, r.n_evals


def G_values(f, ks, betas, tol=1e-13):
    """G(k, beta) = +-int over the half-line selected by Im k of f^beta e^{ikx}."""
    ks = np.asarray(ks, dtype=complex)
    betas = np.asarray(betas, dtype=float)
    up = ks.imag > 0
    if not (np.all(up) or np.all(~up)):
        raise DomainError("all k must lie in the same half-plane")
    side = "positive" if up[0] else "negative"
    sign = 1.0 if up[0] else -1.0

    def g(x):
        fx = f(x)
        with np.errstate(divide="ignore"):
            lf = np.where(fx > 0, np.log(np.where(fx > 0, fx, 1.0)), -np.inf)
        return np.exp(betas[None, :] * lf[:, None] + 1j * x[:, None] * ks[None, :])

    lo, hi = f.support
    edge = hi if side == "positive" else -lo
    r = integrate_halfline(
        g, side, f.decay, tol, rel_tol=1e-14, scale=f.scale, extent=edge if math.isfinite(edge) else None
    )
    return sign * np.asarray(r.value), np.asarray(r.abs_err), r.n_evals


def _first_order_derivative_form(f, q: QIndex, k: complex, hk=None, hb=1e-5):
    """G(k) + (q-1)[k^2/2 G_kk + k G_k beta] with central differences."""
    hk = hk if hk is not None else 1e-4 * max(1.0, abs(k))
    ks = [k, k + hk, k - hk, k + hk, k + hk, k - hk, k - hk]
    bs = [1.0, 1.0, 1.0, 1.0 + hb, 1.0 - hb, 1.0 + hb, 1.0 - hb]
    v, err, n = G_values(f, ks, bs)
    G0, Gp, Gm, Gpp, Gpm, Gmp, Gmm = v
    Gkk = (Gp - 2 * G0 + Gm) / hk**2
    Gkb = (Gpp - Gpm - Gmp + Gmm) / (4 * hk * hb)
    val = G0 + q.eps * (0.5 * k * k * Gkk + k * Gkb)
    return val, {"G": G0, "G_kk": Gkk, "G_kbeta": Gkb}, n


def qft_first_order(inp: QFTInput, k, tol=1e-10) -> TransformResult:
    """O(q-1) transform by direct quadrature, cross-checked by the derivative form."""
    k = complex(k)
    if k.imag == 0:
        raise DomainError("qft_first_order needs Im k != 0")
    q = inp.q
    a, ea, na = _first_order_direct(inp.f, q, k, tol * 1e-2)
    b, parts, nb = _first_order_derivative_form(inp.f, q, k)
    gap = abs(a - b)
    if gap > 100 * tol:
        warnings.warn(f"first-order forms differ by {gap:.3g} at k={k}", ConsistencyWarning, stacklevel=2)
    info = {"derivative_form": complex(b), "consistency": gap, **parts}
    return TransformResult(complex(a), float(ea), na + nb, info)


# ------------------------------------------------- q'-Gaussian closed forms


def _nu(p: QGaussianParams, beta):
    return beta / (1.0 - p.q) + 0.5


def _phi_direct(nu, z):
    """Gamma(nu+1/2) (2/z)^nu K_nu(z) and an error estimate."""
    kv = struve_k(nu, z)
    pre = gamma(nu + 0.5) * cmath.exp(nu * cmath.log(2 / z))
    return pre * kv.value, abs(pre) * kv.abs_err_estimate


# distance to a pole of Gamma(nu + 1/2) below which the symmetric ladder is used
_POLE_GAP = 0.05
_H_LADDER = (0.08, 0.04, 0.02)


def _phi(nu, z):
    """Entire-in-nu combination Gamma(nu+1/2)(2/z)^nu K_nu(z).

    Where Gamma(nu+1/2) has a pole K_nu vanishes identically; the value there
    is the limit, obtained from symmetric evaluations nu +- h extrapolated in h^2.
    """
    a = nu + 0.5
    r = round(a)
    if r <= 0 and abs(a - r) < _POLE_GAP:
        vals = []
        errs = []
        for h in _H_LADDER:
            p1, e1 = _phi_direct(nu + h, z)
            p2, e2 = _phi_direct(nu - h, z)
            vals.append(0.5 * (p1 + p2))
            errs.append(0.5 * (e1 + e2))
        v, e = richardson(_H_LADDER, vals, powers=[2, 4])
        return complex(v), float(e) + max(errs) * 4
    return _phi_direct(nu, z)


def _G_half(p: QGaussianParams, k: complex, beta: float):
    """Closed-form G on the half-plane of k (k may sit on the real axis as a boundary value)."""
    s = p.qprime.eps * p.alpha
    rs = math.sqrt(s)
    nu = _nu(p, beta)
    cb = p.c_norm**beta
    upper = k.imag > 0 or (k.imag == 0 and math.copysign(1.0, k.imag) > 0)
    if k == 0:
        half = cb / rs * math.sqrt(math.pi) * gamma(-nu).real / (2 * gamma(0.5 - nu).real)
        return (half if upper else -half), 1e-15 * abs(half)
    z = (-1j * k if upper else 1j * k) / rs
    ph, e = _phi(nu, z)
    val = cb * 0.5 * math.sqrt(math.pi) * ph / rs
    err = cb * 0.5 * math.sqrt(math.pi) * e / rs
    return (val if upper else -val), err


def gaussian_G_closed(p: QGaussianParams, k, beta: float = 1.0) -> TransformResult:
    """Closed form of G(k, beta) for the q'-Gaussian ``p``.

    Off the axis this is the half-plane value.  For real k it is the cut
    G(k + i0) - G(k - i0), i.e. the full-line integral of f^beta e^{ikx}.
    """
    if beta < 1:
        raise DomainError("beta must be >= 1")
    if p.qprime.is_classical:
        raise DomainError("closed form needs q' > 1")
    k = complex(k)
    if k.imag != 0:
        v, e = _G_half(p, k, beta)
        return TransformResult(v, e, 1)
    up, e1 = _G_half(p, complex(k.real, 0.0), beta)
    lo, e2 = _G_half(p, complex(k.real, -0.0), beta)
    return TransformResult(up - lo, e1 + e2, 2, {"upper": up, "lower": lo})


def gaussian_G_printed(p: QGaussianParams, k, beta: float = 1.0) -> complex:
    """Struve/Neumann expression with the literal Gamma prefactor, kept for comparison.

    It agrees with :func:`gaussian_G_closed` only when (q'-1) alpha = 1.
    """
    k = complex(k)
    qp = p.q
    nu = _nu(p, beta)
    s = (qp - 1) * p.alpha
    pre = p.c_norm**beta * 0.5 * math.sqrt(math.pi) * gamma((beta + 1 - qp) / (1 - qp)) / s ** (beta / (1 - qp))
    if k.imag > 0:
        base = 2 / ((1 - qp) * 1j * p.alpha * k)
        z = 1j * k / ((1 - qp) * p.alpha)
        sign = 1.0
    else:
        base = 2 / ((qp - 1) * 1j * p.alpha * k)
        z = 1j * k / ((qp - 1) * p.alpha)
        sign = -1.0
    return sign * pre * cmath.exp(nu * cmath.log(base)) * struve_k(nu, z).value


def G_quadrature(p: QGaussianParams, k, beta: float = 1.0, tol=1e-13) -> TransformResult:
    """Half-line quadrature oracle for G(k, beta) of the q'-Gaussian."""
    from .densities import q_gaussian

    f = q_gaussian(p.q, p.alpha)
    v, e, n = G_values(f, [complex(k)], [beta], tol)
    return TransformResult(complex(v[0]), float(e[0]), n)


def qft_first_order_gaussian(p: QGaussianParams, q, k, hk=None, hb=1e-4) -> complex:
    """First-order transform of a q'-Gaussian from the closed form of G."""
    q = as_qindex(q)
    k = complex(k)
    hk = hk if hk is not None else 1e-3 * max(1.0, abs(k))
    G = lambda kk, b=1.0: gaussian_G_closed(p, kk, b).value
    D = lambda h: (G(k + h) - 2 * G(k) + G(k - h)) / h**2
    Gkk, _ = richardson([hk, hk / 2], [D(hk), D(hk / 2)], powers=[2])
    # beta >= 1 only, so the beta derivative is one-sided (second order)
    Gb = lambda kk: (-3 * G(kk) + 4 * G(kk, 1 + hb) - G(kk, 1 + 2 * hb)) / (2 * hb)
    Gkb = (Gb(k + hk) - Gb(k - hk)) / (2 * hk)
    return complex(G(k) + q.eps * (0.5 * k * k * complex(Gkk) + k * Gkb))
