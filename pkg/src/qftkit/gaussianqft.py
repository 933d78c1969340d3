"""Fixed-q closed form of the q-Fourier transform of the q-Gaussian.

With gamma = (C_q^{q-1}/2) sqrt((q-1)/alpha) and mu = 1/(1-q) + 1/2 the upper
half-plane transform is

    A 2^{-mu-1} (z^2 - 1)^{mu/2} P^mu_{-1-mu}(z),   z = -i gamma k,
    A = C_q Gamma(-mu) / sqrt((q-1) alpha),

continued analytically from Re k > 0 (the lower half-plane uses z = i gamma k
with an overall minus sign).  Its real-axis cut is the elementary
(1 + gamma^2 k^2)^mu, a q'-Gaussian in k with q' = (1+q)/(3-q).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import BranchError, DomainError
from .qcore import QIndex, as_qindex, q_gaussian_norm
from .quad import TransformResult
from .specfun import gamma, hyp2f1, legendre_p
from .specfun._core import EPS


@dataclass(frozen=True)
class FixedQParams:
    q: QIndex
    alpha: float
    gamma: float
    mu: float
    c_norm: float


def fixed_q_params(q, alpha: float) -> FixedQParams:
    q = as_qindex(q)
    if q.q == 1.0 or q.is_classical:
        raise DomainError("fixed-q closed form needs q > 1; use the classical Gaussian transform")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    c = q_gaussian_norm(q, alpha)
    g = 0.5 * c ** (q.q - 1) * math.sqrt((q.q - 1) / alpha)
    mu = 1.0 / (1.0 - q.q) + 0.5
    return FixedQParams(q, float(alpha), g, mu, c)


def _amplitude(p: FixedQParams) -> float:
    return p.c_norm * gamma(-p.mu).real / math.sqrt(p.q.eps * p.alpha)


def _legendre_block(p: FixedQParams, z: complex):
    """(z-1)^{mu/2} (z+1)^{mu/2} P^mu_{-1-mu}(z), continued from Re z > 0, Im z < 0.

    On the segment 0 < z < 1 the value is the boundary value from below.
    """
    mu = p.mu
    side = 0
    if z.imag == 0 and -1 < z.real < 1:
        side = -1
        lzm = complex(math.log(1 - z.real), -math.pi)
    else:
        lzm = cmath.log(z - 1)
    P = legendre_p(mu, -1 - mu, z, side=side)
    fac = cmath.exp(0.5 * mu * (lzm + cmath.log(z + 1)))
    return fac * P.value, abs(fac) * P.abs_err_estimate


def qft_gaussian_complex(p: FixedQParams, k, printed: bool = False) -> TransformResult:
    """Half-plane transform of the q-Gaussian via associated Legendre functions.

    ``printed=True`` uses the principal-branch factor e^{-i pi mu/2}(gamma^2 k^2+1)^{mu/2}
    literally and raises BranchError where it leaves the analytic continuation.
    """
    k = complex(k)
    if k.imag == 0:
        raise DomainError("qft_gaussian_complex needs Im k != 0; use qft_gaussian_real")
    upper = k.imag > 0
    z = -1j * p.gamma * k if upper else 1j * p.gamma * k
    pre = _amplitude(p) * 2.0 ** (-p.mu - 1)
    block, err = _legendre_block(p, z)
    val = pre * block
    if printed:
        mu = p.mu
        lit = cmath.exp(-0.5j * math.pi * mu) * cmath.exp(0.5 * mu * cmath.log(p.gamma**2 * k * k + 1))
        side = -1 if (z.imag == 0 and -1 < z.real < 1) else 0
        lit_val = pre * lit * legendre_p(mu, -1 - mu, z, side=side).value
        if abs(lit_val - val) > 1e-10 * max(abs(val), 1e-300):
            raise BranchError(
                f"principal-branch factor at k={k} leaves the continuation (ratio {lit_val / val:.6g})"
            )
        val = lit_val
    if not upper:
        val = -val
    return TransformResult(val, abs(pre) * err + 4 * EPS * abs(val), 1)


def gaussian_cut(p: FixedQParams, k: float) -> TransformResult:
    """Real-axis cut assembled through the hypergeometric chain.

    Stages recorded in ``info``: 'hypergeometric' (two F(-mu,1+mu;1-mu;.) terms
    with (gamma k +- i)^mu prefactors), 'euler' (after the Euler transformation),
    'sum' (the two F(1,-2mu;1-mu;.) terms), 'connection' (after the connection
    formula).  The returned value is the hypergeometric stage.
    """
    k = float(k)
    mu, g = p.mu, p.gamma
    Ap = _amplitude(p) * 2.0 ** (-mu - 1) / gamma(1 - mu).real
    wp = (1 + 1j * g * k) / 2
    wm = (1 - 1j * g * k) / 2
    Fp = hyp2f1(-mu, 1 + mu, 1 - mu, wp)
    Fm = hyp2f1(-mu, 1 + mu, 1 - mu, wm)
    # (gamma k + i)^mu e^{-i pi mu/2} = (1 - i gamma k)^mu on the real axis
    t1 = cmath.exp(-0.5j * math.pi * mu) * cmath.exp(mu * cmath.log(g * k + 1j))
    t2 = cmath.exp(0.5j * math.pi * mu) * cmath.exp(mu * cmath.log(g * k - 1j))
    hyper = Ap * (t1 * Fp.value + t2 * Fm.value)
    err = abs(Ap) * (abs(t1) * Fp.abs_err_estimate + abs(t2) * Fm.abs_err_estimate)
    # Euler: F(-mu,1+mu;1-mu;w) = (1-w)^{-mu} F(1,-2mu;1-mu;w)
    Ep = hyp2f1(1, -2 * mu, 1 - mu, wp)
    Em = hyp2f1(1, -2 * mu, 1 - mu, wm)
    euler = Ap * (t1 * cmath.exp(-mu * cmath.log(1 - wp)) * Ep.value + t2 * cmath.exp(-mu * cmath.log(1 - wm)) * Em.value)
    summed = Ap * 2.0**mu * (Ep.value + Em.value)
    conn_const = 2 * gamma(1 - mu).real * math.sqrt(math.pi) / gamma(0.5 - mu).real
    connection = Ap * 2.0**mu * conn_const * (1 + g * g * k * k) ** mu
    stages = {"hypergeometric": hyper, "euler": euler, "sum": summed, "connection": connection}
    spread = max(abs(a - b) for a in stages.values() for b in stages.values())
    return TransformResult(hyper, err + 8 * EPS * abs(hyper), 4, {"stages": stages, "spread": spread})


def qft_gaussian_real(p: FixedQParams, k):
    """Elementary real-axis transform (1 + C^{2(q-1)} (q-1) k^2 / (4 alpha))^{1/(1-q)+1/2}."""
    q = p.q.q
    k = np.asarray(k, dtype=float)
    base = 1.0 + p.c_norm ** (2 * (q - 1)) * (q - 1) * k * k / (4 * p.alpha)
    out = base ** (1.0 / (1.0 - q) + 0.5)
    return float(out) if out.ndim == 0 else out


def classical_gaussian_ft(k, alpha: float):
    """exp(-k^2/(4 alpha)): the q = 1 transform of the unit-mass Gaussian."""
    k = np.asarray(k, dtype=float)
    out = np.exp(-k * k / (4 * alpha))
    return float(out) if out.ndim == 0 else out


def gaussian_real_oracle(p: FixedQParams, ks, tol=1e-13):
    """Full-line quadrature of the real transform of the q-Gaussian at real k."""
    from .densities import q_gaussian
    from .qft import real_axis_values

    f = q_gaussian(p.q.q, p.alpha)
    v, e, _ = real_axis_values(f, p.q, ks, tol=tol, rel_tol=1e-13)
    return v, e


def q_prime_map(q) -> float:
    """q' of the q'-Gaussian returned by the transform (exponent matching)."""
    q = float(as_qindex(q).q)
    return (1.0 + q) / (3.0 - q)


def q_prime_printed(q) -> float:
    """The alternative expression 1 - 2(1-q)/(3+q); disagrees with q_prime_map for q != 1."""
    q = float(as_qindex(q).q)
    return 1.0 - 2.0 * (1.0 - q) / (3.0 + q)


def fit_q_prime(p: FixedQParams, ks=None, start=(1.5, 1.0)):
    """Least-squares fit of k -> (1 + (q'-1) a k^2)^{1/(1-q')} to the real transform.

    Returns (q'_fit, a_fit).  The start point is deliberately generic.
    """
    ks = np.linspace(-5, 5, 81) if ks is None else np.asarray(ks, float)
    y = qft_gaussian_real(p, ks)

    def model(theta):
        qp, a = theta
        return np.exp(np.log1p((qp - 1) * a * ks * ks) / (1 - qp))

    def resid(theta):
        return np.log(model(theta)) - np.log(y)

    sol = optimize.least_squares(resid, x0=np.asarray(start, float), bounds=([1.0 + 1e-9, 1e-9], [10.0, 1e3]),
                                 xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=10000)
    return float(sol.x[0]), float(sol.x[1])
