"""Result envelope and Gamma-family primitives."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from ..errors import AccuracyError, PoleError

EPS = 2.220446049250313e-16

METHODS = ("series", "continuation", "recurrence", "integral")


@dataclass(frozen=True)
class SpecFunResult:
    value: complex
    abs_err_estimate: float
    method_tag: str

    def __complex__(self):
        return complex(self.value)

    @property
    def rel_err_estimate(self) -> float:
        a = abs(self.value)
        return self.abs_err_estimate / a if a > 0 else math.inf

    def checked(self, rtol=None):
        """Raise AccuracyError if the estimate exceeds ``rtol`` relative."""
        if rtol is not None and self.abs_err_estimate > rtol * max(abs(self.value), 1e-300):
            raise AccuracyError(
                f"{self.method_tag} estimate {self.abs_err_estimate:.3g} exceeds rtol {rtol:g}",
                value=self.value,
                abs_err=self.abs_err_estimate,
            )
        return self


def is_nonpos_int(z, tol=0.0) -> bool:
    z = complex(z)
    if z.imag != 0:
        return False
    r = round(z.real)
    return r <= 0 and abs(z.real - r) <= tol


def near_int(x, tol) -> bool:
    x = complex(x)
    return x.imag == 0 and abs(x.real - round(x.real)) < tol


def sinpi(z):
    """sin(pi z) with argument reduction (exact zeros at integers)."""
    z = complex(z)
    n = round(z.real)
    r = z.real - n
    s = -1.0 if n % 2 else 1.0
    if r == 0 and z.imag == 0:
        return 0j
    return s * cmath.sin(math.pi * complex(r, z.imag))


def cospi(z):
    """cos(pi z) with argument reduction (exact zeros at half-integers)."""
    z = complex(z)
    n = round(z.real)
    r = z.real - n
    s = -1.0 if n % 2 else 1.0
    if abs(r) == 0.5 and z.imag == 0:
        return 0j
    return s * cmath.cos(math.pi * complex(r, z.imag))


# B_{2n} / (2n (2n-1)), n = 1..10
_STIRLING = (
    1.0 / 12,
    -1.0 / 360,
    1.0 / 1260,
    -1.0 / 1680,
    1.0 / 1188,
    -691.0 / 360360,
    1.0 / 156,
    -3617.0 / 122400,
    43867.0 / 244188,
    -174611.0 / 125400,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)


def _lgamma_stirling(w):
    w = complex(w)
    s = (w - 0.5) * cmath.log(w) - w + _HALF_LOG_2PI
    winv = 1.0 / w
    w2 = winv * winv
    p = winv
    for c in _STIRLING:
        s += c * p
        p *= w2
    return s


def _gamma_right(z):
    """Gamma for Re z >= 0.5 by upward shift and Stirling."""
    n = max(0, math.ceil(15.0 - z.real))
    prod = 1 + 0j
    for j in range(n):
        prod *= z + j
    lg = _lgamma_stirling(z + n)
    val = cmath.exp(lg) / prod
    rel = EPS * (abs(lg) + n + 4) * 2
    return val, rel


def gamma_c(z) -> SpecFunResult:
    """Gamma function of a complex argument."""
    z = complex(z)
    if is_nonpos_int(z):
        raise PoleError(f"Gamma pole at {z.real:g}")
    if z.real >= 0.5:
        val, rel = _gamma_right(z)
    else:
        g, rel = _gamma_right(1 - z)
        val = math.pi / (sinpi(z) * g)
        rel += EPS * (abs(z) + 4)
    if z.imag == 0:
        val = complex(val.real, 0.0)
    return SpecFunResult(val, rel * abs(val), "series")


def gamma(z):
    return gamma_c(z).value


def rgamma(z):
    """1/Gamma(z), zero at the poles."""
    z = complex(z)
    if is_nonpos_int(z):
        return 0j
    return 1.0 / gamma_c(z).value


def rgamma_real(x: float) -> float:
    """1/Gamma(x) for real x, zero at the poles, no overflow for large x."""
    if x <= 0 and x == round(x):
        return 0.0
    if x < 170:
        return 1.0 / math.gamma(x)
    return math.exp(-math.lgamma(x))


def beta(a, b) -> SpecFunResult:
    """Euler Beta B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b)."""
    a, b = complex(a), complex(b)
    if a.imag == 0 and b.imag == 0 and a.real > 0 and b.real > 0:
        val = math.exp(math.lgamma(a.real) + math.lgamma(b.real) - math.lgamma(a.real + b.real))
        err = EPS * (abs(math.lgamma(a.real)) + abs(math.lgamma(b.real)) + 4) * val
        return SpecFunResult(complex(val), err, "series")
    ga, gb = gamma_c(a), gamma_c(b)
    rab = rgamma(a + b)
    val = ga.value * gb.value * rab
    err = abs(val) * (ga.rel_err_estimate + gb.rel_err_estimate + 4 * EPS)
    return SpecFunResult(val, err, "series")


def digamma_int(n: int) -> float:
    """psi(n) for positive integer n."""
    return -0.5772156649015329 + math.fsum(1.0 / j for j in range(1, n))
