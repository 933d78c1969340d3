"""Associated Legendre function of the first kind (type 3) off the cut."""

from __future__ import annotations

import cmath
import math

from ..errors import BranchCutError, ParameterError
from ._core import EPS, SpecFunResult, is_nonpos_int, rgamma
from .hyp import hyp2f1


def legendre_p(mu: float, nu: float, z, side: int = 0) -> SpecFunResult:
    """P^mu_nu(z) = ((z+1)/(z-1))^{mu/2} F(-nu, nu+1; 1-mu; (1-z)/2) / Gamma(1-mu).

    For real z in (-1, 1) pass ``side`` = +1 or -1 to take the boundary value
    from the upper or lower half-plane.
    """
    mu, nu = float(mu), float(nu)
    z = complex(z)
    if is_nonpos_int(1 - mu):
        raise ParameterError(f"Gamma(1-mu) has a pole at mu = {mu:g}")
    if z.imag == 0 and -1 <= z.real <= 1:
        if side not in (1, -1) or abs(z.real) == 1:
            if z.real == 1 and mu == 0:
                return SpecFunResult(1 + 0j, 0.0, "series")
            raise BranchCutError(f"z = {z.real:g} lies on the cut [-1, 1]")
        x = z.real
        factor = math.pow((1 + x) / (1 - x), mu / 2) * cmath.exp(-0.5j * side * math.pi * mu)
    else:
        factor = cmath.exp(0.5 * mu * cmath.log((z + 1) / (z - 1)))
    # z < -1 puts (1-z)/2 on the hypergeometric cut, approached from the mirrored side
    hside = -side if (z.imag == 0 and z.real < -1) else 0
    f = hyp2f1(-nu, nu + 1, 1 - mu, (1 - z) / 2, side=hside)
    r = rgamma(1 - mu)
    val = factor * f.value * r
    err = abs(factor * r) * f.abs_err_estimate + EPS * 4 * abs(val)
    return SpecFunResult(val, err, f.method_tag)
