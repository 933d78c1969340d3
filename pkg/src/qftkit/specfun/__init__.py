"""Complex-argument special functions used by the closed forms."""

from ._core import SpecFunResult, beta, gamma, gamma_c, rgamma
from .bessel import bessel_j, bessel_y
from .hyp import hyp2f1
from .legendre import legendre_p
from .struve import struve_h, struve_k

__all__ = [
    "SpecFunResult",
    "beta",
    "bessel_j",
    "bessel_y",
    "gamma",
    "gamma_c",
    "hyp2f1",
    "legendre_p",
    "rgamma",
    "struve_h",
    "struve_k",
]
