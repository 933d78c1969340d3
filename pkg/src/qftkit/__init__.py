"""Complex q-Fourier transform toolkit."""

from .errors import DomainError, NumericalError, QFTError
from .gaussianqft import fixed_q_params, gaussian_cut, q_prime_map, qft_gaussian_complex, qft_gaussian_real
from .qcore import QGaussianParams, QIndex, q_exponential, q_exponential_c, q_gaussian_norm, q_gaussian_pdf
from .qft import QFTInput, qft_complex, qft_inverse, qft_real_cut, qft_real_direct, transform_family

__version__ = "0.1.0"

__all__ = [
    "DomainError",
    "NumericalError",
    "QFTError",
    "QFTInput",
    "QGaussianParams",
    "QIndex",
    "fixed_q_params",
    "gaussian_cut",
    "q_exponential",
    "q_exponential_c",
    "q_gaussian_norm",
    "q_gaussian_pdf",
    "q_prime_map",
    "qft_complex",
    "qft_gaussian_complex",
    "qft_gaussian_real",
    "qft_inverse",
    "qft_real_cut",
    "qft_real_direct",
    "transform_family",
]
