"""q-deformed exponentials and the q-Gaussian density."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError

# Below this distance from 1 every q-deformed formula is replaced by its q = 1 limit.
EPS_Q = 1e-8


@dataclass(frozen=True)
class QIndex:
    """Entropic index restricted to 1 <= q < 2."""

    q: float

    def __post_init__(self):
        q = float(self.q)
        if not (1.0 <= q < 2.0) or math.isnan(q):
            raise DomainError(f"q must lie in [1,2), got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def is_classical(self) -> bool:
        return abs(self.q - 1.0) < EPS_Q

    @property
    def eps(self) -> float:
        """q - 1."""
        return self.q - 1.0

    def __float__(self):
        return self.q


def as_qindex(q) -> QIndex:
    return q if isinstance(q, QIndex) else QIndex(q)


def _clog1p(w):
    """Complex log(1 + w) accurate for small |w|."""
    w = np.asarray(w, dtype=complex)
    a, b = w.real, w.imag
    re = 0.5 * np.log1p(2.0 * a + a * a + b * b)
    im = np.arctan2(b, 1.0 + a)
    return re + 1j * im


def q_exponential(x, q):
    """Real q-exponential [1 + (1-q) x]^{1/(1-q)}.

    Raises DomainError at or beyond the support edge instead of clamping.
    """
    q = as_qindex(q)
    xa = np.asarray(x, dtype=float)
    if q.is_classical:
        out = np.exp(xa)
    else:
        base = 1.0 + (1.0 - q.q) * xa
        if np.any(base <= 0):
            raise DomainError("1 + (1-q)x must be positive")
        out = np.exp(np.log1p((1.0 - q.q) * xa) / (1.0 - q.q))
    return float(out) if out.ndim == 0 else out


def q_exponential_c(z, q):
    """Complex q-exponential on the principal branch."""
    q = as_qindex(q)
    za = np.asarray(z, dtype=complex)
    if q.is_classical:
        out = np.exp(za)
    else:
        w = (1.0 - q.q) * za
        if np.any(w == -1.0):
            raise DomainError("branch point 1 + (1-q)z = 0")
        out = np.exp(_clog1p(w) / (1.0 - q.q))
    return complex(out) if out.ndim == 0 else out


def q_gaussian_norm(qprime, alpha: float) -> float:
    """Normalisation C_{q'} of the q-Gaussian with width parameter alpha."""
    qp = as_qindex(qprime)
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    if qp.is_classical:
        return math.sqrt(alpha / math.pi)
    b = 1.0 / qp.eps - 0.5
    return math.sqrt(qp.eps * alpha) * math.exp(-special.betaln(0.5, b))


@dataclass(frozen=True)
class QGaussianParams:
    qprime: QIndex
    alpha: float
    c_norm: float = field(default=None)

    def __post_init__(self):
        qp = as_qindex(self.qprime)
        object.__setattr__(self, "qprime", qp)
        if not self.alpha > 0:
            raise DomainError("alpha must be positive")
        c = q_gaussian_norm(qp, self.alpha)
        if self.c_norm is None:
            object.__setattr__(self, "c_norm", c)
        elif abs(self.c_norm - c) > 8 * np.spacing(c):
            raise DomainError("c_norm inconsistent with (qprime, alpha)")

    @property
    def q(self) -> float:
        return self.qprime.q


def q_gaussian_pdf(x, p: QGaussianParams):
    """C_{q'} [1 + (q'-1) alpha x^2]^{1/(1-q')}, vectorised in x."""
    xa = np.asarray(x, dtype=float)
    if p.qprime.is_classical:
        out = p.c_norm * np.exp(-p.alpha * xa * xa)
    else:
        e = p.qprime.eps
        out = p.c_norm * np.exp(-np.log1p(e * p.alpha * xa * xa) / e)
    return float(out) if out.ndim == 0 else out
