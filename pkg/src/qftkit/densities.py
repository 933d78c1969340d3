"""Built-in test densities (all unit mass)."""

from __future__ import annotations

import math

import numpy as np

from .qcore import QGaussianParams, as_qindex, q_gaussian_pdf
from .quad import DecayClass, DensityFunction


def gaussian(alpha: float = 1.0, shift: float = 0.0) -> DensityFunction:
    c = math.sqrt(alpha / math.pi)
    name = f"gaussian(alpha={alpha:g}" + (f",shift={shift:g})" if shift else ")")
    return DensityFunction(
        lambda x: c * np.exp(-alpha * (x - shift) ** 2),
        decay=DecayClass("exponential"),
        name=name,
        scale=1.0 / math.sqrt(alpha),
        breakpoints=(shift,) if shift else (),
    )


def q_gaussian(qprime: float, alpha: float = 1.0) -> DensityFunction:
    qp = as_qindex(qprime)
    p = QGaussianParams(qp, alpha)
    if qp.is_classical:
        return gaussian(alpha)
    return DensityFunction(
        lambda x: q_gaussian_pdf(x, p),
        decay=DecayClass("algebraic", 2.0 / qp.eps),
        name=f"qgaussian(q'={qp.q:g},alpha={alpha:g})",
        scale=1.0 / math.sqrt(alpha),
    )


def laplace(b: float = 1.0) -> DensityFunction:
    return DensityFunction(
        lambda x: np.exp(-np.abs(x) / b) / (2 * b),
        decay=DecayClass("exponential"),
        name=f"laplace(b={b:g})",
        scale=b,
    )


def box(a: float = 1.0) -> DensityFunction:
    return DensityFunction(
        lambda x: np.where(np.abs(x) <= a, 0.5 / a, 0.0),
        support=(-a, a),
        decay=DecayClass("compact"),
        name=f"box(a={a:g})",
        scale=a,
    )


def triangle(a: float = 1.0) -> DensityFunction:
    return DensityFunction(
        lambda x: np.maximum(1.0 - np.abs(x) / a, 0.0) / a,
        support=(-a, a),
        decay=DecayClass("compact"),
        name=f"triangle(a={a:g})",
        scale=a,
    )


def logistic(s: float = 1.0) -> DensityFunction:
    def f(x):
        e = np.exp(-np.abs(x) / s)
        return e / (s * (1 + e) ** 2)

    return DensityFunction(f, decay=DecayClass("exponential"), name=f"logistic(s={s:g})", scale=s)


def sech(s: float = 1.0) -> DensityFunction:
    """Hyperbolic secant density (1/(2s)) sech(pi x / (2s))."""
    def f(x):
        u = np.abs(x) * math.pi / (2 * s)
        e = np.exp(-u)
        return e / (s * (1 + e * e))

    return DensityFunction(f, decay=DecayClass("exponential"), name=f"sech(s={s:g})", scale=s)


def mixture(w: float = 0.3, sep: float = 1.5) -> DensityFunction:
    """w N(-sep, 1/2) + (1-w) N(sep, 1/2) in the alpha = 1 parametrisation."""
    c = 1 / math.sqrt(math.pi)

    def f(x):
        return c * (w * np.exp(-((x + sep) ** 2)) + (1 - w) * np.exp(-((x - sep) ** 2)))

    return DensityFunction(f, decay=DecayClass("exponential"), name=f"mixture(w={w:g},sep={sep:g})")


def constant(value: float = 1.0) -> DensityFunction:
    """f = value on the whole line; not integrable, used to probe membership."""
    return DensityFunction(
        lambda x: np.full(np.shape(x), float(value)),
        decay=DecayClass("algebraic"),
        name=f"constant({value:g})",
    )


def zero() -> DensityFunction:
    return DensityFunction(lambda x: np.zeros(np.shape(x)), decay=DecayClass("exponential"), name="zero")


def corpus():
    """Eleven pairwise-distinct unit-mass densities."""
    return [
        gaussian(1.0),
        gaussian(2.0),
        gaussian(1.0, shift=0.5),
        q_gaussian(1.25, 1.0),
        q_gaussian(1.5, 1.0),
        laplace(1.0),
        box(1.0),
        triangle(1.0),
        logistic(0.5),
        sech(1.0),
        mixture(),
    ]


BUILTIN = {
    "gaussian": lambda q=None: gaussian(1.0),
    "qgaussian": lambda q=1.3: q_gaussian(q, 1.0),
    "box": lambda q=None: box(1.0),
}
