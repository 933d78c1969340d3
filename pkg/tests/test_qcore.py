import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qftkit.errors import DomainError, ParameterError
from qftkit.qcore import (
    QGaussianParams,
    QIndex,
    q_exponential,
    q_exponential_c,
    q_gaussian_norm,
    q_gaussian_pdf,
)
from qftkit.quad import integrate_halfline

# normalization constants from mpmath quadrature at 30 digits
FROZEN_NORM = {
    (1.5, 1.0): 0.45015815807855303,
    (1.3, 1.0): 0.4978178996925892,
    (1.25, 2.0): 0.7202530529256849,
    (1.9, 0.5): 0.24476673007933752,
    (1.1, 1.0): 0.5427190858872336,
}


@pytest.mark.parametrize("q", [0.999, 2.0, 2.5, float("nan"), -1.0])
def test_qindex_rejects_out_of_range(q):
    with pytest.raises(DomainError, match=r"q must lie in \[1,2\)"):
        QIndex(q)


def test_qindex_basics():
    assert QIndex(1.0).is_classical
    assert QIndex(1 + 1e-9).is_classical
    assert not QIndex(1.2).is_classical
    assert QIndex(1.25).eps == pytest.approx(0.25)
    assert float(QIndex(1.5)) == 1.5


def test_q_exponential_values():
    assert q_exponential(0.0, 1.5) == 1.0
    assert q_exponential(1.0, 1.0) == pytest.approx(math.e, rel=1e-15)
    # [1 + (1-q)x]^{1/(1-q)} at q=1.5, x=1: 0.5^{-2}
    assert q_exponential(1.0, 1.5) == pytest.approx(4.0, rel=1e-15)
    assert q_exponential(-2.0, 1.5) == pytest.approx(0.25, rel=1e-15)


def test_q_exponential_domain():
    with pytest.raises(DomainError):
        q_exponential(2.0, 1.5)
    with pytest.raises(DomainError):
        q_exponential(1.0, 2.0)


def test_q_exponential_vectorized():
    x = np.linspace(-3, 1.5, 7)
    v = q_exponential(x, 1.3)
    assert v.shape == x.shape
    assert np.allclose(v, [q_exponential(t, 1.3) for t in x], rtol=1e-15)


def test_q_exponential_c_reduces_on_real_axis():
    for x in (-2.0, -0.3, 0.7):
        assert q_exponential_c(x, 1.4) == pytest.approx(q_exponential(x, 1.4), rel=1e-14)


def test_q_exponential_c_pure_imaginary_modulus():
    # |1 + (1-q) i y|^{1/(1-q)} = (1 + (q-1)^2 y^2)^{1/(2(1-q))}
    q, y = 1.5, 3.0
    v = q_exponential_c(1j * y, q)
    assert abs(v) == pytest.approx((1 + 0.25 * y * y) ** (1 / (2 * (1 - q))), rel=1e-14)


@given(st.floats(-5, 5))
def test_classical_limit(x):
    assert q_exponential(x, 1 + 1e-9) == pytest.approx(math.exp(x), rel=1e-7)


@given(st.floats(0.01, 3.0), st.floats(1.0, 1.9), st.floats(0.0, 0.09))
def test_monotone_in_q(x, q, dq):
    assume((q + dq - 1) * x < 0.99)
    assert q_exponential(x, q + dq) >= q_exponential(x, q) * (1 - 1e-14)


@pytest.mark.parametrize("key", sorted(FROZEN_NORM))
def test_norm_against_frozen(key):
    assert q_gaussian_norm(*key) == pytest.approx(FROZEN_NORM[key], rel=1e-13)


def test_norm_classical():
    assert q_gaussian_norm(1.0, 2.0) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)


@pytest.mark.parametrize("qp", [1.0, 1.1, 1.2, 1.3, 1.4, 1.5, 1.6, 1.7, 1.8, 1.9])
def test_pdf_normalized(qp):
    p = QGaussianParams(qp, 1.3)
    decay = "exponential" if qp == 1.0 else ("algebraic", 2 / (qp - 1))
    r = integrate_halfline(lambda x: q_gaussian_pdf(x, p), "positive", decay, 1e-12, rel_tol=1e-12)
    assert 2 * r.value == pytest.approx(1.0, abs=1e-8)


@given(st.floats(-50, 50), st.floats(1.0, 1.95), st.floats(0.1, 5))
@settings(max_examples=50)
def test_pdf_symmetric(x, qp, alpha):
    p = QGaussianParams(qp, alpha)
    assert q_gaussian_pdf(x, p) == q_gaussian_pdf(-x, p)


def test_params_validation():
    with pytest.raises((DomainError, ParameterError)):
        QGaussianParams(1.5, -1.0)
    with pytest.raises((DomainError, ParameterError, ValueError)):
        QGaussianParams(1.5, 1.0, c_norm=0.5)
    p = QGaussianParams(1.5, 1.0)
    assert p.c_norm == pytest.approx(FROZEN_NORM[1.5, 1.0], rel=1e-13)
    assert p.q == 1.5
