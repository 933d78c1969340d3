import cmath
import math
import warnings
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qftkit import densities
from qftkit.errors import BudgetError, ConsistencyWarning, DomainError, PoleError, ValidityError
from qftkit.expansion import (
    G_quadrature,
    SeriesTruncation,
    g_coeff,
    g_coeff_table,
    gaussian_G_closed,
    gaussian_G_printed,
    h_series,
    kernel_exact,
    l_term,
    qft_first_order,
    qft_first_order_gaussian,
)
from qftkit.qcore import QGaussianParams
from qftkit.qft import QFTInput, qft_complex

# half-line integrals int_0^inf f^beta e^{ikx} dx of unit q'-Gaussians (alpha = 1), mpmath at 30 digits
G_FROZEN = [
    (1.5, 1.0, 1j, 0.26379378297432843),
    (1.25, 1.5, 1 + 1j, 0.1595842946079747 + 0.06245157635884042j),
    (1.75, 2.0, -1 + 1j, 0.06239901868550251 - 0.023655213791401994j),
    (1.5, 1.5, 2j, 0.10860780956839111),
]


@pytest.fixture(scope="module")
def symbolic_table():
    # exponent of the q-exponential: ln(1 + (1-q) u e^{(q-1)L}) / (1-q), expanded in e = q-1
    e, u, L = sp.symbols("e u L")
    expo = sp.log(1 - e * u * sp.exp(e * L)) / (-e)
    ser = sp.series(expo, e, 0, 5).removeO()
    poly = sp.Poly(sp.expand(ser), e, u, L)
    return {mon: Fraction(int(c.p), int(c.q)) for mon, c in zip(poly.monoms(), poly.coeffs())}


def test_coefficient_table_matches_symbolic(symbolic_table):
    table = g_coeff_table(4)
    for n in range(5):
        for m in range(n + 1):
            assert table[n, m] == symbolic_table.get((n, n - m + 1, m), 0)
    # and nothing else appears in the symbolic expansion
    for (n, a, b) in symbolic_table:
        assert a == n - b + 1


def test_g_coeff_examples():
    # g_0 = u, g_1 = u^2/2 + u L
    x, k, f = 0.7, 1.3, 0.4
    u, L = 1j * k * x, math.log(f)
    assert g_coeff(x, k, 0, f) == pytest.approx(u)
    assert g_coeff(x, k, 1, f) == pytest.approx(u * u / 2 + u * L)
    # g_2 at f = 1, k x = 1: u^3/3 with u = i, i.e. -i/3
    assert g_coeff(1.0, 1.0, 2, 1.0) == pytest.approx(-1j / 3)
    with pytest.raises(DomainError):
        g_coeff(1.0, 1.0, 1, 0.0)


def test_l_term_first_order_and_budget():
    x, k, q, f = 0.5, 0.8, 1.05, 0.6
    # l_1 truncated at s = 1 is g_1 (q-1)
    assert l_term(x, k, 1, q, f, 1) == pytest.approx(g_coeff(x, k, 1, f) * 0.05)
    assert l_term(x, k, 2, 1.0, f, 4) == 0
    with pytest.raises(BudgetError):
        l_term(x, k, 6, q, f, 30, budget=100)


@given(
    st.floats(-1, 1), st.floats(0, 1), st.floats(0, math.pi),
    st.floats(1e-3, 0.1), st.floats(0.25, 1.0),
)
@settings(max_examples=50, deadline=None)
def test_h_series_order_six(x, r, th, eps, fx):
    k = r * cmath.exp(1j * th)
    q = 1 + eps
    assume(abs(eps * k * x * fx**eps) < 0.9)
    assert abs(h_series(x, k, q, SeriesTruncation(6), fx) - kernel_exact(x, k, q, fx)) < 1e-6


def test_h_series_converges_with_order():
    x, k, q, f = 0.9, 0.8 + 0.3j, 1.2, 0.5
    exact = kernel_exact(x, k, q, f)
    errs = [abs(h_series(x, k, q, SeriesTruncation(n), f) - exact) for n in range(0, 7)]
    assert all(b < a for a, b in zip(errs, errs[1:]))


def test_h_series_validity_gate():
    with pytest.raises(ValidityError):
        h_series(10.0, 1.0, 1.15, SeriesTruncation(3), 1.0)
    with pytest.raises(ValueError):
        SeriesTruncation(-1)
    with pytest.raises(ValueError):
        SeriesTruncation(2, validity_radius=1.5)


@pytest.mark.parametrize("f", densities.corpus()[:6], ids=lambda f: f.name)
def test_first_order_forms_agree(f):
    with warnings.catch_warnings():
        warnings.simplefilter("error", ConsistencyWarning)
        r = qft_first_order(QFTInput(f, 1.1), 1 + 1j)
    assert abs(r.value - r.info["derivative_form"]) < 1e-6


def test_first_order_second_order_gap():
    f = densities.q_gaussian(1.3, 1.0)
    eps = np.array([0.025, 0.05, 0.1, 0.2])
    gaps = []
    for e in eps:
        inp = QFTInput(f, 1 + e)
        gaps.append(abs(qft_first_order(inp, 1 + 1j).value - qft_complex(inp, 1 + 1j).value))
    slope = np.polyfit(np.log(eps), np.log(gaps), 1)[0]
    assert slope >= 1.8


def test_first_order_rejects_real_k():
    with pytest.raises(DomainError):
        qft_first_order(QFTInput(densities.gaussian(), 1.1), 1.0)


@pytest.mark.parametrize("qp,beta,k,ref", G_FROZEN)
def test_G_closed_frozen(qp, beta, k, ref):
    p = QGaussianParams(qp, 1.0)
    assert abs(gaussian_G_closed(p, k, beta).value - ref) < 1e-12 * max(1, abs(ref))


@pytest.mark.parametrize("qp", [1.25, 1.5, 1.75])
@pytest.mark.parametrize("beta", [1.0, 1.5, 2.0])
def test_G_closed_against_quadrature(qp, beta):
    p = QGaussianParams(qp, 1.0)
    for k in (1j, 2j, 1 + 1j, -1 + 1j):
        a = gaussian_G_closed(p, k, beta).value
        b = G_quadrature(p, k, beta).value
        assert abs(a - b) <= 1e-8 * abs(b)


@pytest.mark.parametrize("alpha", [0.5, 2.0])
def test_G_closed_other_widths(alpha):
    p = QGaussianParams(1.4, alpha)
    for k in (0.5j, 1.5 - 0.5j):
        assert abs(gaussian_G_closed(p, k).value - G_quadrature(p, k).value) < 1e-9


def test_G_closed_limits():
    p = QGaussianParams(1.5, 1.0)
    assert gaussian_G_closed(p, 0.0).value == pytest.approx(1.0, abs=1e-12)
    assert gaussian_G_closed(p, 1e-8j).value == pytest.approx(0.5, abs=1e-7)
    # for real k the closed form is the full-line integral
    full = gaussian_G_closed(p, 1.0).value
    assert abs(full - 2 * G_quadrature(p, complex(1.0, 1e-300)).value.real) < 1e-9


def test_literal_struve_form_only_matches_at_unit_scale():
    # (q'-1) alpha = 1: the literal expression coincides with the closed form
    p = QGaussianParams(1.4, 2.5)
    for k in (1j, 1 + 1j):
        assert abs(gaussian_G_printed(p, k) - gaussian_G_closed(p, k).value) < 1e-10
    p = QGaussianParams(1.75, 1.0)
    assert abs(gaussian_G_printed(p, 1j) - gaussian_G_closed(p, 1j).value) > 1e-3
    # half-integer order: Gamma pole in the literal prefactor
    with pytest.raises(PoleError):
        gaussian_G_printed(QGaussianParams(1.25, 1.0), 1j, 1.5)


def test_first_order_gaussian_closed_route():
    p = QGaussianParams(1.5, 1.0)
    f = densities.q_gaussian(1.5, 1.0)
    a = qft_first_order_gaussian(p, 1.05, 1 + 1j)
    b = qft_first_order(QFTInput(f, 1.05), 1 + 1j).value
    assert abs(a - b) < 1e-6
