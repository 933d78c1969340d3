import math

import numpy as np
import pytest
from scipy.special import wofz

from qftkit import densities
from qftkit.errors import DomainError, FitError
from qftkit.qft import (
    QFTInput,
    SectionallyAnalytic,
    check_lambda_membership,
    dirac_boundary_value,
    dirac_density_rep,
    growth_check,
    kernel_integrand,
    qft_complex,
    qft_inverse,
    qft_real_cut,
    qft_real_direct,
    transform_family,
)
from qftkit.quad import ContourSpec

# q = 1.5 transform of the unit q-Gaussian (q' = 1.5, alpha = 1); mpmath quadrature at 30 digits
QG15_UPPER = {
    0.5j: 0.43379156304485517,
    1 + 1j: 0.3625908383967519 + 0.08740514617894066j,
    -1 + 1j: 0.3625908383967519 - 0.08740514617894066j,
    -0.3 + 0.2j: 0.4681723394562853 - 0.040373174576197386j,
}
QG15_LOWER = {2 - 1j: -0.31289452603635454 + 0.15317590110223583j}
QG15_REAL_K1 = 0.9211656273215713


@pytest.fixture(scope="module")
def qg15():
    return QFTInput(densities.q_gaussian(1.5, 1.0), 1.5)


@pytest.mark.parametrize("k", list(QG15_UPPER) + list(QG15_LOWER))
def test_complex_transform_frozen(qg15, k):
    ref = {**QG15_UPPER, **QG15_LOWER}[k]
    r = qft_complex(qg15, k)
    assert abs(r.value - ref) < 1e-10
    assert r.abs_err < 1e-8


def test_real_axis_two_routes(qg15):
    d = qft_real_direct(qg15, 1.0)
    c = qft_real_cut(qg15, 1.0)
    assert abs(d.value - QG15_REAL_K1) < 1e-10
    assert abs(c.value - QG15_REAL_K1) < 1e-6


def test_real_axis_rejected_by_complex(qg15):
    with pytest.raises(DomainError):
        qft_complex(qg15, 1.0)


@pytest.mark.parametrize("k", [0.5 + 0.5j, -2 + 1j, 1 - 0.7j, -0.3 - 2j])
def test_classical_degeneration(k):
    # q = 1: half-line Fourier integrals of exp(-x^2)/sqrt(pi) via the Faddeeva function
    inp = QFTInput(densities.gaussian(1.0), 1.0)
    ref = 0.5 * wofz(k / 2) if k.imag > 0 else -0.5 * wofz(-k / 2)
    assert abs(qft_complex(inp, k).value - ref) < 1e-11


def test_kernel_integrand_shape_and_q1():
    f = densities.laplace(1.0)
    g = kernel_integrand(f, 1.3, [1j, 2 + 1j])
    x = np.linspace(-2, 2, 5)
    assert g(x).shape == (5, 2)
    g1 = kernel_integrand(f, 1.0, [0.5])
    assert np.allclose(g1(x)[:, 0], f(x) * np.exp(0.5j * x))


@pytest.mark.parametrize("f", [densities.gaussian(1.0), densities.laplace(1.0), densities.box(1.0), densities.mixture()],
                         ids=lambda f: f.name)
@pytest.mark.parametrize("q", [1.1, 1.9])
def test_cut_matches_direct(f, q):
    inp = QFTInput(f, q)
    for k in (0.5, -2.0):
        assert abs(qft_real_cut(inp, k).value - qft_real_direct(inp, k).value) < 1e-6


def test_sectionally_analytic_dispatch():
    F = SectionallyAnalytic(lambda k: 1 + 0 * k, lambda k: -1 + 0 * k)
    assert list(F(np.array([1j, -1j]))) == [1, -1]
    with pytest.raises(DomainError):
        F(np.array([1.0 + 0j]))
    assert F.cut(np.array([0.3]), 0.1)[0] == 2


def test_membership():
    ok, diag = check_lambda_membership(densities.q_gaussian(1.5), 1.5, 1.0)
    assert ok and diag["positive"]["exponent"] < -1
    ok, diag = check_lambda_membership(densities.constant(1.0), 1.5, 1.0)
    assert ok  # the q-exponential kernel itself supplies the decay
    ok, _ = check_lambda_membership(densities.constant(1.0), 1.0, 1.0)
    assert not ok


def test_dirac_representation():
    f = densities.gaussian(1.0)
    r = dirac_density_rep(f, 0.3 + 1j)
    # w(z) = (i/pi) int e^{-t^2}/(z-t) dt for Im z > 0, so the representation is w(z)/(2 sqrt(pi))
    assert abs(r.value - wofz(0.3 + 1j) / (2 * math.sqrt(math.pi))) < 1e-12
    for k in (0.0, 0.7, -1.3):
        assert abs(dirac_boundary_value(f, k).value - f(k)) < 1e-6
    with pytest.raises(DomainError):
        dirac_density_rep(f, 1.0)


def test_growth_check():
    F = SectionallyAnalytic(lambda k: k * k, lambda k: -k * k)
    C, p = growth_check(F)
    assert p == 2 and F.growth_degree == 2 and C == pytest.approx(1.0, rel=1e-6)
    G = SectionallyAnalytic(lambda k: np.exp(np.abs(k) / 3), lambda k: np.exp(np.abs(k) / 3))
    with pytest.raises(FitError):
        growth_check(G)


def test_round_trip_classical():
    xs = np.linspace(-3, 3, 21)
    r = qft_inverse(transform_family(densities.gaussian(1.0)), xs, eps_ladder=(0.0,), spec=ContourSpec(tol=1e-6))
    assert np.max(np.abs(np.real(r.value) - densities.gaussian(1.0)(xs))) < 1e-4


def test_injectivity_on_probes():
    probes = [s1 + s2 * 1j for s1 in (-1, 1) for s2 in (-1, 1)] + [2 * (s1 + s2 * 1j) for s1 in (-1, 1) for s2 in (-1, 1)]
    fs = densities.corpus()[:5]
    vecs = [np.array([qft_complex(QFTInput(f, 1.3), k).value for k in probes]) for f in fs]
    for i in range(len(vecs)):
        for j in range(i):
            assert np.max(np.abs(vecs[i] - vecs[j])) > 1e-6
