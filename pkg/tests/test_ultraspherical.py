import numpy as np
import pytest

from qultra import (DomainError, PoleError, RegionError, SpectralPoint,
                    UltraParams, bilateral_cn, bilateral_cn_psi_form,
                    classical_cn, constant_term, generating_rhs,
                    linearization_residual, recurrence_residual,
                    special_value_c0, special_value_cm1, symmetry_residual)
from qultra.ultraspherical import (_bilateral_22tgl, _bilateral_6psi8,
                                   _bilateral_direct, in_direct_region)

Q, BETA, GAMMA = 0.3, 0.8, 0.7


def test_classical_degree_zero_and_one(points):
    for p in points:
        assert classical_cn(0, p, BETA, Q) == 1.0
        want = 2 * p.x * (1 - BETA) / (1 - Q)
        assert classical_cn(1, p, BETA, Q) == pytest.approx(want, rel=1e-14)


def test_classical_matches_recurrence_buildup():
    p = SpectralPoint.from_theta(0.4)
    x = p.x
    c = [1.0 + 0j, 2 * x * (1 - BETA) / (1 - Q)]
    for n in range(1, 4):
        nxt = (2 * x * (1 - BETA * Q ** n) * c[n]
               - (1 - BETA ** 2 * Q ** (n - 1)) * c[n - 1]) / (1 - Q ** (n + 1))
        c.append(nxt)
    assert classical_cn(4, p, BETA, Q) == pytest.approx(c[4], abs=1e-12)


def test_classical_rejects_negative_degree(points):
    with pytest.raises(DomainError):
        classical_cn(-1, points[0], BETA, Q)


def test_bilateral_frozen_oracle(params):
    # independent 40-digit two-sided summation
    p = SpectralPoint.from_theta(1.0)
    uv = bilateral_cn(2, p, params)
    assert uv.value == pytest.approx(0.044599497577432457363, rel=1e-10)
    assert uv.truncation_terms <= 10000


def test_bilateral_gamma_one_reduction(points):
    reduced = UltraParams(BETA, 1.0, Q)
    for p in points:
        for n in range(0, 9):
            got = bilateral_cn(n, p, reduced).value
            want = classical_cn(n, p, BETA, Q)
            assert abs(got - want) <= 1e-10 * max(1.0, abs(want))


def test_bilateral_gamma_one_negative_index_vanishes():
    reduced = UltraParams(BETA, 1.0, Q)
    p = SpectralPoint.from_theta(0.4)
    assert bilateral_cn(-3, p, reduced).value == 0.0


def test_bilateral_parity(params, points):
    for p in points:
        mirrored = SpectralPoint(-p.z)  # x -> -x
        for n in (-3, -2, 0, 2, 5):
            a = bilateral_cn(n, p, params).value
            b = bilateral_cn(n, mirrored, params).value
            assert b == pytest.approx((-1) ** n * a, rel=1e-12, abs=1e-12)


def test_bilateral_z_inversion(params, points):
    for p in points:
        for n in (-2, 1, 4):
            a = bilateral_cn(n, p, params).value
            b = bilateral_cn(n, p.inverse(), params).value
            assert a == pytest.approx(b, rel=1e-12)


def test_bilateral_psi_form_crosscheck(params, points):
    for p in points:
        for n in (-3, 0, 2):
            direct = bilateral_cn(n, p, params).value
            psi = bilateral_cn_psi_form(n, p, params)
            assert direct == pytest.approx(psi, rel=1e-11)


def test_bilateral_array_evaluation(params):
    thetas = np.linspace(0.3, 2.8, 9)
    zs = np.exp(1j * thetas)
    uv = bilateral_cn(2, SpectralPoint(zs), params)
    for z, v in zip(zs, uv.value):
        want = bilateral_cn(2, SpectralPoint(complex(z)), params).value
        assert v == pytest.approx(want, rel=1e-13)


def test_bilateral_pole_lattices(points):
    with pytest.raises(PoleError):
        bilateral_cn(0, points[0], UltraParams(BETA, Q ** -2, Q))
    with pytest.raises(PoleError):
        bilateral_cn(0, points[0], UltraParams(Q ** 2 / GAMMA, GAMMA, Q))


def test_recurrence_classical_lowest_degree(points):
    for p in points:
        assert recurrence_residual("classical", 1, p,
                                   UltraParams(BETA, 1.0, Q)) <= 1e-12


@pytest.mark.parametrize("n", range(-6, 7))
def test_recurrence_bilateral(n, params, points):
    for p in points:
        assert recurrence_residual("bilateral", n, p, params) <= 1e-10


@pytest.mark.parametrize("n", [-4, -2, 0, 3, 4])
def test_symmetry(n, params, points):
    for p in points:
        assert symmetry_residual(n, p, params) <= 1e-10


def test_constant_terms_at_x_zero(params):
    p = SpectralPoint(1j)  # x = 0
    for n in range(-4, 5):
        want = constant_term(n, params)
        got = bilateral_cn(n, p, params).value
        if n % 2:
            assert abs(want) == 0.0
            assert abs(got) <= 1e-9
        else:
            assert abs(got - want) <= 1e-9


def test_constant_term_classical_reduction():
    assert constant_term(0, UltraParams(BETA, 1.0, Q)) == pytest.approx(1.0, rel=1e-13)
    # classical C_{2m}(0) = (-1)^m (beta^2; q^2)_m / (q^2; q^2)_m
    from qultra.qcore import poch, poch_recip
    got = constant_term(4, UltraParams(BETA, 1.0, Q))
    want = poch(BETA ** 2, Q ** 2, 2) * poch_recip(Q ** 2, Q ** 2, 2)
    assert got == pytest.approx(want, rel=1e-12)


def test_special_value_c0(params):
    p = SpectralPoint(complex(Q ** 0.25))
    got = bilateral_cn(0, p, params).value
    want = special_value_c0(params)
    assert got == pytest.approx(want, rel=1e-10)


def test_cm1_continuations_agree_but_differ_from_stated_product(params):
    """At z = q^{1/2} the two independent continuation routes agree to
    machine precision; the stated closed product differs from them (its
    derivation drops a sign on the k < 0 terms), which is reported here
    as a stable, reproducible gap."""
    z = complex(Q ** 0.5)
    got = bilateral_cn(-1, SpectralPoint(z), params).value
    route_b, _ = _bilateral_22tgl(-1, z, params, __import__("qultra").DEFAULT_POLICY)
    assert got == pytest.approx(route_b, rel=1e-12)
    stated = special_value_cm1(params)
    assert abs(got - stated) > 0.1  # the documented discrepancy


def test_in_region_values_match_continuations(params):
    # overlap check: direct sum vs both continuations at beta = 1.3 where
    # the q^{1/2}-shifted point is inside the direct region
    from qultra import DEFAULT_POLICY
    wide = UltraParams(1.3, GAMMA, Q)
    z = complex(Q ** 0.5) * np.exp(0.4j)
    assert in_direct_region(z, 1.3, Q)
    direct, _ = _bilateral_direct(0, z, wide, DEFAULT_POLICY)
    via8, _ = _bilateral_6psi8(0, z, wide, DEFAULT_POLICY)
    viat, _ = _bilateral_22tgl(0, z, wide, DEFAULT_POLICY)
    assert direct == pytest.approx(via8, rel=1e-12)
    assert direct == pytest.approx(viat, rel=1e-12)


def test_continuation_gamma_mirror_consistency(params):
    # C_0(x; beta, gamma) = C_0(x; beta, 1/(beta gamma)) continued at the
    # out-of-region point z = q^{1/2}: two different parameter sets, same x
    p = SpectralPoint(complex(Q ** 0.5))
    a = bilateral_cn(0, p, params).value
    b = bilateral_cn(0, p, params.with_gamma(1 / (BETA * GAMMA))).value
    assert a == pytest.approx(b, rel=1e-9)


def test_generating_rhs_classical_trivial(params, points):
    assert generating_rhs("classical", 0.0, points[0], params) == 1.0


def test_generating_rhs_classical_sum(params, points):
    t = 0.6
    for p in points:
        acc = sum(classical_cn(n, p, BETA, Q) * t ** n for n in range(80))
        rhs = generating_rhs("classical", t, p, params)
        assert acc == pytest.approx(rhs, rel=1e-10)


def test_generating_rhs_bilateral_sum(params, points):
    t = 0.6
    for p in points:
        rhs = generating_rhs("bilateral", t, p, params)
        acc = bilateral_cn(0, p, params).value + 0j
        for n in range(1, 120):
            shell = (bilateral_cn(n, p, params).value * t ** n
                     + bilateral_cn(-n, p, params).value * t ** -n)
            acc += shell
            if abs(shell) < 1e-13 * abs(rhs):
                break
        assert acc == pytest.approx(rhs, rel=1e-8)


def test_generating_rhs_gamma_one_collapses(points):
    # at gamma = 1 the prefactor collapses to 1 and the two extra products
    # cancel, leaving exactly the classical generating function
    reduced = UltraParams(BETA, 1.0, Q)
    t = 0.6
    for p in points:
        bil = generating_rhs("bilateral", t, p, reduced)
        cla = generating_rhs("classical", t, p, reduced)
        assert bil == pytest.approx(cla, rel=1e-12)


def test_generating_rhs_region_errors(params, points):
    with pytest.raises(RegionError):
        generating_rhs("bilateral", 0.2, points[0], params)  # |t z| < q/beta
    with pytest.raises(RegionError):
        generating_rhs("classical", 1.2, points[0], params)


def test_laurent_coefficients_recover_values(params):
    # trapezoid samples on |t| = 0.6 are spectrally accurate: doubling the
    # grid until two sizes agree pins each coefficient
    p = SpectralPoint.from_theta(1.0)
    r = 0.6
    m = 128
    phis = 2 * np.pi * np.arange(m) / m
    samples = np.array([generating_rhs("bilateral", r * np.exp(1j * ph), p, params)
                        for ph in phis])
    coeff = np.fft.fft(samples) / m
    for n in range(-4, 5):
        want = bilateral_cn(n, p, params).value
        got = coeff[n % m] / r ** n
        assert abs(got - want) <= 1e-7


def test_linearization_degenerate(points):
    for p in points:
        assert linearization_residual(0, 3, p, BETA, Q) <= 1e-14


@pytest.mark.parametrize("m,n", [(1, 1), (2, 3), (3, 4), (4, 4)])
def test_linearization(m, n, points):
    for p in points:
        assert linearization_residual(m, n, p, BETA, Q) <= 1e-11


def test_bilateral_region_error_when_no_route():
    # gamma makes both continuation conditions fail and alpha sits on the
    # lattice, so the far-out real point cannot be evaluated
    params = UltraParams(0.8, 3.9, 0.3)
    p = SpectralPoint(complex(0.3 ** 0.5))
    with pytest.raises((RegionError, PoleError)):
        # n chosen so the transformed-series conditions fail on both sides
        bilateral_cn(6, p, params)
