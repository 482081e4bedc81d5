import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from diracgup.errors import CriticalPointError, DiracGUPError, NoMinimalLengthError, RegimeBoundaryError
from diracgup.params import (
    DimensionlessConfig,
    PhysicalConfig,
    Regime,
    characteristic_lengths,
    classify_regime,
    critical_field,
    dimensionless_from_physical,
    require_spectral_regime,
    tau_of,
)


def natural(omega, b0, beta):
    return PhysicalConfig(mass=1, omega=omega, b0=b0, beta=beta)


def test_natural_units_conversion():
    d = dimensionless_from_physical(natural(0, 2 * 3.7, 0.1))
    assert d.rho == pytest.approx(3.7, rel=1e-15)
    assert d.rho_star == pytest.approx(20.0, rel=1e-15)


def test_equal_frequencies_give_rho_zero():
    d = dimensionless_from_physical(natural(0.4, 0.8, 0.1))
    assert d.rho == 0.0
    with pytest.raises(CriticalPointError):
        classify_regime(d)


def test_rho_zero_at_critical_field():
    cfg = natural(1, 2, 0.1)
    assert dimensionless_from_physical(cfg).rho == 0.0
    assert critical_field(cfg) == cfg.b0 == 2


def test_beta_zero_has_no_dimensionless_form():
    with pytest.raises(NoMinimalLengthError):
        dimensionless_from_physical(natural(0, 1, 0))


@pytest.mark.parametrize("field", ["mass", "hbar", "c", "e"])
def test_nonpositive_constants_rejected(field):
    kw = dict(mass=1, omega=0, b0=1, beta=0.1)
    kw[field] = 0
    with pytest.raises(DiracGUPError):
        PhysicalConfig(**kw)


@pytest.mark.parametrize(
    "rho, regime",
    [
        (25, Regime.EXTERNAL_POSITIVE),
        (5, Regime.INTERNAL_POSITIVE),
        (-5, Regime.INTERNAL_NEGATIVE),
        (-25, Regime.EXTERNAL_NEGATIVE),
        (20, Regime.BOUNDARY_POSITIVE),
        (-20, Regime.BOUNDARY_NEGATIVE),
    ],
)
def test_regimes(rho, regime):
    assert classify_regime(DimensionlessConfig(rho, 20)) is regime


def test_boundary_is_strict_by_default_and_tolerance_widens_it():
    assert classify_regime(DimensionlessConfig(20 + 1e-12, 20)) is Regime.EXTERNAL_POSITIVE
    assert classify_regime(DimensionlessConfig(20 + 1e-12, 20, boundary_tol=1e-9)) is Regime.BOUNDARY_POSITIVE
    with pytest.raises(RegimeBoundaryError):
        require_spectral_regime(DimensionlessConfig(-20, 20))


@pytest.mark.parametrize("rho, tau", [(5, -2.5), (-5, 1.5), (-20, 0.0), (25, -0.9)])
def test_tau(rho, tau):
    assert tau_of(DimensionlessConfig(rho, 20)) == pytest.approx(tau, abs=1e-15)


@given(st.floats(0.01, 1e3), st.floats(1e-3, 0.999))
def test_tau_ranges(rho_star, frac):
    rho = rho_star * frac
    assert tau_of(DimensionlessConfig(rho, rho_star)) < -1
    assert tau_of(DimensionlessConfig(-rho, rho_star)) > 0


def test_characteristic_lengths_example():
    # omega_c = 0.3 needs b0 = 0.6 in natural units
    cfg = natural(0.05, 0.6, 0.1)
    cl = characteristic_lengths(cfg)
    d = dimensionless_from_physical(cfg)
    assert d.rho == pytest.approx(0.25, rel=1e-14)
    assert cl.inv_beta_lambda == pytest.approx(40.0, rel=1e-12)
    assert cl.inv_beta_lambda == pytest.approx(d.inv_beta_lambda, rel=1e-12)


def test_equal_lengths_flag_infinity():
    cl = characteristic_lengths(natural(0.5, 1.0, 0.1))
    assert cl.landau == pytest.approx(cl.dirac)
    assert cl.infinite and math.isinf(cl.inv_beta_lambda)


def test_beta_zero_lengths():
    cl = characteristic_lengths(natural(0.05, 0.6, 0))
    assert cl.minimal == 0 and cl.infinite


@given(
    st.floats(0.1, 10), st.floats(0.0, 5), st.floats(0.01, 20), st.floats(1e-4, 1.0),
    st.floats(0.5, 2), st.floats(0.5, 2), st.floats(0.5, 2),
)
def test_inv_beta_lambda_consistency(mass, omega, b0, beta, hbar, c, e):
    cfg = PhysicalConfig(mass, omega, b0, beta, hbar, c, e)
    if cfg.omega_c <= 0 or abs(cfg.omega_c - cfg.omega) < 1e-6 * max(cfg.omega_c, cfg.omega):
        return
    d = dimensionless_from_physical(cfg)
    cl = characteristic_lengths(cfg)
    assert cl.inv_beta_lambda * (2 * d.rho / d.rho_star) == pytest.approx(1.0, rel=1e-12)
    # sign of rho follows sign of B0 - B_cr
    assert math.copysign(1, d.rho) == math.copysign(1, b0 - critical_field(cfg))


@given(st.floats(-1e4, 1e4).filter(lambda r: r != 0), st.floats(1e-3, 1e4))
def test_regime_total_and_exclusive(rho, rho_star):
    d = DimensionlessConfig(rho, rho_star)
    r = classify_regime(d)
    hits = [
        rho > rho_star,
        0 < rho < rho_star,
        -rho_star < rho < 0,
        rho < -rho_star,
        abs(rho) == rho_star,
    ]
    assert sum(hits) == 1
    assert r.is_boundary == hits[4]


def test_fraction_inputs_stay_exact():
    cfg = PhysicalConfig(Fraction(1), Fraction(1, 3), Fraction(5, 7), Fraction(1, 10))
    assert cfg.lam == Fraction(5, 14) - Fraction(1, 3)
    assert critical_field(cfg) == Fraction(2, 3)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_invalid_rho_star(bad):
    with pytest.raises(DiracGUPError):
        DimensionlessConfig(1.0, bad)
