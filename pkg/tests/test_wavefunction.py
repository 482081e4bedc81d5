import logging
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from diracgup.errors import (
    DiracGUPError,
    DiscardedSolutionError,
    HypergeometricPoleError,
    InadmissibleStateError,
    QuadratureError,
)
from diracgup.params import DimensionlessConfig as D
from diracgup.spectrum import k_squared, pt_parameters, spinor_row
from diracgup.wavefunction import (
    QuadratureSpec,
    apply_P,
    assemble_spinor,
    commutator,
    default_p_grid,
    gaussian,
    hyp2f1_terminating,
    hyp2f1_terminating_dz,
    intertwining_residuals,
    norm_squared,
    normalized,
    overlap,
    printed_momentum_parameters,
    profile_csv,
    radial_profile,
    times_p,
    x_hat,
)

RS = 20.0
REGIMES = [25.0, 5.0, -5.0, -25.0]


# --- terminating series ---------------------------------------------------------


def test_hyp2f1_examples():
    assert hyp2f1_terminating(0, 3.3, 1.7, 0.4) == 1.0
    assert hyp2f1_terminating(1, 3.0, 2.0, 0.25) == pytest.approx(1 - 3.0 / 2.0 * 0.25, rel=1e-15)
    assert hyp2f1_terminating(2, 5, 1, 0.5) == pytest.approx(-0.25, rel=1e-14)


@given(st.integers(0, 12), st.floats(-20, 20), st.floats(0.3, 20), st.floats(0, 0.999))
def test_hyp2f1_against_mpmath(n, b, c, z):
    ref = float(mp.hyp2f1(-n, b, c, z))
    got = hyp2f1_terminating(n, b, c, z)
    scale = float(sum(abs(mp.rf(-n, k) * mp.rf(b, k) / (mp.rf(c, k) * mp.factorial(k))) * z**k for k in range(n + 1)))
    assert abs(got - ref) <= 1e-13 * scale


@given(st.integers(0, 8), st.floats(-10, 10), st.floats(0.3, 10), st.floats(0.01, 0.95))
def test_hyp2f1_derivative_against_mpmath(n, b, c, z):
    ref = float(mp.diff(lambda t: mp.hyp2f1(-n, b, c, t), z))
    assert hyp2f1_terminating_dz(n, b, c, z) == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_hyp2f1_pole_names_k():
    with pytest.raises(HypergeometricPoleError, match="k = 3"):
        hyp2f1_terminating(4, 1.0, -2.0, 0.3)
    # a pole beyond the last term is harmless
    assert hyp2f1_terminating(2, 1.0, -2.0, 0.3) == pytest.approx(float(mp.hyp2f1(-2, 1, -2, 0.3)))


def test_hyp2f1_vectorised():
    z = np.linspace(0, 0.9, 7)
    assert np.allclose(hyp2f1_terminating(3, 2.5, 1.5, z), [hyp2f1_terminating(3, 2.5, 1.5, t) for t in z])


# --- radial profiles ------------------------------------------------------------------


def test_profile_vanishes_at_origin_for_positive_m():
    for m in (1, 2, 5):
        assert radial_profile(1, m, 1, D(5, RS)).value(0.0) == 0.0


def test_n_zero_profile_is_algebraic():
    f = radial_profile(0, 2, 1, D(5, RS))
    p = np.linspace(0.1, 5, 9)
    assert np.allclose(f.value(p), p**f.power * (1 + f.beta * p**2) ** (-f.decay), rtol=1e-15)


def test_sc_and_momentum_forms_agree_example():
    d = D(5, RS)
    f = radial_profile(1, 0, 1, d)
    row = spinor_row(0, d)
    power, decay, b, c = printed_momentum_parameters(row.key, 1, 1, 0, d)
    printed = 1.0**power * (1 + d.beta) ** (-decay) * hyp2f1_terminating(1, b, c, d.beta / (1 + d.beta))
    q = math.atan(math.sqrt(d.beta))
    via_sc = d.beta ** (-f.sin_power / 2) * f.sc_form(q)
    assert printed == pytest.approx(via_sc, rel=1e-12)
    assert f.value(1.0) == pytest.approx(via_sc, rel=1e-12)


def _admissible_component(n, m, comp, rho, rho_star):
    d = D(rho, rho_star)
    row = spinor_row(m, d)
    if row is None:
        return None
    shift = row.upper_shift if comp == 1 else row.lower_shift
    if n + shift < 0:
        return None
    return d, row, n + shift


@given(
    st.integers(0, 5), st.integers(-6, 6), st.sampled_from([1, 2]),
    st.sampled_from(REGIMES + [1.3, -2.7, 33.0]), st.floats(8, 60),
)
def test_form_equivalence(n, m, comp, rho_scale, rho_star):
    rho = rho_scale * rho_star / RS
    assume(abs(abs(rho) - rho_star) > 1e-6)
    got = _admissible_component(n, m, comp, rho, rho_star)
    assume(got is not None)
    d, row, idx = got
    f = radial_profile(idx, m, comp, d)
    power, decay, b, c = printed_momentum_parameters(row.key, comp, idx, m, d)
    p = default_p_grid(d, 50)
    z = d.beta * p**2 / (1 + d.beta * p**2)
    printed = p**power * (1 + d.beta * p**2) ** (-decay) * hyp2f1_terminating(idx, b, c, z)
    # pointwise, relative to the profile's scale (nodes make a per-point ratio meaningless)
    scale = np.max(np.abs(printed))
    assert np.max(np.abs(f.from_sc(p) - printed)) <= 1e-12 * scale
    assert np.max(np.abs(f.value(p) - printed)) <= 1e-12 * scale


@pytest.mark.parametrize("rho", REGIMES)
@pytest.mark.parametrize("comp", [1, 2])
def test_sc_form_solves_trigonometric_eigenproblem(rho, comp):
    # -phi'' + ((nu^2 - 1/4)/s^2 + (mu^2 - 1/4)/c^2) phi = 4 k^2 phi, evaluated with mpmath
    mp.mp.dps = 40
    d = D(rho, RS)
    for m in range(-4, 5):
        row = spinor_row(m, d)
        if row is None:
            continue
        label = row.upper_class if comp == 1 else row.lower_class
        pt = pt_parameters(m, comp, d)
        for n in range(3):
            f = radial_profile(n, m, comp, d, label)
            A, B, b, c = map(mp.mpf, (f.sin_power, f.cos_power, f.hb, f.hc))

            def phi(q):
                s, co = mp.sin(q), mp.cos(q)
                return s**A * co**B * mp.hyp2f1(-n, b, c, s**2)

            mu2, nu2 = mp.mpf(pt.mu) ** 2, mp.mpf(pt.nu) ** 2
            k2 = k_squared(label, n, pt)
            for q in (mp.mpf("0.3"), mp.mpf("0.8"), mp.mpf("1.2")):
                s, co = mp.sin(q), mp.cos(q)
                lhs = -mp.diff(phi, q, 2) + ((nu2 - 0.25) / s**2 + (mu2 - 0.25) / co**2) * phi(q)
                # inputs carry double rounding, so agreement is to ~1e-16 relative
                assert float(abs(lhs - 4 * k2 * phi(q))) <= 1e-12 * max(1.0, float(abs(4 * k2 * phi(q))))


@pytest.mark.parametrize("rho", REGIMES)
def test_profiles_vanish_at_both_ends(rho):
    d = D(rho, RS)
    for m in range(-5, 6):
        row = spinor_row(m, d)
        if row is None:
            continue
        for comp, label in ((1, row.upper_class), (2, row.lower_class)):
            f = radial_profile(2, m, comp, d, label)
            # phi ~ q^A at q -> 0 and (pi/2 - q)^B at q -> pi/2, with A, B > 0
            assert f.sin_power > 0 and f.cos_power > 0
            for delta in (1e-6, 1e-9):
                r0 = f.sc_form(delta) / f.sc_form(1e-3) / (delta / 1e-3) ** f.sin_power
                r1 = f.sc_form(math.pi / 2 - delta) / f.sc_form(math.pi / 2 - 1e-3) / (delta / 1e-3) ** f.cos_power
                assert r0 == pytest.approx(1.0, rel=1e-2) and r1 == pytest.approx(1.0, rel=1e-2)
            assert np.isfinite(f.value(0.0))
            assert f.power - 2 * f.decay < 0 and abs(f.value(1e12)) < abs(f.value(1e6))


def test_inadmissible_profile_names_predicate():
    with pytest.raises(InadmissibleStateError, match=r"class \(d\)"):
        radial_profile(0, 3, 1, D(25, RS), "d")
    with pytest.raises(InadmissibleStateError):
        radial_profile(-1, 0, 1, D(25, RS))


def test_profile_derivative_matches_mpmath():
    d = D(-5, RS)
    f = radial_profile(3, 1, 2, d)
    for p in (0.2, 1.0, 4.0):
        h = 1e-5 * p
        ref = (f.value(p + h) - f.value(p - h)) / (2 * h)
        assert f.derivative(p) == pytest.approx(ref, rel=1e-7)


# --- spinors -------------------------------------------------------------------------------


def test_positive_singlet():
    s = assemble_spinor(0, 0, D(-5, RS), 1)
    assert s.energy == 1.0 and s.lower is None and s.upper is not None
    assert np.all(s.lower_values(np.linspace(0, 5, 11)) == 0.0)


def test_negative_ground_state():
    s = assemble_spinor(0, -2, D(5, RS), -1)
    assert s.energy == -1.0 and s.upper is None and s.lower is not None
    assert np.all(s.upper_values(np.linspace(0, 5, 11)) == 0.0)


def test_external_two_component_state():
    s = assemble_spinor(0, 0, D(25, RS), 1)
    assert s.energy == pytest.approx(math.sqrt(351), rel=1e-14)
    assert s.upper is not None and s.lower is not None
    assert max(intertwining_residuals(s)) <= 1e-10


def test_orphan_is_discarded():
    with pytest.raises(DiscardedSolutionError):
        assemble_spinor(1, 2, D(-4, RS), 1)


def test_printed_coefficients_checked(caplog):
    with caplog.at_level(logging.INFO, logger="diracgup.wavefunction"):
        aa = assemble_spinor(1, 1, D(5, RS), 1)
        bb = assemble_spinor(1, -4, D(5, RS), 1)
    assert aa.coefficient_source == "printed"
    assert bb.coefficient_source == "derived"
    # the printed bb value fails the check, and the substituted one passes it
    assert bb.printed_coefficient != pytest.approx(bb.coefficient)
    assert max(intertwining_residuals(bb)) <= 1e-10


@pytest.mark.parametrize("rho", REGIMES + [0.9, -0.9, 13.0])
@pytest.mark.parametrize("branch", [1, -1])
def test_intertwining_all_rows(rho, branch):
    d = D(rho, RS)
    seen = 0
    for m in range(-6, 7):
        if spinor_row(m, d) is None:
            continue
        for n in range(4):
            try:
                s = assemble_spinor(n, m, d, branch)
            except DiscardedSolutionError:
                continue
            r1, r2 = intertwining_residuals(s)
            assert max(r1, r2) <= 1e-10, (n, m, s.row)
            seen += 1
    assert seen > 20


def test_apply_P_zero_on_singlet_zero_component():
    s = assemble_spinor(0, 0, D(-5, RS), 1)
    p = default_p_grid(D(-5, RS), 100)
    # P- acting on the vanishing lower side, and P+ on the upper giving zero
    assert np.allclose(apply_P(1, s.upper, D(-5, RS), p), 0.0, atol=1e-12)


def test_apply_P_at_origin_uses_limit():
    d = D(5, RS)
    f = radial_profile(0, 1, 1, d)  # p^1 behaviour
    p = np.array([0.0, 1e-7])
    v = apply_P(1, f, d, p)
    assert v[0] == pytest.approx(v[1], abs=1e-5)


def test_apply_P_needs_lambda():
    with pytest.raises(DiracGUPError):
        apply_P(1, radial_profile(0, 1, 1, D(5, RS)), lam=0.0, beta=0.1, p=np.array([1.0]))


# --- measure --------------------------------------------------------------------------------


def test_normalization_idempotent():
    s = normalized(assemble_spinor(2, 1, D(5, RS), 1))
    assert norm_squared(s).value == pytest.approx(1.0, abs=1e-10)
    assert s.upper_values(np.array([1e-3]))[0] > 0 or s.upper.power > 0


def test_phase_convention_upper_positive_at_first_maximum():
    d = D(5, RS)
    for n, m in ((1, 0), (2, 1), (3, -1)):
        s = normalized(assemble_spinor(n, m, d, 1))
        p = default_p_grid(d, 4000)
        v = s.upper_values(p)
        a = np.abs(v)
        j = next(i for i in range(len(a)) if (i == 0 or a[i] >= a[i - 1]) and (i == len(a) - 1 or a[i] >= a[i + 1]))
        assert v[j] > 0


@pytest.mark.parametrize("rho, m", [(5, 1), (5, -2), (5, -5), (-5, 1), (-5, 3), (25, 0), (-25, -2)])
def test_orthogonality_same_m(rho, m):
    d = D(rho, RS)
    states = [normalized(assemble_spinor(n, m, d, 1)) for n in range(1, 4)]
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(overlap(states[i], states[j]).value) <= 1e-8


def test_different_m_overlap_vanishes_by_angle():
    d = D(5, RS)
    assert overlap(assemble_spinor(1, 0, d, 1), assemble_spinor(1, 1, d, 1)).value == 0.0


def test_flat_measure_limit():
    # with beta -> 0 the weight tends to 1: compare with a flat-measure quadrature
    from scipy import integrate

    d = D(1e-3, 1e7)
    s = assemble_spinor(0, 1, d, 1)
    flat = 2 * math.pi * integrate.quad(lambda p: float(s.upper_values(p) ** 2 + s.lower_values(p) ** 2) * p, 0, np.inf)[0]
    assert norm_squared(s).value == pytest.approx(flat, rel=1e-6)


def test_tail_too_large():
    s = assemble_spinor(0, 0, D(25, RS), 1)
    with pytest.raises(QuadratureError, match="p_max"):
        norm_squared(s, QuadratureSpec(p_max=0.5))
    full = norm_squared(s).value
    assert norm_squared(s, QuadratureSpec(p_max=1e7)).value == pytest.approx(full, rel=1e-9)


# --- position operator ------------------------------------------------------------------------------


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.3, 2), st.floats(0, 1), st.integers(0, 1))
def test_commutator_representation(cx, cy, w, beta, i):
    g = gaussian((cx, cy), w)
    px, py = np.meshgrid(np.linspace(-3, 3, 13), np.linspace(-3, 3, 13))
    want = 1j * (1 + beta * (px**2 + py**2)) * g.value(px, py)
    got = commutator(i, i, g, beta)(px, py)
    assert np.max(np.abs(got - want)) <= 1e-10 * np.max(np.abs(want))
    assert np.max(np.abs(commutator(i, 1 - i, g, beta)(px, py))) <= 1e-12


def test_x_hat_on_gaussian():
    g = gaussian((0.0, 0.0), 1.0)
    v = x_hat(0, g, 0.5)(1.0, 0.0)
    assert v == pytest.approx(1j * 1.5 * -math.exp(-0.5))
    tp = times_p(0, g)
    assert tp.value(2.0, 1.0) == pytest.approx(2.0 * g.value(2.0, 1.0))


# --- dumps -----------------------------------------------------------------------------------------


def test_profile_csv():
    s = normalized(assemble_spinor(1, 0, D(5, RS), 1))
    text = profile_csv(s, np.array([0.0, 0.5, 1.0]), theta=0.3)
    lines = text.strip("\n").split("\n")
    assert lines[0] == "p,upper_re,upper_im,lower_re,lower_im"
    vals = [float(x) for x in lines[2].split(",")]
    up, lo = s.psi(0.5, 0.3)
    assert vals[1] == pytest.approx(up.real, rel=1e-14) and vals[4] == pytest.approx(lo.imag, rel=1e-14)
    assert "-0," not in text
