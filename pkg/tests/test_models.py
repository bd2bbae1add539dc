"""Density models: hand values, gradients, admissibility, error paths."""
import numpy as np
import pytest

from divfree import (
    EvaluationDomainError,
    LuminalStateError,
    SingularGradientError,
    ad_gradient,
    build_model,
    coeffs_to_momentum,
    em_to_coeffs,
    finite_difference_gradient,
    list_models,
    model_from_expression,
    model_isotropic_p1,
    momentum_to_coeffs,
    state_to_form,
)
from divfree.models import EMState, GasState, RelativisticState

from helpers import rel_gap, sampled_states

BUILTIN = ("iso-p1", "minimal-surface", "gas", "gas-polytropic",
           "relativistic", "relativistic-powerlaw", "relativistic-limit",
           "maxwell-linear", "maxwell-lorentz", "maxwell-anisotropic")


def test_registry_lists_the_builtins():
    listed = {entry["name"]: entry for entry in list_models()}
    for name in BUILTIN + ("user-expr",):
        assert name in listed
        assert listed[name]["summary"]
    with pytest.raises(KeyError):
        build_model("no-such-model")


def test_isotropic_hand_values():
    m = build_model("iso-p1")
    A = np.array([3.0, 4.0])
    assert m.d == 2 and m.p == 1
    assert m.evaluate(A) == 12.5
    assert np.abs(m.gradient(A) - A).max() < 1e-14
    # entropy slot is inert for this density
    assert m.evaluate(A, 0.9) == m.evaluate(A, -0.3)


def test_minimal_surface_hand_values():
    m = build_model("minimal-surface")
    A = np.array([3.0, 4.0, 12.0])
    assert m.d == 3 and m.p == 1
    assert abs(m.evaluate(A) - np.sqrt(170.0)) < 1e-13
    assert np.abs(m.gradient(A) - A / np.sqrt(170.0)).max() < 1e-13


def test_gas_hand_values():
    gas = build_model("gas")  # polytropic exponent 2, no entropy coupling
    st = GasState(rho=1.0, q=[1.0])
    A = momentum_to_coeffs(st.m)
    assert gas.evaluate(A) == 0.0  # |q|^2 / (2 rho) - rho^2 / 2 at (1, 1)
    assert np.abs(gas.m_gradient(st.m, 0.0) - np.array([-1.5, 1.0])).max() < 1e-14
    assert gas.pressure(1.0, 0.0) == 0.5
    assert gas.pressure(2.0, 0.0) == 2.0
    assert gas.internal_energy(2.0, 0.0) == 2.0
    assert gas.pressure_entropy_derivative(1.0, 0.0) == 0.0


def test_gas_polytropic_entropy_coupling():
    gas = build_model("gas-polytropic")  # n = 3, gamma = 1.4, mu = 1
    gamma, mu = 1.4, 1.0
    for rho, s in ((1.0, 0.0), (1.7, 0.4), (0.6, -0.8)):
        p = (1.0 - 1.0 / gamma) * np.exp(mu * s) * rho ** gamma
        assert abs(gas.pressure(rho, s) - p) < 1e-12
        assert abs(gas.pressure_entropy_derivative(rho, s) - mu * p) < 1e-10
    with pytest.raises(ValueError):
        GasState(rho=-1.0, q=[0.0, 0.0, 0.0])


def test_relativistic_normalization_and_pressure():
    rel = build_model("relativistic")  # power-law exponent 1.5, c = 1
    m = np.array([2.0, 0.3, -0.1, 0.2])
    rho = rel.rho_of(m)
    assert abs(rho - np.sqrt(3.86)) < 1e-14
    u = m / rho
    assert abs(u @ rel.Lam @ u + 1.0) < 1e-14
    e = rel.energy_density(rho, 0.0)
    p = rel.pressure(rho, 0.0)
    assert abs(p - 0.5 * e) < 1e-13  # (kappa - 1) e c^2 with kappa = 3/2
    with pytest.raises(LuminalStateError):
        rel.rho_of(np.array([1.0, 2.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        RelativisticState(m=[1.0, 0.0])


def test_powerlaw_pressure_identity_and_flag():
    for kappa in (1.1, 4.0 / 3.0, 1.9):
        mdl = build_model("relativistic-powerlaw", {"kappa": kappa})
        rho = mdl.rho_of(np.array([2.0, 0.3, -0.1, 0.2]))
        e = mdl.energy_density(rho, 0.0)
        p = mdl.pressure(rho, 0.0)
        assert abs(p - (kappa - 1.0) * e * mdl.c ** 2) < 1e-12 * max(1.0, abs(p))
        assert mdl.ultrarelativistic == (kappa == 4.0 / 3.0)


def test_maxwell_linear_fields_and_density():
    mx = build_model("maxwell-linear")
    E = np.array([0.4, -0.2, 0.9])
    B = np.array([0.1, 0.8, -0.3])
    D, H, W = mx.fields(E, B, 0.0)
    assert np.abs(D - E).max() == 0.0
    assert np.abs(H - B).max() == 0.0
    assert abs(W - 0.5 * (E @ E + B @ B)) < 1e-14
    assert abs(mx.evaluate(em_to_coeffs(E, B)) - 0.5 * (E @ E - B @ B)) < 1e-14
    with pytest.raises(ValueError):
        EMState(E=[1.0, 0.0], B=[0.0, 0.0, 0.0])


def test_maxwell_lorentz_depends_only_on_the_invariants():
    lor = build_model("maxwell-lorentz")
    a, b, cxy = lor.params["a"], lor.params["b"], lor.params["cxy"]
    rng = np.random.default_rng(2)
    for _ in range(5):
        E = rng.standard_normal(3)
        B = rng.standard_normal(3)
        i1 = 0.5 * (E @ E - B @ B)
        i2 = E @ B
        want = i1 + a * i1 ** 2 + b * i2 ** 2 + cxy * i1 * i2
        assert abs(lor.evaluate(em_to_coeffs(E, B)) - want) < 1e-12


def test_maxwell_anisotropic_fields():
    anis = build_model("maxwell-anisotropic")
    E = np.array([0.4, -0.2, 0.9])
    B = np.array([0.1, 0.8, -0.3])
    D, H, W = anis.fields(E, B, 0.0)
    assert np.abs(D - 2.0 * E).max() < 1e-14
    assert np.abs(H).max() == 0.0
    assert abs(W - E @ E) < 1e-14


@pytest.mark.parametrize("name", BUILTIN)
def test_gradient_routes_agree(name):
    # closed-form / dual-number / finite-difference gradients line up
    model = build_model(name)
    A, s = sampled_states(model, 25, seed=101)
    closed = model.gradient(A, s)
    dual = ad_gradient(model)(A, s)
    fd = finite_difference_gradient(model, A, s)
    assert rel_gap(closed, dual) < 1e-12
    assert rel_gap(closed, fd) < 1e-6


@pytest.mark.parametrize("name", BUILTIN)
def test_sampled_states_are_admissible(name):
    model = build_model(name)
    A, s = sampled_states(model, 200, seed=3)
    assert A.shape == (200, model.n_coeffs)
    assert s.shape == (200,)
    assert np.isfinite(model.evaluate(A, s)).all()
    if model.name.startswith(("gas",)):
        assert coeffs_to_momentum(A)[:, 0].min() > 0.0
    if model.name.startswith("relativistic"):
        m = coeffs_to_momentum(A)
        r2 = model.c ** 2 * m[:, 0] ** 2 - np.einsum("ij,ij->i", m[:, 1:], m[:, 1:])
        assert r2.min() > 0.0


def test_state_to_form_round_trips():
    gas = build_model("gas")
    st = GasState(rho=1.3, q=[0.4], s=0.2)
    form = state_to_form(gas, st)
    assert form.d == 2 and form.p == 1
    assert np.abs(form.coeffs - momentum_to_coeffs(st.m)).max() == 0.0
    assert form.entropy == 0.2
    mx = build_model("maxwell-linear")
    E = np.array([1.0, 0.0, 0.0])
    B = np.array([0.0, 1.0, 0.0])
    fm = state_to_form(mx, EMState(E=E, B=B))
    assert np.abs(fm.coeffs - em_to_coeffs(E, B)).max() == 0.0


def test_expression_model_matches_closed_isotropic():
    expr = model_from_expression("0.5*(A0^2 + A1^2)", 2, 1)
    iso = build_model("iso-p1")
    rng = np.random.default_rng(6)
    A = rng.standard_normal((30, 2))
    assert rel_gap(expr.evaluate(A, 0.0), iso.evaluate(A, 0.0)) < 1e-14
    assert rel_gap(expr.gradient(A, 0.0), iso.gradient(A, 0.0)) < 1e-12


def test_expression_model_uses_entropy():
    m = model_from_expression("s*A0 + A1^2", 2, 1)
    A = np.array([2.0, 3.0])
    assert m.evaluate(A, 0.5) == 10.0
    assert np.abs(m.gradient(A, 0.5) - np.array([0.5, 6.0])).max() < 1e-13


def test_expression_model_rejects_unknown_names():
    with pytest.raises(ValueError):
        model_from_expression("A7 + 1", 2, 1)
    with pytest.raises(ValueError):
        model_from_expression("__import__('os')", 2, 1)


def test_singular_radial_slope_is_refused():
    # a cone profile has slope 1 at the origin, so no gradient exists there
    cone = model_isotropic_p1(
        d=2, profile=lambda s, r: r,
        radial_slope=lambda s, r: np.ones_like(np.asarray(r, dtype=float)))
    with pytest.raises(SingularGradientError):
        cone.gradient(np.zeros((1, 2)), 0.0)
    away = cone.gradient(np.array([[3.0, 4.0]]), 0.0)
    assert np.abs(away - np.array([[0.6, 0.8]])).max() < 1e-12


def test_nan_gradient_raises_domain_error():
    m = model_from_expression("sqrt(A0)", 2, 1)
    with np.errstate(invalid="ignore"):
        with pytest.raises(EvaluationDomainError):
            m.gradient(np.array([-1.0, 0.5]), 0.0)
