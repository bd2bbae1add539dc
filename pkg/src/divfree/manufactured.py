"""Catalog of sampled fields with known verification outcomes.

Every case builds grids at a requested resolution n (spacing 1/n on each
axis), so halving the spacing means doubling n and refinement orders are
clean log2 ratios.  Expected outcomes are part of the catalog: residuals
that vanish identically, residuals that shrink at second order, and
counterexamples whose residuals stay above a floor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import dualnum
from .conventions import em_to_coeffs, momentum_to_coeffs
from .exterior import exterior_derivative_table, form_basis
from .fields import (
    GridField,
    VariationField,
    bernoulli_check,
    closedness_residual,
    div_T_residual,
    entropy_transport_residual,
    first_variation,
    observed_order,
)
from .models import LagrangianModel, build_model


@dataclass(frozen=True)
class ManufacturedCase:
    name: str
    kind: str          # divergence | closedness | entropy | bernoulli
    expected: str      # zero | order2 | floor
    floor: float
    tol: float
    description: str


# oblique propagation direction: an axis-aligned light-speed wave makes the
# central-difference stencils cancel exactly, leaving nothing to refine
_WAVE_K = np.array([1.0, 2.0, 2.0]) / 3.0
_WAVE_E = np.array([2.0, -1.0, 0.0]) / math.sqrt(5.0)
_WAVE_B = np.cross(_WAVE_K, _WAVE_E)


def _case_plane_wave(n):
    model = build_model("maxwell-linear", {})

    def fn(Y):
        phase = Y[..., 1:] @ _WAVE_K - Y[..., 0]
        amp = np.cos(phase)[..., None]
        return em_to_coeffs(_WAVE_E * amp, _WAVE_B * amp)

    grid = GridField.from_function(fn, 4, 2, (n,) * 4, (1.0 / n,) * 4)
    return model, grid


def _case_uniform_gas(n):
    model = build_model("gas", {})
    A = momentum_to_coeffs(np.array([1.3, 0.4]))

    def fn(Y):
        return np.broadcast_to(A, Y.shape[:-1] + (2,)).copy()

    grid = GridField.from_function(fn, 2, 1, (n, n), (1.0 / n, 1.0 / n),
                                   entropy_fn=lambda Y: np.full(Y.shape[:-1], 0.2))
    return model, grid


def _case_uniform_relativistic(n):
    model = build_model("relativistic", {})
    A = momentum_to_coeffs(np.array([2.0, 0.3, -0.1, 0.2]))

    def fn(Y):
        return np.broadcast_to(A, Y.shape[:-1] + (4,)).copy()

    grid = GridField.from_function(fn, 4, 3, (n,) * 4, (1.0 / n,) * 4)
    return model, grid


def _case_gas_imbalance(n):
    # time-independent density with zero flux: closed, but the pressure
    # gradient in the spatial row of Div T never decays
    model = build_model("gas", {})

    def fn(Y):
        rho = 1.0 + Y[..., 1] ** 2
        m = np.stack([rho, np.zeros_like(rho)], axis=-1)
        return momentum_to_coeffs(m)

    grid = GridField.from_function(fn, 2, 1, (n, n), (1.0 / n, 1.0 / n))
    return model, grid


def _case_closed_cubic(n):
    # gradient of a quartic potential: cubic components, so the central
    # difference is off by exactly h^2 in the third-derivative terms
    def fn(Y):
        x0, x1, x2 = Y[..., 0], Y[..., 1], Y[..., 2]
        return np.stack([3 * x0 ** 2 * x1 + x2 ** 3,
                         x0 ** 3 + 3 * x1 ** 2 * x2,
                         x1 ** 3 + 3 * x2 ** 2 * x0], axis=-1)

    return GridField.from_function(fn, 3, 1, (n,) * 3, (1.0 / n,) * 3)


def _case_advected_entropy(n):
    # entropy-coupled g so the nondegeneracy factor d p / d s is nonzero
    model = build_model("gas", {"mu": 1.0})
    A = momentum_to_coeffs(np.array([1.0, 0.7]))

    def fn(Y):
        return np.broadcast_to(A, Y.shape[:-1] + (2,)).copy()

    grid = GridField.from_function(fn, 2, 1, (n, n), (1.0 / n, 1.0 / n),
                                   entropy_fn=lambda Y: np.sin(Y[..., 1] - 0.7 * Y[..., 0]))
    return model, grid


def _case_entropy_shear(n):
    model = build_model("gas", {"mu": 1.0})
    A = momentum_to_coeffs(np.array([1.0, 1.0]))

    def fn(Y):
        return np.broadcast_to(A, Y.shape[:-1] + (2,)).copy()

    grid = GridField.from_function(fn, 2, 1, (n, n), (1.0 / n, 1.0 / n),
                                   entropy_fn=lambda Y: Y[..., 1])
    return model, grid


def _bernoulli_grids(n, trig):
    h = 1.0 / n
    t = h * np.arange(n)[:, None]
    x = h * np.arange(n)[None, :]
    if trig:
        psi = -1.5 * t + np.sin(x) + 0.0 * t
        rho = 1.5 - 0.5 * np.cos(x) ** 2 + 0.0 * t
    else:
        psi = -1.5 * t + x + 0.0 * t
        rho = np.ones((n, n))
    return np.broadcast_to(psi, (n, n)).copy(), np.broadcast_to(rho, (n, n)).copy(), (h, h)


def _case_bernoulli_linear(n):
    model = build_model("gas", {})
    psi, rho, spacing = _bernoulli_grids(n, trig=False)
    return model, psi, rho, spacing


def _case_bernoulli_trig(n):
    model = build_model("gas", {})
    psi, rho, spacing = _bernoulli_grids(n, trig=True)
    return model, psi, rho, spacing


_BUILDERS = {
    "maxwell-plane-wave": _case_plane_wave,
    "uniform-gas": _case_uniform_gas,
    "uniform-relativistic": _case_uniform_relativistic,
    "gas-pressure-imbalance": _case_gas_imbalance,
    "closed-cubic": _case_closed_cubic,
    "advected-entropy": _case_advected_entropy,
    "entropy-shear": _case_entropy_shear,
    "bernoulli-linear": _case_bernoulli_linear,
    "bernoulli-trig": _case_bernoulli_trig,
}

CASES = {
    "maxwell-plane-wave": ManufacturedCase(
        "maxwell-plane-wave", "divergence", "order2", 0.0, 0.0,
        "vacuum wave along (1, 2, 2) / 3 with E, B transverse; every row decays at order 2"),
    "uniform-gas": ManufacturedCase(
        "uniform-gas", "divergence", "zero", 0.0, 1e-12,
        "constant (rho, q): all differences vanish identically"),
    "uniform-relativistic": ManufacturedCase(
        "uniform-relativistic", "divergence", "zero", 0.0, 1e-13,
        "constant timelike momentum: all differences vanish identically"),
    "gas-pressure-imbalance": ManufacturedCase(
        "gas-pressure-imbalance", "divergence", "floor", 0.5, 0.0,
        "rho = 1 + x1^2 at rest: closed but not a solution; spatial row holds the pressure gradient"),
    "closed-cubic": ManufacturedCase(
        "closed-cubic", "closedness", "order2", 0.0, 0.0,
        "gradient of a quartic potential; closedness residual is exactly h^2"),
    "advected-entropy": ManufacturedCase(
        "advected-entropy", "entropy", "order2", 0.0, 0.0,
        "s = sin(x - 0.7 t) riding on m = (1, 0.7): transport holds at order 2"),
    "entropy-shear": ManufacturedCase(
        "entropy-shear", "entropy", "floor", 0.9, 0.0,
        "s = x1 against m = (1, 1): transport residual is exactly 1"),
    "bernoulli-linear": ManufacturedCase(
        "bernoulli-linear", "bernoulli", "zero", 0.0, 1e-12,
        "psi = -1.5 t + x1 with rho = 1: both residuals vanish to roundoff"),
    "bernoulli-trig": ManufacturedCase(
        "bernoulli-trig", "bernoulli", "order2", 0.0, 0.0,
        "psi = -1.5 t + sin(x1), rho = 1.5 - cos(x1)^2 / 2: residual decays at order 2"),
}


def list_cases():
    return sorted(CASES)


def run_case(name, n):
    """Evaluate one catalog case at resolution n and report its residuals."""
    if name not in CASES:
        raise KeyError(f"unknown case {name!r}; choices: {', '.join(list_cases())}")
    case = CASES[name]
    built = _BUILDERS[name](n)
    report = {"case": name, "kind": case.kind, "n": n,
              "expected": case.expected, "description": case.description}
    if case.expected == "floor":
        report["floor"] = case.floor
    if case.expected == "zero":
        report["tol"] = case.tol
    if case.kind == "divergence":
        model, grid = built
        rows = div_T_residual(model, grid)
        report["rows"] = [float(r) for r in rows]
        report["residual"] = float(rows.max())
    elif case.kind == "closedness":
        report["residual"] = float(closedness_residual(built))
    elif case.kind == "entropy":
        model, grid = built
        r = entropy_transport_residual(model, grid)
        report["residual"] = r["residual"]
        report["factor_min"] = r["factor_min"]
        report["factor_max"] = r["factor_max"]
    elif case.kind == "bernoulli":
        model, psi, rho, spacing = built
        r = bernoulli_check(model, psi, rho, spacing)
        report["curl_residual"] = r["curl_residual"]
        report["residual"] = r["bernoulli_residual"]
    return report


def case_refinement(name, resolutions):
    """Residuals across resolutions plus observed orders between neighbours."""
    reports = [run_case(name, n) for n in resolutions]
    residuals = [r["residual"] for r in reports]
    orders = [observed_order(residuals[k], residuals[k + 1])
              for k in range(len(residuals) - 1)
              if residuals[k] > 0 and residuals[k + 1] > 0]
    return {"case": name, "resolutions": list(resolutions),
            "residuals": residuals, "orders": orders, "reports": reports}


# ---------------------------------------------------------------------------
# randomized closed fields and variations for the first-variation study


def closed_trig_form(d, p, seed, modes=2):
    """Analytic closed degree-p field: the exterior derivative of a random
    trigonometric degree-(p-1) potential plus constants.  Mode vectors have
    entries in {-1, 0, 1}."""
    rng = np.random.default_rng(seed)
    C = form_basis(d, p).size
    consts = rng.uniform(-0.5, 0.5, C)
    if p == d:
        k = rng.integers(-1, 2, d)
        if not k.any():
            k[0] = 1
        amp = rng.uniform(0.3, 1.0)
        phase = rng.uniform(0.0, 2 * math.pi)

        def fn(Y):
            out = np.empty(Y.shape[:-1] + (1,))
            out[..., 0] = consts[0] + amp * np.sin(2 * math.pi * (Y @ k) + phase)
            return out

        return fn

    lower = form_basis(d, p - 1)
    ks = np.empty((lower.size, modes, d), dtype=int)
    amps = rng.uniform(0.3, 1.0, (lower.size, modes))
    phases = rng.uniform(0.0, 2 * math.pi, (lower.size, modes))
    for a in range(lower.size):
        for m in range(modes):
            k = rng.integers(-1, 2, d)
            if not k.any():
                k[0] = 1
            ks[a, m] = k
    table = exterior_derivative_table(d, p - 1)
    basis = form_basis(d, p)

    def grad_lower(Y, slot, axis):
        # d/dy_axis of the potential component in this slot
        out = 0.0
        for m in range(modes):
            arg = 2 * math.pi * (Y @ ks[slot, m]) + phases[slot, m]
            out = out + amps[slot, m] * 2 * math.pi * ks[slot, m, axis] * np.cos(arg)
        return out

    def fn(Y):
        out = np.zeros(Y.shape[:-1] + (basis.size,))
        for J, terms in table:
            col = basis.index[J]
            acc = 0.0
            for axis, slot, sign in terms:
                acc = acc + sign * grad_lower(Y, slot, axis)
            out[..., col] = acc + consts[col]
        return out

    return fn


def _bump_profile(x, a, b):
    """C^3 compactly supported profile ((x-a)(b-x))^4, normalized to peak 1.

    The quartic seam keeps the third derivative continuous, so the seam
    contributes only at fourth order to central-difference sums and the
    interior h^2 term always dominates refinement studies.
    """
    x = np.asarray(x, dtype=float)
    mid = ((b - a) / 2.0) ** 8
    y = (x - a) * (b - x)
    return np.where((x > a) & (x < b), y ** 4 / mid, 0.0)


def _bump_profile_deriv(x, a, b):
    x = np.asarray(x, dtype=float)
    mid = ((b - a) / 2.0) ** 8
    y = (x - a) * (b - x)
    dy = (a + b) - 2.0 * x
    return np.where((x > a) & (x < b), 4.0 * y ** 3 * dy / mid, 0.0)


def bump_variation(d, dims, spacing, seed, support=(0.15, 0.7)):
    """Smooth compactly supported velocity field for flow variations:
    a product of per-axis bumps times per-component trig modulation.

    The default support keeps a two-node margin free down to 7 nodes per
    axis while staying as wide (hence as gently curved) as possible.
    """
    rng = np.random.default_rng(seed)
    a, b = support
    cs = rng.uniform(0.5, 1.0, d) * rng.choice([-1.0, 1.0], d)
    ks = rng.integers(-1, 2, (d, d))
    phases = rng.uniform(0.0, 2 * math.pi, d)

    def pieces(Y, with_deriv):
        bump_ax = [_bump_profile(Y[..., ax], a, b) for ax in range(d)]
        prod = bump_ax[0].copy()
        for ax in range(1, d):
            prod = prod * bump_ax[ax]
        mods = []
        dmods = []
        for i in range(d):
            arg = 2 * math.pi * (Y @ ks[i]) + phases[i]
            mods.append(cs[i] + 0.5 * np.sin(arg))
            if with_deriv:
                dmods.append(math.pi * np.cos(arg))   # d/darg of 0.5 sin, times 2pi k below
        return bump_ax, prod, mods, dmods

    def value_from(prod, mods):
        return np.stack([prod * mods[i] for i in range(d)], axis=-1)

    def jac_from(Y, bump_ax, prod, mods, dmods):
        out = np.empty(Y.shape[:-1] + (d, d))
        for j in range(d):
            prod_dj = _bump_profile_deriv(Y[..., j], a, b)
            for ax in range(d):
                if ax != j:
                    prod_dj = prod_dj * bump_ax[ax]
            for i in range(d):
                out[..., i, j] = prod_dj * mods[i] + prod * dmods[i] * ks[i, j]
        return out

    def func(Y):
        _, prod, mods, _ = pieces(Y, with_deriv=False)
        return value_from(prod, mods)

    def jac(Y):
        bump_ax, prod, mods, dmods = pieces(Y, with_deriv=True)
        return jac_from(Y, bump_ax, prod, mods, dmods)

    def func_jac(Y):
        bump_ax, prod, mods, dmods = pieces(Y, with_deriv=True)
        return value_from(prod, mods), jac_from(Y, bump_ax, prod, mods, dmods)

    return VariationField.from_function(func, dims, spacing, jac=jac,
                                        func_jac=func_jac)


def study_model(d, p, seed):
    """Generic smooth nonquadratic density for the variation study:
    L = A^T Q A / 2 + sqrt(1 + |A|^2) + 0.2 s (w . A)."""
    rng = np.random.default_rng(seed)
    C = form_basis(d, p).size
    Q = rng.standard_normal((C, C))
    Q = 0.5 * (Q + Q.T) / C
    w = rng.standard_normal(C)

    def fn(comps, s):
        quad = 0.0
        norm2 = 0.0
        lin = 0.0
        for aa in range(C):
            norm2 = norm2 + comps[aa] * comps[aa]
            lin = lin + w[aa] * comps[aa]
            for bb in range(C):
                quad = quad + Q[aa, bb] * comps[aa] * comps[bb]
        return 0.5 * quad + dualnum.sqrt(1.0 + norm2) + 0.2 * s * lin

    def grad_fn(A, s):
        A = np.asarray(A, dtype=float)
        root = np.sqrt(1.0 + np.einsum("...a,...a->...", A, A))
        out = A @ Q + A / root[..., None]
        s_arr = np.asarray(s, dtype=float)
        if s_arr.ndim:
            return out + 0.2 * s_arr[..., None] * w
        return out + 0.2 * float(s_arr) * w

    return LagrangianModel(f"study-d{d}p{p}", d, p, fn, grad_fn=grad_fn)


def variation_study(d, p, seed=0, levels=3, n0=8, eps0=0.01, substeps=8):
    """Joint (h, eps) -> (h/2, eps/2) refinement of the discrete first
    variation against the tensor pairing; the gap should shrink at order 2.

    The variation support snaps to nodes of the coarsest grid, so every
    refinement sees the same seam geometry and the error expansion in h
    stays clean.
    """
    model = study_model(d, p, seed)
    field_fn = closed_trig_form(d, p, seed + 101)
    # nudge inward so margin nodes stay strictly outside despite rounding
    support = (2.0 / n0 + 1e-12, (n0 - 2.0) / n0 - 1e-12)
    rows = []
    for level in range(levels):
        n = n0 * (1 << level)
        eps = eps0 / (1 << level)
        dims = (n,) * d
        spacing = (1.0 / n,) * d
        grid = GridField.from_function(
            field_fn, d, p, dims, spacing,
            entropy_fn=lambda Y: np.sin(2 * math.pi * Y[..., 0]) * 0.5)
        var = bump_variation(d, dims, spacing, seed + 202, support=support)
        numeric, pairing = first_variation(model, grid, var, eps, substeps)
        rows.append({"n": n, "eps": eps, "numeric": numeric,
                     "pairing": pairing, "error": abs(numeric - pairing)})
    errors = [r["error"] for r in rows]
    orders = [observed_order(errors[k], errors[k + 1])
              for k in range(len(errors) - 1) if errors[k + 1] > 0]
    return {"d": d, "p": p, "seed": seed, "levels": rows, "orders": orders}
