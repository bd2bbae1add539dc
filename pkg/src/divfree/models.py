"""Lagrangian density models over closed-form coefficients.

A model packages the scalar density L together with its exact coefficient
gradient.  Built-in families: isotropic 1-form densities, classical gas
dynamics on momentum (d-1)-forms, the relativistic gas, and electromagnetic
2-form densities.  Densities evaluate on plain floats, numpy batches, or dual
numbers through a single code path, so closed-form gradients can always be
cross-checked against forward-mode differentiation and finite differences.

The entropy argument s is carried through evaluation but is never consumed by
tensor assembly; models that ignore it simply do so.
"""
from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field

import numpy as np

from . import dualnum
from .conventions import (
    coeffs_to_em,
    coeffs_to_em_gradient,
    coeffs_to_momentum,
    em_components,
    em_gradient_to_coeffs,
    em_to_coeffs,
    euclidean_metric,
    minkowski_metric,
    momentum_components,
    momentum_to_coeffs,
)
from .dualnum import Dual, derivative, value
from .exterior import PFormValue, form_basis


class EvaluationDomainError(ValueError):
    """A density produced NaN from finite inputs."""


class SingularGradientError(ValueError):
    """Radial density with nonzero slope queried at |A| = 0."""


class LuminalStateError(ValueError):
    """Relativistic momentum on or outside the light cone."""


class LagrangianModel:
    """A density L(A, s) with exact gradient in coefficient space.

    ``fn(comps, s)`` receives the coefficients as a list (floats, arrays or
    duals) and must return a matching scalar payload.  When no closed-form
    gradient is supplied, forward-mode duals provide one.
    """

    def __init__(self, name, d, p, fn, grad_fn=None, metric_hint=None,
                 sampler=None, params=None, validator=None):
        self.name = name
        self.d = d
        self.p = p
        self.basis = form_basis(d, p)
        self.n_coeffs = self.basis.size
        self._fn = fn
        self._grad_fn = grad_fn
        self.metric_hint = None if metric_hint is None else np.asarray(metric_hint, float)
        self._sampler = sampler
        self.params = dict(params or {})
        self._validator = validator

    def _coerce(self, A, s):
        if isinstance(A, PFormValue):
            if (A.d, A.p) != (self.d, self.p):
                raise ValueError(
                    f"model {self.name} expects (d={self.d}, p={self.p}), "
                    f"got (d={A.d}, p={A.p})")
            s = A.entropy if A.entropy is not None else s
            A = A.coeffs
        A = np.asarray(A, dtype=float)
        if A.shape[-1] != self.n_coeffs:
            raise ValueError(
                f"model {self.name} expects {self.n_coeffs} coefficients, "
                f"got trailing axis {A.shape[-1]}")
        return A, s

    def evaluate(self, A, s=0.0):
        A, s = self._coerce(A, s)
        if self._validator is not None:
            self._validator(A, s)
        comps = [A[..., k] for k in range(self.n_coeffs)]
        return self._fn(comps, s)

    def gradient(self, A, s=0.0):
        A, s = self._coerce(A, s)
        if self._validator is not None:
            self._validator(A, s)
        if self._grad_fn is not None:
            return self._grad_fn(A, s)
        return _ad_gradient_core(self._fn, self.n_coeffs, A, s)

    def gradient_component(self, A, s, raw):
        """Gradient read through an arbitrarily ordered index tuple,
        following the same sign rule as the coefficients themselves."""
        k, sign = self.basis.slot(tuple(raw))
        if sign == 0:
            return 0.0
        g = self.gradient(A, s)
        return sign * g[..., k]

    def entropy_derivative(self, A, s=0.0):
        A, s = self._coerce(A, s)
        comps = [A[..., k] for k in range(self.n_coeffs)]
        r = self._fn(comps, Dual(np.asarray(s, dtype=float) + 0.0, 1.0))
        return derivative(r, like=value(r))

    def sample_states(self, rng, n):
        """Batch of admissible states (A, s) with shapes (n, C) and (n,)."""
        if self._sampler is not None:
            return self._sampler(rng, n)
        A = rng.standard_normal((n, self.n_coeffs))
        s = 0.3 * rng.standard_normal(n)
        return A, s

    def __repr__(self):
        return f"<LagrangianModel {self.name} d={self.d} p={self.p}>"


def _ad_gradient_core(fn, n_coeffs, A, s):
    comps = [A[..., k] for k in range(n_coeffs)]
    cols = []
    for k in range(n_coeffs):
        seeded = [Dual(c, 1.0) if i == k else c for i, c in enumerate(comps)]
        r = fn(seeded, s)
        cols.append(derivative(r, like=value(r)))
    out = np.stack([np.asarray(c, dtype=float) for c in cols], axis=-1)
    if np.isnan(out).any() and np.isfinite(A).all():
        raise EvaluationDomainError("gradient produced NaN from finite coefficients")
    return out


def ad_gradient(model):
    """Exact gradient of a model's density by forward-mode dual numbers,
    independent of any closed form the model carries."""
    def grad(A, s=0.0):
        A, s = model._coerce(A, s)
        return _ad_gradient_core(model._fn, model.n_coeffs, A, s)
    return grad


def finite_difference_gradient(model, A, s=0.0, scale=1e-6):
    """Second-order central differences with per-coefficient step
    h_k = scale * (1 + |A_k|); a cross-check, not a primary path."""
    A, s = model._coerce(A, s)
    out = np.zeros_like(A)
    for k in range(model.n_coeffs):
        h = scale * (1.0 + np.abs(A[..., k]))
        up = A.copy()
        up[..., k] += h
        dn = A.copy()
        dn[..., k] -= h
        out[..., k] = (model.evaluate(up, s) - model.evaluate(dn, s)) / (2.0 * h)
    return out


# ---------------------------------------------------------------------------
# physical states


@dataclass
class GasState:
    rho: float
    q: np.ndarray
    s: float = 0.0

    def __post_init__(self):
        self.q = np.atleast_1d(np.asarray(self.q, dtype=float))
        if self.rho <= 0:
            raise ValueError("mass density must be positive")

    @property
    def m(self):
        return np.concatenate([[self.rho], self.q])


@dataclass
class RelativisticState:
    m: np.ndarray
    s: float = 0.0

    def __post_init__(self):
        self.m = np.asarray(self.m, dtype=float)
        if self.m.shape != (4,):
            raise ValueError("relativistic momentum must be a 4-vector")


@dataclass
class EMState:
    E: np.ndarray
    B: np.ndarray
    s: float = 0.0

    def __post_init__(self):
        self.E = np.asarray(self.E, dtype=float)
        self.B = np.asarray(self.B, dtype=float)
        if self.E.shape != (3,) or self.B.shape != (3,):
            raise ValueError("E and B must be 3-vectors")


def state_to_form(model, state):
    """PFormValue for a physical state, through the frozen identifications."""
    if isinstance(state, PFormValue):
        return state
    if isinstance(state, GasState):
        return PFormValue(model.d, model.p, momentum_to_coeffs(state.m), state.s)
    if isinstance(state, RelativisticState):
        return PFormValue(model.d, model.p, momentum_to_coeffs(state.m), state.s)
    if isinstance(state, EMState):
        return PFormValue(model.d, model.p, em_to_coeffs(state.E, state.B), state.s)
    arr = np.asarray(state, dtype=float)
    return PFormValue(model.d, model.p, arr)


# ---------------------------------------------------------------------------
# isotropic 1-form densities


def model_isotropic_p1(d=2, profile=None, radial_slope=None, slope_over_r=None,
                       name="iso-p1", params=None):
    """L = profile(s, |A|) on 1-forms; invariant under every rotation of the
    coefficient vector.  ``slope_over_r`` supplies the exact factor
    (d profile/dr)/r when a closed form exists; otherwise the factor is
    computed from ``radial_slope`` with a singularity check at |A| = 0.
    """
    if profile is None:
        profile = lambda u, r: 0.5 * r * r
        radial_slope = lambda u, r: r
        slope_over_r = lambda u, r: np.ones_like(np.asarray(r, dtype=float))

    def fn(comps, s):
        r2 = comps[0] * comps[0]
        for c in comps[1:]:
            r2 = r2 + c * c
        return profile(s, dualnum.sqrt(r2))

    def grad_fn(A, s):
        r = np.sqrt(np.einsum("...k,...k->...", A, A))
        if slope_over_r is not None:
            factor = slope_over_r(s, r)
        else:
            factor = np.empty_like(r)
            ok = r >= 1e-12
            factor[ok] = radial_slope(s, r[ok]) / r[ok]
            if (~ok).any():
                r0 = 1e-7
                probe = radial_slope(s, r0)
                probe = np.broadcast_to(np.asarray(probe, dtype=float), r.shape)
                if np.any(np.abs(probe[~ok]) > 1e-6):
                    raise SingularGradientError(
                        "radial density has nonzero slope at |A| = 0")
                factor[~ok] = np.asarray(probe / r0)[~ok]
        return factor[..., None] * A

    def sampler(rng, n):
        A = rng.standard_normal((n, d))
        norms = np.linalg.norm(A, axis=-1)
        while (norms < 0.2).any():
            bad = norms < 0.2
            A[bad] = rng.standard_normal((int(bad.sum()), d))
            norms = np.linalg.norm(A, axis=-1)
        return A, 0.3 * rng.standard_normal(n)

    return LagrangianModel(name, d, 1, fn,
                           grad_fn=grad_fn if (slope_over_r or radial_slope) else None,
                           metric_hint=euclidean_metric(d),
                           sampler=sampler,
                           params=dict(params or {}, d=d))


def model_minimal_surface(d=3, name="minimal-surface"):
    """Area integrand L = sqrt(1 + |A|^2); slope/r = 1/sqrt(1+r^2) is smooth
    through the origin."""
    return model_isotropic_p1(
        d=d,
        profile=lambda u, r: dualnum.sqrt(1.0 + r * r),
        radial_slope=lambda u, r: r / np.sqrt(1.0 + r * r),
        slope_over_r=lambda u, r: 1.0 / np.sqrt(1.0 + r * r),
        name=name,
        params={"d": d},
    )


# ---------------------------------------------------------------------------
# classical gas dynamics (momentum (d-1)-forms, axes t, x_1..x_n)


def polytropic_energy(gamma=2.0, mu=0.0):
    """Internal energy density g(rho, s) = exp(mu s) rho^gamma / gamma."""
    if gamma <= 1.0:
        raise ValueError("polytropic exponent must exceed 1")

    def g(rho, s):
        scale = dualnum.exp(mu * s) if mu != 0.0 else 1.0
        return scale * rho ** gamma / gamma

    g.gamma = gamma
    g.mu = mu
    return g


def model_gas_dynamics(n=1, internal_energy=None, name="gas", params=None):
    """L = |q|^2 / (2 rho) - g(rho, s) on momentum forms m = (rho, q).

    The kinetic part is homogeneous of degree one in m, so the scalar in the
    closed n-form tensor collapses to the pressure rho g_rho - g.
    """
    g = internal_energy if internal_energy is not None else polytropic_energy()
    d = n + 1

    def fn(comps, s):
        m = momentum_components(comps, d)
        rho = m[0]
        q2 = 0.0
        for qi in m[1:]:
            q2 = q2 + qi * qi
        return q2 / (2.0 * rho) - g(rho, s)

    def g_rho(rho, s):
        r = g(Dual(np.asarray(rho, dtype=float) + 0.0, 1.0), s)
        return derivative(r, like=rho)

    def m_gradient(m, s):
        m = np.asarray(m, dtype=float)
        rho = m[..., 0]
        q = m[..., 1:]
        q2 = np.einsum("...k,...k->...", q, q)
        out = np.empty_like(m)
        out[..., 0] = -q2 / (2.0 * rho * rho) - g_rho(rho, s)
        out[..., 1:] = q / rho[..., None]
        return out

    def grad_fn(A, s):
        return momentum_to_coeffs(m_gradient(coeffs_to_momentum(A), s))

    def pressure(rho, s=0.0):
        rho = np.asarray(rho, dtype=float)
        return rho * g_rho(rho, s) - g(rho, s)

    def pressure_entropy_derivative(rho, s=0.0):
        # nested duals would conflate channels; one central difference in s
        h = 1e-6 * (1.0 + np.abs(s))
        return (pressure(rho, s + h) - pressure(rho, s - h)) / (2.0 * h)

    def sampler(rng, n_states):
        rho = rng.uniform(0.3, 2.0, n_states)
        q = rng.standard_normal((n_states, d - 1))
        m = np.concatenate([rho[:, None], q], axis=1)
        return momentum_to_coeffs(m), 0.3 * rng.standard_normal(n_states)

    model = LagrangianModel(name, d, d - 1, fn, grad_fn=grad_fn,
                            metric_hint=None, sampler=sampler,
                            params=dict(params or {}, n=n))
    model.internal_energy = g
    model.g_rho = g_rho
    model.m_gradient = m_gradient
    model.pressure = pressure
    model.pressure_entropy_derivative = pressure_entropy_derivative
    return model


# ---------------------------------------------------------------------------
# relativistic gas (momentum 3-forms in d = 4)


def model_relativistic(profile=None, c=1.0, name="relativistic", params=None,
                       kappa=None):
    """L = profile(rho, s) with rho = sqrt(-m^T Lam m), Lam = diag(-c^2, 1, 1, 1).

    States must be strictly inside the light cone; the 4-velocity u = m / rho
    satisfies u^T Lam u = -1 (at rest u_0 = 1/c).
    """
    if profile is None:
        kappa = 1.5 if kappa is None else kappa
        profile = lambda rho, s: rho ** kappa
    Lam = minkowski_metric(c, 4)
    d = 4

    def rho_sq_of(m):
        m = np.asarray(m, dtype=float)
        return (c * c) * m[..., 0] ** 2 - np.einsum("...k,...k->...", m[..., 1:], m[..., 1:])

    def rho_of(m):
        r2 = rho_sq_of(m)
        if np.any(r2 <= 0.0):
            raise LuminalStateError("momentum is not strictly sub-luminal")
        return np.sqrt(r2)

    def u_of(m):
        return np.asarray(m, dtype=float) / rho_of(m)[..., None]

    def validator(A, s):
        rho_of(coeffs_to_momentum(A))

    def fn(comps, s):
        m = momentum_components(comps, d)
        r2 = (c * c) * m[0] * m[0]
        for mi in m[1:]:
            r2 = r2 - mi * mi
        return profile(dualnum.sqrt(r2), s)

    def profile_rho(rho, s):
        r = profile(Dual(np.asarray(rho, dtype=float) + 0.0, 1.0), s)
        return derivative(r, like=rho)

    def m_gradient(m, s):
        m = np.asarray(m, dtype=float)
        rho = rho_of(m)
        lam_m = np.einsum("ij,...j->...i", Lam, m)
        return -(profile_rho(rho, s) / rho)[..., None] * lam_m

    def grad_fn(A, s):
        return momentum_to_coeffs(m_gradient(coeffs_to_momentum(A), s))

    def pressure(rho, s=0.0):
        rho = np.asarray(rho, dtype=float)
        return rho * profile_rho(rho, s) - profile(rho, s)

    def energy_density(rho, s=0.0):
        return profile(np.asarray(rho, dtype=float), s) / (c * c)

    def sampler(rng, n_states):
        ms = rng.standard_normal((n_states, 3))
        rho = rng.uniform(0.3, 2.0, n_states)
        m0 = np.sqrt(rho ** 2 + np.einsum("ij,ij->i", ms, ms)) / c
        m = np.concatenate([m0[:, None], ms], axis=1)
        return momentum_to_coeffs(m), 0.3 * rng.standard_normal(n_states)

    model = LagrangianModel(name, d, 3, fn, grad_fn=grad_fn,
                            metric_hint=Lam, sampler=sampler,
                            params=dict(params or {}, c=c),
                            validator=validator)
    model.c = c
    model.Lam = Lam
    model.rho_of = rho_of
    model.u_of = u_of
    model.profile = profile
    model.profile_rho = profile_rho
    model.m_gradient = m_gradient
    model.pressure = pressure
    model.energy_density = energy_density
    if kappa is not None:
        model.kappa = kappa
        model.params["kappa"] = kappa
        model.ultrarelativistic = abs(kappa - 4.0 / 3.0) < 1e-12
    return model


def model_relativistic_powerlaw(kappa=4.0 / 3.0, c=1.0, mu=0.0,
                                name="relativistic-powerlaw"):
    """Power-law profile L = exp(mu s) rho^kappa; pressure = (kappa - 1) e c^2.

    kappa = 4/3 is the ultra-relativistic equation of state.
    """
    if mu == 0.0:
        profile = lambda rho, s: rho ** kappa
    else:
        profile = lambda rho, s: dualnum.exp(mu * s) * rho ** kappa
    return model_relativistic(profile=profile, c=c, name=name,
                              params={"kappa": kappa, "mu": mu}, kappa=kappa)


def model_relativistic_limit(c=1.0, name="relativistic-limit"):
    """L = rho^2, the boundary case kappa = 2 where genuine jumps are forced
    onto light-like interfaces."""
    return model_relativistic(profile=lambda rho, s: rho * rho, c=c,
                              name=name, params={}, kappa=2.0)


# ---------------------------------------------------------------------------
# electromagnetic 2-form densities (d = 4)


def model_maxwell(lag_eb, material=None, name="maxwell", params=None):
    """Density over the electromagnetic decomposition of a 2-form.

    ``lag_eb(E, B, s)`` receives E and B as component lists; ``material``
    optionally returns the closed-form fields (D, H) for batched arrays.
    """

    def fn(comps, s):
        E, B = em_components(comps)
        return lag_eb(E, B, s)

    grad_fn = None
    if material is not None:
        def grad_fn(A, s):
            E, B = coeffs_to_em(A)
            D, H = material(E, B, s)
            return em_gradient_to_coeffs(D, H)

    def sampler(rng, n_states):
        E = rng.standard_normal((n_states, 3))
        B = rng.standard_normal((n_states, 3))
        return em_to_coeffs(E, B), 0.3 * rng.standard_normal(n_states)

    model = LagrangianModel(name, 4, 2, fn, grad_fn=grad_fn,
                            metric_hint=minkowski_metric(1.0, 4),
                            sampler=sampler, params=dict(params or {}))

    def fields(E, B, s=0.0):
        """Material response (D, H) and energy density W = E . D - L."""
        E = np.asarray(E, dtype=float)
        B = np.asarray(B, dtype=float)
        A = em_to_coeffs(E, B)
        if material is not None:
            D, H = material(E, B, s)
        else:
            D, H = coeffs_to_em_gradient(model.gradient(A, s))
        L = model.evaluate(A, s)
        W = np.einsum("...k,...k->...", E, D) - L
        return np.asarray(D, float), np.asarray(H, float), W

    model.fields = fields
    return model


def model_maxwell_linear(name="maxwell-linear"):
    """Vacuum density L = (|E|^2 - |B|^2) / 2, so D = E and H = B."""
    def lag(E, B, s):
        acc = 0.0
        for e in E:
            acc = acc + e * e
        for b in B:
            acc = acc - b * b
        return 0.5 * acc

    def material(E, B, s):
        return E, B

    return model_maxwell(lag, material=material, name=name)


def _em_invariants(E, B):
    X = 0.0
    for e in E:
        X = X + e * e
    for b in B:
        X = X - b * b
    X = 0.5 * X
    Y = 0.0
    for e, b in zip(E, B):
        Y = Y + e * b
    return X, Y


def model_maxwell_lorentz(F=None, name="maxwell-lorentz", params=None):
    """L = F(X, Y) in the two frame invariants X = (|E|^2 - |B|^2)/2 and
    Y = E . B; symmetric corrected tensor for any F."""
    if F is None:
        a, b, cxy = 0.05, 0.07, 0.03
        params = {"a": a, "b": b, "cxy": cxy}
        F = lambda X, Y, s: X + a * X * X + b * Y * Y + cxy * X * Y

    def lag(E, B, s):
        X, Y = _em_invariants(E, B)
        return F(X, Y, s)

    def material(E, B, s):
        X, Y = _em_invariants([E[..., j] for j in range(3)],
                              [B[..., j] for j in range(3)])
        FX = derivative(F(Dual(X + 0.0, 1.0), Y, s), like=X)
        FY = derivative(F(X, Dual(Y + 0.0, 1.0), s), like=Y)
        D = FX[..., None] * E + FY[..., None] * B
        H = FX[..., None] * B - FY[..., None] * E
        return D, H

    return model_maxwell(lag, material=material, name=name, params=params)


def model_maxwell_anisotropic(name="maxwell-anisotropic"):
    """L = |E|^2: a frame-anisotropic density used as the broken-symmetry
    counterexample (D = 2E, H = 0)."""
    def lag(E, B, s):
        acc = 0.0
        for e in E:
            acc = acc + e * e
        return acc

    def material(E, B, s):
        return 2.0 * E, np.zeros_like(B)

    return model_maxwell(lag, material=material, name=name)


# ---------------------------------------------------------------------------
# quadratic densities (testing workhorse)


def model_quadratic(Q, d, p, name="quadratic", metric_hint=None):
    """L = A^T Q A / 2 for symmetric Q; gradient Q A."""
    Q = np.asarray(Q, dtype=float)
    C = form_basis(d, p).size
    if Q.shape != (C, C):
        raise ValueError(f"Q must be {C}x{C}")
    if not np.allclose(Q, Q.T, atol=1e-12):
        raise ValueError("Q must be symmetric")

    def fn(comps, s):
        acc = 0.0
        for a in range(C):
            row = 0.0
            for b in range(C):
                if Q[a, b] != 0.0:
                    row = row + Q[a, b] * comps[b]
            acc = acc + comps[a] * row
        return 0.5 * acc

    def grad_fn(A, s):
        return np.einsum("ab,...b->...a", Q, A)

    return LagrangianModel(name, d, p, fn, grad_fn=grad_fn,
                           metric_hint=metric_hint, params={})


# ---------------------------------------------------------------------------
# expression-defined densities


_BINOPS = {
    ast.Add: lambda a, b: a + b,
    ast.Sub: lambda a, b: a - b,
    ast.Mult: lambda a, b: a * b,
    ast.Div: lambda a, b: a / b,
    ast.Pow: lambda a, b: a ** b,
}
_CONSTANTS = {"pi": math.pi, "e": math.e}


def coefficient_names(d, p):
    """Variable names for the canonical slots: digits of the tuple after A."""
    return ["A" + "".join(str(i) for i in J) for J in form_basis(d, p).tuples]


def _compile_expression(expr, names):
    tree = ast.parse(expr.replace("^", "**"), mode="eval")

    def check(node):
        if isinstance(node, ast.Expression):
            check(node.body)
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINOPS:
                raise ValueError(f"operator {type(node.op).__name__} not allowed")
            check(node.left)
            check(node.right)
        elif isinstance(node, ast.UnaryOp):
            if not isinstance(node.op, (ast.UAdd, ast.USub)):
                raise ValueError("only unary +/- allowed")
            check(node.operand)
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in dualnum.FUNCTIONS:
                raise ValueError("only whitelisted functions allowed")
            if node.keywords or len(node.args) != 1:
                raise ValueError("functions take one positional argument")
            check(node.args[0])
        elif isinstance(node, ast.Name):
            if node.id not in names and node.id not in _CONSTANTS:
                raise ValueError(f"unknown name {node.id!r}")
        elif isinstance(node, ast.Constant):
            if not isinstance(node.value, (int, float)):
                raise ValueError("only numeric constants allowed")
        else:
            raise ValueError(f"syntax {type(node).__name__} not allowed")

    check(tree)

    def run(node, env):
        if isinstance(node, ast.Expression):
            return run(node.body, env)
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](run(node.left, env), run(node.right, env))
        if isinstance(node, ast.UnaryOp):
            v = run(node.operand, env)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.Call):
            return dualnum.FUNCTIONS[node.func.id](run(node.args[0], env))
        if isinstance(node, ast.Name):
            return env[node.id] if node.id in env else _CONSTANTS[node.id]
        return node.value

    return lambda env: run(tree, env)


def model_from_expression(expr, d, p, name="user-expr", metric_hint=None):
    """Density from an expression string over the canonical coefficient names
    (A0, A01, ...) and s; operators + - * / ^ and whitelisted functions."""
    names = coefficient_names(d, p)
    compiled = _compile_expression(expr, set(names) | {"s"})

    def fn(comps, s):
        env = dict(zip(names, comps))
        env["s"] = s
        out = compiled(env)
        if not isinstance(out, (Dual, np.ndarray)):
            out = out + 0.0 * comps[0]  # broadcast constants over the batch
        return out

    return LagrangianModel(name, d, p, fn, metric_hint=metric_hint,
                           params={"expr": expr, "d": d, "p": p})


# ---------------------------------------------------------------------------
# registry


@dataclass
class ModelEntry:
    factory: object
    summary: str
    defaults: dict = field(default_factory=dict)


def _gas_factory(n=1, gamma=2.0, mu=0.0, g="polytropic"):
    if g != "polytropic":
        raise ValueError("only the polytropic internal energy is registered")
    return model_gas_dynamics(n=int(n), internal_energy=polytropic_energy(gamma, mu),
                              name="gas", params={"gamma": gamma, "mu": mu})


def _gas_polytropic_factory(n=3, gamma=1.4, mu=1.0):
    return model_gas_dynamics(n=int(n),
                              internal_energy=polytropic_energy(gamma, mu),
                              name="gas-polytropic",
                              params={"gamma": gamma, "mu": mu})


def _user_expr_factory(expr=None, d=None, p=None):
    if expr is None or d is None or p is None:
        raise ValueError("user-expr requires expr, d and p parameters")
    return model_from_expression(str(expr), int(d), int(p))


REGISTRY = {
    "iso-p1": ModelEntry(lambda d=2: model_isotropic_p1(d=int(d)),
                         "isotropic 1-form density L = |A|^2 / 2", {"d": 2}),
    "minimal-surface": ModelEntry(lambda d=3: model_minimal_surface(d=int(d)),
                                  "area integrand L = sqrt(1 + |A|^2)", {"d": 3}),
    "gas": ModelEntry(_gas_factory,
                      "gas dynamics, L = |q|^2/(2 rho) - g(rho, s)",
                      {"n": 1, "gamma": 2.0, "mu": 0.0}),
    "gas-polytropic": ModelEntry(_gas_polytropic_factory,
                                 "gas dynamics with entropy-coupled polytropic g",
                                 {"n": 3, "gamma": 1.4, "mu": 1.0}),
    "relativistic": ModelEntry(lambda kappa=1.5, c=1.0: model_relativistic_powerlaw(
                                   kappa=float(kappa), c=float(c), name="relativistic"),
                               "relativistic gas, L = rho^kappa",
                               {"kappa": 1.5, "c": 1.0}),
    "relativistic-powerlaw": ModelEntry(lambda kappa=4.0 / 3.0, c=1.0, mu=0.0:
                                        model_relativistic_powerlaw(float(kappa), float(c), float(mu)),
                                        "power-law relativistic gas, p = (kappa-1) e c^2",
                                        {"kappa": 4.0 / 3.0, "c": 1.0, "mu": 0.0}),
    "relativistic-limit": ModelEntry(lambda c=1.0: model_relativistic_limit(float(c)),
                                     "limit case L = rho^2 (light-like jumps)",
                                     {"c": 1.0}),
    "maxwell-linear": ModelEntry(lambda: model_maxwell_linear(),
                                 "vacuum electromagnetism, L = (|E|^2 - |B|^2)/2", {}),
    "maxwell-lorentz": ModelEntry(lambda: model_maxwell_lorentz(),
                                  "nonlinear density in the frame invariants", {}),
    "maxwell-anisotropic": ModelEntry(lambda: model_maxwell_anisotropic(),
                                      "L = |E|^2, breaks the corrected symmetry", {}),
    "user-expr": ModelEntry(_user_expr_factory,
                            "density from an expression string",
                            {"expr": None, "d": None, "p": None}),
}


def build_model(name, params=None):
    if name not in REGISTRY:
        raise KeyError(f"unknown model {name!r}; known: {sorted(REGISTRY)}")
    return REGISTRY[name].factory(**(params or {}))


def list_models():
    out = []
    for name, entry in REGISTRY.items():
        out.append({"name": name, "summary": entry.summary,
                    "defaults": dict(entry.defaults)})
    return out
