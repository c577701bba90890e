"""Kinetic coupling of hyperbolic conservation laws: secular roots and mode checks.

A symmetric hyperbolic system coupled to a kinetic equation through gradients
acquires, at small coupling kappa, eigenvalue shifts with imaginary part

    (Im sigma_j)'(0) = -pi (grad_psi . r_j)(phi(sigma_j) . r_j) f'(sigma_j),

so each eigenpair of the uncoupled matrix is pushed off the real axis unless
the product q_j = (grad_psi . r_j)(phi(sigma_j) . r_j) f'(sigma_j) is >= 0.
The coupled eigenvalues are located as zeros of the rank-one secular function

    S(sigma) = 1 - kappa < grad_psi, (A - sigma I)^(-1) I(sigma) >,
    I(sigma) = continued integral of phi(v) f'(v) / (v - sigma) dv,

evaluated on the correct branch of the analytic continuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import profiles, quadrature
from .dispersion import RootReport, SearchRegion, _newton, _winding_number
from .errors import (DegenerateSpectrum, NonConvergence, ResolventSingularity)
from .profiles import VelocityProfile
from .quadrature import QuadratureConfig

STABLE_MODE = "stable_mode"
UNSTABLE_MODE = "unstable_mode"
DECOUPLED = "decoupled"

_DECOUPLE_TOL = 1e-12
_GAP_TOL = 1e-8


@dataclass(frozen=True)
class ScalarCoupling:
    """Scalar conservation law with characteristic speed lambda0 coupled to f."""

    lambda0: float
    kappa: float
    profile: VelocityProfile

    def __post_init__(self):
        if self.lambda0 == 0.0:
            raise ValueError("small-coupling analysis requires lambda0 != 0")


@dataclass(frozen=True, eq=False)
class SystemCoupling:
    """Symmetric N x N hyperbolic system with kinetic feedback.

    ``phi_coeffs[j]`` is the N-vector coefficient of v**j, so the feedback
    profile phi(v) stays analytic and inherits the distribution's decay.
    """

    a_matrix: np.ndarray
    grad_psi: np.ndarray
    phi_coeffs: tuple[tuple[float, ...], ...]
    kappa: float
    profile: VelocityProfile

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a_matrix, dtype=float))
        object.__setattr__(self, "a_matrix", a)
        object.__setattr__(self, "grad_psi", np.asarray(self.grad_psi, dtype=float))
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("a_matrix must be square")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > 1e-12 * scale:
            raise ValueError("a_matrix must be symmetric to 1e-12")
        if self.grad_psi.shape != (n,):
            raise ValueError("grad_psi must have length N")
        if any(len(c) != n for c in self.phi_coeffs):
            raise ValueError("each phi coefficient must have length N")

    @property
    def dim(self) -> int:
        return self.a_matrix.shape[0]

    def phi(self, v):
        """phi(v) evaluated component-wise; returns shape (N,) + shape(v)."""
        v = np.asarray(v, dtype=complex)
        out = np.zeros((self.dim,) + v.shape, dtype=complex)
        power = np.ones_like(v)
        for coeff in self.phi_coeffs:
            for i, c in enumerate(coeff):
                if c:
                    out[i] += c * power
            power = power * v
        return out


@dataclass(frozen=True, eq=False)
class ModeVerdict:
    """Necessary-condition check for one eigenpair of the uncoupled system."""

    j: int
    sigma_j: float
    r_j: np.ndarray
    q_j: float
    imag_rate: float
    verdict: str

    def as_dict(self) -> dict:
        return {"j": self.j, "sigma_j": self.sigma_j, "r_j": list(self.r_j),
                "q_j": self.q_j, "imag_rate": self.imag_rate, "verdict": self.verdict}


def scalar_as_system(c: ScalarCoupling) -> SystemCoupling:
    """N=1 embedding: zeros of the secular function coincide with scalar roots."""
    return SystemCoupling(a_matrix=np.array([[c.lambda0]]), grad_psi=np.array([1.0]),
                          phi_coeffs=((0.0,), (1.0,)), kappa=c.kappa,
                          profile=c.profile)


# ---------------------------------------------------------------------------
# scalar coupling
# ---------------------------------------------------------------------------

def _resonance_kernel(profile: VelocityProfile, sigma: complex,
                      config: QuadratureConfig) -> complex:
    """Branch-correct continuation of int v f'(v)/(v - sigma) dv."""
    g = lambda v: np.asarray(v) * profiles._eval_df_raw(
        profile, quadrature._guard_strip(profile, v))
    return quadrature.singular_integral(
        g, sigma, quadrature.classify_branch(sigma, config), config,
        bounds=quadrature.profile_bounds(profile, sigma, config),
        scale=profiles.resolution_scale(profile),
        envelope=quadrature._weighted_envelope(profile),
        breakpoints=profiles.analyticity_breakpoints(profile))


def scalar_dispersion(c: ScalarCoupling, omega: complex,
                      config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """G(omega) = omega - lambda0 + kappa * C[v f'/(v - omega)]; roots solve the
    coupled scalar dispersion relation."""
    omega = complex(omega)
    if c.kappa == 0.0:
        return omega - c.lambda0
    return omega - c.lambda0 + c.kappa * _resonance_kernel(c.profile, omega, config)


def scalar_root(c: ScalarCoupling, tol: float = 1e-12,
                config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> RootReport:
    """Coupled root continued from omega = lambda0, stepping kappa in 8 increments."""
    if abs(c.kappa) > 0.1:
        raise ValueError("continuation start guaranteed only for |kappa| <= 0.1")
    omega = complex(c.lambda0)
    iters_total = 0
    if c.kappa != 0.0:
        for step in range(1, 9):
            kap = c.kappa * step / 8.0
            ci = ScalarCoupling(lambda0=c.lambda0, kappa=kap, profile=c.profile)
            func = lambda z: scalar_dispersion(ci, z, config)
            omega, iters = _newton(func, omega, tol,
                                   trust_radius=max(1.0, abs(c.lambda0)))
            iters_total += iters
    func = lambda z: scalar_dispersion(c, z, config)
    residual = abs(func(omega))
    if residual > tol:
        raise NonConvergence(f"scalar continuation residual {residual:.3g} > {tol:.3g}")
    half = max(1e-3 * max(1.0, abs(c.lambda0)), 4.0 * abs(omega.imag))
    evidence = _winding_number(func, SearchRegion(
        omega.real - half, omega.real + half, omega.imag - half, omega.imag + half))
    return RootReport(sigma=omega, residual=residual,
                      branch=quadrature.classify_branch(omega, config),
                      winding_evidence=evidence, newton_iters=iters_total)


def scalar_imag_leading(c: ScalarCoupling) -> float:
    """Leading-order Im omega = -pi kappa lambda0 f'(lambda0)."""
    slope = float(np.real(profiles.eval_df(c.profile, c.lambda0)))
    return -math.pi * c.kappa * c.lambda0 * slope


# ---------------------------------------------------------------------------
# symmetric eigenproblem (cyclic Jacobi)
# ---------------------------------------------------------------------------

def symmetric_eigen(a_matrix) -> list[tuple[float, np.ndarray]]:
    """Deterministic eigen-decomposition of a symmetric matrix.

    Cyclic Jacobi rotations; eigenvalues ascending, eigenvector sign fixed so
    the first component above 1e-12 is positive. Rejects spectra with gaps
    below 1e-8 (strict hyperbolicity is assumed throughout).
    """
    a = np.array(np.atleast_2d(a_matrix), dtype=float)
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a))))
    if a.shape != (n, n) or np.max(np.abs(a - a.T)) > 1e-12 * scale:
        raise ValueError("symmetric_eigen requires a symmetric square matrix")
    vecs = np.eye(n)
    for _ in range(60):
        off = math.sqrt(sum(a[p, q] ** 2 for p in range(n) for q in range(n) if p != q))
        if off <= 1e-15 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-18 * scale:
                    continue
                theta = 0.5 * (a[q, q] - a[p, p]) / a[p, q]
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                cth = 1.0 / math.sqrt(1.0 + t * t)
                sth = t * cth
                rot = np.eye(n)
                rot[p, p] = rot[q, q] = cth
                rot[p, q] = sth
                rot[q, p] = -sth
                a = rot.T @ a @ rot
                vecs = vecs @ rot
    order = np.argsort(np.diag(a))
    eigvals = np.diag(a)[order]
    vecs = vecs[:, order]
    gaps = np.diff(eigvals)
    if n > 1 and np.min(gaps) <= _GAP_TOL:
        raise DegenerateSpectrum(f"eigenvalue gap {np.min(gaps):.3g} <= {_GAP_TOL:g}")
    out = []
    a_in = np.array(np.atleast_2d(a_matrix), dtype=float)
    for j in range(n):
        r = vecs[:, j] / np.linalg.norm(vecs[:, j])
        lead = np.flatnonzero(np.abs(r) > 1e-12)[0]
        if r[lead] < 0:
            r = -r
        resid = np.linalg.norm(a_in @ r - eigvals[j] * r)
        if resid > 1e-10 * scale:
            raise NonConvergence(f"Jacobi residual {resid:.3g} too large")
        out.append((float(eigvals[j]), r))
    return out


# ---------------------------------------------------------------------------
# secular function and perturbation checks
# ---------------------------------------------------------------------------

def _kinetic_vector(s: SystemCoupling, sigma: complex,
                    config: QuadratureConfig) -> np.ndarray:
    """I(sigma): continued integral of phi(v) f'(v)/(v - sigma), component-wise."""
    branch = quadrature.classify_branch(sigma, config)
    bounds = quadrature.profile_bounds(s.profile, sigma, config)
    scale = profiles.resolution_scale(s.profile)
    breaks = profiles.analyticity_breakpoints(s.profile)
    env = quadrature._weighted_envelope(s.profile)
    out = np.zeros(s.dim, dtype=complex)
    for i in range(s.dim):
        if all(abs(coeff[i]) == 0.0 for coeff in s.phi_coeffs):
            continue
        g = lambda v, _i=i: s.phi(quadrature._guard_strip(s.profile, v))[_i] \
            * profiles._eval_df_raw(s.profile, np.asarray(v, dtype=complex))
        out[i] = quadrature.singular_integral(
            g, sigma, branch, config, bounds=bounds, scale=scale,
            envelope=env, breakpoints=breaks)
    return out


def secular_function(s: SystemCoupling, sigma: complex,
                     config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """S(sigma) = 1 - kappa <grad_psi, (A - sigma)^(-1) I(sigma)>."""
    sigma = complex(sigma)
    if s.kappa == 0.0:
        return 1.0 + 0.0j
    eigvals = np.array([ev for ev, _ in symmetric_eigen(s.a_matrix)])
    if np.min(np.abs(eigvals - sigma)) < 1e-10:
        raise ResolventSingularity(
            "secular function evaluated on an eigenvalue of the uncoupled matrix")
    ivec = _kinetic_vector(s, sigma, config)
    x = np.linalg.solve(s.a_matrix - sigma * np.eye(s.dim), ivec)
    return 1.0 - s.kappa * complex(np.dot(s.grad_psi, x))


def imag_derivative_at_zero(s: SystemCoupling, j: int,
                            config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> float:
    """(Im sigma_j)'(0) = -pi (grad_psi . r_j)(phi(sigma_j) . r_j) f'(sigma_j)."""
    sigma_j, r_j = symmetric_eigen(s.a_matrix)[j]
    psi_proj = float(np.dot(s.grad_psi, r_j))
    phi_proj = float(np.real(np.dot(s.phi(sigma_j), r_j)))
    slope = float(np.real(profiles.eval_df(s.profile, sigma_j)))
    return -math.pi * psi_proj * phi_proj * slope


def stability_necessary_condition(s: SystemCoupling,
                                  config: QuadratureConfig = quadrature.DEFAULT_CONFIG
                                  ) -> list[ModeVerdict]:
    """Per-mode sign check of q_j; any q_j < 0 fails the necessary condition."""
    verdicts = []
    for j, (sigma_j, r_j) in enumerate(symmetric_eigen(s.a_matrix)):
        psi_proj = float(np.dot(s.grad_psi, r_j))
        phi_proj = float(np.real(np.dot(s.phi(sigma_j), r_j)))
        slope = float(np.real(profiles.eval_df(s.profile, sigma_j)))
        q_j = psi_proj * phi_proj * slope
        if abs(psi_proj) <= _DECOUPLE_TOL or abs(phi_proj) <= _DECOUPLE_TOL:
            verdict = DECOUPLED
        elif q_j < -_DECOUPLE_TOL:
            verdict = UNSTABLE_MODE
        else:
            verdict = STABLE_MODE
        verdicts.append(ModeVerdict(j=j, sigma_j=sigma_j, r_j=r_j, q_j=q_j,
                                    imag_rate=-math.pi * q_j, verdict=verdict))
    return verdicts


def fails_necessary_condition(verdicts: list[ModeVerdict]) -> bool:
    return any(v.verdict == UNSTABLE_MODE for v in verdicts)


def track_secular_root(s: SystemCoupling, j: int, kappa_target: float,
                       steps: int = 8, tol: float = 1e-9,
                       config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """Zero of the secular function continued from eigenvalue j up to kappa_target.

    Seeds each kappa increment with the first-order shift
    sigma'(0) = -(grad_psi . r_j) (I(sigma_j) . r_j).
    """
    sigma_j, r_j = symmetric_eigen(s.a_matrix)[j]
    ivec0 = _kinetic_vector(s, complex(sigma_j), config)
    shift = -float(np.dot(s.grad_psi, r_j)) * complex(np.dot(ivec0, r_j))
    dk = kappa_target / steps
    sigma = complex(sigma_j)
    for step in range(1, steps + 1):
        kap = kappa_target * step / steps
        si = SystemCoupling(a_matrix=s.a_matrix, grad_psi=s.grad_psi,
                            phi_coeffs=s.phi_coeffs, kappa=kap, profile=s.profile)
        func = lambda z: secular_function(si, z, config)
        sigma, _ = _newton(func, sigma + shift * dk, tol,
                           trust_radius=10.0 * abs(shift) * abs(kappa_target) + 1e-6)
    return sigma
