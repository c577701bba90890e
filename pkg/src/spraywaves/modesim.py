"""Direct time integration of one spatial Fourier mode of the linearized system.

For wavenumber k the linearized thick-spray equations reduce to the ODE system

    d tau/dt = (i k / (alpha0 rho0)) (alpha0 u + kappa * int f v dv)
    d u/dt   = i k rho0 c0^2 tau
    d f/dt   = -i k v f - i k c0^2 rho0^2 tau f0'(v)

on a uniform velocity grid (composite Simpson for the moment integral,
classical explicit RK4 in time). Growth/decay rates fitted from |tau(t)| are
the independent oracle for dispersion roots, and the normalized-mode scaling
runs demonstrate loss of Sobolev control when an amplified root exists.
"""

from __future__ import annotations

import concurrent.futures
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import dispersion, profiles, quadrature
from .dispersion import SearchRegion, SprayParams
from .errors import (CflViolation, DegenerateFit, NoUnstableRoot, NotARoot,
                     RefineGrid)
from .profiles import VelocityProfile
from .quadrature import QuadratureConfig

_CFL_FRACTION = 0.1
_OVERFLOW_LIMIT = 1e150


@dataclass(frozen=True)
class SimConfig:
    """Grid/stepping parameters for one mode run."""

    nv: int
    v_bounds: tuple[float, float]
    dt: float
    t_final: float
    fit_window: tuple[float, float]

    def __post_init__(self):
        if self.nv < 256:
            raise ValueError("nv must be >= 256")
        if self.v_bounds[0] >= self.v_bounds[1]:
            raise ValueError("empty velocity interval")
        if self.dt <= 0 or self.t_final <= 0:
            raise ValueError("dt and t_final must be positive")
        lo, hi = self.fit_window
        if not (0.0 <= lo < hi <= self.t_final):
            raise ValueError("fit_window must lie inside [0, t_final]")

    @property
    def dv(self) -> float:
        return (self.v_bounds[1] - self.v_bounds[0]) / (self.nv - 1)


def velocity_grid(config: SimConfig) -> np.ndarray:
    return np.linspace(config.v_bounds[0], config.v_bounds[1], config.nv)


@lru_cache(maxsize=32)
def _simpson_weights(n: int, dv: float) -> np.ndarray:
    """Composite Simpson weights for n uniform points (3/8 closeout when n is even)."""
    if n < 4:
        raise ValueError("need at least 4 velocity nodes")
    w = np.zeros(n)
    if n % 2 == 1:
        w[0] = w[-1] = 1.0
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w *= dv / 3.0
    else:
        head = _simpson_weights(n - 3, dv)
        w[:n - 3] += head
        w[n - 4:] += np.array([1.0, 3.0, 3.0, 1.0]) * 3.0 * dv / 8.0
    return w


@dataclass(frozen=True, eq=False)
class ModeState:
    """Complex amplitudes of one spatial Fourier mode at a single time."""

    k: float
    tau_hat: complex
    u_hat: complex
    f_hat: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        if self.k == 0.0:
            raise ValueError("k must be nonzero")
        fh = np.asarray(self.f_hat, dtype=complex)
        object.__setattr__(self, "f_hat", fh)
        if not np.all(np.isfinite(fh)):
            raise ValueError("f_hat entries must be finite")

    def scaled(self, factor: complex) -> "ModeState":
        return ModeState(k=self.k, tau_hat=self.tau_hat * factor,
                         u_hat=self.u_hat * factor, f_hat=self.f_hat * factor,
                         time=self.time)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Amplitude series of one integrate() run plus a few full-state snapshots."""

    k: float
    times: np.ndarray
    tau_hat: np.ndarray
    u_hat: np.ndarray
    kinetic_l2: np.ndarray
    overflow: bool
    snapshots: tuple[ModeState, ...]

    @property
    def final_state(self) -> ModeState:
        return self.snapshots[-1]


@dataclass(frozen=True)
class GrowthFit:
    rate: float
    residual: float


def rhs(params: SprayParams, profile: VelocityProfile, state: ModeState,
        config: SimConfig) -> ModeState:
    """Time derivative of the mode amplitudes (same container, time preserved)."""
    grid = velocity_grid(config)
    weights = _simpson_weights(config.nv, config.dv)
    dfdv = np.real(profiles._eval_df_raw(profile, grid.astype(complex)))
    ik = 1j * state.k
    kinetic_flux = float(params.kappa) * np.sum(weights * state.f_hat * grid)
    dtau = ik / (params.alpha0 * params.rho0) * (params.alpha0 * state.u_hat
                                                 + kinetic_flux)
    du = ik * params.rho0 * params.c0**2 * state.tau_hat
    df = -ik * grid * state.f_hat - ik * params.c0**2 * params.rho0**2 \
        * state.tau_hat * dfdv
    return ModeState(k=state.k, tau_hat=dtau, u_hat=du, f_hat=df, time=state.time)


def recurrence_time(config: SimConfig, k: float) -> float:
    """Grid-recurrence horizon 2 pi / (|k| dv) of discrete free streaming."""
    return 2.0 * math.pi / (abs(k) * config.dv)


def cfl_limit(params: SprayParams, config: SimConfig, k: float) -> float:
    vmax = max(abs(config.v_bounds[0]), abs(config.v_bounds[1]))
    return _CFL_FRACTION / (abs(k) * vmax + abs(k) * params.c0)


def default_sim_config(params: SprayParams, profile: VelocityProfile, k: float,
                       t_final: float, nv: int = 2048,
                       fit_fractions: tuple[float, float] = (0.2, 0.8)) -> SimConfig:
    lo, hi = profiles.support_bounds(profile)
    cfg = SimConfig(nv=nv, v_bounds=(lo, hi),
                    dt=1.0, t_final=t_final,
                    fit_window=(fit_fractions[0] * t_final, fit_fractions[1] * t_final))
    dt = 0.9 * cfl_limit(params, cfg, k)
    return SimConfig(nv=nv, v_bounds=(lo, hi), dt=dt, t_final=t_final,
                     fit_window=cfg.fit_window)


def acoustic_state(params: SprayParams, k: float, config: SimConfig,
                   direction: int = 1) -> ModeState:
    """Pure fluid acoustic mode (tau, u) = (1, -rho0 c0^2 / sigma), sigma = +-c0."""
    sigma = direction * params.c0
    return ModeState(k=k, tau_hat=1.0 + 0.0j,
                     u_hat=-params.rho0 * params.c0**2 / sigma,
                     f_hat=np.zeros(config.nv, dtype=complex))


def init_eigenmode(params: SprayParams, profile: VelocityProfile, sigma: complex,
                   k: float, config: SimConfig,
                   qconfig: QuadratureConfig = quadrature.DEFAULT_CONFIG,
                   residual_tol: float = 1e-8) -> ModeState:
    """Mode amplitudes of the plane-wave solution attached to a dispersion root.

    tau = 1, u = -rho0 c0^2 / sigma, f(v) = -rho0^2 c0^2 f0'(v)/(v - sigma).
    """
    sigma = complex(sigma)
    residual = abs(dispersion.dispersion_value(params, profile, sigma, qconfig))
    if residual > residual_tol:
        raise NotARoot(f"|D(sigma)| = {residual:.3g} > {residual_tol:.3g}")
    if params.kappa != 0.0 and abs(sigma.imag) < 3.0 * config.dv:
        raise RefineGrid(
            f"|Im sigma| = {abs(sigma.imag):.3g} below 3 dv = {3 * config.dv:.3g}; "
            "the grid cannot resolve the resonant denominator")
    grid = velocity_grid(config)
    dfdv = np.real(profiles._eval_df_raw(profile, grid.astype(complex)))
    denom = grid - sigma
    # kappa = 0 seeds may sit on the axis; the kinetic part is then passive and
    # grid-coincident singular entries are clipped
    tiny = np.abs(denom) < 1e-12
    denom = np.where(tiny, 1.0, denom)
    f_hat = -params.rho0**2 * params.c0**2 * dfdv / denom
    f_hat[tiny] = 0.0
    return ModeState(k=k, tau_hat=1.0 + 0.0j,
                     u_hat=-params.rho0 * params.c0**2 / sigma, f_hat=f_hat)


def integrate(params: SprayParams, profile: VelocityProfile, state0: ModeState,
              config: SimConfig) -> Trajectory:
    """Classical RK4 trajectory of the mode system at fixed dt."""
    k = state0.k
    if config.dt > cfl_limit(params, config, k) * (1.0 + 1e-12):
        raise CflViolation(
            f"dt = {config.dt:.3g} exceeds the stability bound "
            f"{cfl_limit(params, config, k):.3g}")
    if config.t_final >= recurrence_time(config, k):
        raise ValueError("t_final reaches the velocity-grid recurrence time")
    if len(state0.f_hat) != config.nv:
        raise ValueError("state f_hat length does not match config.nv")

    grid = velocity_grid(config)
    weights = _simpson_weights(config.nv, config.dv)
    dfdv = np.real(profiles._eval_df_raw(profile, grid.astype(complex)))
    ik = 1j * k
    pref_tau_u = ik / params.rho0
    pref_tau_f = ik * params.kappa / (params.alpha0 * params.rho0)
    pref_u = ik * params.rho0 * params.c0**2
    pref_f = ik * params.c0**2 * params.rho0**2
    wv = weights * grid

    def deriv(tau, u, f):
        dtau = pref_tau_u * u + pref_tau_f * np.sum(wv * f)
        du = pref_u * tau
        df = -ik * grid * f - pref_f * tau * dfdv
        return dtau, du, df

    nsteps = max(1, int(math.ceil(config.t_final / config.dt)))
    dt = config.t_final / nsteps
    snap_stride = max(1, nsteps // 16)
    tau, u, f = state0.tau_hat, state0.u_hat, state0.f_hat.astype(complex).copy()
    times = np.empty(nsteps + 1)
    taus = np.empty(nsteps + 1, dtype=complex)
    us = np.empty(nsteps + 1, dtype=complex)
    kin = np.empty(nsteps + 1)
    snapshots: list[ModeState] = []
    overflow = False

    def record(i, t):
        times[i] = t
        taus[i] = tau
        us[i] = u
        kin[i] = math.sqrt(abs(float(np.sum(weights * np.abs(f) ** 2))))
        if i % snap_stride == 0:
            snapshots.append(ModeState(k=k, tau_hat=tau, u_hat=u,
                                       f_hat=f.copy(), time=t))

    record(0, 0.0)
    n_done = nsteps
    for i in range(1, nsteps + 1):
        k1 = deriv(tau, u, f)
        k2 = deriv(tau + 0.5 * dt * k1[0], u + 0.5 * dt * k1[1], f + 0.5 * dt * k1[2])
        k3 = deriv(tau + 0.5 * dt * k2[0], u + 0.5 * dt * k2[1], f + 0.5 * dt * k2[2])
        k4 = deriv(tau + dt * k3[0], u + dt * k3[1], f + dt * k3[2])
        tau = tau + dt / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        u = u + dt / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        f = f + dt / 6.0 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        record(i, i * dt)
        if max(abs(tau), abs(u)) > _OVERFLOW_LIMIT or \
                np.max(np.abs(f)) > _OVERFLOW_LIMIT:
            overflow = True
            n_done = i
            break
    end = n_done + 1
    if (end - 1) % snap_stride != 0:
        snapshots.append(ModeState(k=k, tau_hat=tau, u_hat=u, f_hat=f.copy(),
                                   time=times[end - 1]))
    return Trajectory(k=k, times=times[:end], tau_hat=taus[:end], u_hat=us[:end],
                      kinetic_l2=kin[:end], overflow=overflow,
                      snapshots=tuple(snapshots))


def growth_rate(trajectory: Trajectory, fit_window: tuple[float, float]) -> GrowthFit:
    """Least-squares slope of log|tau(t)| over the window, with its RMS residual."""
    lo, hi = fit_window
    mask = (trajectory.times >= lo) & (trajectory.times <= hi)
    if np.count_nonzero(mask) < 50:
        raise ValueError("fit window contains fewer than 50 samples")
    amp = np.abs(trajectory.tau_hat[mask])
    if np.any(amp <= 1e-300):
        raise ValueError("amplitude underflow inside the fit window")
    t = trajectory.times[mask]
    log_amp = np.log(amp)
    coeffs = np.polyfit(t, log_amp, 1)
    fitted = np.polyval(coeffs, t)
    residual = float(np.sqrt(np.mean((log_amp - fitted) ** 2)))
    rate = float(coeffs[0])
    if residual > max(0.1 * abs(rate) * (hi - lo), 1e-6):
        raise DegenerateFit(
            f"fit residual {residual:.3g} too large for slope {rate:.3g}")
    return GrowthFit(rate=rate, residual=residual)


@dataclass(frozen=True)
class ScalingRow:
    k: float
    t_k: float
    init_hs_norm: float
    final_l2_norm: float
    fitted_rate: float


@dataclass(frozen=True, eq=False)
class ScalingReport:
    """Normalized-mode scaling table for the Sobolev ill-posedness demonstration."""

    rows: tuple[ScalingRow, ...]
    sigma: complex
    theta0: float
    final_norm_nondecreasing: bool
    trajectories: tuple[Trajectory, ...] = ()


def sobolev_scaling_experiment(params: SprayParams, profile: VelocityProfile,
                               s: float, n_exponent: float, k_list: list[float],
                               nv: int = 2048,
                               qconfig: QuadratureConfig = quadrature.DEFAULT_CONFIG,
                               region: SearchRegion | None = None,
                               workers: int = 1) -> ScalingReport:
    """Initial H^s shrinkage vs final L^2 size for mode data scaled by k^(-N).

    Each mode is the unstable eigenmode scaled by k^(-N) and run to
    t_k = (N+1) log(k)/k; columns use the single-mode norm proxies
    (1+k^2)^(s/2) amp for H^s and amp for L^2. The per-k runs are independent
    and may execute on a bounded worker pool.
    """
    if s < 0 or n_exponent <= s:
        raise ValueError("need 0 <= s < n_exponent")
    if len(k_list) < 3 or any(b <= a for a, b in zip(k_list, k_list[1:])):
        raise ValueError("k_list must be increasing with at least 3 entries")
    if region is None:
        base = dispersion.default_region(params, profile)
        region = SearchRegion(base.re_min, base.re_max, 1e-6, base.im_max)
    roots = [r for r in dispersion.find_roots(params, profile, region,
                                              tol=1e-10, config=qconfig)
             if r.sigma.imag > 0]
    if not roots:
        raise NoUnstableRoot("no dispersion root with Im sigma > 0 in the region")
    sigma = max(roots, key=lambda r: r.sigma.imag).sigma

    def run_one(k: float) -> tuple[ScalingRow, Trajectory]:
        t_k = (n_exponent + 1.0) * math.log(k) / k
        config = default_sim_config(params, profile, k, t_final=t_k, nv=nv)
        seed = init_eigenmode(params, profile, sigma, k, config, qconfig)
        seed = seed.scaled(k ** (-n_exponent))
        traj = integrate(params, profile, seed, config)
        fit = growth_rate(traj, config.fit_window)
        row = ScalingRow(
            k=k, t_k=t_k,
            init_hs_norm=(1.0 + k * k) ** (0.5 * s) * abs(traj.tau_hat[0]),
            final_l2_norm=abs(traj.tau_hat[-1]),
            fitted_rate=fit.rate)
        return row, traj

    if workers > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, k_list))
    else:
        results = [run_one(k) for k in k_list]
    rows = [row for row, _ in results]
    trajectories = [traj for _, traj in results]
    finals = [r.final_l2_norm for r in rows]
    return ScalingReport(rows=tuple(rows), sigma=sigma,
                         theta0=min(finals),
                         final_norm_nondecreasing=all(
                             b >= a * (1.0 - 1e-9) for a, b in zip(finals, finals[1:])),
                         trajectories=tuple(trajectories))
