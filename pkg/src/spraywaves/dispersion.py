"""Thick-spray dispersion function: evaluation, root location, and verdicts.

The dispersion function of the linearized particle-laden acoustics depends on
the phase velocity sigma = omega/|k| alone:

    D(sigma) = 1 - c0^2/sigma^2
               - (kappa rho0 c0^2 / alpha0) * (1/sigma) * C[v f'(v)/(v - sigma)],

where C[.] is the branch-correct continuation of the velocity integral from
the upper half-plane (see `quadrature`). Zeros with Im sigma > 0 are unstable
modes; zeros with Im sigma < 0 are decay rates of the continued function, not
regular eigenvalues. Root counts are certified with argument-principle winding
numbers over rectangles, then polished by Newton iteration on the continued
(holomorphic) function.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import profiles, quadrature
from .errors import (BoundaryRoot, DegenerateDerivative, LaplaceDomain,
                     NonConvergence, StripViolation, ZeroSigma)
from .profiles import VelocityProfile
from .quadrature import Branch, QuadratureConfig

STABLE = "stable"
UNSTABLE = "unstable"
NEUTRAL = "neutral"

_COMPAT_TOL = 1e-10


@dataclass(frozen=True)
class SprayParams:
    """Background state of the linearization (fluid at rest after the Galilean shift)."""

    c0: float
    rho0: float
    kappa: float
    alpha0: float
    u0: float = 0.0

    def __post_init__(self):
        if self.c0 <= 0 or self.rho0 <= 0:
            raise ValueError("c0 and rho0 must be positive")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if not (0.0 < self.alpha0 <= 1.0):
            raise ValueError("alpha0 must lie in (0, 1]")

    @property
    def coupling_prefactor(self) -> float:
        return self.kappa * self.rho0 * self.c0**2 / self.alpha0


def make_params(profile: VelocityProfile, c0: float, rho0: float,
                kappa: float, u0: float = 0.0) -> SprayParams:
    """SprayParams with alpha0 fixed by the volume-fraction compatibility condition."""
    return SprayParams(c0=c0, rho0=rho0, kappa=kappa,
                       alpha0=profiles.compatibility_alpha(profile, kappa), u0=u0)


def check_compatibility(params: SprayParams, profile: VelocityProfile) -> None:
    expected = 1.0 - params.kappa * profiles.moment(profile, 0)
    if abs(params.alpha0 - expected) > _COMPAT_TOL:
        raise ValueError(
            f"alpha0={params.alpha0} inconsistent with 1 - kappa*m0 = {expected}")


@dataclass(frozen=True)
class SearchRegion:
    """Rectangle in the sigma plane searched for dispersion roots."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("degenerate search region")

    @property
    def corners(self) -> tuple[complex, complex, complex, complex]:
        return (complex(self.re_min, self.im_min), complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max), complex(self.re_min, self.im_max))

    def dilated(self, factor: float) -> "SearchRegion":
        cx = 0.5 * (self.re_min + self.re_max)
        cy = 0.5 * (self.im_min + self.im_max)
        hw = 0.5 * (self.re_max - self.re_min) * factor
        hh = 0.5 * (self.im_max - self.im_min) * factor
        return SearchRegion(cx - hw, cx + hw, cy - hh, cy + hh)

    def contains(self, sigma: complex, pad: float = 0.0) -> bool:
        return (self.re_min - pad <= sigma.real <= self.re_max + pad
                and self.im_min - pad <= sigma.imag <= self.im_max + pad)


@dataclass(frozen=True)
class RootReport:
    """One located zero of the dispersion function with its evidence."""

    sigma: complex
    residual: float
    branch: Branch
    winding_evidence: int
    newton_iters: int

    def as_dict(self) -> dict:
        return {"re_sigma": self.sigma.real, "im_sigma": self.sigma.imag,
                "residual": self.residual, "branch": self.branch.value,
                "winding_evidence": self.winding_evidence,
                "newton_iters": self.newton_iters,
                "interpretation": ("decay_rate" if self.branch is Branch.LOWER
                                   else "eigenvalue")}


def dispersion_value(params: SprayParams, profile: VelocityProfile, sigma: complex,
                     config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """Branch-correct dispersion function at complex sigma.

    The continuation term carries the same kappa rho0 c0^2 / alpha0 prefactor
    as the principal-value term (exact holomorphic continuation).
    """
    sigma = complex(sigma)
    if abs(sigma) < 1e-14 * params.c0:
        raise ZeroSigma("dispersion function has a pole at sigma = 0")
    base = 1.0 - params.c0**2 / sigma**2
    if params.kappa == 0.0:
        return base
    check_compatibility(params, profile)
    return base - params.coupling_prefactor * quadrature.resonance_integral(
        profile, sigma, config)


def dispersion_parts(params: SprayParams, profile: VelocityProfile, sigma: float,
                     config: QuadratureConfig = quadrature.DEFAULT_CONFIG
                     ) -> tuple[float, float]:
    """(real, imaginary) split of the on-axis dispersion function.

    The real part uses the principal value; the imaginary part is the residue
    term -pi * pref * f'(sigma).
    """
    sig = complex(sigma)
    if abs(sig.imag) > config.axis_tolerance:
        raise ValueError("dispersion_parts requires a real sigma")
    x0 = sig.real
    if abs(x0) < 1e-14 * params.c0:
        raise ZeroSigma("dispersion function has a pole at sigma = 0")
    d_real = 1.0 - params.c0**2 / x0**2
    d_imag = 0.0
    if params.kappa != 0.0:
        check_compatibility(params, profile)
        pref = params.coupling_prefactor
        g = lambda v: np.asarray(v) * profiles._eval_df_raw(profile, np.asarray(v, dtype=complex))
        pv = quadrature.pv_integral(
            g, x0, config,
            bounds=quadrature.profile_bounds(profile, x0, config),
            scale=profiles.resolution_scale(profile),
            envelope=quadrature._weighted_envelope(profile),
            breakpoints=profiles.analyticity_breakpoints(profile))
        d_real -= pref * float(np.real(pv)) / x0
        d_imag = -math.pi * pref * float(np.real(profiles.eval_df(profile, x0)))
    return d_real, d_imag


def landau_dispersion(profile: VelocityProfile, k: float, omega: complex,
                      config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """Electrostatic-analogue dispersion value, depending on both omega/k and k.

    Continuation from Im omega > 0; the residue term carries the same
    -1/|k|^2 prefactor as the integral term and flips orientation with the
    sign of k.
    """
    if k == 0.0:
        raise ZeroSigma("landau dispersion undefined at k = 0")
    sigma = complex(omega) / k
    g = lambda v: profiles._eval_df_raw(profile, quadrature._guard_strip(profile, v))
    bounds = quadrature.profile_bounds(profile, sigma, config)
    scale = profiles.resolution_scale(profile)
    breaks = profiles.analyticity_breakpoints(profile)
    im_omega = complex(omega).imag
    if abs(im_omega) <= config.axis_tolerance:
        x0 = float(sigma.real)
        line = quadrature.pv_integral(g, x0, config, bounds=bounds, scale=scale,
                                      breakpoints=breaks)
        residue_mult = 1.0
    else:
        try:
            g_sigma = quadrature._eval_at(g, sigma)
        except StripViolation:
            g_sigma = None
        line = quadrature._line_integral(g, sigma, config, bounds=bounds,
                                         scale=scale, g_sigma=g_sigma,
                                         breakpoints=breaks)
        residue_mult = 2.0 if im_omega < 0.0 else 0.0
    residue = 0.0j
    if residue_mult:
        residue = (residue_mult * 1j * math.pi * math.copysign(1.0, k)
                   * quadrature._eval_at(g, sigma))
    return 1.0 - (line + residue) / k**2


def forcing_functional(params: SprayParams, profile: VelocityProfile,
                       init: tuple[complex, complex, object], k: float, omega: complex,
                       config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> complex:
    """Laplace-domain forcing assembled from the initial data (Im omega > 0)."""
    omega = complex(omega)
    if omega.imag <= 0.0:
        raise LaplaceDomain("forcing functional defined for Im omega > 0 only")
    if k == 0.0:
        raise ZeroSigma("forcing functional undefined at k = 0")
    tau0, u0, f0 = init
    total = params.rho0 * complex(tau0) - k * complex(u0) / omega
    if f0 is not None and params.kappa != 0.0:
        sigma = omega / k
        g = lambda v: np.asarray(f0(v)) * np.asarray(v)
        kin = quadrature._line_integral(
            g, sigma, config,
            bounds=quadrature.profile_bounds(profile, sigma, config),
            scale=profiles.resolution_scale(profile), g_sigma=None)
        total += params.kappa / params.alpha0 * kin
    return total / params.rho0


# ---------------------------------------------------------------------------
# argument-principle machinery
# ---------------------------------------------------------------------------

_MIN_BOUNDARY_MOD = 1e-9
_PHASE_STEP = 1.0           # max phase increment per boundary step (radians)
_MAX_BOUNDARY_EVALS = 60000


def _winding_number(func, region: SearchRegion, n0: int = 48,
                    feature_scale: float | None = None) -> int:
    """Winding number of func around the rectangle boundary.

    Adaptive phase walk: segments are bisected until each step turns by less
    than _PHASE_STEP *and* the value magnitude changes by less than a factor
    of e, so a full 2 pi swing between samples cannot alias to a small
    principal-value step. The accumulated phase is then an exact multiple of
    2 pi up to float noise. Raises BoundaryRoot when a zero (or a resolution
    limit) sits on the contour.
    """
    corners = list(region.corners) + [region.corners[0]]
    pts: list[complex] = []
    for a, b in zip(corners[:-1], corners[1:]):
        n_edge = n0
        if feature_scale is not None and feature_scale > 0:
            n_edge = max(n0, min(1024, int(math.ceil(abs(b - a) / feature_scale))))
        ts = np.linspace(0.0, 1.0, n_edge, endpoint=False)
        pts.extend(a + (b - a) * ts)
    pts.append(pts[0])
    vals = [func(z) for z in pts]
    evals = len(vals)
    total = 0.0
    for i in range(len(pts) - 1):
        seg = [(pts[i], vals[i], pts[i + 1], vals[i + 1])]
        while seg:
            z1, v1, z2, v2 = seg.pop()
            if min(abs(v1), abs(v2)) < _MIN_BOUNDARY_MOD:
                raise BoundaryRoot("dispersion value vanishes on the contour")
            dphi = np.angle(v2 / v1)
            ratio = abs(v2) / abs(v1)
            resolved = abs(dphi) <= _PHASE_STEP and (1.0 / math.e) <= ratio <= math.e
            if resolved or abs(z2 - z1) < 1e-13 * (1.0 + abs(z1)):
                total += dphi
                continue
            evals += 1
            if evals > _MAX_BOUNDARY_EVALS:
                raise BoundaryRoot("phase walk did not resolve the contour")
            zm = 0.5 * (z1 + z2)
            vm = func(zm)
            seg.append((zm, vm, z2, v2))
            seg.append((z1, v1, zm, vm))
    winding = total / (2.0 * math.pi)
    if abs(winding - round(winding)) >= 0.25:
        raise BoundaryRoot(f"winding defect {abs(winding - round(winding)):.3f} >= 0.25")
    return int(round(winding))


def _split_at_pole(params: SprayParams, region: SearchRegion) -> list[SearchRegion]:
    """Split the region so the sigma = 0 pole never lies inside or on a contour."""
    gap = 1e-3 * params.c0
    if region.re_min < gap and region.re_max > -gap and \
            region.im_min < gap and region.im_max > -gap:
        out = []
        if region.re_min < -gap:
            out.append(SearchRegion(region.re_min, -gap, region.im_min, region.im_max))
        if region.re_max > gap:
            out.append(SearchRegion(gap, region.re_max, region.im_min, region.im_max))
        return out
    return [region]


def count_roots(params: SprayParams, profile: VelocityProfile, region: SearchRegion,
                config: QuadratureConfig = quadrature.DEFAULT_CONFIG, *,
                max_dilations: int = 3) -> int:
    """Certified number of dispersion zeros (with multiplicity) inside the region.

    A zero too close to the contour triggers up to `max_dilations` 1% dilations
    before BoundaryRoot propagates (bisection passes 0 to keep sub-counts
    attached to exact rectangles).
    """
    strip = profile.strip_halfwidth
    if max(abs(region.im_min), abs(region.im_max)) > strip:
        raise StripViolation("search region exceeds the profile analyticity strip")
    func = lambda z: dispersion_value(params, profile, z, config)
    scale = 0.5 * min(params.c0, profile.width, strip)
    current = region
    for attempt in range(max_dilations + 1):
        try:
            # re-split after every dilation so a grown edge cannot cross the
            # sigma = 0 pole
            return sum(_winding_number(func, sub, feature_scale=scale)
                       for sub in _split_at_pole(params, current))
        except BoundaryRoot:
            if attempt == max_dilations:
                raise
            current = current.dilated(1.01)
            if max(abs(current.im_min), abs(current.im_max)) > strip:
                raise
    raise AssertionError("unreachable")


def _newton(func, z0: complex, tol: float, max_iter: int = 80,
            h_rel: float = 1e-7, trust_radius: float = math.inf) -> tuple[complex, int]:
    z = complex(z0)
    for it in range(1, max_iter + 1):
        fz = func(z)
        if abs(fz) <= tol:
            return z, it
        if abs(z - z0) > trust_radius:
            raise NonConvergence("Newton iterate escaped its isolating rectangle")
        h = h_rel * max(1.0, abs(z))
        d = (func(z + 1j * h) - func(z - 1j * h)) / (2j * h)
        if d == 0:
            break
        step = fz / d
        if abs(step) > trust_radius:
            step *= trust_radius / abs(step)
        z = z - step
    fz = func(z)
    if abs(fz) <= tol:
        return z, max_iter
    raise NonConvergence(f"Newton stalled at |D| = {abs(fz):.3g} (tol {tol:.3g})")


def find_roots(params: SprayParams, profile: VelocityProfile, region: SearchRegion,
               tol: float = 1e-10,
               config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> list[RootReport]:
    """All dispersion zeros in the region, certified by winding counts.

    Rectangles are bisected until they isolate single roots, then Newton (with
    a complex central-difference derivative of the continued function) refines
    each; deflation handles clustered roots below the bisection floor.
    """
    tol = max(tol, 1e-14)
    func = lambda z: dispersion_value(params, profile, z, config)
    subdiv_floor = 1e-3 * params.c0
    newton_box = 0.1 * params.c0
    roots: list[tuple[complex, int, int]] = []

    def polish(reg: SearchRegion, n: int) -> None:
        center = complex(0.5 * (reg.re_min + reg.re_max),
                         0.5 * (reg.im_min + reg.im_max))
        diam = math.hypot(reg.re_max - reg.re_min, reg.im_max - reg.im_min)
        found: list[complex] = []
        target = func
        for _ in range(n):
            z, iters = _newton(target, center, tol, trust_radius=5.0 * diam)
            found.append(z)
            roots.append((z, n, iters))
            prev = list(found)
            target = lambda s, _prev=prev: func(s) / np.prod([s - r for r in _prev])

    def recurse(reg: SearchRegion, count: int | None = None, depth: int = 0):
        n = count_roots(params, profile, reg, config) if count is None else count
        if n < 0:
            raise NonConvergence("negative winding count: pole inside search region")
        if n == 0:
            return
        diam = max(reg.re_max - reg.re_min, reg.im_max - reg.im_min)
        if diam <= newton_box or diam <= subdiv_floor or depth > 40:
            # small enough for Newton to start inside the local basin
            try:
                polish(reg, n)
                return
            except NonConvergence:
                if depth > 40 or diam <= subdiv_floor:
                    raise
        # bisect the longer side, nudging the cut if a root sits on it
        horizontal = (reg.re_max - reg.re_min) >= (reg.im_max - reg.im_min)
        for frac in (0.5, 0.43, 0.57, 0.35):
            if horizontal:
                cut = reg.re_min + frac * (reg.re_max - reg.re_min)
                first = SearchRegion(reg.re_min, cut, reg.im_min, reg.im_max)
                second = SearchRegion(cut, reg.re_max, reg.im_min, reg.im_max)
            else:
                cut = reg.im_min + frac * (reg.im_max - reg.im_min)
                first = SearchRegion(reg.re_min, reg.re_max, reg.im_min, cut)
                second = SearchRegion(reg.re_min, reg.re_max, cut, reg.im_max)
            try:
                n1 = count_roots(params, profile, first, config, max_dilations=0)
            except BoundaryRoot:
                continue
            recurse(first, n1, depth + 1)
            recurse(second, n - n1, depth + 1)
            return
        raise BoundaryRoot("could not find a clean bisection line")

    recurse(region)
    reports = []
    for z, evidence, iters in sorted(roots, key=lambda t: (t[0].real, t[0].imag)):
        reports.append(RootReport(sigma=z, residual=abs(func(z)),
                                  branch=quadrature.classify_branch(z, config),
                                  winding_evidence=evidence, newton_iters=iters))
    return reports


# ---------------------------------------------------------------------------
# thin-spray expansion and the stability verdict
# ---------------------------------------------------------------------------

def _axis_rderivative(params: SprayParams, profile: VelocityProfile, x0: float,
                      config: QuadratureConfig) -> float:
    """d/dsigma of the real part of the on-axis dispersion function."""
    h = 1e-6 * max(1.0, abs(x0))
    dr_p, _ = dispersion_parts(params, profile, x0 + h, config)
    dr_m, _ = dispersion_parts(params, profile, x0 - h, config)
    return (dr_p - dr_m) / (2.0 * h)


def damping_rate_at(params: SprayParams, profile: VelocityProfile, c_ref: float,
                    config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> float:
    """First-order Im sigma of the wave near the real reference speed c_ref."""
    _, d_imag = dispersion_parts(params, profile, c_ref, config)
    d_rprime = _axis_rderivative(params, profile, c_ref, config)
    if abs(d_rprime) < 1e-8:
        raise DegenerateDerivative(f"|Dr'({c_ref})| = {abs(d_rprime):.3g} < 1e-8")
    return -d_imag / d_rprime


def thin_spray_expansion(params: SprayParams, profile: VelocityProfile,
                         config: QuadratureConfig = quadrature.DEFAULT_CONFIG
                         ) -> tuple[float, float]:
    """(spray sound speed c_star, first-order damping/growth rate gamma).

    c_star = c0 * (1 + pref/2 * P.V. int f'(v)/(v - c0) dv) with
    pref = kappa rho0 c0^2 / alpha0; gamma = -Di(c_star)/Dr'(c_star).
    """
    if params.kappa == 0.0:
        return params.c0, 0.0
    if params.kappa > 0.1:
        warnings.warn("thin-spray expansion requested at kappa > 0.1",
                      stacklevel=2)
    check_compatibility(params, profile)
    g = lambda v: profiles._eval_df_raw(profile, np.asarray(v, dtype=complex))
    pv = quadrature.pv_integral(
        g, params.c0, config,
        bounds=quadrature.profile_bounds(profile, params.c0, config),
        scale=profiles.resolution_scale(profile),
        breakpoints=profiles.analyticity_breakpoints(profile))
    c_star = params.c0 * (1.0 + 0.5 * params.coupling_prefactor * float(np.real(pv)))
    gamma = damping_rate_at(params, profile, c_star, config)
    return c_star, gamma


def default_region(params: SprayParams, profile: VelocityProfile) -> SearchRegion:
    """Rectangle wide enough to hold every root permitted by the large-sigma bound."""
    re_span = abs(profile.drift) + 5.0 * (params.c0 + profile.width)
    return SearchRegion(-re_span, re_span, -0.5 * profile.strip_halfwidth,
                        0.5 * profile.strip_halfwidth)


def spectral_verdict(params: SprayParams, profile: VelocityProfile,
                     region: SearchRegion | None = None,
                     config: QuadratureConfig = quadrature.DEFAULT_CONFIG) -> str:
    """'unstable' if any upper-half zero exists, 'stable' if none and both
    thin-spray waves are damped, 'neutral' otherwise."""
    if region is None:
        region = default_region(params, profile)
    upper = SearchRegion(region.re_min, region.re_max,
                         max(region.im_min, 1e-6), region.im_max)
    if count_roots(params, profile, upper, config) >= 1:
        return UNSTABLE
    if params.kappa == 0.0:
        return NEUTRAL
    c_star, gamma_plus = thin_spray_expansion(params, profile, config)
    gamma_minus = damping_rate_at(params, profile, -c_star, config)
    if gamma_plus < -1e-12 and gamma_minus < -1e-12:
        return STABLE
    return NEUTRAL
