"""Equilibrium velocity distributions analytic on a complex strip.

Three kinds are supported:

- ``maxwellian``: f(v) = mass / (sqrt(2 pi) width) * exp(-(v - drift)^2 / (2 width^2)),
  entire in v; the declared strip is a conservative working band.
- ``bump_on_tail``: (1 - eps) * base + (eps * m0 / eta) * g((v - c_star) / eta),
  where g is a fixed smooth unit-mass bump supported on (-1, 1) with g'(0) > 0.
  The bump carries exactly eps * m0 of the base mass, so the total integral is
  preserved.
- ``sum``: plain superposition of component profiles (two-stream style setups).

Profiles are frozen dataclasses; every operation here is a pure function, so
instances can be shared freely across worker threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _gauss
from .errors import InvalidBump, StripViolation, VacuumViolation

_SQRT_2PI = math.sqrt(2.0 * math.pi)

# Fraction of eta around the bump support edges where complex evaluation is
# refused (the compactly supported bump is not analytic across |w| = 1).
BUMP_EDGE_MARGIN = 0.05


@dataclass(frozen=True)
class VelocityProfile:
    """Analytic equilibrium distribution with strip metadata.

    ``mass``/``drift``/``width`` always describe the aggregate distribution
    (total integral, mean bulk velocity, bulk thermal spread); the optional
    fields are populated per ``kind``.
    """

    kind: str
    mass: float = 1.0
    drift: float = 0.0
    width: float = 1.0
    strip_halfwidth: float = 0.0         # filled in __post_init__ when 0
    bound_consts: tuple[float, float] = (0.0, 0.0)
    eps: float | None = None
    eta: float | None = None
    c_star: float | None = None
    base: "VelocityProfile | None" = None
    parts: "tuple[VelocityProfile, ...] | None" = None

    def __post_init__(self):
        if self.kind not in ("maxwellian", "bump_on_tail", "sum"):
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.mass <= 0 or self.width <= 0:
            raise ValueError("mass and width must be positive")
        if self.strip_halfwidth == 0.0:
            object.__setattr__(self, "strip_halfwidth", self._default_strip())
        if self.strip_halfwidth <= 0:
            raise ValueError("strip_halfwidth must be positive")
        if self.bound_consts == (0.0, 0.0):
            object.__setattr__(self, "bound_consts", self._fit_envelope())

    def _default_strip(self) -> float:
        if self.kind == "maxwellian":
            return 0.5 * self.width
        if self.kind == "bump_on_tail":
            # bump analytic band shrinks with eta; stay well inside
            return min(self.base.strip_halfwidth, 0.5 * self.eta)
        return min(p.strip_halfwidth for p in self.parts)

    def _fit_envelope(self) -> tuple[float, float]:
        # Gaussian envelope |f| <= C0 exp(-C1 x^2) on the strip, fitted on a
        # sample grid (used for truncation-tail estimates, not for physics).
        c1 = 1.0 / (4.0 * self.width**2)
        lo, hi = support_bounds(self)
        xs = np.linspace(lo, hi, 241)
        vals = np.abs(_eval_f_raw(self, xs))
        for level in (0.5, 1.0):
            y = level * self.strip_halfwidth
            safe = _strip_safe_mask(self, xs, y)
            if np.any(safe):
                zs = xs[safe] + 1j * y
                vals = np.concatenate([vals, np.abs(_eval_f_raw(self, zs))])
                xs = np.concatenate([xs, xs[safe]])
        c0 = float(np.max(vals * np.exp(c1 * np.real(xs) ** 2))) * 1.25
        return (c0, c1)


def maxwellian(mass: float = 1.0, drift: float = 0.0, width: float = 1.0,
               strip_halfwidth: float = 0.0) -> VelocityProfile:
    return VelocityProfile(kind="maxwellian", mass=mass, drift=drift, width=width,
                           strip_halfwidth=strip_halfwidth)


def make_bump_on_tail(base: VelocityProfile, eps: float, eta: float,
                      c_star: float) -> VelocityProfile:
    """Superimpose a narrow unit-sign bump of relative mass ``eps`` at ``c_star``.

    The bump term is (eps * m0 / eta) * g((v - c_star) / eta) with a fixed
    smooth g of unit integral supported on (-1, 1), so the composite carries
    the same total mass as ``base``.
    """
    if not (0.0 < eps < 1.0) or eta <= 0.0:
        raise InvalidBump(f"need 0 < eps < 1 and eta > 0, got eps={eps}, eta={eta}")
    return VelocityProfile(kind="bump_on_tail", mass=base.mass, drift=base.drift,
                           width=base.width, eps=eps, eta=eta, c_star=c_star,
                           base=base)


def profile_sum(*parts: VelocityProfile) -> VelocityProfile:
    if not parts:
        raise ValueError("profile_sum needs at least one component")
    mass = sum(p.mass for p in parts)
    drift = sum(p.mass * p.drift for p in parts) / mass
    width = max(abs(p.drift - drift) + p.width for p in parts)
    return VelocityProfile(kind="sum", mass=mass, drift=drift, width=width,
                           parts=tuple(parts))


# ---------------------------------------------------------------------------
# bump shape g: C (1+w)^2 exp(-1/(1-w^2)) on (-1, 1), zero outside.
# C is fixed numerically so that g has unit integral; g'(0) = 2 C / e > 0.
# ---------------------------------------------------------------------------

def _bump_raw(w):
    w = np.asarray(w)
    out = np.zeros_like(w, dtype=complex)
    inside = np.abs(np.real(w)) < 1.0
    if np.any(inside):
        wi = w[inside]
        out[inside] = (1.0 + wi) ** 2 * np.exp(-1.0 / (1.0 - wi * wi))
    return out


def _bump_raw_deriv(w):
    w = np.asarray(w)
    out = np.zeros_like(w, dtype=complex)
    inside = np.abs(np.real(w)) < 1.0
    if np.any(inside):
        wi = w[inside]
        q = 1.0 - wi * wi
        out[inside] = np.exp(-1.0 / q) * (1.0 + wi) * (2.0 - 2.0 * wi * (1.0 + wi) / q**2)
    return out


@lru_cache(maxsize=1)
def _bump_constants() -> tuple[float, float, float]:
    """(normalization C, first moment of g, second moment of g)."""
    nodes, weights = _gauss.panel_nodes(-1.0, 1.0, 64, 12)
    raw = np.real(_bump_raw(nodes))
    i0 = float(np.sum(raw * weights))
    m1 = float(np.sum(nodes * raw * weights)) / i0
    m2 = float(np.sum(nodes**2 * raw * weights)) / i0
    return 1.0 / i0, m1, m2


def _strip_safe_mask(profile: VelocityProfile, re_v, im_v) -> np.ndarray:
    """Points where complex evaluation at re_v + i*im_v is well defined."""
    re_v = np.atleast_1d(np.asarray(re_v, dtype=float))
    ok = np.full(re_v.shape, abs(im_v) <= profile.strip_halfwidth)
    if profile.kind == "bump_on_tail" and im_v != 0.0:
        w = (re_v - profile.c_star) / profile.eta
        ok &= np.abs(np.abs(w) - 1.0) >= BUMP_EDGE_MARGIN
    if profile.kind == "sum":
        for p in profile.parts:
            ok &= _strip_safe_mask(p, re_v, im_v)
    return ok


def _check_strip(profile: VelocityProfile, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    im = np.imag(v)
    if np.any(np.abs(im) > profile.strip_halfwidth * (1.0 + 1e-12)):
        raise StripViolation(
            f"|Im v| = {np.max(np.abs(im)):.3g} exceeds strip halfwidth "
            f"{profile.strip_halfwidth:.3g}")
    if profile.kind == "bump_on_tail":
        off_axis = im != 0.0
        if np.any(off_axis):
            w = (np.real(v[off_axis]) - profile.c_star) / profile.eta
            if np.any(np.abs(np.abs(w) - 1.0) < BUMP_EDGE_MARGIN):
                raise StripViolation(
                    "complex evaluation within the bump support-edge margin")
    if profile.kind == "sum":
        for p in profile.parts:
            _check_strip(p, v)
    return v


def _eval_f_raw(profile: VelocityProfile, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if profile.kind == "maxwellian":
        z = (v - profile.drift) / profile.width
        return profile.mass / (_SQRT_2PI * profile.width) * np.exp(-0.5 * z * z)
    if profile.kind == "bump_on_tail":
        c, _, _ = _bump_constants()
        w = (v - profile.c_star) / profile.eta
        amp = profile.eps * _base_mass(profile.base) / profile.eta
        return (1.0 - profile.eps) * _eval_f_raw(profile.base, v) + amp * c * _bump_raw(w)
    return sum(_eval_f_raw(p, v) for p in profile.parts)


def _eval_df_raw(profile: VelocityProfile, v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if profile.kind == "maxwellian":
        return -(v - profile.drift) / profile.width**2 * _eval_f_raw(profile, v)
    if profile.kind == "bump_on_tail":
        c, _, _ = _bump_constants()
        w = (v - profile.c_star) / profile.eta
        amp = profile.eps * _base_mass(profile.base) / profile.eta**2
        return ((1.0 - profile.eps) * _eval_df_raw(profile.base, v)
                + amp * c * _bump_raw_deriv(w))
    return sum(_eval_df_raw(p, v) for p in profile.parts)


@lru_cache(maxsize=256)
def _base_mass(base: VelocityProfile) -> float:
    return moment(base, 0)


def eval_f(profile: VelocityProfile, v):
    """Analytic extension of the distribution at complex v (real >= 0 on the axis)."""
    v = _check_strip(profile, v)
    out = _eval_f_raw(profile, v)
    if np.all(np.imag(v) == 0.0):
        out = np.real(out) + 0.0j
    return out if out.shape else complex(out)


def eval_df(profile: VelocityProfile, v):
    """Closed-form velocity derivative of the analytic extension."""
    v = _check_strip(profile, v)
    out = _eval_df_raw(profile, v)
    if np.all(np.imag(v) == 0.0):
        out = np.real(out) + 0.0j
    return out if out.shape else complex(out)


def support_bounds(profile: VelocityProfile) -> tuple[float, float]:
    """Interval outside which the distribution is negligible."""
    if profile.kind == "maxwellian":
        return (profile.drift - 10.0 * profile.width, profile.drift + 10.0 * profile.width)
    if profile.kind == "bump_on_tail":
        lo, hi = support_bounds(profile.base)
        return (min(lo, profile.c_star - 5.0 * profile.eta),
                max(hi, profile.c_star + 5.0 * profile.eta))
    los, his = zip(*(support_bounds(p) for p in profile.parts))
    return (min(los), max(his))


def resolution_scale(profile: VelocityProfile) -> float:
    """Smallest velocity feature size (quadrature panel sizing hint)."""
    if profile.kind == "maxwellian":
        return profile.width
    if profile.kind == "bump_on_tail":
        return min(resolution_scale(profile.base), 0.5 * profile.eta)
    return min(resolution_scale(p) for p in profile.parts)


def analyticity_breakpoints(profile: VelocityProfile, depth: int = 8) -> tuple[float, ...]:
    """Panel edges that must be honored when integrating across this profile.

    The compact bump is smooth but not analytic at its support edges; panels
    are pinned there and graded geometrically into the support so Gauss
    quadrature keeps spectral accuracy.
    """
    if profile.kind == "maxwellian":
        return ()
    if profile.kind == "bump_on_tail":
        lo = profile.c_star - profile.eta
        hi = profile.c_star + profile.eta
        pts = [lo, hi]
        for j in range(1, depth + 1):
            h = profile.eta * 2.0 ** (-j)
            pts += [lo + h, hi - h]
        return tuple(sorted(pts)) + analyticity_breakpoints(profile.base, depth)
    out: tuple[float, ...] = ()
    for p in profile.parts:
        out += analyticity_breakpoints(p, depth)
    return out


def decay_envelope(profile: VelocityProfile) -> tuple[float, float]:
    """(C0, C1) with |f| <= C0 exp(-C1 (Re v)^2) on the strip."""
    return profile.bound_consts


@lru_cache(maxsize=512)
def moment(profile: VelocityProfile, order: int) -> float:
    """Numerical velocity moment of f (order 0 or 2)."""
    if order not in (0, 2):
        raise ValueError("moment order must be 0 or 2")
    lo, hi = support_bounds(profile)
    lo, hi = lo - 2.0 * profile.width, hi + 2.0 * profile.width
    scale = resolution_scale(profile)
    breaks = [x for x in analyticity_breakpoints(profile, depth=14) if lo < x < hi]
    edges = sorted({lo, hi, *breaks})
    total = 0.0
    for seg_lo, seg_hi in zip(edges[:-1], edges[1:]):
        npanels, gauss_order = _gauss.layout(
            seg_hi - seg_lo, scale, max(64, 512 * (seg_hi - seg_lo) / (hi - lo)))
        total += np.real(_gauss.integrate(
            lambda v: np.real(_eval_f_raw(profile, v)) * np.real(v) ** order,
            seg_lo, seg_hi, npanels, gauss_order))
    return float(total)


def compatibility_alpha(profile: VelocityProfile, kappa: float) -> float:
    """Background volume fraction alpha0 = 1 - kappa * m0, required positive."""
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    alpha0 = 1.0 - kappa * moment(profile, 0)
    if alpha0 <= 0.0:
        raise VacuumViolation(
            f"kappa * m0 = {kappa * moment(profile, 0):.6g} >= 1 leaves no fluid volume")
    return alpha0
