"""Shared fixtures and independent numerical oracles for the test suite.

The oracles here deliberately avoid the code paths they check: the Dawson
function comes from its Taylor series, dense line integrals from scipy's
adaptive quadrature, and the lower-branch continuation from quadrature along
an explicitly deformed contour.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy import integrate as scipy_integrate

from spraywaves import dispersion, profiles
from spraywaves.profiles import VelocityProfile


# ---------------------------------------------------------------------------
# profiles and parameter fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def std_maxwellian() -> VelocityProfile:
    return profiles.maxwellian()


@pytest.fixture(scope="session")
def bump_profile(std_maxwellian) -> VelocityProfile:
    return profiles.make_bump_on_tail(std_maxwellian, eps=0.05, eta=0.5, c_star=5.0)


@pytest.fixture(scope="session")
def maxwellian_params(std_maxwellian):
    return dispersion.make_params(std_maxwellian, c0=1.0, rho0=1.0, kappa=0.01)


@pytest.fixture(scope="session")
def bump_params(bump_profile):
    return dispersion.make_params(bump_profile, c0=5.0, rho0=1.0, kappa=1.5e-3)


@pytest.fixture(scope="session")
def acoustic_params():
    return dispersion.SprayParams(c0=1.0, rho0=1.0, kappa=0.0, alpha0=1.0)


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

def dawson_series(x: float, terms: int = 200) -> float:
    """Dawson function by its Taylor series D(x) = sum (-2)^n x^(2n+1)/(2n+1)!!."""
    term = float(x)
    total = term
    for n in range(1, terms):
        term *= -2.0 * x * x / (2 * n + 1)
        total += term
        if abs(term) < 1e-18 * max(abs(total), 1.0):
            break
    return total


def dense_line_integral(g, sigma: complex, lo: float = -np.inf,
                        hi: float = np.inf) -> complex:
    """Adaptive scipy quadrature of g(v)/(v - sigma) over the real line."""
    def real_part(v):
        return np.real(g(np.array([v]))[0] / (v - sigma))

    def imag_part(v):
        return np.imag(g(np.array([v]))[0] / (v - sigma))

    re, _ = scipy_integrate.quad(real_part, lo, hi, limit=400)
    im, _ = scipy_integrate.quad(imag_part, lo, hi, limit=400)
    return complex(re, im)


def contour_deformed_integral(g, sigma: complex, a: float, b: float,
                              dip: float) -> complex:
    """int g(z)/(z - sigma) dz along a contour dipping below sigma.

    Path: (a,0) -> (x0-r,0) -> (x0-r,y) -> (x0+r,y) -> (x0+r,0) -> (b,0) with
    y = Im(sigma) - dip; equals the analytic continuation from above when g is
    analytic between the contour and the axis.
    """
    x0 = sigma.real
    r = dip
    y = sigma.imag - dip
    nodes = [complex(a, 0), complex(x0 - r, 0), complex(x0 - r, y),
             complex(x0 + r, y), complex(x0 + r, 0), complex(b, 0)]
    total = 0.0 + 0.0j
    xs, ws = np.polynomial.legendre.leggauss(80)
    for z1, z2 in zip(nodes[:-1], nodes[1:]):
        mid = 0.5 * (z1 + z2)
        half = 0.5 * (z2 - z1)
        zs = mid + half * xs
        total += half * np.sum(g(zs) / (zs - sigma) * ws)
    return complex(total)


def profile_integrand(profile: VelocityProfile, weight: str = "v_df"):
    """Raw (no strip checks) integrand closures used against the oracles."""
    if weight == "v_df":
        return lambda v: np.asarray(v, dtype=complex) * profiles._eval_df_raw(
            profile, np.asarray(v, dtype=complex))
    if weight == "df":
        return lambda v: profiles._eval_df_raw(profile, np.asarray(v, dtype=complex))
    if weight == "f":
        return lambda v: profiles._eval_f_raw(profile, np.asarray(v, dtype=complex))
    raise ValueError(weight)
