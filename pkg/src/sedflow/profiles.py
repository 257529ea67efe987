"""Vertical-structure reconstruction on the stretched coordinate Z=(z-b)/h.

The depth-averaged model carries only (h, ubar, vbar, cbar); these
polynomials recover the pointwise vertical profiles of concentration,
lateral velocity, shear stress and eddy diffusivity from the local state and
its lateral gradients.  All coefficient tables are in ascending powers of Z.
All operations are pure functions of point-local values, so the module is
grid-agnostic; the scenario driver supplies gradients from the solver's
difference operators.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import params as pm
from .params import ModelParams

# Concentration profile groups: leading shape in cbar, then the w_f/q and
# w_f^2/q corrections proportional to cbar and c_ae.
CONC_BASE = (0.985, 0.0422, -0.00756, -0.0139)
CONC_WQ_CBAR = (28.36, -5.156, -77.34)
CONC_W2Q_CBAR = (-0.430, -0.430, 2.578, -0.859)
CONC_WQ_CAE = (56.72, -166.3, 77.34, 2.578)
CONC_W2Q_CAE = (-0.430, 1.074, 0.0, -0.430)
# gradient corrections
CONC_ADVECTION = (2.578, 0.921, -17.68, 11.42)       # (h/q)(u dc/dx + v dc/dy)
CONC_DUDX = (-0.17, 0.449, -0.0392, -1.322)          # (h cbar/q) du/dx
CONC_DVDY = (-1.774, 1.244, 2.471, -1.486)           # (h cbar/q) dv/dy
CONC_DEPTH_ADV = CONC_DUDX                           # (cbar/q)(u dh/dx + v dh/dy)
# bed-gradient and slope corrections share one shape; the bed term enters
# once and the slope term with opposite sign
CONC_BED_SLOPE = (0.918, -0.809, 2.549, 1.343)

# Velocity profile groups.
VEL_BASE = (0.816, 0.445, -0.0916, -0.0307, -0.00383, -0.000418)
VEL_SLOPE = (2.208, 1.204, -14.31, 8.069, -1.569, 0.954, 0.586, 0.119)
VEL_DUDX = (2.326, 1.269, -13.52, 4.585, 0.894, 0.783, 0.533, 0.118, 0.0106)
VEL_DUDY = (2.352, 1.283, -13.25, 3.622, 1.53, 0.708, 0.543, 0.129, 0.0127)
VEL_SURFACE_GRAD = tuple(-c for c in VEL_SLOPE)      # exact negative of the slope group
VEL_SEDIMENT = (0.0167, 0.009, -0.107, 0.0439, 0.0173)

SHEAR_SHAPE = (0.997, -0.999, 0.000284, -0.00995, 0.00776, 0.000791, 0.000072)
EDDY_Q = (0.00628, -0.00269, -0.000733)
EDDY_SLOPE = (0.00978, -0.2605, 0.247)

# Analytic steady concentration approximation c_ae*[base(Z)]^(-rate*w_f/q).
ANALYTIC_BASE_NUM = 5.29
ANALYTIC_BASE_DEN = 3.26
ANALYTIC_Z_MAX = 1.62
ANALYTIC_RATE = 197.45

SETTLING_RATIO_WARN = 0.02  # w_f/q beyond which the w_f/q expansion is dubious


def _poly(coeffs, z):
    acc = np.zeros_like(z) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def _check_z(Z):
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0) or np.any(z > 1):
        raise ValueError("Z must lie in [0, 1]")
    return z


def _warn_settling_ratio(w_f, q):
    if w_f / q > SETTLING_RATIO_WARN:
        warnings.warn(
            f"w_f/q = {w_f / q:.3g} exceeds {SETTLING_RATIO_WARN}; the w_f/q "
            f"expansion of the vertical profiles is unreliable this far from "
            f"the dilute regime",
            stacklevel=3,
        )


@dataclass(frozen=True)
class ProfileInputs:
    """Point-local state, gradients and parameters feeding the profiles.

    Gradients default to zero so uniform-flow profiles need only the state
    values.  q must be positive (regularise upstream if needed).
    """

    params: ModelParams
    h: float = 1.0
    ubar: float = 0.0
    vbar: float = 0.0
    cbar: float = 0.0
    q: float = 1.0
    dc_dx: float = 0.0
    dc_dy: float = 0.0
    du_dx: float = 0.0
    du_dy: float = 0.0
    dv_dy: float = 0.0
    dh_dx: float = 0.0
    dh_dy: float = 0.0
    db_dx: float = 0.0
    db_dy: float = 0.0

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError(f"q must be > 0, got {self.q}")


@dataclass
class VerticalProfile:
    """Sampled profile values over strictly increasing coordinates in [0,1]."""

    zs: np.ndarray
    values: np.ndarray
    kind: str

    def __post_init__(self):
        self.zs = np.asarray(self.zs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.zs.shape != self.values.shape:
            raise ValueError("zs and values must have the same length")
        if np.any(np.diff(self.zs) <= 0):
            raise ValueError("zs must be strictly increasing")


def concentration_profile(Z, inputs: ProfileInputs):
    """Full out-of-equilibrium concentration profile c(Z).

    Includes the basic cbar/c_ae distribution with its w_f/q corrections,
    the advection and depth-gradient corrections, one bed-gradient term and
    its slope companion.  (The bed-gradient shape appears once; its printed
    duplication is a typesetting artefact, and the sign pattern follows the
    intact slope line.)
    """
    z = _check_z(Z)
    p = inputs.params
    w, q = p.w_f, inputs.q
    _warn_settling_ratio(w, q)
    cbar, cae, h = inputs.cbar, p.c_ae, inputs.h
    u, v = inputs.ubar, inputs.vbar
    return (
        cbar * _poly(CONC_BASE, z)
        + cbar * (w / q) * _poly(CONC_WQ_CBAR, z)
        + cbar * (w * w / q) * _poly(CONC_W2Q_CBAR, z)
        + cae * (w / q) * _poly(CONC_WQ_CAE, z)
        + cae * (w * w / q) * _poly(CONC_W2Q_CAE, z)
        + (h / q) * (u * inputs.dc_dx + v * inputs.dc_dy) * _poly(CONC_ADVECTION, z)
        + (h * cbar / q) * inputs.du_dx * _poly(CONC_DUDX, z)
        + (h * cbar / q) * inputs.dv_dy * _poly(CONC_DVDY, z)
        + (cbar / q) * (u * inputs.dh_dx + v * inputs.dh_dy) * _poly(CONC_DEPTH_ADV, z)
        + (cbar / q**3) * (u * inputs.db_dx + v * inputs.db_dy) * _poly(CONC_BED_SLOPE, z)
        - p.tan_theta * (h * u * cbar / q**3) * _poly(CONC_BED_SLOPE, z)
    )


def concentration_profile_steady(Z, cbar, c_ae, w_f, q):
    """Steady-flow concentration profile (gradient-free groups only)."""
    if q <= 0:
        raise ValueError(f"q must be > 0, got {q}")
    z = _check_z(Z)
    _warn_settling_ratio(w_f, q)
    return (
        cbar * _poly(CONC_BASE, z)
        + cbar * (w_f / q) * _poly(CONC_WQ_CBAR, z)
        + cbar * (w_f * w_f / q) * _poly(CONC_W2Q_CBAR, z)
        + c_ae * (w_f / q) * _poly(CONC_WQ_CAE, z)
        + c_ae * (w_f * w_f / q) * _poly(CONC_W2Q_CAE, z)
    )


def concentration_analytic(Z, c_ae, w_f, q):
    """Closed-form steady concentration: vertical flux balance integral.

    c(Z) = c_ae * [(5.29+Z)/(3.26*(1.62-Z))]^(-197.45*w_f/q); valid for
    0 <= Z < 1.62 where the base stays positive.
    """
    if q <= 0:
        raise ValueError(f"q must be > 0, got {q}")
    z = np.asarray(Z, dtype=float)
    if np.any(z < 0) or np.any(z >= ANALYTIC_Z_MAX):
        raise ValueError(f"Z must lie in [0, {ANALYTIC_Z_MAX})")
    base = (ANALYTIC_BASE_NUM + z) / (ANALYTIC_BASE_DEN * (ANALYTIC_Z_MAX - z))
    return c_ae * base ** (-ANALYTIC_RATE * w_f / q)


def velocity_profile(Z, inputs: ProfileInputs):
    """Full out-of-equilibrium lateral velocity profile u(Z).

    Six groups: the base shape in ubar, the slope forcing, the two velocity
    gradient corrections, the surface-gradient correction (exact negative of
    the slope shape), and the sediment-coupling correction.
    """
    z = _check_z(Z)
    p = inputs.params
    h, q = inputs.h, inputs.q
    u, v = inputs.ubar, inputs.vbar
    return (
        u * _poly(VEL_BASE, z)
        + p.tan_theta * (h / q) * _poly(VEL_SLOPE, z)
        + (h * u / q) * inputs.du_dx * _poly(VEL_DUDX, z)
        + (h * v / q) * inputs.du_dy * _poly(VEL_DUDY, z)
        + (h / q) * (inputs.dh_dx + inputs.db_dx) * _poly(VEL_SURFACE_GRAD, z)
        + (p.s - 1.0) * inputs.cbar * u * _poly(VEL_SEDIMENT, z)
    )


def velocity_profile_steady(Z, tan_theta, c_t):
    """Steady uniform-flow velocity profile sqrt(tan_theta/c_t)*P(Z).

    The shape P is slope-independent, so u(Z)/u(1) is the same for every
    slope; the bed value P(0) > 0 is the slip velocity (no log layer is
    resolved).
    """
    if tan_theta < 0:
        raise ValueError(f"tan_theta must be >= 0, got {tan_theta}")
    if c_t <= 0:
        raise ValueError(f"c_t must be > 0, got {c_t}")
    z = _check_z(Z)
    return np.sqrt(tan_theta / c_t) * _poly(pm.STEADY_VELOCITY_SHAPE, z)


def shear_stress_profile(Z, tan_theta):
    """Steady shear stress tau_xz(Z): near-linear from 0.997*tan_theta at the
    bed to ~0 at the free surface."""
    z = _check_z(Z)
    return tan_theta * _poly(SHEAR_SHAPE, z)


def eddy_diffusivity(Z, q, tan_theta):
    """Steady eddy diffusivity eps_s(Z) = q*A(Z) + (tan_theta/q)*B(Z)."""
    if q <= 0:
        raise ValueError(f"q must be > 0, got {q}")
    z = _check_z(Z)
    return q * _poly(EDDY_Q, z) + (tan_theta / q) * _poly(EDDY_SLOPE, z)


def sample_profile(fn, n: int, kind: str) -> VerticalProfile:
    """Evaluate fn on n uniform nodes k/(n-1) over [0, 1].

    Nodes are built as exact quotients so refinements share bit-identical
    coordinates with coarser samplings.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    zs = np.arange(n) / (n - 1)
    return VerticalProfile(zs=zs, values=np.asarray(fn(zs), dtype=float), kind=kind)
