"""Vertical linear-mode diagnostics: wavenumbers and decay rates.

The linearised vertical dynamics about uniform shear flow have solutions
proportional to sin/cos(k z) exp(lambda t) with lambda = -nu*k^2.  The
admissible wavenumbers solve two transcendental characteristic equations:

    tan k = k / (1 + c_u*(1+c_u)*k^2)   (velocity modes)
    tan k = h*k                          (concentration modes)

Both have only roots k > pi besides k = 0, so every non-trivial vertical
mode decays at least as fast as nu*pi^2 while the depth-averaged quantities
are neutral: that spectral gap is what makes the depth-averaged model an
attracting description.  nu is supplied externally (equilibrium_eddy_
viscosity); the module is a pure diagnostic of it.

Roots are found by bisection (never Newton) so brackets are guaranteed
across the tangent poles; brackets are shrunk by 1e-9 from odd multiples of
pi/2 to avoid evaluating tan at the poles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

POLE_MARGIN = 1e-9
RESIDUAL_TOL = 1e-12


class BracketError(RuntimeError):
    """A bisection bracket did not straddle a sign change."""


@dataclass(frozen=True)
class SpectrumResult:
    """First wavenumbers (ascending, all > pi) and their decay rates."""

    ks: np.ndarray
    lambdas: np.ndarray
    nu: float

    @property
    def gap(self) -> float:
        """Quantitative spectral gap nu*pi^2 below the zero eigenvalues."""
        return self.nu * math.pi**2


def equilibrium_eddy_viscosity(c_t: float, h: float, q: float, c_u: float) -> float:
    """Eddy viscosity of the uniform shear equilibrium:
    nu = c_t*h*q*sqrt(2)/(1+2*c_u)."""
    if c_t <= 0 or h <= 0 or q <= 0 or c_u <= 0:
        raise ValueError(
            f"all inputs must be > 0; got c_t={c_t}, h={h}, q={q}, c_u={c_u}")
    return c_t * h * q * math.sqrt(2.0) / (1.0 + 2.0 * c_u)


def _bisect(f, lo, hi):
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]: f={flo!r}, {fhi!r}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (fhi > 0):
            hi, fhi = mid, fmid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def velocity_wavenumbers(c_u: float, n: int = 5) -> np.ndarray:
    """First n positive roots of tan k = k/(1 + c_u*(1+c_u)*k^2), k > pi.

    One root per period bracket ((m-1/2)pi, (m+1/2)pi), m = 1..n, sitting
    just above m*pi; it approaches m*pi from above as c_u grows.
    """
    if c_u <= 0:
        raise ValueError(f"c_u must be > 0, got {c_u}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    a = c_u * (1.0 + c_u)

    def f(k):
        return math.tan(k) - k / (1.0 + a * k * k)

    ks = []
    for m in range(1, n + 1):
        lo = (m - 0.5) * math.pi + POLE_MARGIN
        hi = (m + 0.5) * math.pi - POLE_MARGIN
        k = _bisect(f, lo, hi)
        # velocity roots sit near m*pi where tan is well conditioned, so the
        # characteristic residual is checkable at full precision
        if abs(f(k)) > RESIDUAL_TOL:
            raise BracketError(f"root {k} fails tan k = k/(1+{a}k^2) by {abs(f(k)):.3e}")
        ks.append(k)
    return np.array(ks)


def concentration_wavenumbers(h: float, n: int = 5) -> np.ndarray:
    """First n positive non-zero roots of tan k = h*k, k > pi.

    One root per bracket (m*pi, (m+1/2)pi), m = 1..n; roots migrate toward
    the (m+1/2)pi pole as h grows.  (For h=1 the first root is the classic
    4.4934 of tan k = k.)
    """
    if h <= 0:
        raise ValueError(f"h must be > 0, got {h}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")

    def f(k):
        return math.tan(k) - h * k

    ks = []
    for m in range(1, n + 1):
        lo = m * math.pi
        hi = (m + 0.5) * math.pi - POLE_MARGIN
        k = _bisect(f, lo, hi)
        # near the pole tan itself is ill conditioned, so verify with the
        # pole-free form sin k - h*k*cos k, scaled by its local derivative
        residual = abs(math.sin(k) - h * k * math.cos(k))
        if residual > RESIDUAL_TOL * (1.0 + h * k):
            raise BracketError(f"root {k} fails tan k = {h}k by {residual:.3e}")
        ks.append(k)
    return np.array(ks)


def decay_rates(nu: float, ks) -> np.ndarray:
    """lambda_i = -nu*k_i^2 for the given wavenumbers."""
    if nu <= 0:
        raise ValueError(f"nu must be > 0, got {nu}")
    ks = np.asarray(ks, dtype=float)
    return -nu * ks * ks


def compute_spectrum(c_u: float, c_t: float, h: float, q: float, n: int = 5):
    """Velocity and concentration spectra at the given operating point.

    Returns (velocity: SpectrumResult, concentration: SpectrumResult) with
    nu from the uniform shear equilibrium.
    """
    nu = equilibrium_eddy_viscosity(c_t, h, q, c_u)
    kv = velocity_wavenumbers(c_u, n)
    kc = concentration_wavenumbers(h, n)
    return (SpectrumResult(kv, decay_rates(nu, kv), nu),
            SpectrumResult(kc, decay_rates(nu, kc), nu))
