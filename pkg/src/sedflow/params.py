"""Model constants, derived quantities, and uniform-flow equilibria.

Everything here is nondimensional: depths scale with the characteristic
depth, velocities with the long-wave speed, so gravity is 1.  The closed
coefficients below are those of the reduced depth-averaged model for
turbulent shallow flow carrying suspended sediment; they are fixed numbers
of the closure, not tunables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

# --- momentum equation coefficients ---------------------------------------
DRAG = 0.00293               # bed drag, multiplies ubar*qbar/h
GRAVITY_FORCING = 0.993      # multiplies tan(theta) - d(h+b)/dx
SELF_ADVECTION = 1.025       # ubar * d(ubar)/dx
CROSS_ADVECTION = 1.017      # vbar * d(ubar)/dy
DEPTH_GRAD_U = 0.00817       # depth-gradient correction, u-equation
DEPTH_GRAD_V = 0.00809       # depth-gradient correction, v-equation
DISPERSION_UV = 0.0941       # isotropic turbulent dispersion of momentum
DISPERSION_CROSS_UV = 0.0839  # anisotropic (u^2-v^2) dispersion correction
SEDIMENT_MOMENTUM = 0.00257  # (s-1)*ubar*cbar*qbar/h feedback on momentum
SEDIMENT_PRESSURE = 0.298    # (s-1)*h*d(cbar)/dx buoyancy-pressure term

# --- concentration equation coefficients ----------------------------------
DEPOSITION_0, DEPOSITION_1 = 0.938, 28.9      # (w_f/h)(a + b*w_f/q)*cbar
ENTRAINMENT_0, ENTRAINMENT_1 = 0.984, 51.3    # (w_f/h)(a - b*w_f/q)*c_ae
ADVECTION_C0, ADVECTION_C1 = 1.01, 3.09       # linearised advection factor
DISPERSION_C = 0.0331        # isotropic dispersion of concentration
DISPERSION_CROSS_C = 0.0271  # anisotropic dispersion correction

# Leading-order concentration advection uses the exponential form
# amp*exp(-rate*w_f/q); the comprehensive model uses its linearisation
# (ADVECTION_C0 - ADVECTION_C1*w_f/q) with coefficients rounded to 3 digits.
ADVECTION_EXP_AMP = 1.007
ADVECTION_EXP_RATE = 3.073

# Plain depth-averaged advection-diffusion comparison model: dispersion
# coefficient multiplying h*qbar*laplacian(cbar).
REFERENCE_DISPERSION = 0.13

# Nominal equilibrium speed U = 18.7*sqrt(tan theta) quoted for steady
# uniform flow; the steady-profile helpers substitute this value so figure
# reproductions use the same operating point.  The drag/forcing balance with
# the coefficients above gives sqrt(0.993/0.00293) = 18.41; see
# steady_equilibrium for the self-consistent fixed point.
EQUILIBRIUM_SPEED_COEFF = 18.7

# Steady-flow vertical velocity shape: u(Z)/sqrt(tan(theta)/c_t) as a
# polynomial in the stretched coordinate Z (ascending powers).  Lives here
# because the Smagorinski-constant consistency value is derived from it.
STEADY_VELOCITY_SHAPE = (
    2.18, 1.19, -0.297, -0.0533, -0.0173, -0.00366, -0.00115, -0.000089,
)


def falling_velocity(s: float, g: float, d: float, c_D: float) -> float:
    """Terminal settling speed of a particle of effective size d.

    w_f = sqrt(4*(s-1)*g*d / (3*c_D)), the standard drag-balance form for
    large grain Reynolds number.
    """
    if not (s > 1 and g > 0 and d > 0 and c_D > 0):
        raise ValueError(
            f"falling_velocity requires s>1, g>0, d>0, c_D>0; "
            f"got s={s}, g={g}, d={d}, c_D={c_D}"
        )
    return math.sqrt(4.0 * (s - 1.0) * g * d / (3.0 * c_D))


def reference_concentration(tan_theta: float, d: float) -> float:
    """Equilibrium reference concentration at the mean bed.

    c_ae = 3.26*tan(theta)^1.5 / (d^0.8 * (1.39 - ln d)^3) with the natural
    logarithm.  (The natural-log reading reproduces c_ae = 0.0057 at
    tan(theta)=0.01, d=6e-5; base 10 would give ~0.044.)  An equivalent
    Chezy-friction estimate c_ae ~ 0.075*u_f^3/d^0.8 with C' = 18*log(4/d)
    exists but is not used at runtime.
    """
    if tan_theta < 0:
        raise ValueError(f"reference_concentration requires tan_theta>=0; got {tan_theta}")
    if not 0 < d < 4:
        raise ValueError(
            f"reference_concentration requires 0 < d < 4 so the log factor "
            f"stays positive; got d={d}"
        )
    return 3.26 * tan_theta**1.5 / (d**0.8 * (1.39 - math.log(d)) ** 3)


def smagorinski_constant_consistency() -> float:
    """Smagorinski constant consistent with the steady velocity profile.

    The depth average of the steady profile polynomial, divided by
    sqrt(c_t), must reproduce the nominal equilibrium speed coefficient
    18.7; hence c_t = (Pbar/18.7)^2 where Pbar is the exact polynomial
    integral over Z in [0, 1].  Evaluates to ~0.0202.
    """
    pbar = sum(c / (k + 1) for k, c in enumerate(STEADY_VELOCITY_SHAPE))
    return (pbar / EQUILIBRIUM_SPEED_COEFF) ** 2


@dataclass(frozen=True)
class ModelParams:
    """Physical and closure constants, plus cached derived quantities.

    Immutable after construction; w_f and c_ae are computed once from the
    primary inputs and always coherent with them.
    """

    tan_theta: float = 0.01   # mean bed slope, >= 0
    s: float = 2.65           # relative sediment density rho_m/rho, > 1
    d: float = 6e-5           # nondimensional mean particle size, > 0
    c_D: float = 1.4          # particle drag coefficient
    c_u: float = 1.85         # bed slip-law constant
    c_t: float = smagorinski_constant_consistency()  # Smagorinski constant
    g: float = 1.0            # nondimensional gravity, fixed 1
    w_f: float = field(init=False)
    c_ae: float = field(init=False)

    def __post_init__(self):
        if self.tan_theta < 0:
            raise ValueError(f"tan_theta must be >= 0, got {self.tan_theta}")
        if self.s <= 1:
            raise ValueError(f"s must be > 1, got {self.s}")
        if self.d <= 0:
            raise ValueError(f"d must be > 0, got {self.d}")
        if self.c_D <= 0:
            raise ValueError(f"c_D must be > 0, got {self.c_D}")
        if self.c_u <= 0:
            raise ValueError(f"c_u must be > 0, got {self.c_u}")
        if self.c_t <= 0:
            raise ValueError(f"c_t must be > 0, got {self.c_t}")
        object.__setattr__(self, "w_f", falling_velocity(self.s, self.g, self.d, self.c_D))
        object.__setattr__(self, "c_ae", reference_concentration(self.tan_theta, self.d))


@dataclass(frozen=True)
class Equilibrium:
    """Uniform flat-bed fixed point of the model."""

    U: float
    V: float
    Cbar: float
    q: float


def equilibrium_concentration(params: ModelParams, q: float) -> float:
    """Depth-averaged concentration balancing erosion against deposition.

    Zero of the concentration source terms at mean speed q:
    Cbar = c_ae*(0.984 - 51.3*w_f/q) / (0.938 + 28.9*w_f/q).
    Negative when w_f/q exceeds 0.984/51.3, i.e. outside the model's
    dilute-suspension regime.
    """
    if q <= 0:
        raise ValueError(f"equilibrium_concentration requires q > 0, got {q}")
    r = params.w_f / q
    return params.c_ae * (ENTRAINMENT_0 - ENTRAINMENT_1 * r) / (DEPOSITION_0 + DEPOSITION_1 * r)


def steady_equilibrium(params: ModelParams) -> Equilibrium:
    """Uniform flat-bed fixed point of the comprehensive model.

    Solves the x-momentum balance drag = forcing + sediment feedback,
    -DRAG*U^2 + GRAVITY_FORCING*tan(theta) + SEDIMENT_MOMENTUM*(s-1)*Cbar*U^2 = 0,
    jointly with the concentration source balance, so the returned state is
    an exact fixed point of the full tendency (residuals at rounding level).
    The sediment feedback shifts U/sqrt(tan theta) from 18.41 to ~18.46 at
    the default operating point, within the quoted 18.7 +- 2% band.
    """
    if params.tan_theta <= 0:
        raise ValueError(f"steady_equilibrium requires tan_theta > 0, got {params.tan_theta}")
    forcing = GRAVITY_FORCING * params.tan_theta
    u = math.sqrt(forcing / DRAG)
    cbar = equilibrium_concentration(params, u)
    for _ in range(200):
        denom = DRAG - SEDIMENT_MOMENTUM * (params.s - 1.0) * cbar
        if denom <= 0:
            raise ValueError("sediment feedback exceeds drag; no uniform equilibrium")
        u_new = math.sqrt(forcing / denom)
        converged = abs(u_new - u) <= 1e-15 * u_new
        u = u_new
        cbar = equilibrium_concentration(params, u)
        if converged:
            break
    return Equilibrium(U=u, V=0.0, Cbar=cbar, q=u)
