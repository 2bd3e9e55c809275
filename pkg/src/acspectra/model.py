"""Physical configuration and quantum-number bookkeeping.

Natural units (hbar = c = 1) throughout. The effective coupling eta is the
product of the anomalous magnetic moment and the filament's linear charge
density over 2 pi eps0; only this combination ever enters the dynamics, so
it is the primary input. Energies come out in the units implied by the
inputs: 1/(M r0^2) for the untrapped system, units of omega for the trapped
one.

The dual magnetic-flux configuration (trading the electric field for an
equivalent vector potential) is not modeled as a separate input path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BoundaryError, DomainError, RegimeError

__all__ = [
    "XI_BOUNDARY_MARGIN",
    "PhysicalParams",
    "OscillatorScale",
    "Channel",
    "RegimeReport",
    "make_channel",
    "validate_bound_state_regime",
    "require_singular_sector",
    "require_bound_state_regime",
]

# Effective orders within this distance of 0 or 1 are rejected by the
# singular-sector solvers: both endpoints make the gamma-ratio matching
# degenerate, and the admissible range is the open interval.
XI_BOUNDARY_MARGIN = 1e-9


@dataclass(frozen=True)
class PhysicalParams:
    """Experiment configuration: mass, coupling, shell radius, trap frequency.

    Attributes
    ----------
    mass : float
        Particle mass M > 0.
    eta : float
        Effective coupling (moment times line charge density / 2 pi eps0);
        dimensionless. Attractive contact interaction requires eta < 0,
        real untrapped bound-state energies require eta <= -1.
    r0 : float
        Radius of the charged shell regularizing the contact term.
    omega : float
        Oscillator angular frequency; 0 means no trap.
    """

    mass: float
    eta: float
    r0: float
    omega: float = 0.0

    def __post_init__(self) -> None:
        for name in ("mass", "eta", "r0", "omega"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"PhysicalParams.{name} must be finite, got {v!r}")
        if self.mass <= 0.0:
            raise DomainError(f"PhysicalParams.mass must be > 0, got {self.mass}")
        if self.r0 <= 0.0:
            raise DomainError(f"PhysicalParams.r0 must be > 0, got {self.r0}")
        if self.omega < 0.0:
            raise DomainError(f"PhysicalParams.omega must be >= 0, got {self.omega}")

    @classmethod
    def from_line_source(cls, mass: float, moment: float, charge_density: float,
                         r0: float, omega: float = 0.0) -> "PhysicalParams":
        """Build from (mu, lambda) with eps0 = 1: eta = mu lambda / (2 pi)."""
        return cls(mass=mass, eta=moment * charge_density / (2.0 * math.pi),
                   r0=r0, omega=omega)

    @property
    def gamma(self) -> float:
        """Oscillator scale gamma = M omega (inverse squared trap length)."""
        return self.mass * self.omega

    @property
    def has_oscillator(self) -> bool:
        return self.omega > 0.0


@dataclass(frozen=True)
class OscillatorScale:
    """gamma = M omega; gamma = 0 exactly when there is no trap."""

    gamma: float

    @classmethod
    def from_params(cls, params: PhysicalParams) -> "OscillatorScale":
        return cls(gamma=params.mass * params.omega)


@dataclass(frozen=True)
class Channel:
    """One angular-momentum/spin sector and its derived effective order.

    xi = m + s*eta is the order of the radial solutions; the sector is
    "singular" when 0 < |xi| < 1, where both r^(+|xi|) and r^(-|xi|)
    behaviors are square integrable and a boundary condition must pick the
    admixture.
    """

    m: int
    s: int
    xi: float
    abs_xi: float
    m_j: float
    singular: bool
    branch: int  # sign(xi): -1, 0, +1

    def __post_init__(self) -> None:
        if self.s not in (-1, 1):
            raise DomainError(f"Channel.s must be +1 or -1, got {self.s}")


def make_channel(params: PhysicalParams, m: int, s: int) -> Channel:
    """Derive the channel data for orbital number m and spin projection s."""
    if s not in (-1, 1):
        raise DomainError(f"make_channel: s must be +1 or -1, got {s}")
    m = int(m)
    xi = m + s * params.eta
    abs_xi = abs(xi)
    return Channel(
        m=m,
        s=s,
        xi=xi,
        abs_xi=abs_xi,
        m_j=m + 0.5,
        singular=0.0 < abs_xi < 1.0,
        branch=0 if xi == 0.0 else (1 if xi > 0.0 else -1),
    )


@dataclass(frozen=True)
class RegimeReport:
    """Diagnostics for the bound-state preconditions; never raises."""

    attractive: bool          # eta < 0
    real_energy_guaranteed: bool  # eta <= -1
    singular_sector: bool     # 0 < |xi| < 1

    @property
    def bound_state_ok(self) -> bool:
        return self.attractive and self.real_energy_guaranteed and self.singular_sector

    def failures(self) -> list[str]:
        out = []
        if not self.attractive:
            out.append("eta<0")
        if not self.real_energy_guaranteed:
            out.append("eta<=-1")
        if not self.singular_sector:
            out.append("0<|xi|<1")
        return out


def validate_bound_state_regime(params: PhysicalParams, ch: Channel) -> RegimeReport:
    return RegimeReport(
        attractive=params.eta < 0.0,
        real_energy_guaranteed=params.eta <= -1.0,
        singular_sector=ch.singular,
    )


def require_singular_sector(ch: Channel) -> float:
    """Return |xi| after enforcing the open singular-sector interval.

    Orders within XI_BOUNDARY_MARGIN of 0 or 1 are rejected: the endpoints
    degenerate the gamma-ratio matching.
    """
    nu = ch.abs_xi
    if nu <= XI_BOUNDARY_MARGIN or nu >= 1.0 - XI_BOUNDARY_MARGIN:
        raise BoundaryError(
            f"|xi| = {nu!r} is outside the open singular sector "
            f"(margin {XI_BOUNDARY_MARGIN:g} at both endpoints)")
    return nu


def require_bound_state_regime(params: PhysicalParams, ch: Channel) -> float:
    """Solver entry guard; returns |xi|. Raises RegimeError/BoundaryError."""
    report = validate_bound_state_regime(params, ch)
    if not report.singular_sector:
        raise BoundaryError(
            f"channel (m={ch.m}, s={ch.s:+d}) has |xi| = {ch.abs_xi:g}, "
            "outside the singular sector (0, 1)")
    nu = require_singular_sector(ch)
    if not report.real_energy_guaranteed:
        raise RegimeError(
            f"eta = {params.eta:g} violates the bound-state condition eta <= -1")
    return nu
