"""Closed-form bound state of the untrapped system (omega = 0).

In a singular channel with eta <= -1 the shell boundary condition fixes a
single bound state,

    E = -(2 / (M r0^2)) [ ((eta+|xi|)/(eta-|xi|)) * Gamma(1+|xi|)/Gamma(1-|xi|) ]^(1/|xi|),

with radial wavefunction K_|xi|(kappa r), kappa^2 = -2 M E. The closed form
follows from equating the two-term small-argument log-derivative of K at r0
to eta; `check_boundary_match` evaluates that matching expression at any
probe energy, and `exact_log_derivative_mismatch` measures how far the
*exact* K log-derivative is from eta at finite r0 (the matching uses the
truncated kernel, so this gap does not vanish: kappa*r0 is scale invariant).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import DegenerateError, DomainError, PoleError
from .model import Channel, PhysicalParams, require_bound_state_regime
from .specfun import bessel_k, theta_ratio

__all__ = [
    "BoundState",
    "energy_closed_form",
    "solve_bound_state",
    "wavefunction",
    "wavefunction_norm",
    "check_boundary_match",
    "exact_log_derivative_mismatch",
]


@dataclass(frozen=True)
class BoundState:
    """A single untrapped bound state.

    kappa = sqrt(-2 M energy); log_deriv_residual is the value of
    check_boundary_match at this energy (zero to rounding by construction).
    """

    energy: float
    channel: Channel
    kappa: float
    log_deriv_residual: float


def _bracket_log(params: PhysicalParams, nu: float) -> float:
    """log of ((eta+nu)/(eta-nu)) * Theta_nu, the positive matching bracket."""
    eta = params.eta
    if eta == nu:
        raise DegenerateError("eta equals |xi|; matching ratio undefined")
    ratio = (eta + nu) / (eta - nu)
    if ratio <= 0.0:
        raise DegenerateError(
            f"matching ratio (eta+|xi|)/(eta-|xi|) = {ratio:g} is not positive")
    return math.log(ratio) + math.log(theta_ratio(nu))


def energy_closed_form(params: PhysicalParams, ch: Channel) -> float:
    """Bound-state energy of the untrapped system; always negative.

    Evaluated fully in log space: E = -(2/(M r0^2)) exp((1/|xi|) log bracket),
    so small |xi| cannot overflow the bracket power.
    """
    nu = require_bound_state_regime(params, ch)
    log_bracket = _bracket_log(params, nu)
    return -(2.0 / (params.mass * params.r0 ** 2)) * math.exp(log_bracket / nu)


def solve_bound_state(params: PhysicalParams, ch: Channel) -> BoundState:
    energy = energy_closed_form(params, ch)
    return BoundState(
        energy=energy,
        channel=ch,
        kappa=math.sqrt(-2.0 * params.mass * energy),
        log_deriv_residual=check_boundary_match(params, ch, energy),
    )


def wavefunction(state: BoundState, r: float, normalized: bool = False) -> float:
    """Radial wavefunction K_|xi|(kappa r), optionally L^2(r dr)-normalized."""
    if not (r > 0.0):
        raise DomainError(f"wavefunction: r must be positive, got {r}")
    value = bessel_k(state.channel.abs_xi, state.kappa * r)
    if normalized:
        value /= wavefunction_norm(state)
    return value


def wavefunction_norm(state: BoundState) -> float:
    """sqrt of Int_0^inf K_|xi|(kappa r)^2 r dr by adaptive quadrature.

    The integrand is r^(1-2|xi|) at the origin (integrable for |xi| < 1)
    and decays like e^(-2 kappa r).
    """
    nu = state.channel.abs_xi
    kappa = state.kappa

    def integrand(r: float) -> float:
        return bessel_k(nu, kappa * r) ** 2 * r

    r_split = 1.0 / kappa
    total = 0.0
    for lo, hi in ((0.0, r_split), (r_split, 40.0 / kappa)):
        part, _ = quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-11, limit=200)
        total += part
    return math.sqrt(total)


def check_boundary_match(params: PhysicalParams, ch: Channel, energy: float) -> float:
    """Matching residual: two-term log-derivative expression minus eta.

    The expression is |xi| (A + B)/(A - B) with A = r0^(2|xi|) (-M E)^|xi|
    and B = 2^|xi| Theta. It equals eta exactly when the energy is the
    closed form, so the returned residual is 0 to rounding there.
    """
    nu = require_bound_state_regime(params, ch)
    if not (energy < 0.0):
        raise DomainError(f"check_boundary_match: energy must be negative, got {energy}")
    a = params.r0 ** (2.0 * nu) * (-params.mass * energy) ** nu
    b = 2.0 ** nu * theta_ratio(nu)
    denom = a - b
    if denom == 0.0 or abs(denom) < 1e-300:
        raise PoleError("check_boundary_match: matching denominator vanishes "
                        "(probe energy sits on the spectral condition pole)")
    return nu * (a + b) / denom - params.eta


def exact_log_derivative_mismatch(params: PhysicalParams, ch: Channel,
                                  energy: float) -> float:
    """r0 (d/dr) ln K_|xi|(kappa r) at r0, minus eta.

    Uses the exact derivative K_nu'(x) = -K_{1-nu}(x) - (nu/x) K_nu(x)
    (valid for nu in (0,1) through K_{-a} = K_a). At the closed-form energy
    kappa r0 depends only on (eta, |xi|), so this mismatch measures the
    size of the truncated-kernel approximation and does not shrink with r0.
    """
    nu = require_bound_state_regime(params, ch)
    if not (energy < 0.0):
        raise DomainError("exact_log_derivative_mismatch: energy must be negative")
    kappa = math.sqrt(-2.0 * params.mass * energy)
    x = kappa * params.r0
    k_nu = bessel_k(nu, x)
    k_comp = bessel_k(1.0 - nu, x)
    log_deriv = -x * k_comp / k_nu - nu
    return log_deriv - params.eta
