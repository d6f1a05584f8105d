"""Moving-window sub-solution construction and verification.

The object under test is a windowed wave

    w(x, t) = amplitude * exp(gamma*t) * exp(-decay*(x - c*t))
              * cos(pi*(x - c*t) / (2*window))

supported on a window of half-width ``window`` around ``x = c*t``, with
``gamma = r1 * a * predator_level``.  Pushed through the linear operator

    L[W] = d1*(J1 * W) + linear_rate*W - dW/dt

and the damped reaction operator

    Q[W] = d1*(J1 * W) - d1*W + r1*W*(1 - W - a*predator_level) - dW/dt,

the wave is a strict sub-solution (Q[w] > L[w] > 0) whenever two scalar
conditions on the decay rate hold: the frame speed must stay below the
amplitude speed bound (cosine component) and must exactly match the tilt
speed (sine component).  Both conditions, their infinite-window limits,
and the pointwise positivity of L[w] and Q[w] are verified numerically
here; the time derivative of the wave is taken from its closed form, so
no time-discretization noise enters the strict positivity check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .dynamics import Params
from .errors import NoRootError, NumericFailureError
from .kernels import Kernel, exp_integral, tilted_mean

_DECAY_CEILING_OVER_R = 200.0


def max_linear_rate(params: Params, predator_level: float, prey_level: float) -> float:
    """Largest admissible linear growth offset for the damped reaction.

    Below this rate the damped reaction dominates the linear operator on
    densities up to ``prey_level``.
    """
    return (params.r1 - params.r1 * prey_level
            - params.r1 * params.a * predator_level - params.d1)


@dataclass(frozen=True)
class SubsolutionParams:
    """Everything needed to build and check one windowed wave."""

    window: float          # half-width of the moving support
    decay: float           # exponential decay rate across the window
    amplitude: float       # wave amplitude at the window center, t = 0
    predator_level: float  # assumed predator smallness
    prey_level: float      # density range on which the damping argument runs
    linear_rate: float     # growth offset of the linear comparison operator
    frame_speed: float     # speed of the moving window

    def growth_rate(self, params: Params) -> float:
        """Slow exponential growth rate of the wave amplitude in time."""
        return params.r1 * params.a * self.predator_level


def validate_params(p: SubsolutionParams, params: Params, kernel: Kernel) -> None:
    """Raise if the construction preconditions fail."""
    if p.predator_level <= 0.0 or p.prey_level <= 0.0:
        raise ValueError("predator_level and prey_level must be positive")
    if p.amplitude <= 0.0:
        raise ValueError("amplitude must be positive")
    if p.decay <= 0.0:
        raise ValueError("decay rate must be positive")
    if p.frame_speed <= 0.0:
        raise ValueError("frame speed must be positive")
    slack = params.r1 * (1.0 - p.prey_level - 2.0 * params.a * p.predator_level)
    if not slack > 0.0:
        raise ValueError(
            "predator_level/prey_level too large: r1*(1 - prey_level - 2*a*predator_level) "
            f"= {slack:g} must be positive")
    m_cap = max_linear_rate(params, p.predator_level, p.prey_level)
    if not p.linear_rate < m_cap:
        raise ValueError(
            f"linear_rate {p.linear_rate:g} must lie strictly below {m_cap:g}")
    if not p.window > kernel.support_radius / 2.0:
        raise ValueError(
            f"window {p.window:g} must exceed half the kernel support "
            f"({kernel.support_radius / 2.0:g}) so dispersal cannot jump across it")


def wave_profile(p: SubsolutionParams, params: Params, x, t: float):
    """The windowed wave at position(s) ``x`` and time ``t``."""
    gamma = p.growth_rate(params)
    z = np.asarray(x, dtype=float) - p.frame_speed * t
    inside = np.abs(z) < p.window
    zc = np.clip(z, -p.window, p.window)
    vals = np.where(
        inside,
        p.amplitude * math.exp(gamma * t) * np.exp(-p.decay * zc)
        * np.cos(0.5 * np.pi * zc / p.window),
        0.0,
    )
    if np.isscalar(x) or np.ndim(x) == 0:
        return float(vals)
    return vals


def _cos_weighted(kernel: Kernel, decay: float, window: float | None) -> float:
    if window is None:
        return exp_integral(kernel, decay)
    w = float(window)
    return exp_integral(kernel, decay, weight=lambda y: np.cos(0.5 * np.pi * y / w))


def _sin_weighted(kernel: Kernel, decay: float, window: float | None) -> float:
    if window is None:
        return tilted_mean(kernel, decay)
    w = float(window)
    return exp_integral(kernel, decay, weight=lambda y: np.sin(0.5 * np.pi * y / w))


def amplitude_speed_bound(decay: float, linear_rate: float, gamma: float,
                          params: Params, kernel: Kernel,
                          window: float | None = None) -> float:
    """Largest frame speed the cosine (amplitude) balance tolerates.

    ``window=None`` gives the infinite-window limit, where the weighted
    integral becomes the kernel moment generating function.
    """
    if not decay > 0.0:
        raise ValueError("decay rate must be positive")
    integral = _cos_weighted(kernel, decay, window)
    return (linear_rate - gamma + params.d1 * integral) / decay


def tilt_speed(decay: float, params: Params, kernel: Kernel,
               window: float | None = None) -> float:
    """Frame speed induced by the sine (tilt) component of the wave.

    At this exact speed the odd component of the windowed balance
    vanishes.  ``window=None`` gives the infinite-window limit
    ``d1 * integral of y * exp(decay*y) * J(y)``.
    """
    if decay < 0.0:
        raise ValueError("decay rate must be nonnegative")
    if window is None:
        return params.d1 * tilted_mean(kernel, decay)
    return (2.0 * window * params.d1 / np.pi) * _sin_weighted(kernel, decay, window)


def match_decay_rate(frame_speed: float, window: float, params: Params,
                     kernel: Kernel, residual_tol: float = 1e-8) -> float:
    """Solve ``tilt_speed(decay) == frame_speed`` for the decay rate.

    The tilt speed is zero at decay 0 and increasing without bound, so a
    bracketing solve applies; the bracket grows by doubling.  Raises
    :class:`NoRootError` when the speed is unreachable below the rate
    ceiling (a larger window reaches any speed at a smaller rate).
    """
    if frame_speed < 0.0:
        raise ValueError("frame speed must be nonnegative")
    if frame_speed == 0.0:
        return 0.0
    ceiling = _DECAY_CEILING_OVER_R / kernel.support_radius
    f = lambda beta: tilt_speed(beta, params, kernel, window) - frame_speed
    hi = 1.0 / kernel.support_radius
    while f(hi) < 0.0:
        hi *= 2.0
        if hi > ceiling:
            raise NoRootError(
                f"tilt speed cannot reach {frame_speed:g} below the rate ceiling "
                f"{ceiling:g}; retry with a larger window than {window:g}")
    beta = float(brentq(f, 0.0, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200))
    resid = abs(tilt_speed(beta, params, kernel, window) - frame_speed)
    if resid > residual_tol:
        raise NumericFailureError("decay-rate solve left a large residual", residual=resid)
    return beta


def optimal_decay_rate(linear_rate: float, gamma: float, params: Params,
                       kernel: Kernel) -> float:
    """Minimizer of the infinite-window amplitude speed bound.

    At the minimizer the bound's derivative vanishes, which happens
    exactly where the tilt speed crosses the bound itself; that crossing
    is found by a bracketing solve (the tilt speed is increasing).
    """
    if not linear_rate - gamma + params.d1 > 0.0:
        raise ValueError("no interior minimizer: linear_rate - gamma + d1 must be positive")
    g = lambda beta: (tilt_speed(beta, params, kernel, None)
                      - amplitude_speed_bound(beta, linear_rate, gamma, params, kernel, None))
    lo = 1e-6 / kernel.support_radius
    if g(lo) >= 0.0:
        raise NumericFailureError("tilt speed already above the amplitude bound at tiny decay")
    ceiling = _DECAY_CEILING_OVER_R / kernel.support_radius
    hi = 1.0 / kernel.support_radius
    while g(hi) <= 0.0:
        hi *= 2.0
        if hi > ceiling:
            raise NoRootError("amplitude bound has no crossing below the rate ceiling")
    return float(brentq(g, lo, hi, xtol=1e-13, rtol=8.9e-16, maxiter=200))


def max_frame_speed(params: Params, predator_level: float, prey_level: float,
                    kernel: Kernel) -> float:
    """Value of the amplitude speed bound at its optimal decay rate, using
    the largest admissible linear rate: the ceiling on usable frame speeds."""
    m_cap = max_linear_rate(params, predator_level, prey_level)
    gamma = params.r1 * params.a * predator_level
    beta = optimal_decay_rate(m_cap, gamma, params, kernel)
    return amplitude_speed_bound(beta, m_cap, gamma, params, kernel, None)


@dataclass(frozen=True)
class SubsolutionReport:
    """Outcome of the numerical sub-solution verification."""

    ok: bool
    failures: tuple[str, ...]
    amplitude_margin: float      # amplitude speed bound minus frame speed
    tilt_residual: float         # |tilt speed - frame speed|
    min_linear: float            # pointwise minimum of L[wave]
    min_reaction: float          # pointwise minimum of Q[wave]
    argmin_linear: tuple[float, float]    # (x - c*t, t) of the linear minimum
    argmin_reaction: tuple[float, float]
    wave_max: float              # largest wave value over the sample grid
    within_prey_level: bool      # wave_max <= prey_level
    worst_margin: float


def _window_convolution(kernel: Kernel, p: SubsolutionParams, z: np.ndarray) -> np.ndarray:
    """(J * wave)(z) / (amplitude * exp(gamma*t)) for window coordinates z."""
    R = p.window
    rj = kernel.support_radius
    beta = p.decay

    def g(y):
        return math.exp(-beta * y) * math.cos(0.5 * math.pi * y / R)

    out = np.empty_like(z)
    for i, zi in enumerate(z):
        lo = max(-R, zi - rj)
        hi = min(R, zi + rj)
        if lo >= hi:
            out[i] = 0.0
            continue
        val, err = quad(lambda y: kernel.evaluate(zi - y) * g(y), lo, hi,
                        epsabs=1e-13, epsrel=1e-10, limit=200)
        if err > max(1e-8 * abs(val), 1e-11):
            raise NumericFailureError("window convolution quadrature failed", residual=err)
        out[i] = val
    return out


def verify_subsolution(p: SubsolutionParams, params: Params, kernel: Kernel,
                       n_space: int = 512, n_time: int = 64,
                       t_check: float = 10.0) -> SubsolutionReport:
    """Check the two scalar speed conditions and pointwise positivity.

    Positivity of L[wave] and Q[wave] is sampled on a window-frame grid
    shrunk by one sample spacing (the wave is merely continuous at the
    window edge) crossed with times in [0, t_check].
    """
    validate_params(p, params, kernel)
    gamma = p.growth_rate(params)
    bound = amplitude_speed_bound(p.decay, p.linear_rate, gamma, params, kernel, p.window)
    amplitude_margin = bound - p.frame_speed
    tilt_residual = abs(tilt_speed(p.decay, params, kernel, p.window) - p.frame_speed)

    R, beta, c, m = p.window, p.decay, p.frame_speed, p.linear_rate
    dz = 2.0 * R / (n_space + 1)
    z = np.linspace(-R + dz, R - dz, n_space)
    tgrid = np.linspace(0.0, t_check, n_time)
    g = np.exp(-beta * z) * np.cos(0.5 * np.pi * z / R)
    gp = np.exp(-beta * z) * (-beta * np.cos(0.5 * np.pi * z / R)
                              - (0.5 * np.pi / R) * np.sin(0.5 * np.pi * z / R))
    conv = _window_convolution(kernel, p, z)

    # L[wave](z, t) = amplitude*exp(gamma*t) * linear_part(z): one sweep in z.
    linear_part = params.d1 * conv + (m - gamma) * g + c * gp
    growth = p.amplitude * np.exp(gamma * tgrid)          # (n_time,)
    lin = growth[:, None] * linear_part[None, :]
    # Q[wave] adds the damped reaction, quadratic in the wave value.
    reaction_lin = (params.d1 * conv - params.d1 * g
                    + params.r1 * (1.0 - params.a * p.predator_level) * g
                    - gamma * g + c * gp)
    wave = growth[:, None] * g[None, :]
    qvals = growth[:, None] * reaction_lin[None, :] - params.r1 * wave ** 2

    i_lin = np.unravel_index(np.argmin(lin), lin.shape)
    i_q = np.unravel_index(np.argmin(qvals), qvals.shape)
    min_linear = float(lin[i_lin])
    min_reaction = float(qvals[i_q])
    wave_max = float(wave.max())

    failures = []
    if not amplitude_margin > 0.0:
        failures.append("amplitude_condition")
    if tilt_residual > 1e-8:
        failures.append("tilt_condition")
    if not min_linear > 0.0:
        failures.append("linear_positivity")
    if not min_reaction > 0.0:
        failures.append("reaction_positivity")
    worst = min(amplitude_margin, 1e-8 - tilt_residual, min_linear, min_reaction)
    return SubsolutionReport(
        ok=not failures,
        failures=tuple(failures),
        amplitude_margin=float(amplitude_margin),
        tilt_residual=float(tilt_residual),
        min_linear=min_linear,
        min_reaction=min_reaction,
        argmin_linear=(float(z[i_lin[1]]), float(tgrid[i_lin[0]])),
        argmin_reaction=(float(z[i_q[1]]), float(tgrid[i_q[0]])),
        wave_max=wave_max,
        within_prey_level=wave_max <= p.prey_level,
        worst_margin=float(worst),
    )


def wave_peak_factor(decay: float, window: float) -> float:
    """Peak of exp(-decay*z) * cos(pi*z/(2*window)) over the window.

    The wave is 1 at the window center but grows toward the upwind edge;
    amplitude choices must budget for this factor.
    """
    theta = -math.atan(2.0 * window * decay / math.pi)
    z_star = (2.0 * window / math.pi) * theta
    return math.exp(-decay * z_star) * math.cos(theta)


def construct_subsolution(params: Params, frame_speed: float,
                          predator_level: float = 0.05, prey_level: float = 0.05,
                          rate_offset: float = 0.01, amplitude: float | None = None,
                          kernel: Kernel | None = None,
                          window: float | None = None,
                          t_check: float = 10.0) -> SubsolutionParams:
    """Build wave parameters for a frame speed: pick the window, solve the
    decay rate from the tilt condition, and set the linear rate just below
    its admissible maximum.

    When ``window`` is omitted it starts at ten kernel radii and doubles
    (at most six times) until the decay solve succeeds and the amplitude
    bound clears the frame speed.  When ``amplitude`` is omitted it is
    scaled so the wave stays at half the prey level over [0, t_check]
    (the upwind edge of the window carries the wave's maximum, and the
    damped-reaction argument needs the wave below the prey level).
    """
    if kernel is None:
        raise ValueError("kernel is required")
    m = max_linear_rate(params, predator_level, prey_level) - rate_offset
    gamma = params.r1 * params.a * predator_level

    def attempt(R: float) -> SubsolutionParams | None:
        try:
            beta = match_decay_rate(frame_speed, R, params, kernel)
        except NoRootError:
            return None
        if beta <= 0.0:
            return None
        bound = amplitude_speed_bound(beta, m, gamma, params, kernel, R)
        if not bound > frame_speed:
            return None
        if amplitude is None:
            eta = (0.5 * prey_level * math.exp(-gamma * t_check)
                   / wave_peak_factor(beta, R))
        else:
            eta = float(amplitude)
        return SubsolutionParams(window=R, decay=beta, amplitude=eta,
                                 predator_level=predator_level, prey_level=prey_level,
                                 linear_rate=m, frame_speed=frame_speed)

    if window is not None:
        p = attempt(float(window))
        if p is None:
            raise NoRootError(
                f"window {window:g} cannot carry a sub-solution at frame speed {frame_speed:g}")
        return p
    R = 10.0 * kernel.support_radius
    for _ in range(7):
        p = attempt(R)
        if p is not None:
            return p
        R *= 2.0
    raise NoRootError(
        f"no window up to {R:g} carries a sub-solution at frame speed {frame_speed:g}")
