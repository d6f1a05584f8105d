"""Variational spreading speeds by one-dimensional minimization.

For a scalar invasion with dispersal kernel ``J``, diffusion ``d``,
growth rate ``r``, and carrying level ``k``, the linear spreading speed
is the infimum over decay rates ``lam > 0`` of

    (d * [M(lam) - 1] + r * k) / lam,

where ``M`` is the kernel's moment generating function.  The candidate
speed is smooth and unimodal on its bracket, so a derivative-free golden
section search is used after bracketing the minimum by doubling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import Params
from .errors import BracketFailureError, HypothesisViolationError
from .kernels import Kernel

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 0.618...

# Doubling past this ceiling signals a kernel/parameter pathology: the
# tilted mass grows like exp(lam * R), so real minimizers sit far below.
_LAMBDA_CEILING_OVER_R = 50.0
_LAMBDA_FLOOR = 1e-12


@dataclass(frozen=True)
class SpeedProblem:
    """Inputs of the scalar speed minimization."""

    d: float
    r: float
    k: float
    kernel: Kernel

    def __post_init__(self):
        if not self.d > 0.0:
            raise ValueError("diffusion coefficient d must be positive")
        if not self.r > 0.0:
            raise ValueError("growth rate r must be positive")
        if self.k < 0.0:
            raise ValueError("carrying level k must be nonnegative")


@dataclass(frozen=True)
class SpeedResult:
    """Minimized speed with the minimizing decay rate and search metadata."""

    speed: float
    rate: float | None
    bracket: tuple[float, float]
    iterations: int
    attained: bool


@dataclass(frozen=True)
class SystemSpeeds:
    """The two species speeds and their minimum."""

    s_star: float
    rate1: float
    s_lower_star: float
    rate2: float

    @property
    def s_underline(self) -> float:
        return min(self.s_star, self.s_lower_star)


def candidate_speed(problem: SpeedProblem, lam: float) -> float:
    """Speed of the exponential profile with decay rate ``lam``."""
    if not lam > 0.0:
        raise ValueError("decay rate lam must be positive")
    m = problem.kernel.mgf(lam)
    return (problem.d * (m - 1.0) + problem.r * problem.k) / lam


def _bracket_minimum(phi, lam0: float, ceiling: float) -> tuple[float, float, float]:
    """Return (a, mid, b) with phi(mid) <= phi(a), phi(b): a bracket of the minimum."""
    a = lam0
    fa = phi(a)
    b = 2.0 * a
    fb = phi(b)
    if fb < fa:
        # Walk right until the value turns back up.
        while True:
            c = 2.0 * b
            if c > ceiling:
                raise BracketFailureError(
                    f"candidate speed still decreasing at lam={b:g} "
                    f"(ceiling {ceiling:g}); check kernel and parameters")
            fc = phi(c)
            if fc >= fb:
                return a, b, c
            a, fa, b, fb = b, fb, c, fc
    # Walk left: with k > 0 the candidate speed blows up as lam -> 0+.
    while True:
        c = 0.5 * a
        if c < _LAMBDA_FLOOR:
            raise BracketFailureError("no interior minimum found above the rate floor")
        fc = phi(c)
        if fc >= fa:
            return c, a, b
        b, fb, a, fa = a, fa, c, fc


def min_speed(problem: SpeedProblem, lam0: float = 1e-3, tol: float = 1e-8) -> SpeedResult:
    """Minimize the candidate speed over decay rates.

    For ``k == 0`` the infimum is 0, approached as ``lam -> 0``, and is
    reported unattained.  Otherwise the minimum is bracketed by doubling
    from ``lam0`` and refined by golden section until the bracket is
    shorter than ``tol``.
    """
    if problem.k == 0.0:
        return SpeedResult(speed=0.0, rate=None, bracket=(0.0, 0.0),
                           iterations=0, attained=False)
    ceiling = _LAMBDA_CEILING_OVER_R / problem.kernel.support_radius
    phi = lambda lam: candidate_speed(problem, lam)
    lo, _, hi = _bracket_minimum(phi, lam0, ceiling)
    bracket = (lo, hi)
    iterations = 0
    m1 = hi - _INV_PHI * (hi - lo)
    m2 = lo + _INV_PHI * (hi - lo)
    f1 = phi(m1)
    f2 = phi(m2)
    while hi - lo > tol:
        iterations += 1
        if f1 < f2:
            hi, m2, f2 = m2, m1, f1
            m1 = hi - _INV_PHI * (hi - lo)
            f1 = phi(m1)
        else:
            lo, m1, f1 = m1, m2, f2
            m2 = lo + _INV_PHI * (hi - lo)
            f2 = phi(m2)
    rate = 0.5 * (lo + hi)
    return SpeedResult(speed=phi(rate), rate=rate, bracket=bracket,
                       iterations=iterations, attained=True)


def prey_speed(params: Params, kernel1: Kernel) -> SpeedResult:
    """Spreading speed of the prey in the favorable region, no predator."""
    return min_speed(SpeedProblem(d=params.d1, r=params.r1, k=1.0, kernel=kernel1))


def predator_speed(params: Params, kernel2: Kernel) -> SpeedResult:
    """Spreading speed of the predator over saturated prey; needs b > 1."""
    if not params.b > 1.0:
        raise HypothesisViolationError(
            f"(H1) requires conversion rate b > 1 (got b={params.b:g}): "
            "otherwise the prey cannot sustain the predator")
    return min_speed(SpeedProblem(d=params.d2, r=params.r2, k=params.b - 1.0,
                                  kernel=kernel2))


def system_speeds(params: Params, kernel1: Kernel, kernel2: Kernel) -> SystemSpeeds:
    """Both species speeds; raises on (H1) violation."""
    sp = prey_speed(params, kernel1)
    sq = predator_speed(params, kernel2)
    return SystemSpeeds(s_star=sp.speed, rate1=sp.rate if sp.rate is not None else float("nan"),
                        s_lower_star=sq.speed,
                        rate2=sq.rate if sq.rate is not None else float("nan"))
