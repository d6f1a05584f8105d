"""Standing-hypothesis checker for the persistence theorems.

Evaluates, with explicit margins:

- (H1):  b > 1;
- the prey diffusion inequality  d1 > r1*abar + r1*a/2 + r2*b*(b-1)/2;
- the predator diffusion inequality  d2 > r2*(b-1) + r2*b*(b-1)/2 + a*r1/2;
- the shift condition  s < min of the two species speeds;
- the habitat assumptions (via :mod:`frontlab.habitat` validation).

The margins of the two diffusion inequalities are exactly the decay
constants k1, k2 of the compactness estimate, and k = min(k1, k2), so
k > 0 iff both inequalities hold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dynamics import Params
from .habitat import HabitatValidation, validate as validate_habitat
from .kernels import Kernel
from .speeds import SystemSpeeds, system_speeds

# Accuracy of the minimized speeds, propagated into the shift margin.
SPEED_TOL = 1e-4


@dataclass(frozen=True)
class HypothesisReport:
    h1_ok: bool
    d1_ok: bool
    d2_ok: bool
    s_ok: bool
    alpha_ok: bool
    k1: float
    k2: float
    k: float
    margins: dict
    speeds: SystemSpeeds | None
    habitat: HabitatValidation

    @property
    def all_ok(self) -> bool:
        return self.h1_ok and self.d1_ok and self.d2_ok and self.s_ok and self.alpha_ok

    def rows(self) -> list[tuple[str, float, bool]]:
        """(clause, margin, ok) rows in a fixed order for reporting."""
        return [
            ("h1_b_gt_1", self.margins["h1"], self.h1_ok),
            ("d1_inequality", self.k1, self.d1_ok),
            ("d2_inequality", self.k2, self.d2_ok),
            ("shift_below_speeds", self.margins["s"], self.s_ok),
            ("habitat_assumptions", self.margins["alpha"], self.alpha_ok),
            ("k_min_constant", self.k, self.k > 0.0),
        ]


def check_hypotheses(params: Params, profile, kernel1: Kernel, kernel2: Kernel,
                     habitat_validation: HabitatValidation | None = None) -> HypothesisReport:
    """Report-style check; never raises on a failed hypothesis."""
    hv = habitat_validation if habitat_validation is not None else validate_habitat(profile)
    abar = hv.alpha_bar
    p = params
    k1 = p.d1 - p.r1 * abar - p.r1 * p.a / 2.0 - p.r2 * p.b * (p.b - 1.0) / 2.0
    k2 = (p.d2 + p.r2 - p.r2 * p.b - p.r2 * p.b * (p.b - 1.0) / 2.0
          - p.a * p.r1 / 2.0)
    k = min(k1, k2)
    h1_margin = p.b - 1.0

    if p.b > 1.0:
        sp = system_speeds(params, kernel1, kernel2)
        s_margin = sp.s_underline - p.s - SPEED_TOL
    else:
        sp = None
        s_margin = float("nan")
    alpha_margin = min(hv.slacks.values())

    margins = {"h1": h1_margin, "d1": k1, "d2": k2, "s": s_margin, "alpha": alpha_margin}
    return HypothesisReport(
        h1_ok=h1_margin > 0.0,
        d1_ok=k1 > 0.0,
        d2_ok=k2 > 0.0,
        s_ok=bool(s_margin > 0.0),
        alpha_ok=hv.ok,
        k1=k1,
        k2=k2,
        k=k,
        margins=margins,
        speeds=sp,
        habitat=hv,
    )
