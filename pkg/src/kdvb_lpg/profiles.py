"""Time profiles for the dispersion and dissipation coefficients."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["CoefficientProfile", "case_profiles"]

_KINDS = ("constant", "case1_alpha", "case1_beta", "case2_alpha", "case2_beta", "tabulated")


@dataclass(frozen=True)
class CoefficientProfile:
    """Evaluatable coefficient of time.

    constant      -- value for all t
    case1_alpha   -- 5 cos(pi t / 4), t in [0, 1]
    case1_beta    -- 1 / cos(pi t / 4), t in [0, 1]
    case2_alpha   -- (t + 1)^2, t in [0, 1]
    case2_beta    -- 0.5 / (t + 1), t in [0, 1]
    tabulated     -- linear interpolation of (times, values) samples
    """

    kind: str
    value: float = 0.0
    times: tuple = field(default=())
    values: tuple = field(default=())

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")
        if self.kind == "tabulated":
            if len(self.times) < 2 or len(self.times) != len(self.values):
                raise ValueError("tabulated profile needs matching times/values, >= 2 samples")
            if np.any(np.diff(self.times) <= 0):
                raise ValueError("tabulated times must be strictly increasing")

    @classmethod
    def constant(cls, value: float) -> "CoefficientProfile":
        return cls(kind="constant", value=float(value))

    @classmethod
    def tabulated(cls, times, values) -> "CoefficientProfile":
        return cls(kind="tabulated", times=tuple(map(float, times)), values=tuple(map(float, values)))

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    @property
    def domain(self) -> tuple[float, float] | None:
        if self.kind == "constant":
            return None
        if self.kind == "tabulated":
            return (self.times[0], self.times[-1])
        return (0.0, 1.0)

    def evaluate(self, t):
        t = np.asarray(t, dtype=float)
        dom = self.domain
        if dom is not None and (np.any(t < dom[0] - 1e-12) or np.any(t > dom[1] + 1e-12)):
            raise ValueError(f"time {t} outside profile domain {dom}")
        if self.kind == "constant":
            out = np.full_like(t, self.value)
        elif self.kind == "case1_alpha":
            out = 5.0 * np.cos(np.pi * t / 4.0)
        elif self.kind == "case1_beta":
            out = 1.0 / np.cos(np.pi * t / 4.0)
        elif self.kind == "case2_alpha":
            out = (t + 1.0) ** 2
        elif self.kind == "case2_beta":
            out = 0.5 / (t + 1.0)
        else:
            out = np.interp(t, self.times, self.values)
        return float(out) if out.ndim == 0 else out

    __call__ = evaluate


def case_profiles(case: int) -> tuple[CoefficientProfile, CoefficientProfile]:
    """The paired time-varying (alpha, beta) profiles for the two case studies."""
    if case == 1:
        return CoefficientProfile(kind="case1_alpha"), CoefficientProfile(kind="case1_beta")
    if case == 2:
        return CoefficientProfile(kind="case2_alpha"), CoefficientProfile(kind="case2_beta")
    raise ValueError("case must be 1 or 2")
