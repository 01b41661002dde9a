"""Data models for the closed-form error bounds."""

from dataclasses import dataclass
from typing import Optional


class BoundNotApplicable(Exception):
    """Raised when a bound's denominators leave their valid region."""
    pass


@dataclass
class SpectralSummary:
    """Measured quantities the bounds are written in."""
    sigma1: float
    sigma_s: float
    sigma_s1: float
    sigma_s_AM: float
    sigma_s_Alg: float
    e_s: float
    beta: float
    gamma: float
    s: int
    m: int
    n: int

    def __post_init__(self):
        for name in ("sigma1", "sigma_s", "sigma_s1", "sigma_s_AM", "sigma_s_Alg", "e_s"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)):
                raise TypeError(f"Invalid {name} type: {type(value)}. Expected numeric")
            if value < 0:
                raise ValueError(f"{name} must be non-negative, got {value}")

        # allow for rounding in the SVD that produced the values
        slack = 1e-12 * max(self.sigma1, 1.0)
        if not (self.sigma1 + slack >= self.sigma_s and self.sigma_s + slack >= self.sigma_s1):
            raise ValueError(
                f"Singular values out of order: sigma1={self.sigma1}, "
                f"sigma_s={self.sigma_s}, sigma_s1={self.sigma_s1}"
            )
        if self.beta < 1:
            raise ValueError(f"beta must be >= 1, got {self.beta}")
        if self.gamma < 1:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")
        if not 1 <= self.s <= min(self.m, self.n):
            raise ValueError(f"s={self.s} must lie in [1, min(m, n)={min(self.m, self.n)}]")

    @property
    def k(self) -> float:
        """beta^2 gamma."""
        return self.beta ** 2 * self.gamma


@dataclass
class AssumptionReport:
    """Per-assumption verdicts for the non-singularity theorem.

    a3 is None when the caller had no selection diagnostics to check it.
    """
    a1: bool
    a2: bool
    a3: Optional[bool]
    a4: bool
    gamma_measured: float

    @property
    def all_hold(self) -> bool:
        return self.a1 and self.a2 and self.a4 and self.a3 is not False


@dataclass
class BoundEvaluation:
    """A bound's value; finite is False when a zero denominator forced +inf."""
    value: float
    finite: bool = True
    eigengap_factor: Optional[float] = None
