"""Schmidt spectra of bipartite pure states and the entanglement quantities
derived from them.

All logarithms are natural, so every quantity is in nats.  The objects here
are immutable and all functions are pure, so they are safe to share across
threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = [
    "SpectrumError",
    "NotNormalized",
    "RankExceedsDimension",
    "NegativeCoefficient",
    "SchmidtSpectrum",
    "MeasureReport",
    "validate_spectrum",
    "measures",
]

# Input sums may be off by hand-typed rounding; internal identities hold tighter.
_INPUT_SUM_TOL = 1e-9
_INTERNAL_SUM_TOL = 1e-12


class SpectrumError(ValueError):
    """Invalid Schmidt-spectrum input."""


class NotNormalized(SpectrumError):
    """Coefficients do not sum to 1 within tolerance."""


class RankExceedsDimension(SpectrumError):
    """More positive coefficients than min(d_A, d_B) allows."""


class NegativeCoefficient(SpectrumError):
    """A coefficient is negative."""


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Squared Schmidt coefficients of a bipartite pure state.

    ``lambdas`` holds only the strictly positive coefficients, sorted in
    nonincreasing order and summing to 1; the Schmidt rank is therefore
    structural (``len(lambdas)``), not tolerance-dependent.
    """

    lambdas: tuple[float, ...]
    d_A: int
    d_B: int

    @property
    def rank(self) -> int:
        return len(self.lambdas)

    @property
    def d_min(self) -> int:
        return min(self.d_A, self.d_B)

    @property
    def d_max(self) -> int:
        return max(self.d_A, self.d_B)

    @property
    def dim(self) -> int:
        """Total dimension d_A * d_B of the joint space."""
        return self.d_A * self.d_B

    @property
    def log_dim(self) -> float:
        return math.log(self.d_A) + math.log(self.d_B)

    def __post_init__(self) -> None:
        if self.d_A < 1 or self.d_B < 1:
            raise SpectrumError("local dimensions must be positive")
        if not self.lambdas:
            raise SpectrumError("spectrum must contain at least one coefficient")
        if any(x <= 0.0 for x in self.lambdas):
            raise NegativeCoefficient("stored coefficients must be strictly positive")
        if any(a < b for a, b in zip(self.lambdas, self.lambdas[1:])):
            raise SpectrumError("coefficients must be sorted nonincreasing")
        if len(self.lambdas) > self.d_min:
            raise RankExceedsDimension(
                f"rank {len(self.lambdas)} exceeds min(d_A, d_B) = {self.d_min}"
            )
        if abs(math.fsum(self.lambdas) - 1.0) > _INTERNAL_SUM_TOL:
            raise NotNormalized("coefficients must sum to 1 within 1e-12")


@dataclass(frozen=True)
class MeasureReport:
    """Entanglement quantities of a spectrum, in nats.

    ``overlap_sq_with_phi0`` is the squared overlap of the normalized Schmidt
    vector with the uniform superposition over d_min basis states,
    (sum_i sqrt(lambda_i))^2 / d_min.
    """

    entropy_of_entanglement: float
    schmidt_rank: int
    log_robustness: float
    overlap_sq_with_phi0: float


def validate_spectrum(raw: Sequence[float], d_A: int, d_B: int) -> SchmidtSpectrum:
    """Build a :class:`SchmidtSpectrum` from raw squared coefficients.

    Exact zeros are dropped, the remainder is sorted descending, and the
    vector is renormalized only when its sum is within 1e-9 of 1 (hand-typed
    decimals); otherwise :class:`NotNormalized` is raised.
    """
    arr = [float(x) for x in raw]
    if any(x < 0.0 for x in arr):
        raise NegativeCoefficient(f"negative coefficient in {arr}")
    positive = sorted((x for x in arr if x > 0.0), reverse=True)
    if not positive:
        raise SpectrumError("at least one coefficient must be positive")
    if len(positive) > min(d_A, d_B):
        raise RankExceedsDimension(
            f"{len(positive)} positive coefficients exceed min({d_A}, {d_B})"
        )
    total = math.fsum(positive)
    if abs(total - 1.0) > _INPUT_SUM_TOL:
        raise NotNormalized(f"coefficients sum to {total!r}, not 1")
    if total != 1.0:
        positive = [x / total for x in positive]
    return SchmidtSpectrum(lambdas=tuple(positive), d_A=int(d_A), d_B=int(d_B))


def measures(s: SchmidtSpectrum) -> MeasureReport:
    """Entropy of entanglement, Schmidt rank, log-robustness and phi_0 overlap.

    E = -sum(lambda ln lambda), LR = 2 ln sum(sqrt(lambda)), and the overlap
    identity ln d_A + ln d_B - LR = -2 ln <psi|phi_0> + ln d_max ties them to
    the uniform superposition phi_0.
    """
    entropy = float(-math.fsum(x * math.log(x) for x in s.lambdas))
    sqrt_sum = math.fsum(math.sqrt(x) for x in s.lambdas)
    log_robustness = 2.0 * math.log(sqrt_sum)
    overlap_sq = sqrt_sum * sqrt_sum / s.d_min
    return MeasureReport(
        entropy_of_entanglement=entropy,
        schmidt_rank=s.rank,
        log_robustness=log_robustness,
        overlap_sq_with_phi0=overlap_sq,
    )
