"""Exact finite-blocklength optimal errors, used as ground truth for the
asymptotic formulas.

One-way LOCC optima come from the classical reduction (dephasing in the
Schmidt basis) followed by the exact Neyman-Pearson engine; global optima for
mixed-vs-pure come from the closed eigenstructure of the discrimination
operator.  Exponent estimates are plain -(1/n) ln(error) with no
extrapolation, so trend tests stay assumption-free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

from .classical import LabeledDistPair, NeymanPearsonResult, neyman_pearson_iid
from .exponents import one_way_classical_pair, one_way_b_thresholds
from .schmidt import SchmidtSpectrum

__all__ = [
    "TrendRow",
    "OracleTrend",
    "ArbitrationReport",
    "one_way_beta",
    "zero_error_threshold",
    "global_mean_error",
    "exponent_trend",
    "arbitrate_one_way_b",
]

_MAX_TREND_N = 500
_MAX_ALPHABET = 36


class TrendRow(NamedTuple):
    n: int
    error: float
    estimate: float  # -(1/n) ln(error); +inf when the error is exactly 0


@dataclass(frozen=True)
class OracleTrend:
    mode: str
    parameter: float
    rows: tuple[TrendRow, ...]

    def __post_init__(self) -> None:
        ns = [row.n for row in self.rows]
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ValueError("rows must have strictly increasing n")


def one_way_beta(s: SchmidtSpectrum, n: int, alpha: float) -> NeymanPearsonResult:
    """Exact optimal one-way LOCC type-2 error at blocklength n and level alpha."""
    return neyman_pearson_iid(one_way_classical_pair(s), n, alpha)


def zero_error_threshold(alpha: float, s: SchmidtSpectrum) -> int:
    """Smallest blocklength from which the one-way type-2 error is exactly 0.

    Equals ceil(-ln alpha / ln d_max); computed with an integer snap so exact
    boundary levels such as alpha = 1/d_max land on the right side.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if s.d_max < 2:
        raise ValueError("trivial Hilbert space: d_max must be at least 2")
    x = -math.log(alpha) / math.log(s.d_max)
    return max(1, math.ceil(x - 1e-9))


def global_mean_error(s: SchmidtSpectrum, n: int, pi0: float, pi1: float) -> float:
    """Exact optimal mean error under global POVMs at blocklength n.

    The operator pi0 * I/D^n - pi1 * (pure state projector) has eigenvalue
    pi0/D^n with multiplicity D^n - 1 and pi0/D^n - pi1 on the state, so the
    trace norm and hence the minimum-error value are closed-form; the value is
    exactly pi0 * D^(-n) whenever pi1 >= pi0 * D^(-n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if pi0 < 0.0 or pi1 < 0.0 or abs(pi0 + pi1 - 1.0) > 1e-9:
        raise ValueError(f"priors must be nonnegative and sum to 1, got {(pi0, pi1)}")
    dn = float(s.dim) ** (-n)
    small = pi0 * dn
    if pi1 >= small:
        return small
    trace_norm = pi0 * (1.0 - dn) + abs(small - pi1)
    return 0.5 * (1.0 - trace_norm)


def exponent_trend(
    s: SchmidtSpectrum,
    mode: Literal["stein_alpha", "hoeffding_beta"],
    n_max: int,
    *,
    beta_cap: float = 0.1,
    r: float | None = None,
) -> OracleTrend:
    """Exact one-way error exponents as a function of blocklength.

    stein_alpha: fixes the type-2 error at ``beta_cap`` and reports the exact
    optimal type-1 error with its (1/n) log estimate.  hoeffding_beta: fixes
    the type-1 level at e^(-r n) and reports the optimal type-2 error; an
    exactly zero error yields a +inf estimate.
    """
    if n_max < 1 or n_max > _MAX_TREND_N:
        raise ValueError(f"n_max must lie in [1, {_MAX_TREND_N}], got {n_max}")
    if s.dim > _MAX_ALPHABET:
        raise ValueError(f"alphabet {s.dim} exceeds {_MAX_ALPHABET} labels")
    pair = one_way_classical_pair(s)

    rows = []
    if mode == "stein_alpha":
        if not 0.0 < beta_cap < 1.0:
            raise ValueError(f"beta_cap must lie in (0, 1), got {beta_cap}")
        # min alpha s.t. beta <= cap is the Neyman-Pearson problem with the
        # hypotheses exchanged and level beta_cap.
        swapped = pair.swapped()
        parameter = beta_cap
        for n in range(1, n_max + 1):
            err = neyman_pearson_iid(swapped, n, beta_cap).beta_opt
            rows.append(TrendRow(n, err, _estimate(err, n)))
    elif mode == "hoeffding_beta":
        if r is None or r < 0.0:
            raise ValueError("hoeffding_beta mode needs r >= 0")
        parameter = r
        for n in range(1, n_max + 1):
            err = neyman_pearson_iid(pair, n, math.exp(-r * n)).beta_opt
            rows.append(TrendRow(n, err, _estimate(err, n)))
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return OracleTrend(mode=mode, parameter=parameter, rows=tuple(rows))


def _estimate(error: float, n: int) -> float:
    if error == 0.0:
        return math.inf
    return max(0.0, -math.log(min(error, 1.0)) / n)


@dataclass(frozen=True)
class ArbitrationReport:
    """Numerical arbitration of the one-way B(r) infinite-branch threshold.

    ``zero_error_below``: at rate r_below (below the corrected threshold) the
    exact type-2 error is 0 at every tested blocklength, so B = +inf there.
    ``final_estimate_above``: at r_above (above the corrected threshold but
    below the printed one) the type-2 error stays positive and its exponent
    estimate collapses, refuting the printed threshold.
    """

    corrected_threshold: float
    printed_threshold: float
    r_below: float
    r_above: float
    zero_error_below: bool
    final_estimate_above: float
    trend_above: OracleTrend
    printed_threshold_refuted: bool


def arbitrate_one_way_b(
    s: SchmidtSpectrum,
    n_max: int = 200,
    r_below: float | None = None,
    r_above: float | None = None,
) -> ArbitrationReport:
    """Pin the one-way B(r) threshold by exact finite-n testing at one rate on
    each side of the corrected value ln D - ln R."""
    thr = one_way_b_thresholds(s)
    if r_below is None:
        r_below = 0.72 * thr.corrected
    if r_above is None:
        r_above = thr.corrected + 0.3 * max(s.log_dim - thr.corrected, 1.0)
    below = exponent_trend(s, "hoeffding_beta", n_max, r=r_below)
    above = exponent_trend(s, "hoeffding_beta", n_max, r=r_above)
    zero_below = all(row.error == 0.0 for row in below.rows)
    final_above = above.rows[-1].estimate
    refuted = zero_below and math.isfinite(final_above) and r_above < thr.printed
    return ArbitrationReport(
        corrected_threshold=thr.corrected,
        printed_threshold=thr.printed,
        r_below=r_below,
        r_above=r_above,
        zero_error_below=zero_below,
        final_estimate_above=final_above,
        trend_above=above,
        printed_threshold_refuted=refuted,
    )
