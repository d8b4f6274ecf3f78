"""Analytic error exponents for testing white noise against a known pure state.

The null hypothesis is the completely mixed state on d_A x d_B and the
alternative a pure state with Schmidt spectrum ``lambda``.  Exponents are
reported per measurement class: global POVMs, one-way LOCC, and separable
POVMs (general two-way LOCC has no closed forms; see :mod:`three_step`).

Key closed forms (nats, D = d_A * d_B, E = entropy of entanglement,
LR = log robustness, R = Schmidt rank):

  * Stein: alpha-exponent = ln D - E for every restricted class, ln D
    globally; the beta-exponent is +inf for all classes (the type-2 error
    hits exactly zero at finite blocklength).
  * Chernoff: ln D globally, ln D - LR for separable POVMs.  For one-way
    LOCC the test reduces to a classical pair (uniform vs. the dephased
    state), whose Chernoff exponent we compute exactly; the closed form
    ln D - ln R is only valid when that minimization sits at s = 0, so a
    validity flag accompanies it.
  * Hoeffding: closed forms where known, lower/upper bounds for separable
    POVMs in the parameter window where only bounds are known.

All functions are pure and deterministic.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .classical import ExtendedExponent, LabeledDistPair, chernoff_exponent
from .schmidt import SchmidtSpectrum, measures
from .search import grid_golden_max

__all__ = [
    "PovmClass",
    "ExponentInterval",
    "SteinExponents",
    "ExponentReport",
    "BThresholds",
    "one_way_classical_pair",
    "stein_exponents",
    "chernoff_exponent_class",
    "hoeffding_a",
    "hoeffding_b",
    "one_way_b_thresholds",
    "helstrom_two_pure",
]


class PovmClass(enum.Enum):
    """Measurement class restricting the binary test."""

    GLOBAL = "global"
    ONE_WAY_LOCC = "one_way_locc"
    SEPARABLE = "separable"


@dataclass(frozen=True)
class ExponentInterval:
    """A lower/upper bracket on an exponent; exact results have lower == upper."""

    lower: ExtendedExponent
    upper: ExtendedExponent

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise ValueError(f"empty interval [{self.lower}, {self.upper}]")

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    @property
    def value(self) -> ExtendedExponent:
        if not self.exact:
            raise ValueError(f"interval [{self.lower}, {self.upper}] is not a point")
        return self.lower


@dataclass(frozen=True)
class SteinExponents:
    alpha: ExtendedExponent
    beta: ExtendedExponent
    strong_converse: ExtendedExponent


@dataclass(frozen=True)
class ExponentReport:
    """Stein and Chernoff exponents of one measurement class."""

    stein_alpha: ExtendedExponent
    stein_beta: ExtendedExponent
    chernoff: ExtendedExponent
    chernoff_paper_closed_form: ExtendedExponent
    closed_form_valid: bool


@dataclass(frozen=True)
class BThresholds:
    """One-way type-2 Hoeffding thresholds: the support-counting value actually
    used, and the (larger-than-achievable) printed variant kept for reference.
    """

    corrected: float
    printed: float


def one_way_classical_pair(s: SchmidtSpectrum) -> LabeledDistPair:
    """Classical reduction of the one-way LOCC problem.

    The optimal one-way test may dephase in the Schmidt basis, leaving the
    uniform distribution on d_A * d_B outcomes against the diagonal of the
    dephased pure state: mass lambda_i on the matched pair (i, i), zero
    elsewhere.
    """
    labels = []
    null = []
    alt = []
    inv_d = 1.0 / s.dim
    for i in range(s.d_A):
        for j in range(s.d_B):
            labels.append((i, j))
            null.append(inv_d)
            alt.append(s.lambdas[i] if (i == j and i < s.rank) else 0.0)
    return LabeledDistPair(tuple(labels), tuple(null), tuple(alt))


def stein_exponents(
    s: SchmidtSpectrum, c: PovmClass
) -> SteinExponents:
    """Stein exponents (alpha, beta, strong converse) for one class.

    For the restricted classes the alpha-exponent and its strong-converse
    bound coincide at ln d_A + ln d_B - E; the beta-exponent is +inf for every
    class because the type-2 error reaches exactly zero at finite n.
    """
    log_dim = s.log_dim
    if c is PovmClass.GLOBAL:
        return SteinExponents(alpha=log_dim, beta=math.inf, strong_converse=log_dim)
    value = log_dim - measures(s).entropy_of_entanglement
    return SteinExponents(alpha=value, beta=math.inf, strong_converse=value)


def chernoff_exponent_class(s: SchmidtSpectrum, c: PovmClass) -> ExponentReport:
    """Chernoff exponent of one class, with the one-way closed form flagged.

    The one-way value is always computed from the classical reduction, which
    is exact; ln D - ln R is reported alongside and is valid precisely when
    the overlap minimizer sits at s = 0, i.e. ln D >= mean of -ln lambda_i.
    """
    st = stein_exponents(s, c)
    rep = measures(s)
    log_dim = s.log_dim
    if c is PovmClass.GLOBAL:
        chern = closed = log_dim
        valid = True
    elif c is PovmClass.SEPARABLE:
        chern = closed = log_dim - rep.log_robustness
        valid = True
    else:
        chern = chernoff_exponent(one_way_classical_pair(s))
        closed = log_dim - math.log(s.rank)
        mean_neg_log = -math.fsum(math.log(x) for x in s.lambdas) / s.rank
        valid = log_dim >= mean_neg_log - 1e-12
    return ExponentReport(
        stein_alpha=st.alpha,
        stein_beta=st.beta,
        chernoff=chern,
        chernoff_paper_closed_form=closed,
        closed_form_valid=valid,
    )


def _sup_shifted_hoeffding(log_weights: np.ndarray, rate: float, flip: bool) -> float:
    """sup over s in [0, 1) of (-rate*s - ln sum_i exp(w_i * e)) / (1 - s).

    With ``flip`` false the inner exponent is s * w_i, with ``flip`` true it is
    (1 - s) * w_i; covers both spectral Hoeffding forms.
    """

    def objective(sv: np.ndarray) -> np.ndarray:
        expo = 1.0 - sv if flip else sv
        inner = logsumexp(np.outer(expo, log_weights), axis=1)
        return (-rate * sv - inner) / (1.0 - sv)

    _, best = grid_golden_max(objective, 0.0, 1.0 - 1e-9)
    return best


def hoeffding_a(s: SchmidtSpectrum, c: PovmClass, r: float) -> ExponentInterval:
    """Type-1 Hoeffding exponent A(r): best type-1 decay given the type-2
    exponent is at least r > 0.

    Global: ln D.  One-way: ln D + sup_s (-r s - ln sum_i lambda_i^s)/(1-s),
    exact for all r.  Separable: exact equal to ln D - LR once
    r >= ln d_min - LR; below that only the bracket
    [ln D - LR, ln D - E] is known.
    """
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    log_dim = s.log_dim
    if c is PovmClass.GLOBAL:
        return ExponentInterval(log_dim, log_dim)
    rep = measures(s)
    if c is PovmClass.SEPARABLE:
        lower = log_dim - rep.log_robustness
        threshold = math.log(s.d_min) - rep.log_robustness
        if r >= threshold:
            return ExponentInterval(lower, lower)
        return ExponentInterval(lower, log_dim - rep.entropy_of_entanglement)
    log_lam = np.log(np.asarray(s.lambdas))
    value = log_dim + _sup_shifted_hoeffding(log_lam, r, flip=False)
    return ExponentInterval(value, value)


def one_way_b_thresholds(s: SchmidtSpectrum) -> BThresholds:
    """Boundary of the infinite branch of the one-way type-2 exponent B(r).

    Zero type-2 error is reachable exactly when the acceptance region covers
    the alternative's support, costing type-1 exponent ln D - ln R; that pins
    the corrected threshold.  The printed variant ln D + ln R exceeds the
    largest achievable type-1 exponent ln D and is kept only for reporting.
    """
    log_dim = s.log_dim
    log_rank = math.log(s.rank)
    return BThresholds(corrected=log_dim - log_rank, printed=log_dim + log_rank)


def hoeffding_b(s: SchmidtSpectrum, c: PovmClass, r: float) -> ExponentInterval:
    """Type-2 Hoeffding exponent B(r): best type-2 decay given the type-1
    exponent is at least r >= 0.

    All piecewise boundaries are closed on the +inf side.  For separable
    POVMs the middle window only carries the bound [0, ln d_min - LR].
    """
    if r < 0.0:
        raise ValueError(f"r must be nonnegative, got {r}")
    log_dim = s.log_dim
    if c is PovmClass.GLOBAL:
        if r <= log_dim:
            return ExponentInterval(math.inf, math.inf)
        return ExponentInterval(0.0, 0.0)
    rep = measures(s)
    if c is PovmClass.SEPARABLE:
        if r <= log_dim - rep.log_robustness:
            return ExponentInterval(math.inf, math.inf)
        if r >= log_dim - rep.entropy_of_entanglement:
            return ExponentInterval(0.0, 0.0)
        return ExponentInterval(0.0, math.log(s.d_min) - rep.log_robustness)
    if r <= one_way_b_thresholds(s).corrected:
        return ExponentInterval(math.inf, math.inf)
    log_lam = np.log(np.asarray(s.lambdas))
    value = max(0.0, _sup_shifted_hoeffding(log_lam, r - log_dim, flip=True))
    return ExponentInterval(value, value)


def helstrom_two_pure(overlap_sq: float, k0: float, k1: float) -> float:
    """Minimum mean discrimination error of two pure states with squared
    overlap ``overlap_sq`` under priors (k0, k1):
    1/2 - 1/2 * sqrt(1 - nu) with nu = 4 * overlap_sq * k0 * k1.
    """
    if not 0.0 <= overlap_sq <= 1.0:
        raise ValueError(f"overlap_sq must lie in [0, 1], got {overlap_sq}")
    if k0 < 0.0 or k1 < 0.0 or abs(k0 + k1 - 1.0) > 1e-9:
        raise ValueError(f"priors must be nonnegative and sum to 1, got {(k0, k1)}")
    nu = 4.0 * overlap_sq * k0 * k1
    if nu > 1.0 + 1e-12:
        raise ValueError(f"nu = {nu} exceeds 1; arguments are inconsistent")
    nu = min(nu, 1.0)
    return 0.5 - 0.5 * math.sqrt(1.0 - nu)
