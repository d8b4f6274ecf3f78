"""Exact classical binary hypothesis testing on finite alphabets.

The engine works on a pair of aligned distributions (null, alternative) and
provides Renyi overlaps, Chernoff/Hoeffding exponent optimizers, relative
entropy, and exact optimal randomized Neyman-Pearson tests on i.i.d. products.
Product tests aggregate outcomes into type classes (multisets of single-copy
outcomes), so blocklengths of a few hundred stay exact and fast.

Conventions, fixed once for the whole package:
  * 0 * ln(0 / q) = 0 and p * ln(p / 0) = +inf in divergences.
  * The overlap sum_x p(x)^(1-s) q(x)^s keeps only cells where both masses are
    positive; at s = 0 this equals the null mass of the alternative's support,
    at s = 1 the alternative mass of the null's support.
  * +inf is the explicit marker for an infinite exponent.

Everything here is pure and operates on immutable inputs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from scipy.special import gammaln, logsumexp

from .search import grid_golden_max

__all__ = [
    "ExtendedExponent",
    "LabeledDistPair",
    "NeymanPearsonResult",
    "renyi_overlap",
    "chernoff_exponent",
    "hoeffding_exponent",
    "relative_entropy",
    "neyman_pearson_iid",
]

# Nonnegative real in nats per copy, with math.inf as the infinite marker.
ExtendedExponent = float

_SUM_TOL = 1e-12
# Slack allowed when a cumulative acceptance mass meets the level exactly;
# keeps boundary cases (level == achievable mass) deterministic in floats.
_NP_LEVEL_SLACK = 1e-12


@dataclass(frozen=True)
class LabeledDistPair:
    """A pair of aligned distributions over the same labeled outcomes."""

    labels: tuple
    p_null: tuple[float, ...]
    p_alt: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (len(self.labels) == len(self.p_null) == len(self.p_alt)):
            raise ValueError("labels and both distributions must align")
        for name, vec in (("p_null", self.p_null), ("p_alt", self.p_alt)):
            if any(x < 0.0 for x in vec):
                raise ValueError(f"{name} has a negative entry")
            total = math.fsum(vec)
            if abs(total - 1.0) > _SUM_TOL:
                raise ValueError(f"{name} sums to {total!r}, not 1 within 1e-12")

    @property
    def null(self) -> np.ndarray:
        return np.asarray(self.p_null, dtype=float)

    @property
    def alt(self) -> np.ndarray:
        return np.asarray(self.p_alt, dtype=float)

    def swapped(self) -> "LabeledDistPair":
        """The same outcomes with null and alternative exchanged."""
        return LabeledDistPair(self.labels, self.p_alt, self.p_null)


def dist_pair(labels: Sequence, null: Sequence[float], alt: Sequence[float]) -> LabeledDistPair:
    """Convenience builder that accepts any sequences."""
    return LabeledDistPair(tuple(labels), tuple(float(x) for x in null), tuple(float(x) for x in alt))


@dataclass(frozen=True)
class NeymanPearsonResult:
    """Optimal randomized likelihood-ratio test summary.

    ``lr_threshold`` is the likelihood ratio alt/null of the marginal class and
    ``randomization`` the acceptance probability on it; outcomes with a strictly
    larger ratio are accepted outright.
    """

    alpha_achieved: float
    beta_opt: float
    lr_threshold: float
    randomization: float


def _log_overlap_curve(pair: LabeledDistPair, s: np.ndarray) -> np.ndarray:
    """ln sum_x p^(1-s) q^s over the common support, -inf when it is empty."""
    p = pair.null
    q = pair.alt
    common = (p > 0.0) & (q > 0.0)
    if not np.any(common):
        return np.full(np.shape(s), -math.inf)
    lp = np.log(p[common])
    lq = np.log(q[common])
    s = np.atleast_1d(np.asarray(s, dtype=float))
    expo = np.outer(1.0 - s, lp) + np.outer(s, lq)
    return logsumexp(expo, axis=1)


def renyi_overlap(pair: LabeledDistPair, s: float) -> float:
    """sum_x p_null(x)^(1-s) p_alt(x)^s for s in [0, 1].

    Cells where either mass vanishes contribute nothing, so the endpoints are
    the null mass of the alternative's support (s=0) and vice versa (s=1).
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    return float(np.exp(_log_overlap_curve(pair, np.asarray([s]))[0]))


def chernoff_exponent(pair: LabeledDistPair) -> ExtendedExponent:
    """-ln min_{s in [0,1]} of the Renyi overlap; +inf for disjoint supports."""
    curve = _log_overlap_curve(pair, np.asarray([0.5]))
    if curve[0] == -math.inf:
        return math.inf

    def neg_log_overlap(s: np.ndarray) -> np.ndarray:
        return -_log_overlap_curve(pair, s)

    _, best = grid_golden_max(neg_log_overlap, 0.0, 1.0)
    return max(best, 0.0)


def hoeffding_exponent(pair: LabeledDistPair, r: float) -> ExtendedExponent:
    """sup_{0<=s<1} (-r s - ln overlap(s)) / (1 - s) for r > 0.

    Diverges to +inf exactly when the alternative keeps mass q0 < e^{-r}
    on the null's support (the s -> 1 end then runs away); at the boundary
    r = -ln q0 the s -> 1 limit is finite and included in closed form.
    """
    if r <= 0.0:
        raise ValueError(f"r must be positive, got {r}")
    p = pair.null
    q = pair.alt
    common = (p > 0.0) & (q > 0.0)
    q_common = float(math.fsum(q[common]))
    if q_common == 0.0:
        return math.inf

    candidates = []
    if q_common < 1.0:
        edge = -math.log(q_common)
        if r < edge - 1e-12:
            return math.inf
        if abs(r - edge) <= 1e-12:
            # L'Hopital limit of the 0/0 form at s -> 1.
            tilt = math.fsum(
                qi * math.log(qi / pi) for qi, pi in zip(q[common], p[common])
            )
            candidates.append(r + tilt / q_common)

    def objective(s: np.ndarray) -> np.ndarray:
        return (-r * s - _log_overlap_curve(pair, s)) / (1.0 - s)

    _, best = grid_golden_max(objective, 0.0, 1.0 - 1e-9)
    candidates.append(best)
    return max(candidates)


def relative_entropy(
    pair: LabeledDistPair, direction: Literal["null_to_alt", "alt_to_null"]
) -> ExtendedExponent:
    """Kullback-Leibler divergence in the requested direction, +inf when the
    numerator distribution has mass outside the denominator's support."""
    if direction == "null_to_alt":
        a, b = pair.null, pair.alt
    elif direction == "alt_to_null":
        a, b = pair.alt, pair.null
    else:
        raise ValueError(f"unknown direction {direction!r}")
    sup = a > 0.0
    if np.any(sup & (b == 0.0)):
        return math.inf
    return max(0.0, math.fsum(ai * math.log(ai / bi) for ai, bi in zip(a[sup], b[sup])))


# ---------------------------------------------------------------------------
# Exact Neyman-Pearson on i.i.d. products via type classes
# ---------------------------------------------------------------------------


def _merge_by_likelihood_ratio(pair: LabeledDistPair) -> tuple[np.ndarray, np.ndarray]:
    """Collapse single-copy outcomes sharing a likelihood ratio.

    The optimal error curve beta_n(alpha) depends on the pair only through the
    per-copy law of the likelihood ratio under each hypothesis, so summing the
    masses of equal-ratio outcomes is exact and shrinks the alphabet.
    """
    p = pair.null
    q = pair.alt
    keep = (p > 0.0) | (q > 0.0)
    p, q = p[keep], q[keep]

    merged_p: list[float] = []
    merged_q: list[float] = []
    zero = q == 0.0
    free = p == 0.0
    if np.any(zero):
        merged_p.append(float(np.sum(p[zero])))
        merged_q.append(0.0)
    if np.any(free):
        merged_p.append(0.0)
        merged_q.append(float(np.sum(q[free])))
    common = ~zero & ~free
    if np.any(common):
        llr = np.log(q[common]) - np.log(p[common])
        order = np.argsort(llr, kind="stable")
        pc, qc, lc = p[common][order], q[common][order], llr[order]
        start = 0
        for i in range(1, len(lc) + 1):
            if i == len(lc) or abs(lc[i] - lc[start]) > 1e-12 * max(1.0, abs(lc[start])):
                merged_p.append(float(np.sum(pc[start:i])))
                merged_q.append(float(np.sum(qc[start:i])))
                start = i
    return np.asarray(merged_p), np.asarray(merged_q)


def _compositions(n: int, m: int) -> np.ndarray:
    """All length-m nonnegative integer vectors summing to n, shape (T, m)."""
    if m == 1:
        return np.asarray([[n]], dtype=np.int64)
    bars = np.fromiter(
        itertools.chain.from_iterable(itertools.combinations(range(n + m - 1), m - 1)),
        dtype=np.int64,
    ).reshape(-1, m - 1)
    left = np.full((bars.shape[0], 1), -1, dtype=np.int64)
    right = np.full((bars.shape[0], 1), n + m - 1, dtype=np.int64)
    return np.diff(np.hstack([left, bars, right]), axis=1) - 1


def _type_log_masses(n: int, cell_mass: np.ndarray, counts: np.ndarray) -> np.ndarray:
    """log of multinomial type-class mass for each count vector, -inf allowed."""
    log_cell = np.where(cell_mass > 0.0, np.log(np.where(cell_mass > 0.0, cell_mass, 1.0)), -math.inf)
    log_mult = gammaln(n + 1) - np.sum(gammaln(counts + 1), axis=1)
    with np.errstate(invalid="ignore"):
        contrib = np.where(counts > 0, counts * log_cell[None, :], 0.0)
    return log_mult + np.sum(contrib, axis=1)


def neyman_pearson_iid(pair: LabeledDistPair, n: int, alpha: float) -> NeymanPearsonResult:
    """Exact optimal randomized test on the n-fold product at level ``alpha``.

    Type classes of the likelihood-ratio-merged alphabet are sorted by ratio
    and accepted greedily; the marginal class is randomized to hit the level
    exactly.  Classes carrying no alternative mass are never accepted, so
    ``beta_opt`` is exactly 0.0 whenever the alternative's support fits within
    the level.  Complexity is polynomial in n for a fixed alphabet.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")

    p, q = _merge_by_likelihood_ratio(pair)
    counts = _compositions(n, len(p))
    logp = _type_log_masses(n, p, counts)
    logq = _type_log_masses(n, q, counts)

    alive = ~((logp == -math.inf) & (logq == -math.inf))
    logp, logq = logp[alive], logq[alive]
    llr = np.where(
        logp == -math.inf, math.inf, np.where(logq == -math.inf, -math.inf, logq - logp)
    )

    order = np.argsort(-llr, kind="stable")
    logp, logq, llr = logp[order], logq[order], llr[order]

    # Group equal-ratio classes; splitting a near-tie is harmless for beta.
    groups: list[tuple[float, float, float]] = []  # (llr, logp, logq)
    start = 0
    for i in range(1, len(llr) + 1):
        boundary = i == len(llr)
        if not boundary:
            a, b = llr[start], llr[i]
            same = (a == b) or (
                math.isfinite(a) and math.isfinite(b) and abs(a - b) <= 1e-12 * max(1.0, abs(a))
            )
            boundary = not same
        if boundary:
            groups.append(
                (
                    float(llr[start]),
                    float(logsumexp(logp[start:i])),
                    float(logsumexp(logq[start:i])),
                )
            )
            start = i

    log_alpha = math.log(alpha) if alpha > 0.0 else -math.inf
    cum_logp = -math.inf
    accepted_p: list[float] = []
    rejected_q: list[float] = []
    lr_threshold = 0.0
    randomization = 1.0
    partial_done = False

    def _ratio(llr_value: float) -> float:
        return math.exp(llr_value) if llr_value < 700.0 else math.inf

    for ratio, lp_g, lq_g in groups:
        if lq_g == -math.inf or partial_done:
            # No alternative mass left to win; accepting more only costs alpha.
            if lq_g != -math.inf:
                rejected_q.append(math.exp(lq_g))
            continue
        new_cum = np.logaddexp(cum_logp, lp_g)
        if new_cum <= log_alpha + _NP_LEVEL_SLACK:
            cum_logp = new_cum
            accepted_p.append(math.exp(lp_g))
            lr_threshold = _ratio(ratio)
            randomization = 1.0
            continue
        # Marginal class: spend exactly the remaining level.
        if cum_logp == -math.inf:
            log_rem = log_alpha
        elif cum_logp >= log_alpha:
            log_rem = -math.inf
        else:
            log_rem = log_alpha + math.log1p(-math.exp(cum_logp - log_alpha))
        gamma = 0.0 if log_rem == -math.inf else min(1.0, math.exp(log_rem - lp_g))
        accepted_p.append(gamma * math.exp(lp_g))
        rejected_q.append((1.0 - gamma) * math.exp(lq_g))
        lr_threshold = _ratio(ratio)
        randomization = gamma
        partial_done = True

    beta = math.fsum(rejected_q)
    alpha_achieved = min(1.0, math.fsum(accepted_p))
    return NeymanPearsonResult(
        alpha_achieved=alpha_achieved,
        beta_opt=beta,
        lr_threshold=lr_threshold,
        randomization=randomization,
    )
