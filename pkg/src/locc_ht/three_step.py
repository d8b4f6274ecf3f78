"""A three-round LOCC testing protocol applied copy-by-copy.

One round of the protocol on a single copy, with Alice's Schmidt basis
indexed 0..d_A-1:

  1. Alice measures {M_omega} over all subsets omega of her basis, where
     M_omega = sum_{h in omega} m[omega][h] |h><h| for nonempty omega and
     M_empty is the remainder.  Outcome "empty" stops the round (conclude
     noise).
  2. Bob, told omega, measures the mutually unbiased (Fourier) basis
     xi_1..xi_{|omega|} of span{|h> : h in omega} plus the complement
     projector N_0.  Outcome 0 stops the round (conclude noise).
  3. Alice, told j, measures {O_0, 1 - O_0} where O_0 projects onto her
     conditional state given the pure-state hypothesis:
     O_0 = sqrt(M_omega rho_A) (|xi_j><xi_j|)^T sqrt(M_omega rho_A),
     normalized, with the transpose taken in the Schmidt basis.  Outcome 0
     concludes the pure state.

Collecting outcomes over n copies yields i.i.d. samples of a classical pair,
so the achievable Chernoff / Hoeffding exponents are the classical ones of
that pair, maximized over the free weights m[omega][h] subject to
0 <= m <= 1 and sum_{omega containing h} m[omega][h] <= 1.

Two independent routes to the same objective live here: a closed-form
expression evaluated directly from the weights, and a brute-force
construction of the outcome distributions by explicit operator algebra.
Their agreement is part of the test suite.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Literal, Mapping

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from .classical import LabeledDistPair
from .schmidt import SchmidtSpectrum
from .search import grid_golden_max

__all__ = [
    "ThreeStepParams",
    "ProtocolOutcomeDists",
    "ThreeStepOptions",
    "ThreeStepResult",
    "BudgetExhausted",
    "subsets_of_basis",
    "mub_basis",
    "outcome_distributions",
    "objective_f",
    "one_way_embedding",
    "optimize",
]

_FEAS_TOL = 1e-9
# Combinatorial guard: 2^d_A - 1 subsets and explicit d_A*d_B matrices.
_MAX_LOCAL_DIM = 6
_HOEFFDING_S_CAP = 1.0 - 1e-8


@lru_cache(maxsize=None)
def subsets_of_basis(d_A: int) -> tuple[tuple[int, ...], ...]:
    """All nonempty subsets of range(d_A), ordered by size then lexicographically."""
    out = []
    for size in range(1, d_A + 1):
        out.extend(itertools.combinations(range(d_A), size))
    return tuple(out)


@dataclass(frozen=True)
class ThreeStepParams:
    """Free weights of the protocol: one value per (subset, element) pair.

    ``weights`` maps each nonempty subset of range(d_A) (as a sorted tuple) to
    the per-element coefficients, aligned with the subset order.  Feasibility:
    every weight in [0, 1] and, for each basis element h, the weights of all
    subsets containing h sum to at most 1 (so Alice's remainder element stays
    positive).
    """

    d_A: int
    weights: Mapping[tuple[int, ...], tuple[float, ...]] = field(default_factory=dict)

    @classmethod
    def zeros(cls, d_A: int) -> "ThreeStepParams":
        return cls(d_A, {w: (0.0,) * len(w) for w in subsets_of_basis(d_A)})

    @classmethod
    def from_vector(cls, d_A: int, x) -> "ThreeStepParams":
        x = np.asarray(x, dtype=float)
        if x.shape != (n_weights(d_A),):
            raise ValueError(f"expected {n_weights(d_A)} weights, got shape {x.shape}")
        weights = {}
        pos = 0
        for w in subsets_of_basis(d_A):
            weights[w] = tuple(float(v) for v in x[pos : pos + len(w)])
            pos += len(w)
        return cls(d_A, weights)

    def to_vector(self) -> np.ndarray:
        chunks = [self.weights.get(w, (0.0,) * len(w)) for w in subsets_of_basis(d_A=self.d_A)]
        return np.concatenate([np.asarray(c, dtype=float) for c in chunks])

    def row_sums(self) -> np.ndarray:
        """For each basis element h: sum of weights over subsets containing h."""
        sums = np.zeros(self.d_A)
        for w, vals in self.weights.items():
            for h, v in zip(w, vals):
                sums[h] += v
        return sums

    def validate(self, tol: float = _FEAS_TOL) -> None:
        for w, vals in self.weights.items():
            if len(w) == 0 or len(vals) != len(w):
                raise ValueError(f"subset {w} has misaligned weights {vals}")
            if any(h < 0 or h >= self.d_A for h in w):
                raise ValueError(f"subset {w} outside range({self.d_A})")
            if tuple(sorted(set(w))) != tuple(w):
                raise ValueError(f"subset {w} must be sorted and duplicate-free")
            if any(v < -tol or v > 1.0 + tol for v in vals):
                raise ValueError(f"weight out of [0, 1] for subset {w}: {vals}")
        sums = self.row_sums()
        if np.any(sums > 1.0 + tol):
            bad = int(np.argmax(sums))
            raise ValueError(
                f"weights of subsets containing {bad} sum to {sums[bad]}, above 1"
            )


def n_weights(d_A: int) -> int:
    return sum(len(w) for w in subsets_of_basis(d_A))


def one_way_embedding(s: SchmidtSpectrum) -> ThreeStepParams:
    """Weights reproducing the optimal one-way strategy: every singleton fully
    on, everything else off (the protocol then dephases in the Schmidt basis).
    """
    weights = {w: (0.0,) * len(w) for w in subsets_of_basis(s.d_A)}
    for h in range(s.d_A):
        weights[(h,)] = (1.0,)
    return ThreeStepParams(s.d_A, weights)


def mub_basis(omega: tuple[int, ...], dim: int) -> np.ndarray:
    """Discrete-Fourier unbiased basis of span{|h> : h in omega} inside C^dim.

    Returns a (|omega|, dim) complex array of orthonormal vectors xi_j with
    |<h|xi_j>|^2 = 1/|omega| for every h in omega.  Any basis unbiased with
    respect to the computational one yields identical outcome statistics; the
    Fourier choice exists for every subset size.
    """
    omega = tuple(sorted(omega))
    k = len(omega)
    if k == 0:
        raise ValueError("omega must be nonempty")
    if omega[0] < 0 or omega[-1] >= dim:
        raise ValueError(f"subset {omega} does not fit in dimension {dim}")
    phases = np.exp(2j * np.pi * np.outer(np.arange(k), np.arange(k)) / k)
    vecs = np.zeros((k, dim), dtype=complex)
    vecs[:, list(omega)] = phases / math.sqrt(k)
    return vecs


@dataclass(frozen=True)
class ProtocolOutcomeDists:
    """Outcome distributions of one protocol round under both hypotheses.

    Labels are "empty" (Alice stopped), (omega, 0) (Bob stopped), and
    (omega, j, k) for Bob's j in 1..|omega| and Alice's final bit k.  Under
    the pure-state hypothesis the labels (omega, 0) and (omega, j, 1) carry
    exactly zero mass, and under noise the (omega, j, 0) masses do not depend
    on j.
    """

    pair: LabeledDistPair


def _weight_arrays(p: ThreeStepParams, s: SchmidtSpectrum):
    """Per-subset aggregates (|w|, sum m, sum m*lam, sum m^2*lam)."""
    lam = np.zeros(p.d_A)
    lam[: s.rank] = s.lambdas
    sizes, u, t, q = [], [], [], []
    for w in subsets_of_basis(p.d_A):
        vals = np.asarray(p.weights.get(w, (0.0,) * len(w)))
        lw = lam[list(w)]
        sizes.append(len(w))
        u.append(float(np.sum(vals)))
        t.append(float(np.dot(vals, lw)))
        q.append(float(np.dot(vals * vals, lw)))
    return (np.asarray(sizes, dtype=float), np.asarray(u), np.asarray(t), np.asarray(q))


def outcome_distributions(
    p: ThreeStepParams,
    s: SchmidtSpectrum,
    mub: Callable[[tuple[int, ...], int], np.ndarray] = mub_basis,
) -> ProtocolOutcomeDists:
    """Exact outcome distributions by explicit operator algebra.

    Builds the joint states as d_A*d_B matrices and pushes them through the
    three rounds (diagonal Kraus on A, rank-one projectors on B, conditional
    projector on A).  Independent of :func:`objective_f` by construction; used
    as its cross-check.  Requires d_A <= d_B <= 6.
    """
    p.validate()
    if p.d_A != s.d_A:
        raise ValueError(f"params built for d_A={p.d_A}, spectrum has d_A={s.d_A}")
    if s.d_A > s.d_B:
        raise ValueError("protocol requires d_A <= d_B; swap the subsystems")
    if s.d_B > _MAX_LOCAL_DIM:
        raise ValueError(f"local dimensions above {_MAX_LOCAL_DIM} are not supported")

    d_A, d_B = s.d_A, s.d_B
    dim = d_A * d_B
    lam = np.zeros(d_A)
    lam[: s.rank] = s.lambdas

    psi = np.zeros(dim)
    for i in range(s.rank):
        psi[i * d_B + i] = math.sqrt(s.lambdas[i])
    rho_alt = np.outer(psi, psi)
    rho_null = np.eye(dim) / dim

    labels: list = ["empty"]
    null_mass: list[float] = []
    alt_mass: list[float] = []

    m_total = np.zeros(d_A)
    for w, vals in p.weights.items():
        for h, v in zip(w, vals):
            m_total[h] += v
    m_empty = np.clip(1.0 - m_total, 0.0, None)
    eye_b = np.eye(d_B)
    null_mass.append(float(np.trace(np.kron(np.diag(m_empty), eye_b) @ rho_null).real))
    alt_mass.append(float(np.trace(np.kron(np.diag(m_empty), eye_b) @ rho_alt).real))

    for w in subsets_of_basis(d_A):
        vals = np.asarray(p.weights.get(w, (0.0,) * len(w)))
        m_diag = np.zeros(d_A)
        m_diag[list(w)] = vals
        kraus = np.kron(np.diag(np.sqrt(m_diag)), eye_b)
        post_null = kraus @ rho_null @ kraus
        post_alt = kraus @ rho_alt @ kraus

        xis = mub(w, d_B)
        n0 = eye_b - sum(np.outer(xi, xi.conj()) for xi in xis)
        for rho, sink in ((post_null, null_mass), (post_alt, alt_mass)):
            val = float(np.einsum("ajak,jk->", rho.reshape(d_A, d_B, d_A, d_B), n0.T).real)
            sink.append(val)
        labels.append((w, 0))

        for j, xi in enumerate(xis, start=1):
            xi_a = np.zeros(d_A, dtype=complex)
            xi_a[list(w)] = xi[list(w)]
            sqrt_mrho = np.sqrt(m_diag * lam)
            denom = float(np.sum(m_diag * lam * np.abs(xi_a) ** 2))
            if denom > 0.0:
                vec = sqrt_mrho * xi_a.conj()  # sqrt(M rho_A) |xi*>
                o0 = np.outer(vec, vec.conj()) / denom
            else:
                o0 = np.zeros((d_A, d_A), dtype=complex)
            cond_null = np.einsum(
                "j,ajbk,k->ab", xi.conj(), post_null.reshape(d_A, d_B, d_A, d_B), xi
            )
            cond_alt = np.einsum(
                "j,ajbk,k->ab", xi.conj(), post_alt.reshape(d_A, d_B, d_A, d_B), xi
            )
            for cond, sink in ((cond_null, null_mass), (cond_alt, alt_mass)):
                accept = float(np.trace(cond @ o0).real)
                total = float(np.trace(cond).real)
                sink.append(accept)
                sink.append(total - accept)
            labels.append((w, j, 0))
            labels.append((w, j, 1))

    # Interleave: masses were appended (accept, reject) per hypothesis in turn.
    null_arr = np.asarray(null_mass)
    alt_arr = np.asarray(alt_mass)
    null_arr, alt_arr = _certify_structure(labels, null_arr, alt_arr)
    return ProtocolOutcomeDists(
        LabeledDistPair(tuple(labels), tuple(null_arr), tuple(alt_arr))
    )


def _certify_structure(labels, null_arr, alt_arr):
    """Snap the provably-zero alternative cells to exact zero.

    Under the pure-state hypothesis Bob's stop outcome and Alice's reject bit
    are unreachable (the unbiased basis spans the conditional support and O_0
    projects exactly onto the conditional state); residues beyond 1e-12 mean
    the construction is wrong, so they raise instead of being hidden.
    """
    null_arr = null_arr.copy()
    alt_arr = alt_arr.copy()
    for idx, label in enumerate(labels):
        structural_zero = isinstance(label, tuple) and (
            (len(label) == 2 and label[1] == 0) or (len(label) == 3 and label[2] == 1)
        )
        if structural_zero:
            if abs(alt_arr[idx]) > 1e-12:
                raise AssertionError(
                    f"alternative mass {alt_arr[idx]} at structurally-zero label {label}"
                )
            alt_arr[idx] = 0.0
    for arr, name in ((null_arr, "null"), (alt_arr, "alt")):
        if np.any(arr < -1e-12):
            raise AssertionError(f"negative {name} outcome mass: {arr.min()}")
        np.clip(arr, 0.0, None, out=arr)
        total = math.fsum(arr.tolist())
        if abs(total - 1.0) > 1e-12:
            raise AssertionError(f"{name} outcome masses sum to {total!r}")
        arr /= total
    return null_arr, alt_arr


def _bracket_curve(
    sizes: np.ndarray,
    u: np.ndarray,
    t: np.ndarray,
    q: np.ndarray,
    d_A: int,
    d_B: int,
    sv: np.ndarray,
) -> np.ndarray:
    """Closed-form overlap bracket, vectorized over s.

    Zero bases follow the 0^t = 0 (t >= 0) convention, so a vanished factor
    removes its whole term at every s including the endpoints.  Every subset
    term is bounded by 1 (Cauchy-Schwarz gives q <= t and t^2 <= q), so the
    linear-domain sum neither overflows nor loses the leading term.
    """
    sv = np.atleast_1d(np.asarray(sv, dtype=float))
    log_dim = math.log(d_A) + math.log(d_B)
    a0 = max(1.0 - float(np.sum(u)) / d_A, 0.0)
    b0 = max(1.0 - float(np.sum(t)), 0.0)

    out = np.zeros(sv.shape)
    if a0 > 0.0 and b0 > 0.0:
        out += np.exp((1.0 - sv) * math.log(a0) + sv * math.log(b0))
    live = t > 0.0
    if np.any(live):
        lk = np.log(sizes[live])
        lt = np.log(t[live])
        lq = np.log(q[live])
        expo = (
            np.outer(lk + lq, 1.0 - sv)
            + np.outer(lt, 2.0 * sv - 1.0)
            + (sv - 1.0) * log_dim
        )
        out += np.exp(expo).sum(axis=0)
    return out


def _neg_log_bracket(sizes, u, t, q, d_A, d_B, sv) -> np.ndarray:
    bracket = _bracket_curve(sizes, u, t, q, d_A, d_B, sv)
    with np.errstate(divide="ignore"):
        return -np.log(bracket)


def objective_f(s_param, p: ThreeStepParams, s: SchmidtSpectrum):
    """Closed-form protocol objective f(s, m) = -ln(overlap bracket).

    Equals minus the log Renyi overlap of :func:`outcome_distributions` at the
    same s; scalar in, scalar out (arrays of s are mapped elementwise).
    """
    p.validate()
    sv = np.atleast_1d(np.asarray(s_param, dtype=float))
    if np.any((sv < 0.0) | (sv > 1.0)):
        raise ValueError("s must lie in [0, 1]")
    sizes, u, t, q = _weight_arrays(p, s)
    vals = _neg_log_bracket(sizes, u, t, q, s.d_A, s.d_B, sv)
    if np.isscalar(s_param) or np.ndim(s_param) == 0:
        return float(vals[0])
    return vals


@dataclass(frozen=True)
class ThreeStepOptions:
    """Optimizer configuration (all runs are deterministic given these).

    ``s_grid`` controls the grid used when a candidate is scored (followed by
    golden-section refinement); simplex iterations run on the coarser
    ``nm_s_grid`` since their inner argmax only steers the search.
    """

    starts: int = 64
    seed: int = 0
    tol: float = 1e-9
    s_grid: int = 201
    nm_s_grid: int = 41
    max_fevals_per_start: int | None = None  # default: 60 * n_weights
    polish_restarts: int = 3  # simplex reruns from the incumbent best
    budget: int | None = None  # total objective evaluations, None = unlimited


@dataclass(frozen=True)
class ThreeStepResult:
    value: float
    params: ThreeStepParams
    s_star: float
    mode: str
    r: float | None
    evaluations: int
    budget_exhausted: bool


class BudgetExhausted(RuntimeError):
    """Raised internally when the optimizer evaluation budget runs out."""


def _row_index_map(d_A: int) -> list[np.ndarray]:
    rows: list[list[int]] = [[] for _ in range(d_A)]
    pos = 0
    for w in subsets_of_basis(d_A):
        for h in w:
            rows[h].append(pos)
            pos += 1
    return [np.asarray(r, dtype=int) for r in rows]


class _VectorLayout:
    """Precomputed segment structure for evaluating the objective straight
    from a flat weight vector (the optimizer's hot path)."""

    def __init__(self, s: SchmidtSpectrum):
        subsets = subsets_of_basis(s.d_A)
        lam = np.zeros(s.d_A)
        lam[: s.rank] = s.lambdas
        self.offsets = np.cumsum([0] + [len(w) for w in subsets[:-1]])
        self.lam_pos = np.concatenate([lam[list(w)] for w in subsets])
        self.sizes = np.asarray([float(len(w)) for w in subsets])
        self.d_A = s.d_A
        self.d_B = s.d_B

    def aggregates(self, x: np.ndarray):
        u = np.add.reduceat(x, self.offsets)
        t = np.add.reduceat(x * self.lam_pos, self.offsets)
        q = np.add.reduceat(x * x * self.lam_pos, self.offsets)
        return self.sizes, u, t, q


def _project_feasible(x: np.ndarray, row_idx: list[np.ndarray]) -> np.ndarray:
    """Clip to [0,1], then rescale each element's row when its sum exceeds 1."""
    x = np.clip(x, 0.0, 1.0)
    for idx in row_idx:
        total = float(np.sum(x[idx]))
        if total > 1.0:
            x[idx] /= total
    return x


def optimize(
    s: SchmidtSpectrum,
    mode: Literal["chernoff", "hoeffding"] = "chernoff",
    r: float | None = None,
    options: ThreeStepOptions = ThreeStepOptions(),
) -> ThreeStepResult:
    """Maximize the protocol exponent over feasible weights.

    Chernoff mode maximizes sup_s f(s, m); Hoeffding mode maximizes
    sup_s (f(s, m) - r s)/(1 - s) with s capped just below 1.  Multistart
    Nelder-Mead over the weights (iterates projected onto the feasible
    polytope) with the s-sup resolved by an inner vectorized grid, refined by
    golden section when a candidate is scored.  The two deterministic seeds,
    the one-way embedding and all-zero weights, are always scored, so the
    result is never below either baseline; the returned value is a certified
    achievable exponent but only a lower bound on the true supremum.

    Starts are evaluated in a fixed order and ties keep the earliest start, so
    results are reproducible for fixed options regardless of scheduling.
    """
    if mode not in ("chernoff", "hoeffding"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "hoeffding":
        if r is None or r <= 0.0:
            raise ValueError("hoeffding mode needs r > 0")
    else:
        r = None

    d_A = s.d_A
    n_dim = n_weights(d_A)
    row_idx = _row_index_map(d_A)
    layout = _VectorLayout(s)
    s_hi = 1.0 if mode == "chernoff" else _HOEFFDING_S_CAP
    nm_grid = np.linspace(0.0, s_hi, min(options.nm_s_grid, options.s_grid))

    eval_count = 0
    exhausted = False

    def curve(x: np.ndarray, sv: np.ndarray) -> np.ndarray:
        sizes, u, t, q = layout.aggregates(x)
        f_vals = _neg_log_bracket(sizes, u, t, q, s.d_A, s.d_B, sv)
        if mode == "chernoff":
            return f_vals
        return (f_vals - r * sv) / (1.0 - sv)

    def inner_value(x: np.ndarray) -> float:
        nonlocal eval_count
        if options.budget is not None and eval_count >= options.budget:
            raise BudgetExhausted
        eval_count += 1
        return float(np.max(curve(x, nm_grid)))

    def score(x: np.ndarray) -> tuple[float, float]:
        """Refined (value, s_star) at a projected point."""
        s_best, v_best = grid_golden_max(
            lambda sv: curve(x, sv), 0.0, s_hi, n_grid=options.s_grid, tol=min(options.tol, 1e-10)
        )
        return v_best, s_best

    seeds = [one_way_embedding(s).to_vector(), np.zeros(n_dim)]
    seeds.extend(_structured_seeds(s))
    best_x = None
    best_val = -math.inf
    best_s = 0.0
    for x0 in seeds:
        v, s_star = score(x0)
        if v > best_val:
            best_val, best_x, best_s = v, x0.copy(), s_star

    sampler = qmc.Sobol(d=n_dim, scramble=True, seed=options.seed)
    n_random = max(options.starts - len(seeds), 0)
    random_starts = sampler.random(n_random) if n_random else np.empty((0, n_dim))
    max_fevals = options.max_fevals_per_start or 60 * n_dim

    def neg_obj(x: np.ndarray) -> float:
        return -inner_value(_project_feasible(x.copy(), row_idx))

    def run_simplex(x0: np.ndarray) -> np.ndarray:
        res = minimize(
            neg_obj,
            x0,
            method="Nelder-Mead",
            options={
                "maxfev": max_fevals,
                "xatol": 1e-7,
                "fatol": max(options.tol * 1e-2, 1e-12),
                "adaptive": n_dim > 8,
            },
        )
        return _project_feasible(np.asarray(res.x, dtype=float).copy(), row_idx)

    try:
        for x0 in itertools.chain(seeds, random_starts):
            x0 = _project_feasible(np.asarray(x0, dtype=float).copy(), row_idx)
            x_fin = run_simplex(x0)
            v, s_star = score(x_fin)
            if v > best_val:
                best_val, best_x, best_s = v, x_fin, s_star
        # Restarting the simplex from the incumbent recovers most of what a
        # single high-dimensional Nelder-Mead run leaves on the table.
        for _ in range(options.polish_restarts):
            x_fin = run_simplex(best_x.copy())
            v, s_star = score(x_fin)
            if v > best_val:
                best_val, best_x, best_s = v, x_fin, s_star
    except BudgetExhausted:
        exhausted = True

    params = ThreeStepParams.from_vector(d_A, best_x)
    return ThreeStepResult(
        value=best_val,
        params=params,
        s_star=best_s,
        mode=mode,
        r=r,
        evaluations=eval_count,
        budget_exhausted=exhausted,
    )
