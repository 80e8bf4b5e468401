"""Entropies of measurement outcomes, eigenvalue bounds and brute-force sweeps.

All logarithms are base 2. For a state rho and bases B_0..B_{L-1}, the
quantity of interest is the average order-alpha entropy of the outcome
distributions p_b = <b|rho|b>. Two analytic lower bounds on the average
min-entropy of L mutually unbiased bases in dimension d are provided:

    small_L = -log2[ (1 + (L-1)/sqrt(d)) / L ]
    large_L = -log2[ (1 + (d-1)/sqrt(L)) / d ]

The first dominates for L < d, the second for L > d; they coincide at L = d.
Both arise from a bound on the top eigenvalue of the selector operators

    P_b = (1/L) sum_j |b^(j)><b^(j)|,      b in {0..d-1}^L,

and sweep_max_eigen certifies tightness by exhausting all d^L of them. The
sweep is chunked; chunk boundaries are fixed independently of the worker
count and the reduction runs in chunk order, so results are bit-identical
for any number of workers.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .mub import Basis, MubSet

LOG2 = math.log(2)
DEFAULT_BUDGET = 2**28
SWEEP_CHUNK = 4096


class BudgetExceededError(RuntimeError):
    """Sweep size is over the configured budget; sample or raise the budget."""


@dataclass(frozen=True)
class BoundSet:
    deutsch: float
    small_L: float
    large_L: float

    @property
    def best(self) -> float:
        return max(self.small_L, self.large_L)


@dataclass(frozen=True)
class PvecOperator:
    matrix: np.ndarray
    normalization: str  # "mean" | "sum"
    b: tuple[int, ...]


@dataclass(frozen=True)
class SweepResult:
    b_star: tuple[int, ...]
    lambda_star: float
    histogram: Counter
    count: int

    @property
    def min_avg_entropy(self) -> float:
        return -math.log2(self.lambda_star)


def bounds(L: int, d: int) -> BoundSet:
    if L < 1 or d < 2:
        raise ValueError(f"need L >= 1 and d >= 2, got L={L}, d={d}")
    deutsch = -math.log2((1 + 1 / math.sqrt(d)) / 2)
    small = -math.log2((1 / L) * (1 + (L - 1) / math.sqrt(d))) + 0.0
    large = -math.log2((1 / d) * (1 + (d - 1) / math.sqrt(L))) + 0.0
    return BoundSet(deutsch, small, large)


def _basis_matrix(basis) -> np.ndarray:
    return basis.vectors if isinstance(basis, Basis) else np.asarray(basis)


def outcome_distribution(basis, state) -> np.ndarray:
    """p_b for a unit vector or a density matrix."""
    B = _basis_matrix(basis)
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        if abs(np.linalg.norm(state) - 1) > 1e-8:
            raise ValueError(f"state norm {np.linalg.norm(state):.6g}, want 1")
        p = np.abs(B.conj().T @ state) ** 2
    elif state.ndim == 2:
        if abs(np.trace(state) - 1) > 1e-8:
            raise ValueError(f"state trace {np.trace(state):.6g}, want 1")
        p = np.real(np.sum(B.conj() * (state @ B), axis=0))
    else:
        raise ValueError("state must be a vector or a density matrix")
    return np.maximum(p, 0.0)


def renyi_entropy(basis, state, alpha: float) -> float:
    """Order-alpha entropy of the outcome distribution, in bits.

    alpha = 1 is Shannon (computed directly with 0 log 0 = 0), alpha = 2 the
    collision entropy, alpha = inf the min-entropy -log2 max_b p_b.
    """
    p = outcome_distribution(basis, state)
    return _entropy_of(p, alpha)


def _entropy_of(p: np.ndarray, alpha: float) -> float:
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if math.isinf(alpha):
        return -math.log2(float(np.max(p)))
    if alpha == 1:
        q = p[p > 0]
        return float(-np.sum(q * np.log2(q)))
    return float(np.log2(np.sum(p**alpha)) / (1 - alpha))


def avg_entropy(ms: "MubSet | Sequence", state, alpha: float) -> float:
    """Arithmetic mean of the per-basis entropies."""
    bases = ms.bases if isinstance(ms, MubSet) else ms
    return sum(renyi_entropy(b, state, alpha) for b in bases) / len(bases)


def pvec_operator(ms, b: Sequence[int], normalization: str = "mean") -> PvecOperator:
    """Selector operator for the string b, one projector per basis."""
    bases = ms.bases if isinstance(ms, MubSet) else ms
    if normalization not in ("mean", "sum"):
        raise ValueError(f"normalization must be 'mean' or 'sum', got {normalization!r}")
    mats = [_basis_matrix(x) for x in bases]
    d = mats[0].shape[0]
    if len(b) != len(mats):
        raise ValueError(f"string length {len(b)} != basis count {len(mats)}")
    if any(not 0 <= int(x) < d for x in b):
        raise IndexError(f"basis-element index out of range in {tuple(b)}")
    P = np.zeros((d, d), dtype=complex)
    for j, B in enumerate(mats):
        v = B[:, int(b[j])]
        P += np.outer(v, v.conj())
    if normalization == "mean":
        P /= len(mats)
    return PvecOperator(P, normalization, tuple(int(x) for x in b))


def hermitian_eigmax(M: np.ndarray) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a deterministic unit eigenvector."""
    M = np.asarray(M)
    if np.max(np.abs(M - M.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian within 1e-10")
    w, V = np.linalg.eigh(M)
    i = int(np.argmax(w))  # first index attaining the max
    v = V[:, i]
    mags = np.abs(v)
    k = int(np.argmax(mags > mags.max() - 1e-12))
    v = v / (v[k] / abs(v[k]))
    lam = float(w[i])
    if np.linalg.norm(M @ v - lam * v) > 1e-10:
        raise RuntimeError("eigenpair residual above 1e-10")
    return lam, v


def _projector_stack(bases) -> np.ndarray:
    mats = [_basis_matrix(b) for b in bases]
    d = mats[0].shape[0]
    P = np.empty((len(mats), d, d, d), dtype=complex)
    for j, B in enumerate(mats):
        for b in range(d):
            P[j, b] = np.outer(B[:, b], B[:, b].conj())
    return P


def _chunk_max(projs: np.ndarray, d: int, L: int, start: int, stop: int):
    idx = np.arange(start, stop)
    P = np.zeros((stop - start, d, d), dtype=complex)
    for j in range(L):
        digits = (idx // d ** (L - 1 - j)) % d
        P += projs[j, digits]
    P /= L
    lam = np.linalg.eigvalsh(P)[:, -1]
    k = int(np.argmax(lam))
    hist = Counter(np.round(lam, 10).tolist())
    return float(lam[k]), start + k, hist


def sweep_max_eigen(
    ms,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    chunk: int = SWEEP_CHUNK,
) -> SweepResult:
    """Exact maximum of lambda_max(P_b, mean) over all d^L strings b.

    Ties resolve to the lexicographically smallest b. Deterministic for any
    worker count.
    """
    bases = ms.bases if isinstance(ms, MubSet) else ms
    L = len(bases)
    d = _basis_matrix(bases[0]).shape[0]
    total = d**L
    if total > budget:
        raise BudgetExceededError(
            f"{d}^{L} = {total} eigenproblems over budget {budget}; "
            "raise the budget or use sampling"
        )
    projs = _projector_stack(bases)
    starts = list(range(0, total, chunk))
    jobs = [(s, min(s + chunk, total)) for s in starts]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda se: _chunk_max(projs, d, L, *se), jobs)
            )
    else:
        results = [_chunk_max(projs, d, L, *se) for se in jobs]
    best_lam, best_idx = -1.0, 0
    hist: Counter = Counter()
    for lam, idx, h in results:  # chunk order, not completion order
        hist.update(h)
        if lam > best_lam:
            best_lam, best_idx = lam, idx
    b_star = tuple(int(best_idx // d ** (L - 1 - j)) % d for j in range(L))
    return SweepResult(b_star, best_lam, hist, total)


def sample_max_eigen(ms, samples: int, seed: int) -> SweepResult:
    """Seeded random-string estimate of the sweep maximum (lower bound)."""
    bases = ms.bases if isinstance(ms, MubSet) else ms
    L = len(bases)
    d = _basis_matrix(bases[0]).shape[0]
    rng = np.random.default_rng(seed)
    projs = _projector_stack(bases)
    strings = rng.integers(0, d, size=(samples, L))
    P = np.zeros((samples, d, d), dtype=complex)
    for j in range(L):
        P += projs[j, strings[:, j]]
    P /= L
    lam = np.linalg.eigvalsh(P)[:, -1]
    k = int(np.argmax(lam))
    return SweepResult(
        tuple(int(x) for x in strings[k]),
        float(lam[k]),
        Counter(np.round(lam, 10).tolist()),
        samples,
    )


def _avg_entropy_and_grad(mats, psi, alpha):
    """Average entropy and its Wirtinger gradient d/d(psi*)."""
    L = len(mats)
    d = psi.shape[0]
    f = 0.0
    g = np.zeros(d, dtype=complex)
    for B in mats:
        c = B.conj().T @ psi
        p = np.maximum(np.abs(c) ** 2, 1e-300)
        if math.isinf(alpha):
            b = int(np.argmax(p))
            f += -math.log2(p[b])
            w = np.zeros(d)
            w[b] = -1.0 / (p[b] * LOG2)
        elif alpha == 1:
            f += float(-np.sum(p * np.log2(p)))
            w = -(np.log2(p) + 1 / LOG2)
        else:
            S = float(np.sum(p**alpha))
            f += math.log2(S) / (1 - alpha)
            w = alpha * p ** (alpha - 1) / ((1 - alpha) * S * LOG2)
        g += B @ (w * c)
    return f / L, g / L


def minimize_avg_entropy(
    ms,
    alpha: float,
    restarts: int = 64,
    seed: int = 0,
    iters: int = 500,
    surrogate_alpha: float = 20.0,
) -> tuple[np.ndarray, float]:
    """Best local minimum of the average entropy over unit vectors.

    Projected gradient descent with backtracking from seeded random starts.
    For alpha = inf each start anneals through the smooth order-2 and
    order-`surrogate_alpha` objectives before polishing on the exact
    min-entropy, whose active-term gradient is smooth wherever the per-basis
    maxima are unique; the annealing stages funnel past the local minima the
    non-smooth objective has on its own. The result is a heuristic upper
    bound on the true minimum and is deterministic for a fixed seed.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    bases = ms.bases if isinstance(ms, MubSet) else ms
    mats = [_basis_matrix(b) for b in bases]
    d = mats[0].shape[0]
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    stages = [alpha] if not math.isinf(alpha) else [2.0, surrogate_alpha, alpha]
    rng = np.random.default_rng(seed)
    best_val, best_psi = math.inf, None
    for _ in range(restarts):
        x = rng.normal(size=2 * d)
        psi = x[:d] + 1j * x[d:]
        psi /= np.linalg.norm(psi)
        for stage in stages:
            psi = _descend(mats, psi, stage, iters)
        val, _ = _avg_entropy_and_grad(mats, psi, alpha)
        if val < best_val - 1e-15:
            best_val, best_psi = val, psi
    return best_psi, best_val


def _descend(mats, psi, alpha, iters):
    f, g = _avg_entropy_and_grad(mats, psi, alpha)
    eta = 0.5
    for _ in range(iters):
        g_t = g - (psi.conj() @ g) * psi
        gn = float(np.linalg.norm(g_t))
        if gn < 1e-12:
            break
        moved = False
        while eta > 1e-14:
            cand = psi - eta * g_t
            cand /= np.linalg.norm(cand)
            fc, gc = _avg_entropy_and_grad(mats, cand, alpha)
            if fc < f - 0.25 * eta * gn * gn:
                psi, f, g = cand, fc, gc
                moved = True
                break
            eta /= 2
        if not moved:
            break
        eta = min(eta * 2, 1.0)
    return psi


def iter_sweep_rows(ms, budget: int = DEFAULT_BUDGET, chunk: int = SWEEP_CHUNK):
    """Yield (b, lambda_max) for every string in lexicographic order."""
    bases = ms.bases if isinstance(ms, MubSet) else ms
    L = len(bases)
    d = _basis_matrix(bases[0]).shape[0]
    total = d**L
    if total > budget:
        raise BudgetExceededError(
            f"{d}^{L} = {total} eigenproblems over budget {budget}"
        )
    projs = _projector_stack(bases)
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop)
        P = np.zeros((stop - start, d, d), dtype=complex)
        digit_cols = []
        for j in range(L):
            digits = (idx // d ** (L - 1 - j)) % d
            digit_cols.append(digits)
            P += projs[j, digits]
        P /= L
        lam = np.linalg.eigvalsh(P)[:, -1]
        for k in range(stop - start):
            yield tuple(int(col[k]) for col in digit_cols), float(lam[k])
