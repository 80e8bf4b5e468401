"""Joint eigenbases of commuting classes, unbiasedness and cycling checks.

Each class of d-1 commuting involutions, together with the identity, spans a
maximal abelian algebra, so its joint eigenspaces are one dimensional. The
basis extraction splits the full space by the +1/-1 eigenspaces of one member
at a time. Vectors are labeled by their sign pattern (member 0 most
significant, +1 before -1) and each vector's global phase is fixed by making
its largest-magnitude component real positive, ties broken by lowest index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .classes import CommutingClass, Partition
from .pauli import build_gamma_generators, to_dense
from .transform import cycle_unitary

EIGEN_TOL = 1e-8
UNBIAS_TOL = 1e-8
MATCH_TOL = 1e-6


class DiagonalizationError(RuntimeError):
    """Input operators are not simultaneously diagonalizable."""


class UnbiasednessError(RuntimeError):
    """A constructed pair of bases is not mutually unbiased."""


@dataclass(frozen=True)
class Basis:
    """d orthonormal columns; column order follows the sign-pattern labels."""

    vectors: np.ndarray
    label: int
    sign_patterns: tuple[tuple[int, ...], ...] = ()

    @property
    def d(self) -> int:
        return self.vectors.shape[0]

    def projector(self, b: int) -> np.ndarray:
        v = self.vectors[:, b]
        return np.outer(v, v.conj())


@dataclass(frozen=True)
class MubSet:
    bases: tuple[Basis, ...]
    U: np.ndarray
    provenance: Partition

    @property
    def L(self) -> int:
        return len(self.bases)

    @property
    def d(self) -> int:
        return self.bases[0].d


@dataclass(frozen=True)
class CycleReport:
    worst_residual: float
    permutations: tuple[tuple[int, ...], ...]


def fix_phase(v: np.ndarray) -> np.ndarray:
    mags = np.abs(v)
    i = int(np.argmax(mags > mags.max() - 1e-12))
    ph = v[i] / abs(v[i])
    return v / ph


def common_eigenbasis(cc: CommutingClass, label: int = 0) -> Basis:
    """Joint eigenbasis of one commuting class, canonically ordered."""
    mats = [to_dense(m) for m in cc.members]
    return basis_from_involutions(mats, label)


def basis_from_involutions(mats: list[np.ndarray], label: int = 0) -> Basis:
    """Joint eigenbasis of commuting Hermitian involutions (M^2 = I)."""
    d = mats[0].shape[0]
    blocks: list[tuple[np.ndarray, tuple[int, ...]]] = [
        (np.eye(d, dtype=complex), ())
    ]
    for M in mats:
        split: list[tuple[np.ndarray, tuple[int, ...]]] = []
        for B, pattern in blocks:
            A = B.conj().T @ M @ B
            w, V = np.linalg.eigh(A)
            if np.max(np.abs(np.abs(w) - 1)) > EIGEN_TOL:
                raise DiagonalizationError(
                    "restricted eigenvalues are not within tolerance of +-1; "
                    "the input operators do not commute or are not involutions"
                )
            plus, minus = w > 0, w < 0
            if plus.any():
                split.append((B @ V[:, plus], pattern + (1,)))
            if minus.any():
                split.append((B @ V[:, minus], pattern + (-1,)))
        blocks = split
    if any(B.shape[1] != 1 for B, _ in blocks) or len(blocks) != d:
        raise DiagonalizationError(
            f"joint eigenspaces are not all one dimensional "
            f"({[B.shape[1] for B, _ in blocks]}); class is not maximal"
        )
    # canonical order: member 0's sign most significant, +1 before -1
    order = sorted(range(d), key=lambda i: tuple(-s for s in blocks[i][1]))
    vectors = np.column_stack([fix_phase(blocks[i][0][:, 0]) for i in order])
    patterns = tuple(blocks[i][1] for i in order)
    if len(set(patterns)) != d:
        raise DiagonalizationError("sign patterns are not distinct")
    for M in mats:
        res = np.linalg.norm(M @ vectors - vectors * np.sum(
            vectors.conj() * (M @ vectors), axis=0
        ), axis=0)
        if np.max(res) > EIGEN_TOL:
            raise DiagonalizationError(f"joint eigenvector residual {np.max(res):.3e}")
    return Basis(vectors, label, patterns)


def unbiasedness_deviation(bases) -> float:
    """max over cross-basis pairs of | |<a|b>|^2 - 1/d |."""
    mats = [b.vectors if isinstance(b, Basis) else np.asarray(b) for b in bases]
    d = mats[0].shape[0]
    worst = 0.0
    for j in range(len(mats)):
        for k in range(j + 1, len(mats)):
            ov = np.abs(mats[j].conj().T @ mats[k]) ** 2
            worst = max(worst, float(np.max(np.abs(ov - 1.0 / d))))
    return worst


def build_mub_set(part: Partition, U: np.ndarray | None = None) -> MubSet:
    """Extract all joint eigenbases and verify mutual unbiasedness."""
    if U is None:
        gs = build_gamma_generators(part.n)
        U = cycle_unitary(gs, part.spec)
    bases = tuple(common_eigenbasis(c, label=i) for i, c in enumerate(part.classes))
    dev = unbiasedness_deviation(bases)
    if dev > UNBIAS_TOL:
        for j in range(len(bases)):
            for k in range(j + 1, len(bases)):
                ov = np.abs(bases[j].vectors.conj().T @ bases[k].vectors) ** 2
                bad = np.unravel_index(np.argmax(np.abs(ov - 1 / 2**part.n)), ov.shape)
                if abs(ov[bad] - 1 / 2**part.n) > UNBIAS_TOL:
                    raise UnbiasednessError(
                        f"unbiasedness violated at bases ({j},{k}), elements {bad}, "
                        f"|overlap|^2 = {ov[bad]:.6g}"
                    )
    return MubSet(bases, U, part)


def verify_cycle(ms: MubSet) -> CycleReport:
    """Match U-conjugated projectors of basis j against basis j+1.

    Returns the worst Frobenius residual and the induced index permutations.
    Raises if some projector has no counterpart with squared overlap above
    1 - 1e-6.
    """
    worst = 0.0
    perms = []
    for j in range(ms.L):
        Bj = ms.bases[j].vectors
        Bk = ms.bases[(j + 1) % ms.L].vectors
        perm = []
        for b in range(ms.d):
            v = ms.U @ Bj[:, b]
            ov = np.abs(Bk.conj().T @ v) ** 2
            m = int(np.argmax(ov))
            if ov[m] < 1 - MATCH_TOL:
                raise RuntimeError(
                    f"no projector match above {1 - MATCH_TOL} overlap for "
                    f"basis {j} element {b} (best {ov[m]:.6f})"
                )
            perm.append(m)
            P_img = np.outer(v, v.conj())
            P_tgt = np.outer(Bk[:, m], Bk[:, m].conj())
            worst = max(worst, float(np.linalg.norm(P_img - P_tgt)))
        if sorted(perm) != list(range(ms.d)):
            raise RuntimeError(f"induced map at basis {j} is not a permutation")
        perms.append(tuple(perm))
    return CycleReport(worst, tuple(perms))


def invariant_states(ms: MubSet) -> list[tuple[np.ndarray, complex]]:
    """All unit eigenvectors of the cycling unitary with their eigenphases.

    U is normal, so the complex Schur form is diagonal and its columns are an
    orthonormal eigenbasis; this is stable even for degenerate phases.
    """
    T, Zm = scipy.linalg.schur(ms.U, output="complex")
    out = []
    for i in range(ms.d):
        v = fix_phase(Zm[:, i])
        out.append((v, complex(T[i, i])))
    return out


def cycle_coherent_family(ms: MubSet, b: int) -> np.ndarray:
    """Columns U^j |b^(0)>, j = 0..L-1: the orbit of one basis-0 vector."""
    cols = [ms.bases[0].vectors[:, b]]
    for _ in range(ms.L - 1):
        cols.append(ms.U @ cols[-1])
    return np.column_stack(cols)


def phase_ramp_states(ms: MubSet, coefficients: np.ndarray) -> list[np.ndarray]:
    """Normalized sums sum_j c_j U^j |b^(0)> over all b; near-null sums are
    dropped. With c_j = exp(i pi j / 4) and a cycle satisfying U^4 = -I these
    reproduce the bound-attaining invariant superpositions in dimension 4."""
    out = []
    for b in range(ms.d):
        fam = cycle_coherent_family(ms, b)
        psi = fam @ np.asarray(coefficients, dtype=complex)
        nrm = np.linalg.norm(psi)
        if nrm > 1e-8:
            out.append(fix_phase(psi / nrm))
    return out


def eigenvector_residual(U: np.ndarray, v: np.ndarray) -> float:
    lam = v.conj() @ U @ v
    return float(np.linalg.norm(U @ v - lam * v))


def invariant_superposition_family(ms: MubSet) -> list[np.ndarray]:
    """Eigenvector superpositions sum_j exp(-i j (theta + 2 pi k)/L) U^j |b^(0)>.

    theta is the phase of the scalar U^L; ramp index k runs over 0..L-1 and b
    over the basis-0 elements, so every returned state is an eigenvector of
    U. Near-null combinations are dropped, duplicates are not.
    """
    UL = np.linalg.matrix_power(ms.U, ms.L)
    theta = float(np.angle(UL[0, 0]))
    out = []
    for k in range(ms.L):
        coeffs = np.exp(-1j * np.arange(ms.L) * (theta + 2 * np.pi * k) / ms.L)
        for v in phase_ramp_states(ms, coeffs):
            if eigenvector_residual(ms.U, v) < 1e-8:
                out.append(v)
    return out


def symmetrize(rho: np.ndarray, U: np.ndarray, L: int) -> np.ndarray:
    """Average rho over conjugations by U^j, j = 0..L-1."""
    rho = np.asarray(rho, dtype=complex)
    if abs(np.trace(rho) - 1) > 1e-8:
        raise ValueError(f"trace is {np.trace(rho):.6g}, want 1")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w.min() < -1e-8:
        raise ValueError(f"matrix is not PSD (min eigenvalue {w.min():.3e})")
    out = np.zeros_like(rho)
    Uj = np.eye(rho.shape[0], dtype=complex)
    for _ in range(L):
        out += Uj.conj().T @ rho @ Uj
        Uj = U @ Uj
    return out / L


def mub_set_to_json(ms: MubSet, cycle: CycleReport | None = None) -> str:
    from .classes import partition_to_json

    def cplx(M):
        return [[[float(z.real), float(z.imag)] for z in row] for row in M]

    doc = {
        "d": ms.d,
        "L": ms.L,
        "bases": [
            {"label": b.label, "vectors": cplx(b.vectors.T)} for b in ms.bases
        ],
        "unbiasedness_deviation": unbiasedness_deviation(ms.bases),
        "provenance": json.loads(partition_to_json(ms.provenance)),
    }
    if cycle is not None:
        doc["cycle"] = {
            "worst_residual": cycle.worst_residual,
            "permutations": [list(p) for p in cycle.permutations],
        }
    return json.dumps(doc)
