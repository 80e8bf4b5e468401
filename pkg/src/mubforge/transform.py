"""Unitaries that cyclically permute generator sets by conjugation.

The elementary move is a quarter rotation in the plane of two generators,

    R(j -> k) = G_k (G_j + G_k) / sqrt(2),

which sends G_j to G_k, G_k to -G_j and fixes every other generator. A full
cycle over a group (g_0, ..., g_{L-1}) composes L-1 such rotations, applied
in position order with alternating direction, preceded by a parity fix F for
even L. The resulting conjugation maps G_{g_t} to G_{g_{t+1 mod L}} with a
plus sign for every t.

One sign cannot be helped: the conjugation action of any unitary on the 2n+1
generators restricts to an orthogonal map on the span of G_0..G_{2n-1}, and
G_{2n} (proportional to their full product) must pick up the determinant of
that map. A single even-length cycle has determinant -1, so it necessarily
flips G_{2n}. All other generators outside the cycled groups are required to
stay fixed exactly; any other sign flip is treated as a construction bug.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import (
    GammaSet,
    PauliTerm,
    canonical,
    multiply,
    to_dense,
)

UNITARITY_TOL = 1e-10
MONOMIAL_TOL = 1e-8


class ConstructionError(RuntimeError):
    """A synthesized unitary failed its own conjugation checks."""


class NotAMonomialError(ValueError):
    """Conjugation result is not a signed Pauli monomial."""


@dataclass(frozen=True)
class CycleSpec:
    """Disjoint generator-index groups, each cycled by one unitary."""

    n: int
    groups: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.groups:
            raise ValueError("need at least one group")
        lengths = {len(g) for g in self.groups}
        if len(lengths) != 1:
            raise ValueError(f"groups must share one length, got {sorted(lengths)}")
        if self.cycle_length < 2:
            raise ValueError("cycle length must be at least 2")
        flat = [i for g in self.groups for i in g]
        if len(set(flat)) != len(flat):
            raise ValueError("groups overlap")
        if any(not 0 <= i <= 2 * self.n for i in flat):
            raise ValueError(f"generator index out of range for n={self.n}")

    @property
    def cycle_length(self) -> int:
        return len(self.groups[0])

    def shift(self, i: int) -> int:
        """Image of generator index i under one cycle step."""
        for g in self.groups:
            if i in g:
                return g[(g.index(i) + 1) % len(g)]
        return i


def assert_unitary(U: np.ndarray, tol: float = UNITARITY_TOL) -> None:
    d = U.shape[0]
    err = np.linalg.norm(U.conj().T @ U - np.eye(d))
    if err > tol:
        raise ConstructionError(f"matrix is not unitary, |U^H U - I|_F = {err:.3e}")


def rotation_unitary(gs: GammaSet, j: int, k: int) -> np.ndarray:
    """Quarter rotation sending G_j to G_k (and G_k to -G_j)."""
    if j == k:
        raise ValueError("rotation needs two distinct generators")
    m = 2 * gs.n + 1
    if not (0 <= j < m and 0 <= k < m):
        raise IndexError(f"generator index out of range: ({j}, {k}) for n={gs.n}")
    gj, gk = to_dense(gs[j]), to_dense(gs[k])
    return gk @ (gj + gk) / np.sqrt(2)


def cycle_unitary(gs: GammaSet, spec: CycleSpec) -> np.ndarray:
    """Dense unitary whose conjugation cycles each group of generators.

    The postcondition is verified before returning: every group index maps
    one step forward with sign +1, every untouched generator except G_{2n}
    maps to itself exactly, and G_{2n} maps to itself up to the forced
    determinant sign. Violations raise ConstructionError.
    """
    if spec.n != gs.n:
        raise ValueError(f"spec built for n={spec.n}, generators for n={gs.n}")
    d = 2**gs.n
    L = spec.cycle_length
    last = 2 * gs.n
    if L % 2 == 0 and any(last in g for g in spec.groups):
        # determinant obstruction: an even cycle through G_{2n} cannot close
        # with all plus signs
        raise ValueError(f"even-length cycle may not contain G_{last}")
    U = np.eye(d, dtype=complex)
    for g in spec.groups:
        Ug = np.eye(d, dtype=complex)
        if L % 2 == 0:
            # F flips the wrap-around sign; applied first (rightmost factor)
            Ug = to_dense(multiply(gs[last], gs[g[-1]]))
        for t in range(1, L):
            if t % 2 == 1:
                R = rotation_unitary(gs, g[0], g[t])
            else:
                R = rotation_unitary(gs, g[t], g[0])
            Ug = R @ Ug
        U = Ug @ U
    assert_unitary(U)

    grouped = {i for g in spec.groups for i in g}
    for i in range(2 * gs.n + 1):
        term, sign = conjugate_term(U, gs[i])
        want = spec.shift(i)
        rep, want_sign = canonical(gs[want])
        if term != rep:
            raise ConstructionError(f"G{i} maps onto {term}, wanted G{want}")
        if sign * want_sign != 1 and (i in grouped or i != last):
            raise ConstructionError(f"G{i} picked up sign {sign * want_sign}")
    return U


def conjugate_term(U: np.ndarray, a: PauliTerm) -> tuple[PauliTerm, int]:
    """Resolve U a U^H as sign * monomial; raises if no monomial matches.

    The returned monomial is the canonical representative (phase in {0,1});
    the split-off sign is the second element.
    """
    d = 2**a.n
    if U.shape != (d, d):
        raise ValueError(f"unitary is {U.shape}, term lives in dimension {d}")
    img = U @ to_dense(a) @ U.conj().T
    # A signed monomial has one nonzero entry per column, at row c ^ rx where
    # rx is the X mask in integer-index bit order (qubit j <-> bit n-1-j).
    col0 = img[:, 0]
    r = int(np.argmax(np.abs(col0)))
    val = col0[r]
    if abs(abs(val) - 1.0) > MONOMIAL_TOL:
        raise NotAMonomialError(f"leading entry magnitude {abs(val):.6f} != 1")
    rx = r
    rz = 0
    for bit in range(a.n):
        c = 1 << bit
        ratio = img[c ^ rx, c] / val
        if abs(ratio + 1) < abs(ratio - 1):
            rz |= c
    phase = int(np.argmin([abs(val - p) for p in (1, 1j, -1, -1j)]))
    guess = PauliTerm(
        a.n, _revbits(rx, a.n), _revbits(rz, a.n), phase
    )
    residual = np.max(np.abs(img - to_dense(guess)))
    if residual > MONOMIAL_TOL:
        raise NotAMonomialError(
            f"conjugation residual {residual:.3e} exceeds {MONOMIAL_TOL}"
        )
    return canonical(guess)


def conjugation_residual(U: np.ndarray, a: PauliTerm, b: PauliTerm, sign: int) -> float:
    """Max-abs deviation of U a U^H from sign * b."""
    img = U @ to_dense(a) @ U.conj().T
    return float(np.max(np.abs(img - sign * to_dense(b))))


def _revbits(v: int, n: int) -> int:
    out = 0
    for j in range(n):
        if v >> j & 1:
            out |= 1 << (n - 1 - j)
    return out
