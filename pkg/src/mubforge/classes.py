"""Partitions of Pauli monomials into commuting classes that a cycle permutes.

A class holds d-1 pairwise commuting Hermitian monomials, exactly one of
which is a single generator (the singleton). A partition is a list of L such
classes that are pairwise disjoint as monomials-up-to-sign (P2) and that the
cycle unitary permutes one step forward (P3).

Both generated families share one recipe: pick a singleton and n-1 disjoint
commuting generator pairs as units, take every product of a nonempty subset
of units as class 0, and push class 0 forward with the cycle unitary. The
unit choices differ:

  * full cycle over all 2n+1 generators (2n+1 prime): singleton G_0, pairs
    (a, 2n+1-a) for a = 1..n-1, so every pair's index sum is 0 mod 2n+1 and
    the pair spacings 2n-1, 2n-3, ..., 3 are all distinct;
  * L parallel cycles of the 2n ladder generators (L prime, L | n): the
    middle element G_{(L-1)/2} as singleton, mirrored pairs (a, L-a) inside
    each block of L consecutive generators, and the leftover block leaders
    paired across blocks;
  * L = 2 (pair swaps): singleton G_0 and the staggered pairs (2i-1, 2i),
    which straddle adjacent swap pairs so no unit maps to itself.

Disjointness of the generated classes is certified by validate_partition
rather than assumed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .pauli import (
    GammaSet,
    PauliTerm,
    build_gamma_generators,
    canonical,
    commutes,
    gamma_indices,
    gamma_product,
    identity,
    is_hermitian,
    multiply,
    term_from_text,
    term_to_text,
)
from .transform import CycleSpec, conjugate_term, conjugation_residual, cycle_unitary


@dataclass(frozen=True)
class CommutingClass:
    members: tuple[PauliTerm, ...]
    singleton_index: int

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class Partition:
    n: int
    L: int
    spec: CycleSpec
    classes: tuple[CommutingClass, ...]

    @property
    def d(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class ValidationReport:
    p1: bool
    p2: bool
    p3: bool
    hermitian: bool
    singletons: bool
    worst_p3_residual: float
    p3_sign_flips: int
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.p1 and self.p2 and self.p3 and self.hermitian and self.singletons


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    return all(m % k for k in range(2, int(m**0.5) + 1))


def spacing(a: "PauliTerm | Sequence[int]", p: int) -> int:
    """(j - i) mod p for a two-generator monomial G_i G_j (i < j)."""
    idx = _as_indices(a)
    if len(idx) != 2:
        raise ValueError(f"spacing needs a length-2 monomial, got length {len(idx)}")
    i, j = idx
    if not (i < p and j < p):
        raise ValueError(f"indices {idx} not below cycle length {p}")
    return (j - i) % p


def index_sum(a: "PauliTerm | Sequence[int]", p: int) -> int:
    """Sum of constituent generator indices mod p."""
    return sum(_as_indices(a)) % p


def _as_indices(a) -> tuple[int, ...]:
    if isinstance(a, PauliTerm):
        gs = build_gamma_generators(a.n)
        return gamma_indices(gs, a)
    return tuple(a)


def _subset_products(
    gs: GammaSet, singleton: int, pairs: Sequence[tuple[int, int]]
) -> tuple[PauliTerm, ...]:
    """All products of nonempty subsets of {G_s} u {i G_a G_b}."""
    units = [gs[singleton]]
    for a, b in pairs:
        units.append(gamma_product(gs, [a, b], 1))
    members = []
    for mask in range(1, 1 << len(units)):
        m = identity(gs.n)
        for i, u in enumerate(units):
            if mask >> i & 1:
                m = multiply(m, u)
        members.append(m)
    return tuple(members)


def _push_classes(
    gs: GammaSet, U: np.ndarray, c0: tuple[PauliTerm, ...], singleton: int, L: int,
    spec: CycleSpec,
) -> tuple[CommutingClass, ...]:
    """Generate classes 1..L-1 by repeated conjugation of class 0."""
    classes = [CommutingClass(c0, singleton)]
    cur, cur_single = c0, singleton
    for _ in range(L - 1):
        cur = tuple(conjugate_term(U, m)[0] for m in cur)
        cur_single = spec.shift(cur_single)
        classes.append(CommutingClass(cur, cur_single))
    return tuple(classes)


def build_classes_2n1(n: int) -> Partition:
    """2n+1 classes cycled by the unitary that rotates all 2n+1 generators.

    Class 0 uses singleton G_0 and the mirrored pairs (1,2n), (2,2n-1), ...,
    (n-1,n+2); the middle pair (n,n+1) stays out so the count works out to
    d-1 members.
    """
    L = 2 * n + 1
    if not is_prime(L):
        raise ValueError(f"2n+1 = {L} is not prime")
    gs = build_gamma_generators(n)
    spec = CycleSpec(n, (tuple(range(L)),))
    U = cycle_unitary(gs, spec)
    pairs = [(a, L - a) for a in range(1, n)]
    c0 = _subset_products(gs, 0, pairs)
    classes = _push_classes(gs, U, c0, 0, L, spec)
    return Partition(n, L, spec, classes)


def build_classes_Ln(n: int, L: int) -> Partition:
    """L classes cycled by parallel L-cycles of the ladder generators."""
    if not is_prime(L):
        raise ValueError(f"L = {L} is not prime")
    if n % L:
        raise ValueError(f"L = {L} does not divide n = {n}")
    r = n // L
    gs = build_gamma_generators(n)
    groups = tuple(tuple(range(i * L, (i + 1) * L)) for i in range(2 * r))
    spec = CycleSpec(n, groups)
    U = cycle_unitary(gs, spec)

    if L == 2:
        singleton = 0
        pairs = [(2 * i - 1, 2 * i) for i in range(1, n)]
    else:
        singleton = (L - 1) // 2
        pairs = [(a, L - a) for a in range(1, (L - 1) // 2)]
        for i in range(1, 2 * r):
            pairs += [(i * L + a, i * L + L - a) for a in range(1, (L + 1) // 2)]
        pairs += [((2 * i) * L, (2 * i + 1) * L) for i in range(r)]
    assert len(pairs) == n - 1
    c0 = _subset_products(gs, singleton, pairs)
    classes = _push_classes(gs, U, c0, singleton, L, spec)
    return Partition(n, L, spec, classes)


def fixture_d4(L: int) -> Partition:
    """The two hand-built partitions in dimension 4 (L = 3 or 4), verbatim."""
    if L not in (3, 4):
        raise ValueError(f"fixture exists only for L in {{3, 4}}, got {L}")
    gs = build_gamma_generators(2)

    def cls(singleton, pair1, pair2):
        members = (
            gs[singleton],
            gamma_product(gs, pair1, 1),
            gamma_product(gs, pair2, 1),
        )
        return CommutingClass(members, singleton)

    if L == 3:
        classes = (
            cls(0, [1, 4], [3, 2]),
            cls(1, [2, 4], [3, 0]),
            cls(2, [0, 4], [3, 1]),
        )
        spec = CycleSpec(2, ((0, 1, 2),))
    else:
        classes = (
            cls(0, [1, 4], [2, 3]),
            cls(1, [2, 4], [3, 0]),
            cls(2, [3, 4], [0, 1]),
            cls(3, [0, 4], [1, 2]),
        )
        spec = CycleSpec(2, ((0, 1, 2, 3),))
    return Partition(2, L, spec, classes)


def validate_partition(part: Partition, U: np.ndarray | None = None) -> ValidationReport:
    """Check P1 (commutation), P2 (disjointness) and P3 (cycling) plus
    Hermiticity and the one-singleton-per-class rule. Failures land in the
    report, they do not raise."""
    gs = build_gamma_generators(part.n)
    if U is None:
        U = cycle_unitary(gs, part.spec)
    failures = []

    d = part.d
    p1 = True
    hermitian = True
    singletons = True
    gen_keys = {canonical(g)[0]: i for i, g in enumerate(gs.gammas)}
    for ci, c in enumerate(part.classes):
        if len(c.members) != d - 1:
            singletons = False
            failures.append(f"class {ci} has {len(c.members)} members, want {d - 1}")
        found = [
            gen_keys[canonical(m)[0]]
            for m in c.members
            if canonical(m)[0] in gen_keys
        ]
        if found != [c.singleton_index]:
            singletons = False
            failures.append(
                f"class {ci}: generators {found} found, declared {c.singleton_index}"
            )
        for i, a in enumerate(c.members):
            if not is_hermitian(a):
                hermitian = False
                failures.append(f"class {ci} member {i} is not Hermitian")
            sq = multiply(a, a)
            if sq.xmask or sq.zmask or sq.phase:
                hermitian = False
                failures.append(f"class {ci} member {i} does not square to +I")
            for b in c.members[i + 1 :]:
                if not commutes(a, b):
                    p1 = False
                    failures.append(f"class {ci}: non-commuting pair found")

    p2 = True
    seen: dict[PauliTerm, int] = {}
    for ci, c in enumerate(part.classes):
        for m in c.members:
            key = canonical(m)[0]
            if key in seen:
                p2 = False
                failures.append(f"member shared by classes {seen[key]} and {ci}")
            seen[key] = ci

    p3 = True
    worst = 0.0
    flips = 0
    for ci, c in enumerate(part.classes):
        target = {canonical(m)[0] for m in part.classes[(ci + 1) % part.L].members}
        got = set()
        for m in c.members:
            term, sign = conjugate_term(U, m)
            worst = max(worst, conjugation_residual(U, m, term, sign))
            got.add(term)
            if sign * canonical(m)[1] != 1:
                flips += 1
        if got != target:
            p3 = False
            failures.append(f"class {ci} does not map onto class {(ci + 1) % part.L}")

    return ValidationReport(
        p1=p1,
        p2=p2,
        p3=p3,
        hermitian=hermitian,
        singletons=singletons,
        worst_p3_residual=worst,
        p3_sign_flips=flips,
        failures=tuple(failures),
    )


def partition_to_json(part: Partition) -> str:
    doc = {
        "n": part.n,
        "L": part.L,
        "spec": {"n": part.spec.n, "groups": [list(g) for g in part.spec.groups]},
        "classes": [
            {
                "singleton": c.singleton_index,
                "members": [term_to_text(m) for m in c.members],
            }
            for c in part.classes
        ],
    }
    return json.dumps(doc, indent=1)


def partition_from_json(text: str) -> Partition:
    doc = json.loads(text)
    spec = CycleSpec(doc["spec"]["n"], tuple(tuple(g) for g in doc["spec"]["groups"]))
    classes = tuple(
        CommutingClass(
            tuple(term_from_text(t) for t in c["members"]),
            c["singleton"],
        )
        for c in doc["classes"]
    )
    return Partition(doc["n"], doc["L"], spec, classes)
