"""Explicit generating sets on Z^d x F1 and Z^d x F2 with identical growth."""

from __future__ import annotations

import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, replace
from typing import Literal, Sequence

from .formulas import FamilyParams, convolve_sigma, family_generators, family_series, standard_generators, standard_series
from .groups import (
    GeneratingSet,
    GroupElement,
    GroupSpec,
    TorsionGroup,
    Verdict,
    check_generates,
)
from .growth import GrowthSeries

Regime = Literal["symmetric-even", "symmetric-odd", "monoid"]


class ParityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Witness:
    """A group with one of the constructed generating sets and its generation verdict."""

    spec: GroupSpec
    gens: GeneratingSet
    verdict: Verdict


@dataclass(frozen=True)
class WitnessPair:
    left: Witness
    right: Witness
    regime: Regime
    predicted_sigma: GrowthSeries

    @property
    def members(self) -> list[Witness]:
        return [self.left, self.right]


@dataclass(frozen=True)
class MonoidWitness:
    members: list[Witness]
    K: int
    predicted_sigma: GrowthSeries
    regime: Regime = "monoid"


def _witness(spec: GroupSpec, elements: list[GroupElement], kind: str) -> Witness:
    gens = GeneratingSet.build(spec, elements, kind, validate=False)
    return Witness(spec, gens, check_generates(spec, list(gens), cap=16))


def witness_symmetric(F1: TorsionGroup, F2: TorsionGroup, d: int = 1, radius: int = 50) -> WitnessPair:
    """Symmetric sets with equal spheres on Z^d x F1 and Z^d x F2 (orders of equal parity)."""
    if d < 1:
        raise ValueError("rank must be >= 1")
    n1, n2 = F1.order, F2.order
    if n1 % 2 != n2 % 2:
        raise ParityMismatch(f"torsion orders {n1} and {n2} have different parity")
    if n1 % 2 == 0:
        family, regime = "even", "symmetric-even"
        k1, k2 = n1 // 2, n2 // 2
    else:
        family, regime = "odd", "symmetric-odd"
        k1, k2 = (n1 + 1) // 2, (n2 + 1) // 2
    # each side takes the other side's k
    p1 = FamilyParams(n1, k2, family)
    p2 = FamilyParams(n2, k1, family)
    g1, g2 = GroupSpec(1, F1), GroupSpec(1, F2)
    left = _witness(g1, family_generators(g1, p1), "symmetric")
    right = _witness(g2, family_generators(g2, p2), "symmetric")
    pair = WitnessPair(left, right, regime, family_series(p1, radius))
    return extend_rank(pair, d - 1)


def auto_common_multiple(orders: Sequence[int]) -> int:
    """Least common multiple K of the orders, doubled if some K/|F_j| would be 1.

    With K/|F_j| = 1 the family set {(-1,e)} u ({0} x F_j) only reaches
    non-positive lattice coordinates, so it does not generate as a monoid.
    """
    K = math.lcm(*orders)
    if any(K // n < 2 for n in orders):
        K *= 2
    return K


def witness_monoid(
    torsions: Sequence[TorsionGroup],
    d: int = 1,
    K: int | None = None,
    radius: int = 50,
) -> MonoidWitness:
    """Sets {(-1,e)} u ({0..K/|F_j|-1} x F_j), all with spheres [1, K, K, ...]."""
    if d < 1:
        raise ValueError("rank must be >= 1")
    if not torsions:
        raise ValueError("need at least one torsion group")
    orders = [F.order for F in torsions]
    if K is None:
        K = auto_common_multiple(orders)
    if K < 1 or any(K % n for n in orders):
        raise ValueError(f"K={K} is not a common multiple of {orders}")
    members = []
    for F in torsions:
        spec = GroupSpec(1, F)
        p = FamilyParams(F.order, K // F.order, "monoid")
        w = _witness(spec, family_generators(spec, p), "monoid")
        if not w.verdict.generates:
            warnings.warn(
                f"monoid set for {F.name} with K={K} does not generate: {w.verdict.reason}",
                stacklevel=2,
            )
        members.append(w)
    predicted = GrowthSeries((1,) + (K,) * radius, "closed-form-monoid")
    return extend_rank(MonoidWitness(members, K, predicted), d - 1)


def _extend_one(w: Witness, extra: int, plus: bool) -> Witness:
    spec = GroupSpec(w.spec.rank + extra, w.spec.torsion)
    pad = (0,) * extra
    elements = [GroupElement(g.vec + pad, g.tor) for g in w.gens]
    for v in standard_generators(extra, plus=plus):
        elements.append(GroupElement((0,) * w.spec.rank + v, 0))
    return _witness(spec, elements, w.gens.kind)


def extend_rank(witness: WitnessPair | MonoidWitness, extra: int):
    """Append Z^extra with its standard set (E u -E, or E u {v} for monoid sets)."""
    if extra < 0:
        raise ValueError("extra must be >= 0")
    if extra == 0:
        return witness
    plus = witness.regime == "monoid"
    R = witness.predicted_sigma.max_radius
    predicted = convolve_sigma(witness.predicted_sigma, standard_series(extra, R, plus=plus), R)
    if isinstance(witness, WitnessPair):
        return WitnessPair(
            _extend_one(witness.left, extra, plus),
            _extend_one(witness.right, extra, plus),
            witness.regime,
            predicted,
        )
    return replace(
        witness,
        members=[_extend_one(w, extra, plus) for w in witness.members],
        predicted_sigma=predicted,
    )


@dataclass(frozen=True)
class DiophantineReport:
    bound: int
    solutions: int
    nontrivial: list[tuple[int, int, int, int]]
    literal_exceptions: int

    @property
    def ok(self) -> bool:
        return not self.nontrivial


def diophantine_solutions(bound: int) -> list[tuple[int, int, int, int]]:
    """All (x1, y1, x2, y2) in [0, bound]^4 with equal sums and equal products."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    groups: dict[tuple[int, int], list[tuple[int, int]]] = defaultdict(list)
    for x in range(bound + 1):
        for y in range(bound + 1):
            groups[(x + y, x * y)].append((x, y))
    return [a + b for pairs in groups.values() for a in pairs for b in pairs]


def diophantine_uniqueness(bound: int) -> DiophantineReport:
    """Every solution of x1+y1 = x2+y2, x1*y1 = x2*y2 has {x1, y1} = {x2, y2}.

    ``literal_exceptions`` counts solutions matching neither
    (x1=x2 and y1=y2) nor (x1=y1 and x2=y2), i.e. the plain swaps.
    """
    sols = diophantine_solutions(bound)
    nontrivial = [s for s in sols if sorted(s[:2]) != sorted(s[2:])]
    literal = sum(
        1 for x1, y1, x2, y2 in sols if not ((x1 == x2 and y1 == y2) or (x1 == y1 and x2 == y2))
    )
    return DiophantineReport(bound, len(sols), nontrivial, literal)
