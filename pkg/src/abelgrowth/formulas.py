"""Closed-form growth families and standard growth functions.

Everything here is exact integer arithmetic and is meant to be checked
against the BFS engine, never the other way round.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Literal

from .groups import GeneratingSet, GroupElement, GroupSpec, involution_diameter, order_le2_census
from .growth import GrowthSeries

Family = Literal["even", "odd", "monoid"]


@dataclass(frozen=True)
class FamilyParams:
    torsion_order: int
    k: int
    family: Family

    def __post_init__(self):
        if self.torsion_order < 1:
            raise ValueError("torsion_order must be >= 1")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.family not in ("even", "odd", "monoid"):
            raise ValueError(f"unknown family {self.family!r}")


def _expect(p: FamilyParams, family: str) -> None:
    if p.family != family:
        raise ValueError(f"expected a {family} family, got {p.family}")


def sigma_even(p: FamilyParams, r: int) -> int:
    """Spheres of ({0} x F) u ({-k..k} x {e}) in Z x F."""
    _expect(p, "even")
    f, k = p.torsion_order, p.k
    if r == 0:
        return 1
    if r == 1:
        return f - 1 + 2 * k
    return 2 * k * f


def sigma_odd(p: FamilyParams, r: int) -> int:
    """Spheres of ({0} x F) u ({2j+1 : -k <= j < k} x {e}) in Z x F."""
    _expect(p, "odd")
    f, k = p.torsion_order, p.k
    if r == 0:
        return 1
    if r == 1:
        return f + 2 * k - 1
    if r == 2:
        return f * (2 * k - 1) + f + 2 * k - 2
    return 2 * f * (2 * k - 1)


def sigma_monoid(p: FamilyParams, r: int) -> int:
    """Spheres of {(-1, e)} u ({0..k-1} x F) in Z x F."""
    _expect(p, "monoid")
    return 1 if r == 0 else p.torsion_order * p.k


def monoid_ball_shape(spec: GroupSpec, k: int, r: int) -> set[GroupElement]:
    """Predicted ball {(-r, e)} u ({-(r-1), ..., r(k-1)} x F) of the monoid family (r >= 1)."""
    if spec.rank != 1:
        raise ValueError("the monoid family lives in Z x F")
    if r == 0:
        return {spec.identity}
    ball = {GroupElement((-r,), 0)}
    for x in range(-(r - 1), r * (k - 1) + 1):
        for f in range(spec.torsion.order):
            ball.add(GroupElement((x,), f))
    return ball


_SIGMA = {"even": sigma_even, "odd": sigma_odd, "monoid": sigma_monoid}


def family_series(p: FamilyParams, R: int) -> GrowthSeries:
    fn = _SIGMA[p.family]
    return GrowthSeries(tuple(fn(p, r) for r in range(R + 1)), f"closed-form-{p.family}")


def family_generators(spec: GroupSpec, p: FamilyParams) -> list[GroupElement]:
    """The generating list of the family on Z x F (F = spec.torsion)."""
    if spec.rank != 1 or spec.torsion.order != p.torsion_order:
        raise ValueError("family parameters do not match the group")
    n = spec.torsion.order
    torsion = [GroupElement((0,), f) for f in range(n)]
    if p.family == "even":
        return torsion + [GroupElement((x,), 0) for x in range(-p.k, p.k + 1)]
    if p.family == "odd":
        return torsion + [GroupElement((2 * j + 1,), 0) for j in range(-p.k, p.k)]
    return [GroupElement((-1,), 0)] + [GroupElement((x,), f) for x in range(p.k) for f in range(n)]


def convolve_sigma(a: GrowthSeries, b: GrowthSeries, R: int) -> GrowthSeries:
    """Spheres of (S1 x {e}) u ({e} x S2) in G1 x G2: sigma(r) = sum_{r1+r2=r} a(r1) b(r2)."""
    if R > a.max_radius or R > b.max_radius:
        raise ValueError(f"inputs computed to {a.max_radius}, {b.max_radius}; need {R}")
    sigma = tuple(sum(a.sigma[i] * b.sigma[r - i] for i in range(r + 1)) for r in range(R + 1))
    return GrowthSeries(sigma, "convolution")


def triangular_double_sum(a: GrowthSeries, b: GrowthSeries, r: int) -> int:
    """sum_{r1=0}^{r} sum_{r2=0}^{r-r1} a(r1) b(r2).

    This counts pairs with r1 + r2 <= r, i.e. the *ball* of the product,
    not its sphere; kept to document that distinction.
    """
    return sum(a.sigma[r1] * b.sigma[r2] for r1 in range(r + 1) for r2 in range(r - r1 + 1))


def beta_standard(d: int, r: int) -> int:
    """|{x in Z^d : |x|_1 <= r}| = sum_i 2^i C(d, i) C(r, i)."""
    if d < 0 or r < 0:
        raise ValueError("d and r must be >= 0")
    return sum(2**i * comb(d, i) * comb(r, i) for i in range(min(d, r) + 1))


@lru_cache(maxsize=None)
def beta_standard_plus(d: int, r: int) -> int:
    """Ball size of Z^d for E_d u {(-1,...,-1)}.

    Counts minimal representations x = sum x'_j e_j + t v with t = max(0, -min x):
    for t = 0 all x' in N^d with sum <= r, for t > 0 those with some x'_j = 0
    and sum <= r - t.
    """
    if d < 0 or r < 0:
        raise ValueError("d and r must be >= 0")
    if d == 0:
        return 1
    total = comb(r + d, d)
    for t in range(1, r + 1):
        m = r - t
        total += comb(m + d, d) - comb(m, d)
    return total


def standard_series(d: int, R: int, plus: bool = False) -> GrowthSeries:
    fn = beta_standard_plus if plus else beta_standard
    return GrowthSeries.from_beta([fn(d, r) for r in range(R + 1)], "closed-form-standard")


def standard_generators(d: int, plus: bool = False) -> list[tuple[int, ...]]:
    """E_d u (-E_d), or E_d u {v_d} when ``plus``."""
    basis = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    if plus:
        return basis + ([tuple([-1] * d)] if d else [])
    return basis + [tuple(-x for x in e) for e in basis]


def parity_prediction(spec: GroupSpec, S: GeneratingSet) -> tuple[int, int]:
    """(|I| mod 2, diam I): beta(r) has that residue for every r above the threshold."""
    if S.kind != "symmetric":
        raise ValueError("parity prediction needs a symmetric generating set")
    return order_le2_census(spec) % 2, involution_diameter(spec, S)
