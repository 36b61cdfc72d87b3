"""Finite-radius checks of the minimal-growth machinery.

Includes the minimal representation over E_d u {v_d}, the injection
``phi`` that carries standard monoid balls into S-balls, the reduction from
Z^d x F to Z^d, torsion-size surrogates for limsup ratios, rank estimation
and the (Z/2)^(d+3) counterexample.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import intlinalg
from .formulas import beta_standard, beta_standard_plus, standard_generators
from .groups import (
    GeneratingSet,
    GroupElement,
    GroupSpec,
    TorsionGroup,
    Verdict,
    check_generates,
    is_closed_under_inverse,
    torsion_diameter,
)
from .growth import GrowthSeries, ball_index, bfs_growth


class BoundsError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# minimal representations


@dataclass(frozen=True)
class MinimalRep:
    coeffs: tuple[int, ...]
    v_count: int

    @property
    def length(self) -> int:
        return sum(self.coeffs) + self.v_count

    def reconstruct(self) -> tuple[int, ...]:
        return tuple(c - self.v_count for c in self.coeffs)


def minimal_rep(d: int, x: Sequence[int]) -> MinimalRep:
    """Shortest x = sum c_j e_j + t (-1, ..., -1) with c_j, t >= 0."""
    x = tuple(int(a) for a in x)
    if len(x) != d:
        raise ValueError(f"expected a vector of length {d}")
    t = max(0, -min(x)) if d else 0
    return MinimalRep(tuple(a + t for a in x), t)


def min_index(x: Sequence[int]) -> int:
    """m(x): least (0-based) index of a minimal standard coordinate."""
    return min(range(len(x)), key=lambda j: (x[j], j))


# ---------------------------------------------------------------------------
# the injection phi


@dataclass(frozen=True)
class PhiContext:
    S: tuple[tuple[int, ...], ...]
    E_index: tuple[int, ...]
    det: int
    adj: tuple[tuple[int, ...], ...]
    minimizer_index: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.E_index)

    @property
    def E(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.S[i] for i in self.E_index)

    @property
    def minimizers(self) -> tuple[tuple[int, ...], ...]:
        return tuple(self.S[i] for i in self.minimizer_index)

    def coords(self, y: Sequence[int]) -> tuple[Fraction, ...]:
        """Exact coordinates pi_1..pi_d of y in the basis E."""
        return tuple(
            Fraction(sum(a * b for a, b in zip(row, y)), self.det) for row in self.adj
        )

    def scales(self) -> tuple[Fraction, ...]:
        """|pi_j(v'_j)| for every j."""
        return tuple(-self.coords(v)[j] for j, v in enumerate(self.minimizers))

    def rescaled(self, y: Sequence[int]) -> tuple[Fraction, ...]:
        return tuple(c / s for c, s in zip(self.coords(y), self.scales()))

    def M(self, x: Sequence[int]) -> set[int]:
        lo = min(x)
        return {j for j, a in enumerate(x) if a == lo}

    def M_prime(self, y: Sequence[int]) -> set[int]:
        vals = self.rescaled(y)
        lo = min(vals)
        return {j for j, a in enumerate(vals) if a == lo}

    def m(self, x: Sequence[int]) -> int:
        return min(self.M(x))

    def m_prime(self, y: Sequence[int]) -> int:
        return min(self.M_prime(y))


def build_phi(S: GeneratingSet | Sequence[Sequence[int]]) -> PhiContext:
    """Pick E greedily, invert it exactly, choose minimisers with earliest-index ties."""
    if isinstance(S, GeneratingSet):
        if any(g.tor for g in S):
            raise BoundsError("phi is defined for generating sets of Z^d (trivial torsion)")
        vecs = [g.vec for g in S]
    else:
        vecs = [tuple(int(a) for a in v) for v in S]
    vecs = list(dict.fromkeys(tuple(v) for v in vecs))
    if not vecs:
        raise BoundsError("empty generating set")
    d = len(vecs[0])
    picked = intlinalg.independent_prefix(vecs)
    if len(picked) < d:
        raise BoundsError(f"only {len(picked)} independent vectors; S cannot generate Z^{d}")
    E_index = tuple(picked[:d])
    columns = [[vecs[j][i] for j in E_index] for i in range(d)]
    det = intlinalg.determinant(columns)
    adj = intlinalg.adjugate(columns)
    ctx = PhiContext(tuple(vecs), E_index, det, tuple(tuple(r) for r in adj), ())
    minimizers = []
    for j in range(d):
        values = [ctx.coords(v)[j] for v in vecs]
        best = min(range(len(vecs)), key=lambda i: (values[i], i))
        if values[best] >= 0:
            raise BoundsError(f"no generator has negative coordinate {j}; S is not a monoid generating set")
        minimizers.append(best)
    return PhiContext(ctx.S, E_index, det, ctx.adj, tuple(minimizers))


def phi(ctx: PhiContext, x: Sequence[int]) -> tuple[int, ...]:
    """sum_j x'_j e'_j + x' v'_{m(x)}."""
    rep = minimal_rep(ctx.d, x)
    out = [0] * ctx.d
    for c, e in zip(rep.coeffs, ctx.E):
        for i in range(ctx.d):
            out[i] += c * e[i]
    if rep.v_count:
        v = ctx.minimizers[min_index(x)]
        for i in range(ctx.d):
            out[i] += rep.v_count * v[i]
    return tuple(out)


def phi_array(ctx: PhiContext, X: np.ndarray) -> np.ndarray:
    """Vectorised phi on the rows of X."""
    X = np.asarray(X, dtype=np.int64)
    t = np.maximum(0, -X.min(axis=1))
    coeffs = X + t[:, None]
    E = np.array(ctx.E, dtype=np.int64)
    V = np.array(ctx.minimizers, dtype=np.int64)
    return coeffs @ E + t[:, None] * V[np.argmin(X, axis=1)]


def _m_prime_array(ctx: PhiContext, Y: np.ndarray) -> np.ndarray:
    """Vectorised m'(y), exact: rescaled coordinates are brought to a common denominator."""
    adj = np.array(ctx.adj, dtype=np.int64)
    numer = Y @ adj.T  # pi_j(y) * det
    scale_num = [abs(int(np.dot(adj[j], ctx.minimizers[j]))) for j in range(ctx.d)]
    L = math.lcm(*scale_num)
    weights = np.array([L // s for s in scale_num], dtype=np.int64)
    sign = 1 if ctx.det > 0 else -1
    return np.argmin(sign * numer * weights[None, :], axis=1)


def _box(d: int, B: int) -> np.ndarray:
    axes = np.meshgrid(*([np.arange(-B, B + 1)] * d), indexing="ij")
    return np.stack([a.ravel() for a in axes], axis=1).astype(np.int64)


@dataclass
class PhiReport:
    box: int
    radius: int
    collisions: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    containment_violations: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    reconstruction_violations: list[tuple[int, ...]] = field(default_factory=list)
    beta_S: tuple[int, ...] = ()
    beta_plus: tuple[int, ...] = ()

    @property
    def injective(self) -> bool:
        return not self.collisions

    @property
    def dominates(self) -> bool:
        return all(a >= b for a, b in zip(self.beta_S, self.beta_plus))

    @property
    def ok(self) -> bool:
        return (
            self.injective
            and not self.containment_violations
            and not self.reconstruction_violations
            and self.dominates
        )


def verify_phi(ctx: PhiContext, box: int, R: int) -> PhiReport:
    """Injectivity on [-box, box]^d, phi(B+(r)) in B_S(r) for r <= R, and m'(phi(x)) = m(x)."""
    if box < 1 or R < 1:
        raise ValueError("box and radius must be >= 1")
    d = ctx.d
    report = PhiReport(box, R)

    X = _box(d, box)
    Y = phi_array(ctx, X)
    _, first, counts = np.unique(Y, axis=0, return_index=True, return_counts=True)
    if np.any(counts > 1):
        uniq, inverse = np.unique(Y, axis=0, return_inverse=True)
        inverse = inverse.ravel()
        for slot in np.nonzero(counts > 1)[0][:10]:
            rows = np.nonzero(inverse == slot)[0]
            report.collisions.append((tuple(X[rows[0]].tolist()), tuple(X[rows[1]].tolist())))

    outside = np.any(X < 0, axis=1)
    got = _m_prime_array(ctx, Y[outside])
    want = np.argmin(X[outside], axis=1)
    for x in X[outside][got != want][:10]:
        report.reconstruction_violations.append(tuple(x.tolist()))

    spec = GroupSpec(d)
    gens = [GroupElement(v, 0) for v in ctx.S]
    index = ball_index(spec, gens, R)
    Xr = _box(d, R)
    t = np.maximum(0, -Xr.min(axis=1))
    length = (Xr + t[:, None]).sum(axis=1) + t
    Xr, length = Xr[length <= R], length[length <= R]
    dist = index.distances(phi_array(ctx, Xr))
    bad = (dist < 0) | (dist > length)
    for x, L in zip(Xr[bad][:10], length[bad][:10]):
        report.containment_violations.append((tuple(x.tolist()), int(L)))

    sigma = np.bincount(index.dist, minlength=R + 1)
    report.beta_S = tuple(int(b) for b in np.cumsum(sigma))
    report.beta_plus = tuple(beta_standard_plus(d, r) for r in range(R + 1))
    return report


# ---------------------------------------------------------------------------
# growth comparisons


@dataclass
class DominanceReport:
    beta: tuple[int, ...]
    reference: tuple[int, ...]
    start: int = 0

    @property
    def violations(self) -> list[int]:
        return [r for r in range(self.start, len(self.beta)) if self.beta[r] < self.reference[r]]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def strict_from(self) -> int | None:
        return next((r for r in range(self.start, len(self.beta)) if self.beta[r] > self.reference[r]), None)


def symmetric_min_growth(spec: GroupSpec, S: GeneratingSet, R: int) -> DominanceReport:
    """beta_{G,S}(r) >= beta_d(r) for r <= R."""
    if not is_closed_under_inverse(spec, S):
        raise ValueError("symmetric_min_growth needs an inverse-closed set")
    beta = bfs_growth(spec, S, R).beta
    return DominanceReport(beta, tuple(beta_standard(spec.rank, r) for r in range(R + 1)))


def monoid_min_growth(spec: GroupSpec, S: GeneratingSet, R: int) -> DominanceReport:
    """beta_{G,S}(r) >= beta+_d(r) for r <= R."""
    beta = bfs_growth(spec, S, R).beta
    return DominanceReport(beta, tuple(beta_standard_plus(spec.rank, r) for r in range(R + 1)))


def project(spec: GroupSpec, S: GeneratingSet | Sequence[GroupElement]) -> tuple[GroupSpec, list[GroupElement]]:
    """pi(S) in Z^d, deduplicated in first-seen order."""
    vecs = list(dict.fromkeys(g.vec for g in S))
    return GroupSpec(spec.rank), [GroupElement(v, 0) for v in vecs]


def reduction_inequality(spec: GroupSpec, S: GeneratingSet, R_max: int) -> DominanceReport:
    """beta_{G,S}(r) >= |F| beta_{Z^d, pi(S)}(r - R) for R <= r <= R_max, R = diam F."""
    if spec.rank < 1:
        raise ValueError("reduction needs rank >= 1")
    R = torsion_diameter(spec, S)
    beta = bfs_growth(spec, S, R_max).beta
    free, proj = project(spec, S)
    n = spec.torsion.order
    ref = [0] * (R_max + 1)
    if R <= R_max:
        low = bfs_growth(free, proj, R_max - R).beta
        for r in range(R, R_max + 1):
            ref[r] = n * low[r - R]
    return DominanceReport(beta, tuple(ref), start=R)


def min_growth_chain(spec: GroupSpec, S: GeneratingSet, R_max: int) -> DominanceReport:
    """beta_{G,S}(r) >= |F| beta_d(r - R) (beta+_d for non-symmetric S) for R <= r <= R_max."""
    R = torsion_diameter(spec, S)
    plus = not is_closed_under_inverse(spec, S)
    std = beta_standard_plus if plus else beta_standard
    beta = bfs_growth(spec, S, R_max).beta
    n = spec.torsion.order
    ref = tuple(n * std(spec.rank, r - R) if r >= R else 0 for r in range(R_max + 1))
    return DominanceReport(beta, ref, start=min(R, R_max + 1))


@dataclass(frozen=True)
class TorsionBound:
    ratios: tuple[Fraction, ...]
    window: tuple[int, int]
    max_ratio: Fraction
    argmax: int
    note: str = "finite-radius surrogate for a limsup"

    @property
    def candidate(self) -> int:
        return math.floor(self.max_ratio)


def torsion_upper_bound(
    beta: GrowthSeries | Sequence[int],
    d: int,
    window: tuple[int, int],
    mode: str = "monoid",
) -> TorsionBound:
    """Window maximum of beta(r) / beta+_d(r) (or beta_d(r) in symmetric mode), exactly."""
    values = beta.beta if isinstance(beta, GrowthSeries) else tuple(beta)
    lo, hi = window
    if d < 1:
        raise ValueError("rank must be >= 1")
    if lo > hi:
        raise ValueError("empty window")
    if hi >= len(values):
        raise ValueError(f"window end {hi} beyond computed radius {len(values) - 1}")
    std = beta_standard_plus if mode == "monoid" else beta_standard
    ratios = tuple(Fraction(values[r], std(d, r)) for r in range(lo, hi + 1))
    best = max(range(len(ratios)), key=lambda i: (ratios[i], -i))
    return TorsionBound(ratios, (lo, hi), ratios[best], lo + best)


@dataclass(frozen=True)
class RankEstimate:
    degree: int
    slope: float
    residual: float


def rank_estimate(beta: GrowthSeries | Sequence[int], window: tuple[int, int]) -> RankEstimate:
    """Least-squares slope of log beta(r) against log r over the window."""
    values = beta.beta if isinstance(beta, GrowthSeries) else tuple(beta)
    lo, hi = window
    if lo < 2 or hi <= lo:
        raise ValueError("window must satisfy 2 <= lo < hi")
    if hi >= len(values):
        raise ValueError(f"window end {hi} beyond computed radius {len(values) - 1}")
    r = np.arange(lo, hi + 1, dtype=float)
    y = np.log(np.array(values[lo : hi + 1], dtype=float))
    (slope, intercept), res, *_ = np.polyfit(np.log(r), y, 1, full=True)
    rms = float(np.sqrt(res[0] / r.size)) if res.size else 0.0
    return RankEstimate(int(round(slope)), float(slope), rms)


def limsup_window_check(beta: Sequence[int], R: int, start: int = 100, width: int = 100, tol: float = 0.05) -> bool:
    """In every window [a, a+width) beyond ``start`` some beta(r-R)/beta(r) exceeds 1 - tol."""
    for a in range(start, len(beta) - width + 1, width):
        if not any(beta[r - R] / beta[r] > 1 - tol for r in range(a, a + width)):
            return False
    return True


# ---------------------------------------------------------------------------
# the (Z/2)^(d+3) counterexample


@dataclass
class ConverseReport:
    d: int
    torsion_order: int
    beta_G_1: int
    stated_set_verdict: Verdict
    monoid_set_beta_1: int | None
    monoid_set_verdict: Verdict | None
    torsion_generators_needed: int
    group_generators_needed: int
    tight_set_size: int
    tight_set_verdict: Verdict
    tight_beta_1: int

    @property
    def ok(self) -> bool:
        return (
            self.beta_G_1 == self.d + 3
            and self.torsion_generators_needed > self.d + 2
            and self.tight_beta_1 > self.d + 3
        )


def converse_counterexample(d: int) -> ConverseReport:
    """G = Z^d x Z/2^(d+3) versus G' = Z^d x (Z/2)^(d+3).

    Equal rank and torsion size, yet beta_{G,S}(1) = d + 3 while every
    generating set of G' has more than d + 2 non-identity elements: its
    torsion projection must span F' over the two-element field.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    n = 2 ** (d + 3)
    G = GroupSpec(d, TorsionGroup.cyclic(n))
    basis = standard_generators(d)[:d]
    zero = (0,) * d
    stated = [GroupElement(e, 0) for e in basis] + [GroupElement(zero, 1), GroupElement(zero, n - 1)]
    beta_G_1 = bfs_growth(G, stated, 1).beta[1]
    stated_verdict = check_generates(G, stated)

    monoid_beta = monoid_verdict = None
    if d:
        monoid_set = [GroupElement(v, 0) for v in standard_generators(d, plus=True)] + [GroupElement(zero, 1)]
        monoid_beta = bfs_growth(G, monoid_set, 1).beta[1]
        monoid_verdict = check_generates(G, monoid_set, cap=2 * n)

    Fp = TorsionGroup.abelian([2] * (d + 3))
    Gp = GroupSpec(d, Fp)
    torsion_rank = intlinalg.gf2_rank([Fp.coords(f) for f in range(Fp.order)])
    # G'/2G' = (Z/2)^d x F'/2F'
    group_rank = d + torsion_rank

    # a monoid generating set of G' with exactly group_rank elements
    unit = [Fp.index_of([int(i == j) for j in range(d + 3)]) for i in range(d + 3)]
    tight = [GroupElement(e, 0) for e in basis]
    if d:
        tight.append(GroupElement(tuple([-1] * d), unit[0]))
        tight += [GroupElement(zero, u) for u in unit[1:]]
    else:
        tight += [GroupElement(zero, u) for u in unit]
    tight_verdict = check_generates(Gp, tight)
    tight_beta_1 = bfs_growth(Gp, tight, 1).beta[1]

    return ConverseReport(
        d=d,
        torsion_order=n,
        beta_G_1=beta_G_1,
        stated_set_verdict=stated_verdict,
        monoid_set_beta_1=monoid_beta,
        monoid_set_verdict=monoid_verdict,
        torsion_generators_needed=torsion_rank,
        group_generators_needed=group_rank,
        tight_set_size=len(tight),
        tight_set_verdict=tight_verdict,
        tight_beta_1=tight_beta_1,
    )
