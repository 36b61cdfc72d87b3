"""Exact layered BFS over the directed Cayley graph of Z^d x F.

Elements are packed into int64 keys: the lattice part is an offset
mixed-radix code over the box that a ball of the requested radius can
reach, the torsion index is the least significant digit.  Right
multiplication by a generator is then "add a constant to the lattice
code, look up the torsion digit in the table", which vectorises.

Two seen-set strategies produce identical layers:

* dense: a boolean bitmap over the whole box (used when it fits the budget);
* sparse: sorted key arrays.  For inverse-closed generator lists the graph is
  undirected and only the two previous layers are needed; otherwise the full
  seen array is kept.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .groups import (
    GeneratingSet,
    GroupElement,
    GroupError,
    GroupSpec,
    is_closed_under_inverse,
)

PROVENANCES = (
    "bfs",
    "closed-form-even",
    "closed-form-odd",
    "closed-form-monoid",
    "closed-form-standard",
    "convolution",
)


class ResourceCapExceeded(RuntimeError):
    def __init__(self, message: str, radius_reached: int):
        super().__init__(f"{message} (completed radius {radius_reached})")
        self.radius_reached = radius_reached


def default_mem_cap() -> int:
    return int(os.environ.get("ABELGROWTH_MEM_CAP", 2 * 1024**3))


def default_coord_bits() -> int:
    return int(os.environ.get("ABELGROWTH_COORD_BITS", 63))


# ---------------------------------------------------------------------------
# growth series


@dataclass(frozen=True)
class GrowthSeries:
    sigma: tuple[int, ...]
    provenance: str = "bfs"
    beta: tuple[int, ...] = field(default=())

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        if not sigma or sigma[0] != 1:
            raise ValueError("sigma must start with 1")
        if any(x < 0 for x in sigma):
            raise ValueError("sigma entries must be non-negative")
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        beta = tuple(itertools.accumulate(sigma))
        if self.beta and tuple(self.beta) != beta:
            raise ValueError("beta is not the running sum of sigma")
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_beta(cls, beta: Sequence[int], provenance: str = "bfs") -> "GrowthSeries":
        sigma = [int(beta[0])] + [int(b) - int(a) for a, b in zip(beta, beta[1:])]
        return cls(tuple(sigma), provenance)

    @property
    def max_radius(self) -> int:
        return len(self.sigma) - 1

    def truncate(self, radius: int) -> "GrowthSeries":
        if radius > self.max_radius:
            raise ValueError(f"series only computed to radius {self.max_radius}")
        return GrowthSeries(self.sigma[: radius + 1], self.provenance)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "sigma", "beta"])
        for r, (s, b) in enumerate(zip(self.sigma, self.beta)):
            w.writerow([r, s, b])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "provenance": self.provenance,
            "max_radius": self.max_radius,
            "sigma": list(self.sigma),
            "beta": list(self.beta),
        }

    def to_json(self, **metadata) -> str:
        doc = self.to_dict()
        doc.update(metadata)
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "GrowthSeries":
        return cls(tuple(doc["sigma"]), doc.get("provenance", "bfs"), tuple(doc.get("beta", ())))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(self.to_dict(), sort_keys=True).encode()).hexdigest()


@dataclass(frozen=True)
class Comparison:
    equal: bool
    upto: int
    first_disagreement: int | None = None
    left: int | None = None
    right: int | None = None

    def __str__(self) -> str:
        if self.equal:
            return f"equal up to {self.upto}"
        return f"first disagreement at r={self.first_disagreement} ({self.left} vs {self.right})"


def series_equal(a: GrowthSeries, b: GrowthSeries, upto: int) -> Comparison:
    if upto > a.max_radius or upto > b.max_radius:
        raise ValueError(f"radius {upto} beyond computed range ({a.max_radius}, {b.max_radius})")
    for r in range(upto + 1):
        if a.beta[r] != b.beta[r]:
            return Comparison(False, upto, r, a.beta[r], b.beta[r])
    return Comparison(True, upto)


# ---------------------------------------------------------------------------
# key packing


class _Codec:
    def __init__(self, spec: GroupSpec, gens: Sequence[GroupElement], radius: int, coord_bits: int):
        d = spec.rank
        self.spec = spec
        self.n = spec.torsion.order
        lo, hi = [], []
        for i in range(d):
            comps = [g.vec[i] for g in gens]
            lo.append(radius * min(0, min(comps)))
            hi.append(radius * max(0, max(comps)))
        limit = 2**coord_bits - 1
        if any(max(-a, b) > limit for a, b in zip(lo, hi)):
            raise OverflowError(f"coordinates at radius {radius} exceed {coord_bits} bits")
        widths = [b - a + 1 for a, b in zip(lo, hi)]
        strides = [1] * d
        for i in range(d - 2, -1, -1):
            strides[i] = strides[i + 1] * widths[i + 1]
        self.size = math.prod(widths) * self.n
        if self.size >= 2**63:
            raise OverflowError(f"ball of radius {radius} does not fit 64-bit keys")
        self.lo, self.hi, self.widths, self.strides = lo, hi, widths, strides
        self.origin = sum(-a * s for a, s in zip(lo, strides))
        self.deltas = np.array([sum(x * s for x, s in zip(g.vec, strides)) for g in gens], dtype=np.int64)
        self.gen_tors = np.array([g.tor for g in gens], dtype=np.int64)

    def encode(self, g: GroupElement) -> int | None:
        if any(not a <= x <= b for x, a, b in zip(g.vec, self.lo, self.hi)):
            return None
        code = sum((x - a) * s for x, a, s in zip(g.vec, self.lo, self.strides))
        return code * self.n + g.tor

    def decode(self, keys: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Keys -> (vectors of shape (k, d), torsion indices)."""
        code, tor = np.divmod(keys, self.n)
        vecs = np.empty((keys.size, len(self.lo)), dtype=np.int64)
        for i, (a, s, w) in enumerate(zip(self.lo, self.strides, self.widths)):
            vecs[:, i] = (code // s) % w + a
        return vecs, tor

    def neighbours(self, keys: np.ndarray) -> np.ndarray:
        if self.n == 1:
            return (keys[:, None] + self.deltas[None, :]).ravel()
        code, tor = np.divmod(keys, self.n)
        new_tor = self.spec.torsion.table[tor[:, None], self.gen_tors[None, :]]
        return ((code[:, None] + self.deltas[None, :]) * self.n + new_tor).ravel()


def _in_sorted(values: np.ndarray, sorted_ref: np.ndarray) -> np.ndarray:
    if sorted_ref.size == 0:
        return np.zeros(values.shape, dtype=bool)
    idx = np.searchsorted(sorted_ref, values)
    idx[idx == sorted_ref.size] = 0
    return sorted_ref[idx] == values


def _generators(S: GeneratingSet | Sequence[GroupElement]) -> list[GroupElement]:
    gens = list(S.elements) if isinstance(S, GeneratingSet) else list(S)
    if not gens:
        raise GroupError("empty generating set")
    return gens


def iter_layers(
    spec: GroupSpec,
    S: GeneratingSet | Sequence[GroupElement],
    radius: int,
    *,
    mem_cap: int | None = None,
    coord_bits: int | None = None,
    strategy: str = "auto",
) -> Iterator[tuple[_Codec, np.ndarray]]:
    """Yield (codec, sorted keys of the sphere of radius r) for r = 0..radius."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    gens = _generators(S)
    for g in gens:
        spec.check(g)
    mem_cap = default_mem_cap() if mem_cap is None else mem_cap
    coord_bits = default_coord_bits() if coord_bits is None else coord_bits
    codec = _Codec(spec, gens, radius, coord_bits)
    if strategy == "auto":
        strategy = "dense" if codec.size <= mem_cap // 2 else "sparse"
    start = np.array([codec.origin * codec.n], dtype=np.int64)
    frontier = start
    yield codec, frontier

    if strategy == "dense":
        seen = np.zeros(codec.size, dtype=bool)
        seen[start] = True
        for r in range(1, radius + 1):
            cand = codec.neighbours(frontier)
            if cand.nbytes > mem_cap // 2:
                raise ResourceCapExceeded("frontier expansion exceeds memory cap", r - 1)
            frontier = np.unique(cand[~seen[cand]])
            seen[frontier] = True
            yield codec, frontier
        return

    undirected = is_closed_under_inverse(spec, gens)
    previous = np.empty(0, dtype=np.int64)
    seen = start
    for r in range(1, radius + 1):
        cand = np.unique(codec.neighbours(frontier))
        if undirected:
            new = cand[~(_in_sorted(cand, frontier) | _in_sorted(cand, previous))]
            previous = frontier
            held = previous.nbytes + new.nbytes + cand.nbytes
        else:
            new = cand[~_in_sorted(cand, seen)]
            seen = np.sort(np.concatenate([seen, new]), kind="stable")
            held = seen.nbytes + cand.nbytes
        if held > mem_cap:
            raise ResourceCapExceeded("seen-set exceeds memory cap", r - 1)
        frontier = new
        yield codec, frontier


@dataclass(frozen=True)
class BallSnapshot:
    radius: int
    members: dict[GroupElement, int]

    def within(self, r: int) -> set[GroupElement]:
        return {g for g, t in self.members.items() if t <= r}


class BallIndex:
    """Sorted keys of a ball with their exact distances; vectorised lookup."""

    def __init__(self, codec: _Codec, layers: list[np.ndarray]):
        self.codec = codec
        self.radius = len(layers) - 1
        keys = np.concatenate(layers)
        dist = np.concatenate([np.full(L.size, r, dtype=np.int32) for r, L in enumerate(layers)])
        order = np.argsort(keys, kind="stable")
        self.keys = keys[order]
        self.dist = dist[order]

    def __len__(self) -> int:
        return int(self.keys.size)

    def distance(self, g: GroupElement) -> int | None:
        key = self.codec.encode(g)
        if key is None:
            return None
        i = int(np.searchsorted(self.keys, key))
        if i < self.keys.size and self.keys[i] == key:
            return int(self.dist[i])
        return None

    def distances(self, vecs: np.ndarray, tors: np.ndarray | None = None) -> np.ndarray:
        """Distances for many elements at once; -1 marks 'outside the ball'."""
        vecs = np.asarray(vecs, dtype=np.int64).reshape(-1, len(self.codec.lo))
        tors = np.zeros(vecs.shape[0], dtype=np.int64) if tors is None else np.asarray(tors, dtype=np.int64)
        lo = np.array(self.codec.lo, dtype=np.int64)
        hi = np.array(self.codec.hi, dtype=np.int64)
        inside = np.all((vecs >= lo) & (vecs <= hi), axis=1)
        strides = np.array(self.codec.strides, dtype=np.int64)
        keys = ((vecs - lo) @ strides) * self.codec.n + tors
        out = np.full(vecs.shape[0], -1, dtype=np.int64)
        found = inside & _in_sorted(keys, self.keys)
        idx = np.searchsorted(self.keys, keys[found])
        out[found] = self.dist[idx]
        return out

    def snapshot(self) -> BallSnapshot:
        vecs, tors = self.codec.decode(self.keys)
        members = {
            GroupElement(tuple(int(x) for x in v), int(t)): int(r)
            for v, t, r in zip(vecs, tors, self.dist)
        }
        return BallSnapshot(self.radius, members)


def ball_index(spec: GroupSpec, S: GeneratingSet | Sequence[GroupElement], radius: int, **kw) -> BallIndex:
    layers = []
    codec = None
    for codec, layer in iter_layers(spec, S, radius, **kw):
        layers.append(layer)
    return BallIndex(codec, layers)


def bfs_growth(
    spec: GroupSpec,
    S: GeneratingSet | Sequence[GroupElement],
    R: int,
    keep_ball: bool = False,
    **kw,
) -> GrowthSeries | tuple[GrowthSeries, BallSnapshot]:
    """Sphere sizes sigma(0..R) of the word metric d_S(., e), by exact layered BFS.

    Layer r+1 is layer r multiplied on the right by every generator, minus
    everything already seen; inverses are never added.
    """
    if keep_ball:
        idx = ball_index(spec, S, R, **kw)
        sigma = np.bincount(idx.dist, minlength=R + 1)
        return GrowthSeries(tuple(int(x) for x in sigma), "bfs"), idx.snapshot()
    sigma = [int(layer.size) for _, layer in iter_layers(spec, S, R, **kw)]
    return GrowthSeries(tuple(sigma), "bfs")


def distances_to(
    spec: GroupSpec,
    S: GeneratingSet | Sequence[GroupElement],
    targets: Sequence[GroupElement],
    cap: int,
    **kw,
) -> list[int | None]:
    """Exact d_S(t, e) for each target, or None when larger than ``cap``."""
    found: list[int | None] = [None] * len(targets)
    keys = None
    remaining = len(targets)
    for r, (codec, layer) in enumerate(iter_layers(spec, S, cap, **kw)):
        if keys is None:
            keys = [codec.encode(t) for t in targets]
        hits = _in_sorted(np.array([k if k is not None else -1 for k in keys], dtype=np.int64), layer)
        for i, hit in enumerate(hits):
            if hit and found[i] is None:
                found[i] = r
                remaining -= 1
        if remaining == 0:
            break
    return found


def distances_unbounded(
    spec: GroupSpec,
    S: Sequence[GroupElement],
    targets: Sequence[GroupElement],
    *,
    start_cap: int = 8,
    max_cap: int = 1 << 12,
) -> list[int]:
    """Like distances_to, doubling the cap until every target is reached."""
    cap = start_cap
    while True:
        dist = distances_to(spec, S, targets, cap)
        if all(x is not None for x in dist):
            return dist  # type: ignore[return-value]
        if cap >= max_cap:
            raise ResourceCapExceeded(f"targets not reached within radius {max_cap}", cap)
        cap = min(2 * cap, max_cap)


def word_distance(spec: GroupSpec, S, g: GroupElement, cap: int) -> int | None:
    if cap < 0:
        raise ValueError("cap must be >= 0")
    spec.check(g)
    return distances_to(spec, S, [g], cap)[0]


def change_constant(spec: GroupSpec, S: GeneratingSet, T: GeneratingSet) -> int:
    """Rewriting constant C with d_S <= C d_T and d_T <= C d_S."""
    c_t = distances_unbounded(spec, list(T), list(S))
    c_s = distances_unbounded(spec, list(S), list(T))
    return max(1, *c_t, *c_s)
