"""Groups of the form Z^d x F, their elements and generating sets.

The finite factor F is always materialised as a multiplication table with
the identity at index 0, so every downstream computation is exact table
lookup.  Abelian groups given by invariant factors are expanded to such a
table with mixed-radix indexing (last factor varies fastest).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from . import intlinalg

DEFAULT_ORDER_CAP = 4096
COORD_LIMIT = 2**63 - 1

Kind = Literal["symmetric", "monoid"]
KINDS = ("symmetric", "monoid")


class GroupError(ValueError):
    """Invalid group data (bad table, bad element, bad generating set)."""


class NotGeneratingError(GroupError):
    def __init__(self, verdict: "Verdict"):
        super().__init__(f"elements do not generate the group: {verdict.reason}")
        self.verdict = verdict


class TorsionGroup:
    """A finite group F stored as a validated multiplication table."""

    def __init__(
        self,
        table: Sequence[Sequence[int]] | np.ndarray,
        *,
        invariants: Sequence[int] | None = None,
        name: str | None = None,
        order_cap: int = DEFAULT_ORDER_CAP,
        check: bool = True,
    ):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError("multiplication table must be a non-empty square array")
        n = t.shape[0]
        if n > order_cap:
            raise GroupError(f"torsion order {n} exceeds cap {order_cap}")
        if check:
            _check_table(t, associativity=invariants is None)
        inverse = np.empty(n, dtype=np.int64)
        rows, cols = np.nonzero(t == 0)
        inverse[rows] = cols
        t.setflags(write=False)
        inverse.setflags(write=False)
        self.table = t
        self.inverse = inverse
        self.invariants = tuple(int(x) for x in invariants) if invariants is not None else None
        self.name = name or (
            _invariants_name(self.invariants) if self.invariants is not None else f"F{n}"
        )

    # constructors -----------------------------------------------------

    @classmethod
    def abelian(cls, factors: Sequence[int], *, order_cap: int = DEFAULT_ORDER_CAP) -> "TorsionGroup":
        factors = [int(f) for f in factors]
        if any(f < 2 for f in factors):
            raise GroupError(f"invariant factors must be >= 2, got {factors}")
        n = math.prod(factors)
        if n > order_cap:
            raise GroupError(f"torsion order {n} exceeds cap {order_cap}")
        if not factors:
            return cls([[0]], invariants=(), check=False)
        coords = np.array(np.unravel_index(np.arange(n), factors))  # (k, n)
        summed = (coords[:, :, None] + coords[:, None, :]) % np.array(factors)[:, None, None]
        table = np.ravel_multi_index(tuple(summed), factors)
        # the law is componentwise addition, so associativity holds by construction
        return cls(table, invariants=factors, order_cap=order_cap)

    @classmethod
    def cyclic(cls, n: int) -> "TorsionGroup":
        if n == 1:
            return cls.trivial()
        return cls.abelian([n])

    @classmethod
    def trivial(cls) -> "TorsionGroup":
        return cls.abelian([])

    @classmethod
    def symmetric(cls, n: int) -> "TorsionGroup":
        """Symmetric group on n letters; (p*q)(i) = p(q(i)), identity first."""
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
        return cls(table, name=f"S{n}")

    # queries ------------------------------------------------------------

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    @property
    def kind(self) -> str:
        return "abelian-invariant-factors" if self.invariants is not None else "multiplication-table"

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        result = 0
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.mul(x, a)
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def coords(self, a: int) -> tuple[int, ...]:
        """Residues of an element of an invariant-factor group."""
        if self.invariants is None:
            raise GroupError("coords are only defined for invariant-factor groups")
        if not self.invariants:
            return ()
        return tuple(int(c) for c in np.unravel_index(a, self.invariants))

    def index_of(self, residues: Sequence[int]) -> int:
        if self.invariants is None:
            raise GroupError("index_of is only defined for invariant-factor groups")
        if not self.invariants:
            return 0
        return int(np.ravel_multi_index(tuple(r % f for r, f in zip(residues, self.invariants)), self.invariants))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TorsionGroup) and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash(self.table.tobytes())

    def __repr__(self) -> str:
        return f"TorsionGroup({self.name}, order={self.order})"


def _invariants_name(invariants: tuple[int, ...]) -> str:
    if not invariants:
        return "1"
    return "x".join(f"Z/{f}" for f in invariants)


def _check_table(t: np.ndarray, associativity: bool = True) -> None:
    n = t.shape[0]
    if t.min() < 0 or t.max() >= n:
        raise GroupError("table entries out of range")
    ref = np.arange(n)
    if not (np.array_equal(t[0], ref) and np.array_equal(t[:, 0], ref)):
        raise GroupError("index 0 is not a two-sided identity")
    if not (np.all(np.sort(t, axis=1) == ref) and np.all(np.sort(t, axis=0) == ref[:, None])):
        raise GroupError("row or column is not a permutation")
    if not associativity:
        return
    if n <= 128:
        for a in range(n):
            # (a*b)*c vs a*(b*c) for all b, c
            if not np.array_equal(t[t[a]], t[a][t]):
                raise GroupError("table is not associative")
    else:
        _light_test(t)


def _light_test(t: np.ndarray) -> None:
    """Light's associativity test over a generating set of the table."""
    n = t.shape[0]
    gens: list[int] = []
    reached = np.zeros(n, dtype=bool)
    reached[0] = True
    for g in range(n):
        if reached[g]:
            continue
        gens.append(g)
        frontier = np.nonzero(reached)[0]
        while frontier.size:
            nxt = np.unique(t[np.ix_(frontier, gens)].ravel())
            nxt = nxt[~reached[nxt]]
            reached[nxt] = True
            frontier = nxt
    for g in gens:
        # (x*g)*y == x*(g*y)
        if not np.array_equal(t[t[:, g]], t[:, t[g]]):
            raise GroupError("table is not associative")


@dataclass(frozen=True, order=True)
class GroupElement:
    vec: tuple[int, ...]
    tor: int = 0

    def __repr__(self) -> str:
        return f"({list(self.vec)}, {self.tor})"


@dataclass(frozen=True)
class GroupSpec:
    """The group Z^rank x torsion."""

    rank: int
    torsion: TorsionGroup = field(default_factory=TorsionGroup.trivial)

    def __post_init__(self):
        if self.rank < 0:
            raise GroupError("rank must be >= 0")

    @property
    def identity(self) -> GroupElement:
        return GroupElement((0,) * self.rank, 0)

    @property
    def torsion_order(self) -> int:
        return self.torsion.order

    def element(self, vec: Iterable[int] = (), tor: int = 0) -> GroupElement:
        v = tuple(int(x) for x in vec)
        if not v and self.rank:
            v = (0,) * self.rank
        g = GroupElement(v, int(tor))
        self.check(g)
        return g

    def check(self, g: GroupElement) -> None:
        if len(g.vec) != self.rank:
            raise GroupError(f"element {g} has dimension {len(g.vec)}, expected {self.rank}")
        if not 0 <= g.tor < self.torsion.order:
            raise GroupError(f"torsion index {g.tor} out of range")
        if any(abs(x) > COORD_LIMIT for x in g.vec):
            raise OverflowError(f"coordinate of {g} exceeds 63 bits")

    def mul(self, a: GroupElement, b: GroupElement) -> GroupElement:
        self.check(a)
        self.check(b)
        g = GroupElement(tuple(x + y for x, y in zip(a.vec, b.vec)), self.torsion.mul(a.tor, b.tor))
        self.check(g)
        return g

    def inv(self, a: GroupElement) -> GroupElement:
        self.check(a)
        return GroupElement(tuple(-x for x in a.vec), self.torsion.inv(a.tor))

    def torsion_element(self, f: int) -> GroupElement:
        return self.element((0,) * self.rank, f)

    def describe(self) -> str:
        free = f"Z^{self.rank}" if self.rank != 1 else "Z"
        if self.torsion.order == 1:
            return free if self.rank else "1"
        return f"{free} x {self.torsion.name}" if self.rank else self.torsion.name


def make_group(rank: int, torsion: TorsionGroup | Sequence[int] | Sequence[Sequence[int]] | None = None) -> GroupSpec:
    """Build Z^rank x F from a TorsionGroup, a list of invariant factors or a table."""
    if torsion is None:
        tg = TorsionGroup.trivial()
    elif isinstance(torsion, TorsionGroup):
        tg = torsion
    else:
        items = list(torsion)
        if items and isinstance(items[0], (list, tuple, np.ndarray)):
            tg = TorsionGroup(items)
        else:
            tg = TorsionGroup.abelian(items)
    return GroupSpec(int(rank), tg)


def torsion_product(F1: TorsionGroup, F2: TorsionGroup) -> TorsionGroup:
    """F1 x F2 with element (a, b) stored at index a * |F2| + b."""
    if F1.invariants is not None and F2.invariants is not None:
        return TorsionGroup.abelian(F1.invariants + F2.invariants)
    n2 = F2.order
    table = F1.table[:, None, :, None] * n2 + F2.table[None, :, None, :]
    n = F1.order * n2
    return TorsionGroup(table.reshape(n, n), name=f"{F1.name} x {F2.name}", check=False)


def direct_product(
    spec1: GroupSpec,
    S1: Iterable[GroupElement],
    spec2: GroupSpec,
    S2: Iterable[GroupElement],
) -> tuple[GroupSpec, list[GroupElement]]:
    """G1 x G2 (lattice coordinates concatenated) with (S1 x {e}) u ({e} x S2)."""
    spec = GroupSpec(spec1.rank + spec2.rank, torsion_product(spec1.torsion, spec2.torsion))
    n2 = spec2.torsion.order
    pad1, pad2 = (0,) * spec2.rank, (0,) * spec1.rank
    elements = [GroupElement(g.vec + pad1, g.tor * n2) for g in S1]
    elements += [GroupElement(pad2 + g.vec, g.tor) for g in S2]
    return spec, list(dict.fromkeys(elements))


def mul(spec: GroupSpec, a: GroupElement, b: GroupElement) -> GroupElement:
    return spec.mul(a, b)


def inv(spec: GroupSpec, a: GroupElement) -> GroupElement:
    return spec.inv(a)


def order_le2_census(spec: GroupSpec) -> int:
    """Number of g with g*g = e.  No nonzero lattice vector qualifies, so only F is scanned."""
    t = spec.torsion.table
    return int(np.count_nonzero(t[np.arange(spec.torsion.order), np.arange(spec.torsion.order)] == 0))


def involutions(spec: GroupSpec) -> list[GroupElement]:
    """The set I of elements of order at most 2, as group elements."""
    t = spec.torsion.table
    return [spec.torsion_element(int(f)) for f in range(spec.torsion.order) if t[f, f] == 0]


def is_closed_under_inverse(spec: GroupSpec, elements: Iterable[GroupElement]) -> bool:
    s = set(elements)
    return all(spec.inv(g) in s for g in s)


@dataclass(frozen=True)
class GeneratingSet:
    """Finite generating list, deduplicated in first-seen order."""

    elements: tuple[GroupElement, ...]
    kind: Kind

    @classmethod
    def build(
        cls,
        spec: GroupSpec,
        elements: Iterable[GroupElement | tuple],
        kind: Kind,
        *,
        validate: bool = True,
        cap: int = 16,
    ) -> "GeneratingSet":
        if kind not in KINDS:
            raise GroupError(f"kind must be one of {KINDS}, got {kind!r}")
        items: list[GroupElement] = []
        for g in elements:
            if not isinstance(g, GroupElement):
                vec, tor = g
                g = GroupElement(tuple(int(x) for x in vec), int(tor))
            spec.check(g)
            if g not in items:
                items.append(g)
        if not items:
            raise GroupError("generating set must be non-empty")
        if kind == "symmetric" and not is_closed_under_inverse(spec, items):
            raise GroupError("symmetric generating set is not closed under inverses")
        if validate:
            verdict = check_generates(spec, items, cap)
            if not verdict.generates:
                raise NotGeneratingError(verdict)
        return cls(tuple(items), kind)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def lattice_parts(self) -> list[tuple[int, ...]]:
        out: list[tuple[int, ...]] = []
        for g in self.elements:
            if g.vec not in out:
                out.append(g.vec)
        return out


@dataclass(frozen=True)
class Verdict:
    generates: bool
    reason: str | None = None
    witness: object = None

    @property
    def conclusive(self) -> bool:
        return self.generates or self.reason in (SUBGROUP_PROPER, MONOID_PROPER)


SUBGROUP_PROPER = "subgroup proper"
MONOID_PROPER = "monoid proper"
NO_CERTIFICATE = "monoid certificate not found within cap"


def generated_subgroup_torsion(spec: GroupSpec, elements: Sequence[GroupElement]) -> set[int]:
    """The torsion fibre K = <S> ∩ ({0} x F), returned as a set of table indices.

    K is the normal closure inside <S> of the torsion parts of integer
    relations among the lattice parts together with commutators of the
    torsion parts: modulo that closure the generators commute and satisfy
    exactly the lattice relations, so the quotient maps isomorphically onto
    the lattice span.
    """
    tg = spec.torsion
    vecs = [g.vec for g in elements]
    tors = [g.tor for g in elements]
    seeds: set[int] = set()
    for c in intlinalg.integer_kernel(vecs, spec.rank):
        x = 0
        for f, e in zip(tors, c):
            if e:
                x = tg.mul(x, tg.power(f, e))
        seeds.add(x)
    for a in tors:
        for b in tors:
            seeds.add(tg.mul(tg.mul(a, b), tg.mul(tg.inv(a), tg.inv(b))))
    seeds.discard(0)
    gens = sorted(seeds)
    while True:
        closure = _subgroup_closure(tg, gens)
        extra = {
            tg.mul(tg.mul(f, k), tg.inv(f)) for f in set(tors) for k in gens
        } - closure
        if not extra:
            return closure
        gens.extend(sorted(extra))


def _subgroup_closure(tg: TorsionGroup, gens: Sequence[int]) -> set[int]:
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = tg.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def check_generates(spec: GroupSpec, elements: Sequence[GroupElement], cap: int = 16) -> Verdict:
    """Decide whether ``elements`` generate Z^d x F as a monoid.

    Group generation is decided exactly (lattice invariant factors plus the
    torsion fibre).  A lattice functional that is non-negative on every
    generator disproves monoid generation.  Otherwise monoid generation is
    certified by finding every generator's inverse inside the ball of radius
    ``cap``; failure to do so is reported as inconclusive, not as a disproof.
    """
    elements = list(elements)
    if not elements:
        raise GroupError("need at least one element")
    if cap < 1:
        raise GroupError("cap must be >= 1")
    for g in elements:
        spec.check(g)
    factors = intlinalg.lattice_invariant_factors([g.vec for g in elements], spec.rank)
    if any(f != 1 for f in factors):
        return Verdict(False, SUBGROUP_PROPER, {"lattice_invariant_factors": list(factors)})
    fibre = generated_subgroup_torsion(spec, elements)
    if len(fibre) != spec.torsion.order:
        return Verdict(False, SUBGROUP_PROPER, {"torsion_index": spec.torsion.order // len(fibre)})

    try:
        lam = intlinalg.supporting_functional([g.vec for g in elements], spec.rank)
    except ValueError:
        lam = None
    if lam is not None:
        # every word has lam(lattice part) >= 0, but the group has elements with lam < 0
        return Verdict(False, MONOID_PROPER, {"half_space_normal": list(lam)})

    missing = [spec.inv(g) for g in elements]
    missing = [h for h in dict.fromkeys(missing) if h not in set(elements)]
    if not missing:
        return Verdict(True, witness={"certificate_length": 1})
    from .growth import distances_to

    dist = distances_to(spec, elements, missing, cap)
    not_found = [h for h, r in zip(missing, dist) if r is None]
    if not_found:
        return Verdict(False, NO_CERTIFICATE, {"cap": cap, "unreached_inverses": not_found})
    return Verdict(True, witness={"certificate_length": max(max(dist), 1)})


def torsion_diameter(spec: GroupSpec, S: GeneratingSet | Sequence[GroupElement], cap: int = 1 << 12) -> int:
    """max over f in F of d_S((0, f), e)."""
    from .growth import distances_unbounded

    targets = [spec.torsion_element(f) for f in range(spec.torsion.order)]
    return max(distances_unbounded(spec, list(S), targets, max_cap=cap))


def involution_diameter(spec: GroupSpec, S: GeneratingSet | Sequence[GroupElement], cap: int = 1 << 12) -> int:
    """Diameter of the order-<=2 set I under d_S, i.e. max d_S(h^-1 g, e) over g, h in I."""
    from .growth import distances_unbounded

    inv_set = involutions(spec)
    quotients = list(dict.fromkeys(spec.mul(spec.inv(h), g) for g in inv_set for h in inv_set))
    return max(distances_unbounded(spec, list(S), quotients, max_cap=cap))
