"""Shared oracles: plain-Python enumeration with no numpy and no key packing."""

from __future__ import annotations

import itertools

import pytest

from abelgrowth.groups import GroupElement, GroupSpec


def brute_spheres(spec: GroupSpec, gens, R: int) -> list[int]:
    """Sphere sizes by naive frontier expansion over Python sets."""
    gens = list(gens)
    seen = {spec.identity}
    frontier = {spec.identity}
    sigma = [1]
    for _ in range(R):
        nxt = {spec.mul(g, s) for g in frontier for s in gens} - seen
        seen |= nxt
        frontier = nxt
        sigma.append(len(nxt))
    return sigma


def brute_word_distance(spec: GroupSpec, gens, target: GroupElement, max_len: int) -> int | None:
    """Least length of a word over ``gens`` equal to ``target``, trying every word."""
    gens = list(gens)
    for n in range(max_len + 1):
        for word in itertools.product(gens, repeat=n):
            g = spec.identity
            for s in word:
                g = spec.mul(g, s)
            if g == target:
                return n
    return None


def l1_ball_count(d: int, r: int) -> int:
    """Lattice points of Z^d with |x|_1 <= r by direct enumeration."""
    return sum(1 for x in itertools.product(range(-r, r + 1), repeat=d) if sum(map(abs, x)) <= r)


def elems(spec: GroupSpec, items) -> list[GroupElement]:
    return [spec.element(v, t) for v, t in items]


@pytest.fixture
def z():
    return GroupSpec(1)
