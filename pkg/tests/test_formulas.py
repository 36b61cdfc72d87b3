import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abelgrowth.formulas import (
    FamilyParams,
    beta_standard,
    beta_standard_plus,
    convolve_sigma,
    family_generators,
    family_series,
    monoid_ball_shape,
    parity_prediction,
    sigma_even,
    sigma_monoid,
    sigma_odd,
    standard_generators,
    standard_series,
    triangular_double_sum,
)
from abelgrowth.groups import GeneratingSet, GroupElement, GroupSpec, TorsionGroup, make_group
from abelgrowth.growth import GrowthSeries, bfs_growth

from conftest import brute_spheres, l1_ball_count


def family_bfs(n, k, family, R):
    G = GroupSpec(1, TorsionGroup.cyclic(n))
    return bfs_growth(G, family_generators(G, FamilyParams(n, k, family)), R).sigma


# --- even family --------------------------------------------------------------


def test_even_examples():
    p = FamilyParams(2, 1, "even")
    assert family_series(p, 4).sigma == (1, 3, 4, 4, 4)
    assert family_bfs(2, 1, "even", 4) == (1, 3, 4, 4, 4)
    plain = FamilyParams(1, 1, "even")
    assert [sigma_even(plain, r) for r in range(4)] == [1, 2, 2, 2]


@given(st.integers(1, 4), st.integers(1, 4))
def test_even_symmetric_in_order_and_2k(a, b):
    # |F| = 2a with k = b versus |F| = 2b with k = a
    left = family_series(FamilyParams(2 * a, b, "even"), 6)
    right = family_series(FamilyParams(2 * b, a, "even"), 6)
    assert left == right


@pytest.mark.parametrize("n,k", [(1, 1), (2, 2), (3, 1), (4, 3), (6, 2)])
def test_even_matches_bfs(n, k):
    assert family_series(FamilyParams(n, k, "even"), 12).sigma == family_bfs(n, k, "even", 12)


# --- odd family ---------------------------------------------------------------


def test_odd_examples():
    assert family_series(FamilyParams(1, 1, "odd"), 4).sigma == (1, 2, 2, 2, 2)
    assert family_series(FamilyParams(3, 2, "odd"), 5).sigma == (1, 6, 14, 18, 18, 18)
    assert family_bfs(3, 2, "odd", 5) == (1, 6, 14, 18, 18, 18)
    assert sigma_odd(FamilyParams(3, 2, "odd"), 2) == 14


@given(st.integers(0, 3), st.integers(1, 4))
def test_odd_symmetric_in_order_and_2k_minus_1(a, b):
    # |F| = 2a+1 with k = b versus |F| = 2b-1 with k = a+1
    left = family_series(FamilyParams(2 * a + 1, b, "odd"), 6)
    right = family_series(FamilyParams(2 * b - 1, a + 1, "odd"), 6)
    assert left == right


@pytest.mark.parametrize("n,k", [(1, 2), (3, 1), (3, 3), (5, 2), (2, 2)])
def test_odd_matches_bfs(n, k):
    assert family_series(FamilyParams(n, k, "odd"), 12).sigma == family_bfs(n, k, "odd", 12)


# --- monoid family ------------------------------------------------------------


def test_monoid_examples():
    assert [sigma_monoid(FamilyParams(1, 2, "monoid"), r) for r in range(4)] == [1, 2, 2, 2]
    assert family_bfs(2, 3, "monoid", 5) == (1, 6, 6, 6, 6, 6)
    assert family_bfs(6, 1, "monoid", 5) == (1, 6, 6, 6, 6, 6)


def test_monoid_ball_shape_matches_snapshot():
    G = make_group(1, [2])
    S = family_generators(G, FamilyParams(2, 3, "monoid"))
    series, snap = bfs_growth(G, S, 4, keep_ball=True)
    for r in range(5):
        assert snap.within(r) == monoid_ball_shape(G, 3, r)
    assert len(monoid_ball_shape(G, 3, 2)) == 13 == series.beta[2]


def test_family_params_validation():
    with pytest.raises(ValueError):
        FamilyParams(0, 1, "even")
    with pytest.raises(ValueError):
        FamilyParams(2, 0, "even")
    with pytest.raises(ValueError):
        sigma_even(FamilyParams(2, 1, "odd"), 1)


# --- convolution ----------------------------------------------------------------


def test_convolution_identity():
    a = GrowthSeries((1, 2, 2, 2))
    trivial = GrowthSeries((1, 0, 0, 0))
    assert convolve_sigma(a, trivial, 3).sigma == a.sigma


def test_convolution_z_squared():
    a = GrowthSeries((1,) + (2,) * 6)
    c = convolve_sigma(a, a, 6)
    assert c.sigma[:4] == (1, 4, 8, 12) and c.beta[:4] == (1, 5, 13, 25)
    Z2 = GroupSpec(2)
    S = [GroupElement(v, 0) for v in standard_generators(2)]
    assert bfs_growth(Z2, S, 6).sigma == c.sigma


def test_even_family_as_convolution():
    n, k, R = 4, 3, 8
    torsion = GrowthSeries((1, n - 1) + (0,) * (R - 1))
    line = GrowthSeries((1,) + (2 * k,) * R)
    assert convolve_sigma(torsion, line, R) == GrowthSeries(family_series(FamilyParams(n, k, "even"), R).sigma, "convolution")


def test_double_sum_is_ball_not_sphere():
    a = family_series(FamilyParams(2, 1, "even"), 10)
    b = standard_series(1, 10)
    conv = convolve_sigma(a, b, 10)
    for r in range(11):
        assert triangular_double_sum(a, b, r) == conv.beta[r]
    assert any(triangular_double_sum(a, b, r) != conv.sigma[r] for r in range(1, 11))


# --- standard series --------------------------------------------------------------


def test_beta_standard_examples():
    assert beta_standard(1, 10) == 21
    assert beta_standard(2, 2) == 13
    assert beta_standard(3, 3) == 63 == l1_ball_count(3, 3)


@pytest.mark.parametrize("d", [0, 1, 2, 3])
def test_beta_standard_against_lattice_count(d):
    for r in range(6):
        assert beta_standard(d, r) == l1_ball_count(d, r)


def brute_plus_count(d, r):
    """Points of Z^d whose minimal representation has length <= r."""
    count = 0
    for x in itertools.product(range(-r, r + 1), repeat=d):
        t = max(0, -min(x))
        if sum(a + t for a in x) + t <= r:
            count += 1
    return count


def test_beta_standard_plus_examples():
    assert [beta_standard_plus(1, r) for r in range(6)] == [2 * r + 1 for r in range(6)]
    assert beta_standard_plus(2, 1) == 4
    assert beta_standard_plus(2, 2) == 10 == brute_plus_count(2, 2)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_beta_standard_plus_against_bfs(d):
    G = GroupSpec(d)
    S = [GroupElement(v, 0) for v in standard_generators(d, plus=True)]
    R = 8
    assert standard_series(d, R, plus=True).beta == bfs_growth(G, S, R).beta
    assert [brute_plus_count(d, r) for r in range(5)] == [beta_standard_plus(d, r) for r in range(5)]


# --- parity ---------------------------------------------------------------------


def test_parity_examples():
    G = make_group(1, [2])
    S = GeneratingSet.build(G, family_generators(G, FamilyParams(2, 1, "even")), "symmetric")
    assert parity_prediction(G, S)[0] == 0
    G3 = make_group(1, [3])
    S3 = GeneratingSet.build(G3, family_generators(G3, FamilyParams(3, 1, "even")), "symmetric")
    residue, _ = parity_prediction(G3, S3)
    assert residue == 1
    assert all(b % 2 == 1 for b in bfs_growth(G3, S3, 20).beta)


def test_parity_klein_even_family():
    G = make_group(1, [2, 2])
    S = GeneratingSet.build(G, family_generators(G, FamilyParams(4, 2, "even")), "symmetric")
    residue, threshold = parity_prediction(G, S)
    beta = bfs_growth(G, S, 50).beta
    assert residue == 0
    assert all(beta[r] % 2 == 0 for r in range(threshold + 1, 51))


def test_parity_rejects_monoid_sets():
    G = make_group(1, [2])
    S = GeneratingSet.build(G, family_generators(G, FamilyParams(2, 2, "monoid")), "monoid")
    with pytest.raises(ValueError):
        parity_prediction(G, S)


def test_family_generators_against_naive_spheres():
    G = GroupSpec(1, TorsionGroup.symmetric(3))
    S = family_generators(G, FamilyParams(6, 2, "even"))
    assert brute_spheres(G, S, 6) == list(family_series(FamilyParams(6, 2, "even"), 6).sigma)
