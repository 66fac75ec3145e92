import itertools
import random

import pytest

import coxhi
from coxhi import classify
from coxhi.core import INFINITY, CoxeterSystem, mask_of
from conftest import brute_minimal_nonspherical


def path_system(labels):
    n = len(labels) + 1
    return CoxeterSystem.from_edges(n, {(i, i + 1): m
                                        for i, m in enumerate(labels)})


def cycle_system(labels):
    n = len(labels)
    return CoxeterSystem.from_edges(
        n, {(i, (i + 1) % n): m for i, m in enumerate(labels)})


def full_type(sys):
    return classify.classify_irreducible(sys, sys.full_mask)


def test_rank2():
    assert full_type(path_system([5])).name == "I2(5)"
    assert full_type(path_system([3])).name == "I2(3)"
    assert full_type(path_system([INFINITY])).name == "affA1"


def test_rank3_examples():
    assert full_type(cycle_system([3, 3, 3])).name == "affA_2"
    assert full_type(path_system([3, 7])).name == "lanner"  # 1/3+1/7 < 1/2
    assert full_type(path_system([5, 3])).name == "H3"
    assert full_type(path_system([4, 4])).name == "affC_2"
    assert full_type(path_system([6, 3])).name == "affG2"
    assert full_type(cycle_system([3, 3, 7])).name == "lanner"
    assert full_type(cycle_system([3, 3, INFINITY])).name == "other"


def test_classify_requires_connected():
    sys = CoxeterSystem.from_edges(3, {(0, 1): 3})
    with pytest.raises(ValueError):
        classify.classify_irreducible(sys, sys.full_mask)
    with pytest.raises(ValueError):
        classify.classify_irreducible(sys, 0)


def test_spherical_examples():
    assert classify.is_spherical(path_system([5, 3, 3]), 0b1111)   # H4
    assert not classify.is_spherical(path_system([4, 4]), 0b111)   # affC2
    assert classify.is_spherical(coxhi.catalog("fig4"), 0)


def test_minimal_nonspherical_examples():
    a1 = path_system([INFINITY])
    assert classify.is_minimal_nonspherical(a1, 0b11)
    assert classify.is_minimal_nonspherical(path_system([4, 4]), 0b111)
    sys = CoxeterSystem.from_edges(3, {(0, 1): INFINITY})
    assert not classify.is_minimal_nonspherical(sys, 0b111)


def test_irreducible_affine_minrank():
    assert classify.is_irreducible_affine(path_system([4, 3, 4]), 0b1111, 3)
    assert not classify.is_irreducible_affine(path_system([4, 4, 4]), 0b1111, 3)
    a1 = path_system([INFINITY])
    assert classify.is_irreducible_affine(a1, 0b11, 2)
    assert not classify.is_irreducible_affine(a1, 0b11, 3)


def test_enumerate_minimal_nonspherical_examples(fig4):
    mns = classify.enumerate_minimal_nonspherical(fig4)
    assert mask_of([3, 4, 5, 6]) in mns  # the Lanner path with label 5
    spherical = CoxeterSystem.from_edges(3, {(0, 1): 3, (1, 2): 3})
    assert classify.enumerate_minimal_nonspherical(spherical) == []
    p4 = coxhi.path4(4)
    assert classify.enumerate_minimal_nonspherical(p4) == [0b0111, 0b1110]


def test_enumerate_within_filter(fig4):
    within = fig4.full_mask & ~1
    sub = classify.enumerate_minimal_nonspherical(fig4, within)
    assert all(m & 1 == 0 for m in sub)
    assert set(sub) <= set(classify.enumerate_minimal_nonspherical(fig4))


@pytest.mark.parametrize("seed", range(40))
def test_mns_matches_bruteforce(seed):
    sys = coxhi.random_system(6, [2, 3, 4, 5, 6, 7, 12, INFINITY], seed)
    assert classify.minimal_nonspherical_subsets(sys) == \
        brute_minimal_nonspherical(sys)


def test_mns_bruteforce_sparse_rank8():
    for seed in range(12):
        sys = coxhi.random_system(8, [2, 2, 2, 3, 3, 4, INFINITY], seed)
        assert classify.minimal_nonspherical_subsets(sys) == \
            brute_minimal_nonspherical(sys)


def test_sphericity_monotone():
    rng = random.Random(0)
    for seed in range(30):
        sys = coxhi.random_system(6, [2, 3, 4, 5, INFINITY], seed)
        for _ in range(60):
            t = rng.randrange(1 << 6)
            tp = t | rng.randrange(1 << 6)
            if classify.is_spherical(sys, tp):
                assert classify.is_spherical(sys, t)


def test_remark_closure_minimal_iff_affine_or_lanner():
    # minimal nonspherical <=> irreducible affine or Lanner
    for seed in range(30):
        sys = coxhi.random_system(6, [2, 3, 4, 5, 6, INFINITY], seed + 400)
        for A in range(1, sys.full_mask + 1):
            mns = classify.is_minimal_nonspherical(sys, A)
            conn = len(coxhi.components(sys, A)) == 1
            if conn:
                fam = classify.classify_irreducible(sys, A).family
                other = fam in classify.AFFINE_FAMILIES or fam == "Lanner"
            else:
                other = False
            assert mns == other


# ---------------------------------------------------------------------------
# ends

def test_ends_examples():
    assert classify.ends(path_system([INFINITY])) == 2
    assert classify.ends(path_system([5, 3, 3])) == 0   # H4 finite
    assert classify.ends(CoxeterSystem.from_edges(0, {})) == 0
    tri = CoxeterSystem.from_edges(3, {(0, 1): 3, (0, 2): 3, (1, 2): INFINITY})
    assert classify.ends(tri) == INFINITY
    assert classify.ends(coxhi.gamma_d(1)) == 1


def test_ends_affine_and_lanner_are_one_ended():
    assert classify.ends(cycle_system([3] * 5)) == 1
    assert classify.ends(path_system([4, 3, 4])) == 1
    assert classify.ends(cycle_system([3, 3, 7])) == 1
    assert classify.ends(path_system([3, 5, 3])) == 1


def test_ends_two_ended_product():
    # K x {s,t} with K spherical: the 2-ended shape, not infinity
    sys = CoxeterSystem.from_edges(3, {(0, 1): INFINITY})
    assert classify.ends(sys) == 2
    sys2 = CoxeterSystem.from_edges(4, {(0, 1): INFINITY, (2, 3): 5})
    assert classify.ends(sys2) == 2


def test_ends_infinite_on_infinity_split():
    # two nonspherical halves joined only by infinite labels
    edges = {(0, 1): INFINITY, (2, 3): INFINITY}
    for i in (0, 1):
        for j in (2, 3):
            edges[(i, j)] = INFINITY
    sys = CoxeterSystem.from_edges(4, edges)
    assert classify.ends(sys) == INFINITY
