import pytest

import coxhi
from coxhi import classify, oracles
from coxhi.core import INFINITY, CoxeterSystem


def test_gram_examples():
    a1 = CoxeterSystem.from_edges(2, {(0, 1): INFINITY})
    assert oracles.gram_signature(a1, 0b11).verdict == oracles.PSD_SINGULAR
    h4 = CoxeterSystem.from_edges(4, {(0, 1): 5, (1, 2): 3, (2, 3): 3})
    assert oracles.gram_signature(h4, 0b1111).verdict == oracles.POSITIVE_DEFINITE
    tri = CoxeterSystem.from_edges(3, {(0, 1): 3, (0, 2): 3, (1, 2): 7})
    assert oracles.gram_signature(tri, 0b111).verdict == oracles.INDEFINITE


def test_gram_validation():
    a1 = CoxeterSystem.from_edges(2, {(0, 1): 3})
    with pytest.raises(ValueError):
        oracles.gram_signature(a1, 0b11, tol=0)
    with pytest.raises(ValueError):
        oracles.gram_signature(a1, 0)


def test_gram_agrees_with_classifier():
    for seed in range(25):
        sys = coxhi.random_system(6, [2, 3, 4, 5, 7, INFINITY], seed)
        for T in range(1, sys.full_mask + 1):
            sig = oracles.gram_signature(sys, T)
            assert classify.is_spherical(sys, T) == \
                (sig.verdict == oracles.POSITIVE_DEFINITE)
            if len(coxhi.components(sys, T)) == 1:
                affine = classify.is_irreducible_affine(sys, T, 2)
                psd_rank1 = (sig.verdict == oracles.PSD_SINGULAR and
                             oracles.gram_kernel_dimension(sys, T) == 1)
                assert affine == psd_rank1


def test_gram_agrees_rank9_sparse():
    for seed in range(4):
        sys = coxhi.random_system(9, [2, 2, 2, 3, 4, INFINITY], seed)
        for T in range(1, sys.full_mask + 1, 7):  # stride keeps it quick
            sig = oracles.gram_signature(sys, T)
            assert classify.is_spherical(sys, T) == \
                (sig.verdict == oracles.POSITIVE_DEFINITE)


def test_naive_maximal():
    assert oracles.naive_maximal([0b0, 0b1, 0b11]) == [0b11]
    antichain = [0b011, 0b101, 0b110]
    assert oracles.naive_maximal(antichain) == sorted(antichain)


def test_naive_maximal_fig4_prewide(fig4):
    tables = coxhi.analysis(fig4).tables
    flagged = [m for m in range(1 << 9) if tables.prewide[m]]
    assert oracles.naive_maximal(flagged) == \
        [w.subset for w in coxhi.wide_subsets(fig4)]


def test_naive_lambda_step_fig4(fig4):
    lam = coxhi.lambda_sequence(fig4)
    oracle = lambda m: classify.is_spherical(fig4, m)
    assert oracles.naive_lambda_step(lam.levels[0], oracle) == \
        set(lam.levels[1])


def test_naive_lambda_step_fixed_point():
    sys = coxhi.path4(5)
    lam = coxhi.lambda_sequence(sys)
    oracle = lambda m: classify.is_spherical(sys, m)
    level = lam.levels[0]
    assert oracles.naive_lambda_step(level, oracle) == set(level)
