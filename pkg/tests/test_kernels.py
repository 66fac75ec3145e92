"""Differential tests: compiled kernel vs pure-Python twin vs classify."""

import pytest

import coxhi
from coxhi import classify, kernels, oracles
from coxhi.core import INFINITY, iter_bits
from coxhi.kernels import _inf_adjacency, _kernel_labels

try:
    from coxhi import _kernels_cy
    HAVE_CY = True
except ImportError:
    HAVE_CY = False

from coxhi import _kernels_py


def _args(sys):
    return (sys.rank, _kernel_labels(sys), list(sys.dynkin_adjacency),
            _inf_adjacency(sys))


@pytest.mark.skipif(not HAVE_CY, reason="compiled kernel not built")
@pytest.mark.parametrize("seed", range(30))
def test_twins_agree(seed):
    sys = coxhi.random_system(7, [2, 3, 4, 5, 6, 7, 9, INFINITY], seed)
    args = _args(sys)
    t_py = _kernels_py.build_tables(*args)
    t_cy = _kernels_cy.build_tables(*args)
    assert t_py == t_cy
    sph = t_py[0]
    assert _kernels_py.minimal_nonspherical(7, sph) == \
        _kernels_cy.minimal_nonspherical(7, sph)
    assert _kernels_py.maximal_flagged(7, t_py[3]) == \
        _kernels_cy.maximal_flagged(7, t_py[3])
    nerve = list(sys.nerve_adjacency)
    assert _kernels_py.spherical_nerve_cut(7, sph, nerve) == \
        _kernels_cy.spherical_nerve_cut(7, sph, nerve)


@pytest.mark.parametrize("seed", range(20))
def test_tables_match_classify(seed):
    sys = coxhi.random_system(6, [2, 3, 4, 5, 6, 8, INFINITY], seed + 100)
    tables = kernels.system_tables(sys)
    for mask in range(sys.full_mask + 1):
        assert bool(tables.spherical[mask]) == classify.is_spherical(sys, mask)
        conn = mask and len(coxhi.components(sys, mask)) == 1
        assert bool(tables.connected[mask]) == bool(conn)
        if conn:
            typ = classify.classify_irreducible(sys, mask)
            assert bool(tables.affine[mask]) == typ.affine


@pytest.mark.parametrize("seed", range(20))
def test_prewide_flag_semantics(seed):
    # prewide <=> >= 2 nonspherical components, or exactly one forming an
    # irreducible affine subsystem of size >= 3
    sys = coxhi.random_system(6, [2, 3, 4, INFINITY], seed + 300)
    tables = kernels.system_tables(sys)
    for mask in range(1, sys.full_mask + 1):
        comps = coxhi.components(sys, mask)
        nonsph = [c for c in comps if not classify.is_spherical(sys, c)]
        if len(nonsph) >= 2:
            expect = True
        elif len(nonsph) == 1:
            c = nonsph[0]
            expect = (c.bit_count() >= 3
                      and classify.classify_irreducible(sys, c).affine)
        else:
            expect = False
        assert bool(tables.prewide[mask]) == expect


def test_maximal_flagged_vs_naive():
    import random
    rng = random.Random(7)
    for _ in range(50):
        n = 8
        flags = bytearray(1 << n)
        picks = [rng.randrange(1, 1 << n) for _ in range(40)]
        for m in picks:
            flags[m] = 1
        got = kernels.maximal_flagged(n, flags)
        assert got == oracles.naive_maximal(picks)


def test_forced_python_selection(monkeypatch):
    # the env knob exists so the benchmark and CI can pin the fallback
    import importlib
    import os
    import subprocess
    import sys as _s
    code = ("import os; os.environ['COXHI_FORCE_PY_KERNELS']='1';"
            "import coxhi.kernels as k; print(k.IMPLEMENTATION)")
    out = subprocess.run([_s.executable, "-c", code], capture_output=True,
                         text=True)
    assert out.stdout.strip() == "python"
