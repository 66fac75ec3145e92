import itertools

import pytest

import coxhi
from coxhi import classify
from coxhi.core import INFINITY, CoxeterSystem, iter_bits, mask_of, parse_cxs
from coxhi.families import DuplexParams, catalog_dir


def test_gamma1_is_four_cycle():
    g = coxhi.gamma_d(1)
    assert g.rank == 4 and g.is_right_angled()
    # defining graph edges (label 2): exactly the 4-cycle a0-b1-b0-a1
    pairs = {(g.names[i], g.names[j]) for i in range(4) for j in range(i + 1, 4)
             if g.labels[i][j] == 2}
    assert pairs == {("a0", "b1"), ("b0", "b1"), ("a0", "a1"), ("a1", "b0")}


def test_gamma3_matches_figure():
    g = coxhi.gamma_d(3)
    assert g.rank == 8
    idx = {n: i for i, n in enumerate(g.names)}
    commuting = {frozenset((a, b)) for a in g.names for b in g.names
                 if a < b and g.labels[idx[a]][idx[b]] == 2}
    expected = {frozenset(p) for p in [
        ("b1", "a0"), ("b1", "b0"), ("b1", "b2"),
        ("a1", "a0"), ("a1", "b0"), ("a1", "b2"),
        ("a2", "a0"), ("a2", "b0"), ("a3", "a0"), ("a3", "b0"),
        ("b3", "b2"), ("b3", "a2"),
    ]}
    assert commuting == expected


def test_gamma_d_errors():
    with pytest.raises(ValueError):
        coxhi.gamma_d(0)


def test_path4():
    p = coxhi.path4(3)
    assert classify.classify_irreducible(p, p.full_mask).name == "affC_2"
    assert coxhi.hypergraph_index(p) == 0
    with pytest.raises(ValueError):
        coxhi.path4(1)


# ---------------------------------------------------------------------------
# duplex

def test_duplex_params_validation():
    with pytest.raises(ValueError):
        DuplexParams(1, 5)
    with pytest.raises(ValueError):
        DuplexParams(2, 4)
    with pytest.raises(ValueError):
        DuplexParams(INFINITY, 5)
    DuplexParams(2, INFINITY)
    DuplexParams(4, 6)


def test_duplex_label_rules():
    a1 = CoxeterSystem.from_edges(2, {(0, 1): INFINITY}, names=["s", "t"])
    d = coxhi.duplex(a1, DuplexParams(2, INFINITY))
    assert d.rank == 4
    assert d.names == ("s'", "t'", "s''", "t''")
    # m(u', u'') = 2; infinite pair lifts to four infinite labels
    assert d.labels[0][2] == 2 and d.labels[1][3] == 2
    for a in (0, 2):
        for b in (1, 3):
            assert d.labels[a][b] == INFINITY
    # this is the right-angled 4-cycle
    assert d.is_right_angled()
    assert coxhi.hypergraph_index(d) == coxhi.hypergraph_index(a1)

    pair2 = CoxeterSystem.from_edges(2, {(0, 1): 2})
    d2 = coxhi.duplex(pair2, DuplexParams(3, 5))
    for a in (0, 2):
        for b in (1, 3):
            assert d2.labels[a][b] == 2
    assert d2.labels[0][2] == 3


def test_duplex_rejects_non_right_angled():
    with pytest.raises(ValueError):
        coxhi.duplex(coxhi.path4(3), DuplexParams(2, 5))


def test_duplex_minimal_nonspherical_shapes():
    # minimal nonspherical subsets of a duplex: infinite pairs (n infinite)
    # or (p, n, n)-triangles with p in {2, m, n} (n finite)
    for seed, (m, n) in zip(range(8), itertools.cycle(
            [(2, 5), (3, 6), (4, 5), (3, INFINITY)])):
        base = coxhi.random_racg(5, 0.5, seed)
        d = coxhi.duplex(base, DuplexParams(m, n))
        for A in classify.minimal_nonspherical_subsets(d):
            bits = list(iter_bits(A))
            if n == INFINITY:
                assert len(bits) == 2
                assert d.labels[bits[0]][bits[1]] == INFINITY
            else:
                assert len(bits) == 3
                labels = sorted(
                    (d.labels[a][b] for a, b in itertools.combinations(bits, 2)),
                    key=lambda x: (x == n, x))
                assert labels[0] in (2, m, n) and labels[1:] == [n, n]


def test_duplex_lift_project_commuting_nonspherical():
    base = coxhi.random_racg(6, 0.5, 12)
    d = coxhi.duplex(base, DuplexParams(3, 5))
    N = base.rank

    def lift(mask):
        return mask | (mask << N)

    def project(mask):
        return (mask | (mask >> N)) & base.full_mask

    import random
    rng = random.Random(0)
    for _ in range(200):
        a = rng.randrange(1, 1 << N)
        b = rng.randrange(1, 1 << N)
        if coxhi.commutes(base, a, b):
            assert coxhi.commutes(d, lift(a), lift(b))
        if not classify.is_spherical(base, a):
            assert not classify.is_spherical(d, lift(a))
        da = rng.randrange(1, 1 << (2 * N))
        if not classify.is_spherical(d, da):
            assert not classify.is_spherical(base, project(da))


def test_duplex_wide_sets_are_lifts():
    for seed in range(10):
        base = coxhi.random_racg(5, 0.55, seed + 40)
        d = coxhi.duplex(base, DuplexParams(2, INFINITY))
        N = base.rank
        lifts = {w.subset | (w.subset << N) if False else
                 (w.subset | (w.subset << N)) for w in coxhi.wide_subsets(base)}
        got = {w.subset for w in coxhi.wide_subsets(d)}
        assert got == lifts


def test_duplex_generalized_n_map_keeps_h():
    base = coxhi.gamma_d(2)
    inf_pairs = [(i, j) for i in range(base.rank)
                 for j in range(i + 1, base.rank)
                 if base.labels[i][j] == INFINITY]
    n_map = {p: (5 + (k % 3) if k % 4 else INFINITY)
             for k, p in enumerate(inf_pairs)}
    d = coxhi.duplex(base, DuplexParams(3, 7), n_map=n_map)
    assert coxhi.hypergraph_index(d) == coxhi.hypergraph_index(base)


def test_duplex_gamma_vertices_lie_in_triangles():
    for d_param in (1, 2, 3):
        g = coxhi.gamma_d(d_param)
        dup = coxhi.duplex(g, DuplexParams(3, INFINITY))
        nerve = dup.nerve_adjacency
        for v in range(dup.rank):
            nbrs = list(iter_bits(nerve[v]))
            assert any(dup.labels[a][b] != INFINITY
                       for a in nbrs for b in nbrs if a < b)


# ---------------------------------------------------------------------------
# label collapse

def test_collapse_rules():
    sys = CoxeterSystem.from_edges(4, {(0, 1): 12, (1, 2): 6, (2, 3): INFINITY,
                                       (0, 2): 8})
    c = coxhi.collapse_labels(sys)
    assert c.labels[0][1] == 7 and c.labels[0][2] == 7
    assert c.labels[1][2] == 6          # below threshold untouched
    assert c.labels[2][3] == INFINITY   # infinity untouched
    with pytest.raises(ValueError):
        coxhi.collapse_labels(sys, threshold=6)
    c9 = coxhi.collapse_labels(sys, threshold=9)
    assert c9.labels[0][1] == 9 and c9.labels[0][2] == 8


def test_collapse_preserves_structure():
    for seed in range(30):
        sys = coxhi.random_system(6, list(range(2, 13)) + [INFINITY], seed)
        col = coxhi.collapse_labels(sys)
        a, b = coxhi.analysis(sys), coxhi.analysis(col)
        assert [w.subset for w in a.wide_subsets()] == \
            [w.subset for w in b.wide_subsets()]
        assert [s.subset for s in a.slab_subsets()] == \
            [s.subset for s in b.slab_subsets()]
        assert a.lambda_analysis().levels == b.lambda_analysis().levels
        assert a.hypergraph_index() == b.hypergraph_index()


# ---------------------------------------------------------------------------
# catalog

def test_catalog_entries():
    assert coxhi.catalog("fig4").rank == 9
    assert coxhi.catalog("fig4").labels[4][5] == 5
    assert coxhi.catalog("fig8").rank == 13
    assert coxhi.catalog("fig8sub3").rank == 11
    with pytest.raises(KeyError):
        coxhi.catalog("fig9")


def test_catalog_files_match_builders():
    for name in coxhi.catalog_names():
        path = catalog_dir() / (name + ".cxs")
        assert parse_cxs(path.read_text()) == coxhi.catalog(name)


# ---------------------------------------------------------------------------
# random generators

def test_random_determinism():
    a = coxhi.random_racg(6, 0.5, 1)
    b = coxhi.random_racg(6, 0.5, 1)
    assert a == b
    assert coxhi.random_system(5, [2, 3], 9) == coxhi.random_system(5, [2, 3], 9)


def test_random_tree_is_tree():
    for seed in range(30):
        t = coxhi.random_tree(8, [3, 4, 5, INFINITY], seed)
        assert coxhi.betti(t) == 0
        assert len(coxhi.components(t, t.full_mask)) == 1


def test_random_alphabet_validation():
    with pytest.raises(ValueError):
        coxhi.random_system(4, [1, 3], 0)
    with pytest.raises(ValueError):
        coxhi.random_tree(4, [2], 0)
