"""Constructions and the example catalog: duplex, label collapse, the
Gamma_d and all-4 path families, the figure examples, and seeded random
generators for the property tests.

The catalog systems are defined programmatically here; the CXS files
shipped under ``coxhi/catalog/`` are generated from these definitions so
external tools can consume them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from importlib import resources

from .core import INFINITY, CoxeterSystem, induced, mask_of


@dataclass(frozen=True)
class DuplexParams:
    """Parameters of the doubling construction: finite m >= 2, n >= 5 or
    infinity."""

    m: int
    n: object

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 2:
            raise ValueError("duplex parameter m must be a finite integer >= 2")
        if self.n != INFINITY and (not isinstance(self.n, int) or self.n < 5):
            raise ValueError("duplex parameter n must be >= 5 or infinity")


def duplex(sys: CoxeterSystem, params: DuplexParams, n_map=None) -> CoxeterSystem:
    """The (m, n)-duplex of a right-angled system.

    Generator i lifts to i (u') and i + rank (u''), with m(u', u'') = m;
    a commuting pair lifts to four 2-labels and an infinite pair to four
    n-labels.  ``n_map`` optionally overrides n per original infinite pair
    (keys (i, j), values >= 5 or infinity), the generalised construction
    with varying labels.
    """
    if not sys.is_right_angled():
        raise ValueError("duplex requires a right-angled input system")
    overrides = {}
    if n_map:
        for (i, j), value in n_map.items():
            if sys.labels[i][j] != INFINITY:
                raise ValueError("n_map key (%d, %d) is not an infinite pair"
                                 % (i, j))
            if value != INFINITY and (not isinstance(value, int) or value < 5):
                raise ValueError("n_map labels must be >= 5 or infinity")
            overrides[frozenset((i, j))] = value
    N = sys.rank
    edges = {}
    for i in range(N):
        edges[(i, N + i)] = params.m
    for i in range(N):
        for j in range(i + 1, N):
            label = sys.labels[i][j]
            lifted = 2 if label == 2 else overrides.get(frozenset((i, j)), params.n)
            for a in (i, N + i):
                for b in (j, N + j):
                    edges[(a, b)] = lifted
    names = ([name + "'" for name in sys.names]
             + [name + "''" for name in sys.names])
    return CoxeterSystem.from_edges(2 * N, edges, default=2, names=names)


def collapse_labels(sys: CoxeterSystem, threshold: int = 7) -> CoxeterSystem:
    """Replace every finite label >= threshold by threshold.

    The hypergraph index is invariant under this collapse for thresholds
    >= 7 only, so smaller thresholds are rejected.
    """
    if threshold < 7:
        raise ValueError("collapse threshold below 7 is not index-preserving")
    labels = [[m if m == INFINITY or m < threshold or i == j else threshold
               for j, m in enumerate(row)]
              for i, row in enumerate(sys.labels)]
    return CoxeterSystem(labels, names=sys.names)


def gamma_d(d: int) -> CoxeterSystem:
    """The right-angled defining-graph family Gamma_d (hypergraph index d-1).

    Generators a0..ad, b0, b1 and (for d >= 2) b2..bd; the listed pairs
    commute and every other pair has an infinite label.
    """
    if d < 1:
        raise ValueError("gamma_d requires d >= 1")
    a = {i: i for i in range(d + 1)}
    nb = 2 if d == 1 else d + 1
    b = {i: d + 1 + i for i in range(nb)}
    names = ["a%d" % i for i in range(d + 1)] + ["b%d" % i for i in range(nb)]
    pairs = [(b[1], a[0]), (b[1], b[0]), (a[1], a[0]), (a[1], b[0])]
    if d >= 2:
        pairs += [(b[1], b[2]), (a[1], b[2])]
        pairs += [(a[i], a[0]) for i in range(2, d + 1)]
        pairs += [(a[i], b[0]) for i in range(2, d + 1)]
        pairs += [(b[i], b[i + 1]) for i in range(2, d)]
        pairs += [(b[i + 1], a[i]) for i in range(2, d)]
    edges = {pair: 2 for pair in pairs}
    return CoxeterSystem.from_edges(d + 1 + nb, edges, default=INFINITY,
                                    names=names)


def path4(n: int) -> CoxeterSystem:
    """The path on n vertices with all edge labels 4 (Dynkin diagram)."""
    if n < 2:
        raise ValueError("path4 requires n >= 2")
    edges = {(i, i + 1): 4 for i in range(n - 1)}
    return CoxeterSystem.from_edges(n, edges, default=2)


def _cycle9(four_edges):
    """9-cycle s1..s9, cycle labels 3 except label 4 on the given 1-based
    pairs; all chords 2."""
    edges = {}
    for i in range(9):
        edges[(i, (i + 1) % 9)] = 3
    for i, j in four_edges:
        edges[(i - 1, j - 1)] = 4
    return CoxeterSystem.from_edges(9, edges, default=2)


def _fig4():
    edges = {}
    for i in range(9):
        edges[(i, (i + 1) % 9)] = 3
    edges[(4, 5)] = 5  # m(s5, s6)
    for i, j in [(1, 3), (2, 4), (1, 8), (7, 9)]:  # chords, 1-based
        edges[(i - 1, j - 1)] = 3
    return CoxeterSystem.from_edges(9, edges, default=2)


def _fig8():
    # Octagon s1..s8 with three 4-labelled sides, plus five interior
    # vertices sitting on drawn segments: s9 and s10 subdivide the thick
    # s3--s8 line (so s3-s9 and s9-s10 carry label 4), s11 subdivides the
    # s4-s7 chord, s12 an upper s3-s8 arc and s13 the s3-s7 diagonal.  The
    # transcription is validated by the nested-subdiagram gate (betti i,
    # index i+1 on s1..s_{8+i}).
    edges = {}
    cycle_labels = [3, 3, 4, 3, 3, 4, 4, 3]  # s1s2, s2s3, ..., s8s1
    for i in range(8):
        edges[(i, (i + 1) % 8)] = cycle_labels[i]
    edges[(2, 8)] = 4   # s3 - s9
    edges[(8, 9)] = 4   # s9 - s10
    edges[(9, 7)] = 3   # s10 - s8
    edges[(3, 10)] = 3  # s4 - s11
    edges[(10, 6)] = 3  # s11 - s7
    edges[(2, 11)] = 3  # s3 - s12
    edges[(11, 7)] = 3  # s12 - s8
    edges[(2, 12)] = 3  # s3 - s13
    edges[(12, 6)] = 3  # s13 - s7
    return CoxeterSystem.from_edges(13, edges, default=2)


_CATALOG_BUILDERS = {
    "fig4": _fig4,
    "fig7a": lambda: _cycle9([]),
    "fig7b": lambda: _cycle9([(1, 2), (4, 5), (5, 6), (6, 7), (9, 1)]),
    "fig7c": lambda: _cycle9([(2, 3), (3, 4), (7, 8), (8, 9)]),
    "fig7d": lambda: _cycle9([(1, 2), (3, 4), (4, 5), (6, 7), (7, 8), (9, 1)]),
    "fig8": _fig8,
}


def catalog_names():
    return sorted(_CATALOG_BUILDERS) + ["fig8sub%d" % i for i in range(1, 6)]


def catalog(name: str) -> CoxeterSystem:
    """A hard-coded paper example by name (fig4, fig7a..fig7d, fig8,
    fig8sub1..fig8sub5)."""
    if name in _CATALOG_BUILDERS:
        return _CATALOG_BUILDERS[name]()
    if name.startswith("fig8sub"):
        try:
            i = int(name[len("fig8sub"):])
        except ValueError:
            i = 0
        if 1 <= i <= 5:
            sub, _ = induced(_fig8(), mask_of(range(8 + i)))
            return sub
    raise KeyError("unknown catalog entry %r (known: %s)"
                   % (name, ", ".join(catalog_names())))


def catalog_dir():
    """Path to the packaged catalog of CXS files."""
    return resources.files("coxhi") / "catalog"


# ---------------------------------------------------------------------------
# seeded random generators (property-test support)

def _check_alphabet(alphabet):
    labels = list(alphabet)
    if not labels:
        raise ValueError("empty label alphabet")
    for m in labels:
        if m != INFINITY and (not isinstance(m, int) or m < 2):
            raise ValueError("alphabet labels must be >= 2 or infinity")
    return labels


def random_system(rank, label_alphabet, seed) -> CoxeterSystem:
    """Uniform independent labels from the alphabet; deterministic per seed."""
    labels = _check_alphabet(label_alphabet)
    rng = random.Random(seed)
    edges = {}
    for i in range(rank):
        for j in range(i + 1, rank):
            edges[(i, j)] = rng.choice(labels)
    return CoxeterSystem.from_edges(rank, edges, default=2)


def random_racg(rank, edge_prob, seed) -> CoxeterSystem:
    """Right-angled system: each pair commutes with probability edge_prob."""
    rng = random.Random(seed)
    edges = {}
    for i in range(rank):
        for j in range(i + 1, rank):
            edges[(i, j)] = 2 if rng.random() < edge_prob else INFINITY
    return CoxeterSystem.from_edges(rank, edges, default=2)


def random_tree(rank, label_alphabet, seed) -> CoxeterSystem:
    """A random tree Dynkin diagram with edge labels from the alphabet.

    Labels 2 are excluded from the alphabet (an edge labelled 2 is not a
    Dynkin edge); non-edges are 2, so the first Betti number is 0.
    """
    labels = [m for m in _check_alphabet(label_alphabet) if m == INFINITY or m >= 3]
    if not labels:
        raise ValueError("tree alphabet needs labels >= 3 (or infinity)")
    rng = random.Random(seed)
    edges = {}
    if rank >= 2:
        # random Pruefer sequence
        seq = [rng.randrange(rank) for _ in range(rank - 2)]
        degree = [1] * rank
        for v in seq:
            degree[v] += 1
        import heapq
        leaves = [v for v in range(rank) if degree[v] == 1]
        heapq.heapify(leaves)
        for v in seq:
            leaf = heapq.heappop(leaves)
            edges[(min(leaf, v), max(leaf, v))] = rng.choice(labels)
            degree[v] -= 1
            if degree[v] == 1:
                heapq.heappush(leaves, v)
        u = heapq.heappop(leaves)
        v = heapq.heappop(leaves)
        edges[(min(u, v), max(u, v))] = rng.choice(labels)
    return CoxeterSystem.from_edges(rank, edges, default=2)
