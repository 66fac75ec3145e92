"""Exact recognition of irreducible types, minimal nonspherical sets and ends.

Recognition is pure labelled-graph pattern matching against the finite
classified lists of irreducible spherical and affine diagrams and the
compact hyperbolic simplex (Lanner) diagrams: path/branch/cycle analysis
over the label sequences, with exact rational arithmetic for the rank-3
angle-sum test.  No floating point is involved; the numeric Gram test
lives in the oracles module and is used only by the test suite.

Classification results are memoized per system, keyed by subset bitmask.
The memo tables behave as pure functions (same key, same value), so
concurrent fills are benign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .core import (
    INFINITY,
    CoxeterSystem,
    DiagramKind,
    GenSubset,
    check_subset,
    components,
    iter_bits,
    mask_of,
    perp,
)

SPHERICAL_FAMILIES = frozenset(
    {"A", "B", "D", "E6", "E7", "E8", "F4", "H3", "H4", "I2"})
AFFINE_FAMILIES = frozenset(
    {"affA1", "affA", "affB", "affC", "affD", "affE6", "affE7", "affE8",
     "affF4", "affG2"})


@dataclass(frozen=True)
class IrreducibleType:
    """Type of a connected subsystem: classified family, rank, dihedral m."""

    family: str
    rank: int
    m: object = None  # only for I2(m)

    @property
    def spherical(self):
        return self.family in SPHERICAL_FAMILIES

    @property
    def affine(self):
        return self.family in AFFINE_FAMILIES

    @property
    def name(self):
        f = self.family
        if f == "A":
            return "A_%d" % self.rank
        if f == "B":
            return "B_%d" % self.rank
        if f == "D":
            return "D_%d" % self.rank
        if f == "I2":
            return "I2(%d)" % self.m
        if f == "affA":
            return "affA_%d" % (self.rank - 1)
        if f == "affB":
            return "affB_%d" % (self.rank - 1)
        if f == "affC":
            return "affC_%d" % (self.rank - 1)
        if f == "affD":
            return "affD_%d" % (self.rank - 1)
        if f == "Lanner":
            return "lanner"
        if f == "Other":
            return "other"
        return f  # E6..E8, F4, H3, H4, affA1, affE6..affE8, affF4, affG2


@dataclass(frozen=True)
class SubsystemClass:
    """Componentwise classification verdict for an arbitrary subset."""

    components: tuple  # ((mask, IrreducibleType), ...)
    spherical: bool
    irreducible_affine: bool
    minimal_nonspherical: bool


# Canonical (min of word and reversed word) label sequences of Lanner paths.
_LANNER_PATHS = {
    4: {(3, 5, 3), (4, 3, 5), (5, 3, 5)},
    5: {(3, 3, 3, 5), (4, 3, 3, 5), (5, 3, 3, 5)},
}
# Canonical (min over rotations and reflections) label words of Lanner cycles.
_LANNER_CYCLES = {
    4: {(3, 3, 3, 4), (3, 3, 3, 5), (3, 4, 3, 4), (3, 5, 3, 5), (3, 4, 3, 5)},
    5: {(3, 3, 3, 3, 4)},
}


def _memo(sys, key):
    cache = sys.__dict__.get(key)
    if cache is None:
        cache = sys.__dict__.setdefault(key, {})
    return cache


def _cycle_canon(seq):
    best = None
    for word in (tuple(seq), tuple(reversed(seq))):
        for r in range(len(word)):
            rot = word[r:] + word[:r]
            if best is None or rot < best:
                best = rot
    return best


def classify_irreducible(sys: CoxeterSystem, T: GenSubset) -> IrreducibleType:
    """Classify a nonempty Dynkin-connected subset.

    Raises ValueError if T is empty or not Dynkin-connected.
    """
    check_subset(sys, T)
    if not T:
        raise ValueError("cannot classify the empty subset")
    cache = _memo(sys, "_classify_cache")
    hit = cache.get(T)
    if hit is not None:
        return hit
    if len(components(sys, T, DiagramKind.DYNKIN)) != 1:
        raise ValueError("subset 0x%x is not Dynkin-connected" % T)
    result = _classify_connected(sys, T)
    cache[T] = result
    return result


def _classify_connected(sys, T):
    verts = list(iter_bits(T))
    k = len(verts)
    if k == 1:
        return IrreducibleType("A", 1)
    if k == 2:
        m = sys.labels[verts[0]][verts[1]]
        if m == INFINITY:
            return IrreducibleType("affA1", 2)
        return IrreducibleType("I2", 2, m)

    lanner = IrreducibleType("Lanner", k)
    other = IrreducibleType("Other", k)

    pair_labels = [sys.labels[a][b] for a, b in combinations(verts, 2)]
    if any(m == INFINITY for m in pair_labels):
        # no spherical, affine or Lanner diagram of rank >= 3 carries an
        # infinite label
        return other
    edge_labels = [m for m in pair_labels if m >= 3]
    edge_count = len(edge_labels)

    if k == 3:
        p, q, r = sorted(pair_labels, reverse=True)
        total = Fraction(1, p) + Fraction(1, q) + Fraction(1, r)
        if total > 1:
            # the connected spherical triples are the paths (3,3), (4,3), (5,3)
            word = tuple(sorted((p, q)))
            if word == (3, 3):
                return IrreducibleType("A", 3)
            if word == (3, 4):
                return IrreducibleType("B", 3)
            return IrreducibleType("H3", 3)
        if total == 1:
            if (p, q, r) == (3, 3, 3):
                return IrreducibleType("affA", 3)
            if (p, q, r) == (4, 4, 2):
                return IrreducibleType("affC", 3)
            return IrreducibleType("affG2", 3)  # (6, 3, 2)
        return lanner

    if edge_count >= k + 1:
        return other

    adj_in = {v: sys.dynkin_adjacency[v] & T & ~(1 << v) for v in verts}
    degs = {v: bin(adj_in[v]).count("1") for v in verts}

    if edge_count == k:
        # exactly one cycle; only pure cycles appear in the classified lists
        if any(d != 2 for d in degs.values()):
            return other
        order = [verts[0]]
        prev = None
        while len(order) < k:
            nxt = [w for w in iter_bits(adj_in[order[-1]]) if w != prev]
            prev = order[-1]
            order.append(nxt[0])
        word = tuple(sys.labels[order[i]][order[(i + 1) % k]] for i in range(k))
        if all(m == 3 for m in word):
            return IrreducibleType("affA", k)
        if k in _LANNER_CYCLES and _cycle_canon(word) in _LANNER_CYCLES[k]:
            return lanner
        return other

    # tree on k vertices
    deg3 = [v for v in verts if degs[v] == 3]
    deg4p = [v for v in verts if degs[v] >= 4]
    maxdeg = max(degs.values())

    if maxdeg <= 2:
        ends_ = [v for v in verts if degs[v] == 1]
        cur, prev = min(ends_), None
        order = [cur]
        while len(order) < k:
            nxt = [w for w in iter_bits(adj_in[cur]) if w != prev]
            prev, cur = cur, nxt[0]
            order.append(cur)
        seq = tuple(sys.labels[order[i]][order[i + 1]] for i in range(k - 1))
        word = min(seq, tuple(reversed(seq)))
        if word == (3,) * (k - 1):
            return IrreducibleType("A", k)
        if word == (3,) * (k - 2) + (4,):
            return IrreducibleType("B", k)
        if k == 4 and word == (3, 4, 3):
            return IrreducibleType("F4", 4)
        if k == 4 and word == (3, 3, 5):
            return IrreducibleType("H4", 4)
        if word == (4,) + (3,) * (k - 3) + (4,):
            return IrreducibleType("affC", k)
        if k == 5 and word == (3, 3, 4, 3):
            return IrreducibleType("affF4", 5)
        if k in _LANNER_PATHS and word in _LANNER_PATHS[k]:
            return lanner
        return other

    if len(deg4p) == 1 and not deg3:
        center = deg4p[0]
        if k == 5 and degs[center] == 4 and all(m == 3 for m in edge_labels):
            return IrreducibleType("affD", 5)
        return other

    if len(deg3) == 1 and not deg4p:
        arms = []
        center = deg3[0]
        for first in iter_bits(adj_in[center]):
            arm = [sys.labels[center][first]]
            prev, cur = center, first
            while True:
                nxt = [w for w in iter_bits(adj_in[cur]) if w != prev]
                if not nxt:
                    break
                arm.append(sys.labels[cur][nxt[0]])
                prev, cur = cur, nxt[0]
            arms.append(tuple(arm))
        arms.sort(key=lambda a: (len(a), a))
        lens = tuple(len(a) for a in arms)
        nonthree = sorted(m for a in arms for m in a if m != 3)
        if not nonthree:
            if lens[:2] == (1, 1):
                return IrreducibleType("D", k)
            if lens == (1, 2, 2):
                return IrreducibleType("E6", 6)
            if lens == (1, 2, 3):
                return IrreducibleType("E7", 7)
            if lens == (1, 2, 4):
                return IrreducibleType("E8", 8)
            if lens == (2, 2, 2):
                return IrreducibleType("affE6", 7)
            if lens == (1, 3, 3):
                return IrreducibleType("affE7", 8)
            if lens == (1, 2, 5):
                return IrreducibleType("affE8", 9)
            return other
        if nonthree == [4]:
            # affB iff the 4 sits at the outer end of the long arm of a
            # (1, 1, x) tripod
            if (lens[:2] == (1, 1) and arms[0] == (3,) and arms[1] == (3,)
                    and arms[2][-1] == 4):
                return IrreducibleType("affB", k)
            return other
        if nonthree == [5]:
            if k == 4 and lens == (1, 1, 1):
                return lanner
            if k == 5 and arms[0] == (3,) and arms[1] == (3,) and arms[2] == (3, 5):
                return lanner
            return other
        return other

    if len(deg3) == 2 and not deg4p and all(m == 3 for m in edge_labels):
        leaves = [v for v in verts if degs[v] == 1]
        if len(leaves) == 4 and k >= 6:
            c1, c2 = deg3
            if (sum(1 for w in leaves if adj_in[c1] >> w & 1) == 2
                    and sum(1 for w in leaves if adj_in[c2] >> w & 1) == 2):
                return IrreducibleType("affD", k)
        return other

    return other


def classify_subset(sys: CoxeterSystem, T: GenSubset) -> SubsystemClass:
    """Componentwise classification of an arbitrary nonempty subset."""
    comps = components(sys, T, DiagramKind.DYNKIN)
    typed = tuple((c, classify_irreducible(sys, c)) for c in comps)
    return SubsystemClass(
        components=typed,
        spherical=all(t.spherical for _, t in typed),
        irreducible_affine=len(typed) == 1 and typed[0][1].affine,
        minimal_nonspherical=is_minimal_nonspherical(sys, T),
    )


def is_spherical(sys: CoxeterSystem, T: GenSubset) -> bool:
    """True iff the special subgroup generated by T is finite."""
    check_subset(sys, T)
    if not T:
        return True
    cache = _memo(sys, "_spherical_cache")
    hit = cache.get(T)
    if hit is not None:
        return hit
    result = all(classify_irreducible(sys, c).spherical
                 for c in components(sys, T, DiagramKind.DYNKIN))
    cache[T] = result
    return result


def is_minimal_nonspherical(sys: CoxeterSystem, A: GenSubset) -> bool:
    """A nonspherical with every proper subset spherical.

    Checking the codimension-1 subsets suffices: sphericity is inherited
    by subsets.
    """
    if is_spherical(sys, A):
        return False
    return all(is_spherical(sys, A & ~(1 << i)) for i in iter_bits(A))


def is_irreducible_affine(sys: CoxeterSystem, T: GenSubset, min_rank: int = 2) -> bool:
    """T Dynkin-connected, of size >= min_rank and of an affine family."""
    check_subset(sys, T)
    k = bin(T).count("1")
    if k == 0 or k < min_rank:
        return False
    if len(components(sys, T, DiagramKind.DYNKIN)) != 1:
        return False
    return classify_irreducible(sys, T).affine


# ---------------------------------------------------------------------------
# minimal nonspherical enumeration
#
# Minimal nonspherical subsets are exactly the irreducible affine subsets
# together with the Lanner subsets, so instead of sweeping the powerset we
# walk those diagram shapes: infinity pairs, rank-3 triples with angle sum
# <= 1, labelled paths/cycles/tripods/double forks.  Every hit is verified
# with classify_irreducible, so the searches only need to be complete, not
# minimal.

# Fixed path label words of rank >= 4 (affF4 and the Lanner paths, in both
# reading directions); affC words (4, 3..3, 4) are recognised on the fly.
_PATH_WORDS = frozenset([
    (3, 4, 3, 3), (3, 3, 4, 3),
    (3, 5, 3), (5, 3, 4), (4, 3, 5), (5, 3, 5),
    (5, 3, 3, 3), (3, 3, 3, 5), (5, 3, 3, 4), (4, 3, 3, 5), (5, 3, 3, 5),
])
_PATH_PREFIXES = frozenset(
    w[:i] for w in _PATH_WORDS for i in range(1, len(w)))


def minimal_nonspherical_subsets(sys: CoxeterSystem):
    """All minimal nonspherical subsets, as a sorted list of masks."""
    cached = sys.__dict__.get("_mns_cache")
    if cached is not None:
        return cached
    found = set()
    n = sys.rank
    lab = sys.labels

    # rank 2: infinite dihedral pairs
    for i in range(n):
        for j in range(i + 1, n):
            if lab[i][j] == INFINITY:
                found.add((1 << i) | (1 << j))

    # rank 3: connected all-finite triples with angle sum <= 1
    for i, j, k in combinations(range(n), 3):
        mij, mik, mjk = lab[i][j], lab[i][k], lab[j][k]
        if INFINITY in (mij, mik, mjk):
            continue
        if (mij >= 3) + (mik >= 3) + (mjk >= 3) < 2:
            continue
        if Fraction(1, mij) + Fraction(1, mik) + Fraction(1, mjk) <= 1:
            found.add((1 << i) | (1 << j) | (1 << k))

    _search_paths(sys, found)
    _search_cycles(sys, found)
    _search_tripods(sys, found)
    _search_double_forks(sys, found)

    result = sorted(m for m in found
                    if classify_irreducible(sys, m).family in
                    AFFINE_FAMILIES | {"Lanner"})
    sys.__dict__["_mns_cache"] = result
    return result


def enumerate_minimal_nonspherical(sys: CoxeterSystem, within: GenSubset = None):
    """Minimal nonspherical subsets contained in ``within``.

    Minimality is intrinsic to the subset, so this is a containment filter
    over the global enumeration.
    """
    if within is None:
        within = sys.full_mask
    check_subset(sys, within)
    return [m for m in minimal_nonspherical_subsets(sys) if m & ~within == 0]


def _finite_nbrs(sys, v):
    return [w for w in iter_bits(sys.dynkin_adjacency[v])
            if sys.labels[v][w] != INFINITY]


def _search_paths(sys, found):
    lab = sys.labels

    def c_match(word):
        return (len(word) >= 3 and word[0] == 4 and word[-1] == 4
                and all(m == 3 for m in word[1:-1]))

    def c_prefix(word):
        return word[0] == 4 and all(m == 3 for m in word[1:])

    def extend(chain, word):
        if word in _PATH_WORDS or c_match(word):
            found.add(mask_of(chain))
        if not (word in _PATH_PREFIXES or c_prefix(word)):
            return
        tail = chain[-1]
        for w in _finite_nbrs(sys, tail):
            if w in chain:
                continue
            if any(lab[w][u] != 2 for u in chain[:-1]):
                continue
            extend(chain + [w], word + (lab[tail][w],))

    for i in range(sys.rank):
        for j in _finite_nbrs(sys, i):
            extend([i, j], (lab[i][j],))


def _search_cycles(sys, found):
    # induced cycles of length >= 4: all labels 3 (any length) or a Lanner
    # 4/5-cycle word; triangles are covered by the rank-3 scan
    lab = sys.labels

    def extend(chain, word):
        start, tail = chain[0], chain[-1]
        for w in _finite_nbrs(sys, tail):
            if w <= start or w in chain:
                continue
            if len(chain) == 1:  # first edge; nothing can close yet
                extend([start, w], (lab[start][w],))
                continue
            if any(lab[w][u] != 2 for u in chain[1:-1]):
                continue
            m_close = lab[w][start]
            if m_close == INFINITY:
                continue
            if m_close >= 3:
                if len(chain) >= 3:
                    cyc = word + (lab[tail][w], m_close)
                    k = len(chain) + 1
                    if all(m == 3 for m in cyc) or (
                            k in _LANNER_CYCLES
                            and _cycle_canon(cyc) in _LANNER_CYCLES[k]):
                        found.add(mask_of(chain) | (1 << w))
                continue  # a >= 3 label back to start forbids growing past w
            new_word = word + (lab[tail][w],)
            if all(m == 3 for m in new_word) or len(chain) + 1 < 5:
                extend(chain + [w], new_word)

    for start in range(sys.rank):
        extend([start], ())


def _search_tripods(sys, found):
    # tripods: affB (3-leaf, 3-leaf, arm 3..3,4), affE6/7/8 (all-3 arms of
    # lengths (2,2,2)/(1,3,3)/(1,2,5)), the Lanner trees of rank 4 and 5,
    # and the affD4 star
    lab = sys.labels
    for c in range(sys.rank):
        nbrs = _finite_nbrs(sys, c)
        if len(nbrs) >= 3:
            arms = _grow_arms(sys, c)
            _assemble_tripods(sys, c, arms, found)
        three = [v for v in nbrs if lab[c][v] == 3]
        if len(three) >= 4:
            for four in combinations(three, 4):
                if all(lab[a][b] == 2 for a, b in combinations(four, 2)):
                    found.add((1 << c) | mask_of(four))


def _grow_arms(sys, center):
    """Induced arms out of ``center`` whose label words are viable tripod
    arms: all-3 words of any length, or an all-3 word closed by a 4 or 5."""
    lab = sys.labels
    arms = []

    def extend(chain, word):
        arms.append((tuple(chain[1:]), word))
        tail = chain[-1]
        for w in _finite_nbrs(sys, tail):
            if w in chain:
                continue
            if any(lab[w][u] != 2 for u in chain[:-1]):
                continue
            m = lab[tail][w]
            if m == 3:
                extend(chain + [w], word + (3,))
            elif m in (4, 5):
                arms.append((tuple(chain[1:]) + (w,), word + (m,)))

    for v in _finite_nbrs(sys, center):
        m = lab[center][v]
        if m == 3:
            extend([center, v], (3,))
        elif m in (4, 5):
            arms.append(((v,), (m,)))
    return arms


_TRIPOD_SHAPES = (
    lambda ws: (ws[0] == (3,) and ws[1] == (3,)
                and all(m == 3 for m in ws[2][:-1]) and ws[2][-1] == 4),  # affB
    lambda ws: ws == ((3,), (3,), (5,)),                        # Lanner rank 4
    lambda ws: ws == ((3,), (3,), (3, 5)),                      # Lanner rank 5
    lambda ws: ws == ((3, 3), (3, 3), (3, 3)),                  # affE6
    lambda ws: ws == ((3,), (3, 3, 3), (3, 3, 3)),              # affE7
    lambda ws: ws == ((3,), (3, 3), (3, 3, 3, 3, 3)),           # affE8
)


def _assemble_tripods(sys, center, arms, found):
    lab = sys.labels
    by_first = {}
    for verts, word in arms:
        by_first.setdefault(verts[0], []).append((verts, word))
    for t in combinations(sorted(by_first), 3):
        for (v1, w1) in by_first[t[0]]:
            for (v2, w2) in by_first[t[1]]:
                for (v3, w3) in by_first[t[2]]:
                    vs = v1 + v2 + v3
                    if len(set(vs)) != len(vs):
                        continue
                    words = tuple(sorted((w1, w2, w3), key=lambda w: (len(w), w)))
                    if not any(shape(words) for shape in _TRIPOD_SHAPES):
                        continue
                    if all(lab[a][b] == 2
                           for x, y in combinations((v1, v2, v3), 2)
                           for a in x for b in y):
                        found.add((1 << center) | mask_of(vs))


def _search_double_forks(sys, found):
    # affD_{k-1} for k >= 6: two fork centers joined by an induced all-3
    # path, each with a commuting pair of 3-leaves
    lab = sys.labels

    def leaf_pairs(c):
        three = [v for v in _finite_nbrs(sys, c) if lab[c][v] == 3]
        return [(a, b) for a, b in combinations(three, 2) if lab[a][b] == 2]

    def close(chain):
        c1, c2 = chain[0], chain[-1]
        for la, lb in leaf_pairs(c1):
            if la in chain or lb in chain:
                continue
            if any(lab[x][v] != 2 for x in (la, lb) for v in chain[1:]):
                continue
            for lc, ld in leaf_pairs(c2):
                group = {la, lb, lc, ld}
                if len(group) != 4 or group & set(chain):
                    continue
                if any(lab[x][v] != 2 for x in (lc, ld) for v in chain[:-1]):
                    continue
                if any(lab[x][y] != 2 for x in (la, lb) for y in (lc, ld)):
                    continue
                found.add(mask_of(chain) | mask_of(group))

    def extend(chain):
        if len(chain) >= 2:
            close(chain)
        tail = chain[-1]
        for w in _finite_nbrs(sys, tail):
            if w in chain or lab[tail][w] != 3:
                continue
            if any(lab[w][u] != 2 for u in chain[:-1]):
                continue
            extend(chain + [w])

    for start in range(sys.rank):
        extend([start])


# ---------------------------------------------------------------------------
# ends

def ends(sys: CoxeterSystem, max_rank: int = None):
    """Number of ends of W: 0, 1, 2 or INFINITY.

    Checks run in the order 0, 2, infinity, 1 so the 2-ended product shape
    is not misreported as infinitely ended.  The infinite-ends criterion
    (some spherical subset, possibly empty, disconnects the nerve
    1-skeleton of the rest) sweeps the subset lattice and is therefore
    guarded by the exhaustive-mode rank cap.
    """
    from . import kernels  # local import; kernels never imports classify

    if is_spherical(sys, sys.full_mask):
        return 0
    for s in range(sys.rank):
        for t in range(s + 1, sys.rank):
            if sys.labels[s][t] != INFINITY:
                continue
            pair = (1 << s) | (1 << t)
            K = sys.full_mask & ~pair
            if perp(sys, pair) == K and is_spherical(sys, K):
                return 2
    tables = kernels.system_tables(sys, max_rank=max_rank)
    if kernels.spherical_nerve_cut(sys, tables) is not None:
        return INFINITY
    return 1
