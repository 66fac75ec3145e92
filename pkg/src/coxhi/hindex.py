"""Wide/slab subsets, the Lambda sequence, hypergraph index and reports.

The pipeline per system: the per-subset kernel tables give sphericity and
the pre-wide component test for every generator subset; the wide subsets
are the maximal pre-wide masks; slabs pair each minimal nonspherical set
with the maximal spherical subsets of its perp; the Lambda levels then
repeatedly merge level elements along nonspherical intersections until
the full generating set appears (finite index) or the level repeats
(infinite index).

Everything is deterministic: subsets are plain int bitmasks, all returned
collections are sorted by mask value, and class/chain tie-breaks always
take the canonically smallest qualifying subset.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from . import classify, kernels
from .core import (
    INFINITY,
    CoxeterSystem,
    GenSubset,
    RankCapExceeded,
    check_subset,
    commutes,
    components,
    induced,
    iter_bits,
    mask_of,
    perp,
)

#: The class-T fixpoint iterates over pairs of marked subsets, which is
#: O(4^rank) in the worst case.
CLASS_T_RANK_CAP = 12

CASE_BOTH_NONSPHERICAL = "BothNonspherical"
CASE_AFFINE_TIMES_SPHERICAL = "AffineTimesSpherical"


@dataclass(frozen=True)
class WideWitness:
    subset: GenSubset
    a: GenSubset
    b: GenSubset
    case: str


@dataclass(frozen=True)
class SlabWitness:
    subset: GenSubset
    a: GenSubset  # minimal nonspherical
    k: GenSubset  # nonempty spherical, maximal in perp(a)


@dataclass(frozen=True)
class LambdaClass:
    members: tuple  # masks of one equivalence class, ascending
    union: GenSubset


@dataclass(frozen=True)
class LambdaAnalysis:
    omega: tuple
    psi: tuple
    levels: tuple          # levels[i] = ascending masks of Lambda_i
    classes: tuple         # classes[i] groups levels[i]; feeds levels[i+1]
    h: object              # int or INFINITY
    stabilized_at: object  # level index, or None when h is finite

    def feeds_into(self, i):
        """Directed edges (member, union) from level i to level i + 1."""
        return [(m, c.union) for c in self.classes[i] for m in c.members]


@dataclass(frozen=True)
class CertificateNode:
    subset: GenSubset
    level: int
    kind: str  # "wide" | "slab" | "union"
    children: tuple


@dataclass(frozen=True)
class RHViolation:
    condition: str  # "RH1" | "RH2" | "RH3"
    detail: str
    witness: tuple


@dataclass(frozen=True)
class RHVerdict:
    ok: bool
    violations: tuple


@dataclass(frozen=True)
class DivergenceReport:
    one_ended: bool
    classification: str  # Linear | Quadratic | PolyUpperBound | Exponential | NotApplicable
    poly_degree: object
    thickness_order_upper_bound: object
    conjectural_exact_degree: object
    h: object

    @property
    def label(self):
        if self.classification == "PolyUpperBound":
            return "PolyUpperBound(%d)" % self.poly_degree
        return self.classification


class Analysis:
    """All hypergraph-index computations for one system; results cached."""

    def __init__(self, sys: CoxeterSystem, max_rank=None):
        self.sys = sys
        self.max_rank = max_rank
        self._cache = {}

    @property
    def tables(self):
        return kernels.system_tables(self.sys, self.max_rank)

    def _cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    # -- wide subsets -------------------------------------------------------

    def wide_subsets(self):
        return self._cached("omega", self._compute_omega)

    def _compute_omega(self):
        t = self.tables
        out = []
        for mask in kernels.maximal_prewide_masks(self.sys, t):
            comps = components(self.sys, mask)
            nonsph = [c for c in comps if not t.spherical[c]]
            a = nonsph[0]
            b = mask & ~a
            if len(nonsph) >= 2:
                case = CASE_BOTH_NONSPHERICAL
            else:
                case = CASE_AFFINE_TIMES_SPHERICAL
                assert t.affine[a] and a.bit_count() >= 3
            out.append(WideWitness(mask, a, b, case))
        return tuple(out)

    # -- slab subsets -------------------------------------------------------

    def slab_subsets(self):
        return self._cached("psi", self._compute_psi)

    def _compute_psi(self):
        t = self.tables
        sys = self.sys
        omega_masks = [w.subset for w in self.wide_subsets()]
        mns = classify.minimal_nonspherical_subsets(sys)
        memo = {}
        cands = {}
        for A in mns:
            P = perp(sys, A)
            if not P:
                continue
            for K in self._maximal_spherical(P, memo, mns):
                T = A | K
                if any(T & ~w == 0 for w in omega_masks):
                    continue  # inside a wide subset
                prev = cands.setdefault(T, (A, K))
                assert prev == (A, K), "ambiguous slab decomposition"
        order = sorted(cands, key=lambda m: (-m.bit_count(), m))
        kept = []
        for m in order:
            if not any(m & ~big == 0 for big in kept):
                kept.append(m)
        kept.sort()
        out = tuple(SlabWitness(m, *cands[m]) for m in kept)
        # a slab subset cannot contain a wide subset
        for s in out:
            assert not any(w & ~s.subset == 0 for w in omega_masks)
        return out

    def _maximal_spherical(self, P, memo, mns):
        """Maximal spherical submasks of P (P nonempty)."""
        hit = memo.get(P)
        if hit is not None:
            return hit
        t = self.tables
        if t.spherical[P]:
            memo[P] = (P,)
            return (P,)
        witness = next(m for m in mns if m & ~P == 0)
        acc = set()
        for a in iter_bits(witness):
            acc.update(self._maximal_spherical(P & ~(1 << a), memo, mns))
        order = sorted(acc, key=lambda m: (-m.bit_count(), m))
        kept = []
        for m in order:
            if not any(m & ~big == 0 for big in kept):
                kept.append(m)
        result = tuple(sorted(kept))
        memo[P] = result
        return result

    # -- Lambda sequence ----------------------------------------------------

    def lambda_analysis(self) -> LambdaAnalysis:
        return self._cached("lambda", self._compute_lambda)

    def _compute_lambda(self):
        omega = self.wide_subsets()
        psi = self.slab_subsets()
        psi_set = {s.subset for s in psi}
        # elements of the A x K form (Lemma: two distinct such elements
        # always intersect spherically)
        ak_form = psi_set | {w.subset for w in omega
                             if w.case == CASE_AFFINE_TIMES_SPHERICAL}
        full = self.sys.full_mask
        level0 = tuple(sorted({w.subset for w in omega} | psi_set))
        levels = [level0]
        classes = []
        h = None
        stabilized_at = None
        if omega and full in level0:
            h = 0
        else:
            while True:
                cur = levels[-1]
                cls = self._level_classes(cur, ak_form if len(levels) == 1 else None)
                classes.append(cls)
                nxt = tuple(sorted({c.union for c in cls}))
                if nxt == cur:
                    stabilized_at = len(levels) - 1
                    break
                assert len(nxt) < len(cur)
                levels.append(nxt)
                if omega and full in nxt:
                    h = len(levels) - 1
                    break
                assert len(levels) <= len(level0) + 1
        if h is None:
            h = INFINITY
        else:
            assert h <= len(level0)
        return LambdaAnalysis(omega, psi, tuple(levels), tuple(classes), h,
                              stabilized_at)

    def _level_classes(self, cur, ak_form=None):
        t = self.tables
        n = len(cur)
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i in range(n):
            for j in range(i + 1, n):
                inter = cur[i] & cur[j]
                if inter and not t.spherical[inter]:
                    if ak_form is not None and cur[i] in ak_form \
                            and cur[j] in ak_form:
                        raise AssertionError(
                            "distinct A x K elements with nonspherical "
                            "intersection: 0x%x, 0x%x" % (cur[i], cur[j]))
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj
        groups = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(cur[i])
        classes = []
        for members in groups.values():
            members.sort()
            u = 0
            for m in members:
                u |= m
            classes.append(LambdaClass(tuple(members), u))
        classes.sort(key=lambda c: c.members[0])
        return tuple(classes)

    def hypergraph_index(self):
        return self.lambda_analysis().h

    # -- certificates and chains -------------------------------------------

    def thickness_certificate(self):
        lam = self.lambda_analysis()
        if lam.h == INFINITY:
            return None
        psi_set = {s.subset for s in lam.psi}

        def build(mask, level):
            if level == 0:
                return CertificateNode(
                    mask, 0, "slab" if mask in psi_set else "wide", ())
            for c in lam.classes[level - 1]:
                if c.union == mask:
                    if c.members == (mask,):
                        return build(mask, level - 1)
                    return CertificateNode(
                        mask, level, "union",
                        tuple(build(m, level - 1) for m in c.members))
            raise AssertionError("no class produced 0x%x at level %d"
                                 % (mask, level))

        return build(self.sys.full_mask, lam.h)

    def nested_chain(self):
        """Subsets S > T_1 > ... > T_h with hypergraph index h-1, ..., 0."""
        lam = self.lambda_analysis()
        if lam.h == INFINITY or lam.h == 0:
            return []
        chain = []
        ana = self
        parent_map = list(range(self.sys.rank))
        while True:
            lam = ana.lambda_analysis()
            h = lam.h
            if h == 0 or h == INFINITY:
                break
            full = ana.sys.full_mask
            cls = next(c for c in lam.classes[h - 1] if c.union == full)
            lower = set()
            for lvl in lam.levels[:h - 1]:
                lower.update(lvl)
            pick = None
            for m in cls.members:  # ascending: canonical tie-break
                if not any(m & ~u == 0 for u in lower):
                    pick = m
                    break
            assert pick is not None, "no class member avoids lower levels"
            chain.append(mask_of(parent_map[i] for i in iter_bits(pick)))
            sub, parent = induced(ana.sys, pick)
            parent_map = [parent_map[i] for i in parent]
            ana = Analysis(sub, self.max_rank)
        return chain

    # -- relative hyperbolicity ---------------------------------------------

    def peripheral_structure(self):
        """Non-slab elements of the stabilized level (h infinite), else None.

        An empty list means the group is hyperbolic.
        """
        lam = self.lambda_analysis()
        if lam.h != INFINITY:
            return None
        assert lam.stabilized_at is not None
        psi_set = {s.subset for s in lam.psi}
        return [m for m in lam.levels[lam.stabilized_at] if m not in psi_set]

    def check_rh(self, peripherals) -> RHVerdict:
        """Evaluate Caprace's conditions RH1-RH3 for the given peripherals."""
        sys = self.sys
        t = self.tables
        full = sys.full_mask
        periph = sorted(set(peripherals))
        for p in periph:
            check_subset(sys, p)
            if p == full:
                raise ValueError("a peripheral subset equal to S is rejected")

        violations = []
        mns = classify.minimal_nonspherical_subsets(sys)

        def covered(mask):
            return any(mask & ~p == 0 for p in periph)

        # RH1, affine half: every irreducible affine subset of size >= 3 is
        # contained in some peripheral.  Affine subsets are minimal
        # nonspherical, so the enumeration suffices.
        for m in mns:
            if m.bit_count() >= 3 and t.affine[m] and not covered(m):
                violations.append(RHViolation(
                    "RH1", "irreducible affine subset not covered", (m,)))
                break

        # RH1, product half: every commuting pair of irreducible
        # nonspherical subsets is covered.  It suffices to pair each
        # connected nonspherical T1 with the maximal connected nonspherical
        # subsets of perp(T1): covering the maximal partner covers all
        # smaller ones.
        pair_vio = None
        for t1 in range(1, full + 1):
            if not t.connected[t1] or t.spherical[t1]:
                continue
            P = perp(sys, t1)
            if not P or t.spherical[P]:
                continue
            for t2 in self._max_connected_nonspherical_in(P):
                if not covered(t1 | t2):
                    pair_vio = RHViolation(
                        "RH1", "commuting nonspherical pair not covered",
                        (t1, t2))
                    break
            if pair_vio:
                break
        if pair_vio:
            violations.append(pair_vio)

        for a, b in combinations(periph, 2):
            inter = a & b
            if inter and not t.spherical[inter]:
                violations.append(RHViolation(
                    "RH2", "peripheral intersection is nonspherical", (a, b)))
                break

        # RH3: U^perp inside T for every irreducible nonspherical U in T.
        # perp is antitone, so checking the minimal nonspherical subsets
        # of T suffices.
        done = False
        for p in periph:
            for m in mns:
                if m & ~p == 0:
                    out = perp(sys, m) & ~p
                    if out:
                        violations.append(RHViolation(
                            "RH3", "perp of a nonspherical subset escapes",
                            (p, m, out)))
                        done = True
                        break
            if done:
                break

        return RHVerdict(not violations, tuple(violations))

    def _max_connected_nonspherical_in(self, P):
        t = self.tables
        items = []
        sub = P
        while True:
            if sub and t.connected[sub] and not t.spherical[sub]:
                items.append(sub)
            if sub == 0:
                break
            sub = (sub - 1) & P
        items.sort(key=lambda m: (-m.bit_count(), m))
        kept = []
        for m in items:
            if not any(m & ~big == 0 for big in kept):
                kept.append(m)
        kept.sort()
        return kept

    # -- global classification ----------------------------------------------

    def is_hyperbolic(self):
        return is_hyperbolic(self.sys)

    def in_class_T(self):
        """Membership of the whole system in the inductive thickness class.

        Returns (verdict, derivation): the derivation lists marking steps
        (mask, rule, *references) in dependency order, or None when the
        verdict is negative.
        """
        sys = self.sys
        if sys.rank > CLASS_T_RANK_CAP:
            raise RankCapExceeded(
                "class-T membership is only supported up to rank %d "
                "(got %d)" % (CLASS_T_RANK_CAP, sys.rank))
        t = self.tables
        sph = t.spherical
        full = sys.full_mask
        marked = {}
        order = []
        queue = deque()

        def mark(mask, why):
            if mask not in marked:
                marked[mask] = why
                order.append(mask)
                queue.append(mask)

        for mask in range(3, full + 1):
            if sph[mask]:
                continue
            comps = components(sys, mask)
            if len(comps) == 1:
                if mask.bit_count() >= 3 and t.affine[mask]:
                    mark(mask, ("affine-base",))
            elif len(comps) == 2:
                c1, c2 = comps
                if not sph[c1] and not sph[c2]:
                    mark(mask, ("product-base", c1, c2))

        perp_masks = [full & ~sys.dynkin_adjacency[s] & ~(1 << s)
                      for s in range(sys.rank)]
        while queue:
            m = queue.popleft()
            if full in marked:
                break
            for s in iter_bits(full & ~m):
                grown = m | (1 << s)
                if grown not in marked and not sph[perp_masks[s] & m]:
                    mark(grown, ("extend", m, s))
            for other in list(order):
                inter = m & other
                if other != m and inter and not sph[inter]:
                    u = m | other
                    if u not in marked:
                        mark(u, ("union", m, other))

        if full not in marked:
            return False, None
        steps = []
        seen = set()

        def expand(mask):
            if mask in seen:
                return
            seen.add(mask)
            why = marked[mask]
            if why[0] == "extend":
                expand(why[1])
            elif why[0] == "union":
                expand(why[1])
                expand(why[2])
            steps.append((mask,) + why)

        expand(full)
        return True, steps

    def linear_divergence_structural(self):
        """Structural linear-divergence test (independent of the Lambda
        machinery); None when the group is not 1-ended."""
        sys = self.sys
        if classify.ends(sys, self.max_rank) != 1:
            return None
        comps = components(sys, sys.full_mask)
        nonsph = [c for c in comps if not classify.is_spherical(sys, c)]
        if len(nonsph) >= 2:
            return True
        if len(nonsph) == 1:
            c = nonsph[0]
            return (c.bit_count() >= 3
                    and classify.classify_irreducible(sys, c).affine)
        return False

    def divergence_report(self) -> DivergenceReport:
        e = classify.ends(self.sys, self.max_rank)
        h = self.hypergraph_index()
        if e != 1:
            return DivergenceReport(False, "NotApplicable", None, None, None, h)
        if h == INFINITY:
            return DivergenceReport(True, "Exponential", None, None, None, h)
        if h == 0:
            return DivergenceReport(True, "Linear", None, 0, None, 0)
        if h == 1:
            return DivergenceReport(True, "Quadratic", None, 1, None, 1)
        return DivergenceReport(True, "PolyUpperBound", h + 1, h, h + 1, h)


# ---------------------------------------------------------------------------
# module-level API

def analysis(sys: CoxeterSystem, max_rank=None) -> Analysis:
    ana = sys.__dict__.get("_analysis")
    if ana is None:
        kernels.check_rank_cap(sys, max_rank)
        ana = sys.__dict__.setdefault("_analysis", Analysis(sys, max_rank))
    return ana


def wide_subsets(sys, max_rank=None):
    return analysis(sys, max_rank).wide_subsets()


def slab_subsets(sys, max_rank=None):
    return analysis(sys, max_rank).slab_subsets()


def lambda_sequence(sys, max_rank=None) -> LambdaAnalysis:
    return analysis(sys, max_rank).lambda_analysis()


def hypergraph_index(sys, max_rank=None):
    return analysis(sys, max_rank).hypergraph_index()


def thickness_certificate(sys, max_rank=None):
    return analysis(sys, max_rank).thickness_certificate()


def nested_chain(sys, max_rank=None):
    return analysis(sys, max_rank).nested_chain()


def peripheral_structure(sys, max_rank=None):
    return analysis(sys, max_rank).peripheral_structure()


def check_rh(sys, peripherals, max_rank=None) -> RHVerdict:
    return analysis(sys, max_rank).check_rh(peripherals)


def in_class_T(sys, max_rank=None):
    return analysis(sys, max_rank).in_class_T()


def divergence_report(sys, max_rank=None) -> DivergenceReport:
    return analysis(sys, max_rank).divergence_report()


def linear_divergence_structural(sys, max_rank=None):
    return analysis(sys, max_rank).linear_divergence_structural()


def is_hyperbolic(sys: CoxeterSystem) -> bool:
    """Moussong's criterion, evaluated directly: hyperbolic iff there is
    neither an irreducible affine subset of rank >= 3 nor a commuting pair
    of nonspherical subsets.  Both reduce to the minimal nonspherical
    enumeration, so this route never touches the wide-subset machinery.
    """
    mns = classify.minimal_nonspherical_subsets(sys)
    for m in mns:
        if m.bit_count() >= 3 and classify.classify_irreducible(sys, m).affine:
            return False
    for a, b in combinations(mns, 2):
        if commutes(sys, a, b):
            return False
    return True
