"""Coxeter systems, generator subsets and the associated graphs.

A Coxeter system is stored as its symmetric label matrix m(i, j) with
m(i, i) = 1 and off-diagonal labels in {2, 3, ...} or INFINITY.  Generator
subsets are plain Python ints used as bitmasks over the generator indices
(bit i <-> generator i), which keeps every subset computation a couple of
machine-word operations.  The rank is capped at 64 so a subset always fits
in one word.

All values are immutable after construction; every function here is pure
and safe to call concurrently on shared systems.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

INFINITY = math.inf

#: Hard representation cap: subsets of generators must fit in a machine word.
RANK_WORD_CAP = 64

#: Type alias: a generator subset is an int bitmask over {0, ..., rank-1}.
GenSubset = int


class CoxeterError(Exception):
    """Base class for errors raised by this package."""


class ParseError(CoxeterError):
    """Malformed CXS/JSON input."""


class RankLimitError(CoxeterError):
    """Rank exceeds the 64-generator representation cap."""


class RankCapExceeded(CoxeterError):
    """An exhaustive operation was invoked above the configured rank cap."""


class DiagramKind(Enum):
    """Which derived graph an edge predicate refers to."""

    DYNKIN = "dynkin"          # edge iff m(i, j) >= 3, including infinity
    DEFINING = "defining"      # edge iff m(i, j) < infinity
    NERVE1 = "nerve1"          # edge iff m(i, j) < infinity, i != j


def _check_label(value):
    if value == INFINITY:
        return INFINITY
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError("label must be an integer >= 2 or INFINITY, got %r" % (value,))
    if value < 2:
        raise ValueError("off-diagonal label must be >= 2, got %d" % value)
    return value


class CoxeterSystem:
    """A Coxeter system (W, S): the label matrix plus generator names.

    >>> sys = CoxeterSystem.from_edges(2, {(0, 1): INFINITY})
    >>> sys.label(0, 1)
    inf
    >>> sys.names
    ('s1', 's2')
    """

    __slots__ = ("rank", "labels", "names", "__dict__")

    def __init__(self, labels, names=None):
        rows = tuple(tuple(row) for row in labels)
        rank = len(rows)
        if rank > RANK_WORD_CAP:
            raise RankLimitError(
                "rank %d exceeds the %d-generator cap" % (rank, RANK_WORD_CAP))
        for i, row in enumerate(rows):
            if len(row) != rank:
                raise ValueError("label matrix is not square")
            if row[i] != 1:
                raise ValueError("diagonal label m(%d,%d) must be 1" % (i, i))
            for j in range(rank):
                if i == j:
                    continue
                _check_label(row[j])
                if row[j] != rows[j][i]:
                    raise ValueError("label matrix is not symmetric at (%d,%d)" % (i, j))
        if names is None:
            names = tuple("s%d" % (i + 1) for i in range(rank))
        else:
            names = tuple(str(n) for n in names)
            if len(names) != rank:
                raise ValueError("expected %d generator names, got %d" % (rank, len(names)))
            if len(set(names)) != rank:
                raise ValueError("generator names must be distinct")
        self.rank = rank
        self.labels = rows
        self.names = names

    @classmethod
    def from_edges(cls, rank, edges, default=2, names=None):
        """Build a system from rank, a default label and explicit pair labels.

        ``edges`` maps index pairs (i, j), 0-based, to labels; unspecified
        pairs get ``default`` (2 or INFINITY).
        """
        if default not in (2, INFINITY):
            raise ValueError("default label must be 2 or INFINITY")
        m = [[default] * rank for _ in range(rank)]
        for i in range(rank):
            m[i][i] = 1
        for (i, j), label in edges.items():
            if i == j or not (0 <= i < rank and 0 <= j < rank):
                raise ValueError("bad generator pair (%d, %d)" % (i, j))
            m[i][j] = label
            m[j][i] = label
        return cls(m, names=names)

    def label(self, i, j):
        return self.labels[i][j]

    @property
    def full_mask(self) -> GenSubset:
        return (1 << self.rank) - 1

    def index_of(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError("unknown generator name %r" % (name,)) from None

    @cached_property
    def dynkin_adjacency(self):
        """adjacency[i] = bitmask of j != i with m(i, j) >= 3 (incl. infinity)."""
        return self._adjacency(lambda m: m >= 3)

    @cached_property
    def nerve_adjacency(self):
        """adjacency[i] = bitmask of j != i with m(i, j) finite."""
        return self._adjacency(lambda m: m < INFINITY)

    def _adjacency(self, pred):
        out = []
        for i in range(self.rank):
            mask = 0
            for j in range(self.rank):
                if i != j and pred(self.labels[i][j]):
                    mask |= 1 << j
            out.append(mask)
        return tuple(out)

    def adjacency(self, kind: DiagramKind):
        if kind is DiagramKind.DYNKIN:
            return self.dynkin_adjacency
        # The defining graph and nerve 1-skeleton have the same edge set on
        # distinct generators.
        return self.nerve_adjacency

    def is_right_angled(self):
        return all(self.labels[i][j] in (2, INFINITY)
                   for i in range(self.rank) for j in range(i + 1, self.rank))

    def label_histogram(self):
        """Multiset of off-diagonal labels (each unordered pair counted once)."""
        hist = {}
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                m = self.labels[i][j]
                hist[m] = hist.get(m, 0) + 1
        return hist

    def __eq__(self, other):
        return (isinstance(other, CoxeterSystem)
                and self.labels == other.labels and self.names == other.names)

    def __hash__(self):
        return hash((self.labels, self.names))

    def __repr__(self):
        return "CoxeterSystem(rank=%d)" % self.rank


# ---------------------------------------------------------------------------
# subset helpers

def iter_bits(mask: GenSubset):
    """Yield the set bit indices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(indices) -> GenSubset:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def mask_from_names(sys: CoxeterSystem, names) -> GenSubset:
    return mask_of(sys.index_of(n) for n in names)


def names_of_mask(sys: CoxeterSystem, mask: GenSubset):
    return [sys.names[i] for i in iter_bits(mask)]


def check_subset(sys: CoxeterSystem, mask: GenSubset):
    if mask < 0 or mask >> sys.rank:
        raise ValueError("subset 0x%x out of range for rank %d" % (mask, sys.rank))
    return mask


# ---------------------------------------------------------------------------
# basic combinatorial queries

def induced(sys: CoxeterSystem, T: GenSubset):
    """Induced subsystem on ``T``.

    Returns ``(subsystem, parent)`` where ``parent[k]`` is the index in
    ``sys`` of generator ``k`` of the subsystem.  Generator order (and hence
    the index map) follows increasing index in ``sys``.
    """
    check_subset(sys, T)
    parent = tuple(iter_bits(T))
    labels = [[sys.labels[a][b] for b in parent] for a in parent]
    names = [sys.names[a] for a in parent]
    return CoxeterSystem(labels, names=names), parent


def components(sys: CoxeterSystem, T: GenSubset, kind=DiagramKind.DYNKIN):
    """Connected components of ``T`` in the chosen graph, as a list of masks.

    Deterministic order: by smallest member index.
    """
    check_subset(sys, T)
    adj = sys.adjacency(kind)
    out = []
    rest = T
    while rest:
        low = rest & -rest
        comp = _flood(adj, T, low)
        out.append(comp)
        rest &= ~comp
    return out  # already ordered by smallest member, since rest shrinks upward


def _flood(adj, universe, seed):
    comp = 0
    frontier = seed
    while frontier:
        comp |= frontier
        grow = 0
        for i in iter_bits(frontier):
            grow |= adj[i]
        frontier = grow & universe & ~comp
    return comp


def perp(sys: CoxeterSystem, T: GenSubset) -> GenSubset:
    """All generators outside ``T`` commuting with every element of ``T``."""
    check_subset(sys, T)
    out = sys.full_mask & ~T
    for i in iter_bits(T):
        keep = 0
        for j in iter_bits(out):
            if sys.labels[i][j] == 2:
                keep |= 1 << j
        out = keep
        if not out:
            break
    return out


def commutes(sys: CoxeterSystem, A: GenSubset, B: GenSubset) -> bool:
    """True iff A and B are disjoint and every cross label is 2."""
    check_subset(sys, A)
    check_subset(sys, B)
    if A & B:
        return False
    return all(sys.labels[a][b] == 2 for a in iter_bits(A) for b in iter_bits(B))


def betti(sys: CoxeterSystem) -> int:
    """First Betti number e - v + k of the Dynkin diagram of the whole system."""
    v = sys.rank
    e = sum(bin(m).count("1") for m in sys.dynkin_adjacency) // 2
    k = len(components(sys, sys.full_mask, DiagramKind.DYNKIN))
    return e - v + k


# ---------------------------------------------------------------------------
# CXS text format
#
# One directive per line, '#' starts a comment:
#   rank N            required, first directive
#   default 2|inf     optional (default "2"): label of unspecified pairs
#   names a b c ...   optional: N distinct whitespace-free tokens
#   edge I J M        1-based indices, M a decimal integer >= 2 or "inf"

_TOKEN_RE = re.compile(r"\S+")


def _parse_label_token(tok):
    if tok == "inf":
        return INFINITY
    if not tok.isdigit():
        raise ParseError("bad label %r (expected integer >= 2 or 'inf')" % tok)
    value = int(tok)
    if value < 2:
        raise ParseError("label %d out of range (must be >= 2)" % value)
    return value


def parse_cxs(text: str) -> CoxeterSystem:
    """Parse the CXS text format into a CoxeterSystem."""
    rank = None
    default = 2
    names = None
    edges = {}
    seen_default = seen_names = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = _TOKEN_RE.findall(line)
        key = toks[0]
        if rank is None:
            if key != "rank" or len(toks) != 2 or not toks[1].isdigit():
                raise ParseError("line %d: expected 'rank N' first" % lineno)
            rank = int(toks[1])
            if rank > RANK_WORD_CAP:
                raise RankLimitError(
                    "line %d: rank %d exceeds the %d cap" % (lineno, rank, RANK_WORD_CAP))
            continue
        if key == "rank":
            raise ParseError("line %d: duplicate rank directive" % lineno)
        if key == "default":
            if seen_default or len(toks) != 2 or toks[1] not in ("2", "inf"):
                raise ParseError("line %d: bad default directive" % lineno)
            default = 2 if toks[1] == "2" else INFINITY
            seen_default = True
        elif key == "names":
            if seen_names:
                raise ParseError("line %d: duplicate names directive" % lineno)
            names = toks[1:]
            if len(names) != rank:
                raise ParseError("line %d: expected %d names, got %d"
                                 % (lineno, rank, len(names)))
            seen_names = True
        elif key == "edge":
            if len(toks) != 4:
                raise ParseError("line %d: expected 'edge I J M'" % lineno)
            if not (toks[1].isdigit() and toks[2].isdigit()):
                raise ParseError("line %d: bad generator index" % lineno)
            i, j = int(toks[1]) - 1, int(toks[2]) - 1
            if i == j:
                raise ParseError("line %d: self edge" % lineno)
            if not (0 <= i < rank and 0 <= j < rank):
                raise ParseError("line %d: generator index out of range" % lineno)
            m = _parse_label_token(toks[3])
            key_pair = (min(i, j), max(i, j))
            if key_pair in edges and edges[key_pair] != m:
                raise ParseError("line %d: conflicting label for edge %d %d"
                                 % (lineno, key_pair[0] + 1, key_pair[1] + 1))
            edges[key_pair] = m
        else:
            raise ParseError("line %d: unknown directive %r" % (lineno, key))
    if rank is None:
        raise ParseError("missing rank directive")
    try:
        return CoxeterSystem.from_edges(rank, edges, default=default, names=names)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def to_cxs(sys: CoxeterSystem) -> str:
    """Serialize with the explicit ``default 2`` convention.

    parse_cxs(to_cxs(sys)) reproduces the system bit-exactly.
    """
    lines = ["rank %d" % sys.rank, "default 2", "names " + " ".join(sys.names)
             if sys.rank else "names"]
    if sys.rank == 0:
        lines = ["rank 0", "default 2"]
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            m = sys.labels[i][j]
            if m != 2:
                tok = "inf" if m == INFINITY else str(m)
                lines.append("edge %d %d %s" % (i + 1, j + 1, tok))
    return "\n".join(lines) + "\n"


def parse_json_system(data) -> CoxeterSystem:
    """Build a system from the JSON encoding used by the CLI.

    Expected keys: ``rank`` (int), optional ``names``, optional ``default``
    ("2" or "inf"), and ``edges``: a list of [I, J, M] with 1-based indices
    and M an integer or "inf".
    """
    if not isinstance(data, dict) or "rank" not in data:
        raise ParseError("JSON system must be an object with a 'rank' key")
    rank = data["rank"]
    if not isinstance(rank, int) or rank < 0:
        raise ParseError("bad rank in JSON system")
    if rank > RANK_WORD_CAP:
        raise RankLimitError("rank %d exceeds the %d cap" % (rank, RANK_WORD_CAP))
    default_tok = data.get("default", "2")
    if default_tok not in ("2", "inf"):
        raise ParseError("bad default in JSON system")
    default = 2 if default_tok == "2" else INFINITY
    edges = {}
    for entry in data.get("edges", []):
        try:
            i, j, m = entry
        except (TypeError, ValueError):
            raise ParseError("bad edge entry %r" % (entry,)) from None
        if m == "inf":
            m = INFINITY
        if not (isinstance(i, int) and isinstance(j, int)):
            raise ParseError("bad edge entry %r" % (entry,))
        i, j = i - 1, j - 1
        if i == j or not (0 <= i < rank and 0 <= j < rank):
            raise ParseError("edge indices out of range in %r" % (entry,))
        if m != INFINITY and (not isinstance(m, int) or m < 2):
            raise ParseError("bad label in edge %r" % (entry,))
        pair = (min(i, j), max(i, j))
        if pair in edges and edges[pair] != m:
            raise ParseError("conflicting label for edge %d %d" % (pair[0] + 1, pair[1] + 1))
        edges[pair] = m
    try:
        return CoxeterSystem.from_edges(rank, edges, default=default,
                                        names=data.get("names"))
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
