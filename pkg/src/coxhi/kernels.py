"""Kernel selection and per-system table caching.

The subset sweeps (sphericity/pre-wide tables over all 2^n generator
subsets) dominate the running time of every exhaustive analysis, so they
live in a compiled Cython extension with a pure-Python twin.  The
implementation is chosen at import: the extension if it built, otherwise
the fallback.  Set COXHI_FORCE_PY_KERNELS=1 to force the fallback (used
by the differential tests and the benchmark).
"""

from __future__ import annotations

import os
from dataclasses import dataclass

from .core import INFINITY, CoxeterSystem, GenSubset, RankCapExceeded

from . import _kernels_py

if os.environ.get("COXHI_FORCE_PY_KERNELS"):
    _impl = _kernels_py
    IMPLEMENTATION = "python"
else:
    try:
        from . import _kernels_cy as _impl
        IMPLEMENTATION = "cython"
    except ImportError:  # extension not built; fall back
        _impl = _kernels_py
        IMPLEMENTATION = "python"

#: Default cap for every operation that sweeps all 2^rank subsets.
DEFAULT_MAX_RANK = 20


def implementation_module(name):
    """The kernel module named "python" or "cython" (for benchmarks/tests)."""
    if name == "python":
        return _kernels_py
    from . import _kernels_cy
    return _kernels_cy


@dataclass(frozen=True)
class SystemTables:
    """Per-subset lookup tables for one system (indexable by mask)."""

    rank: int
    spherical: bytearray
    affine: bytearray
    connected: bytearray
    prewide: bytearray


def _kernel_labels(sys: CoxeterSystem) -> bytes:
    """Flat label matrix for the kernels: infinity -> 0, finite clamped to 7.

    Clamping is sound: no classified diagram distinguishes finite labels
    above 6, and any label >= 7 already forces the rank-3 angle sum
    below 1.
    """
    n = sys.rank
    flat = bytearray(n * n)
    for i in range(n):
        for j in range(n):
            m = sys.labels[i][j]
            flat[i * n + j] = 0 if m == INFINITY else min(int(m), 7)
    return bytes(flat)


def _inf_adjacency(sys: CoxeterSystem):
    out = []
    for i in range(sys.rank):
        mask = 0
        for j in range(sys.rank):
            if i != j and sys.labels[i][j] == INFINITY:
                mask |= 1 << j
        out.append(mask)
    return out


def check_rank_cap(sys: CoxeterSystem, max_rank=None):
    cap = DEFAULT_MAX_RANK if max_rank is None else max_rank
    if sys.rank > cap:
        raise RankCapExceeded(
            "rank %d exceeds the exhaustive-mode cap %d (raise it with "
            "--max-rank / max_rank)" % (sys.rank, cap))


def system_tables(sys: CoxeterSystem, max_rank=None) -> SystemTables:
    """Build (or fetch the cached) subset tables for a system."""
    cached = sys.__dict__.get("_kernel_tables")
    if cached is not None:
        return cached
    check_rank_cap(sys, max_rank)
    spherical, affine, connected, prewide = _impl.build_tables(
        sys.rank, _kernel_labels(sys), list(sys.dynkin_adjacency),
        _inf_adjacency(sys))
    tables = SystemTables(sys.rank, spherical, affine, connected, prewide)
    sys.__dict__["_kernel_tables"] = tables
    return tables


def minimal_nonspherical_masks(sys: CoxeterSystem, tables: SystemTables):
    return _impl.minimal_nonspherical(sys.rank, tables.spherical)


def maximal_prewide_masks(sys: CoxeterSystem, tables: SystemTables):
    return _impl.maximal_flagged(sys.rank, tables.prewide)


def maximal_flagged(rank: int, flags):
    return _impl.maximal_flagged(rank, flags)


def spherical_nerve_cut(sys: CoxeterSystem, tables: SystemTables):
    """A spherical subset disconnecting the nerve 1-skeleton of the rest,
    or None."""
    cut = _impl.spherical_nerve_cut(sys.rank, tables.spherical,
                                    list(sys.nerve_adjacency))
    return None if cut < 0 else int(cut)
