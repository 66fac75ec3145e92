"""Test-suite oracles: numeric Gram signatures and naive re-implementations.

These deliberately take different roads from the production code: the
cosine matrix decides sphericity numerically, the maximality filter is a
quadratic pairwise scan, and the Lambda step is an iterated pairwise
merge.  Nothing here feeds production results; the test suite checks the
two roads agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import INFINITY, CoxeterSystem, GenSubset, iter_bits

POSITIVE_DEFINITE = "PositiveDefinite"
PSD_SINGULAR = "PSDSingular"
INDEFINITE = "Indefinite"


@dataclass(frozen=True)
class GramSignature:
    verdict: str
    min_eigenvalue: float
    tolerance: float


def gram_matrix(sys: CoxeterSystem, T: GenSubset) -> np.ndarray:
    """Cosine matrix: 1 on the diagonal, -cos(pi/m) off it (-1 for m
    infinite)."""
    verts = list(iter_bits(T))
    k = len(verts)
    M = np.eye(k)
    for a in range(k):
        for b in range(a + 1, k):
            m = sys.labels[verts[a]][verts[b]]
            entry = -1.0 if m == INFINITY else -math.cos(math.pi / m)
            M[a, b] = M[b, a] = entry
    return M


def gram_signature(sys: CoxeterSystem, T: GenSubset, tol: float = 1e-9) -> GramSignature:
    """Eigenvalue signature of the cosine matrix of T (|T| >= 1).

    For irreducible T: positive definite iff spherical, PSD-singular iff
    affine.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    if not T:
        raise ValueError("gram_signature needs a nonempty subset")
    eigs = np.linalg.eigvalsh(gram_matrix(sys, T))
    low = float(eigs[0])
    if low > tol:
        verdict = POSITIVE_DEFINITE
    elif low >= -tol:
        verdict = PSD_SINGULAR
    else:
        verdict = INDEFINITE
    return GramSignature(verdict, low, tol)


def gram_kernel_dimension(sys: CoxeterSystem, T: GenSubset, tol: float = 1e-9) -> int:
    """Number of eigenvalues within tol of zero (used by the affine oracle:
    irreducible affine systems have a one-dimensional kernel)."""
    eigs = np.linalg.eigvalsh(gram_matrix(sys, T))
    return int(np.sum(np.abs(eigs) <= tol))


def naive_maximal(collection):
    """Maximal elements under inclusion: quadratic pairwise filter,
    order-insensitive, ascending output."""
    items = sorted(set(collection))
    out = [m for m in items
           if not any(m != other and m & ~other == 0 for other in items)]
    return out


def naive_lambda_step(level, spherical_oracle):
    """One Lambda step as an iterated pairwise merge to fixpoint.

    ``level`` is an iterable of masks, ``spherical_oracle`` a callable
    mask -> bool.  Groups of original elements merge whenever any two of
    their members intersect nonspherically; the result is the set of
    group unions.
    """
    groups = [frozenset([m]) for m in sorted(set(level))]
    changed = True
    while changed:
        changed = False
        for i in range(len(groups)):
            for j in range(i + 1, len(groups)):
                if any(a & b and not spherical_oracle(a & b)
                       for a in groups[i] for b in groups[j]):
                    merged = groups[i] | groups[j]
                    groups = [g for idx, g in enumerate(groups)
                              if idx not in (i, j)] + [merged]
                    changed = True
                    break
            if changed:
                break
    out = set()
    for g in groups:
        u = 0
        for m in g:
            u |= m
        out.add(u)
    return out
