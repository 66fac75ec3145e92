import itertools

import pytest

from coxhi import classify
from coxhi.core import INFINITY, iter_bits


def brute_is_spherical(sys, T):
    """Componentwise sphericity via classify (reference route for tests)."""
    return classify.is_spherical(sys, T)


def brute_minimal_nonspherical(sys, within=None):
    """Definition-level enumeration: nonspherical with all proper subsets
    spherical, by sweeping the powerset."""
    if within is None:
        within = sys.full_mask
    out = []
    for m in range(1, within + 1):
        if m & ~within:
            continue
        if classify.is_spherical(sys, m):
            continue
        if all(classify.is_spherical(sys, m & ~(1 << i)) for i in iter_bits(m)):
            out.append(m)
    return out


def submasks(mask):
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


@pytest.fixture(scope="session")
def fig4():
    from coxhi import catalog
    return catalog("fig4")
