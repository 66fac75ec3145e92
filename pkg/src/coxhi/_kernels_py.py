"""Pure-Python subset-table kernels.

Reference implementation of the hot per-subset sweeps; the compiled
extension `_kernels_cy` implements the same contract.  Each function takes
primitive data (rank, flat label bytes, adjacency masks) so that both
implementations stay interchangeable and differentially testable.

Label encoding: a flat ``bytes`` of length n*n with infinity stored as 0
and finite labels clamped to at most 7.  Clamping is sound here because
no classified diagram distinguishes finite labels above 6, and for the
rank-3 angle-sum test every label >= 7 already forces the sum below 1.
"""

from __future__ import annotations


def _flood(adj, universe, seed):
    comp = seed
    frontier = seed
    while frontier:
        grow = 0
        f = frontier
        while f:
            b = f & -f
            grow |= adj[b.bit_length() - 1]
            f ^= b
        frontier = grow & universe & ~comp
        comp |= frontier
    return comp


def _analyze_connected(n, labels, adj, inf_adj, mask, k):
    """(spherical, affine) booleans for a Dynkin-connected mask of size k."""
    verts = []
    m = mask
    while m:
        b = m & -m
        verts.append(b.bit_length() - 1)
        m ^= b

    if k == 1:
        return 1, 0
    if k == 2:
        lab = labels[verts[0] * n + verts[1]]
        return (0, 1) if lab == 0 else (1, 0)

    for v in verts:
        if inf_adj[v] & mask:
            return 0, 0

    if k == 3:
        a, b, c = verts
        p, q, r = sorted((labels[a * n + b], labels[a * n + c],
                          labels[b * n + c]), reverse=True)
        lhs = q * r + p * r + p * q
        rhs = p * q * r
        if lhs > rhs:
            return 1, 0
        if lhs == rhs:
            return 0, 1
        return 0, 0

    degs = {v: bin(adj[v] & mask).count("1") for v in verts}
    edge_count = sum(degs.values()) // 2

    if edge_count >= k + 1:
        return 0, 0

    if edge_count == k:
        if any(d != 2 for d in degs.values()):
            return 0, 0
        # single cycle: affine iff every label is 3
        prev, cur = -1, verts[0]
        for _ in range(k):
            nxt_mask = adj[cur] & mask & ~(1 << prev if prev >= 0 else 0)
            nxt = (nxt_mask & -nxt_mask).bit_length() - 1
            if labels[cur * n + nxt] != 3:
                return 0, 0
            prev, cur = cur, nxt
        return 0, 1

    # tree
    deg3 = [v for v in verts if degs[v] == 3]
    deg4p = [v for v in verts if degs[v] >= 4]
    maxdeg = max(degs.values())

    if maxdeg <= 2:
        start = next(v for v in verts if degs[v] == 1)
        seq = []
        prev, cur = -1, start
        while len(seq) < k - 1:
            nxt_mask = adj[cur] & mask
            if prev >= 0:
                nxt_mask &= ~(1 << prev)
            nxt = (nxt_mask & -nxt_mask).bit_length() - 1
            seq.append(labels[cur * n + nxt])
            prev, cur = cur, nxt
        return _match_path(tuple(seq), k)

    if len(deg4p) == 1 and not deg3:
        c = deg4p[0]
        if k == 5 and degs[c] == 4 and all(
                labels[c * n + v] == 3 for v in verts if v != c):
            return 0, 1
        return 0, 0

    if len(deg3) == 1 and not deg4p:
        center = deg3[0]
        arms = []
        fm = adj[center] & mask
        while fm:
            b = fm & -fm
            fm ^= b
            first = b.bit_length() - 1
            arm = [labels[center * n + first]]
            prev, cur = center, first
            while True:
                nm = adj[cur] & mask & ~(1 << prev)
                if not nm:
                    break
                nxt = (nm & -nm).bit_length() - 1
                arm.append(labels[cur * n + nxt])
                prev, cur = cur, nxt
            arms.append(tuple(arm))
        arms.sort(key=lambda a: (len(a), a))
        return _match_tripod(arms, k)

    if len(deg3) == 2 and not deg4p:
        if any(labels[a * n + b] != 3
               for a in verts for b in verts
               if a < b and adj[a] >> b & 1):
            return 0, 0
        leaves = [v for v in verts if degs[v] == 1]
        if len(leaves) == 4 and k >= 6:
            c1, c2 = deg3
            at1 = sum(1 for w in leaves if adj[c1] >> w & 1)
            at2 = sum(1 for w in leaves if adj[c2] >> w & 1)
            if at1 == 2 and at2 == 2:
                return 0, 1
        return 0, 0

    return 0, 0


def _match_path(seq, k):
    word = min(seq, tuple(reversed(seq)))
    if word == (3,) * (k - 1):
        return 1, 0  # A_k
    if word == (3,) * (k - 2) + (4,):
        return 1, 0  # B_k
    if k == 4 and word == (3, 4, 3):
        return 1, 0  # F4
    if k == 4 and word == (3, 3, 5):
        return 1, 0  # H4
    if word == (4,) + (3,) * (k - 3) + (4,):
        return 0, 1  # affC
    if k == 5 and word == (3, 3, 4, 3):
        return 0, 1  # affF4
    return 0, 0


def _match_tripod(arms, k):
    lens = tuple(len(a) for a in arms)
    nonthree = sorted(m for a in arms for m in a if m != 3)
    if not nonthree:
        if lens[:2] == (1, 1):
            return 1, 0  # D_k
        if lens in ((1, 2, 2), (1, 2, 3), (1, 2, 4)):
            return 1, 0  # E6, E7, E8
        if lens in ((2, 2, 2), (1, 3, 3), (1, 2, 5)):
            return 0, 1  # affE6, affE7, affE8
        return 0, 0
    if nonthree == [4]:
        if (lens[:2] == (1, 1) and arms[0] == (3,) and arms[1] == (3,)
                and arms[2][-1] == 4):
            return 0, 1  # affB
    return 0, 0


def build_tables(n, labels, adj, inf_adj):
    """Per-subset tables over all 2^n masks.

    Returns bytearrays (spherical, affine, connected, prewide) where
    prewide[T] says T has >= 2 nonspherical Dynkin components, or exactly
    one which is irreducible affine of size >= 3 (the component form of a
    wide decomposition).
    """
    size = 1 << n
    spherical = bytearray(size)
    affine = bytearray(size)
    connected = bytearray(size)
    prewide = bytearray(size)
    nsc = bytearray(size)   # nonspherical component count, capped at 2
    ok2 = bytearray(size)   # the unique nonspherical component is affine, size >= 3
    spherical[0] = 1
    for mask in range(1, size):
        low = mask & -mask
        comp = _flood(adj, mask, low)
        if comp == mask:
            k = mask.bit_count()
            connected[mask] = 1
            sph, aff = _analyze_connected(n, labels, adj, inf_adj, mask, k)
            spherical[mask] = sph
            affine[mask] = aff
            if not sph:
                nsc[mask] = 1
                if aff and k >= 3:
                    ok2[mask] = 1
                    prewide[mask] = 1
        else:
            rest = mask ^ comp
            sph_c = spherical[comp]
            spherical[mask] = sph_c & spherical[rest]
            cnt = (0 if sph_c else 1) + nsc[rest]
            if cnt > 2:
                cnt = 2
            nsc[mask] = cnt
            if cnt == 1:
                ok2[mask] = ok2[rest] if sph_c else ok2[comp]
                prewide[mask] = ok2[mask]
            elif cnt >= 2:
                prewide[mask] = 1
    return spherical, affine, connected, prewide


def minimal_nonspherical(n, spherical):
    """Masks that are nonspherical with every codimension-1 subset spherical."""
    out = []
    for mask in range(1, 1 << n):
        if spherical[mask]:
            continue
        m = mask
        ok = True
        while m:
            b = m & -m
            if not spherical[mask ^ b]:
                ok = False
                break
            m ^= b
        if ok:
            out.append(mask)
    return out


def maximal_flagged(n, flags):
    """Maximal elements (under inclusion) of the flagged masks, ascending."""
    kept = []
    by_card = [[] for _ in range(n + 1)]
    for mask in range(1, 1 << n):
        if flags[mask]:
            by_card[mask.bit_count()].append(mask)
    for card in range(n, 0, -1):
        for mask in by_card[card]:
            if not any(mask & ~big == 0 for big in kept):
                kept.append(mask)
    kept.sort()
    return kept


def spherical_nerve_cut(n, spherical, nerve_adj):
    """A spherical mask T whose removal disconnects the nerve 1-skeleton
    of the remaining generators, or -1 if none exists."""
    full = (1 << n) - 1
    for t in range(full + 1):
        if not spherical[t]:
            continue
        rest = full & ~t
        if not rest:
            continue
        low = rest & -rest
        if _flood(nerve_adj, rest, low) != rest:
            return t
    return -1
