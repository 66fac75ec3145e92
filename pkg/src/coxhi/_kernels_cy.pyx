# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled subset-table kernels; same contract as `_kernels_py`."""

cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil

ctypedef unsigned long long u64
ctypedef unsigned char u8


cdef inline u64 _flood(u64* adj, u64 universe, u64 seed) nogil:
    cdef u64 comp = seed
    cdef u64 frontier = seed
    cdef u64 grow, f, b
    while frontier:
        grow = 0
        f = frontier
        while f:
            b = f & (~f + 1)
            grow |= adj[__builtin_ctzll(b)]
            f ^= b
        frontier = grow & universe & ~comp
        comp |= frontier
    return comp


cdef void _match_path(u8* seq, int ne, int k, int* sph, int* aff) nogil:
    # canonicalise: read the smaller of seq and its reverse
    cdef int i, flip = 0
    for i in range(ne):
        if seq[i] != seq[ne - 1 - i]:
            flip = seq[ne - 1 - i] < seq[i]
            break
    cdef u8 word[64]
    for i in range(ne):
        word[i] = seq[ne - 1 - i] if flip else seq[i]
    sph[0] = 0
    aff[0] = 0
    cdef int all3 = 1
    for i in range(ne):
        if word[i] != 3:
            all3 = 0
            break
    if all3:
        sph[0] = 1  # A_k
        return
    cdef int ok = 1
    for i in range(ne - 1):
        if word[i] != 3:
            ok = 0
            break
    if ok and word[ne - 1] == 4:
        sph[0] = 1  # B_k
        return
    if k == 4 and word[0] == 3 and word[1] == 4 and word[2] == 3:
        sph[0] = 1  # F4
        return
    if k == 4 and word[0] == 3 and word[1] == 3 and word[2] == 5:
        sph[0] = 1  # H4
        return
    if word[0] == 4 and word[ne - 1] == 4:
        ok = 1
        for i in range(1, ne - 1):
            if word[i] != 3:
                ok = 0
                break
        if ok:
            aff[0] = 1  # affC
            return
    if k == 5 and word[0] == 3 and word[1] == 3 and word[2] == 4 and word[3] == 3:
        aff[0] = 1  # affF4


cdef void _analyze_connected(int n, const u8* L, u64* adj, u64* inf_adj,
                             u64 mask, int k, int* sph, int* aff) nogil:
    sph[0] = 0
    aff[0] = 0
    cdef int verts[64]
    cdef int nv = 0
    cdef u64 m = mask, b
    while m:
        b = m & (~m + 1)
        verts[nv] = __builtin_ctzll(b)
        nv += 1
        m ^= b

    if k == 1:
        sph[0] = 1
        return
    cdef int lab
    if k == 2:
        lab = L[verts[0] * n + verts[1]]
        if lab == 0:
            aff[0] = 1
        else:
            sph[0] = 1
        return

    cdef int i, j
    for i in range(nv):
        if inf_adj[verts[i]] & mask:
            return

    cdef long p, q, r, t
    if k == 3:
        p = L[verts[0] * n + verts[1]]
        q = L[verts[0] * n + verts[2]]
        r = L[verts[1] * n + verts[2]]
        if p < q: t = p; p = q; q = t
        if q < r: t = q; q = r; r = t
        if p < q: t = p; p = q; q = t
        if q * r + p * r + p * q > p * q * r:
            sph[0] = 1
        elif q * r + p * r + p * q == p * q * r:
            aff[0] = 1
        return

    cdef int degs[64]
    cdef int edge_count = 0
    cdef int maxdeg = 0
    for i in range(nv):
        degs[i] = __builtin_popcountll(adj[verts[i]] & mask)
        edge_count += degs[i]
        if degs[i] > maxdeg:
            maxdeg = degs[i]
    edge_count >>= 1

    if edge_count >= k + 1:
        return

    cdef int prev, cur, nxt, step
    cdef u64 nm
    if edge_count == k:
        for i in range(nv):
            if degs[i] != 2:
                return
        prev = -1
        cur = verts[0]
        for step in range(k):
            nm = adj[cur] & mask
            if prev >= 0:
                nm &= ~(<u64>1 << prev)
            nxt = __builtin_ctzll(nm & (~nm + 1))
            if L[cur * n + nxt] != 3:
                return
            prev = cur
            cur = nxt
        aff[0] = 1  # affA cycle
        return

    # tree
    cdef int ndeg3 = 0, ndeg4p = 0
    cdef int c3a = -1, c3b = -1, c4 = -1
    for i in range(nv):
        if degs[i] == 3:
            if ndeg3 == 0:
                c3a = verts[i]
            elif ndeg3 == 1:
                c3b = verts[i]
            ndeg3 += 1
        elif degs[i] >= 4:
            c4 = verts[i]
            ndeg4p += 1

    cdef u8 seq[64]
    cdef int ne
    if maxdeg <= 2:
        cur = -1
        for i in range(nv):
            if degs[i] == 1:
                cur = verts[i]
                break
        prev = -1
        ne = 0
        while ne < k - 1:
            nm = adj[cur] & mask
            if prev >= 0:
                nm &= ~(<u64>1 << prev)
            nxt = __builtin_ctzll(nm & (~nm + 1))
            seq[ne] = L[cur * n + nxt]
            ne += 1
            prev = cur
            cur = nxt
        _match_path(seq, ne, k, sph, aff)
        return

    cdef int a1len, a2len, a3len, nonthree, lastlab, armlen
    cdef u64 fm
    if ndeg4p == 1 and ndeg3 == 0:
        if k == 5 and __builtin_popcountll(adj[c4] & mask) == 4:
            for i in range(nv):
                if verts[i] != c4 and L[c4 * n + verts[i]] != 3:
                    return
            aff[0] = 1  # affD4 star
        return

    cdef u8 arms[3][64]
    cdef int lens[3]
    cdef int na = 0
    cdef int x, y
    cdef u8 tmpbuf[64]
    cdef int tmplen
    if ndeg3 == 1 and ndeg4p == 0:
        fm = adj[c3a] & mask
        while fm:
            b = fm & (~fm + 1)
            fm ^= b
            nxt = __builtin_ctzll(b)
            armlen = 0
            arms[na][armlen] = L[c3a * n + nxt]
            armlen += 1
            prev = c3a
            cur = nxt
            while True:
                nm = adj[cur] & mask & ~(<u64>1 << prev)
                if nm == 0:
                    break
                nxt = __builtin_ctzll(nm & (~nm + 1))
                arms[na][armlen] = L[cur * n + nxt]
                armlen += 1
                prev = cur
                cur = nxt
            lens[na] = armlen
            na += 1
        # sort the three arms by (length, lexicographic word)
        for x in range(2):
            for y in range(x + 1, 3):
                if _arm_less(arms[y], lens[y], arms[x], lens[x]):
                    tmplen = lens[x]; lens[x] = lens[y]; lens[y] = tmplen
                    for i in range(64):
                        tmpbuf[i] = arms[x][i]
                        arms[x][i] = arms[y][i]
                        arms[y][i] = tmpbuf[i]
        nonthree = 0
        lastlab = 0
        for x in range(3):
            for i in range(lens[x]):
                if arms[x][i] != 3:
                    nonthree += 1
                    lastlab = arms[x][i]
        a1len = lens[0]; a2len = lens[1]; a3len = lens[2]
        if nonthree == 0:
            if a1len == 1 and a2len == 1:
                sph[0] = 1  # D_k
            elif a1len == 1 and a2len == 2 and a3len in (2, 3, 4):
                sph[0] = 1  # E6, E7, E8
            elif (a1len == 2 and a2len == 2 and a3len == 2) or \
                 (a1len == 1 and a2len == 3 and a3len == 3) or \
                 (a1len == 1 and a2len == 2 and a3len == 5):
                aff[0] = 1  # affE6, affE7, affE8
            return
        if nonthree == 1 and lastlab == 4:
            if a1len == 1 and a2len == 1 and arms[0][0] == 3 and \
                    arms[1][0] == 3 and arms[2][a3len - 1] == 4:
                aff[0] = 1  # affB
        return

    cdef int leaves = 0, at1 = 0, at2 = 0
    if ndeg3 == 2 and ndeg4p == 0:
        for i in range(nv):
            for j in range(i + 1, nv):
                if adj[verts[i]] >> verts[j] & 1:
                    if L[verts[i] * n + verts[j]] != 3:
                        return
        for i in range(nv):
            if degs[i] == 1:
                leaves += 1
                if adj[c3a] >> verts[i] & 1:
                    at1 += 1
                if adj[c3b] >> verts[i] & 1:
                    at2 += 1
        if leaves == 4 and k >= 6 and at1 == 2 and at2 == 2:
            aff[0] = 1  # affD
        return


cdef inline int _arm_less(u8* a, int la, u8* b, int lb) nogil:
    if la != lb:
        return la < lb
    cdef int i
    for i in range(la):
        if a[i] != b[i]:
            return a[i] < b[i]
    return 0


def build_tables(int n, bytes labels, list adj, list inf_adj):
    """Per-subset tables over all 2^n masks; see `_kernels_py.build_tables`."""
    cdef Py_ssize_t size = 1 << n
    spherical = bytearray(size)
    affine = bytearray(size)
    connected = bytearray(size)
    prewide = bytearray(size)
    nsc = bytearray(size)
    ok2 = bytearray(size)
    cdef u8[:] sph_v = spherical
    cdef u8[:] aff_v = affine
    cdef u8[:] con_v = connected
    cdef u8[:] pw_v = prewide
    cdef u8[:] nsc_v = nsc
    cdef u8[:] ok2_v = ok2
    cdef const u8[:] lab_v = labels
    cdef u64 adj_c[64]
    cdef u64 inf_c[64]
    cdef int i
    for i in range(n):
        adj_c[i] = adj[i]
        inf_c[i] = inf_adj[i]

    cdef const u8* L = NULL
    if n:
        L = &lab_v[0]
    cdef u64 mask, low, comp, rest
    cdef int k, s, a, cnt
    cdef int sph = 0, aff = 0
    sph_v[0] = 1
    for mask in range(1, <u64>size):
        low = mask & (~mask + 1)
        comp = _flood(adj_c, mask, low)
        if comp == mask:
            k = __builtin_popcountll(mask)
            con_v[mask] = 1
            _analyze_connected(n, L, adj_c, inf_c, mask, k, &sph, &aff)
            sph_v[mask] = sph
            aff_v[mask] = aff
            if not sph:
                nsc_v[mask] = 1
                if aff and k >= 3:
                    ok2_v[mask] = 1
                    pw_v[mask] = 1
        else:
            rest = mask ^ comp
            s = sph_v[comp]
            sph_v[mask] = s & sph_v[rest]
            cnt = (0 if s else 1) + nsc_v[rest]
            if cnt > 2:
                cnt = 2
            nsc_v[mask] = cnt
            if cnt == 1:
                ok2_v[mask] = ok2_v[rest] if s else ok2_v[comp]
                pw_v[mask] = ok2_v[mask]
            elif cnt >= 2:
                pw_v[mask] = 1
    return spherical, affine, connected, prewide


def minimal_nonspherical(int n, spherical):
    cdef const u8[:] sph_v = spherical
    out = []
    cdef u64 mask, m, b
    cdef int ok
    for mask in range(1, <u64>1 << n):
        if sph_v[mask]:
            continue
        m = mask
        ok = 1
        while m:
            b = m & (~m + 1)
            if not sph_v[mask ^ b]:
                ok = 0
                break
            m ^= b
        if ok:
            out.append(mask)
    return out


def maximal_flagged(int n, flags):
    cdef const u8[:] fl = flags
    cdef u64 kept[4096]
    cdef int nkept = 0
    cdef u64 mask
    cdef int card, i, contained
    overflow = []
    for card in range(n, 0, -1):
        for mask in range(1, <u64>1 << n):
            if fl[mask] and __builtin_popcountll(mask) == card:
                contained = 0
                for i in range(nkept):
                    if mask & ~kept[i] == 0:
                        contained = 1
                        break
                if not contained and overflow:
                    for big in overflow:
                        if mask & ~(<u64>big) == 0:
                            contained = 1
                            break
                if not contained:
                    if nkept < 4096:
                        kept[nkept] = mask
                        nkept += 1
                    else:
                        overflow.append(mask)
    out = [kept[i] for i in range(nkept)] + overflow
    out.sort()
    return out


def spherical_nerve_cut(int n, spherical, list nerve_adj):
    cdef const u8[:] sph_v = spherical
    cdef u64 nerve_c[64]
    cdef int i
    for i in range(n):
        nerve_c[i] = nerve_adj[i]
    cdef u64 full = (<u64>1 << n) - 1
    cdef u64 t, rest, low
    for t in range(full + 1):
        if not sph_v[t]:
            continue
        rest = full & ~t
        if rest == 0:
            continue
        low = rest & (~rest + 1)
        if _flood(nerve_c, rest, low) != rest:
            return <long long>t
    return -1
