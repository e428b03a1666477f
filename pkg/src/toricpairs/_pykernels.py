"""Pure-Python integer kernels.

These are the reference implementations of the hot loops; ``_ckernels.pyx``
mirrors them with an int64 fast path.  Everything here works on plain lists
of Python ints and never loses precision.
"""


def _identity(k):
    return [[1 if i == j else 0 for j in range(k)] for i in range(k)]


def _nearest_quotient(a, p):
    # round(a / p) with p > 0, exact on ints
    return (2 * a + p) // (2 * p)


def smith(rows, m, n):
    """Smith normal form with transforms: returns (U, D, V) with U*A*V = D."""
    a = [list(r) for r in rows]
    U = _identity(m)
    V = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst -= q * row_src
        if q:
            ra, rs = a[dst], a[src]
            for k in range(n):
                ra[k] -= q * rs[k]
            ua, us = U[dst], U[src]
            for k in range(m):
                ua[k] -= q * us[k]

    def add_col(dst, src, q):
        # col_dst -= q * col_src
        if q:
            for row in a:
                row[dst] -= q * row[src]
            for row in V:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        # smallest nonzero entry of the trailing block becomes the pivot
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, bi, bj = best
        swap_rows(t, bi)
        swap_cols(t, bj)
        while True:
            p = a[t][t]
            if p < 0:
                p = -p
                a[t] = [-x for x in a[t]]
                U[t] = [-x for x in U[t]]
            for i in range(t + 1, m):
                add_row(i, t, _nearest_quotient(a[i][t], p))
            for j in range(t + 1, n):
                add_col(j, t, _nearest_quotient(a[t][j], p))
            best = None
            for i in range(t + 1, m):
                v = a[i][t]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, "r")
            for j in range(t + 1, n):
                v = a[t][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), j, "c")
            if best is not None:
                if best[2] == "r":
                    swap_rows(t, best[1])
                else:
                    swap_cols(t, best[1])
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            # row t += row bad, then the column sweep exposes a smaller remainder
            add_row(t, bad, -1)
    return U, a, V


def bareiss_rank(rows):
    """Rank of an integer matrix by fraction-free elimination."""
    a = [list(r) for r in rows]
    m = len(a)
    if m == 0:
        return 0
    n = len(a[0])
    r = 0
    prev = 1
    for c in range(n):
        if r == m:
            break
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        pr = a[r]
        pc = pr[c]
        for i in range(r + 1, m):
            ri = a[i]
            f = ri[c]
            for j in range(c + 1, n):
                ri[j] = (pc * ri[j] - f * pr[j]) // prev
            ri[c] = 0
        prev = pc
        r += 1
    return r


def restricted_growth_strings(k):
    """All set partitions of range(k) as restricted growth strings, in lex order."""
    if k == 0:
        yield ()
        return
    rgs = [0] * k
    maxes = [0] * k
    while True:
        yield tuple(rgs)
        # advance to the next string in lexicographic order
        i = k - 1
        while i > 0 and rgs[i] == maxes[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        rgs[i] += 1
        maxes[i] = max(maxes[i - 1], rgs[i])
        for j in range(i + 1, k):
            rgs[j] = 0
            maxes[j] = maxes[i]


def min_partition(classes, weights, unit):
    """Minimise ``rank(block sums) * unit - sum(block minima)`` over set partitions.

    ``classes`` are integer class vectors (one per component) and ``weights``
    the coefficients scaled by the common integer ``unit``.  Returns
    ``(best_rgs, best_rank)``.  Ties go to fewer blocks, then to the
    lexicographically smaller restricted growth string.
    """
    k = len(classes)
    width = len(classes[0]) if k else 0
    best_key = None
    best = None
    for rgs in restricted_growth_strings(k):
        nblocks = (max(rgs) + 1) if k else 0
        sums = [[0] * width for _ in range(nblocks)]
        mins = [None] * nblocks
        for idx, b in enumerate(rgs):
            s = sums[b]
            cv = classes[idx]
            for t in range(width):
                s[t] += cv[t]
            w = weights[idx]
            if mins[b] is None or w < mins[b]:
                mins[b] = w
        r = bareiss_rank(sums) if width else 0
        key = (r * unit - sum(mins), nblocks, rgs)
        if best_key is None or key < best_key:
            best_key = key
            best = (rgs, r)
    return best
