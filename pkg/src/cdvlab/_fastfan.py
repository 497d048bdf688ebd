"""Internal fast core for sign-cell enumeration.

Scalars a + b*sqrt(q) are raw integer pairs here.  Points and stratum
bases only matter up to positive scaling, so every construction
(elimination, ray shooting, reflection) is multiplied through to stay
integral, and the strict-feasibility simplex uses determinant-carrying
integer pivoting, so no rational normalization happens in any hot loop.
"""

from __future__ import annotations

from math import gcd

PZERO = (0, 0)
PONE = (1, 0)


def padd(x, y):
    return (x[0] + y[0], x[1] + y[1])


def psub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def pneg(x):
    return (-x[0], -x[1])


def pmul(x, y, q):
    return (x[0] * y[0] + x[1] * y[1] * q, x[0] * y[1] + x[1] * y[0])


def pis_zero(x):
    return x == (0, 0) or (not x[0] and not x[1])


def psign(x, q):
    a, b = x
    if not b:
        return (a > 0) - (a < 0)
    if not a:
        return 1 if b > 0 else -1
    sa = 1 if a > 0 else -1
    sb = 1 if b > 0 else -1
    if sa == sb:
        return sa
    return sa if a * a > b * b * q else sb


def pconj(x):
    return (x[0], -x[1])


def pnorm(x, q) -> int:
    return x[0] * x[0] - x[1] * x[1] * q


def pdiv_exact(x, d, q):
    """x / d when the quotient is known to lie in Z[sqrt(q)]."""
    num = pmul(x, pconj(d), q)
    n = pnorm(d, q)
    qa, ra = divmod(num[0], n)
    qb, rb = divmod(num[1], n)
    assert not ra and not rb, "non-exact division in integer pivoting"
    return (qa, qb)


def vec_reduce(vec):
    """Divide a pair vector by the gcd of all components."""
    g = 0
    for a, b in vec:
        g = gcd(g, gcd(abs(a), abs(b)))
        if g == 1:
            return vec
    if g <= 1:
        return vec
    return tuple((a // g, b // g) for a, b in vec)


# -- strata as ambient bases -----------------------------------------------------


def stratum_descend(basis, v, q):
    """Intersect span(basis) with {x_v = 0}; rows are ambient pair vectors.

    Cross-multiplied elimination keeps entries integral; basis vectors
    are only defined up to scaling, so no normalization is needed.
    """
    pivot = next((g for g in basis if g[v] != (0, 0)), None)
    if pivot is None:
        return basis
    pv = pivot[v]
    out = []
    for h in basis:
        if h is pivot:
            continue
        hv = h[v]
        if hv == (0, 0):
            out.append(h)
        else:
            out.append(
                vec_reduce(
                    tuple(
                        psub(pmul(pv, x, q), pmul(hv, g, q))
                        for x, g in zip(h, pivot)
                    )
                )
            )
    return tuple(out)


def zero_coords(basis, n):
    return frozenset(v for v in range(n) if all(g[v] == (0, 0) for g in basis))


# -- exact ray shooting ------------------------------------------------------------


def shoot(w, p, supp, q):
    """First wall crossed on the segment from w to p, as an exact point.

    w is strictly signed on supp and p lies in the same stratum; the
    returned point is a positive multiple of the true hit point.
    """
    best = None  # (num, den): earliest crossing time num/den in (0, 1]
    for u in supp:
        wu, pu = w[u], p[u]
        if psign(wu, q) == psign(pu, q):
            continue
        num, den = wu, psub(wu, pu)
        if best is None:
            best = (num, den)
            continue
        lhs = pmul(num, best[1], q)
        rhs = pmul(best[0], den, q)
        if psign(psub(lhs, rhs), q) * psign(pmul(den, best[1], q), q) < 0:
            best = (num, den)
    if best is None:
        return None
    num, den = best
    # x = w + (num/den)(p - w), scaled by |den|
    sign = psign(den, q)
    point = tuple(
        pmul(
            PONE if sign > 0 else (-1, 0),
            padd(pmul(den, x, q), pmul(num, psub(y, x), q)),
            q,
        )
        for x, y in zip(w, p)
    )
    return vec_reduce(point)


def reflect(p, w, off_support, q):
    """Integral point realizing the flip of w's pattern across p's zeros.

    eps = num/den is chosen exactly so that (1+eps) p - eps w keeps p's
    strict signs on off_support; the result is scaled by den.
    """
    num, den = PONE, (2, 0)
    have = False
    for u in off_support:
        lp = p[u] if psign(p[u], q) > 0 else pneg(p[u])
        lw = w[u] if psign(w[u], q) > 0 else pneg(w[u])
        bnum, bden = lp, pmul((2, 0), padd(lw, PONE), q)
        if not have:
            num, den, have = bnum, bden, True
            continue
        lhs = pmul(bnum, den, q)
        rhs = pmul(num, bden, q)
        if psign(psub(lhs, rhs), q) < 0:  # both ratios positive
            num, den = bnum, bden
    scale = padd(den, num)
    return vec_reduce(
        tuple(psub(pmul(scale, x, q), pmul(num, y, q)) for x, y in zip(p, w))
    )


# -- strict feasibility LP with integer pivoting -------------------------------------


def lp_strict(rows, q, bland_after: int = 50):
    """max eps s.t. row . c >= eps, eps <= 1, on integer pair rows.

    Returns (witness, farkas): witness is an integer pair vector of
    variable values scaled by a positive constant (enough to rebuild a
    point), farkas a list of pair multipliers scaled by one positive
    constant.  Determinant-carrying pivoting keeps every entry in
    Z[sqrt(q)] with exact divisions only.
    """
    m = len(rows)
    d = len(rows[0]) if m else 0
    if m == 0:
        return (), None
    nvars = 2 * d + 1
    ncons = m + 1
    tab = []
    for i in range(m):
        row = [PZERO] * (nvars + ncons + 1)
        for j in range(d):
            row[j] = pneg(rows[i][j])
            row[d + j] = rows[i][j]
        row[2 * d] = PONE
        row[nvars + i] = PONE
        tab.append(row)
    last = [PZERO] * (nvars + ncons + 1)
    last[2 * d] = PONE
    last[nvars + m] = PONE
    last[-1] = PONE
    tab.append(last)
    obj = [PZERO] * (nvars + ncons + 1)
    obj[2 * d] = (-1, 0)
    tab.append(obj)
    basis = list(range(nvars, nvars + ncons))
    det = PONE
    det_sign = 1

    iteration = 0
    while True:
        iteration += 1
        objrow = tab[-1]
        enter = None
        if iteration <= bland_after:
            best = None
            for j in range(nvars + ncons):
                e = objrow[j]
                if psign(e, q) * det_sign < 0:
                    if best is None or psign(psub(e, best), q) * det_sign < 0:
                        best = e
                        enter = j
        else:
            enter = next(
                (
                    j
                    for j in range(nvars + ncons)
                    if psign(objrow[j], q) * det_sign < 0
                ),
                None,
            )
        if enter is None:
            break
        leave = None
        bnum = bden = None
        for i in range(ncons):
            a = tab[i][enter]
            if psign(a, q) * det_sign <= 0:
                continue
            num, den = tab[i][-1], a
            if leave is None:
                bnum, bden, leave = num, den, i
                continue
            lhs = pmul(num, bden, q)
            rhs = pmul(bnum, den, q)
            cmp = psign(psub(lhs, rhs), q) * psign(pmul(den, bden, q), q)
            if cmp < 0 or (cmp == 0 and basis[i] < basis[leave]):
                bnum, bden, leave = num, den, i
        if leave is None:
            raise RuntimeError("unbounded strict-feasibility LP")
        piv = tab[leave][enter]
        lrow = tab[leave]
        for i in range(ncons + 1):
            if i == leave:
                continue
            f = tab[i][enter]
            row = tab[i]
            if f == (0, 0):
                tab[i] = [pdiv_exact(pmul(x, piv, q), det, q) for x in row]
            else:
                tab[i] = [
                    pdiv_exact(psub(pmul(x, piv, q), pmul(f, y, q)), det, q)
                    for x, y in zip(row, lrow)
                ]
        det = piv
        det_sign = psign(det, q)
        basis[leave] = enter

    sol = [PZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            sol[b] = tab[i][-1]
    # real value of a basic variable is entry/det
    if psign(sol[2 * d], q) * det_sign > 0:
        orient = PONE if det_sign > 0 else (-1, 0)
        witness = tuple(
            pmul(orient, psub(sol[j], sol[d + j]), q) for j in range(d)
        )
        return witness, None
    orient = PONE if det_sign > 0 else (-1, 0)
    farkas = [pmul(orient, tab[-1][nvars + i], q) for i in range(m)]
    return None, farkas
