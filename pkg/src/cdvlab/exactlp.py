"""Exact strict-feasibility test for open polyhedral cones.

Decides whether a system a_i . c > 0 (i = 1..m) has a solution, over the
same exact scalars as the rest of the package.  The standard trick:
maximize eps subject to a_i . c >= eps and eps <= 1; the system is
strictly feasible iff the optimum is positive.  Free variables are split
into positive parts and the tableau is pivoted with Bland's rule, so
termination is unconditional.
"""

from __future__ import annotations

from .scalars import ZERO, ONE, FieldScalar


def strictly_feasible(rows) -> tuple[bool, tuple[FieldScalar, ...] | None]:
    """rows: m x d matrix (FieldScalar); find c with every row . c > 0.

    Returns (feasible, witness).  With m == 0 any point works, including
    the origin of a 0-dimensional space.
    """
    rows = [tuple(FieldScalar.of(x) for x in r) for r in rows]
    m = len(rows)
    d = len(rows[0]) if m else 0
    if m == 0:
        return True, tuple([ZERO] * d)
    if any(all(x.is_zero() for x in r) for r in rows):
        return False, None  # a zero functional can never be positive

    # variables: c+ (d), c- (d), eps (1); constraints:
    #   -a_i c+ + a_i c- + eps <= 0   (i < m)
    #   eps <= 1
    nvars = 2 * d + 1
    ncons = m + 1
    # tableau rows: [A | I | b], objective row last: [-obj | 0 | 0]
    width = nvars + ncons + 1
    tab: list[list[FieldScalar]] = []
    for i in range(m):
        row = [ZERO] * width
        for j in range(d):
            row[j] = -rows[i][j]
            row[d + j] = rows[i][j]
        row[2 * d] = ONE
        row[nvars + i] = ONE
        tab.append(row)
    last = [ZERO] * width
    last[2 * d] = ONE
    last[nvars + m] = ONE
    last[-1] = ONE
    tab.append(last)
    obj = [ZERO] * width
    obj[2 * d] = FieldScalar.of(-1)  # maximize eps
    tab.append(obj)

    basis = [nvars + i for i in range(ncons)]
    while True:
        enter = next((j for j in range(nvars + ncons) if tab[-1][j].sign() < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(ncons):
            a = tab[i][enter]
            if a.sign() <= 0:
                continue
            ratio = tab[i][-1] / a
            if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                best = ratio
                leave = i
        if leave is None:
            # the objective is capped by eps <= 1, so no improving ray
            # can be unbounded
            raise RuntimeError("simplex reported an unbounded bounded LP")
        piv = tab[leave][enter].inverse()
        tab[leave] = [x * piv for x in tab[leave]]
        for i in range(ncons + 1):
            if i == leave:
                continue
            f = tab[i][enter]
            if f.is_zero():
                continue
            tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        basis[leave] = enter

    eps_val = ZERO
    sol = [ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            sol[b] = tab[i][-1]
    eps_val = sol[2 * d]
    if eps_val.sign() <= 0:
        return False, None
    witness = tuple(sol[j] - sol[d + j] for j in range(d))
    return True, witness
