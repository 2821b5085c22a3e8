"""Exact rational feasibility for {x >= 0 : A x = b}.

Phase-1 simplex on Fractions with Bland's rule (smallest eligible index
enters; ties in the ratio test leave by smallest basic index), which cannot
cycle, so the answer is a definitive witness or a definitive infeasibility.
No tolerances anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


def solve_equality_feasibility(
    A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]
) -> Optional[list[Fraction]]:
    """Return x >= 0 with A x = b, or None when no such x exists."""
    m = len(A)
    if m == 0:
        return []
    n = len(A[0])
    if any(len(row) != n for row in A) or len(b) != m:
        raise ValueError("inconsistent system dimensions")

    # rows with b_i < 0 are negated so the artificial basis is feasible
    tab = []
    rhs = []
    for row, bi in zip(A, b):
        if bi < 0:
            tab.append([-Fraction(x) for x in row])
            rhs.append(-Fraction(bi))
        else:
            tab.append([Fraction(x) for x in row])
            rhs.append(Fraction(bi))
    for i in range(m):
        tab[i].extend(ONE if j == i else ZERO for j in range(m))
    basis = list(range(n, n + m))

    # phase-1 objective: minimize the artificial sum; reduced costs
    red = [ZERO] * (n + m)
    for j in range(n):
        red[j] = -sum(tab[i][j] for i in range(m))
    obj = -sum(rhs)

    while True:
        enter = next((j for j in range(n + m) if red[j] < 0), None)
        if enter is None:
            break
        leave = None
        best: Optional[Fraction] = None
        for i in range(m):
            coeff = tab[i][enter]
            if coeff > 0:
                ratio = rhs[i] / coeff
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise ArithmeticError("phase-1 objective unbounded; malformed tableau")
        pivot = tab[leave][enter]
        tab[leave] = [x / pivot for x in tab[leave]]
        rhs[leave] /= pivot
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
                rhs[i] -= f * rhs[leave]
        if red[enter]:
            f = red[enter]
            red = [x - f * y for x, y in zip(red, tab[leave])]
            obj -= f * rhs[leave]
        basis[leave] = enter

    if obj != 0:
        return None
    x = [ZERO] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = rhs[i]
    return x
