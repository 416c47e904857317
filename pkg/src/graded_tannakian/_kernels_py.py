"""Pure-Python elimination kernels.

The compiled module ``_kernels`` exposes the same two functions; ``linalg``
picks whichever imports.  Rows are lists of :class:`fractions.Fraction`.
Elimination runs over integers (rows are scaled to clear denominators and
kept primitive), which avoids a gcd per scalar operation.
"""
from fractions import Fraction
from math import gcd


def _int_row(row):
    den = 1
    for x in row:
        d = x.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return [x.numerator * (den // x.denominator) for x in row]


def _primitive(row):
    g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref(rows, ncols):
    """Reduced row echelon form.

    Returns ``(reduced, pivots)`` where ``reduced`` holds only the nonzero
    rows (pivot entries equal to 1) and ``pivots`` their pivot columns,
    increasing.
    """
    work = [_primitive(_int_row(r)) for r in rows]
    work = [r for r in work if any(r)]
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        p = prow[col]
        for i in range(len(work)):
            if i == rank:
                continue
            row = work[i]
            a = row[col]
            if a:
                work[i] = _primitive([p * x - a * y for x, y in zip(row, prow)])
        pivots.append(col)
        rank += 1
    reduced = []
    for r, col in zip(work[:rank], pivots):
        p = r[col]
        reduced.append([Fraction(x, p) for x in r])
    return reduced, pivots


def reduce_vector(vec, reduced, pivots):
    """Reduce ``vec`` against rows of an rref; returns a new list."""
    out = list(vec)
    for row, col in zip(reduced, pivots):
        a = out[col]
        if a:
            out = [x - a * y for x, y in zip(out, row)]
    return out


def _scaled(row):
    den = 1
    for x in row:
        d = x.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return den, [(k, x.numerator * (den // x.denominator)) for k, x in enumerate(row) if x]


def matmul(rows, cols):
    """Product of a row list and a column list, returned as tuples of Fractions."""
    zero = Fraction(0)
    right = [_scaled(c) for c in cols]
    dense = [dict(nz) for _, nz in right]
    out = []
    for r in rows:
        rd, rnz = _scaled(r)
        line = []
        for (cd, _), cmap in zip(right, dense):
            s = 0
            for k, a in rnz:
                b = cmap.get(k)
                if b is not None:
                    s += a * b
            if not s:
                line.append(zero)
            elif rd == 1 and cd == 1:
                line.append(Fraction(s))
            else:
                line.append(Fraction(s, rd * cd))
        out.append(tuple(line))
    return out
