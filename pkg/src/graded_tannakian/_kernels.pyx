# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled elimination kernels; same contract as ``_kernels_py``."""
from fractions import Fraction
from math import gcd


cdef list _int_row(list row):
    cdef object den = 1
    cdef object d
    for x in row:
        d = x.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return [x.numerator * (den // x.denominator) for x in row]


cdef list _primitive(list row):
    cdef object g = 0
    for x in row:
        if x:
            g = gcd(g, x)
            if g == 1:
                return row
    if g > 1:
        return [x // g for x in row]
    return row


def rref(rows, Py_ssize_t ncols):
    cdef list work = []
    cdef list r, prow, row
    cdef Py_ssize_t col, i, n, rank = 0, k
    cdef object p, a
    cdef list pivots = []
    for r0 in rows:
        r = _primitive(_int_row(list(r0)))
        for x in r:
            if x:
                work.append(r)
                break
    n = len(work)
    for col in range(ncols):
        piv = -1
        for i in range(rank, n):
            if work[i][col]:
                piv = i
                break
        if piv < 0:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        prow = work[rank]
        p = prow[col]
        for i in range(n):
            if i == rank:
                continue
            row = work[i]
            a = row[col]
            if a:
                work[i] = _primitive([p * row[k] - a * prow[k] for k in range(ncols)])
        pivots.append(col)
        rank += 1
    reduced = []
    for i in range(rank):
        r = work[i]
        p = r[pivots[i]]
        reduced.append([Fraction(x, p) for x in r])
    return reduced, pivots


def reduce_vector(vec, reduced, pivots):
    cdef list out = list(vec)
    cdef Py_ssize_t k, n = len(out)
    for row, col in zip(reduced, pivots):
        a = out[col]
        if a:
            out = [out[k] - a * row[k] for k in range(n)]
    return out


cdef tuple _scaled(row):
    cdef object den = 1
    cdef object d
    cdef Py_ssize_t k
    for x in row:
        d = x.denominator
        if d != 1:
            den = den * d // gcd(den, d)
    return den, [(k, x.numerator * (den // x.denominator)) for k, x in enumerate(row) if x]


def matmul(rows, cols):
    cdef object zero = Fraction(0)
    cdef list right = [_scaled(c) for c in cols]
    cdef list dense = [dict(nz) for _, nz in right]
    cdef list out = [], line, rnz
    cdef object s, rd, cd, b
    cdef dict cmap
    cdef Py_ssize_t j, ncol = len(right)
    for r in rows:
        rd, rnz = _scaled(r)
        line = []
        for j in range(ncol):
            cd = right[j][0]
            cmap = dense[j]
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
