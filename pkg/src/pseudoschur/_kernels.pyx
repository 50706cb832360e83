# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled exact integer kernels; mirrors ``_kernels_py`` function for function."""


def int_matmul(list a, list b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t k = len(b)
    cdef Py_ssize_t m = len(b[0]) if k else 0
    cdef Py_ssize_t i, j, l
    cdef list out = []
    cdef list row, orow
    cdef object acc, x
    cdef list bt = [[b[l][j] for l in range(k)] for j in range(m)]
    cdef list col
    for i in range(n):
        row = a[i]
        orow = []
        for j in range(m):
            col = bt[j]
            acc = 0
            for l in range(k):
                x = row[l]
                if x:
                    acc += x * col[l]
            orow.append(acc)
        out.append(orow)
    return out


def ff_rref(a, ncols=None):
    cdef list rows = [list(src) for src in a]
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t width = len(rows[0]) if nrows else 0
    cdef Py_ssize_t nc = width if ncols is None else ncols
    cdef Py_ssize_t r = 0, c, i, j, k
    cdef list pivots = []
    cdef list prow, row
    cdef object p, f, prev = 1
    for c in range(nc):
        if r == nrows:
            break
        k = r
        while k < nrows and rows[k][c] == 0:
            k += 1
        if k == nrows:
            continue
        if k != r:
            rows[k], rows[r] = rows[r], rows[k]
        prow = rows[r]
        p = prow[c]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if f == 0:
                if p != prev:
                    for j in range(width):
                        row[j] = (p * row[j]) // prev
                continue
            for j in range(width):
                row[j] = (p * row[j] - f * prow[j]) // prev
        prev = p
        pivots.append(c)
        r += 1
    return rows, pivots, prev


def echelon_pivots(a):
    return ff_rref(a)[1]
