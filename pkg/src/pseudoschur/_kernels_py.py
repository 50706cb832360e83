"""Pure-Python exact integer kernels.

Fallback for the compiled ``_kernels`` extension; both expose the same
functions with identical results. Matrices are lists of lists of Python ints.
"""


def int_matmul(a, b):
    """Integer matrix product of ``a`` (n x k) and ``b`` (k x m)."""
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def ff_rref(a, ncols=None):
    """Fraction-free Gauss-Jordan elimination (Bareiss).

    Works on a copy of ``a``. Elimination stops after the first ``ncols``
    columns (all columns by default), which lets callers reduce an augmented
    matrix ``[A | B]`` on the ``A`` part only.

    Returns ``(rows, pivots, scale)``: every pivot entry of ``rows`` equals
    ``scale``, so ``rows / scale`` is the reduced row echelon form.
    """
    rows = [list(r) for r in a]
    nrows = len(rows)
    width = len(rows[0]) if nrows else 0
    if ncols is None:
        ncols = width
    pivots = []
    prev = 1
    r = 0
    for c in range(ncols):
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
    """Pivot columns of ``a``, chosen left to right; ``len`` is the rank."""
    return ff_rref(a)[1]
