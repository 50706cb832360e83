"""Partitioned matrices, pseudo Schur complements and pseudo principal pivot transforms.

For ``M = [[A, B], [C, D]]`` with ``A`` m x n, ``B`` m x p, ``C`` s x n and
``D`` s x p:

* ``F = D - C A^+ B`` is the pseudo Schur complement of ``A``,
* ``G = A - B D^+ C`` the complementary one (of ``D``),
* ``H = [[A^+, -A^+ B], [C A^+, F]]`` the pseudo principal pivot transform
  relative to ``A``, an (n+s) x (m+p) matrix split at (n, m),
* ``J = [[G, B D^+], [-D^+ C, D^+]]`` the complementary transform relative to
  ``D``, an (m+p) x (n+s) matrix split at (m, n).
"""

from dataclasses import dataclass

import numpy as np

from .matrix import EQ_TOL, RATIONAL, Matrix, ShapeError, pinv
from .ranges import INCL_TOL, InclusionReport, range_included


class HypothesisError(ValueError):
    """A range-inclusion hypothesis required by an operation does not hold."""

    def __init__(self, failed, result=None):
        self.failed = list(failed)
        self.result = result
        super().__init__("hypothesis violated: " + ", ".join(self.failed))


@dataclass(frozen=True)
class BlockMatrix:
    whole: Matrix
    row_split: int
    col_split: int

    def __post_init__(self):
        r, c = self.whole.shape
        if not 0 < self.row_split < r:
            raise ShapeError(f"row split {self.row_split} outside 1..{r - 1}")
        if not 0 < self.col_split < c:
            raise ShapeError(f"column split {self.col_split} outside 1..{c - 1}")

    @classmethod
    def from_blocks(cls, a, b, c, d):
        whole = Matrix.bmat([[a, b], [c, d]])
        return cls(whole, a.rows, a.cols)

    @property
    def mode(self):
        return self.whole.mode

    @property
    def dims(self):
        """``(m, n, s, p)``: A is m x n, B m x p, C s x n, D s x p."""
        r, c = self.whole.shape
        return self.row_split, self.col_split, r - self.row_split, c - self.col_split

    @property
    def a(self):
        return self.whole.block(0, self.row_split, 0, self.col_split)

    @property
    def b(self):
        return self.whole.block(0, self.row_split, self.col_split, self.whole.cols)

    @property
    def c(self):
        return self.whole.block(self.row_split, self.whole.rows, 0, self.col_split)

    @property
    def d(self):
        return self.whole.block(self.row_split, self.whole.rows, self.col_split, self.whole.cols)


@dataclass(frozen=True)
class SchurParts:
    """Pseudoinverses and complements shared by the block formulas."""

    a_pinv: Matrix
    d_pinv: Matrix
    f: Matrix
    g: Matrix
    f_pinv: Matrix
    g_pinv: Matrix


def schur_parts(mb):
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    ad = pinv(a)
    dd = pinv(d)
    f = d - c @ ad @ b
    g = a - b @ dd @ c
    return SchurParts(ad, dd, f, g, pinv(f), pinv(g))


@dataclass(frozen=True)
class PseudoSchurResult:
    value: Matrix
    relative_to: str
    hypotheses: InclusionReport

    @property
    def sound(self):
        return self.hypotheses.holds()


def pseudo_schur(mb, tol=INCL_TOL):
    """``F = D - C A^+ B``, with the verdicts of ``R(B) <= R(A)`` and ``R(C^T) <= R(A^T)``."""
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    ad = pinv(a)
    hyp = InclusionReport({
        "incl_B_A": range_included(b, a, tol, x_pinv=ad),
        "incl_Ct_At": range_included(c.T, a.T, tol, x_pinv=ad.T),
    })
    return PseudoSchurResult(d - c @ ad @ b, "A", hyp)


def complementary_pseudo_schur(mb, tol=INCL_TOL):
    """``G = A - B D^+ C``, with the verdicts of ``R(C) <= R(D)`` and ``R(B^T) <= R(D^T)``."""
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    dd = pinv(d)
    hyp = InclusionReport({
        "incl_C_D": range_included(c, d, tol, x_pinv=dd),
        "incl_Bt_Dt": range_included(b.T, d.T, tol, x_pinv=dd.T),
    })
    return PseudoSchurResult(a - b @ dd @ c, "D", hyp)


def pppt(mb, parts=None):
    """Pseudo principal pivot transform ``H`` relative to ``A``."""
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    ad = pinv(a) if parts is None else parts.a_pinv
    f = d - c @ ad @ b if parts is None else parts.f
    return Matrix.bmat([[ad, -(ad @ b)], [c @ ad, f]])


def cpppt(mb, parts=None):
    """Complementary pseudo principal pivot transform ``J`` relative to ``D``."""
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    dd = pinv(d) if parts is None else parts.d_pinv
    g = a - b @ dd @ c if parts is None else parts.g
    return Matrix.bmat([[g, b @ dd], [-(dd @ c), dd]])


def pppt_block(mb, parts=None):
    """``H`` as a block matrix split at (n, m), ready for a second transform."""
    m, n, _, _ = mb.dims
    return BlockMatrix(pppt(mb, parts), n, m)


def cpppt_block(mb, parts=None):
    m, n, _, _ = mb.dims
    return BlockMatrix(cpppt(mb, parts), m, n)


# -- domain-range exchange -------------------------------------------------


@dataclass(frozen=True)
class ExchangeResult:
    """One instance of the exchange identity between ``M`` and ``H`` (or ``J``).

    ``premise`` is the side of the equivalence that was constructed, and
    ``conclusion`` the side that was checked against it.
    """

    variant: str
    x1: Matrix
    x2: Matrix
    y1: Matrix
    y2: Matrix
    premise: bool
    conclusion: bool
    residual: float

    @property
    def verified(self):
        return self.premise and self.conclusion


def _vector(v, length, mode, name):
    if isinstance(v, Matrix):
        if v.shape == (1, length):
            v = v.T
        if v.shape != (length, 1):
            raise ShapeError(f"{name} must have length {length}, got shape {v.shape}")
        if v.mode != mode:
            v = Matrix(v.array, mode)
        return v
    vals = list(np.ravel(np.asarray(v, dtype=object)))
    if len(vals) != length:
        raise ShapeError(f"{name} must have length {length}, got {len(vals)}")
    return Matrix.column(vals, mode)


def _inf_gap(lhs, rhs, tol):
    """(matches, relative infinity-norm gap) between two stacked vectors."""
    diff = (lhs - rhs).max_abs()
    if lhs.mode == RATIONAL:
        return diff == 0.0, diff
    scale = 1.0 + rhs.max_abs()
    return diff <= tol * scale, diff / scale


def _require(mb, names, tol, check):
    if not check:
        return
    from .ranges import condition_report

    report = condition_report(mb, tol)
    failed = report.failed(names)
    if failed:
        raise HypothesisError(failed)


def exchange_forward(mb, x1, x2, variant="i", tol=EQ_TOL, incl_tol=INCL_TOL, check=True):
    """Instantiate the exchange identity starting from ``M [x1; x2]``.

    Variant ``"i"`` sets ``y1 = A x1 + B x2`` and ``y2 = C x1 + D x2``, so
    ``M [x1; x2] = [A A^+ y1; y2]``, and checks ``H [y1; x2] = [A^+ A x1; y2]``.
    Needs ``R(B) <= R(A)`` and ``R(C^T) <= R(A^T)``.

    Variant ``"ii"`` pivots on ``D``: with the same ``y1, y2`` we have
    ``M [x1; x2] = [y1; D D^+ y2]`` and check ``J [x1; y2] = [y1; D^+ D x2]``.
    Needs ``R(C) <= R(D)`` and ``R(B^T) <= R(D^T)``.
    """
    m, n, s, p = mb.dims
    mode = mb.mode
    x1 = _vector(x1, n, mode, "x1")
    x2 = _vector(x2, p, mode, "x2")
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    y1 = a @ x1 + b @ x2
    y2 = c @ x1 + d @ x2
    if variant == "i":
        _require(mb, ("incl_B_A", "incl_Ct_At"), incl_tol, check)
        ad = pinv(a)
        premise, _ = _inf_gap(Matrix.bmat([[y1], [y2]]),
                              Matrix.bmat([[a @ (ad @ y1)], [y2]]), tol)
        lhs = pppt(mb) @ Matrix.bmat([[y1], [x2]])
        rhs = Matrix.bmat([[ad @ (a @ x1)], [y2]])
    elif variant == "ii":
        _require(mb, ("incl_C_D", "incl_Bt_Dt"), incl_tol, check)
        dd = pinv(d)
        premise, _ = _inf_gap(Matrix.bmat([[y1], [y2]]),
                              Matrix.bmat([[y1], [d @ (dd @ y2)]]), tol)
        lhs = cpppt(mb) @ Matrix.bmat([[x1], [y2]])
        rhs = Matrix.bmat([[y1], [dd @ (d @ x2)]])
    else:
        raise ValueError(f"unknown variant {variant!r}")
    conclusion, gap = _inf_gap(lhs, rhs, tol)
    return ExchangeResult(variant, x1, x2, y1, y2, premise, conclusion, gap)


def exchange_backward(mb, y1=None, y2=None, *, x1=None, x2=None, variant="i",
                      tol=EQ_TOL, incl_tol=INCL_TOL, check=True):
    """Instantiate the converse direction, starting from the transform's side.

    Variant ``"i"`` takes ``y1, x2`` (and the claimed ``y2``): ``x1`` is read
    off ``H [y1; x2] = [A^+ A x1; y2]`` as ``A^+ y1 - A^+ B x2`` and the result
    checks ``M [x1; x2] = [A A^+ y1; y2]``.

    Variant ``"ii"`` takes ``x1, y2`` (and the claimed ``y1``): ``x2`` is read
    off ``J [x1; y2] = [y1; D^+ D x2]`` as ``-D^+ C x1 + D^+ y2`` and the result
    checks ``M [x1; x2] = [y1; D D^+ y2]``.

    A claimed vector that disagrees with the transform leaves ``premise`` false.
    """
    m, n, s, p = mb.dims
    mode = mb.mode
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    if variant == "i":
        _require(mb, ("incl_B_A", "incl_Ct_At"), incl_tol, check)
        y1 = _vector(y1, m, mode, "y1")
        x2 = _vector(x2, p, mode, "x2")
        ad = pinv(a)
        top_bottom = pppt(mb) @ Matrix.bmat([[y1], [x2]])
        x1 = top_bottom.block(0, n, 0, 1)
        image = top_bottom.block(n, n + s, 0, 1)
        y2 = image if y2 is None else _vector(y2, s, mode, "y2")
        premise, _ = _inf_gap(top_bottom, Matrix.bmat([[ad @ (a @ x1)], [y2]]), tol)
        lhs = mb.whole @ Matrix.bmat([[x1], [x2]])
        rhs = Matrix.bmat([[a @ (ad @ y1)], [y2]])
    elif variant == "ii":
        _require(mb, ("incl_C_D", "incl_Bt_Dt"), incl_tol, check)
        x1 = _vector(x1, n, mode, "x1")
        y2 = _vector(y2, s, mode, "y2")
        dd = pinv(d)
        top_bottom = cpppt(mb) @ Matrix.bmat([[x1], [y2]])
        image = top_bottom.block(0, m, 0, 1)
        x2 = top_bottom.block(m, m + p, 0, 1)
        y1 = image if y1 is None else _vector(y1, m, mode, "y1")
        premise, _ = _inf_gap(top_bottom, Matrix.bmat([[y1], [dd @ (d @ x2)]]), tol)
        lhs = mb.whole @ Matrix.bmat([[x1], [x2]])
        rhs = Matrix.bmat([[y1], [d @ (dd @ y2)]])
    else:
        raise ValueError(f"unknown variant {variant!r}")
    conclusion, gap = _inf_gap(lhs, rhs, tol)
    return ExchangeResult(variant, x1, x2, y1, y2, premise, conclusion, gap)
