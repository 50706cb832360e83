"""Dense matrices over float64 or exact rationals, and the Moore-Penrose inverse.

A :class:`Matrix` carries its scalar backend in ``mode``: ``"float"`` stores a
float64 array, ``"rational"`` stores :class:`fractions.Fraction` entries
(always in lowest terms). Matrices are immutable.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Integral, Rational, Real

import numpy as np

from . import kernels

FLOAT = "float"
RATIONAL = "rational"
MODES = (FLOAT, RATIONAL)

EPS = np.finfo(np.float64).eps
EQ_TOL = 1e-9
CERT_SCALE = 1e-10


class ModeMismatchError(TypeError):
    """Operands live on different scalar backends."""


class ShapeError(ValueError):
    """Operand shapes are not conformable."""


def _to_fraction(x):
    if isinstance(x, bool):
        raise TypeError(f"boolean entry {x!r} is not a number")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (Integral, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational entry {x!r}") from exc
    if isinstance(x, Real):
        x = float(x)
        if not math.isfinite(x):
            raise ValueError(f"non-finite entry {x!r}")
        # decimal reading of the literal, not the binary expansion
        return Fraction(repr(x))
    raise TypeError(f"unsupported entry {x!r}")


def _to_float(x):
    if isinstance(x, bool):
        raise TypeError(f"boolean entry {x!r} is not a number")
    if isinstance(x, str):
        x = Fraction(x.strip()) if "/" in x else float(x)
    return float(x)


class Matrix:
    """Immutable dense matrix on one scalar backend."""

    __slots__ = ("_a", "mode")

    def __init__(self, data, mode=FLOAT):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")
        if isinstance(data, Matrix):
            data = data._a if data.mode == mode else data.tolist()
        if isinstance(data, np.ndarray) and data.ndim == 2:
            rows = data.tolist()
        else:
            rows = [list(r) for r in data]
        if not rows or not rows[0]:
            raise ShapeError("matrices must have at least one row and one column")
        ncols = len(rows[0])
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ShapeError(f"row {i} has {len(r)} entries, expected {ncols}")
        if mode == FLOAT:
            a = np.array([[_to_float(x) for x in r] for r in rows], dtype=np.float64)
            if not np.all(np.isfinite(a)):
                raise ValueError("non-finite entries are not allowed")
        else:
            a = np.empty((len(rows), ncols), dtype=object)
            for i, r in enumerate(rows):
                for j, x in enumerate(r):
                    a[i, j] = _to_fraction(x)
        a.flags.writeable = False
        self._a = a
        self.mode = mode

    @classmethod
    def _wrap(cls, a, mode):
        m = object.__new__(cls)
        a.flags.writeable = False
        m._a = a
        m.mode = mode
        return m

    @classmethod
    def zeros(cls, rows, cols, mode=FLOAT):
        if rows <= 0 or cols <= 0:
            raise ShapeError("matrices must have at least one row and one column")
        if mode == FLOAT:
            return cls._wrap(np.zeros((rows, cols)), mode)
        a = np.empty((rows, cols), dtype=object)
        a.fill(Fraction(0))
        return cls._wrap(a, mode)

    @classmethod
    def identity(cls, n, mode=FLOAT):
        m = cls.zeros(n, n, mode)._a.copy()
        for i in range(n):
            m[i, i] = 1.0 if mode == FLOAT else Fraction(1)
        return cls._wrap(m, mode)

    @classmethod
    def bmat(cls, blocks):
        """Assemble a matrix from a 2-d list of conformable blocks."""
        mode = blocks[0][0].mode
        for row in blocks:
            for b in row:
                if b.mode != mode:
                    raise ModeMismatchError("blocks mix scalar backends")
        try:
            a = np.block([[b._a for b in row] for row in blocks])
        except ValueError as exc:
            raise ShapeError(str(exc)) from exc
        return cls._wrap(a, mode)

    @classmethod
    def column(cls, values, mode=FLOAT):
        return cls([[v] for v in values], mode)

    # -- basic structure -------------------------------------------------

    @property
    def shape(self):
        return self._a.shape

    @property
    def rows(self):
        return self._a.shape[0]

    @property
    def cols(self):
        return self._a.shape[1]

    @property
    def array(self):
        """Read-only ndarray view (float64 or object of Fractions)."""
        return self._a

    @property
    def T(self):
        return Matrix._wrap(self._a.T.copy(), self.mode)

    def __getitem__(self, idx):
        return self._a[idx]

    def block(self, r0, r1, c0, c1):
        return Matrix._wrap(self._a[r0:r1, c0:c1].copy(), self.mode)

    def take_columns(self, cols):
        return Matrix._wrap(self._a[:, list(cols)].copy(), self.mode)

    def tolist(self):
        return self._a.tolist()

    def to_float(self):
        if self.mode == FLOAT:
            return self
        return Matrix._wrap(self._a.astype(np.float64), FLOAT)

    def to_rational(self):
        if self.mode == RATIONAL:
            return self
        return Matrix(self._a, RATIONAL)

    def __repr__(self):
        if self.mode == RATIONAL:
            body = [[str(x) for x in r] for r in self._a.tolist()]
        else:
            body = self._a.tolist()
        return f"Matrix({body}, mode={self.mode!r})"

    # -- arithmetic ------------------------------------------------------

    def _check(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.mode != self.mode:
            raise ModeMismatchError(f"{self.mode} vs {other.mode} operands")
        return other

    def __matmul__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.mode == FLOAT:
            return Matrix._wrap(self._a @ other._a, FLOAT)
        ia, da = _integer_image(self._a)
        ib, db = _integer_image(other._a)
        prod = kernels.int_matmul(ia, ib)
        d = da * db
        return Matrix._wrap(_fraction_array(prod, d), RATIONAL)

    def _elementwise(self, other, op):
        if self._check(other) is NotImplemented:
            return NotImplemented
        if self.shape != other.shape:
            raise ShapeError(f"shape {self.shape} vs {other.shape}")
        return Matrix._wrap(op(self._a, other._a), self.mode)

    def __add__(self, other):
        return self._elementwise(other, np.add)

    def __sub__(self, other):
        return self._elementwise(other, np.subtract)

    def __neg__(self):
        return Matrix._wrap(-self._a, self.mode)

    def scale(self, c):
        c = _to_fraction(c) if self.mode == RATIONAL else float(c)
        return Matrix._wrap(self._a * c, self.mode)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (
            self.mode == other.mode
            and self.shape == other.shape
            and bool(np.all(self._a == other._a))
        )

    def __hash__(self):
        return hash((self.mode, self.shape, tuple(self._a.ravel().tolist())))

    def is_zero(self):
        return not np.any(self._a != 0)

    def frobenius(self):
        """Frobenius norm as a float (exactly zero iff the matrix is zero)."""
        if self.mode == FLOAT:
            return float(np.linalg.norm(self._a))
        sq = sum((x * x for x in self._a.ravel()), Fraction(0))
        return math.sqrt(sq) if sq else 0.0

    def max_abs(self):
        return float(max(abs(x) for x in self._a.ravel()))


def _integer_image(a):
    """Scale a Fraction array to integers: returns (int rows, common denominator)."""
    den = 1
    for x in a.ravel():
        d = x.denominator
        if den % d:
            den = den * d // math.gcd(den, d)
    return [[x.numerator * (den // x.denominator) for x in row] for row in a], den


def _fraction_array(int_rows, den):
    n = len(int_rows)
    m = len(int_rows[0])
    out = np.empty((n, m), dtype=object)
    for i, row in enumerate(int_rows):
        for j, v in enumerate(row):
            out[i, j] = Fraction(v, den)
    return out


def agree(x, y, tol=EQ_TOL):
    """Equality on the matrices' backend.

    Exact in rational mode; otherwise ``|x - y|_F <= tol * (1 + |y|_F)``.
    """
    if x.mode != y.mode:
        raise ModeMismatchError(f"{x.mode} vs {y.mode} operands")
    if x.shape != y.shape:
        return False
    if x.mode == RATIONAL:
        return x == y
    return (x - y).frobenius() <= tol * (1.0 + y.frobenius())


# -- rank and pseudoinverse ----------------------------------------------


def _singular_cutoff(m, rtol):
    s = np.linalg.svd(m.array, compute_uv=False)
    if rtol is None:
        rtol = max(m.shape) * EPS
    smax = s[0] if s.size else 0.0
    return s, rtol * smax


def rank(m, rtol=None):
    """Numerical rank (float) or exact rank (rational).

    In float mode singular values above ``rtol * sigma_max`` are counted;
    ``rtol`` defaults to ``max(rows, cols) * eps``.
    """
    if m.mode == RATIONAL:
        ints, _ = _integer_image(m.array)
        return len(kernels.echelon_pivots(ints))
    s, cutoff = _singular_cutoff(m, rtol)
    return int(np.count_nonzero(s > cutoff))


def full_rank_factorization(m):
    """Exact factorization ``m = P @ Q`` (rational mode only).

    ``P`` holds the pivot columns of ``m`` (chosen left to right) and ``Q``
    the nonzero rows of its reduced row echelon form. Returns ``None`` for the
    zero matrix.
    """
    if m.mode != RATIONAL:
        raise ModeMismatchError("full-rank factorization needs the rational backend")
    ints, _ = _integer_image(m.array)
    rows, pivots, scale = kernels.ff_rref(ints)
    r = len(pivots)
    if r == 0:
        return None
    q = Matrix._wrap(_fraction_array(rows[:r], scale), RATIONAL)
    return m.take_columns(pivots), q


def inverse(m):
    """Exact or floating inverse of a nonsingular square matrix."""
    if m.rows != m.cols:
        raise ShapeError(f"cannot invert non-square {m.shape} matrix")
    if m.mode == FLOAT:
        return Matrix._wrap(np.linalg.inv(m.array), FLOAT)
    n = m.rows
    ints, den = _integer_image(m.array)
    aug = [row + [int(i == j) for j in range(n)] for i, row in enumerate(ints)]
    rows, pivots, scale = kernels.ff_rref(aug, n)
    if len(pivots) < n:
        raise np.linalg.LinAlgError("singular matrix")
    right = [[den * v for v in row[n:]] for row in rows]
    return Matrix._wrap(_fraction_array(right, scale), RATIONAL)


def pinv(m, rtol=None):
    """Moore-Penrose inverse.

    Float mode inverts the singular values above ``rtol * sigma_max`` of an
    SVD. Rational mode is exact, through the full-rank factorization
    ``m = P Q``: ``pinv(m) = Q^T (Q Q^T)^-1 (P^T P)^-1 P^T``.
    """
    if m.mode == FLOAT:
        u, s, vt = np.linalg.svd(m.array, full_matrices=False)
        cutoff = (max(m.shape) * EPS if rtol is None else rtol) * (s[0] if s.size else 0.0)
        keep = s > cutoff
        inv_s = np.zeros_like(s)
        inv_s[keep] = 1.0 / s[keep]
        return Matrix._wrap((vt.T * inv_s) @ u.T, FLOAT)
    frf = full_rank_factorization(m)
    if frf is None:
        return Matrix.zeros(m.cols, m.rows, RATIONAL)
    p, q = frf
    qt, pt = q.T, p.T
    return qt @ inverse(q @ qt) @ inverse(pt @ p) @ pt


# -- Penrose certificate ---------------------------------------------------


@dataclass(frozen=True)
class PinvCertificate:
    """Frobenius residuals of the four Penrose equations for a claimed ``pinv``.

    ``r1 = |M - MXM|``, ``r2 = |X - XMX|``, ``r3 = |MX - (MX)^T|``,
    ``r4 = |XM - (XM)^T|``.
    """

    r1: float
    r2: float
    r3: float
    r4: float
    tol: float = 0.0

    @property
    def worst(self):
        return max(self.r1, self.r2, self.r3, self.r4)

    @property
    def ok(self):
        return self.worst <= self.tol

    def as_dict(self):
        return {"r1": self.r1, "r2": self.r2, "r3": self.r3, "r4": self.r4,
                "tol": self.tol, "ok": self.ok}


def cert_tol(m, x):
    """Default certificate tolerance ``1e-10 (1 + |M|_F)(1 + |X|_F)``; 0 when exact."""
    if m.mode == RATIONAL:
        return 0.0
    return CERT_SCALE * (1.0 + m.frobenius()) * (1.0 + x.frobenius())


def penrose_certificate(m, x, tol=None):
    if x.shape != (m.cols, m.rows):
        raise ShapeError(f"claimed inverse has shape {x.shape}, expected {(m.cols, m.rows)}")
    mx = m @ x
    xm = x @ m
    return PinvCertificate(
        r1=(m - mx @ m).frobenius(),
        r2=(x - xm @ x).frobenius(),
        r3=(mx - mx.T).frobenius(),
        r4=(xm - xm.T).frobenius(),
        tol=cert_tol(m, x) if tol is None else tol,
    )


# -- {1}-inverses and EP matrices ----------------------------------------


def one_inverse_sample(m, w, m_pinv=None):
    """The {1}-inverse ``pinv(M) + W - pinv(M) M W M pinv(M)``.

    Every ``W`` of the shape of ``M^T`` gives an ``X`` with ``M X M = M``, and
    every such ``X`` arises this way.
    """
    if w.shape != (m.cols, m.rows):
        raise ShapeError(f"W must have shape {(m.cols, m.rows)}, got {w.shape}")
    md = pinv(m) if m_pinv is None else m_pinv
    return md + w - md @ m @ w @ m @ md


def is_range_symmetric(m, tol=EQ_TOL):
    """True iff ``M pinv(M) == pinv(M) M``, i.e. ``M`` is an EP matrix."""
    if m.rows != m.cols:
        raise ShapeError(f"range symmetry needs a square matrix, got {m.shape}")
    md = pinv(m)
    return agree(m @ md, md @ m, tol)
