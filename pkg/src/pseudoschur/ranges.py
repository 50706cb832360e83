"""Range-inclusion tests and the eight-hypothesis report for a block matrix."""

from dataclasses import dataclass, field

from .matrix import RATIONAL, Matrix, ShapeError, pinv, rank

INCL_TOL = 1e-8
MARGIN = 10.0

# Report order follows the hypotheses of the block inversion formulas.
INCLUSIONS = (
    ("incl_B_A", "R(B) <= R(A)"),
    ("incl_Ct_At", "R(C^T) <= R(A^T)"),
    ("incl_CAd_F", "R(C A^+) <= R(F)"),
    ("incl_AdBt_Ft", "R((A^+ B)^T) <= R(F^T)"),
    ("incl_C_D", "R(C) <= R(D)"),
    ("incl_Bt_Dt", "R(B^T) <= R(D^T)"),
    ("incl_BDd_G", "R(B D^+) <= R(G)"),
    ("incl_DdCt_Gt", "R((D^+ C)^T) <= R(G^T)"),
)
NAMES = tuple(name for name, _ in INCLUSIONS)
A_SIDE = NAMES[:4]
D_SIDE = NAMES[4:]
PPT_SIDE = ("incl_B_A", "incl_Ct_At", "incl_C_D", "incl_Bt_Dt")


@dataclass(frozen=True)
class Inclusion:
    holds: bool
    residual: float
    threshold: float = 0.0
    marginal: bool = False

    def as_dict(self):
        return {"holds": self.holds, "residual": self.residual,
                "threshold": self.threshold, "marginal": self.marginal}


def range_included(y, x, tol=INCL_TOL, x_pinv=None):
    """Test ``R(Y) <= R(X)`` through the projector residual ``|(I - X X^+) Y|_F``.

    Rational mode demands a zero residual. In float mode the inclusion holds
    when the residual is at most ``tol * max(1, |Y|_F)``; verdicts within a
    factor of ten of that threshold are flagged ``marginal``.
    """
    if y.rows != x.rows:
        raise ShapeError(f"row counts differ: {y.rows} vs {x.rows}")
    xd = pinv(x) if x_pinv is None else x_pinv
    res = (y - x @ (xd @ y)).frobenius()
    if y.mode == RATIONAL:
        return Inclusion(res == 0.0, res)
    threshold = tol * max(1.0, y.frobenius())
    marginal = threshold / MARGIN < res <= threshold * MARGIN
    return Inclusion(res <= threshold, res, threshold, marginal)


def range_included_by_rank(y, x, rtol=None):
    """Cross-check: ``R(Y) <= R(X)`` iff ``rank([X | Y]) == rank(X)``."""
    if y.rows != x.rows:
        raise ShapeError(f"row counts differ: {y.rows} vs {x.rows}")
    return rank(Matrix.bmat([[x, y]]), rtol) == rank(x, rtol)


@dataclass(frozen=True)
class InclusionReport:
    """Verdicts for the eight range inclusions, keyed by name."""

    verdicts: dict = field(default_factory=dict)

    def __getitem__(self, name):
        return self.verdicts[name]

    def holds(self, *names):
        return all(self.verdicts[n].holds for n in (names or self.verdicts))

    def failed(self, names=None):
        names = self.verdicts if names is None else names
        return [n for n in names if not self.verdicts[n].holds]

    def subset(self, names):
        return InclusionReport({n: self.verdicts[n] for n in names})

    def as_dict(self):
        return {n: v.as_dict() for n, v in self.verdicts.items()}

    def describe(self):
        labels = dict(INCLUSIONS)
        lines = []
        for name, v in self.verdicts.items():
            flag = " (marginal)" if v.marginal else ""
            lines.append(f"{name:14s} {labels[name]:24s} "
                         f"{'holds' if v.holds else 'FAILS':5s}  residual={v.residual:.3e}{flag}")
        return "\n".join(lines)


def condition_report(mb, tol=INCL_TOL, parts=None):
    """Evaluate all eight inclusions on a :class:`~pseudoschur.blocks.BlockMatrix`."""
    from .blocks import schur_parts

    p = schur_parts(mb) if parts is None else parts
    a, b, c, d = mb.a, mb.b, mb.c, mb.d
    ad, dd, f, g = p.a_pinv, p.d_pinv, p.f, p.g
    fd, gd = p.f_pinv, p.g_pinv
    checks = {
        "incl_B_A": (b, a, ad),
        "incl_Ct_At": (c.T, a.T, ad.T),
        "incl_CAd_F": (c @ ad, f, fd),
        "incl_AdBt_Ft": ((ad @ b).T, f.T, fd.T),
        "incl_C_D": (c, d, dd),
        "incl_Bt_Dt": (b.T, d.T, dd.T),
        "incl_BDd_G": (b @ dd, g, gd),
        "incl_DdCt_Gt": ((dd @ c).T, g.T, gd.T),
    }
    return InclusionReport(
        {name: range_included(y, x, tol, x_pinv=xp) for name, (y, x, xp) in checks.items()}
    )
