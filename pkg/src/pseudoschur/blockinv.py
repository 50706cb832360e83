"""Moore-Penrose inverses of 2 x 2 block matrices from their pseudo Schur complements."""

import warnings
from dataclasses import dataclass

from .blocks import HypothesisError, cpppt, pppt, schur_parts
from .matrix import EQ_TOL, Matrix, PinvCertificate, agree, penrose_certificate, pinv
from .ranges import A_SIDE, D_SIDE, INCL_TOL, NAMES, PPT_SIDE, InclusionReport, condition_report

FORMULAS = ("via-F", "via-G", "mixed")


@dataclass(frozen=True)
class BlockPinvResult:
    value: Matrix
    formula: str
    hypotheses_used: InclusionReport
    certificate: PinvCertificate

    @property
    def sound(self):
        """All hypotheses of the formula hold."""
        return self.hypotheses_used.holds()

    @property
    def failed(self):
        return self.hypotheses_used.failed()


def _finish(mb, value, formula, names, report, strict):
    result = BlockPinvResult(value, formula, report.subset(names),
                             penrose_certificate(mb.whole, value))
    if strict and not result.sound:
        raise HypothesisError(result.failed, result)
    return result


def _prepare(mb, tol, parts, report):
    parts = schur_parts(mb) if parts is None else parts
    report = condition_report(mb, tol, parts) if report is None else report
    return parts, report


def block_pinv_via_F(mb, tol=INCL_TOL, strict=False, parts=None, report=None):
    """``M^+`` from ``A^+`` and ``F^+``, ``F = D - C A^+ B``.

    Valid when the four A-side inclusions hold. The result is returned either
    way; with ``strict=True`` a violated hypothesis raises
    :class:`HypothesisError` carrying the (unsound) result.
    """
    parts, report = _prepare(mb, tol, parts, report)
    b, c = mb.b, mb.c
    ad, fd = parts.a_pinv, parts.f_pinv
    adb = ad @ b
    cad = c @ ad
    adb_fd = adb @ fd
    value = Matrix.bmat([
        [ad + adb_fd @ cad, -adb_fd],
        [-(fd @ cad), fd],
    ])
    return _finish(mb, value, "via-F", A_SIDE, report, strict)


def block_pinv_via_G(mb, tol=INCL_TOL, strict=False, parts=None, report=None):
    """``M^+`` from ``D^+`` and ``G^+``, ``G = A - B D^+ C``; needs the D-side inclusions."""
    parts, report = _prepare(mb, tol, parts, report)
    b, c = mb.b, mb.c
    dd, gd = parts.d_pinv, parts.g_pinv
    bdd = b @ dd
    ddc = dd @ c
    gd_bdd = gd @ bdd
    value = Matrix.bmat([
        [gd, -gd_bdd],
        [-(ddc @ gd), dd + ddc @ gd_bdd],
    ])
    return _finish(mb, value, "via-G", D_SIDE, report, strict)


def block_pinv_mixed(mb, tol=INCL_TOL, strict=False, parts=None, report=None):
    """``M^+ = [[G^+, -A^+ B F^+], [-D^+ C G^+, F^+]]``; needs all eight inclusions."""
    parts, report = _prepare(mb, tol, parts, report)
    b, c = mb.b, mb.c
    ad, dd, fd, gd = parts.a_pinv, parts.d_pinv, parts.f_pinv, parts.g_pinv
    value = Matrix.bmat([
        [gd, -(ad @ b @ fd)],
        [-(dd @ c @ gd), fd],
    ])
    return _finish(mb, value, "mixed", NAMES, report, strict)


def block_pinv(mb, formula="via-F", **kwargs):
    dispatch = {"via-F": block_pinv_via_F, "via-G": block_pinv_via_G, "mixed": block_pinv_mixed,
                "f": block_pinv_via_F, "g": block_pinv_via_G}
    try:
        fn = dispatch[formula]
    except KeyError:
        raise ValueError(f"unknown formula {formula!r}; expected one of {FORMULAS}") from None
    return fn(mb, **kwargs)


@dataclass(frozen=True)
class QuotientResult:
    """Residuals of ``G^+ = A^+ + A^+ B F^+ C A^+`` and ``F^+ = D^+ + D^+ C G^+ B D^+``."""

    g_identity_residual: float
    f_identity_residual: float
    hypotheses: InclusionReport

    @property
    def worst(self):
        return max(self.g_identity_residual, self.f_identity_residual)


def quotient_identities(mb, tol=INCL_TOL, parts=None, report=None):
    parts, report = _prepare(mb, tol, parts, report)
    if not report.holds():
        warnings.warn("quotient identities evaluated with violated hypotheses: "
                      + ", ".join(report.failed()), stacklevel=2)
    b, c = mb.b, mb.c
    ad, dd, fd, gd = parts.a_pinv, parts.d_pinv, parts.f_pinv, parts.g_pinv
    g_rhs = ad + ad @ b @ fd @ c @ ad
    f_rhs = dd + dd @ c @ gd @ b @ dd
    return QuotientResult((gd - g_rhs).frobenius(), (fd - f_rhs).frobenius(), report)


@dataclass(frozen=True)
class PptComparison:
    """``pinv(H)`` against ``J`` together with the products ``JH`` and ``HJ``."""

    equal: bool
    residual: float
    h: Matrix
    j: Matrix
    h_pinv: Matrix
    jh: Matrix
    hj: Matrix
    hypotheses: InclusionReport

    @property
    def sound(self):
        return self.hypotheses.holds()


def pppt_pinv_vs_cpppt(mb, tol=EQ_TOL, incl_tol=INCL_TOL, parts=None, report=None):
    """Compare ``pinv(pppt(M))`` with ``cpppt(M)``.

    They coincide when ``R(B) <= R(A)``, ``R(C^T) <= R(A^T)``, ``R(C) <= R(D)``
    and ``R(B^T) <= R(D^T)``; the verdicts are reported, never enforced.
    ``equal`` means ``|H^+ - J|_F <= tol (1 + |J|_F)``, exact in rational mode.
    """
    parts, report = _prepare(mb, incl_tol, parts, report)
    h = pppt(mb, parts)
    j = cpppt(mb, parts)
    hd = pinv(h)
    residual = (hd - j).frobenius()
    return PptComparison(agree(hd, j, tol), residual, h, j, hd, j @ h, h @ j,
                         report.subset(PPT_SIDE))


def block_diagonal(top, bottom):
    """``[[top, 0], [0, bottom]]``."""
    mode = top.mode
    return Matrix.bmat([
        [top, Matrix.zeros(top.rows, bottom.cols, mode)],
        [Matrix.zeros(bottom.rows, top.cols, mode), bottom],
    ])


def ppt_diagonals(mb, parts=None):
    """Expected ``JH = diag(A A^+, D^+ D)`` and ``HJ = diag(A^+ A, D D^+)``."""
    parts = schur_parts(mb) if parts is None else parts
    a, d = mb.a, mb.d
    ad, dd = parts.a_pinv, parts.d_pinv
    return block_diagonal(a @ ad, dd @ d), block_diagonal(ad @ a, d @ dd)


def via_F_proof_products(mb, value, parts=None):
    """Expected ``XM = diag(A^+ A, F^+ F)`` and ``MX = diag(A A^+, F F^+)``."""
    parts = schur_parts(mb) if parts is None else parts
    a = mb.a
    ad, f, fd = parts.a_pinv, parts.f, parts.f_pinv
    expected_xm = block_diagonal(ad @ a, fd @ f)
    expected_mx = block_diagonal(a @ ad, f @ fd)
    return value @ mb.whole, expected_xm, mb.whole @ value, expected_mx

