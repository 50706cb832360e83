"""Pseudo Schur complements, pseudo principal pivot transforms and block Moore-Penrose inverses."""

from .blockinv import (
    BlockPinvResult,
    PptComparison,
    QuotientResult,
    block_pinv,
    block_pinv_mixed,
    block_pinv_via_F,
    block_pinv_via_G,
    pppt_pinv_vs_cpppt,
    quotient_identities,
)
from .blocks import (
    BlockMatrix,
    ExchangeResult,
    HypothesisError,
    PseudoSchurResult,
    complementary_pseudo_schur,
    cpppt,
    exchange_backward,
    exchange_forward,
    pppt,
    pseudo_schur,
)
from .kernels import BACKEND as KERNEL_BACKEND
from .matrix import (
    FLOAT,
    RATIONAL,
    Matrix,
    ModeMismatchError,
    PinvCertificate,
    ShapeError,
    agree,
    is_range_symmetric,
    one_inverse_sample,
    penrose_certificate,
    pinv,
    rank,
)
from .ranges import InclusionReport, condition_report, range_included

__version__ = "0.1.0"
