"""Shipped fixtures: the two worked examples and a generalized-Schur invariance violator."""

from importlib import resources

from .matrix import FLOAT, RATIONAL, Matrix
from .matrixfile import parse_matrix_text
from .blocks import BlockMatrix

NAMES = ("example1", "example2", "carlson_violator", "identity")


def path(name):
    return resources.files(__package__) / "data" / f"{name}.json"


def load(name, mode=RATIONAL):
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; expected one of {NAMES}")
    m, rs, cs = parse_matrix_text(path(name).read_text(), mode, name)
    return BlockMatrix(m, rs, cs)


def example1_h(mode=RATIONAL):
    return Matrix([["1/10", "1/5", "-1/2"], ["-1/10", "-1/5", "1/2"], ["-1/5", "-2/5", "1"]], mode)


def example1_j(mode=RATIONAL):
    return Matrix([[1, -1, 0], [2, -2, 0], [0, 0, 0]], mode)


def example1_claimed_h_pinv(mode=RATIONAL):
    """The value printed for ``pinv(H)`` in the worked example (rank 2, while ``H`` has rank 1)."""
    return Matrix([[1, -1, 0], [2, -2, 0], [-1, 1, 1]], mode)


def example2_pinv(mode=RATIONAL):
    return Matrix([
        [0, 0, 0, "-1/2"],
        [0, 0, 0, "1/2"],
        ["1/15", "2/15", "2/3", 1],
        ["-1/15", "-2/15", "1/3", 0],
    ], mode)


__all__ = ["FLOAT", "RATIONAL", "NAMES", "load", "path", "example1_h", "example1_j",
           "example1_claimed_h_pinv", "example2_pinv"]
