import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pseudoschur import (
    BlockMatrix,
    HypothesisError,
    Matrix,
    agree,
    block_pinv,
    block_pinv_mixed,
    block_pinv_via_F,
    block_pinv_via_G,
    fixtures,
    pinv,
    pppt_pinv_vs_cpppt,
    quotient_identities,
)
from pseudoschur.blockinv import block_diagonal, ppt_diagonals, via_F_proof_products
from pseudoschur.harness import GenSpec, gen_block

from conftest import blocks, rat


def _rank_one_pinv(u, v):
    """pinv(u v^T) = v u^T / (|u|^2 |v|^2), an oracle independent of the SVD path."""
    u = np.array(u, dtype=object).reshape(-1, 1)
    v = np.array(v, dtype=object).reshape(-1, 1)
    denom = Fraction(int((u.T @ u)[0, 0])) * (v.T @ v)[0, 0]
    return rat((v @ u.T / denom).tolist())


class TestViaF:
    def test_example2(self, example2):
        r = block_pinv_via_F(example2)
        assert r.sound and r.formula == "via-F"
        assert r.value == fixtures.example2_pinv()
        assert r.certificate.worst == 0.0

    @pytest.mark.parametrize("split", [1, 2, 3])
    def test_identity(self, split):
        i4 = Matrix.identity(4, "rational")
        r = block_pinv_via_F(BlockMatrix(i4, split, split))
        assert r.sound and r.value == i4

    @pytest.mark.parametrize("split", [(2, 1), (1, 3)])
    def test_identity_off_diagonal_split_is_outside_hypotheses(self, split):
        # A is not square, so B or C^T leaves the range of A
        r = block_pinv_via_F(BlockMatrix(Matrix.identity(4, "rational"), *split))
        assert not r.sound

    def test_nonsingular_matches_inverse(self):
        rng = np.random.default_rng(3)
        for t in range(30):
            mb = gen_block(GenSpec((3, 3, 2, 2), "nonsingular", "float", t))
            r = block_pinv_via_F(mb)
            assert r.sound
            np.testing.assert_allclose(r.value.array, np.linalg.inv(mb.whole.array), atol=1e-9)

    def test_proof_products(self, example2):
        r = block_pinv_via_F(example2)
        xm, exm, mx, emx = via_F_proof_products(example2, r.value)
        assert xm == exm and mx == emx

    def test_unsound_flagged_and_strict(self, example1):
        mb = blocks([[1, 0], [0, 0]], [[0], [1]], [[1, 0]], [[0]])
        r = block_pinv_via_F(mb)
        assert not r.sound and "incl_B_A" in r.failed
        with pytest.raises(HypothesisError) as err:
            block_pinv_via_F(mb, strict=True)
        assert err.value.result is not None
        assert set(err.value.failed) == set(r.failed)

    def test_dispatch(self, example2):
        assert block_pinv(example2, "f").value == block_pinv(example2, "via-F").value
        with pytest.raises(ValueError):
            block_pinv(example2, "h")


class TestViaG:
    def test_zero_a_side(self):
        d = rat([[2, 1], [1, 1]])
        z = Matrix.zeros(2, 2, "rational")
        mb = BlockMatrix.from_blocks(z, z, z, d)
        r = block_pinv_via_G(mb)
        assert r.sound
        assert r.value == block_diagonal(z, rat([[1, -1], [-1, 2]]))

    def test_nonsingular_matches_inverse(self):
        for t in range(30):
            mb = gen_block(GenSpec((2, 2, 3, 3), "nonsingular", "float", t))
            r = block_pinv_via_G(mb)
            assert r.sound
            np.testing.assert_allclose(r.value.array, np.linalg.inv(mb.whole.array), atol=1e-9)

    def test_block_diagonal_singular(self):
        a, d = rat([[1, 2], [2, 4]]), rat([[1, 1, 1], [2, 2, 2]])
        z12, z21 = Matrix.zeros(2, 3, "rational"), Matrix.zeros(2, 2, "rational")
        mb = BlockMatrix.from_blocks(a, z12, z21, d)
        r = block_pinv_via_G(mb)
        assert r.sound and r.value == block_diagonal(pinv(a), pinv(d))

    @pytest.mark.parametrize("rect", [False, True])
    def test_d_side_instances(self, rect):
        for t in range(20):
            dims = (2, 3, 3, 2) if rect else (3, 3, 2, 3)
            mb = gen_block(GenSpec(dims, "d_side", "rational", t, rectangular_f=rect))
            r = block_pinv_via_G(mb)
            assert r.sound and r.certificate.worst == 0.0
            assert r.value == pinv(mb.whole)


class TestMixed:
    def test_block_diagonal_agrees_with_others(self):
        a, d = rat([[1, 2], [2, 4]]), rat([[0, 3], [0, 0]])
        mb = blocks(a.tolist(), [[0, 0], [0, 0]], [[0, 0], [0, 0]], d.tolist())
        expected = block_diagonal(pinv(a), pinv(d))
        for fn in (block_pinv_mixed, block_pinv_via_F, block_pinv_via_G):
            r = fn(mb)
            assert r.sound and r.value == expected

    def test_nonsingular_matches_inverse(self):
        for t in range(30):
            mb = gen_block(GenSpec((3, 3, 3, 3), "nonsingular", "float", t))
            np.testing.assert_allclose(block_pinv_mixed(mb).value.array,
                                       np.linalg.inv(mb.whole.array), atol=1e-9)

    @given(seed=st.integers(0, 2**32 - 1), strategy=st.sampled_from(["nonsingular", "block_diagonal"]))
    def test_three_formulas_agree(self, seed, strategy):
        rng = np.random.default_rng(seed)
        m, s = (int(v) for v in rng.integers(1, 4, size=2))
        mb = gen_block(GenSpec((m, m, s, s), strategy, "rational", seed))
        f, g, mixed = block_pinv_via_F(mb), block_pinv_via_G(mb), block_pinv_mixed(mb)
        assert f.sound and g.sound and mixed.sound
        assert f.value == g.value == mixed.value


class TestQuotient:
    def test_block_diagonal_zero(self):
        mb = blocks([[1, 2], [2, 4]], [[0], [0]], [[0, 0]], [[0]])
        q = quotient_identities(mb)
        assert q.g_identity_residual == 0.0 and q.f_identity_residual == 0.0

    def test_nonsingular_float(self):
        for t in range(20):
            mb = gen_block(GenSpec((3, 3, 2, 2), "nonsingular", "float", t))
            assert quotient_identities(mb).worst <= 1e-9 * (1 + pinv(mb.whole).frobenius())

    def test_rational_exact(self):
        for t in range(10):
            mb = gen_block(GenSpec((2, 2, 2, 2), "nonsingular", "rational", t))
            assert quotient_identities(mb).worst == 0.0

    def test_warns_on_violation(self, example1):
        with pytest.warns(UserWarning, match="incl_C_D"):
            q = quotient_identities(example1)
        assert q.hypotheses.failed() == ["incl_C_D", "incl_Bt_Dt"]


class TestPptPinv:
    def test_example1_negative(self, example1):
        cmp = pppt_pinv_vs_cpppt(example1)
        assert not cmp.equal and not cmp.sound
        assert cmp.j == fixtures.example1_j()
        # H = (1, -1, -2)^T (1, 2, -5) / 10 has rank one
        assert cmp.h_pinv == _rank_one_pinv([1, -1, -2], [Fraction(1, 10), Fraction(2, 10), Fraction(-5, 10)])

    def test_example1_printed_h_pinv_is_not_a_one_inverse(self, example1):
        h = pppt_pinv_vs_cpppt(example1).h
        claimed = fixtures.example1_claimed_h_pinv()
        assert h @ claimed @ h != h

    def test_block_diagonal(self):
        a, d = rat([[1, 2], [2, 4]]), rat([[3]])
        mb = blocks(a.tolist(), [[0], [0]], [[0, 0]], d.tolist())
        cmp = pppt_pinv_vs_cpppt(mb)
        assert cmp.equal and cmp.sound
        assert cmp.h_pinv == block_diagonal(a, pinv(d))

    @pytest.mark.parametrize("mode", ["float", "rational"])
    def test_random_four_inclusion(self, mode):
        rng = np.random.default_rng(21)
        for t in range(40):
            dims = tuple(int(v) for v in rng.integers(1, 4, size=4))
            mb = gen_block(GenSpec(dims, "ppt", mode, t))
            cmp = pppt_pinv_vs_cpppt(mb)
            assert cmp.sound and cmp.equal
            jh, hj = ppt_diagonals(mb)
            assert agree(cmp.jh, jh) and agree(cmp.hj, hj)
            assert agree(cmp.j @ cmp.h @ cmp.j, cmp.j)
            assert agree(cmp.h @ cmp.j @ cmp.h, cmp.h)


def test_formulas_certify_whenever_hypotheses_hold():
    rng = np.random.default_rng(8)
    for t in range(40):
        dims = tuple(int(v) for v in rng.integers(1, 4, size=4))
        mb = gen_block(GenSpec(dims, "free", "float", t))
        for fn in (block_pinv_via_F, block_pinv_via_G, block_pinv_mixed):
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                r = fn(mb)
            if r.sound:
                assert r.certificate.ok
