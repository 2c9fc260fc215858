import numpy as np
import pytest

from jcrabi import TruncationConfig, commutator_deviation, embed
from jcrabi.fock import ladder_ops, quadrature_ops, qubit_ops


def test_truncation_config_validation():
    with pytest.raises(ValueError):
        TruncationConfig(0)
    cfg = TruncationConfig(5)
    assert cfg.dim_field == 6
    assert cfg.dim_joint == 12


class TestLadderOps:
    def setup_method(self):
        self.cfg = TruncationConfig(10)
        self.a, self.a_dag, self.n_hat = ladder_ops(self.cfg)

    def test_sqrt2_matrix_element(self):
        assert self.a[1, 2] == pytest.approx(np.sqrt(2.0))

    def test_number_operator(self):
        assert np.allclose(np.diag(self.n_hat), np.arange(11))
        assert np.max(np.abs(self.a_dag @ self.a - self.n_hat)) <= 1e-14

    def test_adjoint(self):
        assert np.array_equal(self.a_dag, self.a.conj().T)

    def test_truncation_defect_in_a_adag(self):
        comm = self.a @ self.a_dag - self.a_dag @ self.a
        expected = np.eye(11, dtype=complex)
        expected[10, 10] = -10.0
        assert np.max(np.abs(comm - expected)) <= 1e-14

    def test_bit_for_bit_reproducible(self):
        again = ladder_ops(self.cfg)
        for op, ref in zip(again, (self.a, self.a_dag, self.n_hat)):
            assert np.array_equal(op, ref)


class TestQuadratureOps:
    def setup_method(self):
        self.cfg = TruncationConfig(12)
        self.x, self.p = quadrature_ops(self.cfg)

    def test_hermitian(self):
        assert np.max(np.abs(self.x - self.x.conj().T)) <= 1e-14
        assert np.max(np.abs(self.p - self.p.conj().T)) <= 1e-14
        assert np.max(np.abs(self.x.imag)) == 0.0
        assert np.max(np.abs(self.p.real)) == 0.0

    def test_canonical_commutator_away_from_edge(self):
        n = self.cfg.n_max
        comm = self.x @ self.p - self.p @ self.x
        dev = comm - 1j * np.eye(n + 1)
        assert np.max(np.abs(dev[: n - 1, : n - 1])) <= 1e-12

    def test_edge_defect_confined_to_last_row_col(self):
        n = self.cfg.n_max
        dev = self.x @ self.p - self.p @ self.x - 1j * np.eye(n + 1)
        dev[n, :] = 0.0
        dev[:, n] = 0.0
        assert np.max(np.abs(dev)) <= 1e-12

    def test_vacuum_quadrature_variance(self):
        # <0|x^2|0> = 1/2 by direct matrix product
        x2 = self.x @ self.x
        assert x2[0, 0].real == pytest.approx(0.5, abs=1e-14)


class TestQubitOps:
    def setup_method(self):
        self.sx, self.sy, self.sz, self.sp, self.sm = qubit_ops()

    def test_involution(self):
        assert np.array_equal(self.sx @ self.sx, np.eye(2, dtype=complex))

    def test_ladder_sum(self):
        assert np.array_equal(self.sp + self.sm, self.sx)

    def test_sz_convention(self):
        # excited state |2> is the first basis vector
        assert np.allclose(np.diag(self.sz), [1.0, -1.0])

    def test_pauli_algebra(self):
        assert commutator_deviation(self.sx, self.sy, 2j * self.sz) <= 1e-14


class TestEmbed:
    def setup_method(self):
        self.cfg = TruncationConfig(4)
        self.a, self.a_dag, self.n_hat = ladder_ops(self.cfg)
        self.sx, self.sy, self.sz, self.sp, self.sm = qubit_ops()

    def test_qubit_outer_block_structure(self):
        out = embed(None, self.sz, self.cfg)
        expected = np.concatenate([np.ones(5), -np.ones(5)])
        assert np.allclose(np.diag(out), expected)

    def test_field_repeats_per_block(self):
        out = embed(self.n_hat, None, self.cfg)
        assert np.allclose(np.diag(out), np.tile(np.arange(5), 2))

    def test_adjoint_consistency(self):
        lhs = embed(self.a, self.sp, self.cfg).conj().T
        rhs = embed(self.a_dag, self.sm, self.cfg)
        assert np.array_equal(lhs, rhs)

    def test_dimension_validation(self):
        with pytest.raises(ValueError):
            embed(np.eye(3), None, self.cfg)
        with pytest.raises(ValueError):
            embed(None, np.eye(3), self.cfg)
