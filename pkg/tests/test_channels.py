import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subchan.channels import (
    KrausChannel,
    MAX_SUPEROPERATOR_DIM,
    adjoint_apply,
    apply_channel,
    superoperator_of,
    tp_defect_on_block,
    unvec,
    vec,
    verify_channel,
)
from subchan.errors import DimensionMismatchError, ResourceLimitError
from subchan.families import amplitude_damping, depolarizing, identity_channel, phase_damping
from subchan.fock import (
    basis_operator,
    fock_state,
    hermiticity_defect,
    operator_norm,
    outer,
    random_density_matrix,
    random_hermitian,
)


class TestConstruction:
    def test_requires_exactly_one_source(self):
        with pytest.raises(ValueError):
            KrausChannel()
        with pytest.raises(ValueError):
            KrausChannel(np.eye(2)[np.newaxis], diagonals=np.ones((1, 2)))

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            KrausChannel(np.ones((1, 2, 3)))

    def test_rejects_unknown_family(self):
        with pytest.raises(ValueError):
            KrausChannel(np.eye(2)[np.newaxis], family="nonsense")

    def test_single_matrix_promoted(self):
        ch = KrausChannel(np.eye(3))
        assert ch.kraus_truncation == 1
        assert ch.dim == 3

    def test_diagonal_storage_matches_dense(self):
        pd = phase_damping(0.5, 6)
        dense = KrausChannel(pd.kraus_ops)  # same operators, stack-stored
        rng = np.random.default_rng(0)
        x = random_hermitian(6, rng)
        assert np.max(np.abs(apply_channel(pd, x) - apply_channel(dense, x))) < 1e-13
        assert dense.diagonals is not None  # diagonality detected from the stack

    def test_tp_defect_stored(self):
        ad = amplitude_damping(0.5, 16)
        assert ad.tp_defect <= 1e-12
        lossy = KrausChannel(0.5 * np.eye(2)[np.newaxis])
        assert lossy.tp_defect == pytest.approx(0.75, abs=1e-14)

    def test_kraus_ops_readonly(self):
        ch = amplitude_damping(0.5, 4)
        with pytest.raises(ValueError):
            ch.kraus_ops[0, 0, 0] = 5.0


class TestApply:
    def test_identity_channel(self):
        ch = identity_channel(5)
        rng = np.random.default_rng(1)
        x = random_hermitian(5, rng)
        assert np.max(np.abs(apply_channel(ch, x) - x)) < 1e-15

    def test_phase_damping_coherence(self):
        # eta^((k-s)^2) scaling of |1><3|: 0.5^4.
        ch = phase_damping(0.5, 8)
        out = apply_channel(ch, basis_operator(1, 3, 8))
        expect = 0.5**4 * basis_operator(1, 3, 8)
        assert np.max(np.abs(out - expect)) < 1e-10

    def test_amplitude_damping_population(self):
        ch = amplitude_damping(0.25, 8)
        out = apply_channel(ch, basis_operator(1, 1, 8))
        expect = 0.25 * basis_operator(1, 1, 8) + 0.75 * basis_operator(0, 0, 8)
        assert np.max(np.abs(out - expect)) < 1e-14

    def test_hermiticity_preserved(self):
        rng = np.random.default_rng(2)
        for ch in (amplitude_damping(0.3, 8), phase_damping(0.7, 8), depolarizing(0.5, 8)):
            out = apply_channel(ch, random_hermitian(8, rng))
            assert hermiticity_defect(out) < 1e-12

    def test_positivity_on_samples(self):
        rng = np.random.default_rng(3)
        for ch in (amplitude_damping(0.6, 6), phase_damping(0.4, 6)):
            for _ in range(10):
                out = apply_channel(ch, random_density_matrix(6, rng))
                assert np.linalg.eigvalsh(out).min() >= -1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            apply_channel(amplitude_damping(0.5, 4), np.eye(5))

    @settings(max_examples=25, deadline=None)
    @given(
        st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
        st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
        st.integers(min_value=0, max_value=10 ** 6),
    )
    def test_linearity(self, a, b, seed):
        rng = np.random.default_rng(seed)
        ch = amplitude_damping(0.35, 5)
        x, y = random_hermitian(5, rng), random_hermitian(5, rng)
        lhs = apply_channel(ch, a * x + b * y)
        rhs = a * apply_channel(ch, x) + b * apply_channel(ch, y)
        scale = max(1.0, abs(a), abs(b))
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale


class TestAdjoint:
    def test_identity(self):
        ch = identity_channel(4)
        rng = np.random.default_rng(4)
        x = random_hermitian(4, rng)
        assert np.max(np.abs(adjoint_apply(ch, x) - x)) < 1e-15

    def test_unital_when_trace_preserving(self):
        # Amplitude damping is exactly trace-preserving on the truncation.
        ch = amplitude_damping(0.37, 12)
        out = adjoint_apply(ch, np.eye(12, dtype=complex))
        assert np.max(np.abs(out - np.eye(12))) < 1e-12

    def test_amplitude_damping_vacuum_pullback(self):
        # Phi*(|0><0|) = sum_k (1-eta)^k |k><k| on the truncation.
        eta = 0.25
        ch = amplitude_damping(eta, 8)
        out = adjoint_apply(ch, basis_operator(0, 0, 8))
        expect = np.diag([(1 - eta) ** k for k in range(8)]).astype(complex)
        assert np.max(np.abs(out - expect)) < 1e-13

    def test_duality_hundred_pairs(self):
        rng = np.random.default_rng(5)
        channels = [
            amplitude_damping(0.45, 6),
            phase_damping(0.6, 6),
            depolarizing(0.2, 6),
        ]
        pairs_per_channel = (34, 33, 33)  # 100 total
        for ch, n in zip(channels, pairs_per_channel):
            for _ in range(n):
                x1, x2 = random_hermitian(6, rng), random_hermitian(6, rng)
                lhs = np.trace(x1 @ adjoint_apply(ch, x2))
                rhs = np.trace(apply_channel(ch, x1) @ x2)
                bound = 1e-9 * operator_norm(x1) * operator_norm(x2)
                assert abs(lhs - rhs) <= bound


class TestVerify:
    def test_amplitude_damping_full_block(self):
        report = verify_channel(amplitude_damping(0.5, 16), block=16)
        assert report.tp_defect <= 1e-12
        assert report.tp_ok and report.hermiticity_ok and report.positivity_ok

    def test_phase_damping_tail_bound_block(self):
        report = verify_channel(phase_damping(0.5, 8), block=8)
        assert report.tp_defect <= 1e-10

    def test_depolarizing(self):
        report = verify_channel(depolarizing(0.3, 4), block=4)
        assert report.tp_defect <= 1e-12

    def test_defects_reported_not_thrown(self):
        lossy = KrausChannel(0.5 * np.eye(3)[np.newaxis])
        report = verify_channel(lossy)
        assert not report.tp_ok
        assert report.tp_defect == pytest.approx(0.75, abs=1e-14)

    def test_seed_recorded(self):
        report = verify_channel(amplitude_damping(0.5, 4), seed=99)
        assert report.seed == 99
        assert report.samples == 20

    def test_block_bounds(self):
        ch = amplitude_damping(0.5, 4)
        with pytest.raises(ValueError):
            verify_channel(ch, block=0)
        with pytest.raises(ValueError):
            tp_defect_on_block(ch, 5)

    def test_partial_block_of_truncated_family(self):
        # Only the top level of the truncated amplitude-damping sum is exact;
        # the defect on a sub-block is still tiny.
        ch = amplitude_damping(0.8, 12)
        assert tp_defect_on_block(ch, 6) <= 1e-12


class TestSuperoperator:
    def test_identity(self):
        sup = superoperator_of(identity_channel(4))
        assert np.max(np.abs(sup.matrix - np.eye(16))) < 1e-15

    def test_phase_damping_diagonal(self):
        eta = 0.4
        sup = superoperator_of(phase_damping(eta, 4))
        off = sup.matrix - np.diag(np.diag(sup.matrix))
        assert np.max(np.abs(off)) == 0.0
        for k in range(4):
            for s in range(4):
                entry = sup.matrix[s * 4 + k, s * 4 + k]  # vec index (col s, row k)
                assert entry == pytest.approx(eta ** ((k - s) ** 2), abs=1e-10)

    def test_amplitude_damping_action(self):
        ch = amplitude_damping(0.5, 3)
        sup = superoperator_of(ch)
        out = unvec(sup.matrix @ vec(basis_operator(1, 1, 3)), 3)
        expect = 0.5 * basis_operator(1, 1, 3) + 0.5 * basis_operator(0, 0, 3)
        assert np.max(np.abs(out - expect)) < 1e-14

    def test_matches_apply_on_random_states(self):
        rng = np.random.default_rng(6)
        for ch in (amplitude_damping(0.3, 5), phase_damping(0.8, 5), depolarizing(0.6, 5)):
            sup = superoperator_of(ch)
            for _ in range(10):
                rho = random_density_matrix(5, rng)
                direct = apply_channel(ch, rho)
                via_matrix = sup.apply(rho)
                assert np.max(np.abs(direct - via_matrix)) < 1e-10

    def test_dim_guard(self):
        with pytest.raises(ResourceLimitError):
            superoperator_of(amplitude_damping(0.5, MAX_SUPEROPERATOR_DIM + 1))

    def test_vec_roundtrip(self):
        rng = np.random.default_rng(7)
        x = random_hermitian(4, rng)
        assert np.array_equal(unvec(vec(x), 4), x)
        # Column stacking: vec picks up columns in order.
        m = np.array([[1, 2], [3, 4]])
        assert np.array_equal(vec(m), [1, 3, 2, 4])
