"""Stabilizer groups, subspace partitions, operator classification, and
exact recoverability.

The partition tests verify eigenvector equations directly with dense
Pauli action, so the sector bookkeeping cannot silently drift.
"""

import numpy as np
import pytest

from qsimlab.core import KrausChannel
from qsimlab.qec import (
    PauliString,
    StabilizerGroup,
    Syndrome,
    apply_pauli,
    check_recoverability,
    classify_operator,
    partition_by_stabilizers,
    steane_zero,
)

STEANE_WORDS = ("IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ")


def bitflip_projector():
    p = np.zeros((8, 8), dtype=complex)
    p[0, 0] = p[7, 7] = 1.0
    return p


class TestGroupConstruction:
    def test_accepts_strings_and_paulis(self):
        g = StabilizerGroup(["ZZI", PauliString("IZZ")])
        assert len(g) == 2
        assert g.n == 3

    def test_noncommuting_rejected(self):
        with pytest.raises(ValueError, match="commute"):
            StabilizerGroup(["XII", "ZII"])

    def test_dependent_rejected(self):
        with pytest.raises(ValueError, match="dependent"):
            StabilizerGroup(["ZZI", "IZZ", "ZIZ"])

    def test_imaginary_phase_rejected(self):
        with pytest.raises(ValueError, match="phase"):
            StabilizerGroup([PauliString("ZZ", phase=1j)])

    def test_negative_phase_allowed(self):
        g = StabilizerGroup([PauliString("ZZ", phase=-1)])
        assert g.generators[0].phase == -1

    def test_mixed_lengths_rejected(self):
        with pytest.raises(ValueError):
            StabilizerGroup(["ZZ", "ZZZ"])

    def test_empty_group_needs_size(self):
        with pytest.raises(ValueError):
            StabilizerGroup([])
        g = StabilizerGroup([], n_qubits=2)
        assert g.n == 2

    def test_elements_and_contains(self):
        g = StabilizerGroup(["ZZI", "IZZ"])
        words = sorted(e.word for e in g.elements())
        assert words == ["III", "IZZ", "ZIZ", "ZZI"]
        assert g.contains(PauliString("ZIZ"))
        assert not g.contains(PauliString("ZIZ", phase=-1))
        assert not g.contains(PauliString("ZZZ"))


class TestPartition:
    def test_three_qubit_example(self):
        parts = partition_by_stabilizers(StabilizerGroup(["ZZI", "IZZ"]))
        assert set(parts) == {(0, 0), (0, 1), (1, 0), (1, 1)}
        assert all(b.shape == (8, 2) for b in parts.values())
        code = parts[(0, 0)]
        # code sector spans |000> and |111>
        coords = np.abs(code) > 1e-9
        assert set(np.nonzero(coords.any(axis=1))[0]) == {0, 7}

    def test_sector_vectors_are_joint_eigenvectors(self):
        gens = [PauliString("ZZI"), PauliString("IZZ")]
        parts = partition_by_stabilizers(StabilizerGroup(gens))
        for bits, basis in parts.items():
            for g, bit in zip(gens, bits):
                sign = 1 - 2 * bit
                for col in basis.T:
                    np.testing.assert_allclose(
                        apply_pauli(col, g), sign * col, atol=1e-10
                    )

    def test_disjoint_cover(self):
        parts = partition_by_stabilizers(StabilizerGroup(["XXX", "ZZI"]))
        total = sum(b.shape[1] for b in parts.values())
        assert total == 8
        keys = list(parts)
        for i, ki in enumerate(keys):
            for kj in keys[i + 1:]:
                overlap = parts[ki].conj().T @ parts[kj]
                np.testing.assert_allclose(overlap, 0, atol=1e-10)

    def test_empty_group_gives_whole_space(self):
        parts = partition_by_stabilizers(StabilizerGroup([], n_qubits=2))
        assert set(parts) == {()}
        assert parts[()].shape == (4, 4)

    def test_steane_generators_give_64_planes(self):
        parts = partition_by_stabilizers(StabilizerGroup(STEANE_WORDS))
        assert len(parts) == 64
        assert all(b.shape[1] == 2 for b in parts.values())
        # the all-plus sector contains logical zero
        code = parts[(0,) * 6]
        zero = steane_zero()
        proj = code @ (code.conj().T @ zero)
        np.testing.assert_allclose(proj, zero, atol=1e-10)

    def test_size_guard(self):
        big = StabilizerGroup([PauliString("Z" * 13)])
        with pytest.raises(ValueError, match="12"):
            partition_by_stabilizers(big)

    def test_negative_generator_moves_the_code_sector(self):
        parts = partition_by_stabilizers(
            StabilizerGroup([PauliString("ZZ", phase=-1)])
        )
        code = parts[(0,)]
        coords = np.abs(code) > 1e-9
        # -ZZ stabilizes the odd-parity plane
        assert set(np.nonzero(coords.any(axis=1))[0]) == {1, 2}


class TestClassification:
    def setup_method(self):
        self.group = StabilizerGroup(["ZZI", "IZZ"])

    def test_logical_x(self):
        res = classify_operator(PauliString("XXX"), self.group)
        assert res.kind == "normalizer-logical"
        assert res.syndrome is None

    def test_product_of_generators_is_stabilizer(self):
        res = classify_operator(PauliString("ZIZ"), self.group)
        assert res.kind == "stabilizer"

    def test_single_x_errors_with_signs(self):
        res = classify_operator(PauliString("XII"), self.group)
        assert res.kind == "error"
        assert res.syndrome == Syndrome((1, 0))
        assert res.syndrome.signs == (-1, 1)
        assert classify_operator(PauliString("IXI"), self.group).syndrome == (1, 1)
        assert classify_operator(PauliString("IIX"), self.group).syndrome == (0, 1)

    def test_logical_z(self):
        res = classify_operator(PauliString("ZZZ"), self.group)
        assert res.kind == "normalizer-logical"

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            classify_operator(PauliString("XX"), self.group)

    def test_str_forms(self):
        assert str(classify_operator(PauliString("XII"), self.group)) == "error(1, 0)"
        assert str(classify_operator(PauliString("ZIZ"), self.group)) == "stabilizer"


class TestRecoverability:
    def test_identity_channel(self):
        p = bitflip_projector()
        ok, mu = check_recoverability([np.eye(8)], p)
        assert ok
        np.testing.assert_allclose(mu, [[1.0]], atol=1e-12)

    def test_single_x_set_recoverable(self):
        p = bitflip_projector()
        ops = [PauliString(w).matrix() for w in ("III", "XII", "IXI", "IIX")]
        ok, mu = check_recoverability(ops, p)
        assert ok
        np.testing.assert_allclose(mu, np.eye(4), atol=1e-10)
        np.testing.assert_allclose(mu, mu.conj().T, atol=1e-12)

    def test_adding_logical_xxx_breaks_it(self):
        p = bitflip_projector()
        ops = [PauliString(w).matrix() for w in ("III", "XII", "IXI", "IIX", "XXX")]
        ok, _ = check_recoverability(ops, p)
        assert not ok

    def test_without_identity_xxx_alone_would_pass(self):
        # the counterexample above needs the identity in the set: XXX maps
        # the code space to itself, so every cross term with a weight-one
        # X lands in an orthogonal sector and vanishes
        p = bitflip_projector()
        ops = [PauliString(w).matrix() for w in ("XII", "IXI", "IIX", "XXX")]
        ok, _ = check_recoverability(ops, p)
        assert ok

    def test_kraus_channel_input(self):
        prob = 0.3
        ops = [np.sqrt(1 - prob) * PauliString("III").matrix()]
        ops += [np.sqrt(prob / 3) * PauliString(w).matrix()
                for w in ("XII", "IXI", "IIX")]
        ch = KrausChannel(ops)
        ok, mu = check_recoverability(ch, bitflip_projector())
        assert ok
        np.testing.assert_allclose(
            np.diag(mu).real, [1 - prob, prob / 3, prob / 3, prob / 3], atol=1e-12
        )
        # complete channels have unit total weight
        assert np.trace(mu).real == pytest.approx(1.0, abs=1e-12)

    def test_z_errors_not_correctable_by_bitflip_code(self):
        p = bitflip_projector()
        ops = [PauliString(w).matrix() for w in ("III", "ZII")]
        ok, _ = check_recoverability(ops, p)
        assert not ok

    def test_non_projector_rejected(self):
        with pytest.raises(ValueError, match="projector"):
            check_recoverability([np.eye(2)], np.array([[1.0, 1.0], [0.0, 0.0]]))

    def test_empty_error_set_rejected(self):
        with pytest.raises(ValueError):
            check_recoverability([], bitflip_projector())

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            check_recoverability([np.eye(4)], bitflip_projector())
