"""Surface-cycle projections, repeated-cycle tables, and loop equivalence.

Branch states are rebuilt from projector algebra (1 +- S)/2 acting on the
input, so the circuit implementation is checked against an independent
construction.
"""

import numpy as np
import pytest

from qsimlab.core import RandomSource, fidelity, random_state, zero_state
from qsimlab.qec import (
    ARRAY_SITES,
    ARRAY_STABILIZERS,
    InjectedError,
    PauliString,
    SURFACE5_SITES,
    SURFACE5_STABILIZERS,
    apply_pauli,
    classify_operator,
    StabilizerGroup,
    loop_equivalence,
    pauli_on_sites,
    surface_cycle,
    surface_error_table,
)

S_D = PauliString("XIXXI")
S_F = PauliString("IXXIX")


def four_qubit_input(seed=31):
    return random_state(2, RandomSource(seed).generator)


def expected_x_branch(j, k):
    """(1 + (-1)^j S_d)(1 + (-1)^k S_f)|00000>/2."""
    v = zero_state(5)
    v = v + (1 - 2 * k) * apply_pauli(v, S_F)
    v = v + (1 - 2 * j) * apply_pauli(v, S_D)
    return v / 2.0


class TestFourQubit:
    def test_outcome_probabilities(self):
        amp = four_qubit_input()
        a, b, c, d = amp
        expected = {
            (0, 0): abs(a + d) ** 2 / 2,
            (1, 0): abs(a - d) ** 2 / 2,
            (0, 1): abs(b + c) ** 2 / 2,
            (1, 1): abs(b - c) ** 2 / 2,
        }
        for bits, want in expected.items():
            res = surface_cycle(4, amp, force=bits)
            assert res.probability == pytest.approx(want, abs=1e-10)
            assert res.syndrome == bits

    def test_collapsed_states_are_bell_like(self):
        amp = four_qubit_input()
        a, b, c, d = amp
        targets = {
            (0, 0): np.array([a + d, 0, 0, a + d]),
            (1, 0): np.array([a - d, 0, 0, -(a - d)]),
            (0, 1): np.array([0, b + c, b + c, 0]),
            (1, 1): np.array([0, b - c, -(b - c), 0]),
        }
        for bits, raw in targets.items():
            res = surface_cycle(4, amp, force=bits)
            assert fidelity(res.state, raw / np.linalg.norm(raw)) > 1 - 1e-10

    def test_sampled_outcomes_match_born_rule(self):
        amp = four_qubit_input(7)
        a, b, c, d = amp
        p00 = abs(a + d) ** 2 / 2
        gen = RandomSource(8).generator
        n = 4000
        hits = sum(
            surface_cycle(4, amp, rng=gen).syndrome == (0, 0) for _ in range(n)
        )
        sigma = np.sqrt(p00 * (1 - p00) / n)
        assert abs(hits / n - p00) < 5 * sigma

    def test_dimension_check(self):
        with pytest.raises(ValueError):
            surface_cycle(4, zero_state(3))
        with pytest.raises(ValueError):
            surface_cycle("nonsense", zero_state(2))


class TestNineQubit:
    def test_z_checks_deterministic_from_all_zero(self):
        res = surface_cycle(9, zero_state(5), force=(0, 0, 0, 0))
        assert res.probability == pytest.approx(0.25, abs=1e-12)

    def test_forced_branch_states(self):
        for j in (0, 1):
            for k in (0, 1):
                res = surface_cycle(9, zero_state(5), force=(0, j, k, 0))
                want = expected_x_branch(j, k)
                assert fidelity(res.state, want) > 1 - 1e-12
                assert res.probability == pytest.approx(0.25, abs=1e-12)

    def test_four_term_superposition(self):
        res = surface_cycle(9, zero_state(5), force=(0, 1, 1, 0))
        want = np.zeros(32, dtype=complex)
        want[0b00000] = 0.5
        want[0b10110] = -0.5
        want[0b01101] = -0.5
        want[0b11011] = 0.5
        assert fidelity(res.state, want) > 1 - 1e-12

    def test_impossible_force_rejected(self):
        with pytest.raises(ValueError, match="zero probability"):
            surface_cycle(9, zero_state(5), force=(1, 0, 0, 0))

    def test_nondeterministic_without_rng_rejected(self):
        with pytest.raises(ValueError, match="deterministic"):
            surface_cycle(9, zero_state(5))

    def test_idempotence_over_ten_cycles(self):
        res = surface_cycle(9, zero_state(5), force=(0, 1, 1, 0))
        state = res.state
        for _ in range(10):
            again = surface_cycle(9, state)
            assert again.syndrome == (0, 1, 1, 0)
            assert again.probability == pytest.approx(1.0, abs=1e-10)
            assert fidelity(again.state, state) > 1 - 1e-10
            state = again.state

    def test_random_first_cycle_still_stabilizes(self):
        gen = RandomSource(17).generator
        res = surface_cycle(9, random_state(5, gen), rng=gen)
        again = surface_cycle(9, res.state)
        assert again.syndrome == res.syndrome


class TestErrorTables:
    def test_reference_table_is_constant(self):
        rows = surface_error_table(9, n_cycles=8, first=(0, 0, 1, 0))
        assert all(r == (0, 0, 1, 0) for r in rows)

    def test_readout_error_is_transient(self):
        rows = surface_error_table(
            9, InjectedError("readout", 3, ancilla=2), n_cycles=8,
            first=(0, 0, 1, 0),
        )
        assert rows[2] == (0, 0, 0, 0)
        for i in (0, 1, 3, 4, 5, 6, 7):
            assert rows[i] == (0, 0, 1, 0)

    def test_data_z_error_is_persistent(self):
        rows = surface_error_table(
            9, InjectedError("data", 3, pauli=PauliString("IIZII")),
            n_cycles=8, first=(0, 0, 1, 0),
        )
        assert rows[0] == rows[1] == (0, 0, 1, 0)
        for r in rows[2:]:
            assert r == (0, 1, 0, 0)

    def test_data_x_error_flips_z_checks(self):
        rows = surface_error_table(
            9, InjectedError("data", 2, pauli=PauliString("IIXII")),
            n_cycles=4, first=(0, 0, 1, 0),
        )
        assert rows[0] == (0, 0, 1, 0)
        for r in rows[1:]:
            assert r == (1, 0, 1, 1)

    def test_four_qubit_table(self):
        rows = surface_error_table(4, n_cycles=5, first=(1, 0))
        assert all(r == (1, 0) for r in rows)

    def test_validation(self):
        with pytest.raises(ValueError):
            InjectedError("typo", 1)
        with pytest.raises(ValueError):
            InjectedError("readout", 0, ancilla=1)
        with pytest.raises(ValueError):
            InjectedError("readout", 1)
        with pytest.raises(ValueError):
            InjectedError("data", 1)
        with pytest.raises(ValueError, match="cycles"):
            surface_error_table(9, InjectedError("readout", 9, ancilla=0),
                                n_cycles=3, first=(0, 0, 0, 0))
        with pytest.raises(ValueError, match="range"):
            surface_error_table(9, InjectedError("readout", 1, ancilla=7),
                                n_cycles=3, first=(0, 0, 0, 0))
        with pytest.raises(ValueError, match="qubits"):
            surface_error_table(9, InjectedError("data", 1, pauli=PauliString("XX")),
                                n_cycles=3, first=(0, 0, 0, 0))

    def test_data_error_accepts_text(self):
        err = InjectedError("data", 2, pauli="IIZII")
        assert err.pauli == PauliString("IIZII")


class TestLoopEquivalence:
    def test_closed_loop_is_harmless(self):
        assert loop_equivalence("ABE", "CFG", ARRAY_STABILIZERS)

    def test_path_product_equals_stabilizer_product(self):
        prod = pauli_on_sites("Z", "ABE", ARRAY_SITES) * pauli_on_sites(
            "Z", "CFG", ARRAY_SITES
        )
        assert prod == ARRAY_STABILIZERS[0] * ARRAY_STABILIZERS[1]

    def test_identical_paths_are_harmless(self):
        assert loop_equivalence("ABE", "ABE", ARRAY_STABILIZERS)
        assert loop_equivalence("", "", ARRAY_STABILIZERS)

    def test_boundary_crossing_is_harmful(self):
        # X on sites a,c commutes with every check but is not a stabilizer
        assert not loop_equivalence(
            "ac", "", SURFACE5_STABILIZERS, sites=SURFACE5_SITES, letter="X"
        )
        cls = classify_operator(
            pauli_on_sites("X", "ac", SURFACE5_SITES),
            StabilizerGroup(SURFACE5_STABILIZERS),
        )
        assert cls.kind == "normalizer-logical"

    def test_pauli_on_sites_validation(self):
        with pytest.raises(ValueError):
            pauli_on_sites("Q", "AB", ARRAY_SITES)
        with pytest.raises(ValueError, match="site"):
            pauli_on_sites("Z", "Aq", ARRAY_SITES)
