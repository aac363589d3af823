import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import branchsim as bs
from conftest import random_state

R2 = 1 / math.sqrt(2)


def two_site_lattice():
    return bs.chain_lattice([0], [1])


class TestLattice:
    def test_positions_and_kinds(self):
        lat = bs.chain_lattice([0, 5], [1, 2, 3, 4])
        assert lat.indices == (0, 1, 2, 3, 4, 5)
        assert lat.system_sites == (0, 5)
        assert lat.field_sites == (1, 2, 3, 4)
        assert lat.position(0) == 0 and lat.position(5) == 5
        assert lat.kind(5) is bs.SiteKind.SYSTEM

    def test_negative_indices_sort_before_zero(self):
        lat = bs.chain_lattice([0], [-1, 1])
        assert lat.indices == (-1, 0, 1)
        assert lat.position(-1) == 0

    def test_duplicate_indices_rejected(self):
        with pytest.raises(bs.LatticeError):
            bs.chain_lattice([0], [0, 1])

    def test_empty_rejected(self):
        with pytest.raises(bs.LatticeError):
            bs.Lattice(())

    def test_unknown_site_rejected(self):
        with pytest.raises(bs.LatticeError):
            two_site_lattice().position(7)


class TestProductState:
    def test_plus_times_up(self):
        state = bs.product_state(two_site_lattice(), {0: [R2, R2], 1: [1, 0]})
        assert state.n_terms == 2
        assert state.amplitude("00") == pytest.approx(R2)
        assert state.amplitude("10") == pytest.approx(R2)
        assert state.amplitude("01") == 0

    def test_norm_is_one(self):
        state = bs.product_state(two_site_lattice(), {0: [0.6, 0.8j], 1: [0, 1]})
        assert bs.norm(state) == pytest.approx(1.0, abs=1e-12)

    def test_missing_site_rejected(self):
        with pytest.raises(bs.StateError):
            bs.product_state(two_site_lattice(), {0: [1, 0]})

    def test_unnormalised_vector_rejected(self):
        with pytest.raises(bs.StateError):
            bs.product_state(two_site_lattice(), {0: [1, 1], 1: [1, 0]})


class TestEntangledState:
    def test_renormalises(self):
        state = bs.entangled_state(two_site_lattice(), [("01", 1.0), ("10", 1.0)])
        assert bs.norm(state) == pytest.approx(1.0, abs=1e-12)
        assert state.amplitude("01") == pytest.approx(R2)

    def test_duplicate_basis_rejected(self):
        with pytest.raises(bs.StateError):
            bs.entangled_state(two_site_lattice(), [("01", 1.0), ("01", -1.0)])

    def test_zero_norm_rejected(self):
        with pytest.raises(bs.StateError):
            bs.entangled_state(two_site_lattice(), [("01", 0.0)])

    def test_tuple_and_string_basis_agree(self):
        lat = two_site_lattice()
        a = bs.entangled_state(lat, [((0, 1), 1.0)])
        b = bs.entangled_state(lat, [("01", 1.0)])
        assert bs.overlap(a, b) == pytest.approx(1.0)


class TestNormAndInner:
    def test_norm_is_quadratic_in_scale(self):
        # norm is the squared 2-norm, so scaling amplitudes by c scales it by c^2
        state = bs.PureState(two_site_lattice(), {"00": 0.5})
        assert bs.norm(state) == pytest.approx(0.25)

    def test_orthogonal_states(self):
        lat = two_site_lattice()
        a = bs.entangled_state(lat, [("00", 1.0)])
        b = bs.entangled_state(lat, [("11", 1.0)])
        assert bs.inner_product(a, b) == 0

    def test_conjugate_symmetry(self):
        rng = np.random.default_rng(7)
        a, b = random_state(rng), random_state(rng)
        assert bs.inner_product(a, b) == pytest.approx(
            np.conj(bs.inner_product(b, a)), abs=1e-12)

    def test_lattice_mismatch_rejected(self):
        a = bs.entangled_state(two_site_lattice(), [("00", 1.0)])
        b = bs.entangled_state(bs.chain_lattice([0], [1, 2]), [("000", 1.0)])
        with pytest.raises(bs.LatticeError):
            bs.inner_product(a, b)


class TestPruning:
    def test_dust_amplitudes_dropped(self):
        state = bs.PureState(two_site_lattice(), {"00": 1.0, "11": 1e-15})
        assert state.n_terms == 1

    def test_amplitudes_read_only(self):
        state = bs.entangled_state(two_site_lattice(), [("00", 1.0)])
        with pytest.raises(TypeError):
            state.amplitudes[(0, 0)] = 2.0


class TestSerialisation:
    def test_round_trip_scenario_state(self, epr_states):
        state = epr_states[-1]
        back = bs.state_from_document(bs.state_to_document(state))
        assert back.lattice == state.lattice
        assert dict(back.amplitudes) == dict(state.amplitudes)  # bit-exact

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000))
    def test_round_trip_random_states_bit_exact(self, seed):
        state = random_state(np.random.default_rng(seed))
        back = bs.state_from_document(bs.state_to_document(state))
        assert dict(back.amplitudes) == dict(state.amplitudes)

    def test_document_keeps_17_digits(self):
        state = bs.entangled_state(two_site_lattice(), [("01", 1.0), ("10", 1.0)])
        assert "0.70710678118654746" in bs.state_to_document(state)

    def test_malformed_document_rejected(self):
        with pytest.raises(bs.StateError):
            bs.state_from_document('{"lattice": [], "terms": "nope"}')
