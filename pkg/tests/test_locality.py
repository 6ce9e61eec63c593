import numpy as np
import pytest

import disd
from disd.decompose import planted_sequential
from disd.evolve import propagate
from disd.locality import (
    locality_report,
    mi_trajectory,
    signaling_test,
    signaling_test_unitary,
    tau_estimate,
)
from disd.model import build_canonical, initial_state
from disd.qcore import haar_unitary, rdm_from_state, vn_entropy


class TestMiTrajectory:
    def test_zero_at_start(self, spec233, init233):
        psi0 = initial_state(init233, spec233.dims)
        traj = propagate(spec233, psi0, [0.0])
        assert mi_trajectory(traj)[0] <= 1e-12

    def test_decoupled_when_c2_zero(self, dims233, init233):
        spec = build_canonical(dims233, 4, 3.0, 0.0)
        psi0 = initial_state(init233, dims233)
        traj = propagate(spec, psi0, np.linspace(0, 20, 60))
        assert mi_trajectory(traj).max() <= 1e-10

    def test_correlations_appear_at_long_horizon(self, dims233, init233):
        spec = build_canonical(dims233, 1, 1.0, 0.2)
        psi0 = initial_state(init233, dims233)
        traj = propagate(spec, psi0, np.linspace(0, 50, 400))
        assert mi_trajectory(traj).max() > 0.01

    def test_bounded_by_smaller_subsystem(self, spec233, init233):
        psi0 = initial_state(init233, spec233.dims)
        traj = propagate(spec233, psi0, np.linspace(0, 30, 40))
        bound = 2 * min(np.log2(spec233.dims.a), np.log2(spec233.dims.b))
        assert mi_trajectory(traj).max() <= bound + 1e-9


class TestSignaling:
    def test_decoupled_b_to_a(self, dims233, init233):
        spec = build_canonical(dims233, 4, 3.0, 0.0)
        out = signaling_test(spec, init233, np.linspace(0, 10, 20), "b_to_a",
                             n_samples=16, seed=5)
        assert out.max() <= 1e-10

    def test_no_signaling_when_a_uncorrelated(self, dims233, init233):
        # I(A:CB) stays zero without the A-C coupling, so B cannot reach A
        spec = build_canonical(dims233, 4, 3.0, 0.0)
        psi0 = initial_state(init233, dims233)
        times = np.linspace(0, 10, 20)
        traj = propagate(spec, psi0, times)
        d = dims233
        for s in traj.states:
            s_a = vn_entropy(rdm_from_state(s, d.factors, (0,)))
            assert 2 * s_a <= 1e-10  # I(A:CB) = 2 S(A) for a pure global state
        out = signaling_test(spec, init233, times, "b_to_a", n_samples=8, seed=1)
        assert out.max() <= 1e-10

    def test_canonical_signaling_appears(self, dims233, init233):
        spec = build_canonical(dims233, 1, 1.0, 0.2)
        out = signaling_test(spec, init233, np.linspace(0, 50, 60), "b_to_a",
                             n_samples=8, seed=2)
        assert out.max() > 1e-3

    def test_sample_max_nested_in_n_samples(self, spec233, init233):
        times = np.linspace(0, 5, 10)
        small = signaling_test(spec233, init233, times, "b_to_a", n_samples=1, seed=9)
        large = signaling_test(spec233, init233, times, "b_to_a", n_samples=8, seed=9)
        assert np.all(large >= small - 1e-15)

    def test_deterministic_for_fixed_seed(self, spec233, init233):
        times = np.linspace(0, 5, 6)
        a = signaling_test(spec233, init233, times, "a_to_b", n_samples=4, seed=3)
        b = signaling_test(spec233, init233, times, "a_to_b", n_samples=4, seed=3)
        assert np.array_equal(a, b)

    def test_global_phase_invariance(self, spec233, init233):
        import dataclasses
        times = np.linspace(0, 5, 6)
        shifted = dataclasses.replace(init233, alpha=init233.alpha * np.exp(0.3j))
        a = signaling_test(spec233, init233, times, "b_to_a", n_samples=4, seed=3)
        b = signaling_test(spec233, shifted, times, "b_to_a", n_samples=4, seed=3)
        assert np.abs(a - b).max() <= 1e-12

    def test_rejects_bad_direction(self, spec233, init233):
        with pytest.raises(ValueError):
            signaling_test(spec233, init233, [0.0], "c_to_a", n_samples=1)

    def test_rejects_zero_samples(self, spec233, init233):
        with pytest.raises(ValueError):
            signaling_test(spec233, init233, [0.0], "b_to_a", n_samples=0)


class TestSignalingOneShot:
    def test_sequential_unitary_blocks_b_to_a(self, dims222, init222):
        psi0 = initial_state(init222, dims222)
        for seed in range(5):
            u = planted_sequential(dims222, seed)
            out = signaling_test_unitary(u, psi0, dims222, "b_to_a",
                                         n_samples=32, seed=seed)
            assert out <= 1e-10

    def test_sequential_unitary_is_one_directional(self, dims222, init222):
        psi0 = initial_state(init222, dims222)
        forward = [signaling_test_unitary(planted_sequential(dims222, s), psi0,
                                          dims222, "a_to_b", n_samples=32, seed=s)
                   for s in range(5)]
        assert max(forward) > 1e-3

    def test_generic_unitary_signals_both_ways(self, dims222, init222):
        psi0 = initial_state(init222, dims222)
        u = haar_unitary(dims222.total, 77)
        ba = signaling_test_unitary(u, psi0, dims222, "b_to_a", n_samples=16, seed=0)
        ab = signaling_test_unitary(u, psi0, dims222, "a_to_b", n_samples=16, seed=0)
        assert ba > 1e-3 and ab > 1e-3


class TestSamplerSanity:
    def test_local_unitary_preserves_target_spectrum(self, dims233, init233):
        # applying G on B must not change S(rho_B) of the unevolved state
        psi0 = initial_state(init233, dims233)
        base = vn_entropy(rdm_from_state(psi0, dims233.factors, (2,)))
        from disd.locality import _apply_local
        for k in range(8):
            g = haar_unitary(dims233.b, disd.derive_seed(3, "sanity", k))
            mod = _apply_local(psi0, g, dims233, 2)
            assert abs(vn_entropy(rdm_from_state(mod, dims233.factors, (2,))) - base) <= 1e-10


class TestTauEstimate:
    def test_absent_when_never_crossed(self):
        assert tau_estimate([0.0, 1.0, 2.0], [0.0, 0.001, 0.002], 0.01) is None

    def test_linear_interpolation(self):
        assert tau_estimate([0.0, 1.0], [0.0, 0.02], 0.01) == pytest.approx(0.5)

    def test_crossing_at_first_sample(self):
        assert tau_estimate([2.0, 3.0], [0.05, 0.2], 0.01) == 2.0

    def test_monotone_in_c1(self, dims233, init233):
        taus = []
        for c1 in (1.0, 2.0, 4.0):
            spec = build_canonical(dims233, 1, c1, 0.2)
            psi0 = initial_state(init233, dims233)
            times = np.linspace(0, 50 * c1, 600)
            traj = propagate(spec, psi0, times)
            taus.append(tau_estimate(times, mi_trajectory(traj), 0.01))
        assert all(t is not None for t in taus)
        assert taus[0] < taus[1] < taus[2]

    def test_rejects_bad_threshold(self):
        with pytest.raises(ValueError):
            tau_estimate([0.0], [0.0], 0.0)


class TestLocalityReport:
    def test_fields_consistent(self, spec233, init233):
        times = np.linspace(0, 5, 12)
        rep = locality_report(spec233, init233, times, n_samples=4,
                              threshold_bits=0.01, seed=6)
        assert rep.times.shape == rep.mi_ab_bits.shape
        assert rep.signal_b_to_a.shape == rep.signal_a_to_b.shape == rep.times.shape
        assert np.all(rep.mi_ab_bits >= 0)
        assert np.all((rep.signal_b_to_a >= 0) & (rep.signal_b_to_a <= 1))
        assert rep.n_samples == 4
        assert rep.tau_estimate == tau_estimate(times, rep.mi_ab_bits, 0.01)

    def test_matches_standalone_calls(self, spec233, init233):
        times = np.linspace(0, 4, 8)
        rep = locality_report(spec233, init233, times, n_samples=3, seed=11)
        direct = signaling_test(spec233, init233, times, "b_to_a", n_samples=3, seed=11)
        assert np.array_equal(rep.signal_b_to_a, direct)
