import math

import numpy as np
import pytest

from photonmix.fock import (
    CutoffError,
    DensityMatrix,
    HilbertSpace,
    annihilate,
    coherent_state,
    create,
    mix,
    normally_ordered_moment,
    number_state,
    pure_moment,
    vacuum,
)


def dense_mode_ops(space, mode):
    """Independent dense construction of (a, a_dag) for cross-checks."""
    n = space.n_max
    a1 = np.diag(np.sqrt(np.arange(1, n + 1)), 1).astype(complex)
    eye = np.eye(n + 1, dtype=complex)
    ops = [a1 if m == mode else eye for m in range(space.mode_count)]
    a = ops[0]
    for o in ops[1:]:
        a = np.kron(a, o)
    return a, a.conj().T


def coherent_weights(alpha_sq, n_max):
    """Poisson weights exp(-mu) mu^n / n! via direct factorial evaluation."""
    return np.array(
        [math.exp(-alpha_sq) * alpha_sq ** n / math.factorial(n) for n in range(n_max + 1)]
    )


class TestCoherentState:
    def test_alpha_zero_is_vacuum(self):
        space = HilbertSpace(1, 4)
        st = coherent_state(space, 0, 0.0)
        assert st.amplitude([0]) == pytest.approx(1.0)
        assert st.norm() == pytest.approx(1.0)
        assert st.dropped_weight == 0.0

    def test_vacuum_overlap_weak_field(self):
        space = HilbertSpace(1, 4)
        st = coherent_state(space, 0, math.sqrt(0.01))
        assert abs(st.amplitude([0])) ** 2 == pytest.approx(math.exp(-0.01), rel=1e-9)

    def test_two_to_one_photon_ratio(self):
        space = HilbertSpace(1, 4)
        st = coherent_state(space, 0, math.sqrt(0.01))
        ratio = abs(st.amplitude([2])) ** 2 / abs(st.amplitude([1])) ** 2
        w = coherent_weights(0.01, 4)
        assert ratio == pytest.approx(w[2] / w[1], rel=1e-12)
        assert ratio == pytest.approx(0.005, rel=1e-12)

    def test_truncation_weight_reported(self):
        space = HilbertSpace(1, 6)
        mu = 0.16  # tail ~5e-10, large enough to dominate rounding noise
        st = coherent_state(space, 0, math.sqrt(mu))
        expected = 1.0 - coherent_weights(mu, 6).sum()
        assert expected > 1e-10
        assert st.dropped_weight == pytest.approx(expected, rel=1e-4)

    def test_cutoff_guard_mean_photon_number(self):
        space = HilbertSpace(1, 4)
        with pytest.raises(CutoffError):
            coherent_state(space, 0, math.sqrt(1.5))  # 1.5 > 4/4

    def test_cutoff_guard_tail_weight(self):
        space = HilbertSpace(1, 2)
        with pytest.raises(CutoffError):
            coherent_state(space, 0, math.sqrt(0.5))

    def test_mean_photon_number(self):
        space = HilbertSpace(1, 6)
        mu = 0.04
        st = coherent_state(space, 0, math.sqrt(mu))
        mean = pure_moment(st, ((1, 1),)).real
        assert abs(mean - mu) <= max(10 * st.dropped_weight, 1e-13)

    def test_complex_alpha_phase(self):
        space = HilbertSpace(1, 5)
        alpha = 0.1 * np.exp(1j * 0.7)
        st = coherent_state(space, 0, alpha)
        # annihilation eigenvector property holds with the complex eigenvalue
        res = annihilate(st, 0) - alpha * st
        assert res.norm() < 1e-6


class TestLadderOperators:
    def test_create_vacuum(self):
        space = HilbertSpace(1, 4)
        st = create(vacuum(space), 0)
        assert st.amplitude([1]) == pytest.approx(1.0)

    def test_create_bosonic_enhancement(self):
        space = HilbertSpace(1, 4)
        st = create(number_state(space, [1]), 0)
        assert st.amplitude([2]) == pytest.approx(math.sqrt(2.0))

    def test_create_on_coherent_norm(self):
        space = HilbertSpace(1, 8)
        mu = 0.01
        st = create(coherent_state(space, 0, math.sqrt(mu)), 0)
        # independent evaluation: ||a^dag |alpha>||^2 = sum (n+1) p(n) = 1 + mu
        w = coherent_weights(mu, 8)
        expected = float(np.sum((np.arange(9) + 1) * w)) / w.sum()
        assert st.norm() ** 2 == pytest.approx(expected, rel=1e-10)
        assert st.norm() ** 2 == pytest.approx(1.0 + mu, rel=1e-6)

    def test_create_drops_top_level(self):
        space = HilbertSpace(1, 3)
        st = create(number_state(space, [3]), 0)
        assert st.norm() == 0.0
        assert st.dropped_weight == pytest.approx(4.0)

    def test_annihilate_steps_down(self):
        space = HilbertSpace(1, 4)
        st = annihilate(number_state(space, [1]), 0)
        assert st.amplitude([0]) == pytest.approx(1.0)

    def test_annihilate_vacuum_is_zero(self):
        space = HilbertSpace(1, 4)
        assert annihilate(vacuum(space), 0).norm() == 0.0

    def test_coherent_is_annihilation_eigenvector(self):
        space = HilbertSpace(1, 6)
        alpha = math.sqrt(0.01)
        st = coherent_state(space, 0, alpha)
        res = annihilate(st, 0) - alpha * st
        assert res.norm() < 1e-6

    def test_commutator_on_basis_states(self):
        space = HilbertSpace(1, 6)
        for n in range(space.n_max):
            st = number_state(space, [n])
            lhs = annihilate(create(st, 0), 0) - create(annihilate(st, 0), 0)
            assert (lhs - st).norm() == pytest.approx(0.0, abs=1e-12)

    def test_matches_independent_dense_matrices(self):
        space = HilbertSpace(2, 4)
        rng = np.random.default_rng(7)
        amps = rng.normal(size=space.dimension) + 1j * rng.normal(size=space.dimension)
        from photonmix.fock import FockVector

        st = FockVector(space, amps)
        for mode in range(2):
            a, adag = dense_mode_ops(space, mode)
            np.testing.assert_allclose(
                create(st, mode).amplitudes, adag @ amps, atol=1e-12
            )
            np.testing.assert_allclose(
                annihilate(st, mode).amplitudes, a @ amps, atol=1e-12
            )


class TestMix:
    def test_single_pure_component(self):
        space = HilbertSpace(1, 3)
        rho = mix([(1.0, vacuum(space))])
        assert rho.elements[0, 0] == pytest.approx(1.0)
        assert rho.trace() == pytest.approx(1.0)

    def test_heralded_source_diagonal(self):
        space = HilbertSpace(1, 3)
        eta = 0.01
        rho = mix([(1 - eta, vacuum(space)), (eta, number_state(space, [1]))])
        diag = rho.diagonal()
        assert diag[0] == pytest.approx(0.99)
        assert diag[1] == pytest.approx(0.01)

    def test_unnormalized_components_renormalized(self):
        space = HilbertSpace(1, 6)
        st = coherent_state(space, 0, math.sqrt(0.01))
        rho = mix([(0.5, create(st, 0)), (0.5, st)])
        assert abs(rho.trace() - 1.0) < 1e-12
        rho.validate()

    def test_density_components(self):
        space = HilbertSpace(1, 3)
        inner = mix([(1.0, number_state(space, [1]))])
        rho = mix([(0.25, inner), (0.75, vacuum(space))])
        assert rho.diagonal()[1] == pytest.approx(0.25)

    def test_zero_weights_rejected(self):
        space = HilbertSpace(1, 3)
        with pytest.raises(ValueError):
            mix([(0.0, vacuum(space))])
        with pytest.raises(ValueError):
            mix([(-0.1, vacuum(space))])

    def test_output_is_physical(self):
        space = HilbertSpace(2, 3)
        st1 = create(vacuum(space), 0)
        st2 = create(vacuum(space), 1)
        rho = mix([(0.3, st1 + st2), (0.7, vacuum(space))])
        rho.validate()  # Hermitian, unit trace, PSD


class TestMoments:
    def test_single_photon_mean(self):
        space = HilbertSpace(1, 4)
        rho = number_state(space, [1]).to_density()
        assert normally_ordered_moment(rho, ((1, 1),)).real == pytest.approx(1.0)

    def test_two_photon_pairs(self):
        space = HilbertSpace(1, 4)
        rho = number_state(space, [2]).to_density()
        assert normally_ordered_moment(rho, ((2, 2),)).real == pytest.approx(2.0)

    def test_coherent_pair_moment_vs_dense_trace(self):
        space = HilbertSpace(1, 6)
        mu = 0.04
        rho = coherent_state(space, 0, math.sqrt(mu)).to_density()
        got = normally_ordered_moment(rho, ((2, 2),)).real
        a, adag = dense_mode_ops(space, 0)
        ref = np.trace(rho.elements @ (adag @ adag @ a @ a)).real
        assert got == pytest.approx(ref, abs=1e-14)
        assert got == pytest.approx(mu * mu, rel=1e-6)

    def test_falling_factorial_on_number_states(self):
        space = HilbertSpace(1, 6)
        for n in range(space.n_max + 1):
            rho = number_state(space, [n]).to_density()
            for k in range(n + 1):
                want = math.factorial(n) / math.factorial(n - k)
                got = normally_ordered_moment(rho, ((k, k),)).real
                assert got == pytest.approx(want, rel=1e-12)

    def test_annihilating_string_gives_zero(self):
        space = HilbertSpace(1, 4)
        rho = number_state(space, [1]).to_density()
        assert normally_ordered_moment(rho, ((2, 2),)) == 0.0

    def test_power_above_cutoff_rejected(self):
        space = HilbertSpace(1, 3)
        rho = vacuum(space).to_density()
        with pytest.raises(CutoffError):
            normally_ordered_moment(rho, ((4, 4),))

    def test_product_state_moments_factor(self):
        space = HilbertSpace(2, 6)
        mu = 0.05
        st = create(coherent_state(space, 0, math.sqrt(mu)), 1).normalize()
        rho = st.to_density()
        joint = normally_ordered_moment(rho, ((1, 1), (1, 1))).real
        m0 = normally_ordered_moment(rho, ((1, 1), (0, 0))).real
        m1 = normally_ordered_moment(rho, ((0, 0), (1, 1))).real
        assert joint == pytest.approx(m0 * m1, abs=1e-10)

    def test_pure_moment_matches_density_route(self):
        space = HilbertSpace(2, 4)
        st = (create(vacuum(space), 0) + create(vacuum(space), 1)).normalize()
        powers = ((1, 1), (1, 1))
        via_density = normally_ordered_moment(st.to_density(), powers)
        assert pure_moment(st, powers) == pytest.approx(via_density, abs=1e-12)

    def test_complex_cross_moment_conjugation(self):
        # <a^dag b> on (|10> + i|01>)/sqrt(2): a^dag b maps i|01> -> i|10>,
        # so the moment is conj(1/sqrt2) * i/sqrt2 = +i/2.  Sign convention
        # check for the index-arithmetic moment evaluation.
        space = HilbertSpace(2, 2)
        st = (create(vacuum(space), 0) + 1j * create(vacuum(space), 1)).normalize()
        m = pure_moment(st, ((1, 0), (0, 1)))  # a^dag b
        assert m == pytest.approx(0.5j, abs=1e-12)
        mt = pure_moment(st, ((0, 1), (1, 0)))  # b^dag a
        assert mt == pytest.approx(-0.5j, abs=1e-12)


class TestSpaces:
    def test_dimension(self):
        assert HilbertSpace(3, 6).dimension == 343
        assert HilbertSpace(1, 2).dimension == 3

    def test_cross_space_operations_rejected(self):
        a = vacuum(HilbertSpace(1, 3))
        b = vacuum(HilbertSpace(1, 4))
        with pytest.raises(ValueError):
            _ = a + b
        with pytest.raises(ValueError):
            mix([(0.5, a), (0.5, b)])

    def test_mode_bounds_checked(self):
        space = HilbertSpace(2, 3)
        with pytest.raises(ValueError):
            create(vacuum(space), 2)

    def test_amplitudes_are_immutable(self):
        st = vacuum(HilbertSpace(1, 3))
        with pytest.raises(ValueError):
            st.amplitudes[0] = 2.0

    def test_density_validation_catches_bad_matrices(self):
        space = HilbertSpace(1, 2)
        bad = np.diag([0.5, 0.6, -0.1]).astype(complex)
        with pytest.raises(ValueError):
            DensityMatrix(space, bad).validate()
