"""Entropies, closed-form bounds, the minimizer, and concavity."""

import math

import numpy as np
import pytest

from cliffcert import (
    DensityMatrix,
    DomainError,
    GVector,
    bias_entropy,
    bias_entropy_d1,
    bias_entropy_d2,
    closed_form_kind,
    closed_form_min,
    concavity_profile,
    eigenprojectors,
    entropy_average,
    extended_expectations,
    find_minimizer,
    from_gvector,
    from_label,
    jordan_wigner,
    maassen_uffink_bound,
    observable_entropy,
    random_state,
    random_state_batch,
    renyi_entropy,
)

# Direct-formula oracles, frozen
H_THREE_QUARTERS = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))  # 0.8112781244591328


def plus_state():
    gens = jordan_wigner(1)
    return from_gvector(GVector(1, np.array([0.0, 1.0, 0.0])), gens), gens


class TestRenyi:
    @pytest.mark.parametrize("alpha", [0.5, 1, 2, 3, math.inf])
    def test_uniform_binary(self, alpha):
        assert renyi_entropy([0.5, 0.5], alpha) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.parametrize("alpha", [0.5, 1, 2, math.inf])
    def test_deterministic(self, alpha):
        assert renyi_entropy([1.0, 0.0], alpha) == pytest.approx(0.0, abs=1e-14)

    def test_shannon_three_quarters(self):
        got = renyi_entropy([0.75, 0.25], 1)
        assert got == pytest.approx(0.8112781244591328, abs=1e-15)
        assert got == pytest.approx(H_THREE_QUARTERS, abs=1e-15)

    def test_alpha_near_one_approaches_shannon(self):
        p = [0.3, 0.6, 0.1]
        assert renyi_entropy(p, 1.0 + 1e-9) == pytest.approx(renyi_entropy(p, 1), abs=1e-6)

    def test_clamps_tiny_negatives(self):
        assert renyi_entropy([1.0 + 1e-12, -1e-12], 2) == pytest.approx(0.0, abs=1e-10)

    def test_errors(self):
        with pytest.raises(DomainError):
            renyi_entropy([0.9, -0.1], 1)
        with pytest.raises(DomainError):
            renyi_entropy([0.7, 0.7], 1)
        with pytest.raises(DomainError):
            renyi_entropy([0.5, 0.5], 0.0)
        with pytest.raises(DomainError):
            renyi_entropy([0.5, 0.5], -2)


class TestObservableEntropy:
    def test_maximally_mixed_is_one_bit(self):
        gens = jordan_wigner(2)
        mixed = from_gvector(GVector(2, np.zeros(5)), gens)
        for i in range(5):
            assert observable_entropy(mixed, gens.extended(i), 1) == pytest.approx(1.0, abs=1e-12)

    def test_eigenstate_and_unbiased(self):
        rho, gens = plus_state()
        assert observable_entropy(rho, gens.gammas[0], 1) == pytest.approx(0.0, abs=1e-12)
        assert observable_entropy(rho, gens.gammas[1], 1) == pytest.approx(1.0, abs=1e-12)

    def test_matches_projector_route(self):
        gens = jordan_wigner(2)
        rho = random_state(2, seed=21)
        for i in range(5):
            g = gens.extended(i)
            p0, p1 = eigenprojectors(g)
            probs = [np.trace(p0 @ rho.mat).real, np.trace(p1 @ rho.mat).real]
            for alpha in (1, 2, math.inf):
                assert observable_entropy(rho, g, alpha) == pytest.approx(
                    renyi_entropy(probs, alpha), abs=1e-12
                )

    def test_rejects_non_involution(self):
        rho, _ = plus_state()
        with pytest.raises(DomainError):
            observable_entropy(rho, from_label("iX"), 1)


class TestEntropyAverage:
    def test_mixed_any_k_any_alpha(self):
        gens = jordan_wigner(2)
        mixed = from_gvector(GVector(2, np.zeros(5)), gens)
        for k in range(1, 6):
            for alpha in (1, 2, math.inf):
                assert entropy_average(mixed, gens, k, alpha) == pytest.approx(1.0, abs=1e-12)

    def test_plus_state_k3_shannon_is_two_thirds(self):
        rho, gens = plus_state()
        assert entropy_average(rho, gens, 3, 1) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_random_states_respect_shannon_bound(self):
        gens = jordan_wigner(2)
        mats = random_state_batch(2, 200, seed=5, ensemble="mixed-hs")
        for mat in mats[:50]:
            rho = DensityMatrix.from_matrix(mat)
            assert entropy_average(rho, gens, 5, 1) >= 0.8 - 1e-9

    def test_k_out_of_range(self):
        rho, gens = plus_state()
        with pytest.raises(DomainError):
            entropy_average(rho, gens, 4, 1)


class TestClosedForms:
    def test_shannon(self):
        assert closed_form_min(3, 1) == pytest.approx(2.0 / 3.0, abs=1e-15)
        assert closed_form_min(1, 1) == 0.0

    def test_collision(self):
        # 1 - log2(1 + 1/3) evaluated directly
        assert closed_form_min(3, 2) == pytest.approx(1.0 - math.log2(4.0 / 3.0), abs=1e-15)
        assert closed_form_min(3, 2) == pytest.approx(0.5849625007211563, abs=1e-15)

    def test_min_entropy(self):
        assert closed_form_min(4, math.inf) == pytest.approx(1.0 - math.log2(1.5), abs=1e-15)
        assert closed_form_min(4, math.inf) == pytest.approx(0.4150374992788438, abs=1e-15)

    def test_kind_flags(self):
        assert closed_form_kind(1) == "exact-minimum"
        assert closed_form_kind(2) == "exact-minimum"
        assert closed_form_kind(math.inf) == "proven-lower-bound"
        with pytest.raises(DomainError):
            closed_form_kind(1.5)

    def test_errors(self):
        with pytest.raises(DomainError):
            closed_form_min(0, 1)
        with pytest.raises(DomainError):
            closed_form_min(3, 1.5)


class TestMinimizer:
    def test_shannon_corner(self):
        gens = jordan_wigner(1)
        rep = find_minimizer(gens, 3, 1, budget=20000, seed=7)
        assert abs(rep.numeric_min - 2.0 / 3.0) <= 1e-6
        mags = np.sort(np.abs(rep.argmin_g.values))[::-1]
        assert abs(mags[0] - 1.0) <= 1e-4
        assert mags[1] <= 1e-4
        assert rep.gap >= -1e-6

    def test_collision_equal_components(self):
        gens = jordan_wigner(1)
        rep = find_minimizer(gens, 3, 2, budget=20000, seed=7)
        assert abs(rep.numeric_min - closed_form_min(3, 2)) <= 1e-6
        assert np.max(np.abs(np.abs(rep.argmin_g.values) - 1.0 / math.sqrt(3))) <= 1e-3

    def test_min_entropy_tightness_observed(self):
        gens = jordan_wigner(2)
        rep = find_minimizer(gens, 4, math.inf, budget=20000, seed=7)
        assert rep.bound_kind == "proven-lower-bound"
        assert abs(rep.numeric_min - closed_form_min(4, math.inf)) <= 1e-6
        assert np.max(np.abs(np.abs(rep.argmin_g.values[:4]) - 0.5)) <= 1e-3

    def test_routes_agree(self):
        gens = jordan_wigner(2)
        for alpha in (1, 2, math.inf):
            rep = find_minimizer(gens, 5, alpha, budget=5000, seed=11)
            assert abs(rep.cross_check_min - rep.numeric_min) <= 1e-6

    def test_argmin_inside_ball(self):
        gens = jordan_wigner(2)
        rep = find_minimizer(gens, 5, 2, budget=2000, seed=3)
        assert rep.argmin_g.norm_squared <= 1.0 + 1e-9

    def test_general_alpha_has_no_bound(self):
        gens = jordan_wigner(1)
        rep = find_minimizer(gens, 3, 3.0, budget=2000, seed=1)
        assert rep.closed_form_bound is None and rep.gap is None
        assert 0.0 <= rep.numeric_min <= 1.0

    def test_errors(self):
        gens = jordan_wigner(1)
        with pytest.raises(DomainError):
            find_minimizer(gens, 4, 1, budget=10, seed=0)
        with pytest.raises(DomainError):
            find_minimizer(gens, 3, 1, budget=0, seed=0)

    def test_eigenstate_ceiling(self):
        # an eigenstate of one observable attains the Shannon bound exactly
        gens = jordan_wigner(1)
        for j in range(3):
            v = np.zeros(3)
            v[j] = 1.0
            rho = from_gvector(GVector(1, v), gens)
            assert entropy_average(rho, gens, 3, 1) == pytest.approx(2.0 / 3.0, abs=1e-12)

    def test_collision_jensen_chain(self):
        # both inequality steps of the collision-entropy bound, term by term
        gens = jordan_wigner(2)
        k = 5
        mats = random_state_batch(2, 300, seed=13, ensemble="mixed-hs")
        g = extended_expectations(mats, gens)[:, :k]
        avg_h2 = -np.log2((1.0 + g * g) / 2.0).mean(axis=1)
        jensen = -np.log2((1.0 + (g * g).mean(axis=1)) / 2.0)
        bound = 1.0 - math.log2(1.0 + 1.0 / k)
        assert np.all(avg_h2 >= jensen - 1e-12)
        assert np.all(jensen >= bound - 1e-12)


class TestConcavity:
    def test_limit_at_zero(self):
        assert bias_entropy(1e-12) == pytest.approx(1.0, abs=1e-9)

    def test_quarter_point(self):
        assert bias_entropy(0.25) == pytest.approx(H_THREE_QUARTERS, abs=1e-14)

    def test_curvature_negative_at_half(self):
        assert bias_entropy_d2(0.5) < 0.0

    def test_profile_matches_finite_differences(self):
        grid = np.linspace(0.01, 0.99, 197)
        prof = concavity_profile(grid)
        assert np.max(prof.curvature) <= 1e-12
        h = np.minimum(np.minimum(grid / 3.0, 5e-4), np.maximum(1.5e-5, 0.01 * (1.0 - grid)))
        f = bias_entropy
        fd1 = (-f(grid + 2 * h) + 8 * f(grid + h) - 8 * f(grid - h) + f(grid - 2 * h)) / (12 * h)
        fd2 = (
            -f(grid + 2 * h) + 16 * f(grid + h) - 30 * f(grid) + 16 * f(grid - h) - f(grid - 2 * h)
        ) / (12 * h * h)
        assert np.max(np.abs(prof.slope - fd1) / np.abs(prof.slope)) <= 1e-6
        assert np.max(np.abs(prof.curvature - fd2) / np.abs(prof.curvature)) <= 1e-6

    def test_slope_matches_direct_formula(self):
        t = 0.3
        direct = (math.log(1 - math.sqrt(t)) - math.log(1 + math.sqrt(t))) / (
            4 * math.log(2) * math.sqrt(t)
        )
        assert bias_entropy_d1(t) == pytest.approx(direct, abs=1e-15)

    def test_grid_domain_errors(self):
        with pytest.raises(DomainError):
            concavity_profile([0.0, 0.5])
        with pytest.raises(DomainError):
            concavity_profile([0.5, 1.0])


class TestMaassenUffink:
    def test_identical_bases(self):
        assert maassen_uffink_bound(np.eye(4), np.eye(4)) == pytest.approx(0.0, abs=1e-15)

    def test_computational_vs_hadamard(self):
        hada = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        assert maassen_uffink_bound(np.eye(2), hada) == pytest.approx(0.5, abs=1e-15)

    def test_bound_holds_for_random_states(self):
        hada = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        bound = maassen_uffink_bound(np.eye(2), hada)
        mats = random_state_batch(1, 100, seed=2, ensemble="mixed-hs")
        for mat in mats:
            pa = np.real(np.diag(mat))
            pb = np.real(np.diag(hada.conj().T @ mat @ hada))
            avg = 0.5 * (renyi_entropy(pa, 1) + renyi_entropy(pb, 1))
            assert avg >= bound - 1e-9

    def test_rejects_non_unitary(self):
        with pytest.raises(DomainError):
            maassen_uffink_bound(np.eye(2) * 1.5, np.eye(2))
