import math

import numpy as np
import pytest

from fractalext.errors import InfeasibleParametersError
from fractalext.knapp import (
    KnappParams,
    PhiSpec,
    build_family,
    build_family_single_scale,
    choose_profiles,
    is_mli,
    knapp_indicator,
    mli_set,
    psi_sequence,
    validate_family,
)
from fractalext.transform import extension_transform


def std_params(n_max=6, seed=42, alphas=(0.4, 0.4), betas=(0.4, 0.4), k=2):
    return KnappParams(
        k=k, alphas=alphas, betas=betas, phi=PhiSpec(1.0), n_max=n_max, seed=seed
    )


class TestPsiSequence:
    def test_first_levels(self):
        # own evaluation of ceil((N log 2)^(1/2)) + 2: 3, 4, 4, 4, 4, 5
        seq = psi_sequence(PhiSpec(1.0), 6)
        assert [ps for ps, _ in seq] == [3, 4, 4, 4, 4, 5]
        assert [P for _, P in seq] == [3, 12, 48, 192, 768, 3840]

    def test_products_exact(self):
        seq = psi_sequence(PhiSpec(2.5), 10)
        running = 1
        for ps, P in seq:
            running *= ps
            assert P == running
            assert ps >= 3

    def test_non_decreasing(self):
        seq = psi_sequence(PhiSpec(1.0), 40)
        widths = [ps for ps, _ in seq]
        assert all(a <= b for a, b in zip(widths, widths[1:]))


class TestParams:
    def test_beta_above_alpha_rejected(self):
        with pytest.raises(InfeasibleParametersError) as ei:
            std_params(alphas=(0.3, 0.3), betas=(0.5, 0.3))
        assert "beta" in ei.value.constraint

    def test_budget_constraint(self):
        with pytest.raises(InfeasibleParametersError):
            std_params(alphas=(0.9, 0.9), betas=(0.0, 0.0))

    def test_gap_monotonicity(self):
        with pytest.raises(InfeasibleParametersError):
            std_params(alphas=(0.2, 0.4), betas=(0.2, 0.2))

    def test_json_roundtrip(self):
        p = std_params()
        assert KnappParams.from_json(p.to_json()) == p


class TestMliSets:
    def test_generated_set(self):
        assert mli_set(3, 3) == (2, 7, 28)
        assert mli_set(3, 1) == (2,)
        assert mli_set(1, 2) == (2, 3)

    def test_inductive_identity(self):
        for M in (1, 2, 5, 11):
            for k in (2, 3, 4, 5):
                ds = mli_set(M, k)
                for m in range(1, k):
                    assert ds[m] == M * sum(ds[:m]) + 1

    def test_exhaustive_check(self):
        res = is_mli((2, 7, 28), 3)
        assert res.ok and res.method == "exhaustive"

    def test_explicit_relation_detected(self):
        assert not is_mli((1, 2), 3).ok  # 2*1 - 1*2 = 0

    def test_single_difference(self):
        assert is_mli((5,), 100).ok

    def test_sufficient_condition_beyond_cap(self):
        res = is_mli(mli_set(200, 4), 200)
        assert res.ok and res.method == "sufficient-condition"

    def test_sufficient_condition_rejects(self):
        res = is_mli((2, 3, 4, 9), 200)
        assert not res.ok and res.method == "sufficient-condition"


class TestChooseProfiles:
    def test_degenerate_exponents(self):
        prof = choose_profiles(std_params(k=1, alphas=(0.0,), betas=(0.0,)))
        for lp in prof.levels:
            assert lp.t == (1,) and lp.tau == (1,)
        assert prof.n0 == 7  # never starts: beyond n_max

    def test_tau_at_most_t(self):
        prof = choose_profiles(std_params())
        for lp in prof.levels:
            for m in range(2):
                assert 1 <= lp.tau[m] <= lp.t[m] <= lp.psi

    def test_recorded_constant(self):
        # frozen from the first verified run of the greedy chooser
        prof = choose_profiles(std_params())
        assert prof.ratio_constant == pytest.approx(6.142, abs=0.01)
        assert prof.ratio_constant <= 16.0

    def test_infeasible_small_beta(self):
        # beta much smaller than alpha needs progressions longer than the
        # difference set permits at desk-scale widths
        with pytest.raises(InfeasibleParametersError) as ei:
            choose_profiles(std_params(alphas=(0.4, 0.4), betas=(0.1, 0.1)))
        assert "corridor" in ei.value.constraint


class TestBuildFamily:
    def test_level_constraints(self):
        fam = build_family(std_params())
        for lp in fam.levels:
            for m in range(fam.k):
                assert 1 + (lp.tau[m] - 1) * lp.d[m] <= lp.psi  # progression fits
                assert lp.tau[m] <= lp.t[m] <= lp.psi
                assert all(0 <= w < lp.psi for w in lp.W[m])
            assert is_mli(lp.d, lp.M).ok

    def test_progression_inside_endpoints(self):
        fam = build_family(std_params())
        for j in range(1, fam.depth + 1):
            for m in range(fam.k):
                a = set(fam.atom_numerators(m, j))
                p = set(fam.progression_numerators(m, j))
                assert p <= a
                assert len(a) == fam.t_product(m, j)
                assert len(p) == fam.tau_product(m, j)

    def test_cylinder_mass_exact(self):
        fam = build_family(std_params(n_max=5))
        level = fam.depth
        for m in range(fam.k):
            atoms = fam.atom_numerators(m, level)
            for j in (1, 2, 3):
                scale = fam.Psi(level) // fam.Psi(j)
                prefixes = [a // scale for a in atoms]
                for parent in fam.atom_numerators(m, j):
                    count = sum(1 for p in prefixes if p == parent)
                    assert count * fam.t_product(m, j) == fam.t_product(m, level)

    def test_ratio_identity_with_recorded_constant(self):
        fam = build_family(std_params())
        C = fam.ratio_constant + 1e-9
        for m in range(fam.k):
            for N in range(1, fam.depth + 1):
                ratio = fam.tau_product(m, N) / fam.t_product(m, N)
                target = fam.Psi(N) ** (-fam.betas[m] / 2.0)
                assert target / C <= ratio <= C * target

    def test_deterministic_given_seed(self):
        fam1 = build_family(std_params(seed=9))
        fam2 = build_family(std_params(seed=9))
        assert fam1.a_sets == fam2.a_sets
        fam3 = build_family(std_params(seed=10))
        assert fam3.a_sets != fam1.a_sets

    def test_measure_is_probability(self):
        fam = build_family(std_params())
        for m in range(2):
            mu = fam.measure(m)
            assert mu.total_mass == pytest.approx(1.0, abs=1e-12)
            assert mu.kind == "block"

    def test_degenerate_single_chain(self):
        fam = build_family(std_params(k=1, alphas=(0.0,), betas=(0.0,)))
        for j in range(1, fam.depth + 1):
            assert len(fam.atom_numerators(0, j)) == 1
            assert fam.atom_numerators(0, j) == fam.progression_numerators(0, j)

    def test_three_coordinate_family(self):
        fam = build_family(
            KnappParams(
                k=3,
                alphas=(0.3, 0.3, 0.25),
                betas=(0.3, 0.3, 0.25),
                phi=PhiSpec(1.0),
                n_max=5,
                seed=3,
            )
        )
        assert fam.k == 3
        for lp in fam.levels:
            for m in range(3):
                assert 1 + (lp.tau[m] - 1) * lp.d[m] <= lp.psi
                assert lp.tau[m] <= lp.t[m] <= lp.psi
            assert is_mli(lp.d, lp.M).ok
        assert fam.ratio_constant <= 16.0

    def test_json_dump(self):
        fam = build_family(std_params(n_max=3))
        obj = fam.to_json()
        assert obj["levels"][0]["psi"] == 3
        assert obj["levels"][-1]["Psi"] == "48"
        assert all(isinstance(a, str) for a in obj["levels"][0]["A"][0])


class TestIndicator:
    def test_depth_zero_everything(self):
        fam = build_family(std_params(n_max=4))
        f = knapp_indicator(fam, 0, 0)
        assert np.all(f == 1.0)

    def test_lp_norm_product_formula(self):
        fam = build_family(std_params(n_max=6))
        for m in range(2):
            mu = fam.measure(m)
            for ell in (1, 2, 3):
                f = knapp_indicator(fam, ell, m)
                for p in (1.0, 2.0, 4.0):
                    norm = float(np.sum(f**p * mu.weights)) ** (1.0 / p)
                    expected = (
                        fam.tau_product(m, ell) / fam.t_product(m, ell)
                    ) ** (1.0 / p)
                    assert norm == pytest.approx(expected, abs=1e-12)

    def test_transform_at_zero_is_cylinder_mass(self):
        fam = build_family(std_params(n_max=5))
        m, ell = 0, 2
        f = knapp_indicator(fam, ell, m)
        val = extension_transform(fam.measure(m), f, 0.0)
        assert val.real == pytest.approx(
            fam.tau_product(m, ell) / fam.t_product(m, ell), abs=1e-12
        )
        assert val.imag == 0.0

    def test_depth_validation(self):
        fam = build_family(std_params(n_max=3))
        with pytest.raises(ValueError):
            knapp_indicator(fam, 4, 0)


class TestSingleScale:
    def test_quarter_base_example(self):
        # alphas (log3/log4, 1/2): (k-1)a1 + ak = 1.2925 < 2, admissible
        fam = build_family_single_scale(4, (3, 2), seed=1, levels=3)
        assert fam.levels[0].psi == 16
        assert fam.levels[0].t == (9, 4)
        assert fam.levels[0].tau == (3, 2)
        a1 = math.log(3) / math.log(4)
        assert (2 - 1) * a1 + 0.5 == pytest.approx(1.2925, abs=1e-3)

    def test_ap_length_is_exact_square_root(self):
        fam = build_family_single_scale(4, (3, 2), seed=1, levels=2)
        for m, lp_t in enumerate(fam.levels[0].t):
            ap_len = fam.levels[0].tau[m]
            assert ap_len * ap_len == lp_t

    def test_progression_below_branching(self):
        fam = build_family_single_scale(4, (3, 2), seed=1, levels=2)
        N = fam.levels[0].psi
        for m in range(2):
            W = fam.levels[0].W[m]
            assert max(W) == (fam.levels[0].tau[m] - 1) * fam.levels[0].d[m]
            assert max(W) < N

    def test_classical_third_family(self):
        fam = build_family_single_scale(3, (2,), seed=0, levels=3)
        assert fam.levels[0].psi == 9
        assert fam.levels[0].t == (4,)
        assert fam.levels[0].tau == (2,)

    def test_difference_bound(self):
        fam = build_family_single_scale(4, (3, 2), seed=1, levels=2)
        N = fam.levels[0].psi
        for m in range(2):
            assert fam.levels[0].d[m] * fam.levels[0].tau[m] <= N

    def test_progressions_inside_endpoint_sets(self):
        fam = build_family_single_scale(4, (3, 2), seed=5, levels=3)
        for j in range(1, fam.depth + 1):
            for m in range(fam.k):
                a = set(fam.atom_numerators(m, j))
                p = set(fam.progression_numerators(m, j))
                assert p <= a
                assert len(a) == fam.t_product(m, j)
                assert len(p) == fam.tau_product(m, j)

    def test_rejects_non_decreasing_sizes(self):
        with pytest.raises(InfeasibleParametersError):
            build_family_single_scale(4, (2, 3), seed=0)

    def test_rejects_out_of_range_sizes(self):
        with pytest.raises(InfeasibleParametersError):
            build_family_single_scale(4, (4, 2), seed=0)


class TestValidateFamily:
    def test_degenerate_chain_constants(self):
        fam = build_family(std_params(k=1, alphas=(0.0,), betas=(0.0,)))
        rep = validate_family(fam)
        assert rep["passed"]
        # single block of width 1/Psi(6): the zero-exponent decay product peaks
        # at |sinc(1/3840)|, barely under 1
        assert rep["decay"][0]["sup_product"] == pytest.approx(1.0, abs=1e-6)
        assert rep["decay"][0]["sup_product"] < 1.0

    def test_two_seeds_agree_within_factor_four(self):
        sups = []
        for seed in (42, 43):
            rep = validate_family(build_family(std_params(seed=seed)))
            assert rep["passed"]
            sups.append([d["sup_product"] for d in rep["decay"]])
        for m in range(2):
            ratio = sups[0][m] / sups[1][m]
            assert 0.25 <= ratio <= 4.0

    def test_ball_constants_positive_finite(self):
        rep = validate_family(build_family(std_params(n_max=5)))
        for entry in rep["ball"]:
            assert 0.0 < entry["c_low"] < math.inf
            assert 0.0 < entry["c_high"] < math.inf
