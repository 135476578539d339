import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordertn.conversions import analyze_degeneration
from bordertn.structures import ghz_tensor, lambda_tensor, mamu_tensor, w_state
from bordertn.tensor import DenseTensor, apply_local_maps
from bordertn.zoo import (ZOO, check_cycle_vectors, count_sum_solutions, cycle_exponents, cycle_orthogonal_vectors,
                          cycle_solutions, diag_exponent_m3, diag_mamu_cycle, diag_mamu_to_ghz,
                          ghz_level_lower_bound, ghz_support_tensor, lambda_degeneration_222,
                          lambda_restriction_223, lambda_restriction_maps, mamu4_resource_dim, mamu4_to_ghz,
                          optimal_sum_target, rvb_border_family, rvb_projector, symbolic_w_trace,
                          verify_ghz_equivalence, w_border_mps, w_mps_matrices, zoo_entry)


class TestWState:
    def test_trace_of_m0_power_vanishes(self):
        for L in range(2, 7):
            M0, _ = w_mps_matrices(L)
            assert abs(np.trace(np.linalg.matrix_power(M0(0.0), L))) < 1e-14
            assert symbolic_w_trace([0] * L, L) == {}

    @pytest.mark.parametrize("n,m", [(3, 1), (2, 2), (0, 4), (1, 3)])
    def test_trace_with_excitations(self, n, m):
        L = n + m
        assert symbolic_w_trace([0] * n + [1] * m, L) == {m: {0: 1}}
        M0, M1 = w_mps_matrices(L)
        prod = np.linalg.matrix_power(M0(0.3), n) @ np.linalg.matrix_power(M1(0.3), m)
        assert np.trace(prod) == pytest.approx(0.3 ** m)

    def test_three_site_expansion(self):
        fam, s = w_border_mps(3)
        cert = analyze_degeneration(s.tensor(), fam, w_state(3).relabel({p: f"v{p}" for p in range(3)}))
        assert (cert.d, cert.e) == (1, 2)
        two = cert.residual_terms[2].array(["v0", "v1", "v2"])
        three = cert.residual_terms[3].array(["v0", "v1", "v2"])
        support2 = {tuple(i) for i in np.argwhere(np.abs(two) > 1e-12)}
        assert support2 == {(1, 1, 0), (1, 0, 1), (0, 1, 1)}
        assert np.allclose(two[tuple(zip(*support2))], two[1, 1, 0])
        assert {tuple(i) for i in np.argwhere(np.abs(three) > 1e-12)} == {(1, 1, 1)}

    @pytest.mark.parametrize("L", [2, 3, 4, 5])
    def test_certified(self, L):
        fam, s = w_border_mps(L)
        cert = analyze_degeneration(s.tensor(), fam, w_state(L).relabel({p: f"v{p}" for p in range(L)}))
        assert cert.d == 1 and cert.e == L - 1

    def test_needs_two_sites(self):
        with pytest.raises(ValueError):
            w_border_mps(1)


class TestLambda:
    def test_restriction_exact(self):
        out = apply_local_maps(mamu_tensor((3, 2, 2)), lambda_restriction_maps())
        assert np.array_equal(out.data, lambda_tensor().data.astype(complex))

    def test_matrix_shapes(self):
        shapes = [m.shape for m in lambda_restriction_223()]
        assert shapes == [(3, 2, 3), (3, 3, 2), (3, 2, 2)]

    def test_error_at_point_one(self):
        eps = 0.1
        out = apply_local_maps(mamu_tensor((2, 2, 2)), lambda_degeneration_222().evaluate(eps))
        err = (out / eps ** 2 - lambda_tensor()).norm()
        assert err == pytest.approx(0.01 * np.sqrt(1 / 16 + 1), rel=1e-10)
        assert err == pytest.approx(0.0103, abs=5e-5)

    def test_projector(self):
        P = rvb_projector()
        assert P.shape == (2, 9)
        assert P[0, 2] == P[0, 6] == P[1, 5] == P[1, 7] == 1
        assert P.sum() == 4

    def test_rvb_family_reconstructs(self):
        s, fam, target = rvb_border_family(1, 2)
        poly = fam.expand(s.tensor())
        assert poly.term(0).allclose(target, atol=1e-12)


class TestDiagonalThreeParty:
    @pytest.mark.parametrize("dims,g,level", [((2, 2, 3), 5, 4), ((2, 3, 3), 5, 5), ((2, 2, 2), 4, 3)])
    def test_solution_counts(self, dims, g, level):
        fam, sol = diag_mamu_to_ghz(*dims, g=g)
        assert sol.ghz_level == level
        assert sol.inhomogeneity == (g,) and sol.zero_based_inhomogeneity == (g - 3,)
        assert all(sum(s) == g for s in sol.solutions)
        target = ghz_support_tensor(sol.zero_based, dims)
        cert = analyze_degeneration(mamu_tensor(dims), fam, target)
        assert cert.d == 2 * g * g
        assert verify_ghz_equivalence(cert.leading, level).ok

    def test_222_solutions(self):
        _, sol = diag_mamu_to_ghz(2, 2, 2, g=4)
        assert set(sol.solutions) == {(1, 1, 2), (1, 2, 1), (2, 1, 1)}
        assert sol.unique_after_fixing_pairs()

    def test_optimal_target(self):
        assert optimal_sum_target((2, 2, 2)) == 4
        _, sol = diag_mamu_to_ghz(2, 2, 2)
        assert sol.inhomogeneity == (4,)

    def test_empty(self):
        with pytest.raises(ValueError):
            diag_mamu_to_ghz(2, 2, 2, g=20)

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(-5, 12))
    def test_exponent_identity(self, a, b, c, g):
        i = (a, b, c)
        total = sum(diag_exponent_m3(i[l - 1], i[l], g) for l in range(3))
        assert total - 2 * g * g == (a + b + c - g) ** 2

    def test_count_helper(self):
        assert len(count_sum_solutions((2, 2, 3), 5)) == 4


class TestCycleVectors:
    def test_m4(self):
        assert cycle_orthogonal_vectors(4) == [(1, 1), (-1, 0), (1, -1), (0, 1)]

    def test_m5(self):
        assert cycle_orthogonal_vectors(5) == [(1, 1, 1), (-1, 0, 0), (1, -1, 0), (0, 1, -1), (0, 0, 1)]

    @pytest.mark.parametrize("m", [4, 5, 6, 7, 8])
    def test_invariants(self, m):
        assert check_cycle_vectors(cycle_orthogonal_vectors(m)) == (True, True)

    def test_broken_vectors_detected(self):
        vecs = cycle_orthogonal_vectors(5)
        vecs[4] = (1, 0, 0)
        assert check_cycle_vectors(vecs)[0] is False

    def test_needs_four(self):
        with pytest.raises(ValueError):
            cycle_orthogonal_vectors(3)

    @pytest.mark.parametrize("m,k", [(4, 2), (4, 3), (5, 2), (5, 3), (6, 2), (6, 3)])
    def test_exponent_sum_is_norm(self, m, k):
        vecs = cycle_orthogonal_vectors(m)
        g = [1] * (m - 2)
        tables = cycle_exponents(vecs, g, (k,) * m)
        offsets = set()
        for idx in itertools.product(range(k), repeat=m):
            total = sum(int(tables[l][idx[l - 1], idx[l]]) for l in range(m))
            residual = [sum(vecs[l][r] * idx[l] for l in range(m)) - g[r] for r in range(m - 2)]
            offsets.add(total - sum(x * x for x in residual))
        assert len(offsets) == 1

    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_smith_matches_enumeration(self, k):
        vecs = cycle_orthogonal_vectors(4)
        g = (k // 2, k // 2)
        assert cycle_solutions(vecs, g, (k,) * 4, "smith") == cycle_solutions(vecs, g, (k,) * 4, "enumerate")

    def test_five_cycle_degeneration(self):
        fam, sol = diag_mamu_cycle(5, 2)
        cert = analyze_degeneration(mamu_tensor((2,) * 5), fam, ghz_support_tensor(sol.zero_based, (2,) * 5))
        assert cert.d == fam.approx_degree
        assert verify_ghz_equivalence(cert.leading, sol.ghz_level).ok
        assert sol.unique_after_fixing_pairs()


class TestFourParty:
    @pytest.mark.parametrize("k,level", [(2, 2), (3, 5), (4, 8)])
    def test_levels(self, k, level):
        fam, sol = mamu4_to_ghz(k)
        assert sol.ghz_level == level == ghz_level_lower_bound(k)
        brute = sum(1 for i in itertools.product(range(k), repeat=4)
                    if i[0] - i[1] + i[2] == k // 2 and i[0] - i[2] + i[3] == k // 2)
        assert brute == level

    def test_counts_monotone(self):
        levels = [mamu4_to_ghz(k)[1].ghz_level for k in range(2, 7)]
        assert levels == sorted(levels)
        assert all(l >= ghz_level_lower_bound(k) for k, l in zip(range(2, 7), levels))

    @pytest.mark.parametrize("k", [2, 3])
    def test_certified(self, k):
        fam, sol = mamu4_to_ghz(k)
        cert = analyze_degeneration(mamu_tensor((k,) * 4), fam, ghz_support_tensor(sol.zero_based, (k,) * 4))
        assert verify_ghz_equivalence(cert.leading, sol.ghz_level).ok
        assert sol.unique_after_fixing_pairs()

    def test_level_restriction(self):
        _, sol = mamu4_to_ghz(3, level=4)
        assert sol.ghz_level == 4
        with pytest.raises(ValueError):
            mamu4_to_ghz(3, level=6)

    @pytest.mark.parametrize("D,k", [(2, 2), (4, 3), (5, 3), (8, 4), (9, 5)])
    def test_resource_dim(self, D, k):
        assert mamu4_resource_dim(D) == k


class TestGhzCheck:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_ghz_itself(self, k):
        assert verify_ghz_equivalence(ghz_tensor(3, k), k).ok

    def test_mamu_is_not_ghz(self):
        check = verify_ghz_equivalence(mamu_tensor((2, 2, 2)), 8)
        assert not check.ok
        assert check.ranks == (4, 4, 4)
        assert "party" in check.diagnostic

    def test_unequal_amplitudes(self):
        t = ghz_tensor(3, 2)
        bad = DenseTensor.from_array(t.data * np.array([1, 2]).reshape(2, 1, 1), list(t.ids))
        assert not verify_ghz_equivalence(bad, 2).ok

    def test_zero(self):
        assert not verify_ghz_equivalence(ghz_tensor(3, 2) * 0, 2).ok


class TestRegistry:
    @pytest.mark.parametrize("name", sorted(ZOO))
    def test_every_entry_certifies(self, name):
        entry = zoo_entry(name)
        cert = entry.certify()
        d, e = entry.expected
        assert cert.d == d and (e is None or cert.e == e)
        if entry.target_label.startswith("ghz"):
            assert verify_ghz_equivalence(cert.leading, entry.extra["level"]).ok

    def test_unknown(self):
        with pytest.raises(KeyError):
            zoo_entry("strassen")
