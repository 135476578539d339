"""End-to-end acceptance checks, one test per criterion.

Each test is tagged with ``criterion`` so the terminal summary prints a
PASS/FAIL line for it. Tolerances and runtime limits are the stated ones.
"""

import time

import numpy as np
import pytest

from bordertn.boundary import boundary_contract, dense_contract, kagome_peps, square_peps
from bordertn.conversions import analyze_degeneration, apply_restriction
from bordertn.cost import cost_exact_rvb, rvb_cost_ratio
from bordertn.interpolation import (ExpectationTask, dense_expectation, expectation_complex, expectation_real,
                                    interpolate_at_zero, make_plan, reconstruct_state)
from bordertn.structures import PlaquetteSpec, lambda_tensor, make_plaquette, mamu_tensor, w_state
from bordertn.zoo import (check_cycle_vectors, cycle_orthogonal_vectors, diag_mamu_to_ghz, ghz_support_tensor,
                          lambda_degeneration_222, lambda_restriction_maps, mamu4_to_ghz, rvb_border_family,
                          symbolic_w_trace, verify_ghz_equivalence, w_mps_matrices, w_product_state)


class Timer:
    def __init__(self, limit):
        self.limit = limit

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        if exc[0] is None:
            assert self.elapsed < self.limit, f"took {self.elapsed:.1f} s (limit {self.limit} s)"


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


def loglog_slope(xs, ys):
    return np.polyfit(np.log(xs), np.log(ys), 1)[0]


@pytest.mark.criterion("lambda restriction from MPS triples, max entry error <= 1e-14")
def test_lambda_restriction():
    with Timer(1):
        out = apply_restriction(mamu_tensor((3, 2, 2)), lambda_restriction_maps())
        target = make_plaquette(PlaquetteSpec.lam())
        assert np.max(np.abs(out.array(target.ids) - target.data)) <= 1e-14


@pytest.mark.criterion("lambda degeneration certificate d=2 e=2, residual <= 1e-12")
def test_lambda_degeneration_certificate():
    with Timer(1):
        cert = analyze_degeneration(mamu_tensor((2, 2, 2)), lambda_degeneration_222(), lambda_tensor())
        assert (cert.d, cert.e) == (2, 2)
        assert cert.proportionality == pytest.approx(1, abs=1e-12)
        assert np.max(np.abs((cert.leading - lambda_tensor()).data)) <= 1e-12
        assert cert.residual_exponents == [4]
        # |2> on party 2 tensored with (1/4 |00> - |11>) on parties 0 and 1
        expected = np.zeros((3, 3, 3))
        expected[0, 0, 2] = 0.25
        expected[1, 1, 2] = -1
        assert np.max(np.abs(cert.residual_terms[4].array([0, 1, 2]) - expected)) <= 1e-12


@pytest.mark.criterion("interpolation on the 2-triangle patch: state, real and complex expectations <= 1e-8")
def test_interpolation_on_patch():
    with Timer(10):
        s, fam, target = rvb_border_family(1, 2, project=False)
        src = s.tensor()
        F, e = s.faces, 2
        assert F == 2
        rec = reconstruct_state(src, fam, make_plan(e * F, "real"))
        assert len(rec.summands) == e * F + 1 == 5
        assert (rec.state - target).norm() <= 1e-8 * target.norm()

        rng = np.random.default_rng(2024)
        complex_plan = make_plan(2 * e * F, "complex")
        for _ in range(10):
            ops = {leg.id: random_hermitian(rng, leg.dim) for leg in target.legs}
            exact = dense_expectation(target, target, ops)
            task = ExpectationTask(src, fam, ops)
            real = expectation_real(task, make_plan(2 * e * F, "real"))
            assert len(real.samples) == 9
            assert abs(real.value - exact) <= 1e-8 * abs(exact)
            cplx = expectation_complex(task, complex_plan)
            assert abs(cplx.value - exact) <= 1e-8 * abs(exact)


@pytest.mark.criterion("W(L) from product states for L in 4..6 <= 1e-10, trace identities exact")
def test_w_state_interpolation():
    with Timer(5):
        for L in (4, 5, 6):
            value, _ = interpolate_at_zero(lambda x: w_product_state(L, x), make_plan(L - 1, "real"))
            target = w_state(L)
            assert (value - target).norm() <= 1e-10 * target.norm()
            assert symbolic_w_trace([0] * L, L) == {}
            for m in range(1, L + 1):
                assert symbolic_w_trace([0] * (L - m) + [1] * m, L) == {m: {0: 1}}
            M0, M1 = w_mps_matrices(L)
            assert abs(np.trace(np.linalg.matrix_power(M0(0.5), L))) <= 1e-14


@pytest.mark.criterion("m=3 diagonal degenerations: counts 4, 5, 3 and GHZ equivalence")
def test_three_party_ghz():
    with Timer(1):
        for dims, g, level in (((2, 2, 3), 5, 4), ((2, 3, 3), 5, 5), ((2, 2, 2), None, 3)):
            fam, sol = diag_mamu_to_ghz(*dims, g=g)
            assert sol.ghz_level == level
            cert = analyze_degeneration(mamu_tensor(dims), fam, ghz_support_tensor(sol.zero_based, dims))
            check = verify_ghz_equivalence(cert.leading, level)
            assert check.ok and check.ranks == (level,) * 3


@pytest.mark.criterion("m=4 cycle degenerations: counts 2, 5, 8 and vector invariants for m=4..6")
def test_four_party_ghz():
    with Timer(5):
        for k, level in ((2, 2), (3, 5), (4, 8)):
            assert mamu4_to_ghz(k)[1].ghz_level == level == -(-k * k // 2)
        for m in (4, 5, 6):
            assert check_cycle_vectors(cycle_orthogonal_vectors(m)) == (True, True)


@pytest.mark.criterion("exact boundary MPS on 20 seeds matches dense <= 1e-10, discarded weight monotone")
def test_boundary_exact_on_seeds():
    with Timer(60):
        for seed in range(20):
            for net in (square_peps(4, 4, 2, 2, 2, seed=seed), kagome_peps(2, 2, seed=seed)):
                exact = dense_contract(net)
                value = boundary_contract(net).value
                assert abs(value - exact) <= 1e-10 * abs(exact)
                weights = [boundary_contract(net, chi=chi).discarded_weight for chi in (1, 2, 4, 8, 16)]
                assert all(a >= b - 1e-12 for a, b in zip(weights, weights[1:]))


@pytest.mark.criterion("multiply-count slopes within 0.3 of the cost models, RVB sampling advantage")
def test_cost_model_fidelity():
    def slopes(xs, make, chi_of):
        counts, models = [], []
        for x in xs:
            rep = boundary_contract(make(x), chi=chi_of(x))
            counts.append(rep.multiply_count)
            models.append(rep.model_cost)
        return loglog_slope(xs, counts), loglog_slope(xs, models)

    sweeps = {
        "square chi": ([4, 8, 16], lambda x: square_peps(12, 12, 2, 2, 2, seed=0), lambda x: x),
        "square D1": ([2, 4, 8], lambda x: square_peps(12, 12, x, 2, 2, seed=0), lambda x: 8),
        "square D2": ([2, 4, 8], lambda x: square_peps(12, 12, 2, x, 2, seed=0), lambda x: 8),
        "kagome chi": ([4, 8, 16], lambda x: kagome_peps(8, 16, seed=0), lambda x: x),
        "kagome D": ([2, 3, 4], lambda x: kagome_peps(6, 12, (x,) * 3, seed=0), lambda x: 8),
    }
    with Timer(60):
        for name, (xs, make, chi_of) in sweeps.items():
            measured, model = slopes(xs, make, chi_of)
            assert measured == pytest.approx(model, abs=0.3), name
        for L in range(2, 7):
            e = 2
            assert cost_exact_rvb(L, 2, 2, e)["samples"] == 2 * e * L + 1
            assert rvb_cost_ratio(L, e=e) >= 1.5 ** (4 * L) / (2 * e * L + 1)
