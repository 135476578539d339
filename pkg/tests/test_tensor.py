import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bordertn.structures import ghz_tensor, lambda_tensor, mamu_bond_tensor, mamu_tensor, max_entangled_tensor
from bordertn.tensor import (DenseTensor, Leg, MatrixPoly, PolyTensor, apply_local_map, apply_local_maps,
                             contract, group_legs, inner_product, norm, outer, poly_apply, qr_split,
                             schmidt_rank, singular_values, split_leg, svd_truncate)


def random_tensor(rng, dims, ids):
    data = rng.normal(size=dims) + 1j * rng.normal(size=dims)
    return DenseTensor.from_array(data, ids)


class TestDenseTensor:
    def test_construction_checks_size(self):
        with pytest.raises(ValueError):
            DenseTensor([Leg("a", 2)], np.zeros(3))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            DenseTensor.from_array(np.array([1.0, np.nan]), ["a"])

    def test_rejects_duplicate_ids(self):
        with pytest.raises(ValueError):
            DenseTensor.from_array(np.zeros((2, 2)), ["a", "a"])

    def test_leg_dim_positive(self):
        with pytest.raises(ValueError):
            Leg("a", 0)

    def test_immutable(self):
        t = DenseTensor.from_array(np.ones(2), ["a"])
        with pytest.raises(AttributeError):
            t.data = np.zeros(2)
        with pytest.raises(ValueError):
            t.data[0] = 5

    def test_transpose_and_array(self):
        rng = np.random.default_rng(0)
        t = random_tensor(rng, (2, 3, 4), ["a", "b", "c"])
        assert np.array_equal(t.array(["c", "a", "b"]), t.data.transpose(2, 0, 1))
        assert t.transpose(["b", "c", "a"]).dims == (3, 4, 2)

    def test_addition_matches_by_id(self):
        rng = np.random.default_rng(1)
        t = random_tensor(rng, (2, 3), ["a", "b"])
        s = t.transpose(["b", "a"])
        assert (t + s).allclose(t * 2)

    def test_signature_mismatch(self):
        a = DenseTensor.zeros([Leg("a", 2)])
        b = DenseTensor.zeros([Leg("b", 2)])
        with pytest.raises(ValueError):
            inner_product(a, b)


class TestContract:
    def test_identity_contraction(self):
        omega = max_entangled_tensor(2, ("x", "y"))
        ident = DenseTensor.from_array(np.eye(2), ["y2", "z"])
        out = contract(omega, ident, [("y", "y2")])
        assert out.ids == ("x", "z")
        assert np.allclose(out.data, np.eye(2))

    def test_outer_of_plus_states(self):
        plus = DenseTensor.from_array(np.ones(2), ["a"])
        out = contract(plus, plus.relabel({"a": "b"}))
        assert out.size == 4 and np.allclose(out.data, 1)

    def test_mamu_cycle_by_brute_force(self):
        t = mamu_bond_tensor((2, 2, 2))
        # legs per party: (bond_{p-1}, bond_p); an entry is 1 iff both halves of every bond agree
        ids = t.ids
        for idx in itertools.product(range(2), repeat=6):
            val = dict(zip(ids, idx))
            agree = all(val[f"e.{l}/b{l}"] == val[f"e.{(l + 1) % 3}/b{l}"] for l in range(3))
            assert t.data[idx] == (1 if agree else 0)
        assert t.data.sum() == pytest.approx(8)

    def test_dimension_mismatch(self):
        a = DenseTensor.zeros([Leg("a", 2)])
        b = DenseTensor.zeros([Leg("b", 3)])
        with pytest.raises(ValueError):
            contract(a, b, [("a", "b")])

    def test_duplicate_pairing(self):
        a = DenseTensor.zeros([Leg("a", 2), Leg("c", 2)])
        b = DenseTensor.zeros([Leg("b", 2)])
        with pytest.raises(ValueError):
            contract(a, b, [("a", "b"), ("c", "b")])

    def test_result_leg_order(self):
        rng = np.random.default_rng(2)
        a = random_tensor(rng, (2, 3, 4), ["a1", "a2", "a3"])
        b = random_tensor(rng, (3, 5), ["b1", "b2"])
        out = contract(a, b, [("a2", "b1")])
        assert out.ids == ("a1", "a3", "b2")
        assert np.allclose(out.data, np.einsum("ijk,jl->ikl", a.data, b.data))

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=5, max_size=5), st.integers(0, 10 ** 6))
    def test_associative(self, dims, seed):
        rng = np.random.default_rng(seed)
        p, q, r, s, u = dims
        a = random_tensor(rng, (p, q), ["a0", "a1"])
        b = random_tensor(rng, (q, r, s), ["b0", "b1", "b2"])
        c = random_tensor(rng, (s, u), ["c0", "c1"])
        left = contract(contract(a, b, [("a1", "b0")]), c, [("b2", "c0")])
        right = contract(a, contract(b, c, [("b2", "c0")]), [("a1", "b0")])
        assert left.allclose(right.transpose(left.ids), atol=1e-10)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 10 ** 6), st.complex_numbers(max_magnitude=3))
    def test_bilinear(self, m, n, seed, c):
        rng = np.random.default_rng(seed)
        a1, a2 = random_tensor(rng, (m, n), ["x", "y"]), random_tensor(rng, (m, n), ["x", "y"])
        b = random_tensor(rng, (n, 2), ["y", "z"])
        lhs = contract(a1 * c + a2, b, [("y", "y")])
        rhs = contract(a1, b, [("y", "y")]) * c + contract(a2, b, [("y", "y")])
        assert lhs.allclose(rhs, atol=1e-9)


class TestGroupLegs:
    def test_mamu_grouping(self):
        t = mamu_bond_tensor((2, 2, 2), "e")
        grouped = group_legs(t, {p: [f"e.{p}/b{(p - 1) % 3}", f"e.{p}/b{p}"] for p in range(3)})
        assert grouped.dims == (4, 4, 4)
        assert np.count_nonzero(grouped.data) == 8
        assert grouped.allclose(mamu_tensor((2, 2, 2)))

    def test_trivial_partition(self):
        rng = np.random.default_rng(3)
        t = random_tensor(rng, (2, 3), ["a", "b"])
        assert np.array_equal(group_legs(t, [["a"], ["b"]]).data, t.data)
        g = group_legs(t, {"a": ["a"], "b": ["b"]})
        assert g.allclose(t)

    def test_ghz_bipartition_rank(self):
        t = group_legs(ghz_tensor(4, 2), {"L": [0, 1], "R": [2, 3]})
        assert t.dims == (4, 4)
        assert schmidt_rank(t, ["L"]) == 2

    def test_non_partition(self):
        t = ghz_tensor(3, 2)
        with pytest.raises(ValueError):
            group_legs(t, {"x": [0, 1]})
        with pytest.raises(ValueError):
            group_legs(t, {"x": [0, 1], "y": [1, 2]})

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(1, 3), min_size=2, max_size=4), st.integers(0, 10 ** 6))
    def test_split_inverts_group(self, dims, seed):
        rng = np.random.default_rng(seed)
        ids = [f"l{i}" for i in range(len(dims))]
        t = random_tensor(rng, tuple(dims), ids)
        g = group_legs(t, {"G": ids})
        back = split_leg(g, "G", [Leg(i, d) for i, d in zip(ids, dims)])
        assert np.array_equal(back.array(ids), t.data)


class TestLocalMaps:
    def test_identity(self):
        t = lambda_tensor()
        assert apply_local_map(t, 1, np.eye(3)).allclose(t)

    def test_diagonal_action(self):
        t = ghz_tensor(3, 2)
        out = apply_local_maps(t, {p: np.diag([1, 0.5]) for p in range(3)})
        assert out.data[0, 0, 0] == 1 and out.data[1, 1, 1] == pytest.approx(0.125)

    def test_dim_mismatch(self):
        with pytest.raises(ValueError):
            apply_local_map(ghz_tensor(2, 2), 0, np.eye(3))

    def test_new_leg_dim(self):
        out = apply_local_map(ghz_tensor(2, 2), 0, np.ones((5, 2)), new_id="z")
        assert out.leg("z").dim == 5


class TestSvd:
    def test_no_truncation(self):
        rng = np.random.default_rng(4)
        t = random_tensor(rng, (2, 3, 4), ["a", "b", "c"])
        U, SV, w = svd_truncate(t, ["a"], 5)
        assert w == 0
        assert contract(U, SV, [("bond", "bond")]).allclose(t, atol=1e-12)

    def test_omega_chi_one(self):
        U, SV, w = svd_truncate(max_entangled_tensor(2, ("x", "y")), ["x"], 1)
        assert w == pytest.approx(1.0)
        assert U.leg("bond").dim == 1

    def test_lambda_split(self):
        lam = lambda_tensor()
        _, _, w3 = svd_truncate(lam, [0], 3)
        _, _, w2 = svd_truncate(lam, [0], 2)
        assert w3 == pytest.approx(0, abs=1e-12) and w2 > 0

    def test_chi_must_be_positive(self):
        with pytest.raises(ValueError):
            svd_truncate(lambda_tensor(), [0], 0)

    def test_singular_values_descending(self):
        rng = np.random.default_rng(5)
        s = singular_values(random_tensor(rng, (3, 4), ["a", "b"]), ["a"])
        assert np.all(np.diff(s) <= 0)

    def test_qr_split_exact(self):
        rng = np.random.default_rng(6)
        t = random_tensor(rng, (2, 3, 2), ["a", "b", "c"])
        Q, R = qr_split(t, ["a", "b"], "k")
        assert contract(Q, R, [("k", "k")]).allclose(t, atol=1e-12)

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(1, 4), min_size=2, max_size=4), st.integers(0, 10 ** 6), st.integers(1, 4))
    def test_weight_accounting(self, dims, seed, chi):
        rng = np.random.default_rng(seed)
        ids = [f"l{i}" for i in range(len(dims))]
        t = random_tensor(rng, tuple(dims), ids)
        s = singular_values(t, ids[:1])
        assert np.sum(s ** 2) == pytest.approx(t.norm() ** 2, rel=1e-10)
        U, SV, w = svd_truncate(t, ids[:1], chi)
        approx = contract(U, SV, [("bond", "bond")])
        assert (approx - t).norm() ** 2 == pytest.approx(w, rel=1e-8, abs=1e-10)
        assert U.leg("bond").dim == min(chi, len(s))


class TestSchmidtRank:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_ghz(self, k):
        assert schmidt_rank(ghz_tensor(3, k), [0]) == k

    @pytest.mark.parametrize("site", [0, 1, 2])
    def test_lambda(self, site):
        assert schmidt_rank(lambda_tensor(), [site]) == 3

    def test_mamu_vertex(self):
        assert schmidt_rank(mamu_tensor((2, 2, 2)), [0]) == 4

    def test_zero_tensor(self):
        assert schmidt_rank(DenseTensor.zeros([Leg("a", 2), Leg("b", 2)]), ["a"]) == 0

    @settings(max_examples=25, deadline=None)
    @given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
    def test_invariant_under_invertible_maps(self, m, n, r, seed):
        rng = np.random.default_rng(seed)
        low = rng.normal(size=(m, r)) @ rng.normal(size=(r, n))
        t = DenseTensor.from_array(low, ["a", "b"])
        g = rng.normal(size=(m, m)) + 3 * np.eye(m)
        assert schmidt_rank(apply_local_map(t, "a", g), ["a"]) == schmidt_rank(t, ["a"]) == min(m, n, r)


class TestInnerProduct:
    def test_ghz_norm(self):
        assert inner_product(ghz_tensor(3, 2), ghz_tensor(3, 2)) == pytest.approx(2)

    def test_lambda_norm(self):
        assert inner_product(lambda_tensor(), lambda_tensor()) == pytest.approx(7)

    def test_conjugate_linear(self):
        rng = np.random.default_rng(7)
        a, b = random_tensor(rng, (2, 2), ["a", "b"]), random_tensor(rng, (2, 2), ["a", "b"])
        assert inner_product(a * 1j, b) == pytest.approx(-1j * inner_product(a, b))
        assert norm(a) ** 2 == pytest.approx(inner_product(a, a).real)

    def test_outer(self):
        a = DenseTensor.from_array(np.array([1, 2]), ["a"])
        b = DenseTensor.from_array(np.array([3, 4]), ["b"])
        assert np.allclose(outer(a, b).data, [[3, 4], [6, 8]])


class TestMatrixPoly:
    def test_evaluation(self):
        p = MatrixPoly({0: np.eye(2), 2: np.ones((2, 2))})
        assert np.allclose(p(0.5), np.eye(2) + 0.25)
        assert p.min_exponent == 0 and p.max_exponent == 2

    def test_drops_zero_terms(self):
        p = MatrixPoly({0: np.eye(2), 1: np.zeros((2, 2))})
        assert list(p.terms) == [0]

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            MatrixPoly({0: np.eye(2), 1: np.eye(3)})

    def test_product_and_kron(self):
        a = MatrixPoly.monomial(np.array([[1.0, 2.0]]), 1)
        b = MatrixPoly({0: np.array([[1.0], [0.0]]), 1: np.array([[0.0], [1.0]])})
        assert np.allclose((a @ b)(0.3), a(0.3) @ b(0.3))
        assert np.allclose(a.kron(b)(0.3), np.kron(a(0.3), b(0.3)))

    def test_diagonal_monomials(self):
        p = MatrixPoly.diagonal_monomials([0, 2, 1])
        assert np.allclose(p(2.0), np.diag([1, 4, 2]))


class TestPolyApply:
    def test_constant_maps(self):
        t = lambda_tensor()
        maps = {0: MatrixPoly.constant(np.eye(3) * 2)}
        poly = poly_apply(t, maps)
        assert poly.exponents == [0]
        assert poly.term(0).allclose(t * 2)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 10 ** 6), st.floats(0.05, 2.0))
    def test_matches_numeric_evaluation(self, seed, eps):
        rng = np.random.default_rng(seed)
        t = random_tensor(rng, (2, 3), ["a", "b"])
        maps = {
            "a": MatrixPoly({0: rng.normal(size=(2, 2)), 2: rng.normal(size=(2, 2))}),
            "b": MatrixPoly({1: rng.normal(size=(2, 3)), 3: rng.normal(size=(2, 3))}),
        }
        poly = poly_apply(t, maps)
        direct = apply_local_maps(t, {k: m(eps) for k, m in maps.items()})
        assert poly.evaluate(eps).allclose(direct, atol=1e-12 * max(1.0, direct.norm()))

    def test_budget(self):
        t = ghz_tensor(6, 3)
        maps = {p: MatrixPoly({k: np.eye(3) for k in range(4)}) for p in range(6)}
        with pytest.raises(MemoryError):
            poly_apply(t, maps, budget=100)

    def test_polytensor_signature(self):
        a = DenseTensor.zeros([Leg("a", 2)]) + DenseTensor.from_array(np.ones(2), ["a"])
        b = DenseTensor.from_array(np.ones(3), ["a"])
        with pytest.raises(ValueError):
            PolyTensor({0: a, 1: b})
