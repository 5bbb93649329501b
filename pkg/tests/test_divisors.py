import random

import pytest

from graphdivisors import (
    Divisor,
    EnumerationCapExceededError,
    GraphMismatchError,
    MissingVertexValueError,
    UnknownVertexError,
    VertexFunction,
    canonical_divisor,
    generate,
    genus,
    is_q_reduced,
    laplacian_apply,
    linear_system,
    linearly_equivalent,
    q_reduce,
    q_reduce_with_witness,
    rank,
    set_strict_validation,
)

import oracles


@pytest.fixture(scope="module", autouse=True)
def strict_reduction_checks():
    # re-check every reduction against the subset definition in this module
    set_strict_validation(True)
    yield
    set_strict_validation(False)


@pytest.fixture(scope="module")
def k4():
    return generate("complete:4")


@pytest.fixture(scope="module")
def w5():
    return generate("wheel:5")


@pytest.fixture(scope="module")
def house4():
    return generate("house4")


class TestDivisorValues:
    def test_mapping_construction_defaults_to_zero(self, k4):
        d = Divisor(k4, {"P1": 3, "P3": -1})
        assert d["P1"] == 3
        assert d["P2"] == 0
        assert d["P3"] == -1
        assert d.degree == 2
        assert d.support == ("P1", "P3")

    def test_unknown_vertex_rejected(self, k4):
        with pytest.raises(UnknownVertexError, match="P9"):
            Divisor(k4, {"P9": 1})

    def test_arithmetic(self, k4):
        d = Divisor(k4, {"P1": 2})
        e = Divisor.vertex(k4, "P2")
        assert (d + e).as_dict() == {"P1": 2, "P2": 1, "P3": 0, "P4": 0}
        assert (d - e)["P2"] == -1
        assert (-d)["P1"] == -2
        assert (3 * e)["P2"] == 3

    def test_mixing_graphs_rejected(self, k4, w5):
        with pytest.raises(GraphMismatchError):
            Divisor.all_ones(k4) + Divisor.all_ones(w5)

    def test_effective_partial_order(self, k4):
        assert Divisor.all_ones(k4) >= Divisor.zero(k4)
        assert not Divisor(k4, {"P1": -1}) >= Divisor.zero(k4)
        assert Divisor(k4, {"P1": -1}).is_effective is False

    def test_text_format(self, k4):
        assert str(Divisor(k4, {"P1": 3, "P2": -1})) == "3·P1 - 1·P2"
        assert str(Divisor.zero(k4)) == "0"
        assert str(Divisor(k4, {"P2": -2, "P4": 5})) == "-2·P2 + 5·P4"

    def test_json_round_trip(self, k4):
        d = Divisor(k4, {"P1": 3, "P2": -1})
        assert Divisor.from_json(k4, d.to_json()) == d
        assert d.to_json() == {"P1": 3, "P2": -1}


class TestVertexFunction:
    def test_total_mapping_required(self, k4):
        with pytest.raises(MissingVertexValueError, match="P4"):
            VertexFunction(k4, {"P1": 1, "P2": 0, "P3": 0})

    def test_indicator(self, k4):
        f = VertexFunction.indicator(k4, "P2")
        assert f["P2"] == 1 and f["P1"] == 0


class TestLaplacian:
    def test_complete_indicator(self, k4):
        # indicator of P1 on K_n maps to (n-1)P1 - P2 - ... - Pn
        f = VertexFunction.indicator(k4, "P1")
        assert laplacian_apply(k4, f) == Divisor(k4, {"P1": 3, "P2": -1, "P3": -1, "P4": -1})

    def test_wheel_indicator_rim(self, w5):
        f = VertexFunction.indicator(w5, "P2")
        assert laplacian_apply(w5, f) == Divisor(w5, {"P1": -1, "P2": 3, "P3": -1, "P5": -1})

    def test_constant_is_zero(self, w5):
        assert laplacian_apply(w5, VertexFunction.constant(w5, 7)) == Divisor.zero(w5)

    def test_accepts_plain_mapping(self, k4):
        assert laplacian_apply(k4, {"P1": 1, "P2": 0, "P3": 0, "P4": 0})[
            "P1"
        ] == 3

    def test_partial_mapping_rejected(self, k4):
        with pytest.raises(MissingVertexValueError):
            laplacian_apply(k4, {"P1": 1})

    def test_degree_zero_always(self, w5):
        rng = random.Random(7)
        for _ in range(25):
            f = VertexFunction.from_values(w5, [rng.randint(-5, 5) for _ in range(5)])
            assert laplacian_apply(w5, f).degree == 0

    def test_matches_matrix_oracle(self, house4):
        rng = random.Random(11)
        L = oracles.laplacian_matrix(house4)
        for _ in range(20):
            vals = [rng.randint(-4, 4) for _ in range(4)]
            via_matrix = [sum(L[i][j] * vals[j] for j in range(4)) for i in range(4)]
            f = VertexFunction.from_values(house4, vals)
            assert list(laplacian_apply(house4, f).coeffs) == via_matrix


class TestIsQReduced:
    def test_single_vertex_divisor_reduced(self, house4):
        # on a bridgeless graph, a vertex divisor is reduced at any other base
        for p in house4.vertices:
            for q in house4.vertices:
                if p != q:
                    assert is_q_reduced(house4, Divisor.vertex(house4, p), q)

    def test_negative_off_base_not_reduced(self, k4):
        assert not is_q_reduced(k4, Divisor(k4, {"P2": -1}), "P1")

    def test_all_ones_on_k4_not_reduced(self, k4):
        # S = {P2,P3,P4} has outdeg 1 at each vertex, never above the coefficient
        assert not is_q_reduced(k4, Divisor.all_ones(k4), "P1")

    def test_unknown_base_rejected(self, k4):
        with pytest.raises(UnknownVertexError):
            is_q_reduced(k4, Divisor.zero(k4), "Q7")


class TestQReduce:
    def test_k4_all_ones(self, k4):
        assert q_reduce(k4, Divisor.all_ones(k4), "P1") == Divisor(k4, {"P1": 4})

    def test_w5_all_ones_at_rim(self, w5):
        assert q_reduce(w5, Divisor.all_ones(w5), "P2") == Divisor(w5, {"P2": 4, "P4": 1})

    def test_idempotent(self, house4):
        rng = random.Random(3)
        for _ in range(30):
            d = oracles.random_divisor(rng, house4)
            q = rng.choice(house4.vertices)
            r = q_reduce(house4, d, q)
            assert q_reduce(house4, r, q) == r

    def test_witness_reproduces_reduction(self, w5):
        rng = random.Random(5)
        for _ in range(30):
            d = oracles.random_divisor(rng, w5)
            q = rng.choice(w5.vertices)
            reduced, witness = q_reduce_with_witness(w5, d, q)
            assert d + laplacian_apply(w5, witness) == reduced

    def test_preserves_degree_and_class(self, w5):
        rng = random.Random(9)
        for _ in range(20):
            d = oracles.random_divisor(rng, w5)
            r = q_reduce(w5, d, "P3")
            assert r.degree == d.degree
            assert oracles.equivalent(w5, d, r)

    def test_equivalent_inputs_reduce_identically(self, house4):
        rng = random.Random(13)
        for _ in range(30):
            d = oracles.random_divisor(rng, house4)
            f = VertexFunction.from_values(house4, [rng.randint(-2, 2) for _ in range(4)])
            d2 = d + laplacian_apply(house4, f)
            q = rng.choice(house4.vertices)
            assert q_reduce(house4, d, q) == q_reduce(house4, d2, q)

    def test_deep_debt_cleared(self, w5):
        d = Divisor(w5, {"P1": 40, "P4": -9})
        r = q_reduce(w5, d, "P1")
        assert is_q_reduced(w5, r, "P1")
        assert r.degree == d.degree


class TestLinearEquivalence:
    def test_all_ones_equivalent_to_stack(self, k4):
        assert linearly_equivalent(k4, Divisor.all_ones(k4), Divisor(k4, {"P1": 4}))

    def test_distinct_vertices_inequivalent(self, house4):
        for p in house4.vertices:
            for q in house4.vertices:
                if p != q:
                    assert not linearly_equivalent(
                        house4, Divisor.vertex(house4, p), Divisor.vertex(house4, q)
                    )

    def test_reflexive(self, w5):
        d = Divisor(w5, {"P2": 3, "P5": -1})
        assert linearly_equivalent(w5, d, d)

    def test_matches_lattice_oracle(self):
        rng = random.Random(21)
        for _ in range(40):
            g = oracles.random_connected_graph(rng, rng.randint(2, 5))
            d1 = oracles.random_divisor(rng, g)
            d2 = oracles.random_divisor(rng, g)
            assert linearly_equivalent(g, d1, d2) == oracles.equivalent(g, d1, d2)


class TestLinearSystem:
    def test_key_emptiness_on_complete_graphs(self):
        # (n-2)P1 - P2 has an empty system on K_n
        for n in (4, 5, 6):
            g = generate(f"complete:{n}")
            d = Divisor(g, {"P1": n - 2, "P2": -1})
            assert linear_system(g, d) == frozenset()

    def test_zero_divisor(self, w5):
        assert linear_system(w5, Divisor.zero(w5)) == {Divisor.zero(w5)}

    def test_negative_degree_empty(self, k4):
        assert linear_system(k4, Divisor(k4, {"P1": -1})) == frozenset()

    def test_k4_punctured_system_exact(self, k4):
        d = Divisor.all_ones(k4) - Divisor.vertex(k4, "P1")
        assert linear_system(k4, d) == {
            Divisor(k4, {"P2": 1, "P3": 1, "P4": 1}),
            Divisor(k4, {"P1": 3}),
        }

    def test_matches_brute_oracle(self):
        rng = random.Random(31)
        for _ in range(15):
            g = oracles.random_connected_graph(rng, rng.randint(2, 4))
            d = oracles.random_divisor(rng, g, lo=-2, hi=4)
            assert linear_system(g, d) == oracles.linear_system_brute(g, d)

    def test_cap_refuses_large_enumeration(self, k4):
        with pytest.raises(EnumerationCapExceededError) as exc:
            linear_system(k4, Divisor(k4, {"P1": 10}), cap=5)
        assert exc.value.required == 286  # C(13,3)
        assert exc.value.cap == 5


class TestRank:
    def test_negative_degree(self, k4):
        assert rank(k4, Divisor(k4, {"P1": -1})) == -1

    def test_zero_divisor_rank_zero(self, house4):
        assert rank(house4, Divisor.zero(house4)) == 0

    def test_complete_graph_values(self):
        for n in (4, 5):
            g = generate(f"complete:{n}")
            d = Divisor.all_ones(g)
            assert rank(g, d) == 2
            assert rank(g, d - Divisor.vertex(g, "P2")) == 1
            assert rank(g, d - 2 * Divisor.vertex(g, "P1")) == 0
            assert rank(g, d - Divisor.vertex(g, "P1") - Divisor.vertex(g, "P3")) == 0

    def test_wheel_rank_two(self, w5):
        assert rank(w5, Divisor.all_ones(w5)) == 2

    def test_house4_values(self, house4):
        d = Divisor.all_ones(house4)
        assert rank(house4, d) == 2
        assert rank(house4, canonical_divisor(house4)) == 1

    def test_cycle_all_ones(self):
        g = generate("cycle:4")
        assert rank(g, Divisor.all_ones(g)) == 3

    def test_matches_brute_oracle(self):
        rng = random.Random(41)
        for _ in range(12):
            g = oracles.random_connected_graph(rng, rng.randint(2, 4))
            d = oracles.random_divisor(rng, g, lo=-2, hi=4)
            assert rank(g, d) == oracles.rank_brute(g, d)

    def test_negative_rank_iff_empty_system(self):
        rng = random.Random(43)
        for _ in range(20):
            g = oracles.random_connected_graph(rng, rng.randint(2, 4))
            d = oracles.random_divisor(rng, g, lo=-2, hi=3)
            assert (rank(g, d) == -1) == (linear_system(g, d) == frozenset())

    def test_cap_raises(self, k4):
        with pytest.raises(EnumerationCapExceededError):
            rank(k4, Divisor(k4, {"P1": 30}), cap=10)


class TestSystemNonemptinessCharacterization:
    def test_sign_at_base_matches_search(self):
        # nonempty system iff the reduced form is nonnegative at the base,
        # for every base vertex; cross-checked against the lattice search
        rng = random.Random(51)
        for _ in range(25):
            g = oracles.random_connected_graph(rng, rng.randint(2, 4))
            d = oracles.random_divisor(rng, g, lo=-3, hi=4)
            expected = oracles.system_nonempty(g, d)
            for q in g.vertices:
                reduced = q_reduce(g, d, q)
                assert (reduced[q] >= 0) == expected


class TestRiemannRochIdentity:
    def test_house4(self, house4):
        d = Divisor.all_ones(house4)
        k = canonical_divisor(house4)
        assert rank(house4, d) - rank(house4, k - d) == d.degree + 1 - genus(house4)

    def test_zero_divisor_forces_canonical_rank(self):
        for fam in ("complete:4", "wheel:5", "house4", "cycle:5"):
            g = generate(fam)
            k = canonical_divisor(g)
            assert rank(g, Divisor.zero(g)) == 0
            assert rank(g, k) == genus(g) - 1
