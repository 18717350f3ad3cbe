"""
Tests for cones, membership and the T-set oracles.
"""

import json
from math import pi

import numpy as np
import pytest

from totalpos.cones import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    BasicCone,
    ExteriorBasicCone,
    IceCreamCone,
    SpannedCone,
    TVerdict,
    adjoint,
    classify_points,
    cone_from_json,
    cone_to_json,
    contains,
    max_angle,
    same_cone,
    sample_cone,
    t_chain_membership,
    t_membership,
)
from totalpos.errors import InputError
from totalpos.exterior import MultiVector, apply_compound, compound, wedge
from totalpos.generators import rotation3
from totalpos.signs import Membership, m_membership


@pytest.fixture
def all_cones():
    return [
        BasicCone((1, -1, 1)),
        ExteriorBasicCone(4, 2, (1, 1, -1, 1, -1, 1)),
        SpannedCone(((1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (1.0, 1.0, 1.0))),
        IceCreamCone(3, 3),
    ]


class TestConeTypes:

    def test_basic_membership(self):
        K = BasicCone((1, -1, 1))
        assert contains(K, [1, -2, 3]) is Membership.INTERIOR
        assert contains(K, [1, 0, 3]) is Membership.BOUNDARY
        assert contains(K, [1, 2, 3]) is Membership.OUTSIDE

    def test_spanned_membership(self):
        K = SpannedCone(((1.0, 0.0), (1.0, 1.0)))
        assert contains(K, [2, 1]) is Membership.INTERIOR
        assert contains(K, [1, 0]) is Membership.BOUNDARY
        assert contains(K, [0, 1]) is Membership.OUTSIDE

    def test_icecream_membership(self):
        K = IceCreamCone(3, 3)
        assert contains(K, [0.3, 0.4, 1.0]) is Membership.INTERIOR
        assert contains(K, [3.0, 4.0, 5.0]) is Membership.BOUNDARY
        assert contains(K, [3.0, 4.0, 4.9]) is Membership.OUTSIDE

    def test_exterior_positive(self):
        K = ExteriorBasicCone.positive(4, 2)
        assert K.dim == 6 and K.uniform
        assert not ExteriorBasicCone(3, 2, (1, -1, 1)).uniform

    def test_classify_points_vectorised(self):
        K = BasicCone((1, 1))
        codes = classify_points(K, [[1, 1], [0, 1], [-1, 1]])
        assert codes.tolist() == [INTERIOR, BOUNDARY, OUTSIDE]

    @pytest.mark.parametrize("bad", [
        lambda: BasicCone((1, 0)),
        lambda: BasicCone(()),
        lambda: ExteriorBasicCone(3, 2, (1, 1)),
        lambda: ExteriorBasicCone(3, 4, (1,)),
        lambda: SpannedCone(((1.0, 2.0), (2.0, 4.0))),
        lambda: IceCreamCone(3, 4),
    ])
    def test_invalid_cones(self, bad):
        with pytest.raises(InputError):
            bad()

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            contains(BasicCone((1, 1)), [1.0, 2.0, 3.0])

    def test_samples_lie_in_cone(self, all_cones):
        rng = np.random.default_rng(0)
        for K in all_cones:
            points = sample_cone(K, 500, rng)
            codes = classify_points(K, points)
            assert points.shape == (500, K.dim)
            assert np.all(codes != OUTSIDE), K
            # faces are part of the sample
            assert np.any(codes == BOUNDARY), K


class TestRotationInvariance:

    @pytest.mark.parametrize("theta", [pi / 6, pi / 4, pi / 3])
    def test_rotation_preserves_icecream(self, theta):
        K = IceCreamCone(3, 3)
        points = sample_cone(K, 1000, np.random.default_rng(7))
        before = classify_points(K, points)
        after = classify_points(K, points @ rotation3(theta).T)
        assert np.all(after != OUTSIDE)
        assert np.array_equal(after, before)

    @pytest.mark.parametrize("theta", [pi / 6, pi / 4, pi / 3])
    def test_second_compound_preserves_grade_two_icecream(self, theta):
        # the cone around e1^e2, the first wedge coordinate
        K = IceCreamCone(3, 1)
        C = compound(rotation3(theta), 2)
        points = sample_cone(K, 1000, np.random.default_rng(8))
        images = np.array([apply_compound(C, MultiVector(3, 2, p)).coords for p in points])
        assert np.all(classify_points(K, images) != OUTSIDE)
        assert np.array_equal(classify_points(K, images), classify_points(K, points))


class TestSerialization:

    def test_round_trip(self, all_cones):
        for K in all_cones:
            text = json.dumps(cone_to_json(K))
            assert same_cone(cone_from_json(text), K)

    @pytest.mark.parametrize("spec", [
        '{"type": "cylinder"}',
        '{"type": "basic"}',
        '{"type": "icecream", "n": 3}',
        '{"type": "icecream", "n": "three", "axis": 1}',
        '{"type": "spanned", "generators": 5}',
        "[1, 2]",
        "not json",
    ])
    def test_malformed(self, spec):
        with pytest.raises(InputError):
            cone_from_json(spec)


class TestAdjointAndAngle:

    def test_self_dual(self, all_cones):
        for K in all_cones:
            if not isinstance(K, SpannedCone):
                assert adjoint(K) == K

    def test_spanned_dual(self):
        K = SpannedCone(((1.0, 0.0), (1.0, 1.0)))
        dual = adjoint(K)
        expected = SpannedCone(((0.0, 1.0), (1.0, -1.0)))
        assert same_cone(dual, expected)
        assert same_cone(adjoint(dual), K)

    def test_dual_pairing_nonnegative(self):
        K = SpannedCone(((2.0, 1.0, 0.0), (0.0, 1.0, 1.0), (1.0, 0.0, 3.0)))
        rng = np.random.default_rng(1)
        x = sample_cone(K, 200, rng)
        y = sample_cone(adjoint(K), 200, rng)
        assert np.min(x @ y.T) >= -1e-12

    def test_max_angle_sample_setting(self, monkeypatch):
        import totalpos.config as config

        K = SpannedCone(((1.0, 0.0, 0.0), (1.0, 1.0, 0.0), (1.0, 1.0, 1.0)))
        monkeypatch.setattr(config, "get_settings", lambda: config.Settings(angle_samples=7, seed=3))
        assert max_angle(K) == max_angle(K, samples=7, seed=3)

    def test_max_angle(self):
        assert max_angle(BasicCone((1, 1, -1))) == (pi / 2, True)
        assert max_angle(IceCreamCone(3, 1)) == (pi / 2, True)
        assert max_angle(BasicCone((1,))) == (0.0, True)
        angle, exact = max_angle(SpannedCone(((1.0, 0.0), (1.0, 1.0))), seed=3)
        assert angle == pytest.approx(pi / 4)
        assert not exact


class TestTMembership:

    @pytest.mark.parametrize("x,verdict", [
        ((1, -1, 1), TVerdict.NOT_FOUND),
        ((1, -1, -1), TVerdict.INTERIOR),
        ((1, 0, 1), TVerdict.CLOSURE),
        ((0, 0, 0), TVerdict.CLOSURE),
    ])
    def test_exact_orthant_power(self, x, verdict):
        result = t_membership(x, ExteriorBasicCone.positive(3, 2))
        assert result.verdict is verdict
        assert result.exact

    def test_grade_one_is_union_with_negative(self):
        K = BasicCone((1, 1, 1))
        assert t_membership([-1, -2, -3], K).verdict is TVerdict.INTERIOR
        assert t_membership([0, 2, 3], K).verdict is TVerdict.CLOSURE
        assert t_membership([1, -2, 3], K).verdict is TVerdict.NOT_FOUND

    def test_grade_inference(self):
        # dimension 3 fits both grade 1 and grade 2 over R^3; the smaller wins
        K = BasicCone((1, 1, 1))
        assert t_membership([1, -1, -1], K).verdict is TVerdict.NOT_FOUND
        assert t_membership([1, -1, -1], K, grade=2).verdict is TVerdict.INTERIOR
        with pytest.raises(InputError):
            t_membership([1.0, 2.0, 3.0, 4.0], K)
        with pytest.raises(InputError):
            t_membership([1.0, 2.0, 3.0], ExteriorBasicCone.positive(4, 2))

    def test_icecream_search(self):
        K = IceCreamCone(3, 1)
        found = t_membership([1.0, 0.0, 0.0], K, grade=2, budget=2000, seed=4)
        assert found.verdict is TVerdict.INTERIOR
        assert not found.exact
        assert len(found.witness) == 1
        assert t_membership([0.0, 0.0, 1.0], K, grade=2, budget=2000, seed=4).verdict is TVerdict.NOT_FOUND

    def test_witness_is_a_valid_completion(self):
        K = ExteriorBasicCone(4, 2, (1, 1, -1, 1, -1, 1))
        x = np.array([1.0, 2.0, -1.0, 0.5])
        result = t_membership(x, K, budget=5000, seed=5)
        if result.verdict is TVerdict.INTERIOR:
            w = wedge([x / np.linalg.norm(x), np.array(result.witness[0])]).coords
            assert contains(K, w) is Membership.INTERIOR or contains(K, -w) is Membership.INTERIOR

    @pytest.mark.parametrize("n,j", [(4, 2), (4, 3)])
    def test_search_agrees_with_exact(self, n, j):
        """Random search never claims interior wrongly and finds almost every interior point."""
        rng = np.random.default_rng(10 + j)
        K = ExteriorBasicCone.positive(n, j)
        interior_total = interior_found = 0
        for trial in range(500):
            x = rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n)
            exact = m_membership(x, j)
            result = t_membership(x, K, force_search=True, budget=10_000, seed=trial)
            assert not result.exact
            if result.verdict is TVerdict.INTERIOR:
                assert exact is Membership.INTERIOR, x
            if exact is Membership.INTERIOR:
                interior_total += 1
                interior_found += result.verdict is TVerdict.INTERIOR
        assert interior_total > 0
        assert interior_found >= 0.99 * interior_total

    def test_deterministic_for_seed(self):
        K = IceCreamCone(3, 1)
        a = t_membership([1.0, 0.2, 0.1], K, budget=500, seed=9)
        b = t_membership([1.0, 0.2, 0.1], K, budget=500, seed=9)
        assert a == b

    def test_result_to_dict(self):
        d = t_membership([1, -1, -1], ExteriorBasicCone.positive(3, 2)).to_dict()
        assert d == {"verdict": "interior", "witness": None, "exact": True, "trials": 0}


class TestChainMembership:

    @pytest.fixture
    def mixed_chain(self):
        # K_2 is spanned by e1^e2, e3^e1 and e2^e3
        return [BasicCone((1, 1, 1)), ExteriorBasicCone(3, 2, (1, -1, 1))]

    def test_vector_with_zero_coordinate(self, mixed_chain):
        result = t_chain_membership([1.0, 1.0, 0.0], mixed_chain, budget=2000, seed=1)
        assert result.verdict is TVerdict.CLOSURE
        assert result.witness is not None

    def test_positive_vector_not_found(self, mixed_chain):
        result = t_chain_membership([1.0, 1.0, 1.0], mixed_chain, budget=2000, seed=1)
        assert result.verdict is TVerdict.NOT_FOUND
        assert not result.exact

    @pytest.mark.parametrize("x", [(1.0, 1.0, 1.0), (1.0, 2.0, 3.0), (5.0, 1.0, 2.0), (-1.0, -3.0, -2.0)])
    def test_chain_through_interior_cone_is_empty(self, x):
        # K_1 inside the open orthant leaves no vector for the chain
        chain = [
            SpannedCone(((3.0, 1.0, 1.0), (1.0, 3.0, 1.0), (1.0, 1.0, 3.0))),
            ExteriorBasicCone(3, 2, (1, -1, 1)),
        ]
        result = t_chain_membership(x, chain, budget=2000, seed=2)
        assert result.verdict is TVerdict.NOT_FOUND
        assert result.witness is None

    def test_mixed_sign_vector_reaches_closure(self, mixed_chain):
        # x ^ e1 = (1, -3, 0) lies on the boundary of K_2
        result = t_chain_membership([2.0, -1.0, 3.0], mixed_chain, budget=2000, seed=1)
        assert result.verdict is TVerdict.CLOSURE

    def test_uniform_chain_is_exact(self):
        chain = [BasicCone((1, 1, 1)), ExteriorBasicCone.positive(3, 2)]
        assert t_chain_membership([1, -1, -1], chain).verdict is TVerdict.INTERIOR
        assert t_chain_membership([1, -1, 1], chain).verdict is TVerdict.NOT_FOUND

    def test_single_cone_chain(self):
        result = t_chain_membership([2.0, 1.0], [BasicCone((1, 1))])
        assert result.verdict is TVerdict.INTERIOR and result.exact

    def test_chain_validation(self):
        with pytest.raises(InputError):
            t_chain_membership([1.0, 1.0, 1.0], [])
        with pytest.raises(InputError):
            t_chain_membership([1.0, 1.0, 1.0], [ExteriorBasicCone.positive(3, 2), BasicCone((1, 1, 1))])


class TestConeInvariants:

    @pytest.mark.parametrize("alpha", [0.5, 3.0, 1e3])
    def test_contains_is_homogeneous(self, all_cones, alpha):
        rng = np.random.default_rng(12)
        for K in all_cones:
            points = np.vstack([sample_cone(K, 300, rng), rng.standard_normal((300, K.dim))])
            assert np.array_equal(classify_points(K, alpha * points), classify_points(K, points)), K

    @pytest.mark.parametrize("alpha", [2.0, 0.5, -1.0, -2.0])
    def test_t_membership_is_homogeneous(self, alpha):
        cases = [
            ([1.0, -1.0, -1.0], ExteriorBasicCone.positive(3, 2)),
            ([1.0, 0.0, 1.0], ExteriorBasicCone.positive(3, 2)),
            ([1.0, 2.0, -1.0, 0.5], ExteriorBasicCone(4, 2, (1, 1, -1, 1, -1, 1))),
            ([1.0, 0.2, 0.1], IceCreamCone(3, 1)),
            ([0.0, 0.0, 1.0], IceCreamCone(3, 1)),
        ]
        for x, K in cases:
            grade = 2 if isinstance(K, IceCreamCone) else None
            base = t_membership(x, K, grade=grade, budget=1000, seed=6)
            scaled = t_membership(alpha * np.array(x), K, grade=grade, budget=1000, seed=6)
            assert scaled.verdict is base.verdict, (x, K)

    def test_interior_survives_perturbation(self):
        rng = np.random.default_rng(13)
        K = ExteriorBasicCone.positive(4, 2)
        x = np.array([1.0, 2.0, -1.0, -3.0])
        assert t_membership(x, K).verdict is TVerdict.INTERIOR
        for _ in range(200):
            delta = 1e-4 * rng.standard_normal(4)
            assert t_membership(x + delta, K).verdict is not TVerdict.NOT_FOUND

        ice = IceCreamCone(3, 1)
        y = np.array([1.0, 0.0, 0.0])
        assert t_membership(y, ice, grade=2, budget=2000, seed=4).verdict is TVerdict.INTERIOR
        for _ in range(10):
            delta = 1e-6 * rng.standard_normal(3)
            assert t_membership(y + delta, ice, grade=2, budget=2000, seed=4).verdict is not TVerdict.NOT_FOUND

    @pytest.mark.parametrize("n,j", [(4, 2), (5, 2), (5, 3), (6, 4)])
    def test_rank_ceiling(self, n, j):
        """Every (j+1)-dimensional subspace leaves T of the j-th orthant power."""
        rng = np.random.default_rng(100 * n + j)
        K = ExteriorBasicCone.positive(n, j)
        alternating = np.array([(-1.0) ** i for i in range(j + 1)])
        for _ in range(20):
            basis = rng.standard_normal((n, j + 1))
            # the combination alternating in sign on the first j+1 coordinates
            x = basis @ np.linalg.solve(basis[: j + 1], alternating)
            assert m_membership(x, j) is Membership.OUTSIDE
            assert t_membership(x, K).verdict is TVerdict.NOT_FOUND

    def test_chain_inclusion(self):
        """Vectors of T(K_1, K_2) are in T(K_2)."""
        chain = [BasicCone((1, 1, 1)), ExteriorBasicCone(3, 2, (1, -1, 1))]
        vectors = [
            (2.0, -1.0, 3.0), (1.0, -1.0, 1.0), (-1.0, 2.0, 1.0),
            (1.0, 1.0, -1.0), (3.0, -2.0, -1.0), (1.0, 2.0, 3.0),
        ]
        reached = 0
        for x in vectors:
            in_chain = t_chain_membership(x, chain, budget=1000, seed=3)
            if in_chain.verdict is TVerdict.NOT_FOUND:
                continue
            reached += 1
            assert t_membership(x, chain[-1], budget=2000, seed=3).verdict is not TVerdict.NOT_FOUND, x
        assert reached > 0
