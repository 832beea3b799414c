import cmath
import math
import random

import pytest

from dessinator.exceptions import BranchDataError, DessinatorError, EvaluationOverflowError
from dessinator.permcore import Perm
from dessinator.superelliptic import (
    BranchData,
    TruncatedProduct,
    affine_equivalent,
    canonical_degree,
    cosine_fixture,
    evaluate_truncated,
    genus_formula,
    genus_one_degree,
    local_monodromy,
    monodromy_data,
    riemann_hurwitz,
    sine_fixture,
)

SINE_POINTS = [0.25, 0.5, 1.5, -0.75, 1.9]
COSINE_POINTS = [0.25, 0.3, 1.2, -0.75, 1.9]


class TestGenus:
    @pytest.mark.parametrize("n, d, g", [(2, 3, 2), (2, 1, 0), (3, 2, 4), (4, 1, 3)])
    def test_formula(self, n: int, d: int, g: int) -> None:
        assert genus_formula(n, d) == g

    @pytest.mark.parametrize("n", range(2, 7))
    @pytest.mark.parametrize("d", range(1, 7))
    def test_agrees_with_riemann_hurwitz(self, n: int, d: int) -> None:
        assert riemann_hurwitz(BranchData.simple(n, d * n)) == genus_formula(n, d)

    @pytest.mark.parametrize("n, d", [(1, 3), (0, 1), (2, 0), (3, -1)])
    def test_out_of_range(self, n: int, d: int) -> None:
        with pytest.raises(BranchDataError):
            genus_formula(n, d)

    def test_multiple_roots(self) -> None:
        # w^3 = (z - 1)^2 (z - 2): both points fully ramified
        assert riemann_hurwitz(BranchData(3, (1, 2), (2, 1))) == 0

    def test_disconnected(self) -> None:
        with pytest.raises(BranchDataError, match="disconnected"):
            riemann_hurwitz(BranchData(4, (1, 2), (2, 2)))


class TestBranchData:
    def test_simple(self) -> None:
        b = BranchData.simple(3, 6)
        assert b.branch_points == tuple(complex(k) for k in range(1, 7))
        assert b.multiplicities == (1,) * 6
        assert b.degree == 6

    @pytest.mark.parametrize(
        "n, points, multiplicities, message",
        [
            (1, (1, 2), (), "at least 2"),
            (2, (1, 2, 3), (), "does not divide"),
            (2, (1, 1), (), "distinct"),
            (2, (1, 2), (1,), "multiplicities for"),
            (2, (1, 2), (0, 2), "positive"),
        ],
    )
    def test_rejects(self, n: int, points: tuple, multiplicities: tuple, message: str) -> None:
        with pytest.raises(BranchDataError, match=message):
            BranchData(n, points, multiplicities)


class TestMonodromy:
    def test_simple_points(self) -> None:
        assert monodromy_data(BranchData.simple(5, 10)) == (True, 5)

    def test_local(self) -> None:
        local = local_monodromy(BranchData(4, (1, 2, 3), (1, 1, 2)))
        shift = Perm((1, 2, 3, 0))
        assert local == [shift, shift, shift.power(2)]

    def test_disconnected(self) -> None:
        assert monodromy_data(BranchData(4, (1, 2), (2, 2))) == (False, 2)

    @pytest.mark.parametrize("n", range(2, 7))
    def test_transitive_for_simple_roots(self, n: int) -> None:
        connected, order = monodromy_data(BranchData.simple(n, 2 * n))
        assert connected
        assert order == n


class TestTruncatedProduct:
    def test_degree_rules(self) -> None:
        assert canonical_degree(5) == 5
        assert genus_one_degree(5) == 1

    def test_ordering(self) -> None:
        p = TruncatedProduct((2, -1, 1j))
        assert p.zeros == (1j, -1 + 0j, 2 + 0j)
        assert p.truncation == 3

    def test_truncation(self) -> None:
        p = TruncatedProduct((3, 1, 2), truncation=2)
        assert p.retained == [(1 + 0j, 1), (2 + 0j, 1)]

    def test_origin_rejected(self) -> None:
        with pytest.raises(BranchDataError, match="origin"):
            TruncatedProduct((0, 1))

    def test_polynomial(self) -> None:
        # d(k) = 0 is the plain polynomial (1 - z)(1 - z/2)
        p = TruncatedProduct((1, 2), degree=lambda k: 0)
        assert evaluate_truncated(p, 3) == pytest.approx(1.0)
        assert evaluate_truncated(p, 0.5) == pytest.approx(0.375)

    def test_exact_zeros(self) -> None:
        p = sine_fixture(10)
        assert evaluate_truncated(p, 3) == 0j
        assert evaluate_truncated(p, 0) == 0j

    def test_empty_product(self) -> None:
        assert evaluate_truncated(TruncatedProduct(()), 2.5) == 1

    @pytest.mark.parametrize("z", SINE_POINTS)
    def test_sine(self, z: float) -> None:
        value = evaluate_truncated(sine_fixture(10**5), z)
        reference = math.sin(math.pi * z)
        assert abs(value - reference) / abs(reference) < 1e-4

    @pytest.mark.parametrize("z", COSINE_POINTS)
    def test_cosine(self, z: float) -> None:
        value = evaluate_truncated(cosine_fixture(10**5), z)
        reference = math.cos(math.pi * z)
        assert abs(value - reference) / abs(reference) < 1e-4

    def test_complex_argument(self) -> None:
        z = 0.3 + 0.4j
        value = evaluate_truncated(sine_fixture(10**4), z)
        reference = cmath.sin(math.pi * z)
        assert abs(value - reference) / abs(reference) < 1e-3

    def test_converges(self) -> None:
        errors = [abs(evaluate_truncated(sine_fixture(n), 0.5) - 1) for n in (10, 100, 1000)]
        assert errors[0] > errors[1] > errors[2]

    def test_overflow(self) -> None:
        p = TruncatedProduct((1e-300,))
        with pytest.raises(EvaluationOverflowError, match="k=1") as info:
            evaluate_truncated(p, 1)
        assert info.value.k == 1


class TestAffineEquivalence:
    def test_examples(self) -> None:
        assert affine_equivalent([0, 1, 2], [5, 7, 9]) == (2, 5)
        assert affine_equivalent([0, 1, 2, 3], [0.5, 1.5, 2.5, 3.5]) == (1, 0.5)

    def test_self(self) -> None:
        points = [0, 1 + 1j, 3 - 2j]
        a, b = affine_equivalent(points, points)  # type: ignore[misc]
        assert a == pytest.approx(1)
        assert b == pytest.approx(0)

    def test_random_images(self, rng: random.Random) -> None:
        for _ in range(20):
            points = [complex(rng.uniform(-5, 5), rng.uniform(-5, 5)) for _ in range(rng.randint(2, 7))]
            a = complex(rng.uniform(0.5, 3), rng.uniform(-3, 3))
            b = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            images = [a * z + b for z in points]
            rng.shuffle(images)
            found = affine_equivalent(points, images)
            assert found is not None
            scale, shift = found
            for z in points:
                assert min(abs(scale * z + shift - w) for w in images) < 1e-6

    def test_not_equivalent(self) -> None:
        assert affine_equivalent([0, 1, 3], [0, 1, 2]) is None

    def test_cardinality_mismatch(self) -> None:
        assert affine_equivalent([0, 1, 2], [0, 1]) is None

    def test_invalid(self) -> None:
        with pytest.raises(DessinatorError):
            affine_equivalent([0], [1])
        with pytest.raises(DessinatorError):
            affine_equivalent([0, 1], [1, 2], tol=-1)
