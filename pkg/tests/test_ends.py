import random
from typing import Hashable, List

import networkx as nx
import pytest

from dessinator.ends import (
    EndsClass,
    FreeAbelianOracle,
    FreeProductOracle,
    GroupOracle,
    annulus_profile,
    builtin_oracles,
    cayley_ball,
    ends_estimate,
    parse_oracle,
)
from dessinator.exceptions import CapExceededError, DessinatorError

EXPECTED = {
    "Z": EndsClass.TWO,
    "Z^2": EndsClass.ONE,
    "Z6": EndsClass.ZERO,
    "F2": EndsClass.INFINITELY_MANY,
    "Z2*Z2": EndsClass.TWO,
    "Z2*Z3": EndsClass.INFINITELY_MANY,
}


class Cyclic(GroupOracle):
    """``Z/n`` written as residues, a user supplied oracle."""

    def __init__(self, n: int) -> None:
        super().__init__(f"C{n}")
        self.n = n

    @property
    def generators(self) -> List[Hashable]:
        return [1, self.n - 1]

    def identity(self) -> Hashable:
        return 0

    def multiply(self, element: Hashable, generator: Hashable) -> Hashable:
        return (element + generator) % self.n  # type: ignore[operator]


class TestOracles:
    def test_parse(self) -> None:
        assert isinstance(parse_oracle("Z"), FreeAbelianOracle)
        assert isinstance(parse_oracle("Z^3"), FreeAbelianOracle)
        assert isinstance(parse_oracle("F3"), FreeProductOracle)
        assert isinstance(parse_oracle("Z_2 * Z_3"), FreeProductOracle)
        assert parse_oracle("Z{2,3}").generators == [(2,), (-2,), (3,), (-3,)]

    @pytest.mark.parametrize("name", ["Q", "Z^", "Z2+Z3", "Z0"])
    def test_parse_rejects(self, name: str) -> None:
        with pytest.raises(DessinatorError):
            parse_oracle(name)

    def test_generator_counts(self) -> None:
        assert [len(o.generators) for o in builtin_oracles()] == [2, 4, 2, 4, 2, 3]
        assert [o.name for o in builtin_oracles()] == list(EXPECTED)

    def test_free_product_normal_forms(self) -> None:
        o = parse_oracle("Z2*Z3")
        a, b = ((0, 1),), ((1, 1),)
        assert o.multiply(o.multiply(o.identity(), a), a) == ()
        assert o.multiply(o.multiply(b, b), b) == ()
        assert o.multiply(a, b) == ((0, 1), (1, 1))

    def test_inverse_pairs_cancel(self, rng: random.Random) -> None:
        for o in builtin_oracles():
            generators = o.generators
            for _ in range(20):
                element = o.identity()
                for _ in range(rng.randint(0, 10)):
                    element = o.multiply(element, rng.choice(generators))
                for g in generators:
                    assert any(o.multiply(o.multiply(element, g), h) == element for h in generators)

    def test_invalid(self) -> None:
        with pytest.raises(DessinatorError):
            FreeAbelianOracle(0)
        with pytest.raises(DessinatorError):
            FreeAbelianOracle(2, [(1,)])
        with pytest.raises(DessinatorError):
            FreeProductOracle([])


class TestCayleyBall:
    def test_line(self) -> None:
        ball = cayley_ball(parse_oracle("Z"), 3)
        assert ball.number_of_nodes() == 7
        assert nx.is_isomorphic(ball, nx.path_graph(7))

    @pytest.mark.parametrize("r", range(9))
    def test_closed_forms(self, r: int) -> None:
        assert cayley_ball(parse_oracle("Z"), r).number_of_nodes() == 2 * r + 1
        assert cayley_ball(parse_oracle("Z^2"), r).number_of_nodes() == 2 * r * r + 2 * r + 1
        assert cayley_ball(parse_oracle("F2"), r).number_of_nodes() == 1 + 2 * (3**r - 1)

    def test_distances(self) -> None:
        ball = cayley_ball(parse_oracle("Z^2"), 2)
        assert ball.nodes[(1, 1)]["distance"] == 2
        assert ball.nodes[(0, 0)]["distance"] == 0

    def test_cap(self) -> None:
        with pytest.raises(CapExceededError):
            cayley_ball(parse_oracle("F2"), 6, cap=100)

    def test_negative_radius(self) -> None:
        with pytest.raises(DessinatorError):
            cayley_ball(parse_oracle("Z"), -1)


class TestAnnulus:
    def test_free_group_counts(self) -> None:
        o = parse_oracle("F2")
        for outer in range(2, 9):
            ball = cayley_ball(o, outer)
            for inner in range(1, outer):
                assert annulus_profile(o, inner, outer, ball).component_count == 4 * 3 ** (inner - 1)

    def test_abelian_counts(self) -> None:
        for name, count in (("Z", 2), ("Z^2", 1)):
            o = parse_oracle(name)
            assert all(annulus_profile(o, r, 6).component_count == count for r in range(1, 6))

    def test_sizes(self) -> None:
        profile = annulus_profile(parse_oracle("Z"), 1, 3)
        assert profile.ball_sizes == [1, 3, 5, 7]
        assert profile.sphere_sizes == [1, 2, 2, 2]

    def test_bad_radii(self) -> None:
        with pytest.raises(DessinatorError):
            annulus_profile(parse_oracle("Z"), 4, 3)


class TestEndsEstimate:
    @pytest.mark.parametrize("r_max", [4, 5, 6, 7, 8])
    def test_builtin_battery(self, r_max: int) -> None:
        for o in builtin_oracles():
            assert ends_estimate(o, r_max).classification is EXPECTED[o.name]

    @pytest.mark.parametrize("r_max", [6, 7, 8])
    def test_generating_set_does_not_matter(self, r_max: int) -> None:
        other = ends_estimate(parse_oracle("Z{2,3}"), r_max)
        assert other.classification is ends_estimate(parse_oracle("Z"), r_max).classification
        assert other.component_counts[:2] == [1, 1]

    def test_profile_ladder(self) -> None:
        estimate = ends_estimate(parse_oracle("F2"), 5)
        assert [p.inner_radius for p in estimate.profiles] == [1, 2, 3, 4]
        assert estimate.component_counts == [4, 12, 36, 108]
        assert estimate.sphere_sizes == [1, 4, 12, 36, 108, 324]

    def test_finite_group(self) -> None:
        estimate = ends_estimate(Cyclic(5), 4)
        assert estimate.classification is EndsClass.ZERO
        assert estimate.profiles == []
        assert "closes" in estimate.diagnostic

    def test_cap_is_inconclusive(self) -> None:
        estimate = ends_estimate(parse_oracle("F2"), 8, cap=100)
        assert estimate.classification is EndsClass.INCONCLUSIVE
        assert estimate.profiles == []
        assert "cap 100" in estimate.diagnostic

    def test_short_ladder_is_inconclusive(self) -> None:
        assert ends_estimate(parse_oracle("Z{2,3}"), 4).classification is EndsClass.INCONCLUSIVE
