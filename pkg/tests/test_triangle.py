from fractions import Fraction

import pytest

from dessinator.dessin import Dessin, classify, dessin_type, enumerate_dessins, isomorphic
from dessinator.exceptions import CapExceededError, DessinatorError
from dessinator.fpgroup import abelianization, coset_enumeration, reidemeister_schreier
from dessinator.triangle import (
    Geometry,
    TriangleType,
    aut_normalizer_crosscheck,
    dessin_to_table,
    embed_word,
    extended_embedding,
    extended_presentation,
    is_normal_regular,
    is_torsion_free_uniform,
    table_to_dessin,
    triangle_census,
    triangle_group_order,
    triangle_presentation,
)

from .conftest import perm


class TestTriangleType:
    @pytest.mark.parametrize(
        "text, geometry",
        [("2,3,7", Geometry.HYPERBOLIC), ("(3, 3, 3)", Geometry.EUCLIDEAN), ("2 3 5", Geometry.SPHERICAL)],
    )
    def test_parse_and_geometry(self, text: str, geometry: Geometry) -> None:
        assert TriangleType.parse(text).geometry is geometry

    def test_curvature(self) -> None:
        assert TriangleType(2, 3, 7).curvature == Fraction(-1, 42)
        assert TriangleType(2, 4, 4).curvature == 0

    @pytest.mark.parametrize("text", ["2,3", "a,b,c", "2,3,0"])
    def test_rejects(self, text: str) -> None:
        with pytest.raises(DessinatorError):
            TriangleType.parse(text)

    def test_str(self) -> None:
        assert str(TriangleType(2, 3, 7)) == "(2,3,7)"

    def test_presentation(self) -> None:
        assert str(triangle_presentation(TriangleType(2, 3, 4))) == "< x y | x^2 y^3 y*x*y*x*y*x*y*x >"


class TestGroupOrder:
    @pytest.mark.parametrize("t, order", [((2, 3, 3), 12), ((2, 3, 4), 24), ((2, 3, 5), 60), ((2, 2, 5), 10)])
    def test_spherical(self, t: tuple, order: int) -> None:
        assert triangle_group_order(TriangleType(*t)) == order

    @pytest.mark.parametrize("t", [(3, 3, 3), (2, 3, 7)])
    def test_infinite(self, t: tuple) -> None:
        with pytest.raises(DessinatorError, match="infinite"):
            triangle_group_order(TriangleType(*t))


class TestExtendedGroup:
    def test_embedding(self) -> None:
        assert extended_embedding() == {"x": (2, 1), "y": (1, 3)}
        assert embed_word((1,)) == (2, 1)
        assert embed_word((-1,)) == (-1, -2)
        assert embed_word((1, 2)) == (2, 1, 1, 3)

    def test_order_doubles(self) -> None:
        assert coset_enumeration(extended_presentation(TriangleType(2, 3, 3))).index == 24

    def test_rotation_subgroup_has_index_two(self) -> None:
        p = extended_presentation(TriangleType(2, 3, 5))
        table = coset_enumeration(p, [embed_word((1,)), embed_word((2,))])
        assert table.index == 2


class TestDessinTables:
    def test_torus(self, torus: Dessin) -> None:
        table = dessin_to_table(torus)
        assert table.index == 3
        assert table_to_dessin(table) == torus

    def test_relabels_from_edge_zero(self, chiral: Dessin) -> None:
        d = table_to_dessin(dessin_to_table(chiral))
        assert isomorphic(d, chiral) is not None

    @pytest.mark.parametrize("m", range(1, 7))
    def test_census_round_trip(self, m: int) -> None:
        for d in enumerate_dessins(m):
            table = dessin_to_table(d)
            assert table.index == m
            assert isomorphic(table_to_dessin(table), d) is not None

    def test_wrong_generator_count(self) -> None:
        table = coset_enumeration(extended_presentation(TriangleType(2, 3, 3)))
        with pytest.raises(DessinatorError, match="exactly 2 generators"):
            table_to_dessin(table)

    def test_surface_groups(self, torus: Dessin, genus_two: Dessin) -> None:
        for d, rank in ((torus, 2), (genus_two, 4)):
            subgroup = reidemeister_schreier(triangle_presentation(dessin_type(d)), dessin_to_table(d))
            assert abelianization(subgroup).free_rank == rank
            assert abelianization(subgroup).torsion == ()


class TestPredicates:
    def test_examples(self, star: Dessin, torus: Dessin, chiral: Dessin) -> None:
        assert is_torsion_free_uniform(torus) and is_torsion_free_uniform(star)
        assert not is_torsion_free_uniform(chiral)
        assert is_normal_regular(torus)
        assert not is_normal_regular(chiral)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_regular_implies_uniform(self, m: int) -> None:
        for d in enumerate_dessins(m):
            assert is_normal_regular(d) == classify(d).regular
            if is_normal_regular(d):
                assert is_torsion_free_uniform(d)

    @pytest.mark.parametrize("m", range(1, 7))
    def test_normalizer_crosscheck(self, m: int) -> None:
        for d in enumerate_dessins(m):
            plus_size, normalizer = aut_normalizer_crosscheck(d)
            assert plus_size == normalizer

    def test_crosscheck_cap(self) -> None:
        big = Dessin(perm("(" + " ".join(map(str, range(13))) + ")", 13), perm("()", 13))
        with pytest.raises(CapExceededError):
            aut_normalizer_crosscheck(big)


class TestCensus:
    @pytest.mark.parametrize("m", range(1, 6))
    def test_matches_enumeration(self, m: int) -> None:
        found = enumerate_dessins(m)
        for t in sorted({dessin_type(d) for d in found}, key=TriangleType.as_tuple)[:12]:
            assert triangle_census(t, m) == [d for d in found if dessin_type(d) == t]

    def test_hurwitz_type(self) -> None:
        census = triangle_census(TriangleType(2, 3, 7), 7)
        assert census
        assert all(dessin_type(d) == TriangleType(2, 3, 7) for d in census)

    def test_cap(self) -> None:
        with pytest.raises(CapExceededError):
            triangle_census(TriangleType(2, 3, 7), 13)
