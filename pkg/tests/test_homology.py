import itertools

import pytest

from dessinator.dessin import Dessin, aut_plus, classify, dessin_type, enumerate_dessins, euler_characteristic, genus
from dessinator.exceptions import CapExceededError, HomologyCoverError
from dessinator.fpgroup import CosetTable, schreier_generators
from dessinator.homology import cover_spec, cover_tower_genus, deck_generators, homology_cover
from dessinator.permcore import Perm, compose, cycle_decomposition, group_order
from dessinator.triangle import is_torsion_free_uniform


def dessin_table(d: Dessin) -> CosetTable:
    return CosetTable(("x", "y"), (d.sigma, d.tau))


class TestCoverSpec:
    def test_torus(self, torus: Dessin) -> None:
        spec = cover_spec(torus, 3)
        assert spec.homology_rank == 2
        assert spec.sheets == 9
        assert spec.edge_count == 27

    def test_cocycle_vanishes_on_tree(self, genus_two: Dessin) -> None:
        spec = cover_spec(genus_two, 2)
        off_tree = {(g.coset, g.generator) for g in schreier_generators(dessin_table(genus_two))}
        zero = (0,) * spec.homology_rank
        for entry, vector in spec.schreier_cocycle.items():
            if entry not in off_tree:
                assert vector == zero
            assert all(0 <= value < 2 for value in vector)

    def test_encoding(self, torus: Dessin) -> None:
        spec = cover_spec(torus, 3)
        codes = {spec.encode(*spec.decode(code)) for code in range(spec.edge_count)}
        assert codes == set(range(spec.edge_count))
        assert spec.decode(spec.encode(2, (1, 2))) == (2, (1, 2))

    @pytest.mark.parametrize("m", [0, 1])
    def test_modulus(self, torus: Dessin, m: int) -> None:
        with pytest.raises(HomologyCoverError, match="modulus"):
            cover_spec(torus, m)

    def test_not_uniform(self, chiral: Dessin) -> None:
        with pytest.raises(HomologyCoverError, match="torsion-free"):
            cover_spec(chiral, 2)

    def test_genus_zero(self, segment: Dessin) -> None:
        with pytest.raises(HomologyCoverError, match="genus 0"):
            cover_spec(segment, 2)


class TestHomologyCover:
    def test_torus(self, torus: Dessin) -> None:
        cover = homology_cover(torus, 2)
        assert cover.edge_count == 12
        assert genus(cover) == 1
        flags = classify(cover)
        assert flags.regular and flags.reflexive

    def test_genus_two(self, genus_two: Dessin) -> None:
        cover = homology_cover(genus_two, 2)
        assert cover.edge_count == 80
        assert genus(cover) == 17
        assert euler_characteristic(cover) == 16 * euler_characteristic(genus_two)

    def test_unbranched(self, genus_two: Dessin) -> None:
        cover = homology_cover(genus_two, 2)
        assert is_torsion_free_uniform(cover)
        assert dessin_type(cover) == dessin_type(genus_two)

    def test_deck_group(self, torus: Dessin) -> None:
        spec = cover_spec(torus, 3)
        cover = homology_cover(torus, 3)
        deck = deck_generators(spec)
        assert len(deck) == 2
        for eta in deck:
            assert compose(eta, cover.sigma) == compose(cover.sigma, eta)
            assert compose(eta, cover.tau) == compose(cover.tau, eta)
            assert set(cycle_decomposition(eta).lengths) == {3}

    @pytest.mark.parametrize("fixture, m", [("torus", 3), ("genus_two", 2)])
    def test_deck_group_acts_freely(self, fixture: str, m: int, request: pytest.FixtureRequest) -> None:
        base = request.getfixturevalue(fixture)
        spec = cover_spec(base, m)
        deck = deck_generators(spec)
        assert group_order(deck) == spec.sheets
        assert len(aut_plus(homology_cover(base, m))) % spec.sheets == 0

        elements = set()
        for exponents in itertools.product(range(m), repeat=len(deck)):
            element = Perm.identity(spec.edge_count)
            for eta, exponent in zip(deck, exponents):
                element = compose(element, eta.power(exponent))
            elements.add(element)
            if any(exponents):
                assert all(element(i) != i for i in range(spec.edge_count))
        assert len(elements) == spec.sheets

    @pytest.mark.parametrize("m", [2, 3])
    def test_regular_base_gives_regular_cover(self, m: int) -> None:
        bases = [
            d
            for edges in range(1, 7)
            for d in enumerate_dessins(edges)
            if classify(d).regular and genus(d) > 0 and edges * m ** (2 * genus(d)) <= 500
        ]
        assert bases
        for base in bases:
            cover = homology_cover(base, m)
            assert classify(cover).regular
            assert dessin_type(cover) == dessin_type(base)

    def test_cap(self, genus_two: Dessin) -> None:
        with pytest.raises(CapExceededError, match="80 edges"):
            homology_cover(genus_two, 2, cap=50)


class TestTower:
    def test_torus(self, torus: Dessin) -> None:
        tower = cover_tower_genus(torus, 2, 3)
        assert tower.genera == [1, 1, 1]
        assert not tower.truncated

    def test_genus_two_truncates(self, genus_two: Dessin) -> None:
        tower = cover_tower_genus(genus_two, 2, 2)
        assert tower.genera == [17]
        assert tower.truncated

    def test_truncates_before_first_level(self, genus_two: Dessin) -> None:
        tower = cover_tower_genus(genus_two, 2, 3, cap=79)
        assert tower.genera == []
        assert tower.truncated

    def test_genera_grow(self, genus_two: Dessin) -> None:
        tower = cover_tower_genus(genus_two, 2, 1)
        assert tower.genera[0] > genus(genus_two)
