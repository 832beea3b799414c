"""This module contains finite homology covers of uniform dessins.

The edge stabilizer ``K`` of a uniform dessin of genus ``g`` is a surface group, so ``K`` made abelian is
``Z^2g``. Reducing modulo ``m`` gives a cover whose edges are pairs ``(edge, v)`` with
``v`` in ``(Z/m)^2g`` and whose deck group is the group of translations of ``v``.

The cocycle reads each Schreier generator of ``K`` in the Smith normal form coordinates of ``K`` made
abelian, so it maps onto ``(Z/m)^2g`` and the cover is connected.

.. versionadded:: 0.1.0
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .defaults import COVER_EDGE_CAP
from .dessin import Dessin, dessin_type, genus
from .exceptions import CapExceededError, HomologyCoverError
from .fpgroup import CosetTable, reidemeister_schreier, relation_matrix, schreier_generators, smith_normal_form
from .permcore import Perm
from .triangle import is_torsion_free_uniform, triangle_presentation

__all__ = ["CoverSpec", "TowerResult", "cover_spec", "homology_cover", "deck_generators", "cover_tower_genus"]

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverSpec:
    """Everything needed to build the mod ``m`` homology cover of ``base``.

    Attributes:
        base (:class:`dessinator.dessin.Dessin`): The uniform base dessin
        modulus (:obj:`int`): ``m``
        homology_rank (:obj:`int`): ``2g``
        schreier_cocycle (:obj:`dict`): ``(edge, generator)`` to a vector mod ``m``, zero on the spanning tree
    """

    base: Dessin
    modulus: int
    homology_rank: int
    schreier_cocycle: Dict[Tuple[int, int], Tuple[int, ...]]

    @property
    def sheets(self) -> int:
        """:obj:`int`: Degree of the cover, ``m^2g``"""
        return int(self.modulus**self.homology_rank)

    @property
    def edge_count(self) -> int:
        return self.base.edge_count * self.sheets

    def encode(self, edge: int, vector: Tuple[int, ...]) -> int:
        """Edge number of ``(edge, vector)`` in the cover, mixed radix with the base edge lowest."""
        code = 0
        for entry in reversed(vector):
            code = code * self.modulus + entry % self.modulus
        return edge + self.base.edge_count * code

    def decode(self, code: int) -> Tuple[int, Tuple[int, ...]]:
        edge, rest = code % self.base.edge_count, code // self.base.edge_count
        vector = []
        for _ in range(self.homology_rank):
            rest, entry = divmod(rest, self.modulus)
            vector.append(entry)
        return edge, tuple(vector)


@dataclass(frozen=True)
class TowerResult:
    """Genera of iterated homology covers.

    Attributes:
        genera (:obj:`list` of :obj:`int`): Genus of each level that was built
        truncated (:obj:`bool`): Whether the next level would have exceeded the edge cap
    """

    genera: List[int]
    truncated: bool


def cover_spec(base: Dessin, m: int) -> CoverSpec:
    """Compute the Schreier cocycle of the mod ``m`` homology cover.

    Raises:
        :obj:`dessinator.exceptions.HomologyCoverError`: If ``base`` is not uniform, has genus ``0`` or
            ``m < 2``
    """
    if m < 2:
        raise HomologyCoverError(f"homology cover needs a modulus of at least 2, got {m}")
    if not is_torsion_free_uniform(base):
        raise HomologyCoverError("homology cover requires a torsion-free (uniform) dessin")
    g = genus(base)
    if g == 0:
        raise HomologyCoverError("homology cover of a genus 0 dessin is trivial (H1 = 0)")

    table = CosetTable(("x", "y"), (base.sigma, base.tau))
    subgroup = reidemeister_schreier(triangle_presentation(dessin_type(base)), table)
    form = smith_normal_form(relation_matrix(subgroup), subgroup.generator_count)
    if form.invariant_factors or form.free_rank != 2 * g:
        raise HomologyCoverError(
            f"edge stabilizer of a genus {g} dessin abelianizes to rank {form.free_rank} with torsion"
            f" {list(form.invariant_factors)}, expected Z^{2 * g}"
        )

    zero = (0,) * (2 * g)
    cocycle = {(edge, generator): zero for edge in range(base.edge_count) for generator in range(2)}
    for index, schreier in enumerate(schreier_generators(table)):
        coordinates = form.free_coordinates(index)
        cocycle[schreier.coset, schreier.generator] = tuple(value % m for value in coordinates)
    LOG.debug(f"Cocycle of {base} mod {m}: {cocycle}")
    return CoverSpec(base, m, 2 * g, cocycle)


def _translate(vector: Tuple[int, ...], shift: Tuple[int, ...], m: int) -> Tuple[int, ...]:
    return tuple((a + b) % m for a, b in zip(vector, shift))


def _cover_from_spec(spec: CoverSpec) -> Dessin:
    actions = []
    for generator, base_action in enumerate((spec.base.sigma, spec.base.tau)):
        images = [0] * spec.edge_count
        for code in range(spec.edge_count):
            edge, vector = spec.decode(code)
            shift = spec.schreier_cocycle[edge, generator]
            images[code] = spec.encode(base_action(edge), _translate(vector, shift, spec.modulus))
        actions.append(Perm(tuple(images)))
    return Dessin(actions[0], actions[1])


def homology_cover(base: Dessin, m: int, cap: int = COVER_EDGE_CAP) -> Dessin:
    """The mod ``m`` homology cover of a uniform dessin of positive genus.

    Args:
        base (:class:`dessinator.dessin.Dessin`): Uniform base dessin
        m (:obj:`int`): Modulus, at least ``2``
        cap (:obj:`int`, optional): Largest edge count of the cover. Default is
            :data:`dessinator.defaults.COVER_EDGE_CAP`.

    Returns:
        :class:`dessinator.dessin.Dessin`: The cover on ``base.edge_count * m^2g`` edges

    Raises:
        :obj:`dessinator.exceptions.HomologyCoverError`: If the base does not admit the cover
        :obj:`dessinator.exceptions.CapExceededError`: If the cover would be too large
    """
    spec = cover_spec(base, m)
    if spec.edge_count > cap:
        raise CapExceededError(f"homology cover with {spec.edge_count} edges", cap)
    cover = _cover_from_spec(spec)
    LOG.info(f"Built the mod {m} homology cover with {cover.edge_count} edges")
    return cover


def deck_generators(spec: CoverSpec) -> List[Perm]:
    """Translations by the standard basis vectors of ``(Z/m)^2g``, acting on the cover's edges."""
    generators = []
    for axis in range(spec.homology_rank):
        unit = tuple(1 if i == axis else 0 for i in range(spec.homology_rank))
        images = [0] * spec.edge_count
        for code in range(spec.edge_count):
            edge, vector = spec.decode(code)
            images[code] = spec.encode(edge, _translate(vector, unit, spec.modulus))
        generators.append(Perm(tuple(images)))
    return generators


def cover_tower_genus(base: Dessin, m: int, levels: int, cap: int = COVER_EDGE_CAP) -> TowerResult:
    """Genera of the tower ``base <- cover <- cover of cover <- ...``.

    The tower stops early and is flagged as truncated when the next level would have more than ``cap``
    edges. Tori cover tori, so a genus one base gives genus one at every level.
    """
    genera: List[int] = []
    current = base
    for level in range(1, levels + 1):
        predicted = current.edge_count * m ** (2 * genus(current))
        if predicted > cap:
            LOG.warning(f"Tower truncated at level {level}: {predicted} edges exceed the cap {cap}")
            return TowerResult(genera, True)
        current = homology_cover(current, m, cap)
        genera.append(genus(current))
    return TowerResult(genera, False)
