"""This module contains triangle groups and the correspondence between dessins and their subgroups.

A dessin of type ``(a, b, c)`` is the action of ``Delta(a, b, c) = < x y | x^a y^b (y*x)^c >`` on the
cosets of an edge stabilizer: ``x`` acts as sigma and ``y`` as tau.

.. versionadded:: 0.1.0
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .defaults import CROSSCHECK_CAP, MAX_COSETS
from .dessin import Dessin, aut_plus, canonical_form, dessin_key, dessin_type, monodromy_order, passport
from .exceptions import CapExceededError, DessinatorError
from .fpgroup import (
    CosetTable,
    Presentation,
    Word,
    check_table,
    coset_enumeration,
    free_reduce,
    low_index_subgroups,
    standardize,
    word_power,
)

__all__ = [
    "Geometry",
    "TriangleType",
    "triangle_presentation",
    "extended_presentation",
    "extended_embedding",
    "embed_word",
    "triangle_group_order",
    "dessin_to_table",
    "table_to_dessin",
    "is_torsion_free_uniform",
    "is_normal_regular",
    "aut_normalizer_crosscheck",
    "triangle_census",
]

LOG = logging.getLogger(__name__)

X, Y = 1, 2
T1, T2, T3 = 1, 2, 3


class Geometry(str, Enum):
    """The space uniformizing ``Delta(a, b, c)``, decided by the sign of ``1/a + 1/b + 1/c - 1``."""

    SPHERICAL = "spherical"
    EUCLIDEAN = "euclidean"
    HYPERBOLIC = "hyperbolic"


@dataclass(frozen=True)
class TriangleType:
    """A triangle type ``(a, b, c)``.

    Attributes:
        a (:obj:`int`): Order of ``x``
        b (:obj:`int`): Order of ``y``
        c (:obj:`int`): Order of ``yx``
    """

    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c) < 1:
            raise DessinatorError(f"triangle type entries must be positive, got {self.as_tuple()}")

    @classmethod
    def parse(cls, text: str) -> "TriangleType":
        """Parse ``"2,3,7"`` or ``"(2, 3, 7)"``."""
        parts = text.strip().strip("()").replace(",", " ").split()
        if len(parts) != 3:
            raise DessinatorError(f"expected three integers in triangle type {text!r}")
        try:
            a, b, c = (int(part) for part in parts)
        except ValueError:
            raise DessinatorError(f"expected three integers in triangle type {text!r}") from None
        return cls(a, b, c)

    def as_tuple(self) -> Tuple[int, int, int]:
        return self.a, self.b, self.c

    @property
    def curvature(self) -> Fraction:
        """:obj:`Fraction`: ``1/a + 1/b + 1/c - 1``"""
        return Fraction(1, self.a) + Fraction(1, self.b) + Fraction(1, self.c) - 1

    @property
    def geometry(self) -> Geometry:
        if self.curvature > 0:
            return Geometry.SPHERICAL
        if self.curvature == 0:
            return Geometry.EUCLIDEAN
        return Geometry.HYPERBOLIC

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def triangle_presentation(t: TriangleType) -> Presentation:
    """``< x y | x^a y^b (y*x)^c >``"""
    return Presentation(("x", "y"), (word_power((X,), t.a), word_power((Y,), t.b), word_power((Y, X), t.c)))


def extended_presentation(t: TriangleType) -> Presentation:
    """The extended triangle group generated by three reflections.

    ``< t1 t2 t3 | t1^2 t2^2 t3^2 (t2*t1)^a (t1*t3)^b (t3*t2)^c >``
    """
    return Presentation(
        ("t1", "t2", "t3"),
        (
            (T1, T1),
            (T2, T2),
            (T3, T3),
            word_power((T2, T1), t.a),
            word_power((T1, T3), t.b),
            word_power((T3, T2), t.c),
        ),
    )


def extended_embedding() -> Dict[str, Word]:
    """The substitution ``x = t2 t1``, ``y = t1 t3`` embedding the triangle group with index two."""
    return {"x": (T2, T1), "y": (T1, T3)}


def embed_word(word: Sequence[int]) -> Word:
    """Rewrite a word in ``x``, ``y`` as a word in the reflections ``t1``, ``t2``, ``t3``."""
    images = {X: (T2, T1), Y: (T1, T3)}
    letters: List[int] = []
    for letter in word:
        image = images[abs(letter)]
        letters.extend(image if letter > 0 else tuple(-g for g in reversed(image)))
    return free_reduce(letters)


def triangle_group_order(t: TriangleType, max_cosets: int = MAX_COSETS) -> int:
    """Order of a spherical triangle group by enumerating the cosets of the trivial subgroup.

    Raises:
        :obj:`dessinator.exceptions.DessinatorError`: If the type is not spherical, the group is infinite
    """
    if t.geometry is not Geometry.SPHERICAL:
        raise DessinatorError(f"Delta{t} is {t.geometry.value} and therefore infinite")
    return coset_enumeration(triangle_presentation(t), max_cosets=max_cosets).index


def dessin_to_table(d: Dessin) -> CosetTable:
    """The coset table of the edge stabilizer in the minimal triangle group of ``d``.

    Cosets are renumbered breadth-first from edge ``0``.
    """
    table = standardize(CosetTable(("x", "y"), (d.sigma, d.tau)))
    check_table(triangle_presentation(dessin_type(d)), table)
    return table


def table_to_dessin(t: CosetTable) -> Dessin:
    """Read sigma and tau off the two generator columns.

    Raises:
        :obj:`dessinator.exceptions.DessinatorError`: If the table does not have exactly two generators
    """
    if t.generator_count != 2:
        raise DessinatorError(f"a dessin needs a table with exactly 2 generators, got {t.generator_count}")
    return Dessin(t.actions[0], t.actions[1])


def is_torsion_free_uniform(d: Dessin) -> bool:
    """Whether every black, white and face cycle has exactly the length ``a``, ``b`` and ``c``."""
    t = dessin_type(d)
    black, white, face = passport(d)
    return set(black) == {t.a} and set(white) == {t.b} and set(face) == {t.c}


def is_normal_regular(d: Dessin) -> bool:
    """Whether the edge stabilizer is normal, i.e. the monodromy group acts regularly."""
    return monodromy_order(d) == d.edge_count


def aut_normalizer_crosscheck(d: Dessin, cap: int = CROSSCHECK_CAP) -> Tuple[int, int]:
    """Compare ``|Aut+(d)|`` with the index of the edge stabilizer in its normalizer.

    The second number counts the cosets ``j`` for which re-rooting the table at ``j`` reproduces the
    table exactly.

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If ``d`` has more than ``cap`` edges
    """
    if d.edge_count > cap:
        raise CapExceededError(f"normalizer cross-check on {d.edge_count} edges", cap)
    table = dessin_to_table(d)
    normalizer = sum(1 for root in range(table.index) if standardize(table, root) == table)
    plus_size = len(aut_plus(d))
    if plus_size != normalizer:
        LOG.warning(f"|Aut+| = {plus_size} differs from |N(K)/K| = {normalizer} for {d}")
    return plus_size, normalizer


def triangle_census(t: TriangleType, m: int, max_index: int = CROSSCHECK_CAP) -> List[Dessin]:
    """Dessins of exact type ``t`` on ``m`` edges, from the index ``m`` subgroups of ``Delta(t)``.

    Each class is reported by its :func:`dessinator.dessin.canonical_form`, sorted as in
    :func:`dessinator.dessin.enumerate_dessins`.

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If ``m`` exceeds ``max_index``
    """
    if m > max_index:
        raise CapExceededError(f"subgroup census of index {m}", max_index)
    found = []
    for table in low_index_subgroups(triangle_presentation(t), m):
        d = table_to_dessin(table)
        if dessin_type(d) == t:
            found.append(canonical_form(d))
    found.sort(key=dessin_key)
    LOG.info(f"Delta{t} has {len(found)} subgroup classes of index {m} with exact type {t}")
    return found
