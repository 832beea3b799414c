"""This module contains exact Möbius arithmetic and the subgroups ``K_n`` of the modular group.

Words are written in ``A(z) = z + 2`` and ``E(z) = -1/z`` and act right to left, so ``A^2*E`` first
applies ``E``. For coset enumeration they are translated into ``PSL(2, Z) = < S T | S^2 (S*T)^3 >``
with ``E = S`` and ``A = T^2``.

Example:

    .. code-block:: python

        from dessinator.modular import k_subgroup_words, modular_orbifold_invariants

        invariants = modular_orbifold_invariants(k_subgroup_words(1))
        print(invariants.index, invariants.genus, invariants.cusps)  # 12 1 2

.. versionadded:: 0.1.0
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple, Union

from .defaults import MAX_COSETS, NORMALIZATION_CAP
from .exceptions import CapExceededError, DessinatorError
from .fpgroup import (
    CosetTable,
    Presentation,
    Word,
    coset_enumeration,
    format_word,
    free_reduce,
    invert_word,
    parse_word,
    trace,
    word_power,
)
from .permcore import compose, cycle_decomposition

__all__ = [
    "PSL2Z",
    "GAMMA2_PRESENTATION",
    "ProjectiveRational",
    "MobiusWord",
    "OrbifoldInvariants",
    "parse_mobius",
    "mobius_eval",
    "to_psl2z_word",
    "k_subgroup_words",
    "gamma2_words",
    "subgroup_table",
    "normalizes",
    "modular_orbifold_invariants",
    "a4_normalization_check",
]

LOG = logging.getLogger(__name__)

S, T = 1, 2
A, E = 1, 2

PSL2Z = Presentation(("S", "T"), (word_power((S,), 2), word_power((S, T), 3)))
"""The modular group, ``S`` is ``z -> -1/z`` and ``T`` is ``z -> z + 1``"""

GAMMA2_PRESENTATION = "< A B | >"
"""Principal congruence subgroup of level two, free on ``A(z) = z + 2`` and ``B(z) = z/(1 - 2z)``"""

Matrix = Tuple[int, int, int, int]

_MATRICES = {A: (1, 2, 0, 1), -A: (1, -2, 0, 1), E: (0, -1, 1, 0)}


def _normalize_sign(m: Matrix) -> Matrix:
    first = next(entry for entry in m if entry)
    return m if first > 0 else (-m[0], -m[1], -m[2], -m[3])


def _multiply(m: Matrix, n: Matrix) -> Matrix:
    return (
        m[0] * n[0] + m[1] * n[2],
        m[0] * n[1] + m[1] * n[3],
        m[2] * n[0] + m[3] * n[2],
        m[2] * n[1] + m[3] * n[3],
    )


@dataclass(frozen=True)
class ProjectiveRational:
    """A point of ``Q u {inf}`` in lowest terms with nonnegative denominator, ``inf`` is ``1/0``.

    Attributes:
        numerator (:obj:`int`): Numerator
        denominator (:obj:`int`): Denominator
    """

    numerator: int
    denominator: int = 1

    def __post_init__(self) -> None:
        p, q = self.numerator, self.denominator
        if p == 0 and q == 0:
            raise DessinatorError("0/0 is not a point of the projective line")
        divisor = gcd(p, q)
        p, q = p // divisor, q // divisor
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "denominator", q)

    @classmethod
    def parse(cls, text: str) -> "ProjectiveRational":
        """Parse ``"3"``, ``"-1/2"`` or ``"inf"``."""
        stripped = text.strip().lower()
        if stripped in ("inf", "infinity", "oo", "1/0"):
            return cls(1, 0)
        try:
            value = Fraction(stripped)
        except (ValueError, ZeroDivisionError):
            raise DessinatorError(f"could not parse rational point {text!r}") from None
        return cls(value.numerator, value.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.denominator == 0

    def __str__(self) -> str:
        if self.is_infinite:
            return "inf"
        if self.denominator == 1:
            return str(self.numerator)
        return f"{self.numerator}/{self.denominator}"


INFINITY = ProjectiveRational(1, 0)


@dataclass(frozen=True)
class MobiusWord:
    """A word in ``A``, ``A^-1`` and ``E`` together with its matrix up to sign.

    ``E`` is an involution of ``PSL(2, Z)``, so ``E^-1`` is stored as ``E``.

    Attributes:
        letters (:obj:`Word`): ``1`` is ``A``, ``-1`` is ``A^-1`` and ``2`` is ``E``
        matrix (:obj:`tuple` of :obj:`int`): ``(p, q, r, s)`` for ``z -> (pz + q)/(rz + s)``, first nonzero
            entry positive
    """

    letters: Word
    matrix: Matrix = field(init=False)

    def __post_init__(self) -> None:
        reduced: List[int] = []
        for letter in self.letters:
            if abs(letter) not in (A, E):
                raise DessinatorError(f"unknown Möbius letter {letter}")
            letter = E if abs(letter) == E else letter
            if reduced and (reduced[-1] == -letter or letter == E == reduced[-1]):
                reduced.pop()
            else:
                reduced.append(letter)
        matrix: Matrix = (1, 0, 0, 1)
        for letter in reduced:
            matrix = _multiply(matrix, _MATRICES[letter])
        object.__setattr__(self, "letters", tuple(reduced))
        object.__setattr__(self, "matrix", _normalize_sign(matrix))

    def __mul__(self, other: "MobiusWord") -> "MobiusWord":
        return MobiusWord(self.letters + other.letters)

    def inverse(self) -> "MobiusWord":
        return MobiusWord(invert_word(self.letters))

    def conjugate(self, by: "MobiusWord") -> "MobiusWord":
        """``by * self * by^-1``"""
        return by * self * by.inverse()

    def __str__(self) -> str:
        return format_word(self.letters, ("A", "E"))


def _a_power(k: int) -> MobiusWord:
    return MobiusWord(word_power((A,), k))


def parse_mobius(text: str) -> MobiusWord:
    """Parse a word such as ``A^2*E`` or ``A*E*A^-3``; ``1`` is the identity."""
    return MobiusWord(parse_word(text, ("A", "E")))


def mobius_eval(w: MobiusWord, z: Union[ProjectiveRational, int, Fraction]) -> ProjectiveRational:
    """Exact image of ``z`` under ``(pz + q)/(rz + s)``."""
    if not isinstance(z, ProjectiveRational):
        value = Fraction(z)
        z = ProjectiveRational(value.numerator, value.denominator)
    p, q, r, s = w.matrix
    x, y = z.numerator, z.denominator
    return ProjectiveRational(p * x + q * y, r * x + s * y)


def to_psl2z_word(w: MobiusWord) -> Word:
    """Translate into ``S``, ``T`` with ``A = T^2`` and ``E = S``."""
    letters: List[int] = []
    for letter in w.letters:
        if letter == E:
            letters.append(S)
        else:
            letters.extend((T, T) if letter > 0 else (-T, -T))
    return free_reduce(letters)


def k_subgroup_words(n: int, literal: bool = False) -> List[MobiusWord]:
    """Generators of ``K_n``.

    ``K_0 = <A, E>``. For ``n >= 1`` the generators are a translation followed, for each
    ``l = 1-n .. n-1``, by ``A^4l A^2 E A^-4l`` and ``A^4l A E A^-3 A^-4l``, ``4n - 1`` words in total.

    The translation pairs the two outermost free sides of the strip of ``2n - 1`` translates of the
    ``K_1`` domain, i.e. ``A^(4(2n-1))``, which gives index ``2n - 1`` in ``K_1``. ``literal=True`` uses
    ``A^4n`` instead; for ``n >= 2`` that translation conjugates the listed generators into each other and
    the group it generates is smaller in index.

    Args:
        n (:obj:`int`): Level, ``0`` or larger
        literal (:obj:`bool`, optional): Use ``A^4n`` as the translation. Default is :obj:`False`.

    Returns:
        :obj:`list` of :obj:`MobiusWord`: The generators
    """
    if n < 0:
        raise DessinatorError(f"K_n needs n >= 0, got {n}")
    if n == 0:
        return [_a_power(1), MobiusWord((E,))]
    translation = 4 * n if literal else 4 * (2 * n - 1)
    words = [_a_power(translation)]
    half_turn = MobiusWord((A, A, E))
    side_pair = MobiusWord((A, E, -A, -A, -A))
    for shift in range(1 - n, n):
        conjugator = _a_power(4 * shift)
        words.append(half_turn.conjugate(conjugator))
        words.append(side_pair.conjugate(conjugator))
    return words


def gamma2_words() -> List[MobiusWord]:
    """``A`` and ``B = E A E``, i.e. ``z + 2`` and ``z/(1 - 2z)``."""
    return [_a_power(1), MobiusWord((E, A, E))]


def subgroup_table(words: Sequence[MobiusWord], max_cosets: int = MAX_COSETS) -> CosetTable:
    """Coset table of the subgroup generated by ``words`` in :data:`PSL2Z`."""
    return coset_enumeration(PSL2Z, [to_psl2z_word(w) for w in words], max_cosets=max_cosets)


def normalizes(words: Sequence[MobiusWord], conjugator: MobiusWord, max_cosets: int = MAX_COSETS) -> bool:
    """Whether ``conjugator`` normalizes the finite index subgroup generated by ``words``.

    With ``j`` the coset of ``conjugator``, the stabilizer of ``j`` is the conjugated subgroup; both have the
    same index, so containment of the generators is enough.
    """
    table = subgroup_table(words, max_cosets)
    j = trace(table, 0, to_psl2z_word(conjugator))
    return all(trace(table, j, to_psl2z_word(w)) == j for w in words)


@dataclass(frozen=True)
class OrbifoldInvariants:
    """Invariants of a finite index subgroup of the modular group.

    Attributes:
        index (:obj:`int`): Index in ``PSL(2, Z)``
        genus (:obj:`int`): Genus of the compactified quotient
        cusps (:obj:`int`): Number of cusps
        e2 (:obj:`int`): Elliptic points of order two
        e3 (:obj:`int`): Elliptic points of order three
        free_rank (:obj:`int`): Number of infinite cyclic free factors, ``2 genus + cusps - 1``
        structure (:obj:`str`): Free product decomposition, e.g. ``Z*Z*Z2``
    """

    index: int
    genus: int
    cusps: int
    e2: int
    e3: int
    free_rank: int
    structure: str


def _invariants_of_table(table: CosetTable) -> OrbifoldInvariants:
    s_action, t_action = table.actions
    e2 = sum(1 for c in range(table.index) if s_action(c) == c)
    st_action = compose(t_action, s_action)
    e3 = sum(1 for c in range(table.index) if st_action(c) == c)
    cusps = len(cycle_decomposition(t_action).cycles)
    genus = 1 + Fraction(table.index, 12) - Fraction(e2, 4) - Fraction(e3, 3) - Fraction(cusps, 2)
    if genus.denominator != 1 or genus < 0:
        raise RuntimeError(f"genus formula gave {genus} for a subgroup of index {table.index}")
    free_rank = 2 * int(genus) + cusps - 1
    factors = ["Z"] * free_rank + ["Z2"] * e2 + ["Z3"] * e3
    return OrbifoldInvariants(table.index, int(genus), cusps, e2, e3, free_rank, "*".join(factors) or "1")


def modular_orbifold_invariants(subgroup: Sequence[MobiusWord], max_cosets: int = MAX_COSETS) -> OrbifoldInvariants:
    """Index, genus, cusps and elliptic points of the subgroup generated by ``subgroup``.

    ``e2`` and ``e3`` count the cosets fixed by ``S`` and ``ST``, cusps are the cycles of ``T`` and the genus
    comes from ``g = 1 + index/12 - e2/4 - e3/3 - cusps/2``.

    Raises:
        :obj:`dessinator.exceptions.CosetLimitError`: If the subgroup has infinite or too large index
    """
    invariants = _invariants_of_table(subgroup_table(subgroup, max_cosets))
    LOG.info(f"Modular subgroup of index {invariants.index}: genus {invariants.genus}, {invariants.cusps} cusps")
    return invariants


def a4_normalization_check(n: int, cap: int = NORMALIZATION_CAP, max_cosets: int = MAX_COSETS) -> bool:
    """Whether ``A^4`` normalizes ``K_n``, and for ``n = 1`` also ``A`` itself.

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If ``n`` exceeds ``cap``
    """
    if n > cap:
        raise CapExceededError(f"normalization check for K_{n}", cap)
    if n < 1:
        raise DessinatorError(f"normalization check needs n >= 1, got {n}")
    words = k_subgroup_words(n)
    result = normalizes(words, _a_power(4), max_cosets)
    if n == 1:
        result = result and normalizes(words, _a_power(1), max_cosets)
    return result
