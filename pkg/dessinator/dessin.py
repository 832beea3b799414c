"""This module contains the :class:`Dessin` type and its combinatorial invariants.

A dessin on ``m`` edges is a transitive pair ``(sigma, tau)`` of permutations of ``0 .. m-1``:
``sigma`` rotates the edges around the black vertices, ``tau`` around the white vertices and the
faces are the cycles of ``tau sigma`` (apply ``sigma`` first).

Example:

    .. code-block:: python

        from dessinator.dessin import genus, new_dessin, passport
        from dessinator.permcore import Perm

        torus = new_dessin(Perm.parse("(0 1 2)"), Perm.parse("(0 1 2)"))
        print(passport(torus), genus(torus))  # (3; 3; 3) 1

.. versionadded:: 0.1.0
"""

import logging
from dataclasses import dataclass
from math import lcm
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, Iterator, List, Optional, Tuple, Union

from .defaults import ENUMERATION_CAP
from .exceptions import CapExceededError, DisconnectedDessinError, PermutationError
from .fpgroup import Presentation, low_index_subgroups
from .permcore import (
    Perm,
    centralizer,
    compose,
    conjugators,
    cycle_decomposition,
    group_order,
    orbit,
    simultaneous_conjugacy,
)
from .permcore import relabel as relabel_perm
from .utils import read_json, write_json

if TYPE_CHECKING:
    from .triangle import TriangleType

__all__ = [
    "Dessin",
    "Passport",
    "Classification",
    "new_dessin",
    "faces",
    "passport",
    "euler_characteristic",
    "genus",
    "dessin_type",
    "is_uniform",
    "is_clean",
    "is_bounded",
    "monodromy_order",
    "aut_plus",
    "reversing_automorphisms",
    "aut_full_size",
    "classify",
    "mirror",
    "relabel",
    "isomorphic",
    "dessin_key",
    "canonical_form",
    "enumerate_dessins",
    "dessin_to_json",
    "dessin_from_json",
    "load_dessin",
    "dump_dessin",
]

LOG = logging.getLogger(__name__)

FREE_GROUP = Presentation(("x", "y"))
"""The free group on ``x`` (acting as sigma) and ``y`` (acting as tau)"""


@dataclass(frozen=True)
class Dessin:
    """A connected dessin d'enfant.

    Attributes:
        sigma (:class:`dessinator.permcore.Perm`): Rotation at the black vertices
        tau (:class:`dessinator.permcore.Perm`): Rotation at the white vertices
    """

    sigma: Perm
    tau: Perm

    def __post_init__(self) -> None:
        if self.sigma.degree != self.tau.degree:
            raise PermutationError(f"degree mismatch: {self.sigma.degree} != {self.tau.degree}")
        if self.sigma.degree < 1:
            raise PermutationError("a dessin needs at least one edge")
        reached = orbit([self.sigma, self.tau], 0)
        if len(reached) != self.sigma.degree:
            raise DisconnectedDessinError(
                f"disconnected dessin: orbit of 0 is {sorted(reached)}, not all {self.sigma.degree} edges"
            )

    @property
    def edge_count(self) -> int:
        """:obj:`int`: Number of edges ``m``"""
        return self.sigma.degree

    def __str__(self) -> str:
        return f"Dessin(sigma={self.sigma}, tau={self.tau})"


@dataclass(frozen=True)
class Passport:
    """Ascending black vertex, white vertex and face degrees.

    Attributes:
        black_degrees (:obj:`tuple` of :obj:`int`): Cycle lengths of sigma
        white_degrees (:obj:`tuple` of :obj:`int`): Cycle lengths of tau
        face_degrees (:obj:`tuple` of :obj:`int`): Cycle lengths of tau sigma
    """

    black_degrees: Tuple[int, ...]
    white_degrees: Tuple[int, ...]
    face_degrees: Tuple[int, ...]

    def __str__(self) -> str:
        return "(" + "; ".join(",".join(map(str, part)) for part in self) + ")"

    def __iter__(self) -> Iterator[Tuple[int, ...]]:
        return iter((self.black_degrees, self.white_degrees, self.face_degrees))


@dataclass(frozen=True)
class Classification:
    regular: bool
    reflexive: bool
    chiral: bool


def new_dessin(sigma: Perm, tau: Perm) -> Dessin:
    """Validate and build a dessin.

    Raises:
        :obj:`dessinator.exceptions.DisconnectedDessinError`: If the pair is not transitive
        :obj:`dessinator.exceptions.PermutationError`: On degree mismatch
    """
    return Dessin(sigma, tau)


def faces(d: Dessin) -> Perm:
    """The face permutation ``tau sigma``."""
    return compose(d.tau, d.sigma)


def passport(d: Dessin) -> Passport:
    return Passport(
        cycle_decomposition(d.sigma).lengths,
        cycle_decomposition(d.tau).lengths,
        cycle_decomposition(faces(d)).lengths,
    )


def euler_characteristic(d: Dessin) -> int:
    """``V - E + F`` of the underlying surface."""
    black, white, face = passport(d)
    return len(black) + len(white) - d.edge_count + len(face)


def genus(d: Dessin) -> int:
    chi = euler_characteristic(d)
    if chi % 2 or chi > 2:
        raise RuntimeError(f"Euler characteristic {chi} of {d} is not that of a closed orientable surface")
    return (2 - chi) // 2


def dessin_type(d: Dessin) -> "TriangleType":
    """The minimal triangle type ``(a, b, c)``, lcms of the black, white and face degrees."""
    from .triangle import TriangleType

    black, white, face = passport(d)
    return TriangleType(lcm(*black), lcm(*white), lcm(*face))


def is_uniform(d: Dessin) -> bool:
    """Whether all black vertices, all white vertices and all faces have one degree per kind."""
    return all(len(set(part)) == 1 for part in passport(d))


def is_clean(d: Dessin) -> bool:
    """Whether every white vertex has degree two."""
    return set(passport(d).white_degrees) == {2}


def is_bounded(d: Dessin) -> Tuple[bool, int]:
    """Finite dessins are always bounded, the witness is the largest vertex or face degree."""
    return True, max(max(part) for part in passport(d))


def monodromy_order(d: Dessin) -> int:
    """Order of the monodromy group ``<sigma, tau>``."""
    return group_order([d.sigma, d.tau])


def aut_plus(d: Dessin) -> List[Perm]:
    """Orientation preserving automorphisms, the centralizer of the monodromy group."""
    return centralizer([d.sigma, d.tau])


def reversing_automorphisms(d: Dessin) -> List[Perm]:
    """Every ``eta`` with ``eta sigma eta^-1 = sigma^-1`` and ``eta tau eta^-1 = tau^-1``."""
    return conjugators([d.sigma, d.tau], [d.sigma.inverse(), d.tau.inverse()])


def aut_full_size(d: Dessin) -> Tuple[int, int]:
    """Sizes of the orientation preserving and of the full automorphism group.

    The full group doubles exactly when the dessin is isomorphic to its mirror image.
    """
    plus_size = len(aut_plus(d))
    reversing = simultaneous_conjugacy((d.sigma, d.tau), (d.sigma.inverse(), d.tau.inverse()))
    return plus_size, 2 * plus_size if reversing is not None else plus_size


def classify(d: Dessin) -> Classification:
    """Regular, reflexive and chiral flags, reported for every dessin."""
    plus_size, full_size = aut_full_size(d)
    reflexive = full_size == 2 * plus_size
    return Classification(regular=plus_size == d.edge_count, reflexive=reflexive, chiral=not reflexive)


def mirror(d: Dessin) -> Dessin:
    return Dessin(d.sigma.inverse(), d.tau.inverse())


def relabel(d: Dessin, eta: Perm) -> Dessin:
    """The isomorphic dessin ``eta d eta^-1`` with edge ``i`` renamed ``eta(i)``."""
    return Dessin(relabel_perm(d.sigma, eta), relabel_perm(d.tau, eta))


def isomorphic(d1: Dessin, d2: Dessin) -> Optional[Perm]:
    """An edge relabeling carrying ``d1`` onto ``d2``, or :obj:`None`."""
    if d1.edge_count != d2.edge_count:
        return None
    return simultaneous_conjugacy((d1.sigma, d1.tau), (d2.sigma, d2.tau))


def dessin_key(d: Dessin) -> Tuple[int, ...]:
    """Concatenated image arrays of sigma and tau, the order :func:`canonical_form` minimizes."""
    return d.sigma.images + d.tau.images


_Labeling = Tuple[Tuple[int, ...], Tuple[int, ...]]


class _LexMinSearch:
    """Smallest :func:`dessin_key` over all relabelings of one dessin.

    The smallest possible sigma array lays the sigma cycles out by increasing length, each as a block
    ``s -> s+1 -> ... -> s``, so only the choice of cycle and starting point per block is left. The tau
    array is then fixed position by position, keeping every partial labeling tied for the smallest prefix.
    """

    def __init__(self, d: Dessin) -> None:
        self.tau = d.tau.images
        self.m = d.edge_count
        self.cycles = sorted((tuple(c) for c in cycle_decomposition(d.sigma).cycles), key=len)
        self.cycle_of = [0] * self.m
        self.offset = [0] * self.m
        for index, cycle in enumerate(self.cycles):
            for position, point in enumerate(cycle):
                self.cycle_of[point] = index
                self.offset[point] = position

        self.starts: Dict[int, List[int]] = {}
        self.length_at = [0] * self.m
        sigma = [0] * self.m
        start = 0
        for cycle in self.cycles:
            length = len(cycle)
            self.starts.setdefault(length, []).append(start)
            for k in range(length):
                self.length_at[start + k] = length
                sigma[start + k] = start + (k + 1) % length
            start += length
        self.sigma = Perm(tuple(sigma))

    def _fill(self, labeling: _Labeling, start: int, point: int) -> _Labeling:
        """Label the sigma cycle of ``point`` as the block at ``start``, ``point`` first."""
        labels, owner = list(labeling[0]), list(labeling[1])
        cycle = self.cycles[self.cycle_of[point]]
        for k in range(len(cycle)):
            old = cycle[(self.offset[point] + k) % len(cycle)]
            labels[old] = start + k
            owner[start + k] = old
        return tuple(labels), tuple(owner)

    def _expand(self, labeling: _Labeling, i: int) -> Iterator[_Labeling]:
        labels, owner = labeling
        if owner[i] != -1:
            yield labeling
            return
        # i opens an empty block, any unused cycle of its length may fill it
        for cycle in self.cycles:
            if len(cycle) == self.length_at[i] and labels[cycle[0]] == -1:
                for point in cycle:
                    yield self._fill(labeling, i, point)

    def _advance(self, labeling: _Labeling, i: int) -> Tuple[int, _Labeling]:
        target = self.tau[labeling[1][i]]
        if labeling[0][target] == -1:
            length = len(self.cycles[self.cycle_of[target]])
            start = next(s for s in self.starts[length] if labeling[1][s] == -1)
            labeling = self._fill(labeling, start, target)
        return labeling[0][target], labeling

    def run(self) -> Dessin:
        empty = (-1,) * self.m
        states: Dict[Tuple[int, ...], _Labeling] = {empty: (empty, empty)}
        tau: List[int] = []
        for i in range(self.m):
            best = self.m
            survivors: Dict[Tuple[int, ...], _Labeling] = {}
            for labeling in states.values():
                for expanded in self._expand(labeling, i):
                    value, advanced = self._advance(expanded, i)
                    if value < best:
                        best, survivors = value, {}
                    if value == best:
                        survivors[advanced[0]] = advanced
            states = survivors
            tau.append(best)
        return Dessin(self.sigma, Perm(tuple(tau)))


def canonical_form(d: Dessin) -> Dessin:
    """The relabeling of ``d`` with the smallest :func:`dessin_key`, one per isomorphism class.

    This is the representative :func:`enumerate_dessins` returns.
    """
    return _LexMinSearch(d).run()


def enumerate_dessins(
    m: int, cap: int = ENUMERATION_CAP, seed: Optional[int] = None, workers: int = 1
) -> List[Dessin]:
    """One canonical dessin per isomorphism class on ``m`` edges.

    Isomorphism classes of dessins are conjugacy classes of index ``m`` subgroups of the free group
    on two generators, which is how they are searched.

    Args:
        m (:obj:`int`): Number of edges
        cap (:obj:`int`, optional): Largest accepted ``m``. Default is
            :data:`dessinator.defaults.ENUMERATION_CAP`.
        seed (:obj:`int`, optional): Shuffles the search order, the result does not depend on it.
        workers (:obj:`int`, optional): Number of processes. Default is ``1``.

    Returns:
        :obj:`list` of :obj:`Dessin`: Representatives from :func:`canonical_form`, sorted by :func:`dessin_key`

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If ``m`` exceeds ``cap``
    """
    if m > cap:
        raise CapExceededError(f"enumeration of dessins with {m} edges", cap)
    if m < 1:
        raise PermutationError(f"edge count must be positive, got {m}")
    tables = low_index_subgroups(FREE_GROUP, m, seed=seed, workers=workers)
    dessins = sorted((canonical_form(Dessin(*table.actions)) for table in tables), key=dessin_key)
    LOG.info(f"Enumerated {len(dessins)} dessins with {m} edges")
    return dessins


def dessin_to_json(d: Dessin) -> Dict[str, Any]:
    """``{"edges": m, "sigma": "(...)", "tau": "(...)"}`` in canonical cycle notation."""
    return {"edges": d.edge_count, "sigma": d.sigma.cycle_notation(), "tau": d.tau.cycle_notation()}


def dessin_from_json(data: Dict[str, Any]) -> Dessin:
    try:
        edges = int(data["edges"])
        sigma, tau = str(data["sigma"]), str(data["tau"])
    except (KeyError, TypeError, ValueError) as e:
        raise PermutationError(f"malformed dessin document: {e}") from None
    return Dessin(Perm.parse(sigma, edges), Perm.parse(tau, edges))


def load_dessin(in_file: Union[str, Path]) -> Dessin:
    return dessin_from_json(read_json(in_file))


def dump_dessin(d: Dessin, out_file: Union[str, Path]) -> None:
    write_json(dessin_to_json(d), out_file)
