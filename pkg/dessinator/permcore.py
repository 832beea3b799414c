"""This module contains the exact permutation algebra every other module builds on.

Points are the contiguous integers ``0 .. m-1``. A :class:`Perm` maps ``i`` to ``images[i]``
and composition is right-to-left: ``compose(p, q)`` applies ``q`` first, then ``p``.

Example:

    .. code-block:: python

        from dessinator.permcore import Perm, compose, group_order

        sigma = Perm.parse("(0 1 2)", 3)
        tau = Perm.parse("(0 1)", 3)
        print(compose(sigma, tau))  # (0 2)
        print(group_order([sigma, tau]))  # 6

.. versionadded:: 0.1.0
"""

import json
import logging
import re
from collections import deque
from dataclasses import dataclass
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from .defaults import BRUTE_FORCE_CAP
from .exceptions import CapExceededError, PermutationError

__all__ = [
    "Perm",
    "CycleDecomposition",
    "compose",
    "cycle_decomposition",
    "orbit",
    "is_transitive",
    "group_order",
    "bfs_closure",
    "centralizer",
    "conjugators",
    "simultaneous_conjugacy",
    "relabel",
]

LOG = logging.getLogger(__name__)

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Perm:
    """A permutation of ``0 .. degree-1``.

    Attributes:
        images (:obj:`tuple` of :obj:`int`): ``images[i]`` is the image of ``i``
    """

    images: Tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if sorted(images) != list(range(len(images))):
            raise PermutationError(f"not a permutation of 0..{len(images) - 1}: {list(images)}")

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        """The identity on ``degree`` points."""
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Perm":
        """Build a permutation from disjoint cycles, missing points are fixed.

        Args:
            cycles (:obj:`Iterable` of :obj:`Sequence`): Disjoint cycles
            degree (:obj:`int`): Number of points

        Returns:
            :obj:`Perm`: The permutation

        Raises:
            :obj:`dessinator.exceptions.PermutationError`: If cycles overlap or leave the domain
        """
        images = list(range(degree))
        seen: Set[int] = set()
        for cycle in cycles:
            for index, point in enumerate(cycle):
                if not 0 <= point < degree:
                    raise PermutationError(f"point {point} outside 0..{degree - 1}")
                if point in seen:
                    raise PermutationError(f"point {point} appears twice in cycle notation")
                seen.add(point)
                images[point] = cycle[(index + 1) % len(cycle)]
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: Optional[int] = None) -> "Perm":
        """Parse cycle notation ``(0 1 2)(3 4)`` or an image array ``[1, 2, 0]``.

        ``()`` is the identity. Points may be separated by whitespace or commas.

        Args:
            text (:obj:`str`): Text to parse
            degree (:obj:`int`, optional): Number of points. Required for cycle notation
                that does not mention the largest point.

        Returns:
            :obj:`Perm`: The permutation

        Raises:
            :obj:`dessinator.exceptions.PermutationError`: On malformed input
        """
        stripped = text.strip()
        if stripped.startswith("["):
            try:
                values = json.loads(stripped)
            except json.JSONDecodeError as e:
                raise PermutationError(f"could not parse image array {text!r}: {e.msg}") from None
            if not isinstance(values, list) or not all(isinstance(v, int) for v in values):
                raise PermutationError(f"image array must be a list of integers: {text!r}")
            if degree is not None and len(values) != degree:
                raise PermutationError(f"image array has {len(values)} entries, expected {degree}")
            return cls(tuple(values))

        if _CYCLE_RE.sub("", stripped).strip():
            raise PermutationError(f"could not parse permutation {text!r}")
        cycles: List[List[int]] = []
        for match in _CYCLE_RE.finditer(stripped):
            body = match.group(1).replace(",", " ").split()
            try:
                cycles.append([int(point) for point in body])
            except ValueError:
                raise PermutationError(f"non-integer point in {text!r}") from None
        largest = max((max(c) for c in cycles if c), default=-1)
        if degree is None:
            degree = largest + 1
        elif largest >= degree:
            raise PermutationError(f"point {largest} outside 0..{degree - 1}")
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        """:obj:`int`: Number of points"""
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __str__(self) -> str:
        return self.cycle_notation()

    def inverse(self) -> "Perm":
        """The inverse permutation."""
        images = [0] * self.degree
        for point, image in enumerate(self.images):
            images[image] = point
        return Perm(tuple(images))

    def power(self, exponent: int) -> "Perm":
        """``self`` composed with itself ``exponent`` times, negative exponents allowed."""
        base = self if exponent >= 0 else self.inverse()
        result = Perm.identity(self.degree)
        for _ in range(abs(exponent)):
            result = compose(base, result)
        return result

    def is_identity(self) -> bool:
        return all(point == image for point, image in enumerate(self.images))

    def order(self) -> int:
        """The order, i.e. the lcm of the cycle lengths."""
        return lcm(1, *cycle_decomposition(self).lengths)

    def cycle_notation(self) -> str:
        """Canonical cycle notation, fixed points omitted, ``()`` for the identity."""
        cycles = [c for c in cycle_decomposition(self).cycles if len(c) > 1]
        if not cycles:
            return "()"
        return "".join("(" + " ".join(map(str, cycle)) + ")" for cycle in cycles)


@dataclass(frozen=True)
class CycleDecomposition:
    """Canonical cycles of a permutation.

    Every cycle starts with its minimum, cycles are sorted by their first entry and fixed
    points are kept as 1-cycles.

    Attributes:
        cycles (:obj:`tuple` of :obj:`tuple`): The cycles
    """

    cycles: Tuple[Tuple[int, ...], ...]

    @property
    def lengths(self) -> Tuple[int, ...]:
        """:obj:`tuple` of :obj:`int`: Ascending cycle lengths"""
        return tuple(sorted(len(cycle) for cycle in self.cycles))


def compose(p: Perm, q: Perm) -> Perm:
    """Right-to-left product, ``i`` maps to ``p(q(i))``.

    Raises:
        :obj:`dessinator.exceptions.PermutationError`: On degree mismatch
    """
    if p.degree != q.degree:
        raise PermutationError(f"degree mismatch: {p.degree} != {q.degree}")
    p_images = p.images
    return Perm(tuple(p_images[image] for image in q.images))


def cycle_decomposition(p: Perm) -> CycleDecomposition:
    seen = [False] * p.degree
    cycles: List[Tuple[int, ...]] = []
    for start in range(p.degree):
        if seen[start]:
            continue
        cycle = [start]
        seen[start] = True
        point = p.images[start]
        while point != start:
            seen[point] = True
            cycle.append(point)
            point = p.images[point]
        cycles.append(tuple(cycle))
    return CycleDecomposition(tuple(cycles))


def relabel(p: Perm, eta: Perm) -> Perm:
    """Conjugate ``p`` by ``eta``, i.e. ``eta p eta^-1``, which renames point ``i`` to ``eta(i)``."""
    return compose(eta, compose(p, eta.inverse()))


def _common_degree(gens: Sequence[Perm]) -> int:
    if not gens:
        raise PermutationError("empty generator list")
    degree = gens[0].degree
    for g in gens:
        if g.degree != degree:
            raise PermutationError(f"degree mismatch: {g.degree} != {degree}")
    return degree


def orbit(gens: Sequence[Perm], point: int) -> List[int]:
    """Orbit of ``point`` in breadth-first discovery order."""
    seen = {point}
    found = [point]
    queue = deque([point])
    while queue:
        current = queue.popleft()
        for g in gens:
            image = g.images[current]
            if image not in seen:
                seen.add(image)
                found.append(image)
                queue.append(image)
    return found


def is_transitive(gens: Sequence[Perm]) -> bool:
    degree = _common_degree(gens)
    return degree == 0 or len(orbit(gens, 0)) == degree


def _transversal(point: int, gens: Sequence[Perm], degree: int) -> Dict[int, Perm]:
    transversal = {point: Perm.identity(degree)}
    queue = deque([point])
    while queue:
        current = queue.popleft()
        for s in gens:
            image = s.images[current]
            if image not in transversal:
                transversal[image] = compose(s, transversal[current])
                queue.append(image)
    return transversal


def _strip(h: Perm, base: List[int], transversals: List[Dict[int, Perm]], start: int) -> Tuple[Perm, int]:
    for level in range(start, len(base)):
        image = h.images[base[level]]
        if image not in transversals[level]:
            return h, level
        h = compose(transversals[level][image].inverse(), h)
    return h, len(base)


def _moved_point(p: Perm) -> int:
    return next(point for point, image in enumerate(p.images) if point != image)


def _stabilizer_chain(gens: Sequence[Perm]) -> Tuple[List[int], List[Dict[int, Perm]]]:
    """Deterministic Schreier-Sims, returns the base and one transversal per base point."""
    degree = _common_degree(gens)
    strong = [g for g in gens if not g.is_identity()]
    base: List[int] = []
    for g in strong:
        if all(g.images[b] == b for b in base):
            base.append(_moved_point(g))

    level_gens = [[s for s in strong if all(s.images[b] == b for b in base[:i])] for i in range(len(base))]
    transversals = [_transversal(base[i], level_gens[i], degree) for i in range(len(base))]

    level = len(base) - 1
    while level >= 0:
        extended = False
        for point, coset_rep in list(transversals[level].items()):
            for s in level_gens[level]:
                image = s.images[point]
                schreier = compose(transversals[level][image].inverse(), compose(s, coset_rep))
                residue, depth = _strip(schreier, base, transversals, level + 1)
                if depth == len(base) and residue.is_identity():
                    continue
                if depth == len(base):
                    base.append(_moved_point(residue))
                    level_gens.append([])
                    transversals.append({})
                for i in range(level + 1, depth + 1):
                    level_gens[i].append(residue)
                    transversals[i] = _transversal(base[i], level_gens[i], degree)
                level = depth
                extended = True
                break
            if extended:
                break
        if not extended:
            level -= 1
    LOG.debug(f"Stabilizer chain with base {base} and basic orbit sizes {[len(t) for t in transversals]}")
    return base, transversals


def group_order(gens: Sequence[Perm]) -> int:
    """Exact order of the group generated by ``gens``, via a stabilizer chain.

    Raises:
        :obj:`dessinator.exceptions.PermutationError`: On an empty list or mixed degrees
    """
    _, transversals = _stabilizer_chain(gens)
    order = 1
    for transversal in transversals:
        order *= len(transversal)
    return order


def bfs_closure(gens: Sequence[Perm], cap: int = BRUTE_FORCE_CAP) -> Set[Tuple[int, ...]]:
    """All elements of the generated group by breadth-first word closure.

    This is the brute-force oracle for :func:`group_order`, only for small degrees.

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If the degree exceeds ``cap``
    """
    degree = _common_degree(gens)
    if degree > cap:
        raise CapExceededError(f"word closure on degree {degree}", cap)
    start = tuple(range(degree))
    seen = {start}
    queue = deque([start])
    while queue:
        current = queue.popleft()
        for g in gens:
            product = tuple(g.images[image] for image in current)
            if product not in seen:
                seen.add(product)
                queue.append(product)
    return seen


def _propagate(source: Sequence[Perm], target: Sequence[Perm], image_of_zero: int) -> Optional[Perm]:
    """The unique ``eta`` with ``eta(0) = image_of_zero`` and ``eta s = t eta``, if any.

    ``source`` must be transitive.
    """
    degree = source[0].degree
    eta: List[Optional[int]] = [None] * degree
    eta[0] = image_of_zero
    used = {image_of_zero}
    queue = deque([0])
    while queue:
        point = queue.popleft()
        mapped = eta[point]
        assert mapped is not None
        for s, t in zip(source, target):
            nxt, wanted = s.images[point], t.images[mapped]
            current = eta[nxt]
            if current is None:
                if wanted in used:
                    return None
                eta[nxt] = wanted
                used.add(wanted)
                queue.append(nxt)
            elif current != wanted:
                return None
    return Perm(tuple(e for e in eta if e is not None))


def centralizer(gens: Sequence[Perm]) -> List[Perm]:
    """Every permutation commuting with all of ``gens``.

    The group must be transitive, so the centralizer acts semiregularly and an element
    is determined by the image of point ``0``.

    Raises:
        :obj:`dessinator.exceptions.PermutationError`: If the group is not transitive
    """
    if not is_transitive(gens):
        raise PermutationError("centralizer search requires transitivity")
    return conjugators(gens, gens)


def conjugators(source: Sequence[Perm], target: Sequence[Perm]) -> List[Perm]:
    """Every ``eta`` with ``eta s eta^-1 = t`` for all paired ``s``, ``t``, ordered by ``eta(0)``.

    ``source`` must be transitive.
    """
    found = []
    for candidate in range(source[0].degree):
        eta = _propagate(source, target, candidate)
        if eta is not None:
            found.append(eta)
    return found


def simultaneous_conjugacy(pair_a: Tuple[Perm, Perm], pair_b: Tuple[Perm, Perm]) -> Optional[Perm]:
    """Find ``eta`` with ``eta a1 eta^-1 = b1`` and ``eta a2 eta^-1 = b2``.

    Args:
        pair_a (:obj:`tuple` of :obj:`Perm`): Source pair, must be transitive
        pair_b (:obj:`tuple` of :obj:`Perm`): Target pair, must be transitive

    Returns:
        :obj:`Perm` | :obj:`None`: A witness, or :obj:`None` if the pairs are not conjugate

    Raises:
        :obj:`dessinator.exceptions.PermutationError`: On degree mismatch or non-transitive input
    """
    _common_degree([*pair_a, *pair_b])
    if not is_transitive(pair_a) or not is_transitive(pair_b):
        raise PermutationError("simultaneous conjugacy requires transitive pairs")
    for candidate in range(pair_a[0].degree):
        eta = _propagate(pair_a, pair_b, candidate)
        if eta is not None:
            return eta
    return None
