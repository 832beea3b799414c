"""This module contains an empirical estimator for the number of ends of a finitely generated group.

A group is given by a :class:`GroupOracle`, which multiplies normal forms by generators. The estimator
builds a ball of the Cayley graph and counts, for a ladder of inner radii ``r``, the connected components
of the annulus ``r <= d <= R`` that still reach the outer sphere ``d = R``. A finitely generated group has
``0``, ``1``, ``2`` or infinitely many ends, and the ladder is read accordingly:

* ``0`` if the outer sphere is empty, i.e. the group is finite
* infinitely many if the last three counts strictly increase
* the count itself if the last two counts agree on ``1`` or ``2``
* inconclusive otherwise

.. versionadded:: 0.1.0
"""

import logging
import re
from abc import ABC, abstractmethod
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Hashable, List, Optional, Sequence, Tuple

import networkx as nx

from .defaults import BALL_CAP
from .exceptions import CapExceededError, DessinatorError

__all__ = [
    "GroupOracle",
    "FreeAbelianOracle",
    "FreeProductOracle",
    "EndsClass",
    "EndsProfile",
    "EndsEstimate",
    "builtin_oracles",
    "parse_oracle",
    "cayley_ball",
    "annulus_profile",
    "ends_estimate",
]

LOG = logging.getLogger(__name__)


class GroupOracle(ABC):
    """A finitely generated group with canonical normal forms.

    Elements are hashable normal forms, so equality of elements is equality of normal forms. The
    generator list is closed under inversion.

    Attributes:
        name (:obj:`str`): Display name
    """

    def __init__(self, name: str) -> None:
        self.name = name

    @property
    @abstractmethod
    def generators(self) -> List[Hashable]:
        """:obj:`list`: Generators as normal forms, closed under inversion"""

    @abstractmethod
    def identity(self) -> Hashable:
        """Normal form of the identity."""

    @abstractmethod
    def multiply(self, element: Hashable, generator: Hashable) -> Hashable:
        """Normal form of ``element * generator``."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class FreeAbelianOracle(GroupOracle):
    """``Z^rank`` with integer vectors as normal forms.

    Args:
        rank (:obj:`int`): Rank
        steps (:obj:`Sequence` of :obj:`tuple`, optional): Generators, the inverses are added. Default is
            the standard basis.
    """

    def __init__(self, rank: int, steps: Optional[Sequence[Tuple[int, ...]]] = None, name: str = "") -> None:
        if rank < 1:
            raise DessinatorError(f"free abelian rank must be positive, got {rank}")
        base = list(steps) if steps is not None else [tuple(int(i == j) for j in range(rank)) for i in range(rank)]
        generators: List[Tuple[int, ...]] = []
        for step in base:
            if len(step) != rank or not any(step):
                raise DessinatorError(f"invalid step {step} for Z^{rank}")
            for vector in (tuple(step), tuple(-x for x in step)):
                if vector not in generators:
                    generators.append(vector)
        super().__init__(name or ("Z" if rank == 1 else f"Z^{rank}"))
        self.rank = rank
        self._generators = generators

    @property
    def generators(self) -> List[Hashable]:
        return list(self._generators)

    def identity(self) -> Hashable:
        return (0,) * self.rank

    def multiply(self, element: Hashable, generator: Hashable) -> Hashable:
        return tuple(a + b for a, b in zip(element, generator))  # type: ignore[call-overload]


class FreeProductOracle(GroupOracle):
    """A free product of cyclic groups with alternating syllables as normal forms.

    An element is a tuple of ``(factor, exponent)`` syllables with consecutive factors distinct. For a
    finite factor of order ``n`` the exponent lies in ``1 .. n-1``.

    Args:
        orders (:obj:`Sequence`): Order of each factor, :obj:`None` for an infinite cyclic factor
    """

    def __init__(self, orders: Sequence[Optional[int]], name: str = "") -> None:
        if not orders:
            raise DessinatorError("a free product needs at least one factor")
        for order in orders:
            if order is not None and order < 1:
                raise DessinatorError(f"cyclic factor order must be positive, got {order}")
        self.orders = list(orders)
        default = "*".join("Z" if order is None else f"Z{order}" for order in self.orders)
        super().__init__(name or default)
        generators: List[Tuple[Tuple[int, int], ...]] = []
        for factor, order in enumerate(self.orders):
            if order == 1:
                continue
            for exponent in (1, -1):
                normal = self._syllable(factor, exponent)
                if normal and normal not in generators:
                    generators.append(normal)
        self._generators = generators

    def _reduce(self, factor: int, exponent: int) -> int:
        order = self.orders[factor]
        return exponent if order is None else exponent % order

    def _syllable(self, factor: int, exponent: int) -> Tuple[Tuple[int, int], ...]:
        reduced = self._reduce(factor, exponent)
        return ((factor, reduced),) if reduced else ()

    @property
    def generators(self) -> List[Hashable]:
        return list(self._generators)

    def identity(self) -> Hashable:
        return ()

    def multiply(self, element: Hashable, generator: Hashable) -> Hashable:
        syllables = list(element)  # type: ignore[call-overload]
        for factor, exponent in generator:  # type: ignore[attr-defined]
            if syllables and syllables[-1][0] == factor:
                merged = self._reduce(factor, syllables[-1][1] + exponent)
                syllables.pop()
                if merged:
                    syllables.append((factor, merged))
            else:
                syllables.append((factor, exponent))
        return tuple(syllables)


_FACTOR_RE = re.compile(r"^Z(?:_?(\d+))?$")
_STEPS_RE = re.compile(r"^Z\{([\d,\s]+)\}$")


def parse_oracle(name: str) -> GroupOracle:
    """Build an oracle from a name.

    Accepted names are ``Z``, ``Z^k``, ``Zn`` (cyclic of order ``n``), ``Fk`` (free of rank ``k``),
    ``Z{2,3}`` (``Z`` generated by the listed steps and their inverses) and free products of cyclic
    factors such as ``Z2*Z3`` or ``Z*Z``.

    Raises:
        :obj:`dessinator.exceptions.DessinatorError`: On an unknown name
    """
    text = name.replace(" ", "")
    if match := re.match(r"^Z\^(\d+)$", text):
        return FreeAbelianOracle(int(match.group(1)), name=text)
    if match := re.match(r"^F(\d+)$", text):
        return FreeProductOracle([None] * int(match.group(1)), name=text)
    if match := _STEPS_RE.match(text):
        steps = [int(step) for step in match.group(1).split(",") if step]
        return FreeAbelianOracle(1, [(step,) for step in steps], name=text)
    factors = text.split("*")
    orders: List[Optional[int]] = []
    for factor in factors:
        match = _FACTOR_RE.match(factor)
        if not match:
            raise DessinatorError(f"unknown group {name!r}")
        orders.append(int(match.group(1)) if match.group(1) else None)
    if orders == [None]:
        return FreeAbelianOracle(1, name=text)
    return FreeProductOracle(orders, name=text)


def builtin_oracles() -> List[GroupOracle]:
    """``Z``, ``Z^2``, ``Z6``, ``F2``, ``Z2*Z2`` and ``Z2*Z3``."""
    return [parse_oracle(name) for name in ("Z", "Z^2", "Z6", "F2", "Z2*Z2", "Z2*Z3")]


def cayley_ball(o: GroupOracle, radius: int, cap: int = BALL_CAP) -> "nx.Graph":
    """The ball of ``radius`` around the identity in the Cayley graph.

    Every node carries its word length in the ``distance`` attribute and edges join elements that
    differ by a generator, including edges between two elements on the outer sphere.

    Raises:
        :obj:`dessinator.exceptions.CapExceededError`: If the ball has more than ``cap`` vertices
    """
    if radius < 0:
        raise DessinatorError(f"radius must be nonnegative, got {radius}")
    identity = o.identity()
    graph = nx.Graph(identity=identity)
    graph.add_node(identity, distance=0)
    queue = deque([identity])
    generators = o.generators
    while queue:
        element = queue.popleft()
        distance = graph.nodes[element]["distance"]
        for generator in generators:
            neighbour = o.multiply(element, generator)
            if neighbour not in graph:
                if distance == radius:
                    continue
                if graph.number_of_nodes() >= cap:
                    raise CapExceededError(f"Cayley ball of {o.name} with radius {radius}", cap)
                graph.add_node(neighbour, distance=distance + 1)
                queue.append(neighbour)
            if neighbour != element:
                graph.add_edge(element, neighbour)
    return graph


@dataclass(frozen=True)
class EndsProfile:
    """Component count of one annulus.

    Attributes:
        inner_radius (:obj:`int`): ``r``
        outer_radius (:obj:`int`): ``R``
        component_count (:obj:`int`): Components of ``r <= d <= R`` containing a vertex at distance ``R``
        ball_sizes (:obj:`list` of :obj:`int`): ``|Ball(k)|`` for ``k = 0 .. R``
        sphere_sizes (:obj:`list` of :obj:`int`): ``|Sphere(k)|`` for ``k = 0 .. R``
    """

    inner_radius: int
    outer_radius: int
    component_count: int
    ball_sizes: List[int] = field(default_factory=list)
    sphere_sizes: List[int] = field(default_factory=list)


class EndsClass(str, Enum):
    ZERO = "0"
    ONE = "1"
    TWO = "2"
    INFINITELY_MANY = "infinitely_many"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class EndsEstimate:
    """Outcome of :func:`ends_estimate`.

    Attributes:
        group (:obj:`str`): Oracle name
        classification (:obj:`EndsClass`): The estimate
        profiles (:obj:`list` of :obj:`EndsProfile`): One profile per rung of the ladder
        sphere_sizes (:obj:`list` of :obj:`int`): ``|Sphere(k)|`` for ``k = 0 .. R``
        diagnostic (:obj:`str`): Why the estimate is what it is
    """

    group: str
    classification: EndsClass
    profiles: List[EndsProfile]
    sphere_sizes: List[int]
    diagnostic: str

    @property
    def component_counts(self) -> List[int]:
        return [profile.component_count for profile in self.profiles]


def _sphere_sizes(ball: "nx.Graph", radius: int) -> List[int]:
    sizes = [0] * (radius + 1)
    for _, distance in ball.nodes(data="distance"):
        sizes[distance] += 1
    return sizes


def annulus_profile(o: GroupOracle, inner: int, outer: int, ball: Optional["nx.Graph"] = None) -> EndsProfile:
    """Count the components of the annulus ``inner <= d <= outer`` that reach distance ``outer``."""
    if not 0 <= inner <= outer:
        raise DessinatorError(f"need 0 <= inner <= outer, got {inner} and {outer}")
    ball = cayley_ball(o, outer) if ball is None else ball
    annulus = ball.subgraph(node for node, distance in ball.nodes(data="distance") if distance >= inner)
    count = sum(
        1
        for component in nx.connected_components(annulus)
        if any(ball.nodes[node]["distance"] == outer for node in component)
    )
    sizes = _sphere_sizes(ball, outer)
    ball_sizes = [sum(sizes[: k + 1]) for k in range(outer + 1)]
    return EndsProfile(inner, outer, count, ball_sizes, sizes)


def _classify(counts: List[int]) -> Tuple[EndsClass, str]:
    if len(counts) >= 3 and counts[-3] < counts[-2] < counts[-1]:
        return EndsClass.INFINITELY_MANY, f"component counts {counts} grow over the last three rungs"
    if len(counts) >= 2 and counts[-2] == counts[-1] and counts[-1] in (1, 2):
        return EndsClass(str(counts[-1])), f"component counts {counts} settle at {counts[-1]}"
    return EndsClass.INCONCLUSIVE, f"component counts {counts} neither settle nor grow"


def ends_estimate(o: GroupOracle, r_max: int, cap: int = BALL_CAP) -> EndsEstimate:
    """Estimate the number of ends of ``o`` from the ball of radius ``r_max``.

    Args:
        o (:obj:`GroupOracle`): The group
        r_max (:obj:`int`): Outer radius ``R``, the ladder runs over ``r = 1 .. R-1``
        cap (:obj:`int`, optional): Largest ball. Default is :data:`dessinator.defaults.BALL_CAP`.

    Returns:
        :obj:`EndsEstimate`: Classification, profiles and diagnostics
    """
    try:
        ball = cayley_ball(o, r_max, cap)
    except CapExceededError as e:
        LOG.warning(f"Ends estimate for {o.name} is inconclusive: {e}")
        return EndsEstimate(o.name, EndsClass.INCONCLUSIVE, [], [], str(e))

    spheres = _sphere_sizes(ball, r_max)
    if spheres[r_max] == 0:
        return EndsEstimate(o.name, EndsClass.ZERO, [], spheres, f"ball closes with {ball.number_of_nodes()} elements")

    profiles = [annulus_profile(o, r, r_max, ball) for r in range(1, r_max)]
    classification, diagnostic = _classify([profile.component_count for profile in profiles])
    if classification is EndsClass.INCONCLUSIVE:
        LOG.warning(f"Ends estimate for {o.name} is inconclusive: {diagnostic}")
    else:
        LOG.info(f"{o.name} has {classification.value} ends: {diagnostic}")
    return EndsEstimate(o.name, classification, profiles, spheres, diagnostic)
