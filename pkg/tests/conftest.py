import random

import pytest

from dessinator.dessin import Dessin
from dessinator.permcore import Perm


def perm(text: str, degree: int) -> Perm:
    return Perm.parse(text, degree)


def random_perm(rng: random.Random, degree: int) -> Perm:
    images = list(range(degree))
    rng.shuffle(images)
    return Perm(tuple(images))


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


@pytest.fixture
def segment() -> Dessin:
    """One edge on the sphere."""
    return Dessin(Perm.identity(1), Perm.identity(1))


@pytest.fixture
def torus() -> Dessin:
    """``sigma = tau = (0 1 2)``, genus one of type ``(3,3,3)``."""
    return Dessin(perm("(0 1 2)", 3), perm("(0 1 2)", 3))


@pytest.fixture
def star() -> Dessin:
    """``sigma = (0 1)``, ``tau`` trivial: a black vertex with two white leaves."""
    return Dessin(perm("(0 1)", 2), Perm.identity(2))


@pytest.fixture
def genus_two() -> Dessin:
    """``sigma = tau = (0 1 2 3 4)``, genus two of type ``(5,5,5)``."""
    return Dessin(perm("(0 1 2 3 4)", 5), perm("(0 1 2 3 4)", 5))


@pytest.fixture
def chiral() -> Dessin:
    """A six edge dessin that is not isomorphic to its mirror image."""
    return Dessin(perm("(0 1 2 3 4 5)", 6), perm("(0 1 3)", 6))
