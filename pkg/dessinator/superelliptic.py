"""This module contains finite models of superelliptic curves ``w^n = f(z)``.

It covers the genus of the compact curve over a polynomial with ``dn`` simple roots, computed once by the
closed formula and once by Riemann-Hurwitz, the monodromy of the projection to ``z``, numerical
truncated Weierstrass products and the affine equivalence of finite zero sets.

Example:

    .. code-block:: python

        from dessinator.superelliptic import evaluate_truncated, genus_formula, sine_fixture

        print(genus_formula(3, 2))  # 4
        print(evaluate_truncated(sine_fixture(10**5), 0.5))  # close to 1

.. versionadded:: 0.1.0
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .exceptions import BranchDataError, DessinatorError, EvaluationOverflowError
from .permcore import Perm, compose, group_order, is_transitive

__all__ = [
    "BranchData",
    "TruncatedProduct",
    "canonical_degree",
    "genus_one_degree",
    "genus_formula",
    "riemann_hurwitz",
    "local_monodromy",
    "monodromy_data",
    "evaluate_truncated",
    "sine_fixture",
    "cosine_fixture",
    "affine_equivalent",
]

LOG = logging.getLogger(__name__)

TAIL_RADIUS = 0.5
"""Below this ``|z/z_k|`` a factor is evaluated through its power series tail"""
TAIL_TERMS = 60
"""Terms of the tail series, enough for double precision below :data:`TAIL_RADIUS`"""
_EXP_LIMIT = 709.0


def genus_formula(n: int, d: int) -> int:
    """Genus ``(n/2)(d(n-1) - 2) + 1`` of ``w^n = f(z)`` for ``f`` with ``dn`` simple roots.

    Raises:
        :obj:`dessinator.exceptions.BranchDataError`: If ``n < 2``, ``d < 1`` or the value is not a
            non-negative integer
    """
    if n < 2 or d < 1:
        raise BranchDataError(f"genus formula needs n >= 2 and d >= 1, got n={n}, d={d}")
    twice = n * (d * (n - 1) - 2) + 2
    if twice % 2 or twice < 0:
        raise BranchDataError(f"invalid parameter pair n={n}, d={d}: genus {twice}/2 is not a non-negative integer")
    return twice // 2


@dataclass(frozen=True)
class BranchData:
    """Branch points of ``w^n = prod (z - z_k)^(m_k)``.

    Attributes:
        n (:obj:`int`): Degree of the cover ``(z, w) -> z``
        branch_points (:obj:`tuple` of :obj:`complex`): Pairwise distinct roots ``z_k``
        multiplicities (:obj:`tuple` of :obj:`int`): ``m_k``, all ``1`` for simple roots
    """

    n: int
    branch_points: Tuple[complex, ...]
    multiplicities: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "branch_points", tuple(complex(z) for z in self.branch_points))
        if not self.multiplicities:
            object.__setattr__(self, "multiplicities", (1,) * len(self.branch_points))
        if self.n < 2:
            raise BranchDataError(f"cover degree must be at least 2, got {self.n}")
        if len(self.multiplicities) != len(self.branch_points):
            raise BranchDataError(
                f"{len(self.multiplicities)} multiplicities for {len(self.branch_points)} branch points"
            )
        if any(m < 1 for m in self.multiplicities):
            raise BranchDataError(f"multiplicities must be positive, got {list(self.multiplicities)}")
        if len(set(self.branch_points)) != len(self.branch_points):
            raise BranchDataError("branch points must be pairwise distinct")
        if self.degree % self.n:
            raise BranchDataError(
                f"n={self.n} does not divide the degree {self.degree}, infinity would be a branch point"
            )

    @classmethod
    def simple(cls, n: int, count: int) -> "BranchData":
        """``count`` simple branch points at ``1, 2, ..., count``."""
        return cls(n, tuple(complex(k) for k in range(1, count + 1)))

    @property
    def degree(self) -> int:
        """:obj:`int`: Degree of ``f``, the sum of the multiplicities"""
        return sum(self.multiplicities)


def riemann_hurwitz(b: BranchData) -> int:
    """Genus of the compact curve from ``2 - 2g = 2n - sum(n - gcd(n, m_k))``.

    Raises:
        :obj:`dessinator.exceptions.BranchDataError`: If the curve is disconnected
    """
    if gcd(b.n, *b.multiplicities) != 1:
        raise BranchDataError(f"curve w^{b.n} = f(z) is disconnected, gcd(n, m_k) = {gcd(b.n, *b.multiplicities)}")
    deficit = sum(b.n - gcd(b.n, m) for m in b.multiplicities)
    chi = 2 * b.n - deficit
    if chi % 2 or chi > 2:
        raise RuntimeError(f"Euler characteristic {chi} of {b} is not that of a closed orientable surface")
    return (2 - chi) // 2


def local_monodromy(b: BranchData) -> List[Perm]:
    """Sheet permutation around each branch point, the ``m_k``-th power of ``i -> i + 1 mod n``."""
    shift = Perm(tuple((i + 1) % b.n for i in range(b.n)))
    return [shift.power(m) for m in b.multiplicities]


def monodromy_data(b: BranchData) -> Tuple[bool, int]:
    """Connectivity and order of the monodromy group of the projection to ``z``.

    The loop around infinity is the product of all local monodromies, which is checked to be trivial.

    Returns:
        (:obj:`bool`, :obj:`int`): Whether the sheets are permuted transitively, the group order
    """
    local = local_monodromy(b)
    total = Perm.identity(b.n)
    for p in local:
        total = compose(p, total)
    if not total.is_identity():
        raise RuntimeError(f"monodromy at infinity of {b} is {total}, not the identity")
    gens = [p for p in local if not p.is_identity()] or [Perm.identity(b.n)]
    return is_transitive(gens), group_order(gens)


def canonical_degree(k: int) -> int:
    """``d(k) = k``, enough for any zero sequence tending to infinity."""
    return k


def genus_one_degree(k: int) -> int:
    """``d(k) = 1``, enough when ``sum 1/|z_k|^2`` converges."""
    return 1


def _unit(z: complex) -> complex:
    return 1 + 0j


@dataclass(frozen=True)
class TruncatedProduct:
    """``g(z) z^m0 prod (1 - z/z_k)^(m_k) E_k(z)`` over the first ``truncation`` zeros.

    The zeros are kept ordered by modulus, then by argument in ``(-pi, pi]``, and
    ``E_k(z) = exp(sum_{s <= d(k)} (z/z_k)^s / s)``.

    Attributes:
        zeros (:obj:`tuple` of :obj:`complex`): Non-zero roots ``z_k``
        multiplicities (:obj:`tuple` of :obj:`int`): ``m_k``, all ``1`` when empty
        truncation (:obj:`int`): Number of zeros retained, all of them when negative
        degree (:obj:`Callable`): The rule ``k -> d(k)``, ``k`` one based
        prefactor (:obj:`Callable`): The zero free factor ``g``
        m0 (:obj:`int`): Order of the zero at the origin
    """

    zeros: Tuple[complex, ...]
    multiplicities: Tuple[int, ...] = ()
    truncation: int = -1
    degree: Callable[[int], int] = field(default=canonical_degree, compare=False)
    prefactor: Callable[[complex], complex] = field(default=_unit, compare=False)
    m0: int = 0

    def __post_init__(self) -> None:
        multiplicities = self.multiplicities or (1,) * len(self.zeros)
        if len(multiplicities) != len(self.zeros):
            raise BranchDataError(f"{len(multiplicities)} multiplicities for {len(self.zeros)} zeros")
        if any(m < 1 for m in multiplicities) or self.m0 < 0:
            raise BranchDataError("multiplicities must be positive and m0 non-negative")
        if any(complex(z) == 0 for z in self.zeros):
            raise BranchDataError("a zero at the origin belongs in m0")
        pairs = sorted(zip((complex(z) for z in self.zeros), multiplicities), key=lambda p: _modulus_order(p[0]))
        object.__setattr__(self, "zeros", tuple(z for z, _ in pairs))
        object.__setattr__(self, "multiplicities", tuple(m for _, m in pairs))
        if self.truncation < 0 or self.truncation > len(self.zeros):
            object.__setattr__(self, "truncation", len(self.zeros))

    @property
    def retained(self) -> List[Tuple[complex, int]]:
        """:obj:`list`: ``(z_k, m_k)`` for ``k = 1 .. truncation``"""
        return list(zip(self.zeros[: self.truncation], self.multiplicities[: self.truncation]))


def _modulus_order(z: complex) -> Tuple[float, float]:
    argument = cmath.phase(z)
    return abs(z), math.pi if argument == -math.pi else argument


def _near_factor(u: complex, d: int, k: int) -> complex:
    try:
        total = cmath.log(1 - u)
        power = 1 + 0j
        for s in range(1, d + 1):
            power *= u
            total += power / s
    except OverflowError:
        raise EvaluationOverflowError(k) from None
    if not cmath.isfinite(total):
        raise EvaluationOverflowError(k)
    return total


def _log_factors(p: TruncatedProduct, z: complex) -> np.ndarray:
    retained = p.retained
    zeros = np.array([zk for zk, _ in retained], dtype=complex)
    weights = np.array([m for _, m in retained], dtype=float)
    degrees = np.array([p.degree(k) for k in range(1, len(retained) + 1)], dtype=float)
    u = z / zeros
    logs = np.zeros(len(retained), dtype=complex)

    far = np.abs(u) < TAIL_RADIUS
    if far.any():
        uf, df = u[far], degrees[far]
        with np.errstate(under="ignore"):
            power = np.exp((df + 1) * np.log(uf))
            tail = np.zeros(len(uf), dtype=complex)
            for j in range(1, TAIL_TERMS + 1):
                tail -= power / (df + j)
                power = power * uf
        logs[far] = tail

    for index in np.flatnonzero(~far):
        logs[index] = _near_factor(complex(u[index]), int(degrees[index]), int(index) + 1)
    return weights * logs


def evaluate_truncated(p: TruncatedProduct, z: complex) -> complex:
    """Evaluate the truncated product at ``z``.

    Factors with ``|z/z_k| < 0.5`` are summed through the tail ``-sum_{s > d(k)} (z/z_k)^s / s`` of
    ``log(1 - z/z_k)``, the rest directly. The logarithms are added with :func:`math.fsum` in ascending
    ``k``. A retained zero evaluates to exactly ``0``.

    Raises:
        :obj:`dessinator.exceptions.EvaluationOverflowError`: If the value leaves the floating point range
    """
    z = complex(z)
    if any(zk == z for zk, _ in p.retained) or (z == 0 and p.m0 > 0):
        return 0j
    logs = _log_factors(p, z) if p.retained else np.zeros(0, dtype=complex)
    real = math.fsum(logs.real)
    imag = math.fsum(logs.imag)
    if real > _EXP_LIMIT:
        offending = int(np.argmax(np.cumsum(logs.real) > _EXP_LIMIT)) + 1
        raise EvaluationOverflowError(offending)
    value = complex(p.prefactor(z)) * z**p.m0 * cmath.exp(complex(real, imag))
    if not cmath.isfinite(value):
        raise EvaluationOverflowError(p.truncation)
    LOG.debug(f"Truncated product with {p.truncation} zeros at {z}: {value}")
    return value


def _pi(z: complex) -> complex:
    return complex(math.pi)


def sine_fixture(N: int) -> TruncatedProduct:
    """``sin(pi z) = pi z prod (1 - z^2/n^2)`` truncated to the zeros ``+-1 .. +-N``."""
    zeros = tuple(complex(sign * n) for n in range(1, N + 1) for sign in (1, -1))
    return TruncatedProduct(zeros, truncation=2 * N, degree=genus_one_degree, prefactor=_pi, m0=1)


def cosine_fixture(N: int) -> TruncatedProduct:
    """``cos(pi z) = prod (1 - 4z^2/(2n-1)^2)`` truncated to the zeros ``+-1/2 .. +-(N - 1/2)``."""
    zeros = tuple(complex(sign * (n - 0.5)) for n in range(1, N + 1) for sign in (1, -1))
    return TruncatedProduct(zeros, truncation=2 * N, degree=genus_one_degree)


def _canonical(points: Sequence[complex]) -> List[complex]:
    return sorted((complex(z) for z in points), key=lambda z: (z.real, z.imag))


def _close(x: complex, y: complex, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(y))


def _matches(images: List[complex], target: List[complex], tol: float) -> bool:
    if all(_close(x, y, tol) for x, y in zip(_canonical(images), target)):
        return True
    unused = list(target)
    for x in images:
        for i, y in enumerate(unused):
            if _close(x, y, tol):
                del unused[i]
                break
        else:
            return False
    return True


def affine_equivalent(
    zeros_a: Sequence[complex], zeros_b: Sequence[complex], tol: float = 1e-9
) -> Optional[Tuple[complex, complex]]:
    """Find ``z -> a z + b`` with ``a != 0`` carrying the multiset ``zeros_a`` onto ``zeros_b``.

    The first two distinct points of ``zeros_a`` in ``(real, imag)`` order are sent to every ordered
    pair of distinct points of ``zeros_b`` and each candidate is verified against the whole set.

    Args:
        zeros_a (:obj:`Sequence` of :obj:`complex`): Source points
        zeros_b (:obj:`Sequence` of :obj:`complex`): Target points
        tol (:obj:`float`, optional): Relative tolerance of the match. Default is ``1e-9``.

    Returns:
        (:obj:`complex`, :obj:`complex`) | :obj:`None`: ``(a, b)``, or :obj:`None` if no map exists

    Raises:
        :obj:`dessinator.exceptions.DessinatorError`: If a set has fewer than two points or ``tol < 0``
    """
    if tol < 0:
        raise DessinatorError(f"tolerance must be non-negative, got {tol}")
    a_points, b_points = _canonical(zeros_a), _canonical(zeros_b)
    if min(len(a_points), len(b_points)) < 2:
        raise DessinatorError("affine equivalence needs at least two points in each set")
    if len(a_points) != len(b_points):
        LOG.warning(f"Cardinality mismatch: {len(a_points)} != {len(b_points)}, no affine map exists")
        return None

    p0 = a_points[0]
    p1 = next((z for z in a_points if not _close(z, p0, tol)), None)
    if p1 is None:
        # every point of a coincides, so b must collapse to a single point too
        if all(_close(z, b_points[0], tol) for z in b_points):
            return 1 + 0j, b_points[0] - p0
        return None

    for q0 in b_points:
        for q1 in b_points:
            if _close(q1, q0, tol):
                continue
            scale = (q1 - q0) / (p1 - p0)
            shift = q0 - scale * p0
            if _matches([scale * z + shift for z in a_points], b_points, tol):
                LOG.debug(f"Affine witness a={scale}, b={shift}")
                return scale, shift
    return None
