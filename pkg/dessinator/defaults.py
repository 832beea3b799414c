"""This module contains the default constants and the runtime settings of dessinator.

Every cap an operation accepts as a keyword argument takes its default from here.

.. versionadded:: 0.1.0 Added the caps and :class:`Settings`.
"""

import os
from dataclasses import dataclass, fields
from typing import Mapping, Optional

from .exceptions import ConfigurationError

__all__ = [
    "MAX_COSETS",
    "MAX_COSETS_ENV",
    "ENUMERATION_CAP",
    "CROSSCHECK_CAP",
    "NORMALIZATION_CAP",
    "COVER_EDGE_CAP",
    "BALL_CAP",
    "BRUTE_FORCE_CAP",
    "SCHEMA_VERSION",
    "Settings",
]

MAX_COSETS = 10**6
"""Default limit on the number of cosets a Todd-Coxeter run may define"""
MAX_COSETS_ENV = "DESSINATOR_MAX_COSETS"
"""Environment variable overriding :data:`MAX_COSETS`"""
ENUMERATION_CAP = 8
"""Largest edge count accepted by :func:`dessinator.dessin.enumerate_dessins`"""
CROSSCHECK_CAP = 12
"""Largest edge count accepted by :func:`dessinator.triangle.aut_normalizer_crosscheck`"""
NORMALIZATION_CAP = 6
"""Largest ``n`` accepted by :func:`dessinator.modular.a4_normalization_check`"""
COVER_EDGE_CAP = 10**6
"""Largest edge count a homology cover tower may reach"""
BALL_CAP = 10**6
"""Largest number of vertices of a Cayley ball"""
BRUTE_FORCE_CAP = 8
"""Largest degree on which the word-closure oracle is allowed to run"""
SCHEMA_VERSION = 1
"""Version of every JSON payload written by the command line"""


@dataclass(frozen=True)
class Settings:
    """Runtime settings, one field per cap.

    Attributes:
        max_cosets (:obj:`int`): Coset enumeration limit
        enumeration_cap (:obj:`int`): Dessin census limit
        crosscheck_cap (:obj:`int`): Normalizer cross-check limit
        normalization_cap (:obj:`int`): Limit on ``n`` for the :math:`A^4` normalization check
        cover_edge_cap (:obj:`int`): Homology cover tower limit
        ball_cap (:obj:`int`): Cayley ball limit
    """

    max_cosets: int = MAX_COSETS
    enumeration_cap: int = ENUMERATION_CAP
    crosscheck_cap: int = CROSSCHECK_CAP
    normalization_cap: int = NORMALIZATION_CAP
    cover_edge_cap: int = COVER_EDGE_CAP
    ball_cap: int = BALL_CAP

    def __post_init__(self) -> None:
        for field in fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int) or value < 1:
                raise ConfigurationError(f"{field.name} must be a positive integer, got {value!r}")

    @classmethod
    def from_env(cls, environ: Optional[Mapping[str, str]] = None) -> "Settings":
        """Build the settings, applying :data:`MAX_COSETS_ENV` when it is set.

        Args:
            environ (:obj:`Mapping`, optional): Environment to read. Default is :obj:`os.environ`.

        Returns:
            :obj:`Settings`: The settings

        Raises:
            :obj:`dessinator.exceptions.ConfigurationError`: If the override is not a positive integer
        """
        environ = os.environ if environ is None else environ
        raw = environ.get(MAX_COSETS_ENV)
        if raw is None or not raw.strip():
            return cls()
        try:
            max_cosets = int(raw)
        except ValueError:
            raise ConfigurationError(f"{MAX_COSETS_ENV} must be a positive integer, got {raw!r}") from None
        return cls(max_cosets=max_cosets)
