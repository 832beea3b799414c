from .dessin import Dessin, classify, enumerate_dessins, genus, new_dessin, passport
from .exceptions import DessinatorError
from .permcore import Perm

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "Dessin",
    "DessinatorError",
    "Perm",
    "classify",
    "enumerate_dessins",
    "genus",
    "new_dessin",
    "passport",
]
