"""This module contains utility functions for the JSON documents dessinator reads and writes."""

import json
from pathlib import Path
from typing import Any, Dict, Union

from .defaults import SCHEMA_VERSION
from .exceptions import DessinatorError

__all__ = ["dumps", "versioned", "read_json", "write_json"]


def dumps(payload: Any) -> str:
    """Serialize ``payload`` deterministically, sorted keys and two space indentation."""
    return json.dumps(payload, sort_keys=True, indent=2)


def versioned(payload: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of ``payload`` carrying the ``schema_version`` field."""
    return {"schema_version": SCHEMA_VERSION, **payload}


def read_json(in_file: Union[str, Path]) -> Any:
    """Load a JSON document.

    Args:
        in_file (:obj:`str` | :obj:`Path`): Input file path.

    Raises:
        :obj:`dessinator.exceptions.DessinatorError`: If the file is missing or not valid JSON
    """
    try:
        return json.loads(Path(in_file).read_text(encoding="utf-8"))
    except OSError as e:
        raise DessinatorError(f"could not read {in_file}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise DessinatorError(f"{in_file} is not valid JSON: {e.msg} at line {e.lineno}") from None


def write_json(payload: Any, out_file: Union[str, Path]) -> None:
    """Write ``payload`` with :func:`dumps` and a trailing newline.

    Args:
        payload (:obj:`Any`): JSON serializable data.
        out_file (:obj:`str` | :obj:`Path`): Output file path.
    """
    Path(out_file).write_text(dumps(payload) + "\n", encoding="utf-8")
