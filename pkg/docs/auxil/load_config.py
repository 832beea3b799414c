"""Project metadata for the Sphinx configuration, read from the ``[tool.poetry]`` table."""

import configparser
from ast import literal_eval
from datetime import date
from pathlib import Path
from typing import Dict, Mapping

PYPROJECT = Path(__file__).parent.parent.parent / "pyproject.toml"
FIRST_YEAR = 2024


def load_config(pyproject: Path = PYPROJECT) -> Dict[str, str]:
    parser = configparser.ConfigParser()
    parser.read(str(pyproject))
    poetry: Mapping[str, str] = parser["tool.poetry"] if parser.has_section("tool.poetry") else {}

    def option(name: str, fallback: str) -> str:
        if name not in poetry:
            return fallback
        value = literal_eval(poetry[name])
        return ", ".join(value) if isinstance(value, list) else str(value)

    authors = option("authors", "Nachtalb")
    return {
        "name": option("name", "dessinator"),
        "description": option("description", ""),
        "version": option("version", "0.0.0"),
        "authors": authors,
        "copyright": f"{FIRST_YEAR}-{date.today().year}, {authors}",
    }


CONFIG = load_config()
