from typing import Any, List


def autodoc_process_bases(app: Any, name: str, obj: Any, option: Any, bases: List[Any]) -> None:
    """Show ``(str, Enum)`` bases such as :class:`dessinator.triangle.Geometry` as standard library links."""
    for idx, raw_base in enumerate(bases):
        base = str(raw_base)
        if base == "<class 'str'>":
            bases[idx] = ":class:`str`"
        elif "Enum" in base:
            bases[idx] = ":class:`enum.Enum`"
