from typing import Iterable, Tuple


def pair(*parts: str) -> str:
    """Canonical identifier of a pair (x, a) as "(x|a)", or of a longer record "(f|k|b)"."""
    return "(" + "|".join(parts) + ")"


def unpair(ident: str) -> Tuple[str, ...]:
    """
    Splits an identifier built by `pair` back into its components.

    Nested identifiers are honoured: only separators at bracket depth one split.

    Raises:
    - ValueError: If the identifier is not a pair encoding.
    """
    if not (ident.startswith("(") and ident.endswith(")")):
        raise ValueError(f"{ident!r} is not a pair identifier")
    parts, depth, start = [], 0, 1
    for index, char in enumerate(ident):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif char == "|" and depth == 1:
            parts.append(ident[start:index])
            start = index + 1
    if not parts:
        raise ValueError(f"{ident!r} is not a pair identifier")
    parts.append(ident[start:-1])
    return tuple(parts)


def tuple_id(parts: Iterable[str]) -> str:
    """Identifier of a finite tuple of identifiers: "[a,b,c]"."""
    return "[" + ",".join(parts) + "]"


def untuple_id(ident: str) -> Tuple[str, ...]:
    if not (ident.startswith("[") and ident.endswith("]")):
        raise ValueError(f"{ident!r} is not a tuple identifier")
    body = ident[1:-1]
    if not body:
        return ()
    parts, depth, start = [], 0, 0
    for index, char in enumerate(body):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif char == "," and depth == 0:
            parts.append(body[start:index])
            start = index + 1
    parts.append(body[start:])
    return tuple(parts)
