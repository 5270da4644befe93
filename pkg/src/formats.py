"""Formatos textuais de elementos: ciclos, lista de imagens e retrato em hex."""

import logging
import re
from typing import Literal

from sympy.combinatorics import Permutation

from src.errors import InvalidAutomorphismError, ParseError
from src.f2_linalg import F2Vector
from src.tree_automorphisms import (
    TreeAutomorphism,
    from_portrait_bits,
    portrait_bits,
    validate_depth,
)

logger = logging.getLogger(__name__)

ElementStyle = Literal["cycles", "images", "portrait"]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def format_cycles(x: TreeAutomorphism) -> str:
    """Notação de ciclos disjuntos, 1-based; identidade = "()"."""
    cycles = Permutation(list(x.perm)).cyclic_form
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(i + 1) for i in cycle) + ")" for cycle in cycles)


def parse_cycles(text: str, n: int) -> TreeAutomorphism:
    validate_depth(n)
    size = 1 << n
    compact = re.sub(r"\s+", "", text)
    if not compact or _CYCLE_RE.sub("", compact):
        raise ParseError(f"invalid cycle notation: {text!r}")

    cycles = []
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(compact):
        if not body:
            continue
        try:
            points = [int(p) - 1 for p in body.split(",")]
        except ValueError:
            raise ParseError(f"invalid cycle {body!r} in {text!r}")
        for p in points:
            if not 0 <= p < size:
                raise ParseError(f"point {p + 1} outside 1..{size}")
            if p in seen:
                raise ParseError(f"cycles in {text!r} are not disjoint")
            seen.add(p)
        cycles.append(points)

    perm = Permutation(cycles, size=size).array_form if cycles else list(range(size))
    return _checked(n, perm, text)


def format_images(x: TreeAutomorphism) -> str:
    return "[" + ",".join(str(i + 1) for i in x.perm) + "]"


def parse_images(text: str, n: int) -> TreeAutomorphism:
    validate_depth(n)
    compact = re.sub(r"\s+", "", text)
    if not (compact.startswith("[") and compact.endswith("]")):
        raise ParseError(f"invalid image list: {text!r}")
    try:
        images = [int(p) - 1 for p in compact[1:-1].split(",")] if compact[1:-1] else []
    except ValueError:
        raise ParseError(f"invalid image list: {text!r}")
    if len(images) != 1 << n:
        raise ParseError(f"image list has {len(images)} entries, expected {1 << n}")
    return _checked(n, images, text)


def portrait_width(n: int) -> int:
    return ((1 << n) - 1 + 3) // 4


def format_portrait(x: TreeAutomorphism) -> str:
    """Retrato em hex com zeros à esquerda; raiz no bit mais significativo."""
    return f"{portrait_bits(x):0{portrait_width(x.depth)}x}"


def parse_portrait(text: str, n: int) -> TreeAutomorphism:
    validate_depth(n)
    compact = text.strip().lower()
    if compact.startswith("0x"):
        compact = compact[2:]
    if not compact or not re.fullmatch(r"[0-9a-f]+", compact):
        raise ParseError(f"invalid portrait: {text!r}")
    try:
        return from_portrait_bits(n, int(compact, 16))
    except InvalidAutomorphismError as e:
        raise ParseError(str(e))


def format_element(x: TreeAutomorphism, style: ElementStyle = "cycles") -> str:
    if style == "cycles":
        return format_cycles(x)
    if style == "images":
        return format_images(x)
    if style == "portrait":
        return format_portrait(x)
    raise ParseError(f"unknown element style: {style}")


def parse_element(text: str, n: int) -> TreeAutomorphism:
    """Detecta o formato pelo primeiro caractere."""
    compact = text.strip()
    if compact.startswith("("):
        return parse_cycles(compact, n)
    if compact.startswith("["):
        return parse_images(compact, n)
    return parse_portrait(compact, n)


def split_top_level(text: str) -> list[str]:
    """Separa por ',' ou ';' fora de parênteses e colchetes."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch in ",;" and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_generator_list(text: str, n: int) -> list[TreeAutomorphism]:
    """Lista de geradores; string vazia gera o grupo trivial."""
    return [parse_element(part, n) for part in split_top_level(text or "")]


def format_generator_list(gens, style: ElementStyle = "cycles") -> str:
    return ",".join(format_element(g, style) for g in gens)


def format_vector(v: F2Vector) -> str:
    return str(v)


def parse_vector(text: str) -> F2Vector:
    return F2Vector.from_string(text)


def _checked(n: int, perm, text: str) -> TreeAutomorphism:
    try:
        return TreeAutomorphism.from_images(n, perm)
    except InvalidAutomorphismError as e:
        raise ParseError(f"{text!r} is not a tree automorphism: {e}")
