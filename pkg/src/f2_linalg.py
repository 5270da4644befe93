"""Álgebra linear e afim sobre F_2 com vetores empacotados em inteiros.

A coordenada i (1-based na notação do artigo, 0-based aqui) é o bit i do
inteiro. Subespaços guardam uma base em forma escalonada reduzida cujo pivô
é o bit menos significativo de cada linha, em ordem crescente; a forma é
canônica, então igualdade de subespaços é igualdade de tuplas.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Iterator, Optional, Sequence

from src.errors import DimensionError, ParseError

if TYPE_CHECKING:
    from src.tree_automorphisms import TreeAutomorphism

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class F2Vector:
    """Vetor de F_2^m empacotado."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 1:
            raise DimensionError(f"vector length must be positive, got {self.length}")
        if self.bits < 0 or self.bits >> self.length:
            raise DimensionError(f"bits {self.bits:#x} do not fit length {self.length}")

    @classmethod
    def zero(cls, length: int) -> "F2Vector":
        return cls(length, 0)

    @classmethod
    def unit(cls, length: int, index: int) -> "F2Vector":
        """Vetor canônico e_index (0-based)."""
        return cls(length, 1 << index)

    @classmethod
    def from_string(cls, text: str) -> "F2Vector":
        """Lê uma string de bits, coordenada 1 à esquerda."""
        text = text.strip()
        if not text or any(ch not in "01" for ch in text):
            raise ParseError(f"invalid bit string: {text!r}")
        bits = 0
        for i, ch in enumerate(text):
            if ch == "1":
                bits |= 1 << i
        return cls(len(text), bits)

    @classmethod
    def from_coordinates(cls, coordinates: Sequence[int]) -> "F2Vector":
        bits = 0
        for i, c in enumerate(coordinates):
            if c & 1:
                bits |= 1 << i
        return cls(len(coordinates), bits)

    def _check(self, other: "F2Vector"):
        if other.length != self.length:
            raise DimensionError(f"length mismatch: {self.length} != {other.length}")

    def __add__(self, other: "F2Vector") -> "F2Vector":
        self._check(other)
        return F2Vector(self.length, self.bits ^ other.bits)

    __sub__ = __add__

    def __neg__(self) -> "F2Vector":
        return self

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.length:
            raise IndexError(index)
        return (self.bits >> index) & 1

    def __iter__(self) -> Iterator[int]:
        return (self[i] for i in range(self.length))

    def __len__(self) -> int:
        return self.length

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.length))

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def is_zero(self) -> bool:
        return self.bits == 0


def _lowest_bit(value: int) -> int:
    return (value & -value).bit_length() - 1


def _rref(vectors: Iterable[int]) -> tuple[int, ...]:
    """Escalona e reduz; pivô = bit mais baixo."""
    pivots: dict[int, int] = {}
    for v in vectors:
        for p, row in pivots.items():
            if (v >> p) & 1:
                v ^= row
        if not v:
            continue
        p = _lowest_bit(v)
        for q, row in pivots.items():
            if (row >> p) & 1:
                pivots[q] = row ^ v
        pivots[p] = v
    return tuple(pivots[p] for p in sorted(pivots))


@dataclass(frozen=True)
class F2Subspace:
    """Subespaço de F_2^m em base escalonada reduzida."""

    length: int
    rows: tuple[int, ...] = ()

    @property
    def dimension(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> list[F2Vector]:
        return [F2Vector(self.length, r) for r in self.rows]

    @property
    def size(self) -> int:
        return 1 << len(self.rows)

    def reduce(self, bits: int) -> int:
        """Representante canônico de bits + self."""
        for row in self.rows:
            if (bits >> _lowest_bit(row)) & 1:
                bits ^= row
        return bits

    def contains_bits(self, bits: int) -> bool:
        return self.reduce(bits) == 0

    def __contains__(self, v: F2Vector) -> bool:
        if v.length != self.length:
            raise DimensionError(f"length mismatch: {v.length} != {self.length}")
        return self.contains_bits(v.bits)

    def members_bits(self) -> Iterator[int]:
        for mask in range(1 << len(self.rows)):
            bits = 0
            for j, row in enumerate(self.rows):
                if (mask >> j) & 1:
                    bits ^= row
            yield bits

    def members(self) -> Iterator[F2Vector]:
        return (F2Vector(self.length, b) for b in self.members_bits())

    def is_subspace_of(self, other: "F2Subspace") -> bool:
        return all(other.contains_bits(r) for r in self.rows)

    def __str__(self) -> str:
        inner = ", ".join(str(v) for v in self.basis)
        return f"span{{{inner}}}"


def span(length: int, vectors: Iterable[F2Vector | int]) -> F2Subspace:
    """Subespaço gerado pelos vetores dados."""
    bits = []
    for v in vectors:
        if isinstance(v, F2Vector):
            if v.length != length:
                raise DimensionError(f"length mismatch: {v.length} != {length}")
            bits.append(v.bits)
        else:
            bits.append(v)
    return F2Subspace(length, _rref(bits))


def full_space(length: int) -> F2Subspace:
    return F2Subspace(length, tuple(1 << i for i in range(length)))


def zero_space(length: int) -> F2Subspace:
    return F2Subspace(length, ())


def _check_lengths(a: F2Subspace, b: F2Subspace):
    if a.length != b.length:
        raise DimensionError(f"ambient length mismatch: {a.length} != {b.length}")


def subspace_sum(a: F2Subspace, b: F2Subspace) -> F2Subspace:
    """A + B."""
    _check_lengths(a, b)
    return F2Subspace(a.length, _rref(a.rows + b.rows))


def intersect(a: F2Subspace, b: F2Subspace) -> F2Subspace:
    """A ∩ B pelo algoritmo de Zassenhaus."""
    _check_lengths(a, b)
    m = a.length
    mask = (1 << m) - 1
    stacked = [r | (r << m) for r in a.rows] + list(b.rows)
    common = [row >> m for row in _rref(stacked) if not row & mask]
    return F2Subspace(m, _rref(common))


def contains(a: F2Subspace, v: F2Vector) -> bool:
    return v in a


def solve_linear(pairs: Iterable[tuple[int, int]], target: int, length: int) -> Optional[int]:
    """Resolve sum(imagens escolhidas) = target; devolve a soma das pré-imagens."""
    mask = (1 << length) - 1
    rows = _rref(image | (preimage << length) for image, preimage in pairs)
    w = target
    for row in rows:
        p = _lowest_bit(row)
        if p >= length:
            break
        if (w >> p) & 1:
            w ^= row
    if w & mask:
        return None
    return w >> length


def decompose(
    v: F2Vector, a: F2Subspace, b: F2Subspace
) -> Optional[tuple[F2Vector, F2Vector]]:
    """Par (x, y) com x ∈ A, y ∈ B e x + y = v, se existir."""
    _check_lengths(a, b)
    if v.length != a.length:
        raise DimensionError(f"length mismatch: {v.length} != {a.length}")
    pairs = [(r, r) for r in a.rows] + [(r, 0) for r in b.rows]
    x = solve_linear(pairs, v.bits, v.length)
    if x is None:
        return None
    return F2Vector(v.length, x), F2Vector(v.length, v.bits ^ x)


@dataclass(frozen=True)
class F2AffineSet:
    """Conjunto afim offset + direção, ou vazio (offset None)."""

    length: int
    offset: Optional[int] = None
    direction: Optional[F2Subspace] = None

    @classmethod
    def empty(cls, length: int) -> "F2AffineSet":
        return cls(length)

    @classmethod
    def coset(cls, offset: int, direction: F2Subspace) -> "F2AffineSet":
        # offset canônico: o mesmo conjunto tem sempre a mesma representação
        return cls(direction.length, direction.reduce(offset), direction)

    def is_empty(self) -> bool:
        return self.offset is None

    @property
    def size(self) -> int:
        return 0 if self.offset is None else self.direction.size

    def contains_bits(self, bits: int) -> bool:
        if self.offset is None:
            return False
        return self.direction.contains_bits(bits ^ self.offset)

    def __contains__(self, u: F2Vector) -> bool:
        if u.length != self.length:
            raise DimensionError(f"length mismatch: {u.length} != {self.length}")
        return self.contains_bits(u.bits)

    def members_bits(self) -> Iterator[int]:
        if self.offset is None:
            return iter(())
        return (self.offset ^ d for d in self.direction.members_bits())

    def members(self) -> Iterator[F2Vector]:
        return (F2Vector(self.length, b) for b in self.members_bits())

    def __str__(self) -> str:
        if self.offset is None:
            return "EMPTY"
        return f"{F2Vector(self.length, self.offset)} + {self.direction}"


def permute_bits(perm: Sequence[int], bits: int) -> int:
    """Bit i vai para a posição perm[i]."""
    out = 0
    i = 0
    while bits:
        if bits & 1:
            out |= 1 << perm[i]
        bits >>= 1
        i += 1
    return out


def permute_coordinates(s: "TreeAutomorphism", v: F2Vector) -> F2Vector:
    """s(v) = (v_{s^{-1}(1)}, ..., v_{s^{-1}(m)})."""
    if len(s.perm) != v.length:
        raise DimensionError(f"automorphism acts on {len(s.perm)} coordinates, vector has {v.length}")
    return F2Vector(v.length, permute_bits(s.perm, v.bits))


def orbit_partition(perms: Iterable[Sequence[int]], length: int) -> list[list[int]]:
    """Órbitas de {0..length-1} sob o grupo gerado pelas permutações."""
    parent = list(range(length))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for perm in perms:
        if len(perm) != length:
            raise DimensionError(f"permutation of degree {len(perm)} on {length} coordinates")
        for i, j in enumerate(perm):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    classes: dict[int, list[int]] = {}
    for i in range(length):
        classes.setdefault(find(i), []).append(i)
    return [classes[root] for root in sorted(classes)]


def indicator_span(classes: Iterable[Iterable[int]], length: int) -> F2Subspace:
    """Span dos indicadores de classes disjuntas (já em forma reduzida)."""
    rows = []
    for cls in classes:
        bits = 0
        for i in cls:
            bits |= 1 << i
        if bits:
            rows.append(bits)
    rows.sort(key=_lowest_bit)
    return F2Subspace(length, tuple(rows))


def fix_subspace(s: "TreeAutomorphism", length: Optional[int] = None) -> F2Subspace:
    """Fix(s): vetores constantes nos ciclos de s."""
    m = len(s.perm)
    if length is not None and length != m:
        raise DimensionError(f"automorphism acts on {m} coordinates, asked for {length}")
    return indicator_span(orbit_partition([s.perm], m), m)


def fix_subspace_of_set(automorphisms: Iterable["TreeAutomorphism"], length: int) -> F2Subspace:
    """Interseção dos Fix; vetores constantes nas órbitas do grupo gerado."""
    return indicator_span(orbit_partition((a.perm for a in automorphisms), length), length)


@lru_cache(maxsize=4096)
def _twisted_system(perm: tuple[int, ...]) -> tuple[int, ...]:
    m = len(perm)
    # e_i + t(e_i) com a pré-imagem e_i nos bits altos
    return _rref(((1 << i) ^ (1 << perm[i])) | (1 << (i + m)) for i in range(m))


def solve_twisted(t: "TreeAutomorphism", c: F2Vector) -> F2AffineSet:
    """{u : u + t(u) = c}, vazio ou uma classe lateral de Fix(t)."""
    m = len(t.perm)
    if c.length != m:
        raise DimensionError(f"automorphism acts on {m} coordinates, vector has {c.length}")
    rows = _twisted_system(t.perm)
    mask = (1 << m) - 1
    w = c.bits
    for row in rows:
        p = _lowest_bit(row)
        if p >= m:
            break
        if (w >> p) & 1:
            w ^= row
    if w & mask:
        return F2AffineSet.empty(m)
    return F2AffineSet.coset(w >> m, fix_subspace(t))
