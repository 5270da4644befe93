"""Automorfismos da árvore binária enraizada de profundidade n (o grupo W_n).

Folhas são numeradas 0..2^n-1 internamente (1..2^n nos formatos textuais);
o vértice j do nível n-1 cobre as folhas 2j e 2j+1. O produto xy aplica y
primeiro e depois x, de modo que a_1 a_2 = (1,3,2,4).
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Optional

from src.config import Config
from src.errors import (
    DepthError,
    EnumerationLimitError,
    InvalidAutomorphismError,
    NotInKernelError,
)
from src.f2_linalg import F2Vector

logger = logging.getLogger(__name__)

Perm = tuple[int, ...]


def validate_depth(n: int, allow_zero: bool = False) -> int:
    """Valida 1 <= n <= MAX_DEPTH (ou 0, para uso interno)."""
    if isinstance(n, bool) or not isinstance(n, int):
        raise DepthError(f"depth must be an integer, got {n!r}")
    low = 0 if allow_zero else 1
    if not low <= n <= Config.MAX_DEPTH:
        raise DepthError(f"depth {n} outside [{low}, {Config.MAX_DEPTH}]")
    return n


def compose(p: Perm, q: Perm) -> Perm:
    """(p∘q)(i) = p(q(i))."""
    return tuple(p[i] for i in q)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def is_tree_permutation(perm: Perm, n: int) -> bool:
    """Bijeção de {0..2^n-1} que preserva os blocos contíguos de todos os níveis."""
    size = 1 << n
    if len(perm) != size or sorted(perm) != list(range(size)):
        return False
    for k in range(1, n):
        for i in range(size):
            if perm[i] >> k != perm[(i >> k) << k] >> k:
                return False
    return True


def _check_same_depth(x: "TreeAutomorphism", y: "TreeAutomorphism"):
    if x.depth != y.depth:
        raise DepthError(f"depth mismatch: {x.depth} != {y.depth}")


@dataclass(frozen=True, order=True)
class TreeAutomorphism:
    """Elemento de W_n; a permutação das folhas é a forma canônica."""

    depth: int
    perm: Perm

    @classmethod
    def from_images(cls, n: int, images) -> "TreeAutomorphism":
        """Constrói a partir das imagens 0-based, validando a estrutura da árvore."""
        validate_depth(n, allow_zero=True)
        perm = tuple(int(i) for i in images)
        if not is_tree_permutation(perm, n):
            raise InvalidAutomorphismError(f"not an automorphism of T_{n}: {perm}")
        return cls(n, perm)

    @cached_property
    def semidirect(self) -> tuple[F2Vector, "TreeAutomorphism"]:
        """Forma (v, s): s = π_n(x) e v_{s(j)} = 1 quando o par sob j é trocado."""
        if self.depth == 0:
            raise DepthError("the trivial tree has no semidirect form")
        half = len(self.perm) >> 1
        s_perm = []
        v = 0
        for j in range(half):
            target = self.perm[2 * j]
            s_perm.append(target >> 1)
            if target & 1:
                v |= 1 << (target >> 1)
        return F2Vector(half, v), TreeAutomorphism(self.depth - 1, tuple(s_perm))

    @property
    def degree(self) -> int:
        return len(self.perm)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.perm))

    def __mul__(self, other: "TreeAutomorphism") -> "TreeAutomorphism":
        return multiply(self, other)

    def __pow__(self, k: int) -> "TreeAutomorphism":
        return power(self, k)

    def __str__(self) -> str:
        from src.formats import format_cycles

        return format_cycles(self)


@dataclass(frozen=True, order=True)
class KnVector:
    """Elemento (u, 1) de K_n visto como vetor de F_2^{2^{n-1}}."""

    depth: int
    bits: int = 0

    def __post_init__(self):
        validate_depth(self.depth)
        if self.bits < 0 or self.bits >> (1 << (self.depth - 1)):
            raise NotInKernelError(f"bits {self.bits:#x} do not fit K_{self.depth}")

    @property
    def length(self) -> int:
        return 1 << (self.depth - 1)

    @property
    def vector(self) -> F2Vector:
        return F2Vector(self.length, self.bits)

    @property
    def element(self) -> TreeAutomorphism:
        return from_Kn_vector(self)

    def __add__(self, other: "KnVector") -> "KnVector":
        if other.depth != self.depth:
            raise DepthError(f"depth mismatch: {self.depth} != {other.depth}")
        return KnVector(self.depth, self.bits ^ other.bits)

    def __str__(self) -> str:
        return str(self.vector)


def identity(n: int) -> TreeAutomorphism:
    validate_depth(n, allow_zero=True)
    return TreeAutomorphism(n, tuple(range(1 << n)))


def multiply(x: TreeAutomorphism, y: TreeAutomorphism) -> TreeAutomorphism:
    """Produto xy: aplica y e depois x."""
    _check_same_depth(x, y)
    return TreeAutomorphism(x.depth, compose(x.perm, y.perm))


def product(n: int, factors) -> TreeAutomorphism:
    """Produto ordenado f_1 f_2 ... f_k (identidade se vazio)."""
    result = identity(n)
    for f in factors:
        result = multiply(result, f)
    return result


def inverse(x: TreeAutomorphism) -> TreeAutomorphism:
    return TreeAutomorphism(x.depth, invert(x.perm))


def conjugate(x: TreeAutomorphism, g: TreeAutomorphism) -> TreeAutomorphism:
    """g x g^{-1}."""
    _check_same_depth(x, g)
    return TreeAutomorphism(x.depth, compose(g.perm, compose(x.perm, invert(g.perm))))


def power(x: TreeAutomorphism, k: int) -> TreeAutomorphism:
    if k < 0:
        x, k = inverse(x), -k
    result = identity(x.depth)
    base = x
    while k:
        if k & 1:
            result = multiply(result, base)
        base = multiply(base, base)
        k >>= 1
    return result


def cycle_lengths(x: TreeAutomorphism) -> list[int]:
    seen = [False] * x.degree
    lengths = []
    for start in range(x.degree):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = x.perm[i]
            length += 1
        lengths.append(length)
    return lengths


def element_order(x: TreeAutomorphism) -> int:
    return math.lcm(*cycle_lengths(x))


def commutator(x: TreeAutomorphism, y: TreeAutomorphism) -> TreeAutomorphism:
    """[x, y] = x^{-1} y^{-1} x y."""
    _check_same_depth(x, y)
    return TreeAutomorphism(
        x.depth, compose(invert(x.perm), compose(invert(y.perm), compose(x.perm, y.perm)))
    )


def commutes(x: TreeAutomorphism, y: TreeAutomorphism) -> bool:
    _check_same_depth(x, y)
    return compose(x.perm, y.perm) == compose(y.perm, x.perm)


def project_to(x: TreeAutomorphism, i: int) -> TreeAutomorphism:
    """Restrição de x aos i primeiros níveis (π_{i+1}∘...∘π_n)."""
    if not 0 <= i <= x.depth:
        raise DepthError(f"cannot project depth {x.depth} onto depth {i}")
    shift = x.depth - i
    return TreeAutomorphism(i, tuple(x.perm[j << shift] >> shift for j in range(1 << i)))


def project(x: TreeAutomorphism) -> TreeAutomorphism:
    """π_n: W_n -> W_{n-1}."""
    if x.depth == 0:
        raise DepthError("cannot project the trivial tree")
    return project_to(x, x.depth - 1)


def include(x: TreeAutomorphism, n: int) -> TreeAutomorphism:
    """Estende x fixando as folhas > 2^i (subárvore mais à esquerda)."""
    validate_depth(n)
    if x.depth > n:
        raise DepthError(f"cannot include depth {x.depth} into depth {n}")
    return TreeAutomorphism(n, x.perm + tuple(range(len(x.perm), 1 << n)))


def standard_generator(i: int, n: int) -> TreeAutomorphism:
    """a_i = (1, 2^{i-1}+1)(2, 2^{i-1}+2)...(2^{i-1}, 2^i) em W_n."""
    validate_depth(n)
    if not 1 <= i <= n:
        raise DepthError(f"standard generator index {i} outside [1, {n}]")
    half = 1 << (i - 1)
    perm = list(range(1 << n))
    for k in range(half):
        perm[k], perm[k + half] = k + half, k
    return TreeAutomorphism(n, tuple(perm))


def standard_generators(n: int) -> list[TreeAutomorphism]:
    return [standard_generator(i, n) for i in range(1, n + 1)]


def odometer(n: int) -> TreeAutomorphism:
    """x_n = a_1 a_2 ... a_n."""
    return product(n, standard_generators(n))


def is_in_Kn(x: TreeAutomorphism) -> bool:
    return all(x.perm[2 * j] >> 1 == j for j in range(len(x.perm) >> 1))


def to_Kn_vector(x: TreeAutomorphism) -> KnVector:
    if x.depth == 0 or not is_in_Kn(x):
        raise NotInKernelError(f"{x} is not in K_{x.depth}")
    return KnVector(x.depth, x.semidirect[0].bits)


def from_Kn_vector(u: KnVector) -> TreeAutomorphism:
    """(u, 1): o bit j troca as folhas 2j e 2j+1."""
    perm = []
    for j in range(u.length):
        flip = (u.bits >> j) & 1
        perm.extend((2 * j + flip, 2 * j + 1 - flip))
    return TreeAutomorphism(u.depth, tuple(perm))


def from_semidirect(v: F2Vector, s: TreeAutomorphism) -> TreeAutomorphism:
    """Inverso da forma (v, s)."""
    if v.length != len(s.perm):
        raise DepthError(f"vector of length {v.length} does not match depth {s.depth}")
    perm = []
    for j in range(v.length):
        target = s.perm[j]
        flip = (v.bits >> target) & 1
        perm.extend((2 * target + flip, 2 * target + 1 - flip))
    return TreeAutomorphism(s.depth + 1, tuple(perm))


def is_transitive(x: TreeAutomorphism) -> bool:
    """Um único ciclo de comprimento 2^n nas folhas."""
    length = 1
    i = x.perm[0]
    while i != 0:
        i = x.perm[i]
        length += 1
    return length == x.degree


def portrait_bits(x: TreeAutomorphism) -> int:
    """Rótulos dos vértices internos em ordem de largura, raiz no bit mais alto."""
    total = x.degree - 1
    bits = 0
    position = 0
    for k in range(x.depth):
        level = project_to(x, k + 1)
        for j in range(1 << k):
            if level.perm[2 * j] & 1:
                bits |= 1 << (total - 1 - position)
            position += 1
    return bits


def from_portrait_bits(n: int, bits: int) -> TreeAutomorphism:
    validate_depth(n, allow_zero=True)
    total = (1 << n) - 1
    if bits < 0 or bits >> total:
        raise InvalidAutomorphismError(f"portrait {bits:#x} does not fit depth {n}")
    perm: Perm = (0,)
    position = 0
    for k in range(n):
        nxt = []
        for j in range(1 << k):
            flip = (bits >> (total - 1 - position)) & 1
            nxt.extend((2 * perm[j] + flip, 2 * perm[j] + 1 - flip))
            position += 1
        perm = tuple(nxt)
    return TreeAutomorphism(n, perm)


def random_element(n: int, rng: Optional[random.Random] = None) -> TreeAutomorphism:
    """Elemento uniforme de W_n via retrato aleatório."""
    rng = rng or random.Random(Config.DEFAULT_SEED)
    validate_depth(n)
    return from_portrait_bits(n, rng.getrandbits((1 << n) - 1))


def random_transitive_element(n: int, rng: Optional[random.Random] = None) -> TreeAutomorphism:
    """Elemento transitivo uniforme por rejeição."""
    rng = rng or random.Random(Config.DEFAULT_SEED)
    attempts = 0
    while True:
        attempts += 1
        x = random_element(n, rng)
        if is_transitive(x):
            logger.debug(f"Transitive element found after {attempts} draws")
            return x


def random_kn_vector(n: int, rng: random.Random) -> KnVector:
    validate_depth(n)
    return KnVector(n, rng.getrandbits(1 << (n - 1)))


def all_elements(n: int) -> list[TreeAutomorphism]:
    """Todos os elementos de W_n em ordem canônica."""
    validate_depth(n, allow_zero=True)
    if n > Config.ENUMERATION_MAX_DEPTH:
        raise EnumerationLimitError(
            f"listing W_{n} exceeds ENUMERATION_MAX_DEPTH={Config.ENUMERATION_MAX_DEPTH}"
        )
    return sorted(from_portrait_bits(n, b) for b in range(1 << ((1 << n) - 1)))


def kn_elements(n: int) -> Iterator[KnVector]:
    """K_n em ordem crescente do inteiro empacotado."""
    validate_depth(n)
    return (KnVector(n, b) for b in range(1 << (1 << (n - 1))))
