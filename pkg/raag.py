"""
Partially Commutative Group on the Symbols alpha_h
Word problem by piling, truncated Magnus expansion over trace monomials and
the resulting bi-invariant order
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from itertools import combinations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

import plmap
from kernel_config import load_config
from plmap import NotPhi, Order, PLMap

logger = logging.getLogger(__name__)


class RaagError(ValueError):
    """Base class for partially commutative group errors"""


class ExpansionDepthExceeded(RaagError):
    pass


class Sign(Enum):
    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1


@total_ordering
@dataclass(frozen=True, eq=True)
class Generator:
    """The symbol alpha_{h,leaf}; leaf numbers the leaf cell the symbol comes from"""

    h: PLMap
    leaf: int = 1

    def __post_init__(self):
        if not plmap.is_phi(self.h):
            raise NotPhi(f"{self.h} is not in Phi")
        if self.leaf < 1:
            raise RaagError(f"Leaf index must be positive, got {self.leaf}")

    def __lt__(self, other: "Generator") -> bool:
        if not isinstance(other, Generator):
            return NotImplemented
        order = plmap.bs_compare(self.h, other.h)
        if order is Order.EQUAL:
            return self.leaf < other.leaf
        return order is Order.LESS

    def commutes_with(self, other: "Generator") -> bool:
        return self == other or plmap.interiors_disjoint(self.h, other.h)

    def __str__(self) -> str:
        suffix = f"#{self.leaf}" if self.leaf != 1 else ""
        return f"alpha{self.h}{suffix}"


@dataclass(frozen=True)
class Letter:
    generator: Generator
    sign: int

    def inverse(self) -> "Letter":
        return Letter(self.generator, -self.sign)


@dataclass(frozen=True)
class AWord:
    letters: Tuple[Letter, ...] = ()

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "AWord") -> "AWord":
        return multiply(self, other)

    @property
    def generators(self) -> List[Generator]:
        """Distinct generators in increasing order"""
        return sorted({letter.generator for letter in self.letters})


EMPTY = AWord()


def commutes(h1: PLMap, h2: PLMap) -> bool:
    return plmap.interiors_disjoint(h1, h2)


def gen(h: PLMap, sign: int = 1, leaf: int = 1) -> AWord:
    if sign not in (1, -1):
        raise RaagError(f"Sign must be +1 or -1, got {sign}")
    return AWord((Letter(Generator(h, leaf), sign),))


def word(letters: Iterable[Tuple[Generator, int]]) -> AWord:
    return AWord(tuple(Letter(g, s) for g, s in letters))


def multiply(w1: AWord, w2: AWord) -> AWord:
    return AWord(w1.letters + w2.letters)


def invert(w: AWord) -> AWord:
    return AWord(tuple(letter.inverse() for letter in reversed(w.letters)))


def relabel(w: AWord, g: PLMap) -> AWord:
    """Right action of F: alpha_{h,i} -> alpha_{hg,i}"""
    return AWord(
        tuple(
            Letter(Generator(plmap.act(letter.generator.h, g), letter.generator.leaf), letter.sign)
            for letter in w.letters
        )
    )


def commutation_graph(generators: Sequence[Generator]) -> nx.Graph:
    """Vertices are alphabet positions, edges join distinct commuting generators"""
    graph = nx.Graph()
    graph.add_nodes_from(range(len(generators)))
    for i, j in combinations(range(len(generators)), 2):
        if generators[i].commutes_with(generators[j]):
            graph.add_edge(i, j)
    return graph


class _Piling:
    """
    Heap of pieces for a fixed alphabet: one pile per generator, a letter
    pushes itself on its own pile and a blocker on the piles of the generators
    it does not commute with.
    """

    def __init__(self, alphabet: Sequence[Generator]):
        self.alphabet = list(alphabet)
        self.index = {g: i for i, g in enumerate(self.alphabet)}
        size = len(self.alphabet)
        blockers = nx.complement(commutation_graph(self.alphabet))
        self.non_commuters: List[List[int]] = [sorted(blockers[i]) for i in range(size)]
        self.piles = [deque() for _ in range(size)]
        self.pile_count = 0

    def push(self, letter: Letter) -> None:
        i, epsilon = self.index[letter.generator], letter.sign
        if self.piles[i] and self.piles[i][-1] == -epsilon:
            self.pile_count -= 1
            self.piles[i].pop()
            for j in self.non_commuters[i]:
                self.piles[j].pop()
        else:
            self.pile_count += 1
            self.piles[i].append(epsilon)
            for j in self.non_commuters[i]:
                self.piles[j].append(0)

    def depile(self) -> List[Letter]:
        letters = []
        while self.pile_count:
            i = next(j for j, pile in enumerate(self.piles) if pile and pile[0])
            letters.append(Letter(self.alphabet[i], self.piles[i][0]))
            self.pile_count -= 1
            self.piles[i].popleft()
            for j in self.non_commuters[i]:
                self.piles[j].popleft()
        return letters


def reduce_word(w: AWord) -> AWord:
    """Lex-least reduced representative (generators ordered by phi order, then leaf)"""
    piling = _Piling(w.generators)
    for letter in w.letters:
        piling.push(letter)
    return AWord(tuple(piling.depile()))


def is_trivial(w: AWord) -> bool:
    return len(reduce_word(w)) == 0


Monomial = Tuple[int, ...]


def _canonical_monomial(key: Sequence[int], commute: nx.Graph) -> Monomial:
    """Lex-least word among those equal to key in the trace monoid"""
    rest = list(key)
    out = []
    while rest:
        best = None
        seen: List[int] = []
        for position, letter in enumerate(rest):
            if letter not in seen and all(commute.has_edge(letter, other) for other in rest[:position]):
                if best is None or letter < rest[best]:
                    best = position
            seen.append(letter)
        out.append(rest.pop(best))
    return tuple(out)


@dataclass(frozen=True)
class TracePoly:
    """Truncated polynomial in non-commuting X_g modulo the commutation of the generators"""

    generators: Tuple[Generator, ...]
    degree: int
    coefficients: Dict[Monomial, int] = field(default_factory=dict, hash=False)

    def homogeneous(self, k: int) -> Dict[Monomial, int]:
        return {key: c for key, c in self.coefficients.items() if len(key) == k}

    def terms(self) -> List[Tuple[Tuple[Generator, ...], int]]:
        return [
            (tuple(self.generators[i] for i in key), c)
            for key, c in sorted(self.coefficients.items(), key=lambda item: (len(item[0]), item[0]))
        ]

    def is_one(self) -> bool:
        return self.coefficients == {(): 1}

    def __mul__(self, other: "TracePoly") -> "TracePoly":
        if self.generators != other.generators:
            raise RaagError("Trace polynomials over different alphabets cannot be multiplied")
        degree = min(self.degree, other.degree)
        commute = commutation_graph(self.generators)
        return TracePoly(self.generators, degree, _multiply(self.coefficients, other.coefficients, degree, commute))


def _multiply(
    left: Dict[Monomial, int], right: Dict[Monomial, int], degree: int, commute: nx.Graph
) -> Dict[Monomial, int]:
    result: Dict[Monomial, int] = {}
    for k1, c1 in left.items():
        for k2, c2 in right.items():
            if len(k1) + len(k2) > degree:
                continue
            key = _canonical_monomial(k1 + k2, commute)
            result[key] = result.get(key, 0) + c1 * c2
    return {key: c for key, c in result.items() if c}


def magnus(w: AWord, d: int, alphabet: Optional[Sequence[Generator]] = None) -> TracePoly:
    """Image of w under alpha -> 1 + X_alpha, truncated above degree d"""
    if d < 1:
        raise RaagError(f"Magnus degree must be positive, got {d}")
    generators = tuple(alphabet) if alphabet is not None else tuple(w.generators)
    index = {g: i for i, g in enumerate(generators)}
    commute = commutation_graph(generators)
    poly: Dict[Monomial, int] = {(): 1}
    for letter in w.letters:
        i = index[letter.generator]
        if letter.sign > 0:
            factor = {(): 1, (i,): 1}
        else:
            factor = {(i,) * j: (-1) ** j for j in range(d + 1)}
        poly = _multiply(poly, factor, d, commute)
    return TracePoly(generators, d, poly)


def sign(w: AWord, max_degree: Optional[int] = None) -> Sign:
    """Sign of the lex-greatest monomial in the lowest nonzero degree of the Magnus expansion"""
    if max_degree is None:
        max_degree = load_config().magnus_max_degree
    reduced = reduce_word(w)
    if not reduced.letters:
        return Sign.ZERO
    for d in range(1, max_degree + 1):
        part = magnus(reduced, d).homogeneous(d)
        if part:
            leading = max(part)
            logger.debug(f"Magnus expansion of a {len(reduced)}-letter word is nonzero at degree {d}")
            return Sign.POSITIVE if part[leading] > 0 else Sign.NEGATIVE
    raise ExpansionDepthExceeded(f"No nonzero Magnus term up to degree {max_degree}")


def compare(w1: AWord, w2: AWord, max_degree: Optional[int] = None) -> Order:
    """LESS iff w1^-1 w2 is positive"""
    s = sign(multiply(invert(w1), w2), max_degree=max_degree)
    if s is Sign.POSITIVE:
        return Order.LESS
    if s is Sign.NEGATIVE:
        return Order.GREATER
    return Order.EQUAL
