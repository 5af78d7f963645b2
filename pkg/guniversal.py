"""
The Universal Diagram Group
Elements of D(H_k, x) in semidirect normal form (A-part, F-part): generator
diagrams, factorization, multiplication and the total order
"""

import logging
from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Optional, Sequence, Union

import diagram
import plmap
import raag
import thompson
from diagram import Diagram
from directed_complex import DirectedComplex, h_n
from plmap import NotPhi, NotPLF2, Order, PLMap
from raag import AWord, Generator, Letter, Sign
from thompson import BadIndex, WrongComplex

logger = logging.getLogger(__name__)


class NotSpherical(ValueError):
    pass


H1 = h_n(1)
ONE_EDGE = ("x",)


@dataclass(frozen=True)
class G1Element:
    """(apart, fpart) standing for realize(apart) followed by the diagram of fpart"""

    apart: AWord
    fpart: PLMap

    def __post_init__(self):
        f = self.fpart
        if not (plmap.is_plf2(f) and f.domain_end == plmap.ONE and f.image_end == plmap.ONE):
            raise NotPLF2(f"The F-part must be in PLF2(1 -> 1), got {f}")
        object.__setattr__(self, "apart", raag.reduce_word(self.apart))

    def __mul__(self, other: "G1Element") -> "G1Element":
        return multiply(self, other)


def identity_element() -> G1Element:
    return G1Element(raag.EMPTY, plmap.identity(1))


def _require_expansion(K: DirectedComplex) -> None:
    if K != thompson.H0 and K.base != thompson.H0:
        raise WrongComplex(f"{K.name} is not an expansion of the Dunce hat")


def _leaf_cell(K: DirectedComplex, leaf: int) -> str:
    name = f"x_leaf{leaf}"
    if leaf < 1 or not any(c.name == name for c in K.leaves):
        raise BadIndex(f"{K.name} has no leaf number {leaf}")
    return name


def _extension(h: PLMap):
    """
    Extend h in Phi to a PLF2 map [0,n] -> [0,1] that is t/2^d before the
    copy of h on [l, l+1] and 1 + (t-n)/2^d after it.
    """
    d = max(h.image_start.exp, h.image_end.exp)
    scale = 1 << d
    l = (h.image_start * scale).num
    m = (h.image_end * scale).num
    n = scale + l + 1 - m
    points = [(plmap.ZERO, plmap.ZERO)] if l else []
    points.extend((x + l, y) for x, y in h.points)
    if n > l + 1:
        points.append((plmap.Dyadic(n), plmap.ONE))
    return plmap.make_plmap(points), l, n


def alpha_diagram(h: PLMap, sign: int = 1, leaf: int = 1, complex: Optional[DirectedComplex] = None) -> Diagram:
    """Reduced (x, x)-diagram with one leaf atom representing alpha_{h,leaf}^sign"""
    K = complex if complex is not None else H1
    _require_expansion(K)
    if not plmap.is_phi(h):
        raise NotPhi(f"{h} is not in Phi")
    cell = _leaf_cell(K, leaf)
    extended, l, n = _extension(h)
    conjugator = diagram.promote(thompson.from_plf(extended), K)
    middle = diagram.atom(K, ("x",) * l, cell, sign, ("x",) * (n - l - 1))
    D = diagram.compose(diagram.compose(diagram.inverse(conjugator), middle), conjugator)
    return diagram.reduce(D)


def normal_form(D: Diagram) -> G1Element:
    """Factor an (x, x)-diagram over H_k as (A-part, F-part)"""
    K = D.complex
    _require_expansion(K)
    if D.top != ONE_EDGE or D.bottom != ONE_EDGE:
        raise NotSpherical(f"Expected an (x, x)-diagram, got ({' '.join(D.top)}, {' '.join(D.bottom)})")
    D = diagram.reduce(D)
    prefix = plmap.identity(1)
    letters: List[Letter] = []
    for a in D.atoms:
        cell = K.cell(a.cell)
        if cell.is_leaf:
            k = len(a.left)
            h = plmap.restrict(plmap.invert(prefix), k, k + 1)
            letters.append(Letter(Generator(h, cell.leaf_index), a.sign))
        else:
            step = thompson.DOUBLING.for_cell(a.cell, a.sign)
            prefix = plmap.compose(prefix, plmap.pad(step, len(a.left), len(a.right)))
    logger.debug(f"Factored a {len(D.atoms)}-cell diagram into {len(letters)} kernel letters")
    return G1Element(AWord(tuple(letters)), prefix)


def realize(g: G1Element, complex: Optional[DirectedComplex] = None) -> Diagram:
    if complex is None:
        top_leaf = max((letter.generator.leaf for letter in g.apart), default=1)
        complex = H1 if top_leaf == 1 else h_n(top_leaf)
    D = diagram.identity(complex, ONE_EDGE)
    for letter in g.apart:
        D = diagram.compose(D, alpha_diagram(letter.generator.h, letter.sign, letter.generator.leaf, complex))
    D = diagram.compose(D, diagram.promote(thompson.from_plf(g.fpart), complex))
    return diagram.reduce(D)


def multiply(g1: G1Element, g2: G1Element) -> G1Element:
    """(a1, q1)(a2, q2) = (a1 . a2 relabelled by q1^-1, q1 q2)"""
    twisted = raag.relabel(g2.apart, plmap.invert(g1.fpart))
    return G1Element(raag.multiply(g1.apart, twisted), plmap.compose(g1.fpart, g2.fpart))


def invert_g(g: G1Element) -> G1Element:
    return G1Element(raag.relabel(raag.invert(g.apart), g.fpart), plmap.invert(g.fpart))


def g1_sign(g: G1Element, max_degree: Optional[int] = None) -> Sign:
    order = plmap.bs_compare(g.fpart, plmap.identity(1))
    if order is Order.GREATER:
        return Sign.POSITIVE
    if order is Order.LESS:
        return Sign.NEGATIVE
    return raag.sign(g.apart, max_degree=max_degree)


def g1_compare(g1: G1Element, g2: G1Element, max_degree: Optional[int] = None) -> Order:
    s = g1_sign(multiply(invert_g(g1), g2), max_degree=max_degree)
    if s is Sign.POSITIVE:
        return Order.LESS
    if s is Sign.NEGATIVE:
        return Order.GREATER
    return Order.EQUAL


def _as_element(item: Union[Diagram, G1Element]) -> G1Element:
    return normal_form(item) if isinstance(item, Diagram) else item


def g1_sort(items: Sequence[Union[Diagram, G1Element]], max_degree: Optional[int] = None) -> list:
    """Stable sort of diagrams or normal forms by the total order"""
    keyed = [(_as_element(item), item) for item in items]

    def cmp(left, right) -> int:
        return g1_compare(left[0], right[0], max_degree=max_degree).value

    return [item for _, item in sorted(keyed, key=cmp_to_key(cmp))]
