"""
Thompson's Group F as Diagrams over the Dunce Hat
Diagrams over <x | x = x^2> and PLF2 maps, in both directions
"""

import logging
from fractions import Fraction
from typing import List

import diagram
import plmap
from diagram import Atom, Diagram
from directed_complex import dunce_hat
from plmap import NotPLF2, PLMap, Scheme, power_of_two_exponent

logger = logging.getLogger(__name__)


class ThompsonError(ValueError):
    """Base class for Thompson group errors"""


class WrongComplex(ThompsonError):
    pass


class BadIndex(ThompsonError):
    pass


class BadArgs(ThompsonError):
    pass


H0 = dunce_hat()
X = ("x",)
DOUBLING = Scheme({"pi": plmap.linear(1, 2)})

X0_MAP = plmap.make_plmap([(0, 0), ("1/2", "1/4"), ("3/4", "1/2"), (1, 1)])
X1_MAP = plmap.make_plmap([(0, 0), ("1/4", "1/8"), ("3/8", "1/4"), ("1/2", "1/2"), (1, 1)])


def _require_h0(D: Diagram) -> None:
    if D.complex != H0:
        raise WrongComplex(f"Expected a diagram over {H0.name}, got one over {D.complex.name}")


def pi_cell() -> Diagram:
    """The one-cell (x, x^2)-diagram"""
    return diagram.atom(H0, (), "pi", 1, ())


def to_plf(D: Diagram) -> PLMap:
    _require_h0(D)
    return diagram.transition(D, DOUBLING)


def caret(j: int) -> Diagram:
    """Complete binary tree of carets of height j, an (x, x^(2^j))-diagram"""
    if j < 0:
        raise BadArgs(f"Caret height must be non-negative, got {j}")
    D = diagram.identity(H0, ("x",))
    for _ in range(j):
        D = diagram.compose(pi_cell(), diagram.add(D, D))
    return D


def _splits(width: int, levels: int, left: int, right: int) -> List[Atom]:
    """Split each of `width` edges into 2^levels, level by level, inside fixed contexts"""
    atoms = []
    for level in range(levels):
        count = width << level
        for index in range(count):
            atoms.append(Atom(X * (left + 2 * index), "pi", 1, X * (right + count - index - 1)))
    return atoms


def _merges(width: int, levels: int, left: int, right: int) -> List[Atom]:
    return [Atom(a.left, a.cell, -a.sign, a.right) for a in reversed(_splits(width, levels, left, right))]


def caret_row(r: int, j: int) -> Diagram:
    """Sum of r copies of caret(j)"""
    if r < 1:
        raise BadArgs(f"Row length must be positive, got {r}")
    if j < 0:
        raise BadArgs(f"Caret height must be non-negative, got {j}")
    return Diagram(H0, X * r, tuple(_splits(r, j, 0, 0)))


def from_plf(f: PLMap) -> Diagram:
    """The reduced diagram over the Dunce hat whose transition function is f"""
    if not plmap.is_plf2(f):
        raise NotPLF2(f"{f} is not in PLF2")
    depth = max(max(x.exp, y.exp) for x, y in f.points)
    scaled = [(x.num << (depth - x.exp), y.num << (depth - y.exp)) for x, y in f.points]
    m, n = f.domain_end.num, f.image_end.num

    atoms = _splits(m, depth, 0, 0)
    done = 0
    for (a0, b0), (a1, b1) in zip(scaled, scaled[1:]):
        width, height = a1 - a0, b1 - b0
        rest = (m << depth) - a1
        exponent = power_of_two_exponent(Fraction(height, width))
        if exponent >= 0:
            atoms.extend(_splits(width, exponent, done, rest))
        else:
            atoms.extend(_merges(height, -exponent, done, rest))
        done += height
    atoms.extend(_merges(n, depth, 0, 0))

    D = Diagram(H0, X * m, tuple(atoms))
    logger.debug(f"Assembled a {len(atoms)}-cell diagram for {f} at depth {depth}")
    return diagram.reduce(D)


def generator(i: int) -> Diagram:
    if i == 0:
        return from_plf(X0_MAP)
    if i == 1:
        return from_plf(X1_MAP)
    raise BadIndex(f"Thompson generators are x0 and x1, got x{i}")
