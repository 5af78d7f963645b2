"""
Seeded Random Samplers
Random PLF2 and Phi maps, random walks of atoms, random universal-group elements
"""

import random
from typing import List, Optional, Sequence, Tuple

import diagram
import plmap
import raag
import thompson
from diagram import Atom, Diagram
from directed_complex import DirectedComplex, replacements
from guniversal import G1Element, H1
from plmap import Dyadic, PLMap


def _subdivide(rng: random.Random, length: int, pieces: int, depth: int) -> List[Dyadic]:
    """Right ends of `pieces` standard dyadic intervals tiling [0, length]"""
    intervals: List[Tuple[Dyadic, Dyadic]] = [(Dyadic(i), Dyadic(i + 1)) for i in range(length)]
    while len(intervals) < pieces:
        splittable = [i for i, (a, b) in enumerate(intervals) if (b - a).exp < depth]
        i = rng.choice(splittable)
        a, b = intervals[i]
        middle = (a + b) * Dyadic(1, 1)
        intervals[i:i + 1] = [(a, middle), (middle, b)]
    return [b for _, b in intervals]


def random_plf2(
    rng: random.Random, m: int, n: int, pieces: Optional[int] = None, depth: int = 3
) -> PLMap:
    """Random element of PLF2(m -> n) with breakpoints of denominator at most 2^depth"""
    low, high = max(m, n), min(m, n) << depth
    if pieces is None:
        pieces = rng.randint(low, min(high, low + 4))
    pieces = min(max(pieces, low), high)
    domain = _subdivide(rng, m, pieces, depth)
    image = _subdivide(rng, n, pieces, depth)
    return plmap.make_plmap([(0, 0)] + list(zip(domain, image)))


def random_phi(rng: random.Random, depth: int = 3, max_width: int = 4) -> PLMap:
    """Random map in Phi onto [i/2^r, j/2^r]"""
    r = rng.randint(0, depth)
    scale = 1 << r
    width = rng.randint(1, min(max_width, scale))
    start = rng.randint(0, scale - width)
    g = random_plf2(rng, 1, width, depth=depth)
    unit = Dyadic(1, r)
    return plmap.make_plmap([(x, y * unit + start * unit) for x, y in g.points])


def random_walk(
    rng: random.Random,
    K: DirectedComplex,
    top: Sequence[str],
    steps: int,
    max_length: int = 6,
    leaf_rate: float = 0.0,
) -> Diagram:
    """Random 2-path of `steps` atoms starting at top, keeping paths short"""
    path = tuple(top)
    atoms: List[Atom] = []
    leaves = K.leaves
    for _ in range(steps):
        if leaves and rng.random() < leaf_rate:
            offset = rng.randrange(len(path))
            options = [c for c in leaves if c.leaf_of == path[offset]]
            if options:
                cell = rng.choice(options)
                atoms.append(Atom(path[:offset], cell.name, rng.choice((1, -1)), path[offset + 1:]))
                continue
        moves = [m for m in replacements(K, path) if len(m.result) <= max_length]
        if not moves:
            break
        move = rng.choice(moves)
        src, _ = K.cell(move.cell).sides(move.sign)
        atoms.append(Atom(path[:move.offset], move.cell, move.sign, path[move.offset + len(src):]))
        path = move.result
    return Diagram(K, tuple(top), tuple(atoms))


def random_h0_diagram(rng: random.Random, max_cells: int = 30, max_width: int = 6) -> Diagram:
    """Random reduced (x^m, x^n)-diagram over the Dunce hat"""
    m = rng.randint(1, max_width)
    D = random_walk(rng, thompson.H0, ("x",) * m, rng.randint(0, max_cells), max_length=max_width)
    return diagram.reduce(D)


def random_h1_diagram(rng: random.Random, steps: int = 8, max_leaves: int = 6, K: DirectedComplex = H1) -> Diagram:
    """Random (x, x)-diagram over an expansion of the Dunce hat"""
    D = random_walk(rng, K, ("x",), steps, max_length=4, leaf_rate=0.3)
    kept, leaf_atoms = [], 0
    for a in D.atoms:
        if K.cell(a.cell).is_leaf:
            if leaf_atoms == max_leaves:
                continue
            leaf_atoms += 1
        kept.append(a)
    D = Diagram(K, D.top, tuple(kept))
    closing = thompson.from_plf(random_plf2(rng, len(D.bottom), 1, depth=2))
    return diagram.compose(D, diagram.promote(closing, K))


def random_aword(
    rng: random.Random, length: int, generators: Optional[Sequence[raag.Generator]] = None
) -> raag.AWord:
    letters = []
    for _ in range(length):
        g = rng.choice(generators) if generators else raag.Generator(random_phi(rng))
        letters.append(raag.Letter(g, rng.choice((1, -1))))
    return raag.AWord(tuple(letters))


def random_g1(rng: random.Random, max_letters: int = 4, max_breaks: int = 6) -> G1Element:
    apart = random_aword(rng, rng.randint(0, max_letters))
    fpart = random_plf2(rng, 1, 1, pieces=rng.randint(1, max_breaks - 1))
    return G1Element(apart, fpart)
