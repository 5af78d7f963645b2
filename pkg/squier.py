"""
Independence Graphs and Graph-Product Presentations
Desk-scale enumeration over bounded homotopy classes, truncated universal
covers of the Dunce hat and graph products over independence graphs
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Mapping, Sequence, Tuple

import networkx as nx

import plmap
from directed_complex import DirectedComplex, dunce_hat, homotopic_paths
from plmap import Dyadic, PLMap

logger = logging.getLogger(__name__)


class SquierError(ValueError):
    """Base class for presentation errors"""


class BadDepth(SquierError):
    pass


class BadIndex(SquierError):
    pass


class UnsupportedComplex(SquierError):
    pass


@dataclass(frozen=True, eq=False)
class IndependenceGraph:
    graph: nx.Graph
    header: Tuple[str, ...] = ()

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(sorted(self.graph.nodes))

    @property
    def edges(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(sorted(tuple(sorted(pair)) for pair in self.graph.edges))

    def adjacent(self, a: str, b: str) -> bool:
        return self.graph.has_edge(a, b)

    def to_dot(self) -> str:
        lines = ["graph independence {"]
        lines.extend(f"  // {line}" for line in self.header)
        lines.extend(f'  "{v}";' for v in self.vertices)
        lines.extend(f'  "{a}" -- "{b}";' for a, b in self.edges)
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class Presentation:
    """Generators and commutator relators [a, b] of a graph product of free groups"""

    generators: Tuple[str, ...]
    relators: Tuple[Tuple[str, str], ...]
    header: Tuple[str, ...] = ()


def independence_graph(K: DirectedComplex, w: Sequence[str], bound: int) -> IndependenceGraph:
    """Edges are adjacent when they co-occur in an enumerated path homotopic to w"""
    paths = homotopic_paths(K, w, bound)
    graph = nx.Graph()
    for path in paths:
        graph.add_nodes_from(path)
        graph.add_edges_from(combinations(sorted(set(path)), 2))
    header = (f"complex {K.name}", f"path {' '.join(w)}", f"bound {bound}", f"paths {len(paths)}")
    logger.debug(
        f"Independence graph of {K.name} has {graph.number_of_nodes()} vertices and {graph.number_of_edges()} edges"
    )
    return IndependenceGraph(graph, header)


def cover_edge_function(level: int, index: int) -> PLMap:
    """Affine map t -> (index + t) / 2^level of the cover edge at (level, index)"""
    if level < 0 or not 0 <= index < 2 ** level:
        raise BadIndex(f"No cover edge at level {level}, index {index}")
    return plmap.make_plmap([(0, Dyadic(index, level)), (1, Dyadic(index + 1, level))])


def cover_edges(depth: int) -> List[Tuple[int, int]]:
    if depth < 0:
        raise BadDepth(f"Cover depth must be non-negative, got {depth}")
    return [(r, k) for r in range(depth + 1) for k in range(2 ** r)]


def _context(path: Sequence[str]) -> str:
    return "".join(path) if path else "1"


def squier_presentation(K: DirectedComplex, w: Sequence[str], bound: int) -> Presentation:
    """
    Presentation of D(K, w) when w is alone in its homotopy class: one
    generator per positive atomic loop, commutators for disjoint supports.
    """
    w = K.validate_path(w)
    paths = homotopic_paths(K, w, bound)
    if paths != {w}:
        raise UnsupportedComplex(
            f"{' '.join(w)} has {len(paths)} homotopic paths within bound {bound}; only one-path classes are supported"
        )
    loops = sorted(
        (offset, cell.name)
        for cell in K.cells
        if cell.top == cell.bottom
        for offset in range(len(w) - len(cell.top) + 1)
        if w[offset:offset + len(cell.top)] == cell.top
    )
    names: Dict[Tuple[int, str], str] = {}
    supports: Dict[str, Tuple[int, int]] = {}
    for offset, cell_name in loops:
        width = len(K.cell(cell_name).top)
        name = f"({_context(w[:offset])},{cell_name},{_context(w[offset + width:])})"
        names[(offset, cell_name)] = name
        supports[name] = (offset, offset + width)
    generators = [names[key] for key in loops]
    relators = [
        (a, b)
        for a, b in combinations(generators, 2)
        if supports[a][1] <= supports[b][0] or supports[b][1] <= supports[a][0]
    ]
    header = (f"complex {K.name}", f"path {' '.join(w)}", f"bound {bound}")
    return Presentation(tuple(generators), tuple(relators), header)


def _dunce_hat_kernel(K: DirectedComplex, leaves: int, p: Sequence[str], depth: int) -> Presentation:
    """Cover edges by level up to `depth`; generators commute when their intervals have disjoint interiors"""
    width = len(p)
    generators = []
    for j in range(width):
        for level, index in cover_edges(depth):
            h = cover_edge_function(level, index)
            lo, hi = h.image_start + j, h.image_end + j
            for leaf in range(1, leaves + 1):
                suffix = f"#{leaf}" if leaves > 1 else ""
                generators.append((f"a[{lo},{hi}]{suffix}", lo, hi))
    relators = [
        (a, b)
        for (a, lo1, hi1), (b, lo2, hi2) in combinations(generators, 2)
        if hi1 <= lo2 or hi2 <= lo1
    ]
    header = (f"complex {K.name}", f"leaves {leaves}", f"path {' '.join(p)}", f"depth {depth}")
    logger.debug(f"Kernel presentation with {len(generators)} generators and {len(relators)} relators")
    return Presentation(tuple(name for name, _, _ in generators), tuple(relators), header)


def _graph_product(
    K: DirectedComplex, base: DirectedComplex, nu: Mapping[str, int], p: Sequence[str], bound: int
) -> Presentation:
    """Free group of rank nu(e) per vertex e of the independence graph, commuting along its edges"""
    graph = independence_graph(base, p, bound)
    generators = [(f"a({e},{i})", e) for e in graph.vertices for i in range(1, nu.get(e, 0) + 1)]
    relators = [(a, b) for (a, e1), (b, e2) in combinations(generators, 2) if graph.adjacent(e1, e2)]
    header = (f"complex {K.name}", f"path {' '.join(p)}", f"bound {bound}")
    logger.debug(f"Graph product over {base.name} with {len(generators)} generators and {len(relators)} relators")
    return Presentation(tuple(name for name, _ in generators), tuple(relators), header)


def kernel_presentation(
    K: DirectedComplex, nu: Mapping[str, int], p: Sequence[str], depth: int, bound: int = 3
) -> Presentation:
    """
    Presentation of the kernel of the leaf retraction of D(K_nu, p).

    Over the Dunce hat the cover edges are enumerated by level up to `depth`.
    Over any other complex the kernel is the graph product of free groups of
    rank nu(e) over the independence graph of p within `bound` replacements,
    exact when the complex is its own universal cover (rooted 2-trees such as
    binary_tree). Without leaves it is the Squier presentation of D(K, p).
    """
    if depth < 0:
        raise BadDepth(f"Cover depth must be non-negative, got {depth}")
    base = K.base if K.base is not None else K
    p = base.validate_path(p)
    for edge in nu:
        base.edge(edge)
    if base == dunce_hat():
        return _dunce_hat_kernel(K, nu.get("x", 0), p, depth)
    if not any(nu.values()):
        return squier_presentation(base, p, bound)
    return _graph_product(K, base, nu, p, bound)
