"""
Directed 2-Complexes
Vertices, edges, 2-cells with top/bottom 1-paths, expansions by leaf cells,
the built-in complexes and bounded enumeration of homotopic 1-paths
"""

import logging
import re
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from plmap import Dyadic

logger = logging.getLogger(__name__)

OnePath = Tuple[str, ...]


class ComplexError(ValueError):
    """Base class for directed complex errors"""


class DanglingEdge(ComplexError):
    pass


class CellEndpointMismatch(ComplexError):
    pass


class UnknownEdge(ComplexError):
    pass


class UnknownName(ComplexError):
    pass


class InvalidPath(ComplexError):
    pass


@dataclass(frozen=True)
class Edge:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Cell:
    name: str
    top: OnePath
    bottom: OnePath
    leaf_of: Optional[str] = None
    leaf_index: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.leaf_of is not None

    def sides(self, sign: int) -> Tuple[OnePath, OnePath]:
        """(source, target) paths of the cell applied with the given sign"""
        return (self.top, self.bottom) if sign > 0 else (self.bottom, self.top)


@dataclass(frozen=True)
class Replacement:
    """One atomic move u.src.v -> u.dst.v on a 1-path"""

    offset: int
    cell: str
    sign: int
    result: OnePath


@dataclass(frozen=True)
class DirectedComplex:
    name: str
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    cells: Tuple[Cell, ...]
    base: Optional["DirectedComplex"] = None
    _edge_index: Dict[str, Edge] = field(init=False, repr=False, compare=False, hash=False)
    _cell_index: Dict[str, Cell] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_edge_index", {e.name: e for e in self.edges})
        object.__setattr__(self, "_cell_index", {c.name: c for c in self.cells})

    def edge(self, name: str) -> Edge:
        try:
            return self._edge_index[name]
        except KeyError:
            raise UnknownEdge(f"Unknown edge {name!r} in complex {self.name}") from None

    def cell(self, name: str) -> Cell:
        try:
            return self._cell_index[name]
        except KeyError:
            raise UnknownName(f"Unknown cell {name!r} in complex {self.name}") from None

    def has_edge(self, name: str) -> bool:
        return name in self._edge_index

    @property
    def leaves(self) -> Tuple[Cell, ...]:
        return tuple(c for c in self.cells if c.is_leaf)

    @property
    def nu(self) -> Dict[str, int]:
        """Leaf count per edge"""
        counts: Dict[str, int] = {}
        for c in self.leaves:
            counts[c.leaf_of] = counts.get(c.leaf_of, 0) + 1
        return counts

    def validate_path(self, path: Iterable[str], allow_empty: bool = False) -> OnePath:
        path = tuple(path)
        if not path and not allow_empty:
            raise InvalidPath("A 1-path must be nonempty")
        for name in path:
            if name not in self._edge_index:
                raise InvalidPath(f"Unknown edge {name!r} in 1-path {' '.join(path)}")
        for a, b in zip(path, path[1:]):
            if self._edge_index[a].target != self._edge_index[b].source:
                raise InvalidPath(f"Edges {a} and {b} are not composable")
        return path

    def source(self, path: Sequence[str]) -> str:
        return self.edge(path[0]).source

    def target(self, path: Sequence[str]) -> str:
        return self.edge(path[-1]).target


def _check_boundary(edges: Mapping[str, Edge], name: str, side: OnePath, role: str):
    if not side:
        raise CellEndpointMismatch(f"Cell {name} has an empty {role}")
    for e in side:
        if e not in edges:
            raise DanglingEdge(f"Cell {name} uses unknown edge {e!r} in its {role}")
    for a, b in zip(side, side[1:]):
        if edges[a].target != edges[b].source:
            raise CellEndpointMismatch(f"The {role} of cell {name} is not a 1-path at {a} {b}")


def make_complex(
    edges: Iterable[Tuple[str, str, str]],
    cells: Iterable[Tuple[str, Sequence[str], Sequence[str]]],
    vertices: Optional[Iterable[str]] = None,
    name: str = "K",
) -> DirectedComplex:
    """Validate an edge list (name, source, target) and cell list (name, top, bottom)"""
    edge_list = [Edge(n, s, t) for n, s, t in edges]
    edge_index = {e.name: e for e in edge_list}
    if len(edge_index) != len(edge_list):
        raise ComplexError(f"Duplicate edge names in complex {name}")

    if vertices is None:
        seen: Dict[str, None] = {}
        for e in edge_list:
            seen.setdefault(e.source)
            seen.setdefault(e.target)
        vertex_list = tuple(seen)
    else:
        vertex_list = tuple(vertices)
        for e in edge_list:
            for v in (e.source, e.target):
                if v not in vertex_list:
                    raise DanglingEdge(f"Edge {e.name} ends at unknown vertex {v!r}")

    cell_list = []
    for cell_name, top, bottom in cells:
        top, bottom = tuple(top), tuple(bottom)
        _check_boundary(edge_index, cell_name, top, "top")
        _check_boundary(edge_index, cell_name, bottom, "bottom")
        if edge_index[top[0]].source != edge_index[bottom[0]].source or (
            edge_index[top[-1]].target != edge_index[bottom[-1]].target
        ):
            raise CellEndpointMismatch(f"Top and bottom of cell {cell_name} have different endpoints")
        cell_list.append(Cell(cell_name, top, bottom))
    if len({c.name for c in cell_list}) != len(cell_list):
        raise ComplexError(f"Duplicate cell names in complex {name}")

    return DirectedComplex(name, vertex_list, tuple(edge_list), tuple(cell_list))


def expansion(K: DirectedComplex, nu: Mapping[str, int], name: Optional[str] = None) -> DirectedComplex:
    """K plus nu(e) leaf cells e = e for every edge e"""
    for edge_name, count in nu.items():
        K.edge(edge_name)
        if count < 0:
            raise ComplexError(f"Leaf count for {edge_name} must be non-negative, got {count}")
    if not any(nu.values()):
        return K

    leaves = [
        Cell(f"{e.name}_leaf{i}", (e.name,), (e.name,), leaf_of=e.name, leaf_index=i)
        for e in K.edges
        for i in range(1, nu.get(e.name, 0) + 1)
    ]
    if name is None:
        if K.name == "dunce_hat" and set(nu) == {"x"}:
            name = f"h_n({nu['x']})"
        else:
            counts = ",".join(f"{e}={c}" for e, c in sorted(nu.items()) if c)
            name = f"{K.name}[{counts}]"
    logger.debug(f"Expanded {K.name} into {name} with {len(leaves)} leaves")
    return DirectedComplex(name, K.vertices, K.edges, K.cells + tuple(leaves), base=K)


def dunce_hat() -> DirectedComplex:
    return make_complex([("x", "v", "v")], [("pi", ("x",), ("x", "x"))], name="dunce_hat")


def h_n(k: int) -> DirectedComplex:
    if k < 0:
        raise ComplexError(f"Leaf count must be non-negative, got {k}")
    return expansion(dunce_hat(), {"x": k})


def xx_squared() -> DirectedComplex:
    return make_complex([("x", "v", "v")], [("f", ("x", "x"), ("x", "x"))], name="xx_squared")


def binary_tree(depth: int) -> DirectedComplex:
    """Edges e0..e_{2 depth} with cells e_{2n} = e_{2n+1} e_{2n+2} for n < depth"""
    if depth < 0:
        raise ComplexError(f"Depth must be non-negative, got {depth}")
    ends = {0: ("s", "t")}
    edges = [("e0", "s", "t")]
    cells = []
    for n in range(depth):
        src, dst = ends[2 * n]
        mid = f"m{n}"
        ends[2 * n + 1] = (src, mid)
        ends[2 * n + 2] = (mid, dst)
        edges.append((f"e{2 * n + 1}", src, mid))
        edges.append((f"e{2 * n + 2}", mid, dst))
        cells.append((f"e{2 * n}", (f"e{2 * n}",), (f"e{2 * n + 1}", f"e{2 * n + 2}")))
    return make_complex(edges, cells, name=f"binary_tree({depth})")


def cover_slice(depth: int) -> DirectedComplex:
    """
    Level-truncated slice of the universal 2-cover of the Dunce hat: edge
    c<r>_<k> runs from k/2^r to (k+1)/2^r and the cell of the same name
    splits it into its two halves.
    """
    if depth < 0:
        raise ComplexError(f"Depth must be non-negative, got {depth}")
    edges = []
    cells = []
    for r in range(depth + 1):
        for k in range(2 ** r):
            edges.append((f"c{r}_{k}", str(Dyadic(k, r)), str(Dyadic(k + 1, r))))
            if r < depth:
                cells.append((f"c{r}_{k}", (f"c{r}_{k}",), (f"c{r + 1}_{2 * k}", f"c{r + 1}_{2 * k + 1}")))
    return make_complex(edges, cells, name=f"cover_slice({depth})")


_BUILTINS = {
    "dunce_hat": dunce_hat,
    "xx_squared": xx_squared,
    "h_n": h_n,
    "binary_tree": binary_tree,
    "cover_slice": cover_slice,
}
_PARAMETRIZED = {"h_n", "binary_tree", "cover_slice"}
_BUILTIN_NAME = re.compile(r"^\s*([a-z_]+)\s*(?:\(\s*(\d+)\s*\))?\s*$")


def builtin(name: str, param: Optional[int] = None) -> DirectedComplex:
    if name not in _BUILTINS:
        raise UnknownName(f"Unknown built-in complex {name!r}")
    if name in _PARAMETRIZED:
        if param is None:
            raise UnknownName(f"Built-in complex {name} needs an integer parameter")
        return _BUILTINS[name](param)
    if param is not None:
        raise UnknownName(f"Built-in complex {name} takes no parameter")
    return _BUILTINS[name]()


def resolve_complex(text: str) -> DirectedComplex:
    """Read a built-in complex name such as `dunce_hat`, `h_n(2)` or `binary_tree(3)`"""
    match = _BUILTIN_NAME.match(text)
    if not match:
        raise UnknownName(f"Unknown built-in complex {text!r}")
    param = int(match.group(2)) if match.group(2) is not None else None
    return builtin(match.group(1), param)


def replacements(K: DirectedComplex, path: Sequence[str]) -> List[Replacement]:
    """Every atomic move top(f) <-> bottom(f) available on the path, leaves excluded"""
    path = tuple(path)
    moves = []
    for cell in K.cells:
        if cell.top == cell.bottom:
            continue
        for sign in (1, -1):
            src, dst = cell.sides(sign)
            width = len(src)
            for offset in range(len(path) - width + 1):
                if path[offset:offset + width] == src:
                    moves.append(Replacement(offset, cell.name, sign, path[:offset] + dst + path[offset + width:]))
    return moves


def homotopic_paths(K: DirectedComplex, w: Sequence[str], bound: int) -> FrozenSet[OnePath]:
    """All 1-paths reachable from w by at most `bound` atomic replacements"""
    if bound < 0:
        raise ComplexError(f"Homotopy bound must be non-negative, got {bound}")
    start = K.validate_path(w)
    seen = {start}
    frontier = deque([(start, 0)])
    while frontier:
        path, steps = frontier.popleft()
        if steps == bound:
            continue
        for move in replacements(K, path):
            if move.result not in seen:
                seen.add(move.result)
                frontier.append((move.result, steps + 1))
    logger.debug(f"Enumerated {len(seen)} paths homotopic to {' '.join(start)} within {bound} steps")
    return frozenset(seen)
