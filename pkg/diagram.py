"""
Semigroup Diagrams
Diagrams over a directed 2-complex stored as 2-paths (atom sequences) modulo
isotopy; composition, sum, inversion, dipole reduction, canonical forms,
transition functions and the leaf retraction
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import plmap
from directed_complex import DirectedComplex, OnePath
from plmap import PLMap, Scheme

logger = logging.getLogger(__name__)


class DiagramError(ValueError):
    """Base class for diagram errors"""


class PathMismatch(DiagramError):
    pass


class EndpointMismatch(DiagramError):
    pass


class ComplexMismatch(DiagramError):
    pass


class MissingSchemeEntry(DiagramError):
    pass


class NotAnExpansion(DiagramError):
    pass


@dataclass(frozen=True)
class Atom:
    """Atomic 2-path (left, cell^sign, right)"""

    left: OnePath
    cell: str
    sign: int
    right: OnePath

    @property
    def descriptor(self) -> Tuple[int, str, int]:
        return (len(self.left), self.cell, self.sign)


@dataclass
class _Event:
    cell: str
    sign: int
    consumed: Tuple[int, ...]
    produced: Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Diagram:
    complex: DirectedComplex
    top: OnePath
    atoms: Tuple[Atom, ...] = ()
    bottom: OnePath = field(init=False)

    def __post_init__(self):
        K = self.complex
        top = K.validate_path(self.top)
        atoms = tuple(self.atoms)
        running = top
        for index, a in enumerate(atoms):
            if a.sign not in (1, -1):
                raise DiagramError(f"Atom {index} has sign {a.sign}, expected +1 or -1")
            src, dst = K.cell(a.cell).sides(a.sign)
            if tuple(a.left) + src + tuple(a.right) != running:
                raise PathMismatch(
                    f"Atom {index} ({a.cell}^{a.sign}) does not apply to the path {' '.join(running)}"
                )
            running = tuple(a.left) + dst + tuple(a.right)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "bottom", running)

    @cached_property
    def canonical(self) -> Tuple[Atom, ...]:
        return canonical_form(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.complex == other.complex
            and self.top == other.top
            and self.bottom == other.bottom
            and len(self.atoms) == len(other.atoms)
            and self.canonical == other.canonical
        )

    def __hash__(self) -> int:
        return hash((self.complex.name, self.top, self.canonical))

    def __add__(self, other: "Diagram") -> "Diagram":
        return add(self, other)

    def __repr__(self) -> str:
        return f"Diagram({self.complex.name}, top={' '.join(self.top)}, atoms={len(self.atoms)})"


def identity(K: DirectedComplex, w: Iterable[str]) -> Diagram:
    """The diagram with no cells on the path w"""
    return Diagram(K, tuple(w))


def atom(K: DirectedComplex, left: Iterable[str], cell: str, sign: int, right: Iterable[str]) -> Diagram:
    left, right = tuple(left), tuple(right)
    src, _ = K.cell(cell).sides(sign)
    return Diagram(K, left + src + right, (Atom(left, cell, sign, right),))


def _same_complex(D1: Diagram, D2: Diagram):
    if D1.complex != D2.complex:
        raise ComplexMismatch(f"Diagrams live over {D1.complex.name} and {D2.complex.name}")


def compose(D1: Diagram, D2: Diagram) -> Diagram:
    """D1 followed by D2 (not reduced)"""
    _same_complex(D1, D2)
    if D1.bottom != D2.top:
        raise PathMismatch(f"Bottom {' '.join(D1.bottom)} does not match top {' '.join(D2.top)}")
    return Diagram(D1.complex, D1.top, D1.atoms + D2.atoms)


def add(D1: Diagram, D2: Diagram) -> Diagram:
    """Horizontal sum D1 + D2"""
    _same_complex(D1, D2)
    K = D1.complex
    if K.target(D1.top) != K.source(D2.top):
        raise EndpointMismatch(f"{' '.join(D1.top)} ends at {K.target(D1.top)}, {' '.join(D2.top)} starts at {K.source(D2.top)}")
    atoms = [Atom(a.left, a.cell, a.sign, a.right + D2.top) for a in D1.atoms]
    atoms.extend(Atom(D1.bottom + a.left, a.cell, a.sign, a.right) for a in D2.atoms)
    return Diagram(K, D1.top + D2.top, tuple(atoms))


def inverse(D: Diagram) -> Diagram:
    atoms = tuple(Atom(a.left, a.cell, -a.sign, a.right) for a in reversed(D.atoms))
    return Diagram(D.complex, D.bottom, atoms)


def _simulate(D: Diagram) -> Tuple[List[_Event], Dict[int, str]]:
    """Give every edge occurrence an id and record what each atom consumes and produces"""
    K = D.complex
    labels: Dict[int, str] = dict(enumerate(D.top))
    current = list(range(len(D.top)))
    fresh = len(current)
    events = []
    for a in D.atoms:
        src, dst = K.cell(a.cell).sides(a.sign)
        offset = len(a.left)
        produced = tuple(range(fresh, fresh + len(dst)))
        for occurrence, name in zip(produced, dst):
            labels[occurrence] = name
        fresh += len(dst)
        events.append(_Event(a.cell, a.sign, tuple(current[offset:offset + len(src)]), produced))
        current[offset:offset + len(src)] = produced
    return events, labels


def _linearize(D: Diagram, events: Sequence[_Event], labels: Dict[int, str]) -> Tuple[Atom, ...]:
    current = list(range(len(D.top)))
    atoms = []
    for event in events:
        offset = current.index(event.consumed[0])
        width = len(event.consumed)
        if tuple(current[offset:offset + width]) != event.consumed:
            raise DiagramError(f"Cell {event.cell} lost contiguity while relinearizing")
        atoms.append(
            Atom(
                tuple(labels[i] for i in current[:offset]),
                event.cell,
                event.sign,
                tuple(labels[i] for i in current[offset + width:]),
            )
        )
        current[offset:offset + width] = event.produced
    return tuple(atoms)


def reduce(D: Diagram) -> Diagram:
    """The unique dipole-free diagram equivalent to D"""
    events, labels = _simulate(D)
    alias: Dict[int, int] = {}
    producer: Dict[int, int] = {}
    alive = [True] * len(events)

    def find(occurrence: int) -> int:
        while occurrence in alias:
            occurrence = alias[occurrence]
        return occurrence

    for j, event in enumerate(events):
        event.consumed = tuple(find(i) for i in event.consumed)
        i = producer.get(event.consumed[0])
        if i is not None and alive[i]:
            mirror = events[i]
            if mirror.produced == event.consumed and mirror.cell == event.cell and mirror.sign == -event.sign:
                alive[i] = alive[j] = False
                for later, earlier in zip(event.produced, mirror.consumed):
                    alias[later] = earlier
                continue
        for occurrence in event.produced:
            producer[occurrence] = j

    survivors = [e for e, keep in zip(events, alive) if keep]
    if len(survivors) == len(events):
        return D
    logger.debug(f"Cancelled {(len(events) - len(survivors)) // 2} dipoles in a {len(events)}-cell diagram")
    return Diagram(D.complex, D.top, _linearize(D, survivors, labels))


def canonical_form(D: Diagram) -> Tuple[Atom, ...]:
    """
    Least atom sequence of the isotopy class: repeatedly apply the available
    atom with the smallest (|left|, cell, sign) in the running path.
    """
    events, labels = _simulate(D)
    current = list(range(len(D.top)))
    pending = list(range(len(events)))
    ordered = []
    while pending:
        position = {occurrence: index for index, occurrence in enumerate(current)}
        best = None
        for index in pending:
            event = events[index]
            if all(o in position for o in event.consumed):
                key = (position[event.consumed[0]], event.cell, event.sign)
                if best is None or key < best[0]:
                    best = (key, index)
        _, chosen = best
        pending.remove(chosen)
        event = events[chosen]
        ordered.append(event)
        offset = position[event.consumed[0]]
        current[offset:offset + len(event.consumed)] = event.produced
    return _linearize(D, ordered, labels)


def equivalent(D1: Diagram, D2: Diagram) -> bool:
    _same_complex(D1, D2)
    return reduce(D1) == reduce(D2)


def cell_count(D: Diagram) -> int:
    return len(D.atoms)


def leaf_count(D: Diagram) -> int:
    K = D.complex
    return sum(1 for a in D.atoms if K.cell(a.cell).is_leaf)


def linear_scheme(K: DirectedComplex) -> Scheme:
    """Cell f -> the linear map [0,|top f|] -> [0,|bottom f|]"""
    return Scheme({c.name: plmap.linear(len(c.top), len(c.bottom)) for c in K.cells})


def transition(D: Diagram, scheme: Scheme) -> PLMap:
    """Composite of the padded cell maps, [0,|top D|] onto [0,|bottom D|]"""
    f = plmap.identity(len(D.top))
    for a in D.atoms:
        g = scheme.for_cell(a.cell, a.sign)
        if g is None:
            raise MissingSchemeEntry(f"The scheme has no map for cell {a.cell}")
        f = plmap.compose(f, plmap.pad(g, len(a.left), len(a.right)))
    return f


def collapse_leaves(D: Diagram, target: Optional[DirectedComplex] = None) -> Diagram:
    """Retraction onto the base complex: drop every leaf atom"""
    K = D.complex
    if K.base is None:
        if target is not None and target != K:
            raise NotAnExpansion(f"{K.name} is not an expansion of {target.name}")
        return D
    if target is not None and target != K.base:
        raise NotAnExpansion(f"{K.name} is not an expansion of {target.name}")
    atoms = tuple(a for a in D.atoms if not K.cell(a.cell).is_leaf)
    return Diagram(K.base, D.top, atoms)


def promote(D: Diagram, expanded: DirectedComplex) -> Diagram:
    """View a diagram over K as a diagram over an expansion of K"""
    if expanded == D.complex:
        return D
    if expanded.base != D.complex:
        raise NotAnExpansion(f"{expanded.name} is not an expansion of {D.complex.name}")
    return Diagram(expanded, D.top, D.atoms)
