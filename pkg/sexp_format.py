"""
S-Expression Text Formats
Bit-exact read/print for dyadics, PL maps, complexes, diagrams, schemes,
kernel words, universal-group elements and presentations
"""

import logging
import re
from typing import Dict, List, Mapping, Optional, Sequence, Union

import pyparsing as pp

import plmap
from diagram import Atom, Diagram
from directed_complex import DirectedComplex, expansion, make_complex, resolve_complex
from guniversal import G1Element
from plmap import Dyadic, PLMap, Scheme
from raag import AWord, Generator, Letter
from squier import IndependenceGraph, Presentation

logger = logging.getLogger(__name__)

Form = Union[str, List["Form"]]


class FormatError(ValueError):
    pass


class Quoted(str):
    """A double-quoted atom"""


def _grammar() -> pp.ParserElement:
    form = pp.Forward()
    quoted = pp.QuotedString('"', multiline=True)
    quoted.set_parse_action(lambda t: [Quoted(t[0])])
    atom = pp.Regex(r'[^\s()";]+')
    group = pp.Group(pp.Suppress("(") + pp.ZeroOrMore(form) + pp.Suppress(")"))
    form <<= quoted | group | atom
    document = pp.ZeroOrMore(form)
    document.ignore(pp.Regex(r";[^\n]*"))
    return document


_DOCUMENT = _grammar()


def read_all(text: str) -> List[Form]:
    """Every top-level form in the text"""
    try:
        return _DOCUMENT.parse_string(text, parse_all=True).as_list()
    except pp.ParseBaseException as e:
        raise FormatError(f"Malformed s-expression at line {e.lineno}, column {e.col}: {e.msg}") from None


def read(text: str) -> Form:
    forms = read_all(text)
    if len(forms) != 1:
        raise FormatError(f"Expected exactly one form, found {len(forms)}")
    return forms[0]


def _form(value: Union[str, Form]) -> Form:
    return read(value) if isinstance(value, str) and not isinstance(value, Quoted) else value


def _expect(form: Form, head: str, minimum: int = 1) -> List[Form]:
    if not isinstance(form, list) or not form or form[0] != head:
        raise FormatError(f"Expected a ({head} ...) form, got {_show(form)}")
    if len(form) < minimum:
        raise FormatError(f"The ({head} ...) form is missing fields")
    return form


def _atom(form: Form, what: str) -> str:
    if isinstance(form, list):
        raise FormatError(f"Expected {what}, got a list {_show(form)}")
    return form


def _int(form: Form, what: str) -> int:
    text = _atom(form, what)
    try:
        return int(text)
    except ValueError:
        raise FormatError(f"Expected an integer {what}, got {text!r}") from None


def _show(form: Form) -> str:
    if isinstance(form, list):
        return "(" + " ".join(_show(f) for f in form) + ")"
    return str(form)


def _symbol(name: str) -> str:
    return f'"{name}"' if re.search(r'[\s();"]', name) else name


def _list(head: str, items) -> str:
    return "(" + " ".join([head, *items]) + ")"


# Dyadic and PLMap

def format_dyadic(value: Dyadic) -> str:
    return str(value)


def parse_dyadic(form: Form) -> Dyadic:
    return Dyadic.parse(_atom(form, "a dyadic"))


def format_plmap(f: PLMap) -> str:
    body = " ".join(f"({format_dyadic(x)} {format_dyadic(y)})" for x, y in f.points)
    return f"(plmap ({body}))"


def parse_plmap(value: Union[str, Form]) -> PLMap:
    form = _expect(_form(value), "plmap", 2)
    points = []
    for pair in form[1]:
        if not isinstance(pair, list) or len(pair) != 2:
            raise FormatError(f"Breakpoints are (x y) pairs, got {_show(pair)}")
        points.append((parse_dyadic(pair[0]), parse_dyadic(pair[1])))
    return plmap.make_plmap(points)


# Complexes

def format_complex(K: DirectedComplex) -> str:
    base = K.base if K.base is not None else K
    edges = [_list(_symbol(e.name), [_symbol(e.source), _symbol(e.target)]) for e in base.edges]
    cells = [
        _list(_symbol(c.name), ["(" + " ".join(map(_symbol, c.top)) + ")", "(" + " ".join(map(_symbol, c.bottom)) + ")"])
        for c in base.cells
    ]
    leaves = [_list(_symbol(e), [str(count)]) for e, count in K.nu.items()]
    return _list(
        "complex",
        [
            _list("name", [_symbol(base.name)]),
            _list("vertices", map(_symbol, base.vertices)),
            _list("edges", edges),
            _list("cells", cells),
            _list("leaves", leaves),
        ],
    )


def parse_complex(value: Union[str, Form]) -> DirectedComplex:
    form = _expect(_form(value), "complex")
    sections: Dict[str, List[Form]] = {}
    for section in form[1:]:
        if not isinstance(section, list) or not section:
            raise FormatError(f"Unexpected complex section {_show(section)}")
        sections[_atom(section[0], "a section name")] = section[1:]
    name = _atom(sections["name"][0], "a complex name") if sections.get("name") else "K"
    edges = []
    for entry in sections.get("edges", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise FormatError(f"Edges are (name source target), got {_show(entry)}")
        edges.append(tuple(_atom(part, "an edge field") for part in entry))
    cells = []
    for entry in sections.get("cells", []):
        if not isinstance(entry, list) or len(entry) != 3 or not all(isinstance(p, list) for p in entry[1:]):
            raise FormatError(f"Cells are (name (top...) (bottom...)), got {_show(entry)}")
        cells.append((_atom(entry[0], "a cell name"), [_atom(e, "an edge") for e in entry[1]], [_atom(e, "an edge") for e in entry[2]]))
    vertices = [_atom(v, "a vertex") for v in sections["vertices"]] if "vertices" in sections else None
    K = make_complex(edges, cells, vertices=vertices, name=name)
    nu = {}
    for entry in sections.get("leaves", []):
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"Leaves are (edge count), got {_show(entry)}")
        nu[_atom(entry[0], "an edge")] = _int(entry[1], "leaf count")
    return expansion(K, nu) if nu else K


def resolve(name: str, complexes: Optional[Mapping[str, DirectedComplex]] = None) -> DirectedComplex:
    if complexes and name in complexes:
        return complexes[name]
    return resolve_complex(name)


# Diagrams

def _format_context(K: DirectedComplex, path: Sequence[str]) -> str:
    if len(K.edges) == 1:
        return f"{len(path)}"
    return f"({' '.join(map(_symbol, path))})"


def _parse_context(K: DirectedComplex, form: Form) -> tuple:
    if isinstance(form, list):
        return tuple(_atom(e, "an edge") for e in form)
    count = _int(form, "context length")
    if len(K.edges) != 1:
        raise FormatError(f"Integer contexts need a one-edge complex, {K.name} has {len(K.edges)} edges")
    return (K.edges[0].name,) * count


def format_diagram(D: Diagram) -> str:
    K = D.complex
    atoms = [
        _list(_format_context(K, a.left), [_symbol(a.cell), str(a.sign), _format_context(K, a.right)])
        for a in D.atoms
    ]
    return _list("diagram", [_symbol(K.name), _list("top", map(_symbol, D.top)), _list("atoms", atoms)])


def parse_diagram(value: Union[str, Form], complexes: Optional[Mapping[str, DirectedComplex]] = None) -> Diagram:
    form = _expect(_form(value), "diagram", 4)
    K = resolve(_atom(form[1], "a complex name"), complexes)
    top_form = _expect(form[2], "top")
    top = tuple(_atom(e, "an edge") for e in top_form[1:])
    atoms = []
    for entry in _expect(form[3], "atoms")[1:]:
        if not isinstance(entry, list) or len(entry) != 4:
            raise FormatError(f"Atoms are ((u...) cell sign (v...)), got {_show(entry)}")
        atoms.append(
            Atom(
                _parse_context(K, entry[0]),
                _atom(entry[1], "a cell name"),
                _int(entry[2], "sign"),
                _parse_context(K, entry[3]),
            )
        )
    return Diagram(K, top, tuple(atoms))


# Schemes

def format_scheme(scheme: Scheme) -> str:
    return _list("scheme", [_list(_symbol(cell), [format_plmap(f)]) for cell, f in sorted(scheme.maps.items())])


def parse_scheme(value: Union[str, Form]) -> Scheme:
    form = _expect(_form(value), "scheme")
    maps = {}
    for entry in form[1:]:
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"Scheme entries are (cell (plmap ...)), got {_show(entry)}")
        maps[_atom(entry[0], "a cell name")] = parse_plmap(entry[1])
    return Scheme(maps)


# Kernel words and universal-group elements

def _format_letter(letter: Letter) -> str:
    leaf = f" {letter.generator.leaf}" if letter.generator.leaf != 1 else ""
    return f"({format_plmap(letter.generator.h)} {letter.sign}{leaf})"


def format_aword(w: AWord) -> str:
    return "(aword" + "".join(" " + _format_letter(letter) for letter in w) + ")"


def parse_aword(value: Union[str, Form]) -> AWord:
    form = _expect(_form(value), "aword")
    letters = []
    for entry in form[1:]:
        if not isinstance(entry, list) or len(entry) not in (2, 3):
            raise FormatError(f"Letters are ((plmap ...) sign [leaf]), got {_show(entry)}")
        sign = _int(entry[1], "sign")
        if sign not in (1, -1):
            raise FormatError(f"Letter signs are 1 or -1, got {sign}")
        leaf = _int(entry[2], "leaf") if len(entry) == 3 else 1
        letters.append(Letter(Generator(parse_plmap(entry[0]), leaf), sign))
    return AWord(tuple(letters))


def format_g1(g: G1Element) -> str:
    return f"(g1 {format_aword(g.apart)} {format_plmap(g.fpart)})"


def parse_g1(value: Union[str, Form]) -> G1Element:
    form = _expect(_form(value), "g1", 3)
    return G1Element(parse_aword(form[1]), parse_plmap(form[2]))


# Presentations and graphs

def format_presentation(p: Presentation) -> str:
    header = "".join(f";; {line}\n" for line in p.header)
    gens = _list("gens", map(_symbol, p.generators))
    rels = _list("rels", [_list("comm", [_symbol(a), _symbol(b)]) for a, b in p.relators])
    return header + _list("presentation", [gens, rels])


def format_graph(graph: IndependenceGraph) -> str:
    return graph.to_dot()


_PARSERS = {
    "plmap": parse_plmap,
    "complex": parse_complex,
    "scheme": parse_scheme,
    "aword": parse_aword,
    "g1": parse_g1,
}


def parse_value(form: Form, complexes: Optional[Mapping[str, DirectedComplex]] = None):
    """Dispatch on the head symbol of a form"""
    if not isinstance(form, list) or not form:
        raise FormatError(f"Expected a tagged form, got {_show(form)}")
    head = form[0]
    if head == "diagram":
        return parse_diagram(form, complexes)
    if head in _PARSERS:
        return _PARSERS[head](form)
    raise FormatError(f"Unknown form ({head} ...)")


def format_value(value) -> str:
    if isinstance(value, PLMap):
        return format_plmap(value)
    if isinstance(value, Diagram):
        return format_diagram(value)
    if isinstance(value, DirectedComplex):
        return format_complex(value)
    if isinstance(value, Scheme):
        return format_scheme(value)
    if isinstance(value, AWord):
        return format_aword(value)
    if isinstance(value, G1Element):
        return format_g1(value)
    if isinstance(value, Presentation):
        return format_presentation(value)
    if isinstance(value, IndependenceGraph):
        return format_graph(value)
    if isinstance(value, Dyadic):
        return format_dyadic(value)
    raise FormatError(f"No text format for {type(value).__name__}")
