#!/usr/bin/env python3
"""
Diagram Kernel Command Line
Batch subcommands over the s-expression formats; exit 0 on success, 1 on
parse or validation errors, 2 on a negative answer (eq false)
"""

import argparse
import logging
import os
import sys
from typing import Dict, List, Optional

import diagram
import guniversal
import plmap
import squier
import thompson
from diagram import Diagram
from directed_complex import DirectedComplex, expansion, resolve_complex
from guniversal import G1Element
from kernel_config import KernelConfig, load_config
from sexp_format import (
    FormatError,
    format_value,
    parse_complex,
    parse_value,
    read,
    read_all,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NEGATIVE = 2


class UsageError(ValueError):
    pass


class KernelArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r") as f:
        return f.read()


class Session:
    """One command invocation: configuration plus complexes named on the command line"""

    def __init__(self, config: KernelConfig):
        self.config = config
        self.complexes: Dict[str, DirectedComplex] = {}

    def complex(self, name_or_path: str) -> DirectedComplex:
        if os.path.exists(name_or_path) or name_or_path == "-":
            K = parse_complex(read(_read_text(name_or_path)))
            self.complexes[K.name] = K
            return K
        return resolve_complex(name_or_path)

    def load(self, path: str):
        return parse_value(read(_read_text(path)), self.complexes)

    def load_all(self, path: str) -> list:
        return [parse_value(form, self.complexes) for form in read_all(_read_text(path))]

    def read_diagram(self, path: str) -> Diagram:
        value = self.load(path)
        if not isinstance(value, Diagram):
            raise FormatError(f"{path} does not hold a diagram")
        return value

    def read_plmap(self, path: str) -> plmap.PLMap:
        value = self.load(path)
        if not isinstance(value, plmap.PLMap):
            raise FormatError(f"{path} does not hold a PL map")
        return value

    def element(self, value) -> G1Element:
        if isinstance(value, Diagram):
            return guniversal.normal_form(value)
        if isinstance(value, G1Element):
            return value
        raise FormatError(f"Expected a diagram or a (g1 ...) element, got {type(value).__name__}")


def _emit(value) -> None:
    text = value if isinstance(value, str) else format_value(value)
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_reduce(session: Session, args) -> int:
    _emit(diagram.reduce(session.read_diagram(args.file)))
    return EXIT_OK


def cmd_eq(session: Session, args) -> int:
    same = diagram.equivalent(session.read_diagram(args.first), session.read_diagram(args.second))
    _emit("true" if same else "false")
    return EXIT_OK if same else EXIT_NEGATIVE


def cmd_cells(session: Session, args) -> int:
    _emit(str(diagram.cell_count(session.read_diagram(args.file))))
    return EXIT_OK


def cmd_transition(session: Session, args) -> int:
    D = session.read_diagram(args.file)
    if args.scheme:
        scheme = session.load(args.scheme)
        if not isinstance(scheme, plmap.Scheme):
            raise FormatError(f"{args.scheme} does not hold a scheme")
    else:
        scheme = diagram.linear_scheme(D.complex)
    _emit(diagram.transition(D, scheme))
    return EXIT_OK


def cmd_to_plf(session: Session, args) -> int:
    _emit(thompson.to_plf(session.read_diagram(args.file)))
    return EXIT_OK


def cmd_from_plf(session: Session, args) -> int:
    _emit(thompson.from_plf(session.read_plmap(args.file)))
    return EXIT_OK


def cmd_theta(session: Session, args) -> int:
    _emit(diagram.reduce(diagram.collapse_leaves(session.read_diagram(args.file))))
    return EXIT_OK


def cmd_alpha(session: Session, args) -> int:
    K = session.complex(args.complex) if args.complex else guniversal.H1
    _emit(guniversal.alpha_diagram(session.read_plmap(args.file), args.sign, args.leaf, K))
    return EXIT_OK


def cmd_normal_form(session: Session, args) -> int:
    _emit(guniversal.normal_form(session.read_diagram(args.file)))
    return EXIT_OK


def cmd_mul(session: Session, args) -> int:
    g1 = session.element(session.load(args.first))
    g2 = session.element(session.load(args.second))
    _emit(guniversal.multiply(g1, g2))
    return EXIT_OK


def cmd_compare(session: Session, args) -> int:
    g1 = session.element(session.load(args.first))
    g2 = session.element(session.load(args.second))
    order = guniversal.g1_compare(g1, g2, max_degree=session.config.magnus_max_degree)
    _emit(order.text)
    return EXIT_OK


def cmd_sort(session: Session, args) -> int:
    elements = [session.element(value) for value in session.load_all(args.file)]
    for g in guniversal.g1_sort(elements, max_degree=session.config.magnus_max_degree):
        _emit(g)
    return EXIT_OK


def _path(text: str) -> tuple:
    return tuple(text.split())


def cmd_indep_graph(session: Session, args) -> int:
    K = session.complex(args.complex)
    bound = args.bound if args.bound is not None else session.config.homotopy_bound
    _emit(squier.independence_graph(K, _path(args.path), bound))
    return EXIT_OK


def _parse_nu(items: List[str]) -> Dict[str, int]:
    nu = {}
    for item in items:
        edge, sep, count = item.partition("=")
        if not sep:
            raise UsageError(f"--nu expects EDGE=COUNT, got {item!r}")
        try:
            nu[edge] = int(count)
        except ValueError:
            raise UsageError(f"--nu expects an integer count, got {item!r}") from None
    return nu


def cmd_present_kernel(session: Session, args) -> int:
    K = session.complex(args.complex)
    nu = _parse_nu(args.nu) if args.nu else dict(K.nu)
    base = K.base if K.base is not None else K
    expanded = expansion(base, nu) if any(nu.values()) else base
    depth = args.depth if args.depth is not None else session.config.cover_depth
    bound = args.bound if args.bound is not None else session.config.homotopy_bound
    _emit(squier.kernel_presentation(expanded, nu, _path(args.path), depth, bound))
    return EXIT_OK


def cmd_cover_edge(session: Session, args) -> int:
    _emit(squier.cover_edge_function(args.level, args.index))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = KernelArgumentParser(prog="cli.py", description="Diagram group kernel")
    parser.add_argument("--format", choices=["sexp"], default="sexp", help="text format (only sexp)")
    parser.add_argument("--config", help="alternative JSON configuration file")
    parser.add_argument(
        "--complex-file", action="append", default=[], help="file defining a complex that diagram files may name"
    )
    sub = parser.add_subparsers(dest="command", parser_class=KernelArgumentParser)
    sub.required = True

    def command(name, handler, help_text, files=("file",)):
        p = sub.add_parser(name, help=help_text)
        for file_arg in files:
            p.add_argument(file_arg, help="input file, '-' for stdin")
        p.set_defaults(handler=handler)
        return p

    command("reduce", cmd_reduce, "print the reduced diagram")
    command("eq", cmd_eq, "test two diagrams for equivalence", files=("first", "second"))
    command("cells", cmd_cells, "count the cells of a diagram")
    command("transition", cmd_transition, "transition function of a diagram").add_argument(
        "--scheme", help="scheme file (default: linear maps)"
    )
    command("to-plf", cmd_to_plf, "Dunce hat diagram to PLF2 map")
    command("from-plf", cmd_from_plf, "PLF2 map to reduced Dunce hat diagram")
    command("theta", cmd_theta, "collapse leaf cells")
    alpha = command("alpha", cmd_alpha, "generator diagram of alpha_h")
    alpha.add_argument("--sign", type=int, choices=[1, -1], default=1)
    alpha.add_argument("--leaf", type=int, default=1)
    alpha.add_argument("--complex", help="expansion of the Dunce hat, by name or file")
    command("normal-form", cmd_normal_form, "semidirect normal form of an (x,x)-diagram")
    command("mul", cmd_mul, "product of two universal-group elements", files=("first", "second"))
    command("compare", cmd_compare, "order two universal-group elements", files=("first", "second"))
    command("sort", cmd_sort, "sort the elements of a file")

    graph = command("indep-graph", cmd_indep_graph, "independence graph in DOT", files=())
    graph.add_argument("--complex", required=True)
    graph.add_argument("--path", required=True, help='1-path such as "x x"')
    graph.add_argument("--bound", type=int)

    kernel = command("present-kernel", cmd_present_kernel, "kernel presentation", files=())
    kernel.add_argument("--complex", required=True)
    kernel.add_argument("--nu", action="append", help="EDGE=COUNT, repeatable")
    kernel.add_argument("--path", default="x")
    kernel.add_argument("--depth", type=int)
    kernel.add_argument("--bound", type=int)

    cover = command("cover-edge", cmd_cover_edge, "affine map of a cover edge", files=())
    cover.add_argument("level", type=int)
    cover.add_argument("index", type=int)
    return parser


def run(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = load_config(args.config)
    except ValueError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR
    logging.basicConfig(
        level=getattr(logging, config.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    session = Session(config)
    try:
        for path in args.complex_file:
            session.complex(path)
        return args.handler(session, args)
    except (ValueError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
