"""
Piecewise-Linear Maps for the Diagram Kernel
Exact dyadic rationals, increasing PL homeomorphisms between intervals,
PLF2 / Phi membership and the Brin-Squier order
"""

import logging
import re
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import total_ordering
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)


class PLMapError(ValueError):
    """Base class for piecewise-linear map errors"""


class NotIncreasing(PLMapError):
    pass


class EmptyDomain(PLMapError):
    pass


class NonzeroOrigin(PLMapError):
    pass


class OutOfDomain(PLMapError):
    pass


class DomainMismatch(PLMapError):
    pass


class NotPhi(PLMapError):
    pass


class NotPLF2(PLMapError):
    pass


class NotDyadic(PLMapError):
    pass


_DYADIC_LITERAL = re.compile(r"^([+-]?\d+)(?:/(?:2\^(\d+)|(\d+)))?$")


def power_of_two_exponent(value: Fraction) -> Optional[int]:
    """Return k when value == 2**k, otherwise None"""
    if value <= 0:
        return None
    num, den = value.numerator, value.denominator
    if num & (num - 1) or den & (den - 1):
        return None
    return num.bit_length() - den.bit_length()


@total_ordering
@dataclass(frozen=True, eq=False)
class Dyadic:
    """Exact rational num / 2**exp, always kept in lowest terms"""

    num: int
    exp: int = 0

    def __post_init__(self):
        num, exp = int(self.num), int(self.exp)
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        elif exp:
            shift = min((num & -num).bit_length() - 1, exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    @classmethod
    def of(cls, value: Union["Dyadic", int, Fraction, str]) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError(f"Cannot read a dyadic from {value!r}")
        if isinstance(value, int):
            return cls(value)
        if isinstance(value, Fraction):
            return cls.from_fraction(value)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"Cannot read a dyadic from {value!r}")

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        den = value.denominator
        if den & (den - 1):
            raise NotDyadic(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Read `m/2^k`, `m/d` (d a power of 2) or `m`"""
        match = _DYADIC_LITERAL.match(text.strip())
        if not match:
            raise NotDyadic(f"Invalid dyadic literal: {text!r}")
        num = int(match.group(1))
        if match.group(2) is not None:
            return cls(num, int(match.group(2)))
        if match.group(3) is not None:
            den = int(match.group(3))
            if den == 0:
                raise NotDyadic(f"Invalid dyadic literal: {text!r}")
            return cls.from_fraction(Fraction(num, den))
        return cls(num)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)

    def is_integer(self) -> bool:
        return self.exp == 0

    def __str__(self) -> str:
        if self.exp == 0:
            return str(self.num)
        return f"{self.num}/2^{self.exp}"

    def __repr__(self) -> str:
        return f"Dyadic({self})"

    def __hash__(self) -> int:
        if self.exp == 0:
            return hash(self.num)
        return hash(self.to_fraction())

    def __eq__(self, other) -> bool:
        if isinstance(other, Dyadic):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, int) and not isinstance(other, bool):
            return self.exp == 0 and self.num == other
        if isinstance(other, Fraction):
            return self.to_fraction() == other
        return NotImplemented

    def __lt__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        exp = max(self.exp, other.exp)
        return (self.num << (exp - self.exp)) < (other.num << (exp - other.exp))

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        exp = max(self.exp, other.exp)
        return Dyadic((self.num << (exp - self.exp)) + (other.num << (exp - other.exp)), exp)

    __radd__ = __add__

    def __neg__(self) -> "Dyadic":
        return Dyadic(-self.num, self.exp)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Dyadic(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num == 0:
            raise ZeroDivisionError("Dyadic division by zero")
        return Dyadic.from_fraction(self.to_fraction() / other.to_fraction())

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self


def _coerce(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Dyadic(value)
    if isinstance(value, Fraction):
        return Dyadic.from_fraction(value)
    return NotImplemented


ZERO = Dyadic(0)
ONE = Dyadic(1)

Point = Tuple[Dyadic, Dyadic]
Coordinate = Union[Dyadic, int, Fraction, str]


class Order(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    @property
    def text(self) -> str:
        return {Order.LESS: "LT", Order.EQUAL: "EQ", Order.GREATER: "GT"}[self]

    @classmethod
    def of(cls, value) -> "Order":
        if value < 0:
            return cls.LESS
        if value > 0:
            return cls.GREATER
        return cls.EQUAL


@dataclass(frozen=True)
class PLMap:
    """
    Increasing piecewise-linear homeomorphism [0, m] -> [a, b].

    Values are only built through make_plmap() or the operations below,
    which keep the breakpoint list canonical: strictly increasing in both
    coordinates, no breakpoint on the segment joining its neighbours.
    """

    points: Tuple[Point, ...]

    @property
    def xs(self) -> Tuple[Dyadic, ...]:
        return tuple(x for x, _ in self.points)

    @property
    def ys(self) -> Tuple[Dyadic, ...]:
        return tuple(y for _, y in self.points)

    @property
    def domain_end(self) -> Dyadic:
        return self.points[-1][0]

    @property
    def image_start(self) -> Dyadic:
        return self.points[0][1]

    @property
    def image_end(self) -> Dyadic:
        return self.points[-1][1]

    def slopes(self) -> List[Fraction]:
        return [
            (y1 - y0).to_fraction() / (x1 - x0).to_fraction()
            for (x0, y0), (x1, y1) in zip(self.points, self.points[1:])
        ]

    def __str__(self) -> str:
        body = " ".join(f"({x} {y})" for x, y in self.points)
        return f"(plmap ({body}))"


def _collinear(p: Point, q: Point, r: Point) -> bool:
    (x0, y0), (x1, y1), (x2, y2) = p, q, r
    return (y1 - y0) * (x2 - x1) == (y2 - y1) * (x1 - x0)


def _canonical(points: Sequence[Point]) -> PLMap:
    if len(points) < 2:
        raise EmptyDomain(f"A PL map needs at least two breakpoints, got {len(points)}")
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if not (x0 < x1 and y0 < y1):
            raise NotIncreasing(f"Breakpoints ({x0} {y0}) and ({x1} {y1}) are not strictly increasing")
    kept: List[Point] = [points[0]]
    for point in points[1:]:
        if len(kept) >= 2 and _collinear(kept[-2], kept[-1], point):
            kept[-1] = point
        else:
            kept.append(point)
    return PLMap(tuple(kept))


def make_plmap(points: Iterable[Tuple[Coordinate, Coordinate]]) -> PLMap:
    """Build a canonical PL map from (x, y) breakpoints whose first x is 0"""
    pts = [(Dyadic.of(x), Dyadic.of(y)) for x, y in points]
    if len(pts) < 2:
        raise EmptyDomain(f"A PL map needs at least two breakpoints, got {len(pts)}")
    if pts[0][0] != ZERO:
        raise NonzeroOrigin(f"Domain must start at 0, got {pts[0][0]}")
    return _canonical(pts)


def identity(m: Coordinate = 1) -> PLMap:
    return make_plmap([(0, 0), (m, m)])


def linear(m: Coordinate, n: Coordinate) -> PLMap:
    """The linear map [0, m] -> [0, n]"""
    return make_plmap([(0, 0), (m, n)])


def _segment(xs: Sequence[Dyadic], t: Dyadic) -> int:
    index = bisect_right(xs, t) - 1
    return min(max(index, 0), len(xs) - 2)


def _interpolate(p: Point, q: Point, t: Dyadic) -> Dyadic:
    (x0, y0), (x1, y1) = p, q
    if t == x0:
        return y0
    if t == x1:
        return y1
    return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def evaluate(f: PLMap, t: Coordinate) -> Dyadic:
    """
    Exact image of t under f. Raises NotDyadic when a slope that is not a
    power of 2 sends t to a non-dyadic value.
    """
    t = Dyadic.of(t)
    if t < ZERO or t > f.domain_end:
        raise OutOfDomain(f"{t} is outside the domain [0, {f.domain_end}]")
    i = _segment(f.xs, t)
    return _interpolate(f.points[i], f.points[i + 1], t)


def preimage(f: PLMap, y: Coordinate) -> Dyadic:
    """The unique t with evaluate(f, t) == y"""
    y = Dyadic.of(y)
    if y < f.image_start or y > f.image_end:
        raise OutOfDomain(f"{y} is outside the image [{f.image_start}, {f.image_end}]")
    i = _segment(f.ys, y)
    (x0, y0), (x1, y1) = f.points[i], f.points[i + 1]
    return _interpolate((y0, x0), (y1, x1), y)


def _chain(f: PLMap, g: PLMap) -> PLMap:
    breaks = set(f.xs)
    for gx in g.xs:
        if f.image_start < gx < f.image_end:
            breaks.add(preimage(f, gx))
    points = [(x, evaluate(g, evaluate(f, x))) for x in sorted(breaks)]
    return _canonical(points)


def compose(f: PLMap, g: PLMap) -> PLMap:
    """
    Apply f, then g (the composite written fg with arguments on the left).
    The image of f must equal the domain of g. NotDyadic propagates from
    evaluate when the slopes are not powers of 2.
    """
    if f.image_start != ZERO or f.image_end != g.domain_end:
        raise DomainMismatch(
            f"Image [{f.image_start}, {f.image_end}] is not the domain [0, {g.domain_end}]"
        )
    return _chain(f, g)


def act(h: PLMap, g: PLMap) -> PLMap:
    """Right action h -> hg of g on a Phi-type map h whose image lies inside the domain of g"""
    if h.image_start < ZERO or h.image_end > g.domain_end:
        raise DomainMismatch(
            f"Image [{h.image_start}, {h.image_end}] does not fit in domain [0, {g.domain_end}]"
        )
    return _chain(h, g)


def invert(f: PLMap) -> PLMap:
    return make_plmap([(y, x) for x, y in f.points])


def _require_origin(f: PLMap, role: str):
    if f.image_start != ZERO:
        raise DomainMismatch(f"{role} must map 0 to 0, got image start {f.image_start}")


def tensor(f: PLMap, g: PLMap) -> PLMap:
    """Side-by-side map acting as f on [0,k] and as g(t-k)+l on [k,k+m]; g must fix the origin"""
    _require_origin(g, "Right factor")
    dx, dy = f.domain_end, f.image_end
    return _canonical(list(f.points) + [(x + dx, y + dy) for x, y in g.points[1:]])


def pad(f: PLMap, left: int, right: int) -> PLMap:
    """Identity on [0,left], f shifted by left, identity on the trailing [.., ..+right]"""
    _require_origin(f, "Padded map")
    points: List[Point] = []
    if left:
        points.append((ZERO, ZERO))
    points.extend((x + left, y + left) for x, y in f.points)
    if right:
        x, y = points[-1]
        points.append((x + right, y + right))
    return _canonical(points)


def restrict(f: PLMap, a: Coordinate, b: Coordinate) -> PLMap:
    """f on [a, b], re-based so the domain starts at 0 (the image is not shifted)"""
    a, b = Dyadic.of(a), Dyadic.of(b)
    if not (ZERO <= a < b <= f.domain_end):
        raise OutOfDomain(f"[{a}, {b}] is not a subinterval of [0, {f.domain_end}]")
    points = [(ZERO, evaluate(f, a))]
    points.extend((x - a, y) for x, y in f.points if a < x < b)
    points.append((b - a, evaluate(f, b)))
    return _canonical(points)


def _power_of_two_slopes(f: PLMap) -> bool:
    return all(power_of_two_exponent(s) is not None for s in f.slopes())


def is_plf2(f: PLMap) -> bool:
    """Member of PLF2(m -> n): integer ends, 0 -> 0, power-of-2 slopes"""
    return (
        f.image_start == ZERO
        and f.domain_end.is_integer()
        and f.image_end.is_integer()
        and _power_of_two_slopes(f)
    )


def is_phi(f: PLMap) -> bool:
    """Member of Phi: [0,1] onto a dyadic subinterval of [0,1], power-of-2 slopes"""
    return (
        f.domain_end == ONE
        and f.image_start >= ZERO
        and f.image_end <= ONE
        and _power_of_two_slopes(f)
    )


def _slope_on(f: PLMap, a: Dyadic, b: Dyadic) -> Fraction:
    return (evaluate(f, b) - evaluate(f, a)).to_fraction() / (b - a).to_fraction()


def bs_compare(f: PLMap, g: PLMap) -> Order:
    """
    Brin-Squier order: compare right derivatives at the least upper bound of
    {t | f == g on [0, t]}. Maps that already differ at 0 (only possible in Phi)
    are ordered by their value at 0.
    """
    if f.domain_end != g.domain_end:
        raise DomainMismatch(f"Domains [0, {f.domain_end}] and [0, {g.domain_end}] differ")
    if f.image_start != g.image_start:
        return Order.LESS if f.image_start < g.image_start else Order.GREATER
    merged = sorted(set(f.xs) | set(g.xs))
    for a, b in zip(merged, merged[1:]):
        kf, kg = _slope_on(f, a, b), _slope_on(g, a, b)
        if kf != kg:
            return Order.LESS if kf < kg else Order.GREATER
    return Order.EQUAL


def interiors_disjoint(h1: PLMap, h2: PLMap) -> bool:
    for h in (h1, h2):
        if not is_phi(h):
            raise NotPhi(f"{h} is not in Phi")
    return h1.image_end <= h2.image_start or h2.image_end <= h1.image_start


@dataclass(frozen=True)
class Scheme:
    """Transition scheme: positive cell name -> PL map [0,|top|] -> [0,|bottom|]"""

    maps: Dict[str, PLMap] = field(default_factory=dict)

    def for_cell(self, cell: str, sign: int) -> Optional[PLMap]:
        f = self.maps.get(cell)
        if f is None:
            return None
        return f if sign > 0 else invert(f)
