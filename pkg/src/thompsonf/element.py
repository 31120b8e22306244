"""Elements of Thompson's group F as exact piecewise-linear maps of [0, 1].

Maps act on the right and compose left to right: ``compose(f, g)`` sends
``x`` to ``((x)f)g``.  An element stores its breakpoints as integers over a
single power of two, which keeps composition down to shifts and adds.
"""

from __future__ import annotations

import enum
import re
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Tuple, Union

from .dyadic import Dyadic, format_number
from .errors import (
    BadEndpoint,
    BadInterval,
    BadSlope,
    NonDyadic,
    NonMonotone,
    OutOfRange,
    ParseError,
)

Point = Union[Dyadic, Fraction, int, str]


def _shift(v: int, k: int) -> int:
    return v << k if k >= 0 else v >> -k


def _log2_ratio(num: int, den: int):
    """``s`` with ``num == den * 2**s``, or None when the ratio is not a power of two."""
    if num >= den:
        q, r = divmod(num, den)
        sign = 1
    else:
        q, r = divmod(den, num)
        sign = -1
    if r or q & (q - 1):
        return None
    return sign * (q.bit_length() - 1)


class Element:
    """A canonical element of F.

    ``xs[i] / 2**scale`` is mapped to ``ys[i] / 2**scale``; ``slopes[i]`` is the
    base-2 log of the slope on ``[xs[i], xs[i+1]]``.  No two adjacent slopes
    are equal and ``scale`` is minimal, so equal maps have equal fields.
    """

    __slots__ = ("scale", "xs", "ys", "slopes", "_hash")

    def __init__(self, scale: int, xs: Tuple[int, ...], ys: Tuple[int, ...], slopes: Tuple[int, ...]):
        self.scale = scale
        self.xs = xs
        self.ys = ys
        self.slopes = slopes
        self._hash = hash((scale, xs, ys))

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        return self.scale == other.scale and self.xs == other.xs and self.ys == other.ys

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "Element") -> "Element":
        return compose(self, other)

    def __invert__(self) -> "Element":
        return invert(self)

    def __pow__(self, n: int) -> "Element":
        return power(self, n)

    @property
    def breakpoints(self) -> Tuple[Tuple[Dyadic, Dyadic], ...]:
        e = self.scale
        return tuple((Dyadic(x, e), Dyadic(y, e)) for x, y in zip(self.xs, self.ys))

    def is_identity(self) -> bool:
        return len(self.xs) == 2

    def __repr__(self):
        pts = ", ".join(f"({format_number(x)}, {format_number(y)})" for x, y in self.breakpoints)
        return f"Element([{pts}])"


def _canonical(scale: int, xs: Sequence[int], ys: Sequence[int]) -> Element:
    """Drop collinear interior breakpoints and reduce the scale; slopes must be valid."""
    cx, cy, cs = [xs[0]], [ys[0]], []
    for i in range(1, len(xs)):
        s = _log2_ratio(ys[i] - ys[i - 1], xs[i] - xs[i - 1])
        if cs and cs[-1] == s:
            cx[-1] = xs[i]
            cy[-1] = ys[i]
        else:
            cx.append(xs[i])
            cy.append(ys[i])
            cs.append(s)
    return _reduced(scale, cx, cy, cs)


def _reduced(scale: int, xs, ys, slopes) -> Element:
    acc = 0
    for v in xs:
        acc |= v
    for v in ys:
        acc |= v
    tz = min((acc & -acc).bit_length() - 1, scale)
    if tz:
        xs = [v >> tz for v in xs]
        ys = [v >> tz for v in ys]
    return Element(scale - tz, tuple(xs), tuple(ys), tuple(slopes))


def make_element(breakpoints: Iterable[Tuple[Point, Point]]) -> Element:
    """Build an element from its breakpoint list, starting at (0,0) and ending at (1,1).

    Redundant breakpoints (equal slopes on both sides) are removed.
    """
    pts = []
    for x, y in breakpoints:
        try:
            pts.append((Dyadic.coerce(x), Dyadic.coerce(y)))
        except NonDyadic:
            raise
        except (TypeError, ValueError) as exc:
            raise NonDyadic(str(exc)) from exc
    if len(pts) < 2 or pts[0] != (0, 0) or pts[-1] != (1, 1):
        raise BadEndpoint("breakpoints must start at (0,0) and end at (1,1)")
    scale = max(max(x.exp, y.exp) for x, y in pts)
    xs = [x.scaled(scale) for x, _ in pts]
    ys = [y.scaled(scale) for _, y in pts]
    for i in range(1, len(pts)):
        dx, dy = xs[i] - xs[i - 1], ys[i] - ys[i - 1]
        if dx <= 0 or dy <= 0:
            raise NonMonotone(f"coordinates not strictly increasing at breakpoint {i}")
        if _log2_ratio(dy, dx) is None:
            raise BadSlope(f"slope {Fraction(dy, dx)} on segment {i - 1} is not a power of 2")
    return _canonical(scale, xs, ys)


IDENTITY = Element(0, (0, 1), (0, 1), (0,))


def identity() -> Element:
    return IDENTITY


def compose(f: Element, g: Element) -> Element:
    """The element ``x -> ((x)f)g``."""
    if len(f.xs) == 2:
        return g
    if len(g.xs) == 2:
        return f
    fs, gs = f.slopes, g.slopes
    up = max(0, max(fs))
    down = max(0, -min(gs))
    work = max(f.scale, g.scale) + up + down
    kf, kg = work - f.scale, work - g.scale
    X = [v << kf for v in f.xs]
    Y = [v << kf for v in f.ys]
    U = [v << kg for v in g.xs]
    V = [v << kg for v in g.ys]
    top = 1 << work
    out_x, out_y, out_s = [0], [0], []
    i = j = 0
    while True:
        m = Y[i + 1] if Y[i + 1] < U[j + 1] else U[j + 1]
        si, sj = fs[i], gs[j]
        x = X[i] + _shift(m - Y[i], -si)
        z = V[j] + _shift(m - U[j], sj)
        s = si + sj
        if out_s and out_s[-1] == s:
            out_x[-1] = x
            out_y[-1] = z
        else:
            out_x.append(x)
            out_y.append(z)
            out_s.append(s)
        if m == top:
            break
        if Y[i + 1] == m:
            i += 1
        if U[j + 1] == m:
            j += 1
    return _reduced(work, out_x, out_y, out_s)


def invert(f: Element) -> Element:
    return Element(f.scale, f.ys, f.xs, tuple(-s for s in f.slopes))


def power(f: Element, n: int) -> Element:
    if n < 0:
        f, n = invert(f), -n
    result = IDENTITY
    while n:
        if n & 1:
            result = compose(result, f)
        n >>= 1
        if n:
            f = compose(f, f)
    return result


def evaluate(f: Element, p: Point) -> Fraction:
    """Exact image ``(p)f`` of a rational point ``p`` in [0, 1]."""
    if isinstance(p, Dyadic):
        p = p.as_fraction()
    elif isinstance(p, str):
        from .dyadic import parse_rational

        p = parse_rational(p)
    p = Fraction(p)
    if p < 0 or p > 1:
        raise OutOfRange(f"{p} is outside [0, 1]")
    P = p * (1 << f.scale)
    i = min(bisect_right(f.xs, P) - 1, len(f.xs) - 2)
    s = f.slopes[i]
    y = f.ys[i] + (P - f.xs[i]) * (Fraction(1 << s) if s >= 0 else Fraction(1, 1 << -s))
    return y / (1 << f.scale)


def _eval_scaled(f: Element, v: int, e: int) -> Dyadic:
    """Image of the dyadic ``v / 2**e``, kept dyadic."""
    w = max(e, f.scale)
    V = v << (w - e)
    xs = [x << (w - f.scale) for x in f.xs]
    i = min(bisect_right(xs, V) - 1, len(xs) - 2)
    s = f.slopes[i]
    y0 = f.ys[i] << (w - f.scale)
    if s >= 0:
        return Dyadic(y0 + ((V - xs[i]) << s), w)
    return Dyadic((y0 << -s) + (V - xs[i]), w - s)


def image(f: Element, p: Point) -> Dyadic:
    """``(p)f`` for a dyadic ``p``, as a Dyadic."""
    d = Dyadic.coerce(p)
    if d < 0 or d > 1:
        raise OutOfRange(f"{d} is outside [0, 1]")
    return _eval_scaled(f, d.num, d.exp)


def equals(f: Element, g: Element) -> bool:
    return f == g


def commutes(f: Element, g: Element) -> bool:
    return compose(f, g) == compose(g, f)


def commutator(f: Element, g: Element) -> Element:
    """``[f, g] = f^-1 g^-1 f g``."""
    return compose(compose(invert(f), invert(g)), compose(f, g))


def endpoint_slopes(f: Element) -> Tuple[int, int]:
    return f.slopes[0], f.slopes[-1]


def abelianise(f: Element) -> Tuple[int, int]:
    """Exponent sums ``(expsum_x0, expsum_x1)``.

    The germ map ``f -> (log2 f'(0), log2 f'(1))`` is a homomorphism sending
    x0 to (1, -1) and x1 to (0, -1), so the exponent sums are ``(a, -a - b)``.
    """
    a, b = f.slopes[0], f.slopes[-1]
    return a, -a - b


def rescale_into(f: Element, a: Point, b: Point) -> Element:
    """The affine copy of ``f`` acting on ``[a, b]``, identity elsewhere."""
    a, b = Dyadic.coerce(a), Dyadic.coerce(b)
    if not (0 <= a < b <= 1):
        raise BadInterval(f"need 0 <= a < b <= 1, got [{a}, {b}]")
    width = b - a
    pts = [(Dyadic(0), Dyadic(0))] if a > 0 else []
    pts += [(a + width * x, a + width * y) for x, y in f.breakpoints]
    if b < 1:
        pts.append((Dyadic(1), Dyadic(1)))
    return make_element(pts)


def restrict(f: Element, a: Point, b: Point) -> Element:
    """``f`` on ``[a, b]`` and the identity elsewhere; ``f`` must fix ``a`` and ``b``."""
    a, b = Dyadic.coerce(a), Dyadic.coerce(b)
    if not (0 <= a < b <= 1) or image(f, a) != a or image(f, b) != b:
        raise BadInterval(f"[{a}, {b}] is not an invariant interval")
    pts = [(Dyadic(0), Dyadic(0)), (a, a)]
    pts += [(x, y) for x, y in f.breakpoints if a < x < b]
    pts += [(b, b), (Dyadic(1), Dyadic(1))]
    dedup = [pts[0]]
    for p in pts[1:]:
        if p[0] != dedup[-1][0]:
            dedup.append(p)
    return make_element(dedup)


@dataclass(frozen=True)
class IntervalSet:
    """Disjoint open intervals in increasing order."""

    intervals: Tuple[Tuple[Fraction, Fraction], ...] = ()

    def __iter__(self) -> Iterator[Tuple[Fraction, Fraction]]:
        return iter(self.intervals)

    def __len__(self):
        return len(self.intervals)

    def __bool__(self):
        return bool(self.intervals)

    def __contains__(self, p) -> bool:
        p = Fraction(p)
        return any(a < p < b for a, b in self.intervals)

    @property
    def inf(self) -> Fraction:
        return self.intervals[0][0]

    @property
    def sup(self) -> Fraction:
        return self.intervals[-1][1]

    def __str__(self):
        if not self.intervals:
            return "{}"
        return " U ".join(f"({format_number(a)}, {format_number(b)})" for a, b in self.intervals)


def _fixed_components(f: Element):
    """Closed components ``(a, b)`` of the fixed-point set of ``f``; ``a == b`` for isolated points."""
    den = 1 << f.scale
    comps = []
    xs, ys, ss = f.xs, f.ys, f.slopes
    for i, s in enumerate(ss):
        x0, x1, y0 = xs[i], xs[i + 1], ys[i]
        if s == 0:
            if y0 == x0:
                comps.append((Fraction(x0, den), Fraction(x1, den)))
            continue
        # fixed point of x -> y0 + (x - x0) 2^s
        if s > 0:
            t = Fraction(y0 - (x0 << s), 1 - (1 << s))
        else:
            k = -s
            t = Fraction((y0 << k) - x0, (1 << k) - 1)
        if x0 <= t <= x1:
            comps.append((t / den, t / den))
    comps.sort()
    merged = []
    for a, b in comps:
        if merged and a <= merged[-1][1]:
            if b > merged[-1][1]:
                merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    return merged


def support(f: Element) -> IntervalSet:
    """The open set ``{x : (x)f != x}`` as disjoint intervals with rational endpoints."""
    comps = _fixed_components(f)
    gaps = []
    for (_, b), (a, _) in zip(comps, comps[1:]):
        if b < a:
            gaps.append((b, a))
    return IntervalSet(tuple(gaps))


class Tag(enum.Enum):
    FIXED_POINTWISE = "FixedPointwise"
    SUPPORT_DENSE = "SupportDense"


@dataclass(frozen=True)
class FixedDecomposition:
    cuts: Tuple[Dyadic, ...]
    tags: Tuple[Tag, ...]

    def intervals(self):
        return zip(self.cuts, self.cuts[1:], self.tags)

    def __str__(self):
        return "\n".join(f"[{a}, {b}] {t.value}" for a, b, t in self.intervals())


def _is_dyadic(q: Fraction) -> bool:
    d = q.denominator
    return d & (d - 1) == 0


def fixed_decomposition(f: Element) -> FixedDecomposition:
    """Cut [0, 1] at the dyadic fixed points bounding maximal fixed or moved intervals."""
    comps = _fixed_components(f)
    cuts = {Fraction(0), Fraction(1)}
    fixed = []
    for a, b in comps:
        if a < b:
            cuts.update((a, b))
            fixed.append((a, b))
        elif _is_dyadic(a):
            cuts.add(a)
    ordered = sorted(cuts)
    tags = []
    for c, d in zip(ordered, ordered[1:]):
        inside = any(a <= c and d <= b for a, b in fixed)
        tags.append(Tag.FIXED_POINTWISE if inside else Tag.SUPPORT_DENSE)
    return FixedDecomposition(tuple(Dyadic.coerce(c) for c in ordered), tuple(tags))


def centraliser_criterion(f: Element, g: Element) -> bool:
    """Decide whether ``g`` commutes with ``f`` interval by interval.

    ``g`` must fix every cut of ``fixed_decomposition(f)``; on each moved
    interval the restrictions of ``f`` and ``g`` must commute.
    """
    dec = fixed_decomposition(f)
    for d in dec.cuts:
        if image(g, d) != d:
            return False
    for a, b, tag in dec.intervals():
        if tag is Tag.FIXED_POINTWISE:
            continue
        if not commutes(restrict(f, a, b), restrict(g, a, b)):
            return False
    return True


X0 = make_element([(0, 0), ("1/4", "1/2"), ("1/2", "3/4"), (1, 1)])
X1 = make_element([(0, 0), ("1/2", "1/2"), ("5/8", "3/4"), ("3/4", "7/8"), (1, 1)])


@lru_cache(maxsize=None)
def constants() -> dict:
    """Named constants: the generators, their copies on (0, 1/2), and x1 rescaled into (1/2, 1)."""
    half = Dyadic(1, 1)
    x0p = rescale_into(X0, 0, half)
    return {
        "x0": X0,
        "x1": X1,
        "x0p": x0p,
        "x1p": rescale_into(X1, 0, half),
        "x1pp": rescale_into(X1, half, 1),
        "l": x0p,
    }


GENERATORS = {"x0": X0, "x1": X1}

_TERM_RE = re.compile(r"(\S+)")
_LETTER_RE = re.compile(r"^(x0|x1)(?:\^([+-]?\d+))?$")


def parse_word(text: str) -> list:
    """Parse ``id`` or space-separated terms ``x0``, ``x1^-2`` into ``(name, exponent)`` pairs."""
    if text.strip() == "id":
        return []
    letters = []
    for m in _TERM_RE.finditer(text):
        tok = m.group(1)
        lm = _LETTER_RE.match(tok)
        if not lm:
            raise ParseError(f"unknown letter {tok!r}", 1, m.start() + 1)
        letters.append((lm.group(1), int(lm.group(2) or 1)))
    if not letters:
        raise ParseError("empty word", 1, 1)
    return letters


def word_to_element(word) -> Element:
    """Left-to-right product of a word given as text or as ``(name, exponent)`` pairs."""
    if isinstance(word, str):
        word = parse_word(word)
    result = IDENTITY
    for name, exp in word:
        if name not in GENERATORS:
            raise ParseError(f"unknown letter {name!r}")
        result = compose(result, power(GENERATORS[name], exp))
    return result


def format_word(word) -> str:
    if not word:
        return "id"
    return " ".join(name if exp == 1 else f"{name}^{exp}" for name, exp in word)


def breakpoint_strings(f: Element):
    return [[format_number(x), format_number(y)] for x, y in f.breakpoints]
