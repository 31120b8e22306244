"""Group-equation systems over F: words in constants and variables, evaluation, text format.

Text format, one item per line::

    # comment
    const NAME = x0 x1^-2         (a word over the generators)
    $X x0 $X^-1 x0^-1 = 1         (an equation; either side may be "1")

Two-sided equations ``u = v`` are stored as ``u v^-1 = 1``.  The comments
``# vars: ...`` and ``# fresh: N`` carry the variable registry and the
fresh-name counter so that a system survives a serialize/parse round trip.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .element import (
    IDENTITY,
    Element,
    breakpoint_strings,
    compose,
    constants,
    format_word,
    invert,
    make_element,
    parse_word,
    word_to_element,
)
from .errors import ParseError, UnboundVariable, UnknownConstant


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return f"${self.name}"


@dataclass(frozen=True)
class Const:
    name: str
    element: Element = field(repr=False)
    word: Optional[str] = field(default=None, compare=False, repr=False)

    def __str__(self):
        return self.name


Atom = Union[Var, Const]
Letter = Tuple[Atom, int]
GroupWord = Tuple[Letter, ...]
Assignment = Dict[str, Element]

# words over x0, x1 for the builtin constants, checked in the test suite
BUILTIN_WORDS = {
    "x0": "x0",
    "x1": "x1",
    "x0p": "x0 x0 x1^-1 x0^-1",
    "x1p": "x0 x1 x1 x0^-1 x1^-1 x0 x1^-1 x0^-1",
    "x1pp": "x0^-1 x1 x0",
    "l": "x0 x0 x1^-1 x0^-1",
}


def builtin(name: str) -> Const:
    return Const(name, constants()[name], BUILTIN_WORDS[name])


def is_builtin(c: Const) -> bool:
    table = constants()
    return c.name in table and table[c.name] == c.element


def as_word(term) -> GroupWord:
    """Coerce a Var, Const, letter sequence or word into a word."""
    if isinstance(term, (Var, Const)):
        return ((term, 1),)
    if isinstance(term, str):
        return ((Var(term), 1),)
    return tuple(term)


def concat(*terms) -> GroupWord:
    out: List[Letter] = []
    for t in terms:
        out.extend(as_word(t))
    return tuple(out)


def inverse(term) -> GroupWord:
    return tuple((a, -e) for a, e in reversed(as_word(term)))


def commutator_word(a, b) -> GroupWord:
    """``[a, b] = a^-1 b^-1 a b``."""
    return concat(inverse(a), inverse(b), a, b)


def conjugate_word(g, h) -> GroupWord:
    """``h^-1 g h``."""
    return concat(inverse(h), g, h)


def word_variables(w: GroupWord) -> List[str]:
    seen: List[str] = []
    for a, _ in w:
        if isinstance(a, Var) and a.name not in seen:
            seen.append(a.name)
    return seen


def evaluate_word(w: GroupWord, a: Mapping[str, Element]) -> Element:
    """Substitute ``a`` into ``w`` and multiply left to right."""
    result = IDENTITY
    for atom, e in w:
        if isinstance(atom, Var):
            try:
                g = a[atom.name]
            except KeyError:
                raise UnboundVariable(atom.name) from None
        else:
            g = atom.element
        result = compose(result, g if e == 1 else invert(g))
    return result


class EquationSystem:
    """An ordered list of one-sided equations ``w = 1`` with a variable registry."""

    def __init__(self):
        self.equations: List[GroupWord] = []
        self.variables: List[str] = []
        self.counter = 0
        self.declared: Dict[str, Const] = {}
        self.header: List[str] = []
        self.notes: Dict[int, List[str]] = {}
        self._pending: List[str] = []

    def register(self, name: str) -> Var:
        if name not in self.variables:
            self.variables.append(name)
        return Var(name)

    def fresh_variable(self) -> Var:
        v = self.register(f"_aux{self.counter}")
        self.counter += 1
        return v

    def declare(self, c: Const) -> Const:
        if not is_builtin(c):
            known = self.declared.get(c.name)
            if known is not None and known.element != c.element:
                raise ValueError(f"constant {c.name} redeclared with a different value")
            self.declared.setdefault(c.name, c)
        return c

    def note(self, text: str):
        """Comment emitted just before the next equation."""
        self._pending.append(text)

    def add_equation(self, w) -> None:
        w = as_word(w)
        for atom, e in w:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +1 or -1")
            if isinstance(atom, Var):
                self.register(atom.name)
            else:
                self.declare(atom)
        if self._pending:
            self.notes[len(self.equations)] = self._pending
            self._pending = []
        self.equations.append(w)

    def add_equal(self, lhs, rhs) -> None:
        """Add ``lhs = rhs`` as ``lhs rhs^-1 = 1``."""
        self.add_equation(concat(lhs, inverse(rhs)))

    def add_fragment(self, frag, mode=None) -> None:
        label = frag.label()
        if mode is not None and "mode" not in frag.params:
            label += f" mode={mode}"
        self.note(f"fragment: {label}")
        for w in frag.own:
            self.add_equation(w)
        for child in frag.children:
            self.add_fragment(child, mode)

    def __eq__(self, other):
        if not isinstance(other, EquationSystem):
            return NotImplemented
        return (self.equations == other.equations and self.variables == other.variables
                and self.counter == other.counter)

    def __len__(self):
        return len(self.equations)


def check_system(s: EquationSystem, a: Mapping[str, Element]) -> bool:
    """True iff every equation of ``s`` evaluates to the identity under ``a``."""
    for eq in s.equations:
        for name in word_variables(eq):
            if name not in a:
                raise UnboundVariable(name)
    return all(evaluate_word(eq, a).is_identity() for eq in s.equations)


# ---------------------------------------------------------------- text format

_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_ATOM_RE = re.compile(rf"(\$)?({_NAME})(\^-1)?")
_CONST_RE = re.compile(rf"^\s*const\s+({_NAME})\s*=\s*(.*)$")


def _format_letter(atom: Atom, e: int) -> str:
    return f"{atom}^-1" if e == -1 else str(atom)


def format_equation(w: GroupWord) -> str:
    lhs = " ".join(_format_letter(a, e) for a, e in w) or "1"
    return f"{lhs} = 1"


def serialize_group_system(s: EquationSystem) -> str:
    lines = [f"# {h}" for h in s.header]
    lines.append(f"# vars: {' '.join(s.variables)}".rstrip())
    lines.append(f"# fresh: {s.counter}")
    for name, c in s.declared.items():
        if c.word is None:
            raise ValueError(f"constant {name} has no word form and cannot be serialized")
        lines.append(f"const {name} = {c.word}")
    for i, eq in enumerate(s.equations):
        lines.extend(f"# {n}" for n in s.notes.get(i, ()))
        lines.append(format_equation(eq))
    lines.extend(f"# {n}" for n in s._pending)
    return "\n".join(lines) + "\n"


def _parse_side(text: str, offset: int, lineno: int, scope: Mapping[str, Const]) -> List[Letter]:
    stripped = text.strip()
    if stripped == "1":
        return []
    if not stripped:
        raise ParseError("empty side", lineno, offset + 1)
    letters: List[Letter] = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _ATOM_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected {text[pos]!r}", lineno, offset + pos + 1)
        dollar, name, inv = m.groups()
        if dollar:
            atom: Atom = Var(name)
        elif name in scope:
            atom = scope[name]
        else:
            raise UnknownConstant(f"unknown constant {name!r}", lineno, offset + pos + 1)
        letters.append((atom, -1 if inv else 1))
        pos = m.end()
        if pos < len(text) and not text[pos].isspace():
            raise ParseError(f"unexpected {text[pos]!r}", lineno, offset + pos + 1)
    return letters


def parse_group_system(text: str) -> EquationSystem:
    s = EquationSystem()
    scope: Dict[str, Const] = {name: builtin(name) for name in BUILTIN_WORDS}
    declared_vars: Optional[List[str]] = None
    counter: Optional[int] = None
    in_header = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip():
            continue
        if line.lstrip().startswith("#"):
            body = line.lstrip()[1:].strip()
            if body.startswith("vars:"):
                in_header = False
                declared_vars = body[5:].split()
            elif body.startswith("fresh:"):
                try:
                    counter = int(body[6:])
                except ValueError:
                    raise ParseError("bad fresh counter", lineno, 1) from None
            elif in_header and not body.startswith("fragment:") and not s.equations:
                s.header.append(body)
            else:
                s.note(body)
            continue
        in_header = False
        m = _CONST_RE.match(line)
        if m:
            name, word_text = m.group(1), m.group(2).strip()
            if name in scope:
                raise ParseError(f"constant {name!r} already defined", lineno, m.start(1) + 1)
            try:
                element = word_to_element(parse_word(word_text))
            except ParseError as exc:
                raise ParseError(exc.message, lineno, m.start(2) + exc.column) from None
            c = Const(name, element, word_text)
            scope[name] = c
            s.declare(c)
            continue
        if line.count("=") != 1:
            col = line.find("=", line.find("=") + 1) + 1 if "=" in line else len(line) + 1
            raise ParseError("expected exactly one '='", lineno, max(col, 1))
        split = line.index("=")
        lhs = _parse_side(line[:split], 0, lineno, scope)
        rhs = _parse_side(line[split + 1:], split + 1, lineno, scope)
        s.add_equal(tuple(lhs), tuple(rhs))
    if declared_vars is not None:
        extra = [v for v in s.variables if v not in declared_vars]
        if extra:
            raise ParseError(f"variables {extra} missing from '# vars:' line", 1, 1)
        s.variables = list(declared_vars)
    if counter is not None:
        s.counter = counter
    return s


# ---------------------------------------------------------------- assignments

def element_from_json(obj) -> Element:
    if "word" in obj:
        return word_to_element(obj["word"])
    if "breakpoints" in obj:
        return make_element([tuple(p) for p in obj["breakpoints"]])
    raise ValueError("expected an object with 'word' or 'breakpoints'")


def assignment_to_json(a: Mapping[str, Element], words: Optional[Mapping[str, list]] = None) -> dict:
    out = {}
    for name, g in a.items():
        if words and name in words:
            out[name] = {"word": format_word(words[name])}
        else:
            out[name] = {"breakpoints": breakpoint_strings(g)}
    return out


def assignment_from_json(obj: Mapping) -> Assignment:
    return {name: element_from_json(v) for name, v in obj.items()}


def dump_assignment(a: Mapping[str, Element], words=None) -> str:
    return json.dumps(assignment_to_json(a, words), indent=2) + "\n"
