"""Polynomial systems over the non-negative integers and their flattening into atoms.

Input, one equation per line (``#`` starts a comment)::

    X*X + 3 = Y
    2*A*B + C = D

Flattening turns every equation into atoms ``a + b = c`` and ``a * b = c``
whose terms are constants or variables, chaining products and then sums
left to right through temporaries ``_t0, _t1, ...``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import NegativeCoefficient, NotASolution, ParseError

Term = Union[int, str]


@dataclass(frozen=True)
class Monomial:
    coef: int
    vars: Tuple[str, ...]

    def value(self, env: Mapping[str, int]) -> int:
        out = self.coef
        for v in self.vars:
            out *= env[v]
        return out

    def __str__(self):
        parts = ([str(self.coef)] if self.coef != 1 or not self.vars else []) + list(self.vars)
        return "*".join(parts)


Poly = Tuple[Monomial, ...]


@dataclass(frozen=True)
class PolyEquation:
    lhs: Poly
    rhs: Poly

    def holds(self, env: Mapping[str, int]) -> bool:
        return sum(m.value(env) for m in self.lhs) == sum(m.value(env) for m in self.rhs)

    def variables(self) -> List[str]:
        out: List[str] = []
        for m in self.lhs + self.rhs:
            for v in m.vars:
                if v not in out:
                    out.append(v)
        return out

    def __str__(self):
        return f"{' + '.join(map(str, self.lhs))} = {' + '.join(map(str, self.rhs))}"


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(.))")


def _tokens(line: str, lineno: int):
    out = []
    pos = 0
    while pos < len(line):
        m = _TOKEN_RE.match(line, pos)
        if m is None or m.end() == pos:
            break
        nat, var, sym = m.groups()
        col = m.start(m.lastindex) + 1
        if nat is not None:
            out.append(("NAT", int(nat), col))
        elif var is not None:
            out.append(("VAR", var, col))
        elif sym == "-":
            raise NegativeCoefficient("subtraction is not allowed; move terms across '='", lineno, col)
        elif sym in "+*=":
            out.append((sym, sym, col))
        elif sym.isspace():
            pass
        else:
            raise ParseError(f"unexpected character {sym!r}", lineno, col)
        pos = m.end()
    out.append(("END", None, len(line) + 1))
    return out


class _Parser:
    def __init__(self, tokens, lineno):
        self.toks = tokens
        self.i = 0
        self.lineno = lineno

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1] if tok[1] is not None else 'end of line'}",
                             self.lineno, tok[2])
        self.i += 1
        return tok

    def equation(self) -> PolyEquation:
        lhs = self.poly()
        self.take("=")
        rhs = self.poly()
        self.take("END")
        return PolyEquation(lhs, rhs)

    def poly(self) -> Poly:
        monos = [self.mono()]
        while self.peek()[0] == "+":
            self.i += 1
            monos.append(self.mono())
        return tuple(monos)

    def mono(self) -> Monomial:
        kind, val, col = self.peek()
        if kind == "NAT":
            self.i += 1
            if self.peek()[0] != "*":
                return Monomial(val, ())
            self.i += 1
            return Monomial(val, self.factors())
        if kind == "VAR":
            return Monomial(1, self.factors())
        raise ParseError(f"expected a number or variable, found {val if val is not None else 'end of line'}",
                         self.lineno, col)

    def factors(self) -> Tuple[str, ...]:
        names = [self.take("VAR")[1]]
        while self.peek()[0] == "*":
            self.i += 1
            names.append(self.take("VAR")[1])
        return tuple(names)


def parse_poly_system(text: str) -> List[PolyEquation]:
    """Parse polynomial equations with non-negative integer coefficients."""
    eqs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        eqs.append(_Parser(_tokens(line, lineno), lineno).equation())
    return eqs


@dataclass(frozen=True)
class PolyAtom:
    kind: str  # "sum" or "product"
    a: Term
    b: Term
    c: Term

    def __post_init__(self):
        if self.kind not in ("sum", "product"):
            raise ValueError(f"unknown atom kind {self.kind!r}")
        for t in (self.a, self.b, self.c):
            if isinstance(t, int) and t < 0:
                raise ValueError("atom constants must be non-negative")

    def terms(self) -> Tuple[Term, Term, Term]:
        return self.a, self.b, self.c

    def holds(self, env: Mapping[str, int]) -> bool:
        a, b, c = (t if isinstance(t, int) else env[t] for t in self.terms())
        return (a + b if self.kind == "sum" else a * b) == c

    def __str__(self):
        op = "+" if self.kind == "sum" else "*"
        return f"{self.a} {op} {self.b} = {self.c}"


def Sum(a: Term, b: Term, c: Term) -> PolyAtom:
    return PolyAtom("sum", a, b, c)


def Product(a: Term, b: Term, c: Term) -> PolyAtom:
    return PolyAtom("product", a, b, c)


@dataclass
class PolySystem:
    atoms: List[PolyAtom] = field(default_factory=list)
    source_vars: List[str] = field(default_factory=list)
    aux_vars: List[str] = field(default_factory=list)

    @property
    def variables(self) -> List[str]:
        return self.source_vars + self.aux_vars

    def complete(self, values: Mapping[str, int]) -> Dict[str, int]:
        """Extend partial values to every variable by propagating through the atoms.

        Sums determine any one missing term from the other two, products their
        result (or an exactly divisible factor).  Raises NotASolution if a value
        is negative, stays undetermined, or an atom fails.
        """
        env: Dict[str, int] = {}
        for v, x in values.items():
            if v not in self.variables:
                raise NotASolution(f"{v} is not a variable of the system")
            if x < 0:
                raise NotASolution(f"{v} = {x} is negative")
            env[v] = int(x)

        def get(t: Term):
            return t if isinstance(t, int) else env.get(t)

        changed = True
        while changed:
            changed = False
            for atom in self.atoms:
                a, b, c = (get(t) for t in atom.terms())
                known = [x is not None for x in (a, b, c)]
                if all(known) or sum(known) < 2:
                    continue
                if atom.kind == "sum":
                    guess = [c - b if c is not None and b is not None else None,
                             c - a if c is not None and a is not None else None,
                             a + b if a is not None and b is not None else None]
                elif a is not None and b is not None:
                    guess = [None, None, a * b]
                else:
                    f, other = (a, 1) if a is not None else (b, 0)
                    q = c // f if f and c % f == 0 else None
                    guess = [q if other == 0 else None, q if other == 1 else None, None]
                for t, x, g in zip(atom.terms(), (a, b, c), guess):
                    if x is None and g is not None and g >= 0:
                        env[t] = g
                        changed = True
        for v in self.variables:
            if v not in env:
                raise NotASolution(f"no value for {v}")
        for atom in self.atoms:
            if not atom.holds(env):
                raise NotASolution(f"atom {atom} fails")
        return env

    def solves(self, values: Mapping[str, int]) -> bool:
        try:
            self.complete(values)
        except NotASolution:
            return False
        return True


def _bare(m: Monomial) -> Optional[Term]:
    if not m.vars:
        return m.coef
    if m.coef == 1 and len(m.vars) == 1:
        return m.vars[0]
    return None


def normalize(equations: Sequence[PolyEquation]) -> PolySystem:
    """Flatten polynomial equations into sum and product atoms.

    An equation already of the form ``a + b = c`` (or ``c = a + b``) with
    bare terms is kept as one atom.  Otherwise each side is chained into a
    temporary and the two tops are tied by ``top_lhs + 0 = top_rhs``.
    """
    out = PolySystem()
    for eq in equations:
        for v in eq.variables():
            if v not in out.source_vars:
                out.source_vars.append(v)

    def fresh() -> str:
        name = f"_t{len(out.aux_vars)}"
        out.aux_vars.append(name)
        return name

    def mono_term(m: Monomial) -> Term:
        factors: List[Term] = ([m.coef] if m.coef != 1 or not m.vars else []) + list(m.vars)
        acc = factors[0]
        for f in factors[1:]:
            t = fresh()
            out.atoms.append(Product(acc, f, t))
            acc = t
        return acc

    def poly_term(p: Poly) -> Term:
        acc = mono_term(p[0])
        for m in p[1:]:
            nxt = mono_term(m)
            t = fresh()
            out.atoms.append(Sum(acc, nxt, t))
            acc = t
        return acc

    for eq in equations:
        atomic = _atomic_sum(eq.lhs, eq.rhs) or _atomic_sum(eq.rhs, eq.lhs)
        if atomic is not None:
            out.atoms.append(atomic)
            continue
        top_l = poly_term(eq.lhs)
        top_r = poly_term(eq.rhs)
        out.atoms.append(Sum(top_l, 0, top_r))
    return out


def _atomic_sum(two: Poly, one: Poly) -> Optional[PolyAtom]:
    if len(two) != 2 or len(one) != 1:
        return None
    a, b, c = _bare(two[0]), _bare(two[1]), _bare(one[0])
    if a is None or b is None or c is None:
        return None
    return Sum(a, b, c)


def brute_force_solutions(equations: Sequence[PolyEquation], bound: int) -> List[Dict[str, int]]:
    """All assignments with values in ``0..bound`` satisfying every equation."""
    names: List[str] = []
    for eq in equations:
        for v in eq.variables():
            if v not in names:
                names.append(v)
    found = []
    for vals in itertools.product(range(bound + 1), repeat=len(names)):
        env = dict(zip(names, vals))
        if all(eq.holds(env) for eq in equations):
            found.append(env)
    return found
