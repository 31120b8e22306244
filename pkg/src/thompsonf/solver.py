"""Desk-scale enumeration of F and exhaustive search over equation systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .element import IDENTITY, X0, X1, Element, compose, invert
from .equations import Assignment, EquationSystem, check_system, evaluate_word, word_variables
from .errors import ResourceLimit

MAX_ELEMENTS = 10**6
MAX_CHECKS = 10**8

DEFAULT_GENERATORS = (("x0", 1), ("x0", -1), ("x1", 1), ("x1", -1))


def _gen_element(name: str, exp: int) -> Element:
    base = X0 if name == "x0" else X1
    return base if exp == 1 else invert(base)


@dataclass(frozen=True)
class Ball:
    radius: int
    elements: Tuple[Element, ...]
    words: Tuple[Tuple[Tuple[str, int], ...], ...]

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def word_of(self, element: Element):
        return self.words[self.elements.index(element)]

    def index(self) -> Dict[Element, int]:
        return {e: i for i, e in enumerate(self.elements)}


def enumerate_ball(radius: int, generators: Sequence[Tuple[str, int]] = DEFAULT_GENERATORS,
                   max_elements: int = MAX_ELEMENTS) -> Ball:
    """Breadth-first closure of the identity under right multiplication by the generators.

    Each element is kept once, with the first (hence shortest) word reaching it.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    gens = [(name, exp, _gen_element(name, exp)) for name, exp in generators]
    seen = {IDENTITY}
    elements: List[Element] = [IDENTITY]
    words: List[tuple] = [()]
    frontier = [0]
    for _ in range(radius):
        nxt = []
        for idx in frontier:
            g, w = elements[idx], words[idx]
            for name, exp, h in gens:
                if w and w[-1] == (name, -exp):
                    continue
                e = compose(g, h)
                if e in seen:
                    continue
                seen.add(e)
                elements.append(e)
                words.append(w + ((name, exp),))
                nxt.append(len(elements) - 1)
                if len(elements) > max_elements:
                    raise ResourceLimit(f"ball exceeds {max_elements} elements")
        frontier = nxt
    return Ball(radius, tuple(elements), tuple(words))


def brute_force_solve(system: EquationSystem, radius: int, vars: Optional[Iterable[str]] = None,
                      fixed: Optional[Assignment] = None, exhaustive: bool = False,
                      ball: Optional[Ball] = None, max_checks: int = MAX_CHECKS):
    """Search assignments from ``ball(radius)`` for the chosen variables.

    Variables outside ``vars`` take their values from ``fixed``.  Equations
    are tested as soon as all of their variables are bound.  Returns the
    first solution in lexicographic ball order (or None), or the list of all
    solutions when ``exhaustive`` is set.
    """
    if ball is None:
        ball = enumerate_ball(radius)
    fixed = dict(fixed or {})
    names = list(vars) if vars is not None else [v for v in system.variables if v not in fixed]
    bound = set(fixed) - set(names)
    missing = [v for v in system.variables if v not in bound and v not in names]
    if missing:
        raise ValueError(f"variables {missing} are neither searched nor fixed")

    # stage k holds the equations that become decidable once names[:k+1] are bound
    stages: List[list] = [[] for _ in names]
    ready = []
    for eq in system.equations:
        vs = word_variables(eq)
        pending = [names.index(v) for v in vs if v not in bound]
        if pending:
            stages[max(pending)].append(eq)
        else:
            ready.append(eq)
    base = {k: v for k, v in fixed.items() if k in bound}
    for eq in ready:
        if not evaluate_word(eq, base).is_identity():
            return [] if exhaustive else None

    solutions = []
    checks = 0
    current = dict(base)

    def search(k: int) -> bool:
        nonlocal checks
        if k == len(names):
            solutions.append(dict(current))
            return not exhaustive
        for e in ball.elements:
            current[names[k]] = e
            ok = True
            for eq in stages[k]:
                checks += 1
                if checks > max_checks:
                    raise ResourceLimit(f"more than {max_checks} equation checks")
                if not evaluate_word(eq, current).is_identity():
                    ok = False
                    break
            if ok and search(k + 1):
                return True
        del current[names[k]]
        return False

    search(0)
    for sol in solutions:
        if not check_system(system, sol):
            raise RuntimeError("search returned an assignment that fails the system")
    if exhaustive:
        return solutions
    return solutions[0] if solutions else None
