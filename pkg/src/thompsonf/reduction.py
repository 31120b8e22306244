"""Compile polynomial systems over the non-negative integers into equations over F.

The integer ``n`` is represented by ``x0^n``.  Every variable is confined to
``Mon<x0>``; ``a + b = c`` becomes ``E(a) E(b) E(c)^-1 = 1``; ``a * b = c``
introduces a pair ``(R, S)`` with ``R = x1^p`` and ``S = (x0 x1^p)^q`` and ties
``p``, ``q`` and ``pq`` to the three terms through exponent-sum constraints.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import __version__
from .definable import (
    CommutatorOracle,
    Fragment,
    Mode,
    define_expsum_equal,
    define_expsum_mixed_nonneg,
    define_monoid_power,
    define_pair_S,
    extend_witness,
    membership_oracle,
    x0_power,
)
from .element import IDENTITY, X0, X1, Element, abelianise, commutator, compose, invert, power
from .equations import (
    Assignment,
    EquationSystem,
    GroupWord,
    Var,
    as_word,
    check_system,
    concat,
    element_from_json,
    inverse,
)
from .errors import NotInCommutatorSubgroup, NotInImage, UnboundVariable
from .polynomial import PolyAtom, PolySystem, Term


@dataclass
class ProductRecord:
    atom: int
    R: str
    S: str


@dataclass
class VarMap:
    mode: Mode
    source_vars: Dict[str, str]
    atoms: List[str]
    aux_roles: Dict[str, str]
    products: List[ProductRecord] = field(default_factory=list)
    fragments: List[Fragment] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "mode": str(self.mode),
            "tool": f"thompsonf {__version__}",
            "source_vars": self.source_vars,
            "atoms": self.atoms,
            "aux_roles": self.aux_roles,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, obj: Mapping) -> "VarMap":
        return cls(Mode(obj.get("mode", "germ")), dict(obj["source_vars"]), list(obj.get("atoms", [])),
                   dict(obj.get("aux_roles", {})))


def _term_word(t: Term) -> GroupWord:
    return x0_power(t) if isinstance(t, int) else as_word(Var(t))


def _record_roles(frag: Fragment, where: str, roles: Dict[str, str]):
    for role, v in frag.roles.items():
        roles[v.name] = f"{role} of {frag.label()} ({where})"
    for child in frag.children:
        _record_roles(child, where, roles)


def encode(P: PolySystem, mode: Mode = Mode.GERM) -> Tuple[EquationSystem, VarMap]:
    """Deterministically lower ``P`` to a group-equation system plus the variable map."""
    mode = Mode(mode)
    s = EquationSystem()
    s.header = [
        "thompsonf group system",
        f"mode: {mode}",
        f"tool: thompsonf {__version__}",
        f"atoms: {len(P.atoms)}",
    ]
    vm = VarMap(mode, {v: v for v in P.source_vars}, [str(a) for a in P.atoms], {})
    for v in P.variables:
        s.register(v)
    for v in P.aux_vars:
        vm.aux_roles[v] = "flattening temporary"
    for v in P.variables:
        frag = define_monoid_power(Var(v), 0)
        vm.fragments.append(frag)
        s.add_fragment(frag, mode)
    for i, atom in enumerate(P.atoms):
        a, b, c = (_term_word(t) for t in atom.terms())
        if atom.kind == "sum":
            s.note(f"atom {i}: {atom}")
            s.add_equation(concat(a, b, inverse(c)))
            continue
        r, sv = s.fresh_variable(), s.fresh_variable()
        vm.products.append(ProductRecord(i, r.name, sv.name))
        vm.aux_roles[r.name] = f"R of atom {i}"
        vm.aux_roles[sv.name] = f"S of atom {i}"
        s.note(f"atom {i}: {atom}")
        frags = [
            define_pair_S(r, sv),
            define_expsum_mixed_nonneg(a, r, mode, s),
            define_expsum_equal(b, sv, "x0", mode, s),
            define_expsum_mixed_nonneg(c, sv, mode, s),
        ]
        for frag in frags:
            _record_roles(frag, f"atom {i}", vm.aux_roles)
            vm.fragments.append(frag)
            s.add_fragment(frag, mode)
    return s, vm


DEFAULT_SEARCH_RADIUS = 3


@lru_cache(maxsize=4)
def _commutator_table(radius: int) -> Dict[Element, Tuple[Element, Element]]:
    from .solver import enumerate_ball

    return _tabulate(enumerate_ball(radius))


def _tabulate(ball) -> Dict[Element, Tuple[Element, Element]]:
    table: Dict[Element, Tuple[Element, Element]] = {}
    for p in ball.elements:
        for q in ball.elements:
            table.setdefault(commutator(p, q), (p, q))
    return table


def decompose_commutators(y: Element, search_radius: int = DEFAULT_SEARCH_RADIUS, ball=None):
    """Find ``(a1, a2, a3, a4)`` in a ball with ``[a1, a2][a3, a4] = y``, or None.

    Meet in the middle: tabulate ``[a, b]`` over the ball once, then look up
    ``y [a3, a4]^-1`` for each tabulated ``[a3, a4]``.
    """
    if abelianise(y) != (0, 0):
        raise NotInCommutatorSubgroup("element has non-zero exponent sums")
    if y.is_identity():
        return IDENTITY, IDENTITY, IDENTITY, IDENTITY
    table = _tabulate(ball) if ball is not None else _commutator_table(search_radius)
    if y in table:
        return table[y] + (IDENTITY, IDENTITY)
    for c2, (a3, a4) in table.items():
        first = table.get(compose(y, invert(c2)))
        if first is not None:
            found = first + (a3, a4)
            if compose(commutator(*found[:2]), commutator(*found[2:])) == y:
                return found
    return None


def search_oracle(radius: int = DEFAULT_SEARCH_RADIUS) -> CommutatorOracle:
    return lambda y: decompose_commutators(y, radius)


def file_oracle(entries: Sequence[Mapping], fallback: Optional[CommutatorOracle] = None) -> CommutatorOracle:
    """Oracle serving user-supplied decompositions ``{"element": ..., "tuple": [4 elements]}``.

    Entries are verified on load; unknown elements go to ``fallback``.
    """
    known: Dict[Element, tuple] = {}
    for entry in entries:
        y = element_from_json(entry["element"])
        tup = tuple(element_from_json(t) for t in entry["tuple"])
        if len(tup) != 4 or compose(commutator(tup[0], tup[1]), commutator(tup[2], tup[3])) != y:
            raise ValueError("supplied decomposition does not multiply to its element")
        known[y] = tup

    def oracle(y: Element):
        if y in known:
            return known[y]
        return fallback(y) if fallback is not None else None

    return oracle


def witness(P: PolySystem, n: Mapping[str, int], mode: Mode = Mode.GERM,
            oracle: Optional[CommutatorOracle] = None) -> Assignment:
    """Build a verified solution of ``encode(P, mode)`` from an integer solution ``n``.

    Raises NotASolution if ``n`` does not solve ``P`` and, in paper mode,
    DecompositionNotFound if the commutator oracle misses.
    """
    mode = Mode(mode)
    values = P.complete(n)
    s, vm = encode(P, mode)
    if mode is Mode.PAPER and oracle is None:
        oracle = search_oracle()
    a: Assignment = {v: power(X0, values[v]) for v in P.variables}

    def val(t: Term) -> int:
        return t if isinstance(t, int) else values[t]

    for rec in vm.products:
        atom = P.atoms[rec.atom]
        k, l = val(atom.a), val(atom.b)
        a[rec.R] = power(X1, k)
        a[rec.S] = power(compose(X0, power(X1, k)), l)
    for frag in vm.fragments:
        extend_witness(frag, a, oracle)
    if not check_system(s, a):
        raise RuntimeError("constructed witness failed verification")
    return a


def decode(a: Mapping[str, Element], m: VarMap) -> Dict[str, int]:
    """Read integers back from ``Mon<x0>``: ``x0^n`` decodes to ``n``."""
    out = {}
    for poly_var, group_var in m.source_vars.items():
        if group_var not in a:
            raise UnboundVariable(group_var)
        g = a[group_var]
        if not membership_oracle("mon_x0", (g,)):
            raise NotInImage(f"value of {group_var} is not a non-negative power of x0")
        out[poly_var] = abelianise(g)[0]
    return out
