"""Equation fragments for the equationally definable subsets of F used by the reduction.

Each builder returns a :class:`Fragment`: the equations, the variables it
constrains (``designated``) and the fresh variables it introduces
(``auxiliary``).  Builders that need fresh variables draw them from the
owning :class:`EquationSystem`, so fragments never share auxiliaries.

Two constructions of the commutator subgroup are available:

``paper``
    ``C = [Y1, Y2][Y3, Y4]``, relying on commutator width two.
``germ``
    ``C`` commutes with the conjugates ``H1^-1 x0' H1``, ``H1^-1 x1' H1``,
    ``H2^-1 x1 H2`` and ``H2^-1 x1'' H2``.  The first pair generates the copy
    of F on ``(0, (1/2)H1)``, the second the copy on ``((1/2)H2, 1)``, so the
    equations force ``C`` to be trivial near both endpoints, which is exactly
    membership in ``[F, F]``.  Witnesses are powers of x0.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .dyadic import Dyadic
from .element import (
    IDENTITY,
    X0,
    X1,
    Element,
    abelianise,
    commutator,
    compose,
    constants,
    invert,
    power,
    rescale_into,
    support,
)
from .equations import (
    Assignment,
    Const,
    EquationSystem,
    GroupWord,
    Var,
    as_word,
    builtin,
    commutator_word,
    concat,
    conjugate_word,
    evaluate_word,
    inverse,
    word_variables,
)
from .errors import DecompositionNotFound, NotASolution, UnknownSet

CommutatorOracle = Callable[[Element], Optional[Tuple[Element, Element, Element, Element]]]


class Mode(str, enum.Enum):
    PAPER = "paper"
    GERM = "germ"

    def __str__(self):
        return self.value


# word over x0, x1 for x0' rescaled into (1/2, 1); checked in the tests
LPP_WORD = "x1 x1 x0^-1 x1^-1 x0 x1^-1"


@lru_cache(maxsize=None)
def lpp() -> Const:
    """The image of ``l`` under the rescaling of F onto (1/2, 1)."""
    return Const("lpp", rescale_into(constants()["l"], Dyadic(1, 1), 1), LPP_WORD)


@lru_cache(maxsize=None)
def x0_times_x1_power(k: int) -> Const:
    """The constant ``x0 x1^k`` (k >= 1)."""
    word = "x0 x1" if k == 1 else f"x0 x1^{k}"
    return Const(f"x0x1pow{k}", compose(X0, power(X1, k)), word)


@lru_cache(maxsize=None)
def x0_power(n: int) -> GroupWord:
    """A word for ``x0^n``, n >= 0: empty, the generator, or a declared constant."""
    if n == 0:
        return ()
    if n == 1:
        return as_word(builtin("x0"))
    return as_word(Const(f"x0pow{n}", power(X0, n), f"x0^{n}"))


@dataclass
class Fragment:
    kind: str
    args: Tuple[GroupWord, ...]
    own: List[GroupWord]
    roles: Dict[str, Var] = field(default_factory=dict)
    children: List["Fragment"] = field(default_factory=list)
    params: Dict[str, object] = field(default_factory=dict)

    @property
    def equations(self) -> List[GroupWord]:
        out = list(self.own)
        for c in self.children:
            out.extend(c.equations)
        return out

    @property
    def designated(self) -> Tuple[Var, ...]:
        names: List[str] = []
        for a in self.args:
            for v in word_variables(a):
                if v not in names:
                    names.append(v)
        return tuple(Var(n) for n in names)

    @property
    def auxiliary(self) -> Tuple[Var, ...]:
        out = list(self.roles.values())
        for c in self.children:
            out.extend(v for v in c.auxiliary if v not in out)
        designated = set(self.designated)
        return tuple(v for v in out if v not in designated)

    def label(self) -> str:
        extra = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.kind} {extra}".strip()

    def system(self) -> EquationSystem:
        """A standalone system holding just this fragment."""
        s = EquationSystem()
        for v in self.designated:
            s.register(v.name)
        s.add_fragment(self)
        return s


def _c(name: str) -> Const:
    return builtin(name)


def define_cyclic_x0(X) -> Fragment:
    """``<x0>``: the centraliser of x0."""
    X = as_word(X)
    return Fragment("cyclic_x0", (X,), [commutator_word(X, _c("x0"))])


def define_cyclic_x1(X) -> Fragment:
    """``<x1>``: commute with x1 and with the copy of F on (0, 1/2)."""
    X = as_word(X)
    eqs = [commutator_word(X, _c(n)) for n in ("x1", "x0p", "x1p")]
    return Fragment("cyclic_x1", (X,), eqs)


def define_monoid_power(X, k: int) -> Fragment:
    """``Mon<x0 x1^k>``: centralise ``x0 x1^k`` and pass the sign test against ``l``."""
    if k < 0:
        raise ValueError("k must be non-negative")
    X = as_word(X)
    gen = _c("x0") if k == 0 else x0_times_x1_power(k)
    eqs = [
        commutator_word(X, gen),
        commutator_word(conjugate_word(_c("x1"), X), _c("l")),
    ]
    return Fragment("monoid_power", (X,), eqs, params={"k": k})


def define_monoid_x1(X) -> Fragment:
    """``Mon<x1>``: the ``<x1>`` equations plus the sign test moved into (1/2, 1)."""
    X = as_word(X)
    eqs = [commutator_word(X, _c(n)) for n in ("x1", "x0p", "x1p")]
    eqs.append(commutator_word(conjugate_word(_c("x1pp"), X), lpp()))
    return Fragment("monoid_x1", (X,), eqs)


def define_pair_S(R, S) -> Fragment:
    """Pairs ``(r, s)`` with ``r`` in ``Mon<x1>`` and ``s`` in ``Mon<x0 r>``."""
    R, S = as_word(R), as_word(S)
    x0r = concat(_c("x0"), R)
    eqs = [
        commutator_word(S, x0r),
        commutator_word(conjugate_word(_c("x1"), S), _c("l")),
    ]
    return Fragment("pair_S", (R, S), eqs, children=[define_monoid_x1(R)])


def define_commutator_subgroup(C, mode: Mode, system: EquationSystem) -> Fragment:
    C = as_word(C)
    mode = Mode(mode)
    if mode is Mode.PAPER:
        ys = [system.fresh_variable() for _ in range(4)]
        rhs = concat(commutator_word(ys[0], ys[1]), commutator_word(ys[2], ys[3]))
        roles = {f"Y{i + 1}": y for i, y in enumerate(ys)}
        return Fragment("commutator_subgroup", (C,), [concat(C, inverse(rhs))], roles,
                        params={"mode": mode})
    h1, h2 = system.fresh_variable(), system.fresh_variable()
    eqs = [
        commutator_word(C, conjugate_word(_c("x0p"), h1)),
        commutator_word(C, conjugate_word(_c("x1p"), h1)),
        commutator_word(C, conjugate_word(_c("x1"), h2)),
        commutator_word(C, conjugate_word(_c("x1pp"), h2)),
    ]
    return Fragment("commutator_subgroup", (C,), eqs, {"H1": h1, "H2": h2}, params={"mode": mode})


def define_expsum_zero(X, which: str, mode: Mode, system: EquationSystem) -> Fragment:
    """``{g : expsum_which(g) = 0}``."""
    X = as_word(X)
    mode = Mode(mode)
    params = {"which": which, "mode": mode}
    if which == "x0" and mode is Mode.GERM:
        h = system.fresh_variable()
        eqs = [
            commutator_word(X, conjugate_word(_c("x0p"), h)),
            commutator_word(X, conjugate_word(_c("x1p"), h)),
        ]
        return Fragment("expsum_zero", (X,), eqs, {"H": h}, params=params)
    if which not in ("x0", "x1"):
        raise ValueError(f"which must be 'x0' or 'x1', not {which!r}")
    c, z = system.fresh_variable(), system.fresh_variable()
    eq = concat(X, inverse(concat(c, z)))
    cyclic = define_cyclic_x1(z) if which == "x0" else define_cyclic_x0(z)
    children = [define_commutator_subgroup(c, mode, system), cyclic]
    return Fragment("expsum_zero", (X,), [eq], {"C": c, "Z": z}, children, params)


def define_expsum_equal(X, Y, which: str, mode: Mode, system: EquationSystem) -> Fragment:
    """``{(g, h) : expsum_which(g) = expsum_which(h)}`` via ``W = X Y^-1``."""
    X, Y = as_word(X), as_word(Y)
    w = system.fresh_variable()
    eq = concat(w, Y, inverse(X))
    child = define_expsum_zero(w, which, mode, system)
    return Fragment("expsum_equal", (X, Y), [eq], {"W": w}, [child],
                    params={"which": which, "mode": Mode(mode)})


def define_expsum_mixed_nonneg(X, Y, mode: Mode, system: EquationSystem) -> Fragment:
    """``{(g, h) : expsum_x0(g) = expsum_x1(h) >= 0}`` through some ``Z'`` in ``Mon<x0 x1>``."""
    X, Y = as_word(X), as_word(Y)
    z = system.fresh_variable()
    children = [
        define_monoid_power(z, 1),
        define_expsum_equal(X, z, "x0", mode, system),
        define_expsum_equal(Y, z, "x1", mode, system),
    ]
    return Fragment("mixed_nonneg", (X, Y), [], {"Z'": z}, children, params={"mode": Mode(mode)})


# ---------------------------------------------------------------- witnesses

def depth_at_zero(g: Element) -> int:
    """Least ``m >= 0`` with ``(1/2) x0^-m = 2^-(m+1)`` at or below every moved point."""
    supp = support(g)
    if not supp:
        return 0
    inf = supp.inf
    if inf == 0:
        raise NotASolution("element has a non-trivial germ at 0")
    m = 0
    while Fraction(1, 2 ** (m + 1)) > inf:
        m += 1
    return m


def depth_at_one(g: Element) -> int:
    """Least ``m >= 0`` with ``(1/2) x0^m = 1 - 2^-(m+1)`` at or above every moved point."""
    supp = support(g)
    if not supp:
        return 0
    sup = supp.sup
    if sup == 1:
        raise NotASolution("element has a non-trivial germ at 1")
    m = 0
    while 1 - Fraction(1, 2 ** (m + 1)) < sup:
        m += 1
    return m


def extend_witness(frag: Fragment, a: Assignment, oracle: Optional[CommutatorOracle] = None) -> Assignment:
    """Fill in the auxiliary variables of ``frag`` given values for its designated ones.

    ``a`` is updated in place and returned.  The values are the canonical
    ones (powers of the generators, minimal conjugators); membership is not
    checked here, callers verify the resulting assignment.
    """
    kind, roles = frag.kind, frag.roles
    if kind == "commutator_subgroup":
        c = evaluate_word(frag.args[0], a)
        if frag.params["mode"] is Mode.GERM:
            a[roles["H1"].name] = power(X0, -depth_at_zero(c))
            a[roles["H2"].name] = power(X0, depth_at_one(c))
        else:
            if abelianise(c) != (0, 0):
                raise NotASolution("element is not in the commutator subgroup")
            found = oracle(c) if oracle is not None else None
            if found is None:
                raise DecompositionNotFound("no two-commutator decomposition found")
            y1, y2, y3, y4 = found
            if compose(commutator(y1, y2), commutator(y3, y4)) != c:
                raise DecompositionNotFound("oracle returned a tuple that does not multiply to C")
            for i, y in enumerate(found):
                a[roles[f"Y{i + 1}"].name] = y
    elif kind == "expsum_zero":
        g = evaluate_word(frag.args[0], a)
        if "H" in roles:
            a[roles["H"].name] = power(X0, -depth_at_zero(g))
        else:
            e0, e1 = abelianise(g)
            z = power(X1, e1) if frag.params["which"] == "x0" else power(X0, e0)
            a[roles["Z"].name] = z
            a[roles["C"].name] = compose(g, invert(z))
    elif kind == "expsum_equal":
        g, h = (evaluate_word(w, a) for w in frag.args)
        a[roles["W"].name] = compose(g, invert(h))
    elif kind == "mixed_nonneg":
        n = abelianise(evaluate_word(frag.args[0], a))[0]
        a[roles["Z'"].name] = power(compose(X0, X1), n)
    for child in frag.children:
        extend_witness(child, a, oracle)
    return a


# ---------------------------------------------------------------- oracles

def _is_power(g: Element, base: Element, n: int) -> bool:
    return power(base, n) == g


def _single(set_id, elems):
    if len(elems) != 1:
        raise ValueError(f"{set_id} takes one element")
    return elems[0]


def _pair(set_id, elems):
    if len(elems) != 2:
        raise ValueError(f"{set_id} takes two elements")
    return elems


def membership_oracle(set_id: str, elems: Sequence[Element], k: Optional[int] = None) -> bool:
    """Decide membership directly from exponent sums and exact comparison.

    Powers of a generator are recognised by reading the exponent off the
    abelianisation and comparing with the actual power.
    """
    if isinstance(elems, Element):
        elems = (elems,)
    if set_id == "cyclic_x0":
        g = _single(set_id, elems)
        return _is_power(g, X0, abelianise(g)[0])
    if set_id == "cyclic_x1":
        g = _single(set_id, elems)
        return _is_power(g, X1, abelianise(g)[1])
    if set_id == "mon_x0":
        g = _single(set_id, elems)
        n = abelianise(g)[0]
        return n >= 0 and _is_power(g, X0, n)
    if set_id == "mon_x1":
        g = _single(set_id, elems)
        n = abelianise(g)[1]
        return n >= 0 and _is_power(g, X1, n)
    if set_id == "mon_x0x1k":
        if k is None or k < 0:
            raise ValueError("mon_x0x1k needs k >= 0")
        g = _single(set_id, elems)
        n = abelianise(g)[0]
        return n >= 0 and _is_power(g, compose(X0, power(X1, k)), n)
    if set_id == "pair_S":
        r, s = _pair(set_id, elems)
        p = abelianise(r)[1]
        if p < 0 or not _is_power(r, X1, p):
            return False
        q = abelianise(s)[0]
        return q >= 0 and _is_power(s, compose(X0, power(X1, p)), q)
    if set_id == "comm_subgroup":
        return abelianise(_single(set_id, elems)) == (0, 0)
    if set_id == "expsum0_x0":
        return abelianise(_single(set_id, elems))[0] == 0
    if set_id == "expsum0_x1":
        return abelianise(_single(set_id, elems))[1] == 0
    if set_id == "expsum_eq_x0":
        g, h = _pair(set_id, elems)
        return abelianise(g)[0] == abelianise(h)[0]
    if set_id == "expsum_eq_x1":
        g, h = _pair(set_id, elems)
        return abelianise(g)[1] == abelianise(h)[1]
    if set_id == "mixed_nonneg":
        g, h = _pair(set_id, elems)
        n = abelianise(g)[0]
        return n >= 0 and n == abelianise(h)[1]
    raise UnknownSet(set_id)


SET_IDS = (
    "cyclic_x0", "cyclic_x1", "mon_x0", "mon_x1", "mon_x0x1k", "pair_S", "comm_subgroup",
    "expsum0_x0", "expsum0_x1", "expsum_eq_x0", "expsum_eq_x1", "mixed_nonneg",
)


def fragment_holds(frag: Fragment, values: Sequence[Element]) -> bool:
    """Check a fragment with no auxiliary variables at the given designated values."""
    if frag.auxiliary:
        raise ValueError("fragment has auxiliary variables; extend a witness first")
    a = {v.name: g for v, g in zip(frag.designated, values)}
    return all(evaluate_word(w, a).is_identity() for w in frag.equations)
