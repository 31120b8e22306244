import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thompsonf.definable import (
    LPP_WORD,
    SET_IDS,
    Mode,
    define_commutator_subgroup,
    define_cyclic_x0,
    define_cyclic_x1,
    define_expsum_equal,
    define_expsum_mixed_nonneg,
    define_expsum_zero,
    define_monoid_power,
    define_monoid_x1,
    define_pair_S,
    depth_at_one,
    depth_at_zero,
    extend_witness,
    fragment_holds,
    lpp,
    membership_oracle,
)
from thompsonf.element import (
    IDENTITY,
    X0,
    X1,
    abelianise,
    commutator,
    commutes,
    compose,
    constants,
    invert,
    power,
    rescale_into,
    support,
    word_to_element,
)
from thompsonf.equations import EquationSystem, Var, check_system
from thompsonf.errors import DecompositionNotFound, NotASolution, UnknownSet
from thompsonf.reduction import search_oracle

from oracles import letter_counts

letters = st.tuples(st.sampled_from(["x0", "x1"]), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=10)


def satisfied(build, values, mode=Mode.GERM, oracle=None):
    """Build a fragment over fresh designated variables, fill a canonical witness, check it."""
    s = EquationSystem()
    names = [Var(f"V{i}") for i in range(len(values))]
    for v in names:
        s.register(v.name)
    frag = build(s, *names)
    s.add_fragment(frag)
    a = {v.name: g for v, g in zip(names, values)}
    try:
        extend_witness(frag, a, oracle)
    except (NotASolution, DecompositionNotFound):
        return False
    return check_system(s, a)


def test_lpp_word():
    assert word_to_element(LPP_WORD) == rescale_into(constants()["l"], "1/2", 1)
    assert lpp().element == word_to_element(LPP_WORD)


# ---------------------------------------------------------------- quantifier-free sets

def test_cyclic_x0_examples():
    f = define_cyclic_x0("X")
    assert fragment_holds(f, [power(X0, 5)])
    assert fragment_holds(f, [IDENTITY])
    assert not fragment_holds(f, [X1])


def test_cyclic_x1_examples():
    f = define_cyclic_x1("X")
    assert fragment_holds(f, [power(X1, -2)])
    assert fragment_holds(f, [IDENTITY])
    assert not fragment_holds(f, [X0])


def test_monoid_power_examples():
    f = define_monoid_power("X", 0)
    assert fragment_holds(f, [power(X0, 3)])
    assert fragment_holds(f, [IDENTITY])
    assert not fragment_holds(f, [power(X0, -1)])
    with pytest.raises(ValueError):
        define_monoid_power("X", -1)


def test_monoid_x1_examples():
    f = define_monoid_x1("X")
    assert fragment_holds(f, [power(X1, 4)])
    assert fragment_holds(f, [IDENTITY])
    assert not fragment_holds(f, [power(X1, -1)])


def test_pair_S_examples():
    f = define_pair_S("R", "S")
    assert fragment_holds(f, [power(X1, 2), power(compose(X0, power(X1, 2)), 3)])
    assert fragment_holds(f, [IDENTITY, IDENTITY])
    assert not fragment_holds(f, [X0, IDENTITY])


@pytest.mark.parametrize("k", range(4))
@pytest.mark.parametrize("n", range(-6, 7))
def test_sign_gadget(k, n):
    h = power(compose(X0, power(X1, k)), n)
    sign_test = commutes(compose(compose(invert(h), X1), h), constants()["l"])
    assert sign_test == (n >= 0)


@settings(max_examples=200, deadline=None)
@given(words)
def test_quantifier_free_fragments_match_oracle(w):
    g = word_to_element(w)
    assert fragment_holds(define_cyclic_x0("X"), [g]) == membership_oracle("cyclic_x0", [g])
    assert fragment_holds(define_cyclic_x1("X"), [g]) == membership_oracle("cyclic_x1", [g])
    assert fragment_holds(define_monoid_x1("X"), [g]) == membership_oracle("mon_x1", [g])
    for k in range(3):
        assert fragment_holds(define_monoid_power("X", k), [g]) == membership_oracle("mon_x0x1k", [g], k)


def test_fragment_holds_refuses_auxiliaries():
    f = define_expsum_zero("X", "x1", Mode.GERM, EquationSystem())
    with pytest.raises(ValueError):
        fragment_holds(f, [IDENTITY])


# ---------------------------------------------------------------- sets with auxiliaries

@pytest.mark.parametrize("mode", list(Mode))
def test_commutator_subgroup_examples(mode):
    build = lambda s, c: define_commutator_subgroup(c, mode, s)
    oracle = search_oracle(2)
    assert satisfied(build, [word_to_element("x0 x1 x0^-1 x1^-1")], mode, oracle)
    assert satisfied(build, [IDENTITY], mode, oracle)
    assert not satisfied(build, [X0], mode, oracle)


def test_commutator_subgroup_paper_shape():
    s = EquationSystem()
    frag = define_commutator_subgroup("C", Mode.PAPER, s)
    assert len(frag.auxiliary) == 4 and len(frag.equations) == 1
    a = {"C": commutator(X0, X1)}
    extend_witness(frag, a, lambda y: (X0, X1, IDENTITY, IDENTITY))
    assert all(a[v.name] is not None for v in frag.auxiliary)


def test_paper_mode_oracle_miss_is_reported():
    frag = define_commutator_subgroup("C", Mode.PAPER, EquationSystem())
    with pytest.raises(DecompositionNotFound):
        extend_witness(frag, {"C": commutator(X0, X1)}, lambda y: None)
    with pytest.raises(DecompositionNotFound):
        extend_witness(frag, {"C": commutator(X0, X1)}, lambda y: (X0, X0, X1, X1))


@pytest.mark.parametrize("mode", list(Mode))
def test_expsum_zero_examples(mode):
    build = lambda s, x: define_expsum_zero(x, "x0", mode, s)
    assert satisfied(build, [power(X1, 7)], mode, search_oracle(2))
    assert satisfied(build, [IDENTITY], mode, search_oracle(2))
    assert not satisfied(build, [X0], mode, search_oracle(2))


def test_expsum_equal_examples():
    c = commutator(X1, power(X0, 2))
    build = lambda s, x, y: define_expsum_equal(x, y, "x0", Mode.GERM, s)
    assert satisfied(build, [compose(power(X0, 2), c), power(X0, 2)])
    g = word_to_element("x1 x0^-3 x1")
    assert satisfied(build, [g, g])
    assert not satisfied(build, [X0, X1])


def test_mixed_nonneg_examples():
    build = lambda s, x, y: define_expsum_mixed_nonneg(x, y, Mode.GERM, s)
    s = EquationSystem()
    frag = build(s, Var("X"), Var("Y"))
    a = extend_witness(frag, {"X": power(X0, 3), "Y": power(X1, 3)})
    assert a[frag.roles["Z'"].name] == power(compose(X0, X1), 3)
    assert satisfied(build, [power(X0, 3), power(X1, 3)])
    assert satisfied(build, [IDENTITY, IDENTITY])
    assert not satisfied(build, [power(X0, -1), power(X1, -1)])
    assert not satisfied(build, [compose(invert(X0), X1), IDENTITY])


def test_germ_depths():
    assert depth_at_zero(IDENTITY) == 0
    assert depth_at_zero(X1) == 0
    assert depth_at_zero(constants()["x1p"]) == 1
    assert depth_at_one(constants()["x1p"]) == 0
    assert depth_at_one(rescale_into(X1, "1/2", "3/4")) == 1
    with pytest.raises(NotASolution):
        depth_at_zero(X0)
    with pytest.raises(NotASolution):
        depth_at_one(X1)


@settings(max_examples=100, deadline=None)
@given(words, st.sampled_from(["x0", "x1"]))
def test_germ_expsum_zero_matches_abelianise(w, which):
    g = word_to_element(w)
    build = lambda s, x: define_expsum_zero(x, which, Mode.GERM, s)
    idx = 0 if which == "x0" else 1
    assert satisfied(build, [g]) == (letter_counts(w)[idx] == 0)


@settings(max_examples=100, deadline=None)
@given(words, words)
def test_paper_mode_soundness(a, b):
    # anything of the form [Y1, Y2][Y3, Y4] lies in [F, F]
    f, g = word_to_element(a), word_to_element(b)
    assert abelianise(compose(commutator(f, g), commutator(g, X1))) == (0, 0)


@settings(max_examples=50, deadline=None)
@given(words, words)
def test_germ_commutator_witness_on_commutators(a, b):
    c = commutator(word_to_element(a), word_to_element(b))
    build = lambda s, x: define_commutator_subgroup(x, Mode.GERM, s)
    assert satisfied(build, [c])


def test_germ_conjugates_generate_copy_near_zero():
    # the conjugated pair acts on (0, (1/2) H) and nowhere else
    for m in range(4):
        h = power(X0, -m)
        for name in ("x0p", "x1p"):
            conj = compose(compose(invert(h), constants()[name]), h)
            assert support(conj).sup <= support(constants()["x0p"]).sup / 2 ** m


# ---------------------------------------------------------------- oracle

def test_membership_oracle_examples():
    assert membership_oracle("cyclic_x0", [power(X0, -3)])
    assert not membership_oracle("mon_x0", [power(X0, -3)])
    assert membership_oracle("pair_S", [power(X1, 2), power(compose(X0, power(X1, 2)), 3)])
    assert not membership_oracle("pair_S", [power(X1, 2), power(compose(X0, X1), 3)])
    with pytest.raises(UnknownSet):
        membership_oracle("no_such_set", [X0])


def test_every_set_id_is_decided():
    rng = random.Random(3)
    for set_id in SET_IDS:
        arity = 2 if set_id in ("pair_S", "expsum_eq_x0", "expsum_eq_x1", "mixed_nonneg") else 1
        elems = [power(rng.choice([X0, X1]), rng.randint(-2, 2)) for _ in range(arity)]
        assert membership_oracle(set_id, elems, k=1) in (True, False)


def test_fragments_have_disjoint_auxiliaries():
    s = EquationSystem()
    f1 = define_expsum_mixed_nonneg("A", "B", Mode.GERM, s)
    f2 = define_expsum_mixed_nonneg("A", "B", Mode.GERM, s)
    assert not set(f1.auxiliary) & set(f2.auxiliary)
    assert len(set(f1.auxiliary)) == len(f1.auxiliary)
