import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hylotab.formulas import (
    A,
    And,
    At,
    Box,
    Diamond,
    Down,
    E,
    Neg,
    Nom,
    Or,
    Prop,
    Var,
    fwd,
    nnf,
)
from hylotab.parser import Problem, parse_formula, print_formula
from hylotab.preprocess import (
    FragmentError,
    FreshNames,
    expand_graded_box,
    expand_graded_diamond,
    expand_grades,
    preprocess,
    tau,
)
from hylotab.semantics import Interpretation, evaluate

r = fwd("r")
p = Prop("p")


def test_graded_diamond_shapes():
    assert expand_graded_diamond(r, 0, p) == Diamond(r, p)
    got = expand_graded_diamond(r, 1, p, FreshNames())
    want = Down(
        "_v1",
        Diamond(
            r,
            And(p, Down("_v2", At(Var("_v1"), Diamond(r, And(p, Neg(Var("_v2"))))))),
        ),
    )
    assert got == want


def test_graded_diamond_n2():
    got = expand_graded_diamond(r, 2, p, FreshNames())
    x, y1, y2 = Var("_v1"), Var("_v2"), Var("_v3")
    inner2 = Down("_v3", At(x, Diamond(r, And(And(p, Neg(y1)), Neg(y2)))))
    inner1 = Down("_v2", At(x, Diamond(r, And(And(p, Neg(y1)), inner2))))
    want = Down("_v1", Diamond(r, And(p, inner1)))
    assert got == want


def test_graded_box_shapes():
    assert expand_graded_box(r, 0, p) == Box(r, p)
    got = expand_graded_box(r, 1, p, FreshNames())
    want = Or(
        Box(r, p),
        Down("_v1", Diamond(r, Down("_v2", At(Var("_v1"), Box(r, Or(p, Var("_v2"))))))),
    )
    assert got == want


def test_graded_box_n2():
    got = expand_graded_box(r, 2, p, FreshNames())
    x = Var("_v1")
    final = Box(r, Or(Or(p, Var("_v2")), Var("_v3")))
    body = Diamond(r, Down("_v2", At(x, Diamond(r, Down("_v3", At(x, final))))))
    want = Or(Box(r, p), Down("_v1", body))
    assert got == want


def all_models(k, rel_syms=("r",), props=("p",), noms=()):
    states = list(range(k))
    pairs = list(itertools.product(states, states))
    for nom_map in itertools.product(states, repeat=len(noms)):
        for val_bits in itertools.product([0, 1], repeat=k * len(props)):
            val = {
                w: frozenset(
                    q for j, q in enumerate(props) if val_bits[w * len(props) + j]
                )
                for w in states
            }
            for bits in itertools.product([0, 1], repeat=len(pairs) * len(rel_syms)):
                rho = {
                    s: {
                        pairs[j]
                        for j in range(len(pairs))
                        if bits[i * len(pairs) + j]
                    }
                    for i, s in enumerate(rel_syms)
                }
                yield Interpretation(
                    frozenset(states), rho, dict(zip(noms, nom_map)), val
                )


@pytest.mark.parametrize("n", [0, 1, 2])
def test_graded_diamond_equivalent_on_small_models(n):
    f = Diamond(r, p, grade=n)
    g = expand_graded_diamond(r, n, p, FreshNames())
    for k in (1, 2, 3):
        for m in all_models(k):
            for w in m.states:
                assert evaluate(m, w, f) == evaluate(m, w, g), (n, k, m)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_graded_box_equivalent_on_small_models(n):
    f = Box(r, p, grade=n)
    g = expand_graded_box(r, n, p, FreshNames())
    for k in (1, 2, 3):
        for m in all_models(k):
            for w in m.states:
                assert evaluate(m, w, f) == evaluate(m, w, g), (n, k, m)


def test_expand_grades_nested():
    f = Diamond(r, Diamond(r, p, grade=1), grade=1)
    g = expand_grades(f, FreshNames())
    from hylotab.formulas import has_grades

    assert not has_grades(g)


def test_tau_regression():
    f = parse_formula("[A] down x . <r> x & (down y . [r] y | down z . [A] z)")
    got = tau(nnf(f), FreshNames())
    # the binder under the global box survives; the two critical binders
    # become fresh-nominal conjunctions with distinct nominals
    assert isinstance(got, And)
    assert got.left == parse_formula("[A] down x . <r> x")
    left, right = got.right.left, got.right.right
    assert isinstance(left, And) and isinstance(left.left, Nom)
    assert isinstance(right, And) and isinstance(right.left, Nom)
    b1, b2 = left.left.name, right.left.name
    assert b1 != b2
    assert left.right == Box(r, Nom(b1))
    assert right.right == A(Nom(b2))


def test_tau_leaves_harmless_binder_alone():
    f = nnf(parse_formula("down x . <r> (x & p)"))
    assert tau(f, FreshNames()) == f


def test_tau_rejects_box_down_box():
    with pytest.raises(FragmentError):
        tau(nnf(parse_formula("[r] down x . [r] x")), FreshNames())


def test_preprocess_pipeline():
    q = preprocess(Problem([], parse_formula("<r>^1 p & down x . [r] x")))
    from hylotab.formulas import has_grades
    from hylotab.fragments import detect_down_box

    assert not has_grades(q.formula)
    assert not detect_down_box(q.formula)[0]


def test_preprocess_rejects_outside_fragment():
    with pytest.raises(FragmentError):
        preprocess(Problem([], parse_formula("[r] down x . [r] x")))
    with pytest.raises(FragmentError):
        preprocess(Problem([], parse_formula("[s] [r]^1 p")))


@given(st.integers(0, 10 ** 6))
@settings(max_examples=60, deadline=None)
def test_graded_equivalence_random_bodies(seed):
    rng = random.Random(seed)
    body = rng.choice([p, Neg(p), Or(p, Prop("q")), And(p, Prop("q"))])
    n = rng.randrange(3)
    shape = rng.choice(["dia", "box"])
    if shape == "dia":
        f = Diamond(r, body, grade=n)
        g = expand_graded_diamond(r, n, body, FreshNames())
    else:
        f = Box(r, body, grade=n)
        g = expand_graded_box(r, n, body, FreshNames())
    for _ in range(20):
        k = rng.randrange(1, 4)
        states = frozenset(range(k))
        rho = {"r": {(i, j) for i in range(k) for j in range(k) if rng.random() < 0.5}}
        val = {
            w: frozenset(q for q in ("p", "q") if rng.random() < 0.5) for w in range(k)
        }
        m = Interpretation(states, rho, {}, val)
        for w in states:
            assert evaluate(m, w, f) == evaluate(m, w, g)
