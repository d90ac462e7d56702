from hylotab.corpus import functionality_formula, tiling_at, tiling_conv, default_tiles
from hylotab.formulas import nnf
from hylotab.fragments import (
    check_graded_restrictions,
    classify,
    detect_box_down_box,
    detect_down_box,
)
from hylotab.parser import Problem, parse_formula


def f(text):
    return nnf(parse_formula(text))


def test_down_box_detection():
    yes, w = detect_down_box(f("down x . [r] !x"))
    assert yes and w
    yes, _ = detect_down_box(f("down x . <r> x"))
    assert not yes
    # the global box counts as a universal operator
    yes, _ = detect_down_box(f("down x . [A] x"))
    assert yes


def test_box_down_box_detection():
    yes, w = detect_box_down_box(f("[r] down x . [r] x"))
    assert yes and w
    yes, _ = detect_box_down_box(f("down x . [r] x"))
    assert not yes
    yes, _ = detect_box_down_box(f("[r] down x . <r> x"))
    assert not yes
    # scope is tree dominance, not intermediated by @
    yes, _ = detect_box_down_box(f("[A] down x . @'a [r] p"))
    assert yes


def test_box_down_box_through_negation():
    # NNF turns the negated diamond into a box
    yes, _ = detect_box_down_box(f("! <r> down x . <r> !x"))
    assert yes


def test_graded_restrictions():
    ok, _ = check_graded_restrictions(f("[r]^1 p"))
    assert ok
    ok, w = check_graded_restrictions(f("[s] [r]^1 p"))
    assert not ok and any("1a" in name for name, _ in w)
    ok, w = check_graded_restrictions(f("[r]^1 down x . [r] x"))
    assert not ok and any("1b" in name for name, _ in w)
    ok, w = check_graded_restrictions(f("[s] <r>^2 [r] p"))
    assert not ok and any("(2)" in name for name, _ in w)
    ok, _ = check_graded_restrictions(f("[s] <r>^2 p"))
    assert ok
    ok, _ = check_graded_restrictions(f("<r>^2 [r] p"))
    assert ok


def test_classify_tilings():
    v = classify(tiling_at(default_tiles()))
    assert not v.has_box_down_box
    assert not v.graded_ok
    assert not v.preprocessable

    v = classify(tiling_conv(default_tiles()))
    assert not v.has_box_down_box
    assert not v.graded_ok


def test_classify_functionality():
    v = classify(Problem([], functionality_formula()))
    assert v.has_box_down_box
    assert not v.preprocessable


def test_classify_plain_fragment():
    v = classify(Problem([], f("down x . <r> (x & p) & [r] q")))
    assert v.preprocessable
    assert not v.has_down_box
