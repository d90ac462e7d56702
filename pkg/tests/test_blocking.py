from hylotab.blocking import maps_to, nominal_profiles, recompute_blocking
from hylotab.formulas import Box, Diamond, Neg, Nom, Prop, fwd
from hylotab.parser import parse
from hylotab.preprocess import preprocess
from hylotab.tableau import Limits, Sat, is_blockable, solve


def profiles(*labels):
    return nominal_profiles(list(labels))


def test_maps_to_identity():
    lab = Sat("a", Diamond(fwd("r"), Prop("p")))
    assert maps_to(lab, lab, set(), {})


def test_maps_to_renaming():
    m = Sat("a", Diamond(fwd("r"), Prop("p")))
    n = Sat("b", Diamond(fwd("r"), Prop("p")))
    assert maps_to(m, n, set(), {})
    # renaming must respect compatibility
    prof = profiles(Sat("a", Prop("q")))
    assert not maps_to(m, n, set(), prof)
    prof = profiles(Sat("a", Prop("q")), Sat("b", Prop("q")))
    assert maps_to(m, n, set(), prof)


def test_maps_to_respects_top_nominals():
    m = Sat("a", Diamond(fwd("r"), Nom("a")))
    n = Sat("b", Diamond(fwd("r"), Nom("b")))
    assert maps_to(m, n, set(), {})
    assert not maps_to(m, n, {"a"}, {})
    # a shared top nominal in the same position is fine
    m = Sat("a", Diamond(fwd("r"), Nom("t")))
    n = Sat("b", Diamond(fwd("r"), Nom("t")))
    assert maps_to(m, n, {"t"}, {})


def test_maps_to_requires_injectivity():
    m = Sat("a", Diamond(fwd("r"), Neg(Nom("b"))))
    n = Sat("c", Diamond(fwd("r"), Neg(Nom("c"))))
    # a and b would both map to c
    assert not maps_to(m, n, set(), {})


def test_maps_to_structure_must_match():
    m = Sat("a", Diamond(fwd("r"), Prop("p")))
    assert not maps_to(m, Sat("a", Diamond(fwd("s"), Prop("p"))), set(), {})
    assert not maps_to(m, Sat("a", Box(fwd("r"), Prop("p"))), set(), {})


def test_compatibility_uses_props_and_boxes():
    prof = profiles(
        Sat("a", Prop("p")),
        Sat("b", Prop("p")),
        Sat("a", Box(fwd("r"), Prop("q"))),
    )
    assert prof["a"] != prof["b"]
    prof = profiles(
        Sat("a", Box(fwd("r"), Prop("q"))),
        Sat("b", Box(fwd("r"), Prop("q"))),
    )
    assert prof["a"] == prof["b"]


def test_recompute_blocking_direct_and_phantom():
    labels = [
        Sat("a", Diamond(fwd("r"), Prop("p"))),   # 0: blockable root
        Sat("b", Diamond(fwd("r"), Prop("p"))),   # 1: blocked by 0
        Sat("c", Prop("q")),                      # 2: child of 1 -> phantom
    ]
    prec = [None, None, 1]
    blockable = [True, True, False]
    info = recompute_blocking(labels, prec, blockable, set(), labels)
    assert not info.direct[0] and not info.phantom[0]
    assert info.direct[1] and info.blocker[1] == 0
    assert not info.direct[2] and info.phantom[2]


def test_blocked_nodes_do_not_block():
    lab = Sat("a", Diamond(fwd("r"), Prop("p")))
    labels = [lab, Sat("b", Diamond(fwd("r"), Prop("p"))), Sat("c", Diamond(fwd("r"), Prop("p")))]
    prec = [None, None, None]
    info = recompute_blocking(labels, prec, [True] * 3, set(), labels)
    # both later nodes are blocked by the first, never by each other
    assert info.blocker[1] == 0 and info.blocker[2] == 0


def test_blocking_terminates_recursive_demand():
    # every state needs a successor; without blocking this runs forever
    res = solve(preprocess(parse("formula: [A] <r> true;")), Limits(timeout=15))
    assert res.verdict == "sat"
    info = res.blocking
    assert any(info.direct[i] for i in range(len(res.branch.labels)))


def test_blocking_terminates_transitive_chain():
    res = solve(
        preprocess(parse("trans r; formula: <r> p & [A] <r> p;")),
        Limits(timeout=15),
    )
    assert res.verdict == "sat"
