"""Preprocessing pipeline: eliminate graded modalities through their
binder definitions, then skolemize binders that scope over universal
operators.  Output problems are ungraded, in NNF, and contain no binder
with a universal operator in its scope.
"""

from __future__ import annotations

from .formulas import (
    A,
    And,
    At,
    Box,
    Diamond,
    Down,
    E,
    FRESH_PREFIX,
    Formula,
    Neg,
    Nom,
    Or,
    Relation,
    Var,
    children,
    has_grades,
    nnf,
    nominals,
    _rebuild,
)
from .fragments import FragmentVerdict, _contains_universal, classify
from .parser import Problem


class FragmentError(ValueError):
    """The input lies outside the decidable fragment."""

    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class FreshNames:
    """Source of reserved-prefix names, distinct within one run."""

    def __init__(self, prefix=FRESH_PREFIX):
        self.prefix = prefix
        self.counter = 0

    def nominal(self) -> str:
        self.counter += 1
        return "%s%d" % (self.prefix, self.counter)

    def variable(self) -> str:
        self.counter += 1
        return "%sv%d" % (self.prefix, self.counter)


def expand_graded_diamond(rel: Relation, n: int, f: Formula, fresh: FreshNames | None = None) -> Formula:
    """(at least n+1 successors satisfying f), written with the binder:

        n=0:  <R> f
        n=1:  down x . <R> (f & down y1 . @x <R> (f & !y1))
        n=2:  down x . <R> (f & down y1 . @x <R> (f & !y1 &
                              down y2 . @x <R> (f & !y1 & !y2)))
    """
    if n < 0:
        raise ValueError("grade must be nonnegative")
    if n == 0:
        return Diamond(rel, f)
    fresh = fresh or FreshNames()
    x = fresh.variable()
    ys = [fresh.variable() for _ in range(n)]

    def chain(i: int) -> Formula:
        # conjunction f & !y1 & ... & !y_i, then the next binder if any
        body: Formula = f
        for y in ys[:i]:
            body = And(body, Neg(Var(y)))
        if i < n:
            inner = Down(ys[i], At(Var(x), Diamond(rel, chain(i + 1))))
            body = And(body, inner)
        return body

    return Down(x, Diamond(rel, chain(0)))


def expand_graded_box(rel: Relation, n: int, f: Formula, fresh: FreshNames | None = None) -> Formula:
    """(at most n exceptions), avoiding a box over the binder chain:

        n=0:  [R] f
        n=1:  [R] f | down x . <R> (down y1 . @x [R] (f | y1))
        n=2:  [R] f | down x . <R> (down y1 . @x <R> (down y2 .
                              @x [R] (f | y1 | y2)))
    """
    if n < 0:
        raise ValueError("grade must be nonnegative")
    if n == 0:
        return Box(rel, f)
    fresh = fresh or FreshNames()
    x = fresh.variable()
    ys = [fresh.variable() for _ in range(n)]

    final: Formula = f
    for y in ys:
        final = Or(final, Var(y))
    final = Box(rel, final)

    body = At(Var(x), final)
    for y in reversed(ys[1:]):
        body = Diamond(rel, Down(y, body))
        body = At(Var(x), body)
    body = Diamond(rel, Down(ys[0], body))
    return Or(Box(rel, f), Down(x, body))


def expand_grades(f: Formula, fresh: FreshNames) -> Formula:
    """Replace every graded modality by its binder definition, innermost
    first so expanded bodies are already grade-free.
    """
    subs = [expand_grades(g, fresh) for g in children(f)]
    if isinstance(f, Diamond) and f.grade is not None:
        return expand_graded_diamond(f.rel, f.grade, subs[0], fresh)
    if isinstance(f, Box) and f.grade is not None:
        return expand_graded_box(f.rel, f.grade, subs[0], fresh)
    if not subs:
        return f
    return _rebuild(f, subs)


def tau(f: Formula, fresh: FreshNames | None = None) -> Formula:
    """Skolemizing translation: a binder whose body contains a universal
    operator is replaced by a fresh nominal naming the bound state.
    Homomorphic on conjunction, disjunction, @, diamonds and E; the
    identity elsewhere.  Input must be ungraded NNF without the pattern
    of a binder nested between two universal operators.
    """
    if has_grades(f):
        raise FragmentError("graded operator in input to the translation")
    from .fragments import detect_box_down_box

    bdb, witnesses = detect_box_down_box(f)
    if bdb:
        raise FragmentError("input contains a universal-binder-universal nesting", witnesses)
    return _tau(f, fresh or FreshNames())


def _tau(f: Formula, fresh: FreshNames) -> Formula:
    if isinstance(f, At):
        return At(f.at, _tau(f.sub, fresh))
    if isinstance(f, And):
        return And(_tau(f.left, fresh), _tau(f.right, fresh))
    if isinstance(f, Or):
        return Or(_tau(f.left, fresh), _tau(f.right, fresh))
    if isinstance(f, Diamond):
        return Diamond(f.rel, _tau(f.sub, fresh), f.grade)
    if isinstance(f, E):
        return E(_tau(f.sub, fresh))
    if isinstance(f, Down):
        if not _contains_universal(f.sub):
            return f
        b = fresh.nominal()
        from .formulas import subst_var

        return And(Nom(b), _tau(subst_var(f.sub, f.var, b), fresh))
    return f


def preprocess(problem: Problem) -> Problem:
    """nnf -> graded expansion -> nnf -> tau.  Raises FragmentError when
    the problem lies outside the accepted fragment; assertions pass
    through unchanged.
    """
    verdict = classify(problem)
    if not verdict.preprocessable:
        raise FragmentError(
            "problem outside the decidable fragment",
            [w for w in verdict.witnesses if w[0] != "down-box"],
        )
    fresh = FreshNames()
    f = nnf(problem.formula)
    f = expand_grades(f, fresh)
    f = nnf(f)
    f = tau(f, fresh)
    return Problem(list(problem.assertions), f, set(problem.declared_rels))
