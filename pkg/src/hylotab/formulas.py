"""Formula and assertion ASTs, negation normal form, substitutions and
subformula closure for multi-modal hybrid logic.

Formulas are immutable trees with structural equality, so they can be
used freely as dict keys and set members (label comparison is pervasive
in the tableau engine and in blocking).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

FRESH_PREFIX = "_"


# ---------------------------------------------------------------------------
# Relations and assertions

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class Relation:
    """A relation symbol used forward (r) or backward (r-)."""

    sym: str
    direction: str = FORWARD

    def inv(self) -> "Relation":
        return Relation(self.sym, BACKWARD if self.direction == FORWARD else FORWARD)

    @property
    def is_forward(self) -> bool:
        return self.direction == FORWARD

    def __str__(self) -> str:
        return self.sym if self.is_forward else self.sym + "-"


def fwd(sym: str) -> Relation:
    return Relation(sym, FORWARD)


def bwd(sym: str) -> Relation:
    return Relation(sym, BACKWARD)


@dataclass(frozen=True)
class Trans:
    """Transitivity assertion for a relation symbol."""

    sym: str

    def __str__(self) -> str:
        return "trans %s" % self.sym


@dataclass(frozen=True)
class Incl:
    """Normalized inclusion: left side may be backward, right side is a
    forward symbol (r- <= s- is spelled r <= s, r <= s- is spelled r- <= s).
    """

    left: Relation
    right: str

    def __str__(self) -> str:
        return "%s <= %s" % (self.left, self.right)


Assertion = object  # Trans | Incl; kept loose, isinstance checks below


# ---------------------------------------------------------------------------
# Formulas

@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Nom:
    name: str


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Neg:
    sub: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    rel: Relation
    sub: "Formula"
    grade: int | None = None


@dataclass(frozen=True)
class Box:
    rel: Relation
    sub: "Formula"
    grade: int | None = None


@dataclass(frozen=True)
class E:
    sub: "Formula"


@dataclass(frozen=True)
class A:
    sub: "Formula"


@dataclass(frozen=True)
class At:
    """Satisfaction statement u:F, with u a nominal or a variable."""

    at: "Formula"  # Nom or Var
    sub: "Formula"


@dataclass(frozen=True)
class Down:
    var: str
    sub: "Formula"


Formula = (
    Prop | Nom | Var | Top | Bot | Neg | And | Or | Diamond | Box | E | A | At | Down
)

ATOMS = (Prop, Nom, Var, Top, Bot)


# ---------------------------------------------------------------------------
# Negation normal form

def nnf(f: Formula) -> Formula:
    """Push negations down to atoms.

    Graded modalities are handled by duality with the same grade.  The
    binder and @ are self-dual, so a negation simply moves inside them.
    Idempotent; preserves truth on every interpretation.
    """
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, And):
        return And(nnf(f.left), nnf(f.right))
    if isinstance(f, Or):
        return Or(nnf(f.left), nnf(f.right))
    if isinstance(f, Diamond):
        return Diamond(f.rel, nnf(f.sub), f.grade)
    if isinstance(f, Box):
        return Box(f.rel, nnf(f.sub), f.grade)
    if isinstance(f, E):
        return E(nnf(f.sub))
    if isinstance(f, A):
        return A(nnf(f.sub))
    if isinstance(f, At):
        return At(f.at, nnf(f.sub))
    if isinstance(f, Down):
        return Down(f.var, nnf(f.sub))
    if isinstance(f, Neg):
        g = f.sub
        if isinstance(g, (Prop, Nom, Var)):
            return f
        if isinstance(g, Top):
            return Bot()
        if isinstance(g, Bot):
            return Top()
        if isinstance(g, Neg):
            return nnf(g.sub)
        if isinstance(g, And):
            return Or(nnf(Neg(g.left)), nnf(Neg(g.right)))
        if isinstance(g, Or):
            return And(nnf(Neg(g.left)), nnf(Neg(g.right)))
        if isinstance(g, Diamond):
            return Box(g.rel, nnf(Neg(g.sub)), g.grade)
        if isinstance(g, Box):
            return Diamond(g.rel, nnf(Neg(g.sub)), g.grade)
        if isinstance(g, E):
            return A(nnf(Neg(g.sub)))
        if isinstance(g, A):
            return E(nnf(Neg(g.sub)))
        if isinstance(g, At):
            return At(g.at, nnf(Neg(g.sub)))
        if isinstance(g, Down):
            return Down(g.var, nnf(Neg(g.sub)))
    raise TypeError("not a formula: %r" % (f,))


def is_nnf(f: Formula) -> bool:
    """True iff negation appears only on propositions, nominals, variables."""
    if isinstance(f, Neg):
        return isinstance(f.sub, (Prop, Nom, Var))
    return all(is_nnf(g) for g in children(f))


def children(f: Formula) -> tuple:
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, (Neg, Diamond, Box, E, A, At, Down)):
        return (f.sub,)
    return ()


# ---------------------------------------------------------------------------
# Substitutions

def subst_var(f: Formula, x: str, a: str) -> Formula:
    """Replace every free occurrence of variable x with nominal a."""
    if isinstance(f, Var):
        return Nom(a) if f.name == x else f
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, Down):
        if f.var == x:
            return f
        return Down(f.var, subst_var(f.sub, x, a))
    if isinstance(f, At):
        at = subst_var(f.at, x, a)
        return At(at, subst_var(f.sub, x, a))
    return _rebuild(f, [subst_var(g, x, a) for g in children(f)])


def subst_nom(f: Formula, a: str, b: str) -> Formula:
    """Replace every occurrence of nominal a with b."""
    if isinstance(f, Nom):
        return Nom(b) if f.name == a else f
    if isinstance(f, ATOMS):
        return f
    if isinstance(f, At):
        return At(subst_nom(f.at, a, b), subst_nom(f.sub, a, b))
    if isinstance(f, Down):
        return Down(f.var, subst_nom(f.sub, a, b))
    return _rebuild(f, [subst_nom(g, a, b) for g in children(f)])


def _rebuild(f: Formula, subs: list) -> Formula:
    if isinstance(f, And):
        return And(subs[0], subs[1])
    if isinstance(f, Or):
        return Or(subs[0], subs[1])
    if isinstance(f, Neg):
        return Neg(subs[0])
    if isinstance(f, Diamond):
        return Diamond(f.rel, subs[0], f.grade)
    if isinstance(f, Box):
        return Box(f.rel, subs[0], f.grade)
    if isinstance(f, E):
        return E(subs[0])
    if isinstance(f, A):
        return A(subs[0])
    if isinstance(f, At):
        return At(f.at, subs[0])
    if isinstance(f, Down):
        return Down(f.var, subs[0])
    raise TypeError(f)


# ---------------------------------------------------------------------------
# Inspection helpers

def free_vars(f: Formula, bound: frozenset = frozenset()) -> set:
    if isinstance(f, Var):
        return set() if f.name in bound else {f.name}
    if isinstance(f, ATOMS):
        return set()
    if isinstance(f, Down):
        return free_vars(f.sub, bound | {f.var})
    if isinstance(f, At):
        return free_vars(f.at, bound) | free_vars(f.sub, bound)
    out: set = set()
    for g in children(f):
        out |= free_vars(g, bound)
    return out


def is_ground(f: Formula) -> bool:
    return not free_vars(f)


def nominals(f: Formula) -> set:
    if isinstance(f, Nom):
        return {f.name}
    if isinstance(f, At):
        return nominals(f.at) | nominals(f.sub)
    out: set = set()
    for g in children(f):
        out |= nominals(g)
    return out


def rel_syms(f: Formula) -> set:
    out: set = set()
    if isinstance(f, (Diamond, Box)):
        out.add(f.rel.sym)
    for g in children(f):
        out |= rel_syms(g)
    return out


def props(f: Formula) -> set:
    if isinstance(f, Prop):
        return {f.name}
    out: set = set()
    for g in children(f):
        out |= props(g)
    return out


def has_grades(f: Formula) -> bool:
    if isinstance(f, (Diamond, Box)) and f.grade is not None:
        return True
    return any(has_grades(g) for g in children(f))


def size(f: Formula) -> int:
    """Node count of the tree.  @-prefixes count the @ node and the name
    node separately (u:F has size 2 + size(F)); this is the convention
    the subformula-bound tests rely on.
    """
    if isinstance(f, ATOMS):
        return 1
    if isinstance(f, At):
        return 2 + size(f.sub)
    return 1 + sum(size(g) for g in children(f))


# ---------------------------------------------------------------------------
# Subformula closure w.r.t. a relation vocabulary

def subformula_closure(f: Formula, rels: frozenset | set) -> frozenset:
    """Subformulas of f, closed under relation renaming of boxes: for each
    subformula Box_R G, every Box_S G with S a forward or backward
    relation over `rels` is included.  Size is at most 2 * |rels| * size(f).
    """
    rels = frozenset(rels)
    out: set = set()
    _closure(f, rels, out)
    return frozenset(out)


def _closure(f: Formula, rels: frozenset, out: set) -> None:
    if f in out:
        return
    out.add(f)
    if isinstance(f, Box):
        for s in rels:
            out.add(Box(fwd(s), f.sub, f.grade))
            out.add(Box(bwd(s), f.sub, f.grade))
    for g in children(f):
        _closure(g, rels, out)


def is_instance_of(g: Formula, f: Formula) -> bool:
    """True iff g can be obtained from f by uniformly replacing the free
    variables of f with nominals.
    """
    assignment: dict = {}
    return _match_instance(g, f, frozenset(), assignment)


def _match_instance(g, f, bound, assignment) -> bool:
    if isinstance(f, Var) and f.name not in bound:
        if not isinstance(g, Nom):
            return False
        if f.name in assignment:
            return assignment[f.name] == g.name
        assignment[f.name] = g.name
        return True
    if type(f) is not type(g):
        return False
    if isinstance(f, ATOMS):
        return f == g
    if isinstance(f, Down):
        return f.var == g.var and _match_instance(g.sub, f.sub, bound | {f.var}, assignment)
    if isinstance(f, At):
        return _match_instance(g.at, f.at, bound, assignment) and _match_instance(
            g.sub, f.sub, bound, assignment
        )
    if isinstance(f, (Diamond, Box)):
        if f.rel != g.rel or f.grade != g.grade:
            return False
        return _match_instance(g.sub, f.sub, bound, assignment)
    return all(
        _match_instance(gc, fc, bound, assignment)
        for gc, fc in zip(children(g), children(f))
    )
