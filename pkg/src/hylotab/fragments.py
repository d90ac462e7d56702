"""Syntactic fragment detection: the binder/universal-operator patterns
that govern decidability, and the restrictions on graded modalities.

All detectors expect NNF input; "scope" is plain AST dominance (an
@-jump does not cut scope).  Universal operators are [R], [A] and the
graded [R]^n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .formulas import (
    A,
    ATOMS,
    Box,
    Diamond,
    Down,
    Formula,
    children,
    is_nnf,
    nnf,
)

# A position is a tuple of child indices from the root.
Path = tuple


def _walk(f: Formula, path: Path = ()):
    yield path, f
    for i, g in enumerate(children(f)):
        yield from _walk(g, path + (i,))


def at_path(f: Formula, path: Path) -> Formula:
    for i in path:
        f = children(f)[i]
    return f


def is_universal(f: Formula) -> bool:
    return isinstance(f, (Box, A))


def universal_ops(f: Formula) -> set:
    """Positions of all universal operators ([R], [A], graded [R]^n)."""
    return {path for path, g in _walk(f) if is_universal(g)}


def _contains_universal(f: Formula) -> bool:
    return any(is_universal(g) for _, g in _walk(f))


def _contains_down_box(f: Formula) -> list:
    """Paths of binders with a universal operator in their scope."""
    return [
        path
        for path, g in _walk(f)
        if isinstance(g, Down) and _contains_universal(g.sub)
    ]


def detect_down_box(f: Formula) -> tuple[bool, list]:
    """The pattern: a binder scoping over a universal operator."""
    witnesses = [("down-box", p) for p in _contains_down_box(f)]
    return bool(witnesses), witnesses


def detect_box_down_box(f: Formula) -> tuple[bool, list]:
    """The undecidability trigger: a binder that both lies under a
    universal operator and scopes over one.
    """
    witnesses = []
    for path, g in _walk(f):
        if not is_universal(g):
            continue
        for sub_path in _contains_down_box(g):
            # sub_path is relative to g's subtree; child 0 is g's body
            witnesses.append(("box-down-box", path + sub_path))
    # deduplicate binders reported under several outer universals
    seen, out = set(), []
    for name, p in witnesses:
        if p not in seen:
            seen.add(p)
            out.append((name, p))
    return bool(out), out


def check_graded_restrictions(f: Formula) -> tuple[bool, list]:
    """Restrictions under which graded modalities stay decidable:

    1a. no graded box occurs in the scope of a universal operator,
    1b. no graded box body contains a binder scoping over a universal,
    2.  every graded diamond either occurs under no universal operator
        or has a body free of universal operators.
    """
    witnesses = []
    under: dict[Path, bool] = {}

    def visit(g, path, under_universal):
        under[path] = under_universal
        nxt = under_universal or is_universal(g)
        for i, c in enumerate(children(g)):
            visit(c, path + (i,), nxt)

    visit(f, (), False)

    for path, g in _walk(f):
        if isinstance(g, Box) and g.grade is not None:
            if under[path]:
                witnesses.append(("graded-box-under-universal (1a)", path))
            if _contains_down_box(g.sub):
                witnesses.append(("graded-box-body-has-down-box (1b)", path))
        elif isinstance(g, Diamond) and g.grade is not None:
            if under[path] and _contains_universal(g.sub):
                witnesses.append(("graded-diamond-under-universal-with-universal-body (2)", path))
    return not witnesses, witnesses


@dataclass
class FragmentVerdict:
    has_box_down_box: bool
    has_down_box: bool
    graded_ok: bool
    witnesses: list = field(default_factory=list)

    @property
    def preprocessable(self) -> bool:
        return not self.has_box_down_box and self.graded_ok


def classify(problem) -> FragmentVerdict:
    """Run all detectors on the NNF of the problem's formula."""
    f = nnf(problem.formula)
    assert is_nnf(f)
    bdb, w1 = detect_box_down_box(f)
    db, w2 = detect_down_box(f)
    graded_ok, w3 = check_graded_restrictions(f)
    return FragmentVerdict(bdb, db, graded_ok, w1 + w2 + w3)
