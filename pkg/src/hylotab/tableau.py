"""The tableau engine: branch representation, expansion rules with
their application restrictions, and the depth-first search over
branches.

A branch is a sequence of nodes, each labelled by an assertion or a
ground satisfaction statement 'a: F in NNF.  Relation edges are
ordinary nodes labelled 'a: <r> 'b (r forward, b a nominal); such a
node is read both as an r-edge from a to b and as an r--edge from b
to a.  Disjunctions split the branch; everything else extends it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .blocking import BlockInfo, recompute_blocking
from .formulas import (
    A,
    And,
    At,
    Bot,
    Box,
    Diamond,
    Down,
    E,
    Formula,
    Incl,
    Neg,
    Nom,
    Or,
    Prop,
    Relation,
    Top,
    Trans,
    bwd,
    fwd,
    has_grades,
    is_ground,
    nnf,
    nominals,
    subst_nom,
    subst_var,
)
from .parser import Problem, print_formula

TOP_NOMINAL = "_0"
BRANCH_FRESH = "_b"


@dataclass(frozen=True)
class Sat:
    """Satisfaction statement: nominal `nom` labels formula `body`."""

    nom: str
    body: Formula


def is_relational(lab) -> bool:
    return (
        isinstance(lab, Sat)
        and isinstance(lab.body, Diamond)
        and lab.body.rel.is_forward
        and lab.body.grade is None
        and isinstance(lab.body.sub, Nom)
    )


def is_blockable(lab) -> bool:
    if not isinstance(lab, Sat):
        return False
    if isinstance(lab.body, E):
        return True
    return isinstance(lab.body, Diamond) and not is_relational(lab)


def edge_label(a: str, rel: Relation, b: str) -> Sat:
    """The node label recording an edge from a to b along rel."""
    if rel.is_forward:
        return Sat(a, Diamond(rel, Nom(b)))
    return Sat(b, Diamond(fwd(rel.sym), Nom(a)))


def edge_readings(lab: Sat):
    """Both readings of a relational node: forward and converse."""
    a, r, b = lab.nom, lab.body.rel, lab.body.sub.name
    return ((a, r, b), (b, r.inv(), a))


def format_label(lab) -> str:
    if isinstance(lab, Sat):
        return "'%s: %s" % (lab.nom, print_formula(lab.body))
    return str(lab)


def occurs_in(nom: str, lab) -> bool:
    return isinstance(lab, Sat) and (lab.nom == nom or nom in nominals(lab.body))


class Branch:
    """Mutable branch state.  Node order is creation order; `prec` holds
    each node's offspring parent (None for root nodes).
    """

    def __init__(self):
        self.labels: list = []
        self.prec: list = []
        self.prov: list = []          # (rule name, premise node ids)
        self.expanded: set = set()    # blockable nodes already expanded
        self.incl_set: frozenset = frozenset()
        self.incl_node: dict = {}     # Incl -> node id
        self.trans_syms: frozenset = frozenset()
        self.trans_node: dict = {}    # sym -> node id
        self.rels: tuple = ()
        self.subst_log: list = []     # (a, b) applied replacements
        self.events: list = []
        self.fresh_counter: int = 0
        self.input_formula: Formula | None = None

    def copy(self) -> "Branch":
        c = Branch.__new__(Branch)
        c.labels = list(self.labels)
        c.prec = list(self.prec)
        c.prov = list(self.prov)
        c.expanded = set(self.expanded)
        c.incl_set = self.incl_set
        c.incl_node = self.incl_node
        c.trans_syms = self.trans_syms
        c.trans_node = self.trans_node
        c.rels = self.rels
        c.subst_log = list(self.subst_log)
        c.events = list(self.events)
        c.fresh_counter = self.fresh_counter
        c.input_formula = self.input_formula
        return c

    def add(self, lab, parent, rule, premises) -> int:
        self.labels.append(lab)
        self.prec.append(parent)
        self.prov.append((rule, tuple(premises)))
        return len(self.labels) - 1

    def fresh_nominal(self) -> str:
        self.fresh_counter += 1
        return "%s%d" % (BRANCH_FRESH, self.fresh_counter)

    @property
    def top_noms(self) -> set:
        top = self.labels[0]
        return {top.nom} | nominals(top.body)

    def has_incl(self, left: Relation, right: Relation) -> bool:
        """Is the containment left <= right recorded?  A backward right
        side is normalized by flipping both sides.
        """
        if right.is_forward:
            return Incl(left, right.sym) in self.incl_set
        return Incl(left.inv(), right.sym) in self.incl_set

    def substitute(self, a: str, b: str) -> None:
        """Replace nominal a by b in every node label."""
        out = []
        for lab in self.labels:
            if isinstance(lab, Sat):
                nom = b if lab.nom == a else lab.nom
                out.append(Sat(nom, subst_nom(lab.body, a, b)))
            else:
                out.append(lab)
        self.labels = out
        self.subst_log.append((a, b))
        self.events.append("subst '%s -> '%s" % (a, b))

    # -- derived views, recomputed per scheduling step ----------------------

    def blocking(self) -> BlockInfo:
        blockable = [is_blockable(lab) for lab in self.labels]
        sat_labels = [lab for lab in self.labels if isinstance(lab, Sat)]
        return recompute_blocking(
            self.labels, self.prec, blockable, self.top_noms, sat_labels
        )

    def closure_witness(self, info: BlockInfo | None = None):
        """A pair of contradictory labels, or None if the branch is open.
        A label 'a: false also closes the branch.
        """
        pos: dict = {}
        neg: dict = {}
        for i, lab in enumerate(self.labels):
            if not isinstance(lab, Sat):
                continue
            f = lab.body
            if isinstance(f, Bot):
                return (i, i)
            if isinstance(f, Neg) and isinstance(f.sub, Nom) and f.sub.name == lab.nom:
                return (i, i)
            if isinstance(f, Prop):
                key = (lab.nom, f.name)
                if key in neg:
                    return (i, neg[key])
                pos.setdefault(key, i)
            elif isinstance(f, Neg) and isinstance(f.sub, Prop):
                key = (lab.nom, f.sub.name)
                if key in pos:
                    return (pos[key], i)
                neg.setdefault(key, i)
        return None

    def trace(self) -> list:
        lines = []
        for i, lab in enumerate(self.labels):
            rule, prem = self.prov[i]
            src = rule if not prem else "%s %s" % (rule, ",".join(map(str, prem)))
            lines.append("(%d) %s  [%s]" % (i, format_label(lab), src))
        lines.extend(self.events)
        return lines


# ---------------------------------------------------------------------------
# Initialization

def init_branch(problem: Problem) -> Branch:
    f = nnf(problem.formula)
    if has_grades(f):
        raise ValueError("graded operators must be eliminated before solving")
    if not is_ground(f):
        raise ValueError("input formula must be ground")
    b = Branch()
    b.input_formula = f
    b.add(Sat(TOP_NOMINAL, f), None, "init", ())
    b.rels = tuple(sorted(problem.declared_rels))

    incls: dict = {}
    trans: dict = {}
    for a in problem.assertions:
        if isinstance(a, Trans):
            if a.sym not in trans:
                trans[a.sym] = b.add(a, None, "assert", ())
        elif isinstance(a, Incl):
            if a not in incls:
                incls[a] = b.add(a, None, "assert", ())
    for r in b.rels:
        refl = Incl(fwd(r), r)
        if refl not in incls:
            incls[refl] = b.add(refl, None, "Rel0", ())
    # transitive closure of the containment order, with sign flipping
    changed = True
    while changed:
        changed = False
        for i1 in list(incls):
            for i2 in list(incls):
                if i2.left == fwd(i1.right):
                    derived = Incl(i1.left, i2.right)
                elif i2.left == bwd(i1.right):
                    derived = Incl(i1.left.inv(), i2.right)
                else:
                    continue
                if derived not in incls:
                    incls[derived] = b.add(derived, None, "Rel", (incls[i1], incls[i2]))
                    changed = True
    b.incl_set = frozenset(incls)
    b.incl_node = incls
    b.trans_syms = frozenset(trans)
    b.trans_node = trans
    return b


# ---------------------------------------------------------------------------
# One expansion step

def step(branch: Branch):
    """Apply the first applicable rule under the scheduling priority.

    Returns one of:
        ("closed", None)   the branch is closed
        ("applied", None)  a rule extended or rewrote the branch
        ("split", other)   a disjunction split; `other` is the new branch
        ("done", None)     no rule applies: branch complete and open
    """
    if branch.closure_witness() is not None:
        return ("closed", None)

    info = branch.blocking()
    labels = branch.labels
    n = len(labels)
    nonph = [not info.phantom[i] for i in range(n)]
    npl = {labels[i] for i in range(n) if nonph[i]}

    def sat_nodes():
        for i in range(n):
            if isinstance(labels[i], Sat):
                yield i, labels[i]

    # equality: a non-phantom node 'a: 'b merges the two nominals
    for i, lab in sat_nodes():
        if nonph[i] and isinstance(lab.body, Nom) and lab.body.name != lab.nom:
            branch.substitute(lab.nom, lab.body.name)
            return ("applied", None)

    # conjunction, satisfaction prefix, binder
    for i, lab in sat_nodes():
        if not nonph[i]:
            continue
        f = lab.body
        if isinstance(f, And):
            missing = [
                g for g in (f.left, f.right) if Sat(lab.nom, g) not in npl
            ]
            if missing:
                for g in missing:
                    branch.add(Sat(lab.nom, g), branch.prec[i], "and", (i,))
                return ("applied", None)
        elif isinstance(f, At):
            concl = Sat(f.at.name, f.sub)
            if concl not in npl:
                branch.add(concl, branch.prec[i], "at", (i,))
                return ("applied", None)
        elif isinstance(f, Down):
            concl = Sat(lab.nom, subst_var(f.sub, f.var, lab.nom))
            if concl not in npl:
                branch.add(concl, branch.prec[i], "down", (i,))
                return ("applied", None)
        elif isinstance(f, Top):
            pass

    # containment propagation along edges
    for i, lab in sat_nodes():
        if nonph[i] and is_relational(lab):
            for (x, rel, y) in edge_readings(lab):
                for inc in branch.incl_node:
                    if inc.left == rel:
                        concl = edge_label(x, fwd(inc.right), y)
                        if concl not in npl:
                            branch.add(
                                concl, branch.prec[i], "Link", (i, branch.incl_node[inc])
                            )
                            return ("applied", None)

    # box along matching edges (major premise may be a phantom)
    edges = [
        (m, lab) for m, lab in sat_nodes() if nonph[m] and is_relational(lab)
    ]
    for m, lab in edges:
        for (x, rel, y) in edge_readings(lab):
            for j, labj in sat_nodes():
                fj = labj.body
                if isinstance(fj, Box) and labj.nom == x and fj.rel == rel:
                    concl = Sat(y, fj.sub)
                    if concl not in npl:
                        branch.add(concl, branch.prec[m], "box", (j, m))
                        return ("applied", None)

    # global box: focus on each nominal of a non-phantom node in turn
    global_nodes = [(j, labj) for j, labj in sat_nodes() if isinstance(labj.body, A)]
    if global_nodes:
        occurring: list = []
        first_at: dict = {}
        for i in range(n):
            if not nonph[i]:
                continue
            lab = labels[i]
            if not isinstance(lab, Sat):
                continue
            for nom in [lab.nom] + sorted(nominals(lab.body)):
                if nom not in first_at:
                    first_at[nom] = i
                    occurring.append(nom)
        for j, labj in global_nodes:
            for nom in occurring:
                concl = Sat(nom, labj.body.sub)
                if concl not in npl:
                    minor = first_at[nom]
                    branch.add(concl, branch.prec[minor], "A", (j, minor))
                    return ("applied", None)

    # transitivity propagation: push boxes along edges of transitive
    # subrelations (major premise may be a phantom)
    for m, lab in edges:
        for (x, rel, y) in edge_readings(lab):
            if rel.sym not in branch.trans_syms:
                continue
            for j, labj in sat_nodes():
                fj = labj.body
                if (
                    isinstance(fj, Box)
                    and labj.nom == x
                    and branch.has_incl(rel, fj.rel)
                ):
                    concl = Sat(y, Box(rel, fj.sub))
                    if concl not in npl:
                        branch.add(
                            concl,
                            branch.prec[m],
                            "Trans",
                            (j, m, branch.trans_node[rel.sym]),
                        )
                        return ("applied", None)

    # disjunction: split
    for i, lab in sat_nodes():
        if nonph[i] and isinstance(lab.body, Or):
            f = lab.body
            left = Sat(lab.nom, f.left)
            right = Sat(lab.nom, f.right)
            if left in npl or right in npl:
                continue
            other = branch.copy()
            branch.add(left, branch.prec[i], "or-left", (i,))
            other.add(right, other.prec[i], "or-right", (i,))
            return ("split", other)

    # witness rules, subject to single expansion and direct blocking
    for i, lab in sat_nodes():
        if not nonph[i] or not is_blockable(lab):
            continue
        if i in branch.expanded or info.direct[i]:
            continue
        branch.expanded.add(i)
        f = lab.body
        if isinstance(f, E):
            w = branch.fresh_nominal()
            branch.add(Sat(w, f.sub), i, "E", (i,))
        else:
            w = branch.fresh_nominal()
            branch.add(edge_label(lab.nom, f.rel, w), i, "dia", (i,))
            branch.add(Sat(w, f.sub), i, "dia", (i,))
        return ("applied", None)

    return ("done", None)


# ---------------------------------------------------------------------------
# Search

@dataclass
class Limits:
    max_nodes: int = 100_000
    max_branches: int = 10_000
    timeout: float = 60.0


@dataclass
class Result:
    verdict: str                 # "sat" | "unsat" | "limit"
    branch: Branch | None = None
    blocking: BlockInfo | None = None
    trace: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def is_sat(self) -> bool:
        return self.verdict == "sat"


def solve(problem: Problem, limits: Limits | None = None) -> Result:
    """Decide satisfiability of an ungraded ground problem.

    The input must already be free of binders scoping over universal
    operators (run the preprocessing pipeline first if needed).  On
    "sat" the result carries the complete open branch; on "unsat" the
    trace of the last refuted branch.
    """
    limits = limits or Limits()
    start = time.monotonic()
    stack = [init_branch(problem)]
    branches = 0
    steps = 0
    last = None
    while stack:
        branch = stack.pop()
        branches += 1
        if branches > limits.max_branches:
            return Result("limit", branch, stats=_stats(branches, steps, start))
        while True:
            if time.monotonic() - start > limits.timeout:
                return Result("limit", branch, stats=_stats(branches, steps, start))
            if len(branch.labels) > limits.max_nodes:
                return Result("limit", branch, stats=_stats(branches, steps, start))
            status, other = step(branch)
            steps += 1
            if status == "applied":
                continue
            if status == "split":
                stack.append(other)
                continue
            if status == "closed":
                last = branch
                break
            return Result(
                "sat",
                branch,
                branch.blocking(),
                branch.trace(),
                _stats(branches, steps, start),
            )
    return Result(
        "unsat",
        last,
        None,
        last.trace() if last else [],
        _stats(branches, steps, start),
    )


def _stats(branches, steps, start):
    return {
        "branches": branches,
        "steps": steps,
        "seconds": time.monotonic() - start,
    }
