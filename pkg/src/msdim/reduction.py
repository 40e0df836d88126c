"""Gadget graphs that encode 3-CNF formulas, and checks of the encoding.

Each variable ``x_i`` gets nodes ``T_i, F_i, a_i^1, a_i^2, b_i^1, b_i^2,
d_i^1, d_i^2`` plus a pendant set ``Q_i`` hanging off ``d_i^1``.  Each clause
``C_j`` gets ``c_j^1..c_j^4`` plus a pendant set ``P_j`` hanging off
``c_j^2``.  A *structured* landmark set holds every pendant vertex and
exactly one of ``a_i^1, a_i^2, b_i^1, b_i^2`` per variable; it has size
``M`` and corresponds to a truth assignment.

Variable and clause indices are 1-based throughout this module, as in the
usual formula notation.  Vertex ids stay 0-based.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidFormula, NotStructured, ParseError
from .graph import Graph, build_graph
from .resolvability import Notion, histogram_rows, multiset_repr
from .search import BatchKernel

__all__ = [
    "CnfFormula",
    "parse_dimacs",
    "format_dimacs",
    "GadgetGraph",
    "build_gadget_graph",
    "assignment_to_set",
    "set_to_assignment",
    "clause_separation_check",
    "profile_violations",
    "clause_w",
    "satisfying_assignment",
    "structured_candidates",
    "VerificationReport",
    "verify_reduction",
]

VARIABLE_ROLES = ("T", "F", "a1", "a2", "b1", "b2", "d1", "d2")
CLAUSE_ROLES = ("c1", "c2", "c3", "c4")
# one of these joins the landmark set per variable, in sweep order
SELECTORS = ("a1", "a2", "b1", "b2")

STRUCTURED_ASSUMPTION = (
    "structured mode only considers sets holding every Q and P vertex plus one "
    "of a1, a2, b1, b2 per variable; any optimal set can be normalised to this shape"
)


@dataclass(frozen=True)
class CnfFormula:
    """A CNF formula with clauses of signed 1-based variable indices.

    With ``strict`` every clause has exactly three literals and every
    variable occurs.  Non-strict formulas allow one to three literals per
    clause, which keeps miniature instances small enough for exhaustive
    checks.
    """

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]
    strict: bool = field(default=True, compare=False)

    def __post_init__(self) -> None:
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.num_vars < 1:
            raise InvalidFormula("a formula needs at least one variable")
        if not clauses:
            raise InvalidFormula("a formula needs at least one clause")
        for j, clause in enumerate(clauses, 1):
            if self.strict and len(clause) != 3:
                raise InvalidFormula(f"clause {j} has {len(clause)} literals, expected 3")
            if not 1 <= len(clause) <= 3:
                raise InvalidFormula(f"clause {j} has {len(clause)} literals, expected 1 to 3")
            vars_ = [abs(x) for x in clause]
            if any(x == 0 or abs(x) > self.num_vars for x in clause):
                raise InvalidFormula(f"clause {j} references a variable outside 1..{self.num_vars}")
            if len(set(vars_)) != len(vars_):
                raise InvalidFormula(f"clause {j} repeats a variable")
        if self.strict:
            used = {abs(x) for c in clauses for x in c}
            missing = sorted(set(range(1, self.num_vars + 1)) - used)
            if missing:
                raise InvalidFormula(f"variables {missing} do not occur in any clause")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def evaluate(self, assignment: Sequence[bool]) -> tuple[bool, ...]:
        """Truth value of every clause; ``assignment[i - 1]`` is the value of ``x_i``."""
        return tuple(
            any(assignment[abs(x) - 1] == (x > 0) for x in clause) for clause in self.clauses
        )

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(self.evaluate(assignment))


_INT = re.compile(r"^-?\d+$")


def parse_dimacs(text: str, strict: bool = True) -> CnfFormula:
    """Parse the DIMACS CNF subset: ``c`` comments, one ``p cnf n m`` header, 0-terminated clauses."""
    header: tuple[int, int] | None = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("duplicate problem line", lineno)
            if len(parts) != 4 or parts[1] != "cnf" or not all(_INT.match(x) for x in parts[2:]):
                raise ParseError(f"bad problem line {line!r}", lineno)
            header = (int(parts[2]), int(parts[3]))
            if header[0] < 1 or header[1] < 1:
                raise ParseError("problem line needs positive counts", lineno)
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' line", lineno)
        for tok in line.split():
            if not _INT.match(tok):
                raise ParseError(f"bad literal {tok!r}", lineno)
            lit = int(tok)
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", lineno)
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > header[0]:
                raise ParseError(f"literal {lit} exceeds {header[0]} variables", lineno)
            else:
                current.append(lit)
    if header is None:
        raise ParseError("missing 'p cnf' line")
    if current:
        raise ParseError("last clause is not terminated by 0", len(text.splitlines()))
    if len(clauses) != header[1]:
        raise ParseError(f"header declares {header[1]} clauses, found {len(clauses)}")
    try:
        return CnfFormula(header[0], tuple(clauses), strict=strict)
    except InvalidFormula as exc:
        raise ParseError(str(exc)) from None


def format_dimacs(f: CnfFormula) -> str:
    lines = [f"p cnf {f.num_vars} {f.num_clauses}"]
    lines += [" ".join(str(x) for x in c) + " 0" for c in f.clauses]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GadgetGraph:
    formula: CnfFormula
    graph: Graph
    roles: tuple[tuple[str, int], ...]
    q: tuple[int, ...]
    p: tuple[int, ...]
    var_nodes: tuple[dict, ...] = field(repr=False)
    clause_nodes: tuple[dict, ...] = field(repr=False)
    Q: tuple[tuple[int, ...], ...] = field(repr=False)
    P: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def M(self) -> int:
        return sum(self.q) + sum(self.p) + self.formula.num_vars

    def var(self, i: int, role: str) -> int:
        return self.var_nodes[i - 1][role]

    def clause(self, j: int, role: str) -> int:
        return self.clause_nodes[j - 1][role]

    @property
    def pendant(self) -> tuple[int, ...]:
        return tuple(sorted(v for group in self.Q + self.P for v in group))

    def role_name(self, v: int) -> str:
        role, idx = self.roles[v]
        return f"{role}_{idx}"

    def sidecar(self) -> dict:
        return {
            "num_vars": self.formula.num_vars,
            "num_clauses": self.formula.num_clauses,
            "order": self.graph.n,
            "q": list(self.q),
            "p": list(self.p),
            "M": self.M,
            "roles": {str(v + 1): self.role_name(v) for v in range(self.graph.n)},
        }

    def sidecar_json(self) -> str:
        return json.dumps(self.sidecar(), indent=2) + "\n"


def build_gadget_graph(
    f: CnfFormula, q: Sequence[int] | None = None, p: Sequence[int] | None = None
) -> GadgetGraph:
    """Build the gadget graph of ``f``.

    ``q`` and ``p`` override the pendant sizes (defaults ``2in`` and
    ``2jn + 2n^2``) for experiments; the defaults are what the encoding's
    correctness argument relies on.
    """
    n, m = f.num_vars, f.num_clauses
    q = tuple(q) if q is not None else tuple(2 * i * n for i in range(1, n + 1))
    p = tuple(p) if p is not None else tuple(2 * j * n + 2 * n * n for j in range(1, m + 1))
    if len(q) != n or len(p) != m or min(q + p) < 1:
        raise InvalidFormula("need one positive pendant size per variable and per clause")
    roles: list[tuple[str, int]] = []
    edges: list[tuple[int, int]] = []
    var_nodes, clause_nodes, Q, P = [], [], [], []

    def new(role: str, idx: int) -> int:
        roles.append((role, idx))
        return len(roles) - 1

    for i in range(1, n + 1):
        v = {r: new(r, i) for r in VARIABLE_ROLES}
        pend = tuple(new("Q", i) for _ in range(q[i - 1]))
        edges += [
            (v["a1"], v["b1"]),
            (v["a2"], v["b2"]),
            (v["T"], v["a1"]),
            (v["T"], v["a2"]),
            (v["b1"], v["F"]),
            (v["b2"], v["F"]),
            (v["T"], v["d1"]),
            (v["F"], v["d1"]),
            (v["d1"], v["d2"]),
        ]
        edges += [(v["d1"], x) for x in pend]
        var_nodes.append(v)
        Q.append(pend)
    for j in range(1, m + 1):
        c = {r: new(r, j) for r in CLAUSE_ROLES}
        pend = tuple(new("P", j) for _ in range(p[j - 1]))
        edges += [(c["c1"], c["c2"]), (c["c2"], c["c3"]), (c["c2"], c["c4"])]
        edges += [(c["c2"], x) for x in pend]
        signs = {abs(x): x > 0 for x in f.clauses[j - 1]}
        for i, v in enumerate(var_nodes, 1):
            edges += [(c["c1"], v["T"]), (c["c1"], v["F"])]
            if i not in signs:
                edges += [(c["c3"], v["T"]), (c["c3"], v["F"])]
            elif signs[i]:
                edges.append((c["c3"], v["F"]))
            else:
                edges.append((c["c3"], v["T"]))
        clause_nodes.append(c)
        P.append(pend)
    g = build_graph(len(roles), edges)
    return GadgetGraph(f, g, tuple(roles), q, p, tuple(var_nodes), tuple(clause_nodes), tuple(Q), tuple(P))


def assignment_to_set(gg: GadgetGraph, assignment: Sequence[bool]) -> tuple[int, ...]:
    """Every pendant vertex plus ``a_i^1`` for true and ``b_i^1`` for false variables."""
    if len(assignment) != gg.formula.num_vars:
        raise ValueError(f"assignment has {len(assignment)} values, expected {gg.formula.num_vars}")
    chosen = [gg.var(i, "a1" if val else "b1") for i, val in enumerate(assignment, 1)]
    return tuple(sorted(gg.pendant + tuple(chosen)))


def _selectors(gg: GadgetGraph, S: Iterable[int]) -> list[str]:
    """The selector role chosen for each variable; raises if ``S`` is not structured."""
    S = set(int(v) for v in S)
    pendant = set(gg.pendant)
    if not pendant <= S:
        raise NotStructured("set misses some Q or P vertices")
    rest = S - pendant
    out = []
    for i in range(1, gg.formula.num_vars + 1):
        picked = [r for r in SELECTORS if gg.var(i, r) in rest]
        if len(picked) != 1:
            raise NotStructured(f"variable {i} has {len(picked)} of a1, a2, b1, b2 in the set")
        out.append(picked[0])
        rest.discard(gg.var(i, picked[0]))
    if rest:
        raise NotStructured(f"set holds {len(rest)} vertices outside the structured shape")
    return out


def set_to_assignment(gg: GadgetGraph, S: Iterable[int]) -> tuple[bool, ...]:
    """``x_i`` is true when ``a_i^1`` or ``a_i^2`` is in ``S``."""
    return tuple(r.startswith("a") for r in _selectors(gg, S))


def clause_separation_check(gg: GadgetGraph, S: Iterable[int], j: int) -> bool:
    """True when ``c_j^1`` and ``c_j^3`` get different multiset representations."""
    S = tuple(S)
    _selectors(gg, S)
    dm = gg.graph.distances
    return multiset_repr(dm, gg.clause(j, "c1"), S) != multiset_repr(dm, gg.clause(j, "c3"), S)


def clause_w(gg: GadgetGraph, S: Iterable[int], j: int) -> int:
    """Number of variables whose selected vertex sits at distance 2 from ``c_j^3``.

    A variable falls in this case unless it occurs positively with an ``a``
    vertex selected, or negatively with a ``b`` vertex selected.
    """
    picks = _selectors(gg, S)
    signs = {abs(x): x > 0 for x in gg.formula.clauses[j - 1]}
    w = 0
    for i, r in enumerate(picks, 1):
        satisfied = i in signs and signs[i] == r.startswith("a")
        w += not satisfied
    return w


def profile_violations(gg: GadgetGraph, S: Sequence[int]) -> list[str]:
    """Compare the representations under a structured ``S`` with their closed forms.

    Checks the printed prefix counts for every gadget vertex, the full
    profiles of ``c_j^1`` and ``c_j^3``, and that the only possible
    collisions among non-members are the pairs ``(c_j^1, c_j^3)``.  Returns
    a list of human-readable violations (empty when everything matches).
    """
    picks = _selectors(gg, S)
    S = sorted(set(int(v) for v in S))
    dm = gg.graph.distances
    hist = histogram_rows(dm, S)

    def prof(v: int, upto: int) -> tuple[int, ...]:
        row = hist[v, 1 : upto + 1]
        return tuple(int(x) for x in row) + (0,) * (upto - len(row))

    n = gg.formula.num_vars
    sq, sp = sum(gg.q), sum(gg.p)
    bad: list[str] = []

    def expect(label: str, got, want) -> None:
        if got != want:
            bad.append(f"{label}: got {got}, expected {want}")

    for i in range(1, n + 1):
        qi = gg.q[i - 1]
        expect(f"d1_{i}", prof(gg.var(i, "d1"), 1), (qi,))
        expect(f"d2_{i}", prof(gg.var(i, "d2"), 2), (0, qi))
        tf = {prof(gg.var(i, "T"), 2), prof(gg.var(i, "F"), 2)}
        expect(f"T_{i}/F_{i}", tf, {(1, qi), (0, qi + 1)})
        others = [r for r in SELECTORS if r != picks[i - 1]]
        got = sorted(prof(gg.var(i, r), 3) for r in others)
        expect(f"a/b_{i}", got, sorted([(1, 0, qi), (0, 1, qi), (0, 0, qi + 1)]))
    full = dm.diameter
    for j in range(1, gg.formula.num_clauses + 1):
        pj = gg.p[j - 1]
        expect(f"c4_{j}", prof(gg.clause(j, "c4"), 4), (0, pj, 0, n))
        expect(f"c2_{j}", prof(gg.clause(j, "c2"), 1), (pj,))
        tail = (0,) * max(0, full - 4)
        expect(f"c1_{j}", prof(gg.clause(j, "c1"), max(full, 4)), (0, pj + n, sq, sp - pj) + tail)
        w = clause_w(gg, S, j)
        expect(
            f"c3_{j}",
            prof(gg.clause(j, "c3"), max(full, 4)),
            (0, pj + w, sq + n - w, sp - pj) + tail,
        )
    # collisions among non-members
    members = np.zeros(gg.graph.n, dtype=bool)
    members[S] = True
    outside = np.flatnonzero(~members)
    _, inverse, counts = np.unique(hist[outside], axis=0, return_inverse=True, return_counts=True)
    allowed = {
        frozenset((gg.clause(j, "c1"), gg.clause(j, "c3")))
        for j in range(1, gg.formula.num_clauses + 1)
    }
    for k in np.flatnonzero(counts > 1):
        group = frozenset(int(v) for v in outside[np.asarray(inverse).ravel() == k])
        if group not in allowed:
            names = sorted(gg.role_name(v) for v in group)
            bad.append(f"unexpected collision {names}")
    return bad


def satisfying_assignment(f: CnfFormula) -> tuple[bool, ...] | None:
    """First satisfying assignment in truth-table order (all false first), or ``None``."""
    for bits in product((False, True), repeat=f.num_vars):
        if f.satisfied_by(bits):
            return bits
    return None


def structured_candidates(gg: GadgetGraph) -> tuple[list[tuple[str, ...]], np.ndarray]:
    """All ``4^n`` structured sets as sorted rows, with the selector choices that produced them."""
    n = gg.formula.num_vars
    choices = list(product(SELECTORS, repeat=n))
    base = np.array(gg.pendant, dtype=np.int64)
    rows = np.empty((len(choices), len(base) + n), dtype=np.int64)
    for k, pick in enumerate(choices):
        sel = [gg.var(i, r) for i, r in enumerate(pick, 1)]
        rows[k] = np.sort(np.concatenate([base, sel]))
    return choices, rows


@dataclass(frozen=True)
class VerificationReport:
    mode: str
    num_vars: int
    num_clauses: int
    order: int
    M: int
    satisfiable: bool
    structured_total: int
    structured_resolving: int
    resolving_assignments: int
    witness: tuple[int, ...] | None
    profiles_ok: bool
    separation_ok: bool
    outcomes: tuple[dict, ...] = field(repr=False, default=())
    dim_ms: int | None = None
    assumption: str = STRUCTURED_ASSUMPTION

    @property
    def structured_found(self) -> bool:
        return self.structured_resolving > 0

    @property
    def consistent(self) -> bool:
        """Structured verdict, profile checks and (in full mode) the exact dimension all agree."""
        ok = self.structured_found == self.satisfiable and self.profiles_ok and self.separation_ok
        if self.dim_ms is not None:
            ok = ok and (self.dim_ms == self.M) == self.satisfiable and self.dim_ms >= self.M
        return ok

    def to_json(self) -> dict:
        out = {
            "mode": self.mode,
            "num_vars": self.num_vars,
            "num_clauses": self.num_clauses,
            "order": self.order,
            "M": self.M,
            "satisfiable": self.satisfiable,
            "structured_total": self.structured_total,
            "structured_resolving": self.structured_resolving,
            "resolving_assignments": self.resolving_assignments,
            "witness": None if self.witness is None else [v + 1 for v in self.witness],
            "profiles_ok": self.profiles_ok,
            "separation_ok": self.separation_ok,
            "consistent": self.consistent,
            "assumption": self.assumption,
            "outcomes": list(self.outcomes),
        }
        if self.mode == "full":
            out["dim_ms"] = self.dim_ms
            out["dim_ms_equals_M"] = self.dim_ms == self.M
        return out


def verify_reduction(
    f: CnfFormula,
    mode: str = "structured",
    *,
    max_candidates: int | None = None,
    threads: int = 1,
) -> VerificationReport:
    """Sweep every structured set of the gadget graph and cross-check the encoding.

    ``full`` mode also computes the exact outer multiset dimension by
    exhaustive search, which is only practical for miniature formulas.
    """
    if mode not in ("structured", "full"):
        raise ValueError(f"mode must be 'structured' or 'full', got {mode!r}")
    gg = build_gadget_graph(f)
    dm = gg.graph.distances
    choices, rows = structured_candidates(gg)
    ok = BatchKernel(dm, Notion.OUTER_MULTISET, rows.shape[1])(rows)
    profiles_ok = separation_ok = True
    outcomes = []
    good_assignments = set()
    for pick, row, resolves in zip(choices, rows, ok):
        S = tuple(int(v) for v in row)
        assignment = tuple(r.startswith("a") for r in pick)
        truth = f.evaluate(assignment)
        separated = tuple(clause_separation_check(gg, S, j) for j in range(1, f.num_clauses + 1))
        if separated != truth:
            separation_ok = False
        if profile_violations(gg, S):
            profiles_ok = False
        if bool(resolves) != all(truth):
            separation_ok = False
        if resolves:
            good_assignments.add(assignment)
        outcomes.append(
            {
                "selectors": list(pick),
                "clauses_true": list(truth),
                "separated": list(separated),
                "resolving": bool(resolves),
            }
        )
    hits = np.flatnonzero(ok)
    witness = tuple(int(v) for v in rows[hits[0]]) if len(hits) else None
    dim_ms = None
    if mode == "full":
        from .solvers import dim_ms_exact

        dim_ms = dim_ms_exact(
            gg.graph, max_candidates=max_candidates, threads=threads, upper_hint=witness
        ).value
    return VerificationReport(
        mode=mode,
        num_vars=f.num_vars,
        num_clauses=f.num_clauses,
        order=gg.graph.n,
        M=gg.M,
        satisfiable=satisfying_assignment(f) is not None,
        structured_total=len(rows),
        structured_resolving=int(ok.sum()),
        resolving_assignments=len(good_assignments),
        witness=witness,
        profiles_ok=profiles_ok,
        separation_ok=separation_ok,
        outcomes=tuple(outcomes),
        dim_ms=dim_ms,
    )
