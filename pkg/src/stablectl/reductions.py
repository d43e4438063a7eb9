"""Graph-to-control-instance constructions, with brute-force graph oracles.

Three generators turn a graph problem into a concrete control query:

* :func:`clique_to_csm_addag`: clique detection becomes agent addition
  on a marriage market, with goal ``ma`` (match a distinguished woman) or
  ``epsm`` (perfect stable matching) and budget ``k + C(k, 2)``.
* :func:`is_to_csr_addag_ms`: independent set becomes agent addition on
  a roommates market with a matching goal and budget ``2|V| - k``.
* :func:`is_to_csr_addag_existssm`: independent set becomes agent
  addition with goal ``esm`` or ``epsm`` and budget ``k``.

Whenever a preference list contains a set of agents rather than a single
one, the set is laid out in lexicographic identifier order; the
constructions are correct for any fixed order.  Each result carries a
name map from gadget role to generated agent identifier so reduced
instances stay debuggable.

:func:`brute_clique` and :func:`brute_independent_set` decide the source
problems exhaustively at small scale, for round-trip validation of the
constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .control import ControlGoal, ControlQuery
from .errors import CapExceededError, ParseError
from .model import (
    Pair,
    SM,
    SR,
    make_instance,
    _ID_RE,
    _content_lines,
)

BRUTE_VERTEX_CAP = 12


@dataclass(frozen=True)
class UndirectedGraph:
    vertices: frozenset
    edges: frozenset

    @cached_property
    def _adjacency(self) -> dict:
        nbrs = {v: set() for v in self.vertices}
        for e in self.edges:
            u, v = e
            nbrs[u].add(v)
            nbrs[v].add(u)
        return nbrs

    def neighbors(self, v: str) -> frozenset:
        return frozenset(self._adjacency[v])


def make_graph(vertices, edges) -> UndirectedGraph:
    vs = frozenset(vertices)
    es = set()
    for e in edges:
        u, v = tuple(e)
        if u == v:
            raise ValueError(f"self-loop at {u!r}")
        if u not in vs or v not in vs:
            raise ValueError(f"edge {u!r},{v!r} uses an unknown vertex")
        es.add(frozenset((u, v)))
    return UndirectedGraph(vertices=vs, edges=frozenset(es))


def parse_graph(text: str) -> UndirectedGraph:
    """Parse ``vertices v1 v2 ...`` and ``edge u v`` lines."""
    vertices: list[str] = []
    edges: list[tuple[str, str]] = []
    for lineno, line in _content_lines(text):
        tokens = line.split()
        if tokens[0] == "vertices":
            for tok in tokens[1:]:
                if not _ID_RE.match(tok):
                    raise ParseError(f"invalid vertex name {tok!r}", lineno)
                vertices.append(tok)
        elif tokens[0] == "edge":
            if len(tokens) != 3:
                raise ParseError("expected 'edge <u> <v>'", lineno)
            edges.append((tokens[1], tokens[2]))
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    try:
        return make_graph(vertices, edges)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def serialize_graph(graph: UndirectedGraph) -> str:
    lines = []
    if graph.vertices:
        lines.append("vertices " + " ".join(sorted(graph.vertices)))
    for u, v in sorted(tuple(sorted(e)) for e in graph.edges):
        lines.append(f"edge {u} {v}")
    return "\n".join(lines) + ("\n" if lines else "")


def brute_clique(graph: UndirectedGraph, k: int, cap: int = BRUTE_VERTEX_CAP) -> bool:
    """Does the graph contain a complete subgraph on at least ``k`` vertices?"""
    if len(graph.vertices) > cap:
        raise CapExceededError(f"graph exceeds the brute-force cap of {cap} vertices")
    if k <= 0:
        return True
    if k > len(graph.vertices):
        return False
    for combo in combinations(sorted(graph.vertices), k):
        if all(frozenset(p) in graph.edges for p in combinations(combo, 2)):
            return True
    return False


def brute_independent_set(graph: UndirectedGraph, k: int, cap: int = BRUTE_VERTEX_CAP) -> bool:
    """Does the graph contain ``k`` pairwise non-adjacent vertices?"""
    if len(graph.vertices) > cap:
        raise CapExceededError(f"graph exceeds the brute-force cap of {cap} vertices")
    if k <= 0:
        return True
    if k > len(graph.vertices):
        return False
    for combo in combinations(sorted(graph.vertices), k):
        if not any(frozenset(p) in graph.edges for p in combinations(combo, 2)):
            return True
    return False


@dataclass(frozen=True)
class ReductionResult:
    """A generated control query plus the gadget-role-to-agent name map."""

    query: ControlQuery
    name_map: dict


def _edge_token(e: Pair) -> str:
    u, v = sorted(e)
    return f"{u}-{v}"


def _check_k(graph: UndirectedGraph, k: int) -> None:
    if k < 0 or k > len(graph.vertices):
        raise ValueError(f"k must lie between 0 and the vertex count, got {k}")


def _freeze_names(name_map: dict) -> None:
    ids = list(name_map.values())
    if len(set(ids)) != len(ids):
        raise ValueError("vertex names collide under the gadget naming scheme")


def clique_to_csm_addag(graph: UndirectedGraph, k: int, goal_kind: str = "ma") -> ReductionResult:
    """Clique detection as control by adding men to a marriage market.

    Women: one per vertex, one per edge, ``C(k, 2)`` selectors, and a
    distinguished woman.  Men: an addable partner per vertex, a base man
    and an addable partner per edge, ``|V| - k`` dummies, and a
    distinguished man.  A clique of size ``k`` exists exactly when adding
    ``k + C(k, 2)`` men lets the distinguished woman marry (equivalently,
    makes a perfect stable matching possible).
    """
    if goal_kind not in ("ma", "epsm"):
        raise ValueError("goal must be 'ma' or 'epsm'")
    _check_k(graph, k)
    vs = sorted(graph.vertices)
    es = sorted(graph.edges, key=_edge_token)
    selectors = [f"s_{i}" for i in range(1, k * (k - 1) // 2 + 1)]
    dummies = [f"d_{j}" for j in range(1, len(vs) - k + 1)]
    name_map = {"w*": "wstar", "m*": "mstar"}
    for v in vs:
        name_map[f"w_v({v})"] = f"wv_{v}"
        name_map[f"m'_v({v})"] = f"mv'_{v}"
    for e in es:
        t = _edge_token(e)
        name_map[f"w_e({t})"] = f"we_{t}"
        name_map[f"m_e({t})"] = f"me_{t}"
        name_map[f"m'_e({t})"] = f"me'_{t}"
    for i, s in enumerate(selectors, start=1):
        name_map[f"s({i})"] = s
    for j, d in enumerate(dummies, start=1):
        name_map[f"d({j})"] = d
    _freeze_names(name_map)

    wv = {v: f"wv_{v}" for v in vs}
    mv = {v: f"mv'_{v}" for v in vs}
    we = {e: f"we_{_edge_token(e)}" for e in es}
    me = {e: f"me_{_edge_token(e)}" for e in es}
    me_prime = {e: f"me'_{_edge_token(e)}" for e in es}
    all_me = [me[e] for e in es]

    prefs: dict[str, tuple] = {}
    prefs["mstar"] = tuple(selectors) + ("wstar",)
    prefs["wstar"] = ("mstar",)
    for s in selectors:
        prefs[s] = tuple(all_me) + ("mstar",)
    for e in es:
        u, v = sorted(e)
        prefs[me[e]] = (we[e], wv[u], wv[v]) + tuple(selectors)
        prefs[we[e]] = (me_prime[e], me[e])
        prefs[me_prime[e]] = (we[e],)
    for v in vs:
        incident = [me[e] for e in es if v in e]
        prefs[wv[v]] = (mv[v],) + tuple(incident) + tuple(dummies)
        prefs[mv[v]] = (wv[v],)
    for d in dummies:
        prefs[d] = tuple(wv[v] for v in vs)

    women = {"wstar", *wv.values(), *we.values(), *selectors}
    side = {agent: ("a" if agent in women else "b") for agent in prefs}
    addable = frozenset(mv.values()) | frozenset(me_prime.values())
    inst = make_instance(SM, prefs, side=side, addable=addable)
    goal = ControlGoal.ma("wstar") if goal_kind == "ma" else ControlGoal.epsm()
    budget = k + k * (k - 1) // 2
    return ReductionResult(
        query=ControlQuery(instance=inst, action="addag", goal=goal, budget=budget),
        name_map=name_map,
    )


def is_to_csr_addag_ms(graph: UndirectedGraph, k: int) -> ReductionResult:
    """Independent set as control by adding agents under a matching goal.

    Every vertex contributes three agents and their addable copies; the
    target matching pairs each agent with its copy.  Copies of adjacent
    vertices find each other acceptable, so a cheap addition set exists
    exactly when the graph has an independent set of size ``k``.
    """
    _check_k(graph, k)
    vs = sorted(graph.vertices)
    name_map = {}
    for v in vs:
        for role in ("a", "b", "c"):
            name_map[f"{role}({v})"] = f"{role}_{v}"
            name_map[f"{role}'({v})"] = f"{role}'_{v}"
    _freeze_names(name_map)

    prefs: dict[str, tuple] = {}
    for v in vs:
        a, b, c = f"a_{v}", f"b_{v}", f"c_{v}"
        ap, bp, cp = f"a'_{v}", f"b'_{v}", f"c'_{v}"
        adjacent_copies = tuple(f"a'_{u}" for u in sorted(graph.neighbors(v)))
        prefs[a] = (ap, b, c)
        prefs[ap] = adjacent_copies + (a,)
        prefs[b] = (bp, a)
        prefs[bp] = (b,)
        prefs[c] = (cp, a)
        prefs[cp] = (c,)

    addable = frozenset(f"{role}'_{v}" for v in vs for role in ("a", "b", "c"))
    inst = make_instance(SR, prefs, addable=addable)
    matching = frozenset(
        frozenset((f"{role}_{v}", f"{role}'_{v}")) for v in vs for role in ("a", "b", "c")
    )
    return ReductionResult(
        query=ControlQuery(
            instance=inst,
            action="addag",
            goal=ControlGoal.ms(matching),
            budget=2 * len(vs) - k,
        ),
        name_map=name_map,
    )


def is_to_csr_addag_existssm(
    graph: UndirectedGraph, k: int, goal_kind: str = "esm"
) -> ReductionResult:
    """Independent set as control by adding agents under an existence goal.

    The original market holds ``k`` triples with circular preferences, so
    no stable matching exists until ``k`` pairwise non-adjacent vertices
    are added; any stable matching of a successful addition is perfect,
    so the same instance serves the perfect-existence goal.
    """
    if goal_kind not in ("esm", "epsm"):
        raise ValueError("goal must be 'esm' or 'epsm'")
    _check_k(graph, k)
    vs = sorted(graph.vertices)
    name_map = {}
    for v in vs:
        name_map[f"vertex({v})"] = v
    for i in range(1, k + 1):
        name_map[f"s({i})"] = f"s_{i}"
        name_map[f"a({i})"] = f"ai_{i}"
        name_map[f"b({i})"] = f"bi_{i}"
    _freeze_names(name_map)

    selectors = [f"s_{i}" for i in range(1, k + 1)]
    prefs: dict[str, tuple] = {}
    for v in vs:
        prefs[v] = tuple(sorted(graph.neighbors(v))) + tuple(selectors)
    for i in range(1, k + 1):
        s, a, b = f"s_{i}", f"ai_{i}", f"bi_{i}"
        prefs[s] = tuple(vs) + (a, b)
        prefs[a] = (b, s)
        prefs[b] = (s, a)

    inst = make_instance(SR, prefs, addable=frozenset(vs))
    goal = ControlGoal.esm() if goal_kind == "esm" else ControlGoal.epsm()
    return ReductionResult(
        query=ControlQuery(instance=inst, action="addag", goal=goal, budget=k),
        name_map=name_map,
    )
