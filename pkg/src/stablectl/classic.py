"""Classical matching subroutines: proposal algorithms and stable partitions.

Three entry points:

* :func:`gale_shapley`: deferred acceptance for marriage instances,
  optimal for the proposing side.
* :func:`tan_stable_partition`: a stable partition for any roommates
  instance.  A stable partition is a permutation of the agents whose
  cycles ("parties") generalise stable matchings; one always exists, and
  the instance admits a stable matching exactly when no party of odd size
  three or more is present.
* :func:`irving_stable_matching`: stable matching existence and a
  witness, implemented on top of the partition engine: pair up the
  parties when no odd party of size >= 3 exists.

The partition engine runs the classical proposal ("phase 1") table
reduction followed by repeated rotation elimination.  When a rotation's
two agent tracks coincide as sets, eliminating it would wipe the table;
that configuration is exactly an odd party and is locked in place
instead.  Every output is a valid partition; callers that need hard
guarantees (the polynomial control solvers) re-verify the axioms on the
results they act on.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import InternalError
from .model import AgentId, Matching, RoommatesInstance, SM

# ---------------------------------------------------------------------------
# Stable partitions


@dataclass(frozen=True)
class StablePartition:
    """A permutation of the agents; each cycle is a party.

    ``successor`` maps every agent to the next member of its party, with
    fixed points for singleton parties.  Within a party of size >= 3 each
    agent prefers its successor to its predecessor.
    """

    successor: dict

    @cached_property
    def predecessor(self) -> dict:
        return {v: u for u, v in self.successor.items()}

    @cached_property
    def parties(self) -> tuple:
        """Cycle decomposition; each cycle starts at its smallest member."""
        done = set()
        out = []
        for start in sorted(self.successor):
            if start in done:
                continue
            cycle = [start]
            done.add(start)
            nxt = self.successor[start]
            while nxt != start:
                cycle.append(nxt)
                done.add(nxt)
                nxt = self.successor[nxt]
            out.append(tuple(cycle))
        return tuple(sorted(out))

    def odd_parties(self, min_size: int = 3) -> tuple:
        return tuple(p for p in self.parties if len(p) % 2 == 1 and len(p) >= min_size)

    @cached_property
    def singletons(self) -> frozenset:
        return frozenset(u for u, v in self.successor.items() if u == v)


def render_partition(partition: StablePartition) -> str:
    """One ``party (a b c) odd`` line per party, odd sizes marked."""
    lines = []
    for p in partition.parties:
        mark = " odd" if len(p) % 2 == 1 else ""
        lines.append(f"party ({' '.join(p)}){mark}")
    return "\n".join(lines) + ("\n" if lines else "")


def validate_partition(inst: RoommatesInstance, partition: StablePartition) -> list[str]:
    """Check the stable-partition axioms; return violation descriptions."""
    succ = partition.successor
    out: list[str] = []
    if set(succ) != set(inst.agents):
        out.append("successor map does not cover exactly the instance agents")
        return out
    if set(succ.values()) != set(inst.agents):
        out.append("successor map is not a permutation")
        return out
    pred = partition.predecessor
    for u in sorted(inst.agents):
        s = succ[u]
        if s != u and not inst.acceptable(u, s):
            out.append(f"successor of {u} is the unacceptable agent {s}")
    if out:
        return out
    for u in sorted(inst.agents):
        s, p = succ[u], pred[u]
        if s != u and s != p and not inst.prefers(u, s, p):
            out.append(f"{u} prefers its predecessor {p} to its successor {s}")

    def beats_predecessor(u: AgentId, v: AgentId) -> bool:
        # A fixed point ranks below every acceptable agent.
        return pred[u] == u or inst.prefers(u, v, pred[u])

    for q in sorted(inst.acceptable_pairs, key=lambda q: tuple(sorted(q))):
        u, v = sorted(q)
        if succ[u] == v or succ[v] == u:
            continue
        if beats_predecessor(u, v) and beats_predecessor(v, u):
            out.append(f"pair {u},{v} blocks the partition")
    return out


def partition_to_matching(
    inst: RoommatesInstance, partition: StablePartition
) -> tuple[frozenset, Matching]:
    """Turn a partition into a stable matching after minimal deletions.

    One agent (the lexicographically smallest) is removed from every odd
    party of size >= 3; the remaining members of each party are paired up
    consecutively.  Singleton parties stay unmatched.  Returns the deleted
    agents and the matching, which is stable in ``inst`` minus the deleted
    agents.
    """
    violations = validate_partition(inst, partition)
    if violations:
        raise ValueError("invalid partition: " + "; ".join(violations))
    deleted = set()
    pairs = set()
    for party in partition.parties:
        if len(party) == 1:
            continue
        members = list(party)
        if len(members) % 2 == 1:
            drop = min(members)
            deleted.add(drop)
            i = members.index(drop)
            members = members[i + 1 :] + members[:i]
        for i in range(0, len(members), 2):
            pairs.add(frozenset((members[i], members[i + 1])))
    return frozenset(deleted), frozenset(pairs)


# ---------------------------------------------------------------------------
# Deferred acceptance (marriage instances)


def gale_shapley(inst: RoommatesInstance, proposing: str = "a") -> Matching:
    """Deferred acceptance; returns the proposing-side-optimal matching."""
    if inst.kind != SM:
        raise ValueError("gale_shapley needs a marriage instance")
    if proposing not in ("a", "b"):
        raise ValueError("proposing side must be 'a' or 'b'")
    proposers = sorted(u for u in inst.agents if inst.side[u] == proposing)
    nxt = {u: 0 for u in proposers}
    engaged: dict[AgentId, AgentId] = {}  # reviewer -> proposer
    free = list(reversed(proposers))
    while free:
        u = free.pop()
        while nxt[u] < len(inst.prefs[u]):
            v = inst.prefs[u][nxt[u]]
            nxt[u] += 1
            cur = engaged.get(v)
            if cur is None:
                engaged[v] = u
                break
            if inst.prefers(v, u, cur):
                engaged[v] = u
                free.append(cur)
                break
        # List exhausted: u stays unmatched.
    return frozenset(frozenset((u, v)) for v, u in engaged.items())


# ---------------------------------------------------------------------------
# The proposal/rotation engine behind stable partitions


class _Table:
    """Mutable reduced preference table with proposal bookkeeping.

    ``alive`` holds the surviving entries of each preference list; pairs
    are always removed from both sides.  ``holder[v]`` is the agent whose
    proposal ``v`` currently holds.  The stable-table invariant, restored
    by :meth:`stabilize`, is that every agent with a non-empty list
    proposes to the head of its list and holds a proposal from its tail.
    """

    def __init__(self, inst: RoommatesInstance, order: Sequence[AgentId]):
        self.inst = inst
        self.order = list(order)
        self.pref = inst.prefs
        self.rank = inst._ranks
        self.alive = {u: set(inst.prefs[u]) for u in self.order}
        self.holder: dict[AgentId, AgentId | None] = {u: None for u in self.order}
        self.locked: set[AgentId] = set()
        self.parties: list[tuple[AgentId, ...]] = []

    # -- list access ----------------------------------------------------

    def first(self, u: AgentId) -> AgentId:
        alive = self.alive[u]
        return next(v for v in self.pref[u] if v in alive)

    def second(self, u: AgentId) -> AgentId:
        alive = self.alive[u]
        it = (v for v in self.pref[u] if v in alive)
        next(it)
        return next(it)

    def last(self, u: AgentId) -> AgentId:
        alive = self.alive[u]
        return next(v for v in reversed(self.pref[u]) if v in alive)

    def delete(self, u: AgentId, v: AgentId) -> None:
        self.alive[u].discard(v)
        self.alive[v].discard(u)
        if self.holder.get(u) == v:
            self.holder[u] = None
        if self.holder.get(v) == u:
            self.holder[v] = None

    # -- proposal rounds -------------------------------------------------

    def _needs_proposal(self, u: AgentId) -> bool:
        if u in self.locked or not self.alive[u]:
            return False
        return self.holder[self.first(u)] != u

    def stabilize(self) -> None:
        """Run proposals until every non-empty list is head-held and tail-holding."""
        while True:
            pending = [u for u in self.order if self._needs_proposal(u)]
            if not pending:
                break
            for u in pending:
                while self.alive[u]:
                    v = self.first(u)
                    if self.holder[v] == u:
                        break
                    h = self.holder[v]
                    if h is None or self.rank[v][u] < self.rank[v][h]:
                        self.holder[v] = u
                        cut = self.rank[v][u]
                        for w in [w for w in self.alive[v] if self.rank[v][w] > cut]:
                            self.delete(v, w)
                        break
                    self.delete(u, v)
        self._check_consistency()

    def _check_consistency(self) -> None:
        for u in self.order:
            if u in self.locked or not self.alive[u]:
                continue
            f = self.first(u)
            if self.holder[f] != u or self.last(f) != u:
                raise InternalError(f"proposal table inconsistent at agent {u}")

    # -- rotations --------------------------------------------------------

    def find_rotation(self, start: AgentId) -> tuple[list, list]:
        seq: list[AgentId] = []
        index: dict[AgentId, int] = {}
        x = start
        while x not in index:
            index[x] = len(seq)
            seq.append(x)
            x = self.last(self.second(x))
        xs = seq[index[x]:]
        ys = [self.first(x) for x in xs]
        return xs, ys

    def eliminate(self, xs: list, ys: list) -> None:
        """Classical rotation elimination, applied as one symmetric batch."""
        r = len(xs)
        deletions = []
        for i in range(r):
            v = ys[(i + 1) % r]
            cut = self.rank[v][xs[i]]
            deletions.extend((v, w) for w in self.alive[v] if self.rank[v][w] > cut)
        for v, w in deletions:
            self.delete(v, w)

    def lock_odd_parties(self, xs: list) -> bool:
        """Lock the odd cycles of the head map over ``xs`` as parties.

        A self-paired rotation decomposes into cycles of the map sending
        each member to the head of its list.  Odd cycles are odd parties:
        eliminating them would empty their lists, so they are frozen in
        place and taken out of the table.  Even cycles stay; ordinary
        elimination resolves them into pairs.  Returns whether any party
        was locked.
        """
        succ = {x: self.first(x) for x in xs}
        if set(succ.values()) != set(xs):
            raise InternalError("self-paired rotation is not closed under heads")
        remaining = set(xs)
        locked_members: list[AgentId] = []
        while remaining:
            start = min(remaining)
            cycle = [start]
            nxt = succ[start]
            while nxt != start:
                cycle.append(nxt)
                nxt = succ[nxt]
            remaining -= set(cycle)
            if len(cycle) % 2 == 1:
                if len(cycle) < 3:
                    raise InternalError("head map cannot have fixed points")
                self.parties.append(tuple(cycle))
                locked_members.extend(cycle)
        for x in locked_members:
            for w in list(self.alive[x]):
                self.delete(x, w)
            self.locked.add(x)
        return bool(locked_members)

    # -- main loop ---------------------------------------------------------

    def run(self) -> StablePartition:
        self.stabilize()
        while True:
            start = next(
                (u for u in self.order if u not in self.locked and len(self.alive[u]) >= 2),
                None,
            )
            if start is None:
                break
            xs, ys = self.find_rotation(start)
            if not (set(xs) == set(ys) and self.lock_odd_parties(xs)):
                self.eliminate(xs, ys)
            self.stabilize()
        return self._assemble()

    def _assemble(self) -> StablePartition:
        succ: dict[AgentId, AgentId] = {}
        for party in self.parties:
            for i, u in enumerate(party):
                succ[u] = party[(i + 1) % len(party)]
        for u in self.order:
            if u in self.locked:
                continue
            if not self.alive[u]:
                succ[u] = u
                continue
            v = self.first(u)
            if self.first(v) != u:
                raise InternalError(f"non-mutual residual pair at agent {u}")
            succ[u] = v
        return StablePartition(successor=succ)


def tan_stable_partition(
    inst: RoommatesInstance, order: Iterable[AgentId] | None = None
) -> StablePartition:
    """Compute a stable partition of ``inst``.

    ``order`` fixes the internal processing priority and defaults to the
    sorted agent list; the partition returned may depend on it, but the
    multiset of odd parties never does.
    """
    if order is None:
        order = sorted(inst.agents)
    else:
        order = list(order)
        if set(order) != set(inst.agents) or len(order) != len(inst.agents):
            raise ValueError("order must be a permutation of the instance agents")
    return _Table(inst, order).run()


def irving_stable_matching(inst: RoommatesInstance) -> Matching | None:
    """Some stable matching of ``inst``, or ``None`` when none exists."""
    partition = tan_stable_partition(inst)
    if partition.odd_parties():
        return None
    deleted, matching = partition_to_matching(inst, partition)
    if deleted:
        raise InternalError("partition without odd parties required deletions")
    return matching
