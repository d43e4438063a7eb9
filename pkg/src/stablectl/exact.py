"""Exhaustive ground-truth solver for every action/goal combination.

Candidate action sets are enumerated by increasing cardinality, and
lexicographically within one cardinality, so the reported optimum is the
true minimum and the witness is the smallest successful set in that
order.  The search refuses instances whose candidate count exceeds the
cap instead of truncating: answers are exact or absent, never
approximate.
"""

from __future__ import annotations

from itertools import combinations

from .control import (
    ControlOutcome,
    ControlQuery,
    action_universe,
    apply_actions,
    goal_holds,
    validate_query,
)
from .errors import CapExceededError, InvalidQueryError

DEFAULT_CANDIDATE_CAP = 20


def _sort_key(item):
    if isinstance(item, frozenset):
        return tuple(sorted(item))
    return (item,)


def candidate_actions(query: ControlQuery) -> list:
    """The individual actions available to the controller, in search order."""
    return sorted(action_universe(query), key=_sort_key)


def _first_success(query: ControlQuery, candidates: list, max_size: int):
    for size in range(0, max_size + 1):
        for combo in combinations(candidates, size):
            controlled = apply_actions(query, combo)
            if goal_holds(controlled, query.goal, action=query.action):
                return size, frozenset(combo)
    return None


def solve_exact(query: ControlQuery, cap: int = DEFAULT_CANDIDATE_CAP) -> ControlOutcome:
    """Solve a control query by exhaustive search.

    A positive verdict carries the minimum action count and its first
    witness.  A negative verdict still reports the minimum count at which
    the goal becomes reachable, when one exists at any budget, as a
    diagnostic.
    """
    problems = validate_query(query)
    if problems:
        raise InvalidQueryError("; ".join(problems))
    candidates = candidate_actions(query)
    if len(candidates) > cap:
        raise CapExceededError(
            f"{len(candidates)} candidate actions exceed the search cap of {cap}"
        )
    hit = _first_success(query, candidates, len(candidates))
    if hit is None:
        return ControlOutcome(verdict=False, optimum=None, witness=None)
    size, witness = hit
    if size <= query.budget:
        return ControlOutcome(verdict=True, optimum=size, witness=witness)
    return ControlOutcome(verdict=False, optimum=size, witness=None)


def min_control_cost(query: ControlQuery, cap: int = DEFAULT_CANDIDATE_CAP) -> int | None:
    """Smallest action count that reaches the goal, ignoring the budget."""
    return solve_exact(query, cap=cap).optimum
