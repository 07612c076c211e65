"""The interdictor's side of the game: greedy best response and the robust
value of a given path flow.

The interdictor steals flow from individual paths, paying the path's
bottleneck cost per unit (an attack always lands on a cheapest arc of the
path).  The optimal response to a fixed flow is greedy: attack flow-carrying
paths in order of non-decreasing bottleneck cost until the budget runs out.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Network, Path, PathFlow, bottleneck_cost, id_key
from .values import INF, is_inf, mul0


@dataclass(frozen=True)
class InterdictionPlan:
    steals: dict           # (arc id, Path) -> stolen amount
    spent_budget: object


@dataclass(frozen=True)
class SurvivingFlow:
    entries: dict          # Path -> surviving amount
    total_value: object


def robust_value(flow: PathFlow, plan: InterdictionPlan) -> SurvivingFlow:
    """Apply an interdiction plan to a flow: per path, amounts stolen are
    subtracted and the remainder is clamped at zero."""
    stolen = {}
    for (arc_id, path), amount in plan.steals.items():
        if arc_id not in path:
            raise ValueError(
                f"plan steals on arc {arc_id!r} outside path {path!r}")
        if amount < 0:
            raise ValueError("negative stolen amount")
        stolen[path] = stolen.get(path, 0) + amount
    entries = {}
    total = 0
    for path, x in flow.items():
        survives = x - stolen.pop(path, 0)
        if survives < 0:
            survives = 0
        entries[path] = survives
        total += survives
    for path in stolen:
        if path not in flow:
            entries[path] = 0
    return SurvivingFlow(entries, total)


def greedy_best_response(flow: PathFlow, network: Network, budget,
                         order=None) -> InterdictionPlan:
    """Optimal interdiction of ``flow`` under ``budget``.

    Paths are processed by non-decreasing bottleneck cost (ties broken
    lexicographically on arc-id sequences) and attacked entirely on their
    cheapest arc; the last path touched may be stolen only fractionally.
    Paths with infinite bottleneck cost are never attacked.  ``order``
    overrides the processing order (used to exercise tie invariance).
    """
    if order is None:
        order = sorted(
            (p for p, x in flow.items() if x > 0),
            key=lambda p: (bottleneck_cost(p, network),
                           tuple(id_key(e) for e in p)),
        )
    steals = {}
    spent = 0
    remaining = budget
    for path in order:
        x = flow.get(path, 0)
        if x <= 0:
            continue
        cost = bottleneck_cost(path, network)
        if is_inf(cost):
            continue
        if cost == 0:
            amount = x
        else:
            if remaining <= 0:
                break
            affordable = remaining / cost
            amount = x if x <= affordable else affordable
        if amount <= 0:
            continue
        target = min(
            (e for e in path if network.arc(e).cost == cost), key=id_key
        )
        steals[(target, path)] = steals.get((target, path), 0) + amount
        price = cost * amount
        spent += price
        remaining -= price
    return InterdictionPlan(steals, spent)


def interdiction_cost_of_flow(flow: PathFlow, network: Network):
    """Cost of stealing the entire flow: sum of bottleneck cost times flow
    over flow-carrying paths (INF as soon as one of them is unstealable)."""
    total = 0
    for path, x in flow.items():
        if x > 0:
            term = mul0(bottleneck_cost(path, network), x)
            if is_inf(term):
                return INF
            total += term
    return total


def plan_violations(plan: InterdictionPlan, network: Network, budget,
                    tol=None) -> list:
    """Feasibility check of a plan against the interdictor budget."""
    if tol is None:
        tol = network.tolerance()
    problems = []
    cost = 0
    for (arc_id, path), amount in plan.steals.items():
        if amount < -tol:
            problems.append(f"negative steal on arc {arc_id!r}")
        if arc_id not in path:
            problems.append(f"steal on arc {arc_id!r} outside path {path!r}")
        term = mul0(network.arc(arc_id).cost, amount)
        if is_inf(term):
            problems.append(f"steal on arc {arc_id!r} with infinite cost")
            cost = INF
        elif not is_inf(cost):
            cost += term
    if cost > budget + tol:
        problems.append(f"plan cost {cost} exceeds budget {budget}")
    return problems
