"""Exact brute-force reference solvers on fully enumerated path sets.

Everything here trades scale for trustworthiness: path sets are enumerated
exhaustively (with a hard cap), LPs are solved explicitly with all columns
in rational arithmetic, and no pricing or pruning is shared with the
production solvers they are used to check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import Arc, Budgets, Network, bottleneck_cost, id_key
from .lp import Column, PackingLP, solve_explicit
from .values import INF, is_inf, mul0

DEFAULT_PATH_CAP = 2000


class PathCapExceeded(ValueError):
    pass


def enumerate_paths(network: Network, terminal: tuple,
                    cap: int = DEFAULT_PATH_CAP) -> tuple:
    """All arc-simple s-t paths, depth-first, out-arcs in arc-id order.

    Paths may revisit nodes (including s and t mid-walk) but never an arc;
    every walk position at t yields a path.  Raises PathCapExceeded when
    more than ``cap`` paths exist.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    s, t = terminal
    found = []
    used = set()
    walk = []

    def visit(node):
        if node == t and walk:
            found.append(tuple(walk))
            if len(found) > cap:
                raise PathCapExceeded(
                    f"more than {cap} paths between {s!r} and {t!r}")
        for arc in sorted(network.out_arcs(node), key=lambda a: id_key(a.id)):
            if arc.id in used:
                continue
            used.add(arc.id)
            walk.append(arc.id)
            visit(arc.head)
            walk.pop()
            used.remove(arc.id)

    visit(s)
    return tuple(found)


@dataclass(frozen=True)
class PathUniverse:
    """Complete arc-simple path sets of an instance, one tuple per
    terminal pair, in terminal order."""
    paths_by_commodity: tuple
    cap: int

    @classmethod
    def build(cls, network: Network, cap: int = DEFAULT_PATH_CAP):
        per = tuple(
            enumerate_paths(network, term, cap) for term in network.terminals
        )
        return cls(per, cap)

    def all_paths(self) -> tuple:
        seen = {}
        for group in self.paths_by_commodity:
            for p in group:
                seen.setdefault(p, None)
        return tuple(seen)


def best_response_exact(flow, network: Network, budget,
                        universe: PathUniverse | None = None):
    """Interdictor's optimum against ``flow`` via the explicit fractional
    knapsack LP; returns the surviving value (ground truth for greedy)."""
    rows = {"budget": budget}
    columns = []
    total = 0
    for i, (path, x) in enumerate(sorted(flow.items())):
        if x <= 0:
            continue
        total += x
        cost = bottleneck_cost(path, network)
        if is_inf(cost):
            continue  # can never be stolen from
        rows[("cap", i)] = x
        columns.append(
            Column(("steal", i), 1, {"budget": cost, ("cap", i): 1})
        )
    result = solve_explicit(PackingLP(columns, rows))
    return total - result.objective


def _scaled_coefficient(path_bottleneck, c_f):
    """min(bottleneck/c_f, 1), with an infinite bottleneck mapping to 1."""
    if is_inf(path_bottleneck):
        return 1
    if path_bottleneck >= c_f:
        return 1
    return path_bottleneck / c_f


def _capacity_rows(network: Network) -> dict:
    return {arc.id: arc.capacity for arc in network.arcs}


def brute_force_rf(network: Network, budgets: Budgets,
                   universe: PathUniverse, *,
                   include_flow_budget: bool = False):
    """RF value by solving the per-breakpoint LP for every distinct finite
    positive arc cost on all enumerated columns, plus the infinite-cost
    regime (paths that cannot be attacked at all) and the empty flow."""
    paths = universe.all_paths()
    bottlenecks = {p: bottleneck_cost(p, network) for p in paths}
    rows = _capacity_rows(network)
    if include_flow_budget and budgets.flow_player is not None:
        rows["__B_F__"] = budgets.flow_player

    def column(path, coeff):
        coeffs = {e: 1 for e in path}
        if "__B_F__" in rows:
            load = sum(network.arc(e).gamma for e in path)
            if is_inf(load):
                return None  # can never carry flow under a finite budget
            coeffs["__B_F__"] = load
        return Column(path, coeff, coeffs)

    def lp_value(coeff_of, offset):
        columns = []
        for p in paths:
            col = column(p, coeff_of(p))
            if col is not None:
                columns.append(col)
        return solve_explicit(PackingLP(columns, rows, offset)).objective

    best = 0
    candidates = sorted(
        {a.cost for a in network.arcs if a.cost > 0 and not is_inf(a.cost)}
    )
    for c_f in candidates:
        value = lp_value(
            lambda p, c=c_f: _scaled_coefficient(bottlenecks[p], c),
            -budgets.interdictor / c_f,
        )
        if value > best:
            best = value
    if any(is_inf(b) for b in bottlenecks.values()):
        value = lp_value(lambda p: 1 if is_inf(bottlenecks[p]) else 0, 0)
        if value > best:
            best = value
    return best


def brute_force_design(network: Network, budgets: Budgets,
                       universe: PathUniverse):
    """Optimal design profit via the explicit path LP with weights
    1 - (B_I/B_F) * (total protection price along the path)."""
    if budgets.flow_player is None or not budgets.flow_player > 0:
        raise ValueError("design oracle needs a positive flow-player budget")
    ratio = budgets.interdictor / budgets.flow_player
    columns = []
    for path in universe.paths_by_commodity[0]:
        price = sum(network.arc(e).gamma for e in path)
        weight = mul0(ratio, price)
        if is_inf(weight):
            continue  # infinitely expensive to protect, never used
        columns.append(Column(path, 1 - weight, {e: 1 for e in path}))
    result = solve_explicit(PackingLP(columns, _capacity_rows(network)))
    return result.objective


# ---------------------------------------------------------------------------
# Seeded random instances for tests.  Values come from a small rational grid
# so that exact solves stay fast; the seed is the only source of randomness.

VALUE_GRID = (Fraction(1, 2), 1, 2, 3, 5, INF)
FINITE_GRID = (Fraction(1, 2), 1, 2, 3, 5)
INTEGER_GRID = (1, 2, 3, 5)
BUDGET_GRID = (0, Fraction(1, 2), 1, 2, 3, 5, 8)


def random_network(rng: random.Random, *, max_nodes=8, max_arcs=16,
                   capacities=FINITE_GRID, costs=VALUE_GRID,
                   gammas=None, n_commodities=1) -> Network:
    n = rng.randint(2, max_nodes)
    m = rng.randint(1, max_arcs)
    arcs = []
    for i in range(m):
        tail = rng.randrange(n)
        head = rng.randrange(n - 1)
        if head >= tail:
            head += 1  # no self-loops
        gamma = rng.choice(gammas) if gammas is not None else 0
        arcs.append(
            Arc(i, tail, head, rng.choice(capacities), rng.choice(costs),
                gamma)
        )
    terminals = []
    for _ in range(n_commodities):
        s = rng.randrange(n)
        t = rng.randrange(n - 1)
        if t >= s:
            t += 1
        terminals.append((s, t))
    terminals[0] = (0, n - 1) if n > 1 else terminals[0]
    return Network.from_arcs(arcs, terminals, extra_nodes=range(n))


def random_rf_instance(seed: int, *, max_nodes=8, max_arcs=16,
                       n_commodities=1, gammas=None,
                       cap=DEFAULT_PATH_CAP):
    """Seeded (network, budgets, universe) with at most ``cap`` paths;
    resamples (deterministically) when the path count explodes."""
    for attempt in range(64):
        rng = random.Random((seed, attempt))
        network = random_network(
            rng, max_nodes=max_nodes, max_arcs=max_arcs,
            gammas=gammas, n_commodities=n_commodities,
        )
        budgets = Budgets(rng.choice(BUDGET_GRID))
        try:
            universe = PathUniverse.build(network, cap)
        except PathCapExceeded:
            continue
        return network, budgets, universe
    raise RuntimeError(f"could not sample an instance for seed {seed}")


def random_budgeted_instance(seed: int, **kwargs):
    network, budgets, universe = random_rf_instance(
        seed, gammas=(0, Fraction(1, 2), 1, 2), **kwargs
    )
    rng = random.Random(("budget", seed))
    budgets = Budgets(budgets.interdictor, rng.choice((1, 2, 3, 5, 8)))
    return network, budgets, universe


def random_design_instance(seed: int, *, max_nodes=8, max_arcs=16,
                           cap=DEFAULT_PATH_CAP):
    """Design instances: integral capacities, no interdiction costs (they
    are the flow player's to choose), rational protection prices."""
    for attempt in range(64):
        rng = random.Random(("design", seed, attempt))
        network = random_network(
            rng, max_nodes=max_nodes, max_arcs=max_arcs,
            capacities=INTEGER_GRID, costs=(INF,),
            gammas=(0, Fraction(1, 2), 1, 2),
        )
        budgets = Budgets(rng.choice((0, 1, 2, 3)), rng.choice((1, 2, 3, 5, 8)))
        try:
            universe = PathUniverse.build(network, cap)
        except PathCapExceeded:
            continue
        return network, budgets, universe
    raise RuntimeError(f"could not sample an instance for seed {seed}")
