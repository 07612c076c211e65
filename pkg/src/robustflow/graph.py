"""Graph, path and instance representations shared by all solvers.

A path is a plain tuple of arc ids (hashable, so it can key a path-flow
dict).  Paths may revisit nodes but never an arc.  A path flow is a plain
``dict`` mapping such tuples to nonnegative flow values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, Sequence

from .values import FLOAT_TOL, INF, is_exact, is_inf, to_exact, to_float, tol_for

ArcId = Hashable
NodeId = Hashable
Path = tuple  # tuple of arc ids
PathFlow = dict  # Path -> flow value


def id_key(x):
    """Sort key that tolerates mixed int/str id universes."""
    return (type(x).__name__, x)


@dataclass(frozen=True)
class Arc:
    id: ArcId
    tail: NodeId
    head: NodeId
    capacity: object
    cost: object = INF      # interdiction cost; INF = cannot be stolen from
    gamma: object = 0       # protection price; 0 = invulnerable/free


@dataclass(frozen=True)
class Budgets:
    interdictor: object                 # B_I
    flow_player: object | None = None   # B_F, absent unless budgeted/design

    def to_exact(self) -> "Budgets":
        fp = None if self.flow_player is None else to_exact(self.flow_player)
        return Budgets(to_exact(self.interdictor), fp)

    def to_float(self) -> "Budgets":
        fp = None if self.flow_player is None else to_float(self.flow_player)
        return Budgets(to_float(self.interdictor), fp)


@dataclass(frozen=True)
class Network:
    """Directed multigraph with per-arc capacity / interdiction cost /
    protection price, plus one or more (source, sink) terminal pairs.

    Immutable after construction; adjacency indexes are built eagerly.
    """

    nodes: frozenset
    arcs: tuple
    terminals: tuple
    _by_id: dict = field(init=False, repr=False, compare=False)
    _out: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        by_id = {}
        for arc in self.arcs:
            if arc.id in by_id:
                raise ValueError(f"duplicate arc id {arc.id!r}")
            by_id[arc.id] = arc
        out = {node: [] for node in self.nodes}
        for arc in self.arcs:
            if arc.tail in out:
                out[arc.tail].append(arc)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "_out", out)

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], terminals: Sequence[tuple],
                  extra_nodes: Iterable = ()) -> "Network":
        arcs = tuple(arcs)
        nodes = set(extra_nodes)
        for arc in arcs:
            nodes.add(arc.tail)
            nodes.add(arc.head)
        for s, t in terminals:
            nodes.add(s)
            nodes.add(t)
        return cls(frozenset(nodes), arcs, tuple(tuple(p) for p in terminals))

    def arc(self, arc_id) -> Arc:
        try:
            return self._by_id[arc_id]
        except KeyError:
            raise ValueError(f"unknown arc id {arc_id!r}") from None

    def has_arc(self, arc_id) -> bool:
        return arc_id in self._by_id

    def out_arcs(self, node) -> list:
        return self._out.get(node, [])

    def _map_values(self, fn) -> "Network":
        arcs = tuple(
            Arc(a.id, a.tail, a.head, fn(a.capacity), fn(a.cost), fn(a.gamma))
            for a in self.arcs
        )
        return Network(self.nodes, arcs, self.terminals)

    def to_exact(self) -> "Network":
        return self._map_values(to_exact)

    def to_float(self) -> "Network":
        return self._map_values(to_float)

    @property
    def exact(self) -> bool:
        return all(
            is_exact(v)
            for a in self.arcs
            for v in (a.capacity, a.cost, a.gamma)
        )

    def tolerance(self):
        return 0 if self.exact else FLOAT_TOL


def validate_instance(network: Network, budgets: Budgets | None = None) -> list:
    """Collect every structural violation; an empty list means the instance
    is well-formed."""
    problems = []
    for arc in network.arcs:
        if arc.tail not in network.nodes:
            problems.append(f"arc {arc.id!r}: unknown node {arc.tail!r}")
        if arc.head not in network.nodes:
            problems.append(f"arc {arc.id!r}: unknown node {arc.head!r}")
        if not arc.capacity >= 0:
            problems.append(f"arc {arc.id!r}: negative capacity")
        if not arc.cost >= 0:
            problems.append(f"arc {arc.id!r}: negative interdiction cost")
        if not arc.gamma >= 0:
            problems.append(f"arc {arc.id!r}: negative protection price")
    if not network.terminals:
        problems.append("no terminal pair")
    for s, t in network.terminals:
        if s not in network.nodes:
            problems.append(f"unknown source node {s!r}")
        if t not in network.nodes:
            problems.append(f"unknown sink node {t!r}")
        if s == t:
            problems.append(f"terminal pair has source == sink ({s!r})")
    if budgets is not None:
        if not budgets.interdictor >= 0:
            problems.append("negative interdictor budget")
        if budgets.flow_player is not None and not budgets.flow_player >= 0:
            problems.append("negative flow-player budget")
    return problems


def check_path(network: Network, path: Path) -> tuple:
    """Validate a path and return its (source, sink) terminal pair.

    A valid path is a head-to-tail chain of distinct arc ids starting at
    some terminal source and ending at the matching sink.
    """
    if not path:
        raise ValueError("empty path")
    if len(set(path)) != len(path):
        raise ValueError(f"path repeats an arc: {path!r}")
    arcs = [network.arc(e) for e in path]
    for prev, nxt in zip(arcs, arcs[1:]):
        if prev.head != nxt.tail:
            raise ValueError(
                f"arcs {prev.id!r} and {nxt.id!r} are not consecutive"
            )
    endpoints = (arcs[0].tail, arcs[-1].head)
    if endpoints not in network.terminals:
        raise ValueError(f"path endpoints {endpoints!r} match no terminal pair")
    return endpoints


def is_valid_path(network: Network, path: Path) -> bool:
    try:
        check_path(network, path)
        return True
    except ValueError:
        return False


def bottleneck_cost(path: Path, network: Network):
    """min over the path's arcs of the interdiction cost (the interdictor's
    per-unit price for stealing from this path)."""
    if not path:
        raise ValueError("empty path")
    return min(network.arc(e).cost for e in path)


def flow_value(flow: PathFlow):
    return sum(flow.values(), 0)


def arc_loads(flow: PathFlow) -> dict:
    loads = {}
    for path, amount in flow.items():
        for e in path:
            loads[e] = loads.get(e, 0) + amount
    return loads


def flow_violations(network: Network, flow: PathFlow, tol=None) -> list:
    """Capacity/cohesion violations of a path flow; empty list = feasible."""
    if tol is None:
        tol = network.tolerance()
    problems = []
    for path, amount in flow.items():
        if amount < -tol:
            problems.append(f"negative flow {amount} on path {path!r}")
        try:
            check_path(network, path)
        except ValueError as exc:
            problems.append(str(exc))
    for e, load in arc_loads(flow).items():
        cap = network.arc(e).capacity
        if load > cap + tol:
            problems.append(f"arc {e!r}: load {load} exceeds capacity {cap}")
    return problems


def decompose_flow(arc_flow: Mapping, network: Network, terminal: tuple,
                   tol=None) -> PathFlow:
    """Decompose a conserving arc flow into an s-t path flow.

    Flow on cycles is cancelled and dropped; the result routes the same net
    s-t value, never exceeds the input on any arc, uses at most |A| paths
    and is integral whenever the input is.  Raises on conservation or
    capacity violations.
    """
    s, t = terminal
    if tol is None:
        tol = network.tolerance()
    residual = {}
    balance = {}
    for e, amount in arc_flow.items():
        arc = network.arc(e)
        if amount < -tol:
            raise ValueError(f"negative arc flow on {e!r}")
        if amount > arc.capacity + tol:
            raise ValueError(f"arc flow on {e!r} exceeds capacity")
        if amount > tol:
            residual[e] = amount
            balance[arc.tail] = balance.get(arc.tail, 0) - amount
            balance[arc.head] = balance.get(arc.head, 0) + amount
    for node, net in balance.items():
        if node not in (s, t) and abs(net) > tol:
            raise ValueError(f"flow conservation violated at node {node!r}")

    def next_arc(node):
        best = None
        for arc in network.out_arcs(node):
            if residual.get(arc.id, 0) > tol:
                if best is None or id_key(arc.id) < id_key(best.id):
                    best = arc
        return best

    def cancel(segment):
        amount = min(residual[e] for e in segment)
        for e in segment:
            residual[e] -= amount
            if residual[e] <= tol:
                residual.pop(e)

    flow: PathFlow = {}
    guard = 4 * len(network.arcs) + 8
    while next_arc(s) is not None:
        guard -= 1
        if guard < 0:
            raise RuntimeError("flow decomposition failed to terminate")
        walk = []       # arc ids
        on_walk = {s: 0}  # node -> index into walk where it was entered
        node = s
        while node != t:
            arc = next_arc(node)
            if arc is None:
                # dead end can only be a rounding artifact in float mode
                raise ValueError(f"flow conservation violated at node {node!r}")
            walk.append(arc.id)
            node = arc.head
            if node in on_walk:
                # close and cancel the cycle, keep the prefix of the walk
                i = on_walk[node]
                cancel(walk[i:])
                walk = walk[:i]
                on_walk = {s: 0}
                for j, e in enumerate(walk):
                    on_walk[network.arc(e).head] = j + 1
            else:
                on_walk[node] = len(walk)
        path = tuple(walk)
        amount = min(residual[e] for e in path)
        for e in path:
            residual[e] -= amount
            if residual[e] <= tol:
                residual.pop(e)
        flow[path] = flow.get(path, 0) + amount
    return flow


def shortest_path(network: Network, source, target, weight_of,
                  allowed=None) -> tuple:
    """Dijkstra over arcs.  ``weight_of(arc)`` must be nonnegative; INF
    weights and arcs outside ``allowed`` are skipped.  Returns
    (distance, path tuple) with (INF, None) when unreachable.
    """
    import heapq

    dist = {source: 0}
    parent = {}
    seen = set()
    heap = [(0, 0, source)]
    counter = 1
    while heap:
        d, _, node = heapq.heappop(heap)
        if node in seen:
            continue
        seen.add(node)
        if node == target:
            break
        for arc in network.out_arcs(node):
            if allowed is not None and not allowed(arc):
                continue
            w = weight_of(arc)
            if is_inf(w):
                continue
            nd = d + w
            if arc.head not in dist or nd < dist[arc.head]:
                dist[arc.head] = nd
                parent[arc.head] = arc
                heapq.heappush(heap, (nd, counter, arc.head))
                counter += 1
    if target not in seen:
        return INF, None
    path = []
    node = target
    while node != source:
        arc = parent[node]
        path.append(arc.id)
        node = arc.tail
    path.reverse()
    return dist[target], tuple(path)
