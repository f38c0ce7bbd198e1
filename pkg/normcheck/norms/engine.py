"""
Execution of ground acts over states, trace runs, bounded state space exploration and stuck duty detection.
"""
import logging
from multiprocessing.pool import ThreadPool
from typing import Optional

import networkx as nx

from normcheck.config import Limits, resolve_cap
from normcheck.exceptions import ParameterValueError, PreconditionViolated, ResourceLimitExceeded
from normcheck.models import ConflictReport, Event, EventKind, Outcome, RunResult
from normcheck.norms.core import (DutyInstance, DutyStatus, GroundAct, GroundModel, State, duty_binding, eval_formula,
                                  substitute)
from normcheck.utils.annotations import Dict, List, Tuple

logger = logging.getLogger("normcheck")

# the order in which a performed act touches the duties it plays a role for
DUTY_EFFECTS = (
    ("terminated-by", DutyStatus.TERMINATED, EventKind.DUTY_TERMINATED),
    ("enforced-by", DutyStatus.ENFORCED, EventKind.DUTY_ENFORCED)
)


def enabled(ground: GroundModel, state: State, act: GroundAct) -> bool:
    """
    Returns True if the precondition of `act` holds in `state`

    Raises
    ------
        UnknownSymbol
            If the act's frame does not exist in the model.
    """
    frame = ground.act_frame(act.frame)
    return eval_formula(ground, state, substitute(frame.precondition, act.binding_dict()))


def apply(ground: GroundModel, state: State, act: GroundAct, step: int = 0) -> Tuple[State, List[Event]]:
    """
    Performs `act` in `state`

    Terminations are applied before creations, so an act which both terminates and
    creates the same fact leaves it true. Only actual changes produce events.

    Parameters
    ----------
        ground: GroundModel
        state: State
        act: GroundAct
        step: int, default = 0
            The trace position recorded on the events.

    Returns
    -------
        tuple
            (the next state, the events in the order they happened)

    Raises
    ------
        PreconditionViolated
            If `act` is not enabled in `state`.
    """
    if not enabled(ground, state, act):
        raise PreconditionViolated(act, state)
    frame = ground.act_frame(act.frame)
    binding = act.binding_dict()
    events = [Event(EventKind.ACT_PERFORMED, str(act), step)]

    facts = set(state.facts)
    for atom in frame.terminates:
        fact = substitute(atom, binding)
        if fact in facts:
            facts.remove(fact)
            events.append(Event(EventKind.FACT_TERMINATED, str(fact), step))
    for atom in frame.creates:
        fact = substitute(atom, binding)
        if fact not in facts:
            facts.add(fact)
            events.append(Event(EventKind.FACT_CREATED, str(fact), step))

    duties: Dict[tuple, DutyInstance] = {duty.identity: duty for duty in state.duties}
    for role, status, kind in DUTY_EFFECTS:
        for duty_frame in ground.duty_frame_roles(frame.name, role):
            identity = (duty_frame.name, duty_binding(duty_frame, frame, binding))
            current = duties.get(identity)
            if current is not None and current.active:
                duties[identity] = current.with_status(status)
                events.append(Event(kind, str(current), step))
    for duty_frame in ground.duty_frame_roles(frame.name, "created-by"):
        identity = (duty_frame.name, duty_binding(duty_frame, frame, binding))
        current = duties.get(identity)
        if current is None or not current.active:
            # a terminated or enforced instance comes back to life
            duties[identity] = DutyInstance(*identity)
            events.append(Event(EventKind.DUTY_CREATED, str(duties[identity]), step))

    return State(frozenset(facts), frozenset(duties.values())), events


def run(ground: GroundModel, initial: State, trace) -> RunResult:
    """
    Applies the acts of `trace` one after the other, stopping at the first one which is not enabled
    """
    states = [initial]
    events = []
    outcome = Outcome()
    for index, act in enumerate(trace):
        try:
            state, step_events = apply(ground, states[-1], act, index)
        except PreconditionViolated as err:
            logger.debug("Step {index} failed: {error}".format(index=index, error=err))
            outcome = Outcome.failed_at(index, str(err))
            break
        states.append(state)
        events.extend(step_events)
    return RunResult(trace, states, events, outcome)


def _escape_dot(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")


class StateGraph:
    """
    The states reachable from a root within a horizon, as nodes numbered in discovery order

    Attributes
    ----------
        nodes: list of State
        edges: list of (source index, GroundAct, target index)
        depths: list of int
            The length of the shortest path from the root to each node.
        parents: list of (parent index, GroundAct) or None
            The last step of a shortest path to each node, None for the root.
    """

    def __init__(self, ground: GroundModel, root: State, horizon: int) -> None:
        self.ground = ground
        self.horizon = int(horizon)
        self.root = 0
        self.nodes: List[State] = [root]
        self.edges: List[Tuple[int, GroundAct, int]] = []
        self.depths: List[int] = [0]
        self.parents: List[Optional[Tuple[int, GroundAct]]] = [None]
        self._index: Dict[State, int] = {root: 0}
        self._networkx = None

    def __repr__(self) -> str:
        return "StateGraph(nodes={nodes}, edges={edges}, horizon={horizon})".format(nodes=len(self.nodes), edges=len(self.edges), horizon=self.horizon)

    def __len__(self) -> int:
        return len(self.nodes)

    def index_of(self, state: State) -> Optional[int]:
        return self._index.get(state)

    def _add(self, state: State, parent: int, act: GroundAct) -> int:
        self._index[state] = len(self.nodes)
        self.nodes.append(state)
        self.depths.append(self.depths[parent] + 1)
        self.parents.append((parent, act))
        return len(self.nodes) - 1

    def witness(self, index: int) -> Tuple[GroundAct, ...]:
        """A shortest trace from the root to the node `index`"""
        acts = []
        while self.parents[index] is not None:
            index, act = self.parents[index]
            acts.append(act)
        return tuple(reversed(acts))

    def successors(self, index: int) -> List[Tuple[GroundAct, int]]:
        return [(act, target) for source, act, target in self.edges if source == index]

    def as_networkx(self) -> nx.MultiDiGraph:
        """The graph as a networkx MultiDiGraph, nodes carrying their state and edges their act"""
        if self._networkx is None or self._networkx.number_of_edges() != len(self.edges):
            graph = nx.MultiDiGraph()
            for index, state in enumerate(self.nodes):
                graph.add_node(index, state=state, depth=self.depths[index])
            for source, act, target in self.edges:
                graph.add_edge(source, target, act=act)
            self._networkx = graph
        return self._networkx

    def to_dot(self) -> str:
        """Graphviz DOT text of the graph, one node per state and one labelled edge per transition"""
        lines = ["digraph statespace {", "    rankdir=LR;", "    node [shape=box];"]
        for index, state in enumerate(self.nodes):
            lines.append('    n{index} [label="#{index}: {label}"];'.format(index=index, label=_escape_dot(state.label())))
        for source, act, target in self.edges:
            lines.append('    n{source} -> n{target} [label="{act}"];'.format(source=source, target=target, act=_escape_dot(str(act))))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _successors(ground: GroundModel, state: State) -> List[Tuple[GroundAct, State]]:
    return [(act, apply(ground, state, act)[0]) for act in ground.acts if enabled(ground, state, act)]


def explore(ground: GroundModel, initial: State, horizon: int, node_cap: Optional[int] = None, fast: bool = False, threads_limit: int = Limits.THREADS_LIMIT) -> StateGraph:
    """
    Breadth first exploration of the states reachable from `initial` in at most `horizon` acts

    States are deduplicated by value; nodes at depth `horizon` are kept but not expanded.

    Parameters
    ----------
        ground: GroundModel
        initial: State
        horizon: int
        node_cap: int, default = None
            The maximum number of nodes, defaults to `NORMCHECK_NODE_CAP` or Limits.EXPLORE_NODE_CAP.
        fast: bool, default = False
            Compute the successors of a whole layer on a thread pool.
        threads_limit: int, default = 8

    Raises
    ------
        ParameterValueError
            If `horizon` is negative.
        ResourceLimitExceeded
            If more than `node_cap` states are reached.
    """
    horizon = int(horizon)
    if horizon < 0:
        raise ParameterValueError("The horizon must be a non-negative integer, got {horizon}".format(horizon=horizon))
    cap = resolve_cap(node_cap, Limits.EXPLORE_NODE_CAP)
    graph = StateGraph(ground, initial, horizon)

    def _expand(index: int) -> List[Tuple[GroundAct, State]]:
        return _successors(ground, graph.nodes[index])

    frontier = [graph.root]
    for depth in range(horizon):
        if not frontier:
            break
        if fast and len(frontier) > 1:
            with ThreadPool(max(1, min(int(threads_limit), len(frontier)))) as pool:
                layer = pool.map(_expand, frontier)
        else:
            layer = [_expand(index) for index in frontier]
        next_frontier = []
        for source, outgoing in zip(frontier, layer):
            for act, target_state in outgoing:
                target = graph.index_of(target_state)
                if target is None:
                    if len(graph.nodes) >= cap:
                        raise ResourceLimitExceeded("exploration", cap)
                    target = graph._add(target_state, source, act)
                    next_frontier.append(target)
                graph.edges.append((source, act, target))
        frontier = next_frontier
        logger.debug("Explored depth {depth}: {nodes} node(s), {edges} edge(s)".format(depth=depth + 1, nodes=len(graph.nodes), edges=len(graph.edges)))
    logger.info("Exploration finished: {nodes} node(s), {edges} edge(s) within {horizon} step(s)".format(nodes=len(graph.nodes), edges=len(graph.edges), horizon=horizon))
    return graph


def discharging_acts(ground: GroundModel, duty: DutyInstance) -> List[GroundAct]:
    """The ground acts which would terminate or enforce `duty`"""
    frame = ground.model.duty(duty.frame)
    acts = []
    for act in ground.acts:
        if act.frame not in frame.terminated_by and act.frame not in frame.enforced_by:
            continue
        if duty_binding(frame, ground.act_frame(act.frame), act.binding_dict()) == duty.binding:
            acts.append(act)
    return acts


def _can_reach(graph: nx.MultiDiGraph, targets) -> set:
    """The nodes from which one of `targets` is reachable, the targets included"""
    found = set()
    for target in targets:
        # a target found earlier already has its ancestors found
        if target not in found:
            found |= nx.ancestors(graph, target) | {target}
    return found


def detect_conflicts(graph: StateGraph) -> List[ConflictReport]:
    """
    Reports every active duty instance which no terminating or enforcing act can discharge
    in any state reachable from where it is active

    Returns
    -------
        list of ConflictReport
            Sorted by state index, then by duty.
    """
    ground = graph.ground
    networkx_graph = graph.as_networkx()
    active: Dict[tuple, List[int]] = {}
    for index, state in enumerate(graph.nodes):
        for duty in state.active_duties():
            active.setdefault(duty.identity, []).append(index)

    conflicts = []
    for identity, indexes in active.items():
        duty = DutyInstance(*identity)
        acts = discharging_acts(ground, duty)
        dischargeable = [index for index, state in enumerate(graph.nodes) if any(enabled(ground, state, act) for act in acts)]
        can_discharge = _can_reach(networkx_graph, dischargeable)
        for index in indexes:
            if index not in can_discharge:
                conflicts.append(ConflictReport(duty, index, graph.nodes[index], graph.witness(index)))
    conflicts.sort(key=lambda conflict: (conflict.state_index, conflict.duty.identity))
    logger.debug("Found {count} stuck duty instance(s)".format(count=len(conflicts)))
    return conflicts
