"""
Module containing the result holders shared by the engine, the SDL prover and the command line.

Every result exposes `as_dict()` with stable key names and `as_json(**kwargs)`.
"""
from dataclasses import dataclass
from json import dumps
from typing import Optional

from normcheck.norms.core import DutyInstance, GroundAct, State
from normcheck.utils.annotations import List, Tuple


class EventKind():
    ACT_PERFORMED = "act-performed"
    FACT_CREATED = "fact-created"
    FACT_TERMINATED = "fact-terminated"
    DUTY_CREATED = "duty-created"
    DUTY_TERMINATED = "duty-terminated"
    DUTY_ENFORCED = "duty-enforced"


@dataclass(frozen=True)
class Event:
    kind: str
    subject: str
    step: int = 0

    def as_dict(self) -> dict:
        return {"kind": self.kind, "subject": self.subject}

    def __str__(self) -> str:
        return "{kind} {subject}".format(kind=self.kind, subject=self.subject)


@dataclass(frozen=True)
class Outcome:
    """`completed`, or `failed` at `step` with `reason`"""
    completed: bool = True
    step: Optional[int] = None
    reason: Optional[str] = None

    @classmethod
    def failed_at(cls, step: int, reason: str) -> "Outcome":
        return cls(False, int(step), str(reason))

    def __str__(self) -> str:
        if self.completed:
            return "completed"
        return "failed-at({step}): {reason}".format(step=self.step, reason=self.reason)


class RunResult:
    """
    Class that holds the result of running a trace.
    """

    def __init__(self, trace, states: List[State], events: List[Event], outcome: Outcome) -> None:
        self.trace = trace
        self.states = list(states)
        self.events = list(events)
        self.outcome = outcome

    @property
    def completed(self) -> bool:
        return self.outcome.completed

    @property
    def final(self) -> State:
        return self.states[-1]

    def events_of(self, kind: str) -> List[Event]:
        return [event for event in self.events if event.kind == kind]

    def steps(self) -> List[Tuple[GroundAct, List[Event]]]:
        """The performed acts with their events"""
        performed = len(self.states) - 1
        return [(self.trace[index], [event for event in self.events if event.step == index]) for index in range(performed)]

    def __repr__(self) -> str:
        return "RunResult(steps={steps}, outcome={outcome})".format(steps=len(self.states) - 1, outcome=self.outcome)

    def as_dict(self) -> dict:
        return {
            "outcome": "completed" if self.outcome.completed else "failed",
            "failed_at": self.outcome.step,
            "reason": self.outcome.reason,
            "steps": [
                {
                    "act": str(act),
                    "events": [event.as_dict() for event in events]
                }
                for act, events in self.steps()
            ],
            "final": self.final.describe()
        }

    def as_json(self, **kwargs) -> str:
        return dumps(self.as_dict(), **kwargs)


@dataclass(frozen=True)
class ConflictReport:
    """
    An active duty none of whose terminating or enforcing acts can become enabled within the horizon
    """
    duty: DutyInstance
    state_index: int
    state: State
    witness: Tuple[GroundAct, ...]
    reason: str = "stuck-duty"

    def as_dict(self) -> dict:
        return {
            "duty": self.duty.frame,
            "binding": dict(self.duty.binding),
            "state_index": self.state_index,
            "reason": self.reason,
            "witness": [str(act) for act in self.witness]
        }

    def __str__(self) -> str:
        path = " -> ".join(str(act) for act in self.witness) or "(initial state)"
        return "stuck duty {duty} in state #{index}, reached by: {path}".format(duty=self.duty, index=self.state_index, path=path)


class ExploreResult:
    """
    Class that holds an explored state graph and the conflicts found in it.
    """

    def __init__(self, graph, conflicts: List[ConflictReport]) -> None:
        self.graph = graph
        self.conflicts = list(conflicts)

    def __repr__(self) -> str:
        return "ExploreResult(nodes={nodes}, edges={edges}, conflicts={conflicts})".format(nodes=len(self.graph.nodes), edges=len(self.graph.edges), conflicts=len(self.conflicts))

    def as_dict(self) -> dict:
        return {
            "horizon": self.graph.horizon,
            "nodes": len(self.graph.nodes),
            "edges": len(self.graph.edges),
            "states": [
                dict(index=index, depth=self.graph.depths[index], **state.describe())
                for index, state in enumerate(self.graph.nodes)
            ],
            "transitions": [
                {"source": source, "act": str(act), "target": target}
                for source, act, target in self.graph.edges
            ],
            "conflicts": [conflict.as_dict() for conflict in self.conflicts]
        }

    def as_json(self, **kwargs) -> str:
        return dumps(self.as_dict(), **kwargs)


class SdlVerdict:
    """
    Class that holds the verdict of a consistency check over a set of SDL formulas.
    """

    def __init__(self, formulas, result, logic: str = "KD") -> None:
        self.formulas = list(formulas)
        self.result = result
        self.logic = str(logic)

    @property
    def verdict(self) -> str:
        return self.result.verdict

    def __repr__(self) -> str:
        return "SdlVerdict(verdict={verdict}, formulas={count})".format(verdict=self.verdict, count=len(self.formulas))

    def as_dict(self) -> dict:
        return {
            "logic": self.logic,
            "formulas": [str(formula) for formula in self.formulas],
            "verdict": self.verdict,
            "model": self.result.model.as_dict() if self.result.model is not None else None,
            "certificate_size": len(self.result.certificate)
        }

    def as_json(self, **kwargs) -> str:
        return dumps(self.as_dict(), **kwargs)


class ChisholmRow:
    """
    Class that holds one line of the Chisholm report: an encoding, its verdict and its dependence checks.
    """

    def __init__(self, encoding, result, formula2_entailed: bool, formula3_entailed: bool, logic: str = "KD") -> None:
        self.encoding = encoding
        self.result = result
        self.logic = str(logic)
        self.formula2_entailed = bool(formula2_entailed)
        self.formula3_entailed = bool(formula3_entailed)

    @property
    def verdict(self) -> str:
        return self.result.verdict

    @property
    def notes(self) -> List[str]:
        notes = []
        if self.formula2_entailed:
            notes.append("formula 2 is entailed by the other three")
        if self.formula3_entailed:
            notes.append("formula 3 is entailed by the other three")
        if not self.result.satisfiable:
            notes.append("contradiction")
        return notes

    def __repr__(self) -> str:
        return "ChisholmRow(label={label}, verdict={verdict})".format(label=self.encoding.name, verdict=self.verdict)

    def as_dict(self) -> dict:
        return {
            "label": self.encoding.name,
            "logic": self.logic,
            "rule2": self.encoding.rule2_scope,
            "rule3": self.encoding.rule3_scope,
            "formulas": [str(formula) for formula in self.encoding.formulas],
            "verdict": self.verdict,
            "model": self.result.model.as_dict() if self.result.model is not None else None,
            "certificate_size": len(self.result.certificate),
            "formula2_entailed": self.formula2_entailed,
            "formula3_entailed": self.formula3_entailed,
            "notes": self.notes,
            "reading": "standard reconstruction"
        }

    def as_json(self, **kwargs) -> str:
        return dumps(self.as_dict(), **kwargs)
