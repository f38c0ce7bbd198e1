"""
Domain types for the frame language (acts, facts and duties), grounding over finite
object domains and Boolean evaluation of formulas over states.

All values are immutable once built.
"""
import logging
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Optional, Union

import networkx as nx

from normcheck.config import Limits
from normcheck.exceptions import IllFormedModel, ParameterValueError, UnboundVariable, UnknownSymbol
from normcheck.utils.annotations import Binding, BindingItems, Dict, FrozenSet, List, Tuple
from normcheck.utils.lru_cacher import LRUDictCache
from normcheck.utils.similarity import fuzzy_search, suggestion

logger = logging.getLogger("normcheck")


class Severity():
    ERROR = "error"
    WARNING = "warning"


class FactKind():
    ATOMIC = "atomic"
    DERIVED = "derived"


class DutyStatus():
    ACTIVE = "active"
    TERMINATED = "terminated"
    ENFORCED = "enforced"


RESERVED_WORDS = frozenset({"not", "and", "or", "true", "false"})


# Terms

@dataclass(frozen=True)
class Variable:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Variable, Constant]


# Formulas

class Formula:
    """
    Base class of the Boolean formulas over fact atoms
    """
    precedence = 5

    def children(self) -> Tuple["Formula", ...]:
        return ()

    def atoms(self):
        """Yields every fact atom of the formula, left to right"""
        stack = [self]
        while stack:
            node = stack.pop()
            if isinstance(node, Atom):
                yield node
            stack.extend(reversed(node.children()))

    def connectives(self) -> int:
        """The number of `not`, `and`, `or` and `->` nodes"""
        count = 0
        stack = [self]
        while stack:
            children = stack.pop().children()
            if children:
                count += 1
                stack.extend(children)
        return count

    def variables(self) -> FrozenSet[str]:
        return frozenset(term.name for atom in self.atoms() for term in atom.args if isinstance(term, Variable))

    def is_ground(self) -> bool:
        return not self.variables()

    def _wrap(self, formula: "Formula", parenthesize: bool) -> str:
        return "(" + str(formula) + ")" if parenthesize else str(formula)


@dataclass(frozen=True)
class Truth(Formula):
    value: bool

    def __str__(self) -> str:
        return "true" if self.value else "false"


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Atom(Formula):
    symbol: str
    args: Tuple[Term, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.symbol
        return "{symbol}({args})".format(symbol=self.symbol, args=", ".join(str(arg) for arg in self.args))


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula
    precedence = 4

    def children(self):
        return (self.operand,)

    def __str__(self) -> str:
        return "not " + self._wrap(self.operand, self.operand.precedence < self.precedence)


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula
    keyword = ""

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        # `and`/`or` group to the left
        return "{left} {keyword} {right}".format(
            left=self._wrap(self.left, self.left.precedence < self.precedence),
            keyword=self.keyword,
            right=self._wrap(self.right, self.right.precedence <= self.precedence)
        )


@dataclass(frozen=True)
class And(_Binary):
    precedence = 3
    keyword = "and"


@dataclass(frozen=True)
class Or(_Binary):
    precedence = 2
    keyword = "or"


@dataclass(frozen=True)
class Implies(_Binary):
    precedence = 1
    keyword = "->"

    def __str__(self) -> str:
        # right associative
        return "{left} -> {right}".format(
            left=self._wrap(self.left, self.left.precedence <= self.precedence),
            right=self._wrap(self.right, self.right.precedence < self.precedence)
        )


def ground_atom(symbol: str, *constants: str) -> Atom:
    """Shorthand for a ground atom: ground_atom("borrowed", "alice", "b1")"""
    return Atom(symbol, tuple(Constant(str(constant)) for constant in constants))


# Declarations

@dataclass(frozen=True)
class ObjectDomain:
    name: str
    members: Tuple[str, ...]


@dataclass(frozen=True)
class Parameter:
    name: str
    domain: str

    def __str__(self) -> str:
        return "{name}: {domain}".format(name=self.name, domain=self.domain)


def default_param_names(domains: Tuple[str, ...]) -> Tuple[str, ...]:
    """
    The names given to unnamed fact parameters: the lowercased domain name, suffixed on repetition

    >>> default_param_names(("Agent", "Item", "Agent"))
    ('agent', 'item', 'agent-2')
    """
    seen = {}
    names = []
    for domain in domains:
        base = domain.lower()
        seen[base] = seen.get(base, 0) + 1
        names.append(base if seen[base] == 1 else "{base}-{index}".format(base=base, index=seen[base]))
    return tuple(names)


@dataclass(frozen=True)
class FactSymbol:
    name: str
    params: Tuple[str, ...] = ()
    param_names: Optional[Tuple[str, ...]] = None
    derivation: Optional[Formula] = None
    sources: Tuple[str, ...] = ()

    def __post_init__(self):
        if self.param_names is None:
            object.__setattr__(self, "param_names", default_param_names(self.params))

    @property
    def kind(self) -> str:
        return FactKind.ATOMIC if self.derivation is None else FactKind.DERIVED

    @property
    def arity(self) -> int:
        return len(self.params)


@dataclass(frozen=True)
class ActFrame:
    name: str
    actor: Parameter
    params: Tuple[Parameter, ...] = ()
    precondition: Formula = TRUE
    creates: Tuple[Atom, ...] = ()
    terminates: Tuple[Atom, ...] = ()
    sources: Tuple[str, ...] = ()

    @property
    def all_params(self) -> Tuple[Parameter, ...]:
        return (self.actor,) + tuple(self.params)


@dataclass(frozen=True)
class DutyFrame:
    name: str
    holder: Parameter
    params: Tuple[Parameter, ...] = ()
    created_by: Tuple[str, ...] = ()
    enforced_by: Tuple[str, ...] = ()
    terminated_by: Tuple[str, ...] = ()
    sources: Tuple[str, ...] = ()

    @property
    def all_params(self) -> Tuple[Parameter, ...]:
        return (self.holder,) + tuple(self.params)

    def roles(self) -> Tuple[Tuple[str, Tuple[str, ...]], ...]:
        return (("created-by", self.created_by), ("enforced-by", self.enforced_by), ("terminated-by", self.terminated_by))


@dataclass(frozen=True)
class InitialFacts:
    atoms: Tuple[Atom, ...]


Declaration = Union[ObjectDomain, FactSymbol, ActFrame, DutyFrame, InitialFacts]


@dataclass(frozen=True)
class Model:
    """
    A set of frame declarations, kept in their original order
    """
    declarations: Tuple[Declaration, ...] = ()

    @classmethod
    def build(cls, domains=(), facts=(), acts=(), duties=(), initial=()) -> "Model":
        declarations = list(domains) + list(facts) + list(acts) + list(duties)
        if initial:
            declarations.append(InitialFacts(tuple(initial)))
        return cls(tuple(declarations))

    def _of_type(self, kind) -> tuple:
        return tuple(declaration for declaration in self.declarations if isinstance(declaration, kind))

    @cached_property
    def domains(self) -> Tuple[ObjectDomain, ...]:
        return self._of_type(ObjectDomain)

    @cached_property
    def facts(self) -> Tuple[FactSymbol, ...]:
        return self._of_type(FactSymbol)

    @cached_property
    def acts(self) -> Tuple[ActFrame, ...]:
        return self._of_type(ActFrame)

    @cached_property
    def duties(self) -> Tuple[DutyFrame, ...]:
        return self._of_type(DutyFrame)

    @cached_property
    def initial_facts(self) -> Tuple[Atom, ...]:
        return tuple(atom for declaration in self._of_type(InitialFacts) for atom in declaration.atoms)

    @cached_property
    def _index(self) -> Dict[type, Dict[str, Declaration]]:
        index = {}
        for declaration in self.declarations:
            if not isinstance(declaration, InitialFacts):
                index.setdefault(type(declaration), {}).setdefault(declaration.name, declaration)
        return index

    def domain(self, name: str) -> Optional[ObjectDomain]:
        return self._index.get(ObjectDomain, {}).get(name)

    def fact(self, name: str) -> Optional[FactSymbol]:
        return self._index.get(FactSymbol, {}).get(name)

    def act(self, name: str) -> Optional[ActFrame]:
        return self._index.get(ActFrame, {}).get(name)

    def duty(self, name: str) -> Optional[DutyFrame]:
        return self._index.get(DutyFrame, {}).get(name)


# Ground values

@dataclass(frozen=True)
class GroundAct:
    frame: str
    binding: BindingItems

    @classmethod
    def of(cls, frame: ActFrame, *constants: str) -> "GroundAct":
        if len(constants) != len(frame.all_params):
            raise ParameterValueError("{act} takes {expected} argument(s), {given} given".format(act=frame.name, expected=len(frame.all_params), given=len(constants)))
        return cls(frame.name, tuple((param.name, str(constant)) for param, constant in zip(frame.all_params, constants)))

    @property
    def arguments(self) -> Tuple[str, ...]:
        return tuple(value for _, value in self.binding)

    def binding_dict(self) -> Binding:
        return dict(self.binding)

    def __str__(self) -> str:
        return "{frame}({args})".format(frame=self.frame, args=", ".join(self.arguments))


@dataclass(frozen=True)
class DutyInstance:
    frame: str
    binding: BindingItems
    status: str = DutyStatus.ACTIVE

    @property
    def identity(self) -> Tuple[str, BindingItems]:
        return (self.frame, self.binding)

    @property
    def active(self) -> bool:
        return self.status == DutyStatus.ACTIVE

    def with_status(self, status: str) -> "DutyInstance":
        return DutyInstance(self.frame, self.binding, status)

    def as_dict(self) -> dict:
        return {"name": self.frame, "binding": dict(self.binding), "status": self.status}

    def __str__(self) -> str:
        return "{frame}({args})".format(frame=self.frame, args=", ".join(value for _, value in self.binding))


@dataclass(frozen=True)
class State:
    """
    The true ground atomic facts plus the duty instances

    Only positive atoms are representable: a fact absent from `facts` is false.
    """
    facts: FrozenSet[Atom] = frozenset()
    duties: FrozenSet[DutyInstance] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "facts", frozenset(self.facts))
        object.__setattr__(self, "duties", frozenset(self.duties))
        for fact in self.facts:
            if not isinstance(fact, Atom) or not fact.is_ground():
                raise ParameterValueError("A state only holds ground positive atoms, got {fact!r}".format(fact=fact))
        identities = [duty.identity for duty in self.duties]
        if len(identities) != len(set(identities)):
            raise ParameterValueError("A state holds at most one instance per duty frame and binding")

    def duty(self, identity) -> Optional[DutyInstance]:
        for duty in self.duties:
            if duty.identity == identity:
                return duty
        return None

    def active_duties(self) -> List[DutyInstance]:
        return sorted((duty for duty in self.duties if duty.active), key=lambda duty: duty.identity)

    def sorted_facts(self) -> List[str]:
        return sorted(str(fact) for fact in self.facts)

    def sorted_duties(self) -> List[DutyInstance]:
        return sorted(self.duties, key=lambda duty: duty.identity)

    def describe(self) -> dict:
        return {
            "facts": self.sorted_facts(),
            "duties": [duty.as_dict() for duty in self.sorted_duties()]
        }

    def label(self) -> str:
        """One line summary: sorted facts, then duty statuses"""
        facts = ", ".join(self.sorted_facts()) or "-"
        duties = ", ".join("{duty}: {status}".format(duty=duty, status=duty.status) for duty in self.sorted_duties())
        return facts if not duties else facts + " | " + duties


# Well-formedness

@dataclass(frozen=True)
class Issue:
    severity: str
    message: str
    declaration: Optional[str] = None

    def __str__(self) -> str:
        if self.declaration is None:
            return "{severity}: {message}".format(severity=self.severity, message=self.message)
        return "{severity}: {declaration}: {message}".format(severity=self.severity, declaration=self.declaration, message=self.message)


def _declaration_name(declaration: Declaration) -> str:
    return "Init" if isinstance(declaration, InitialFacts) else declaration.name


class _Checker:
    def __init__(self, model: Model) -> None:
        self.model = model
        self.issues = []
        self.domain_names = [domain.name for domain in model.domains]
        self.fact_names = [fact.name for fact in model.facts]
        self.act_names = [act.name for act in model.acts]

    def error(self, declaration: str, message: str):
        self.issues.append(Issue(Severity.ERROR, message, declaration))

    def check(self) -> List[Issue]:
        self.check_names()
        for declaration in self.model.declarations:
            if isinstance(declaration, ObjectDomain):
                self.check_domain(declaration)
            elif isinstance(declaration, FactSymbol):
                self.check_fact(declaration)
            elif isinstance(declaration, ActFrame):
                self.check_act(declaration)
            elif isinstance(declaration, DutyFrame):
                self.check_duty(declaration)
            else:
                self.check_initial(declaration)
        self.check_cycles()
        return self.issues

    def check_names(self):
        seen = set()
        for declaration in self.model.declarations:
            if isinstance(declaration, InitialFacts):
                continue
            if declaration.name in seen:
                self.error(declaration.name, "duplicate declaration `{name}`".format(name=declaration.name))
            seen.add(declaration.name)

    def check_domain(self, domain: ObjectDomain):
        if not domain.members:
            self.error(domain.name, "domain `{name}` has no members".format(name=domain.name))
        duplicates = sorted({member for member in domain.members if domain.members.count(member) > 1})
        for member in duplicates:
            self.error(domain.name, "member `{member}` is listed twice in domain `{name}`".format(member=member, name=domain.name))

    def check_domain_reference(self, declaration: str, domain: str) -> bool:
        if self.model.domain(domain) is None:
            self.error(declaration, "unknown domain `{domain}`{hint}".format(domain=domain, hint=suggestion(self.domain_names, domain)))
            return False
        return True

    def check_params(self, declaration: str, params) -> Dict[str, str]:
        scope = {}
        for param in params:
            if param.name in scope:
                self.error(declaration, "parameter `{name}` is declared twice".format(name=param.name))
            self.check_domain_reference(declaration, param.domain)
            scope[param.name] = param.domain
        return scope

    def check_atom(self, declaration: str, atom: Atom, scope: Dict[str, str]):
        symbol = self.model.fact(atom.symbol)
        if symbol is None:
            self.error(declaration, "unknown fact `{symbol}`{hint}".format(symbol=atom.symbol, hint=suggestion(self.fact_names, atom.symbol)))
            return
        if len(atom.args) != symbol.arity:
            self.error(declaration, "fact `{symbol}` takes {expected} argument(s), {given} given".format(symbol=atom.symbol, expected=symbol.arity, given=len(atom.args)))
            return
        for term, expected in zip(atom.args, symbol.params):
            if isinstance(term, Variable):
                if term.name not in scope:
                    self.error(declaration, "variable `{name}` is not a parameter".format(name=term.name))
                elif scope[term.name] != expected:
                    self.error(declaration, "`{name}` is a {actual} but `{symbol}` expects a {expected}".format(name=term.name, actual=scope[term.name], symbol=atom.symbol, expected=expected))
            else:
                domain = self.model.domain(expected)
                if domain is not None and term.name not in domain.members:
                    self.error(declaration, "unknown constant `{name}` for domain `{domain}`{hint}".format(name=term.name, domain=expected, hint=suggestion(domain.members, term.name)))

    def check_formula(self, declaration: str, formula: Formula, scope: Dict[str, str]):
        if formula.connectives() > Limits.FORMULA_CONNECTIVES:
            self.error(declaration, "formula has more than {limit} connectives".format(limit=Limits.FORMULA_CONNECTIVES))
            return
        for atom in formula.atoms():
            self.check_atom(declaration, atom, scope)

    def check_assignable(self, declaration: str, atoms, clause: str, scope: Dict[str, str]):
        for atom in atoms:
            symbol = self.model.fact(atom.symbol)
            if symbol is not None and symbol.kind == FactKind.DERIVED:
                self.error(declaration, "derived fact `{symbol}` cannot appear in `{clause}`".format(symbol=atom.symbol, clause=clause))
                continue
            self.check_atom(declaration, atom, scope)

    def check_fact(self, fact: FactSymbol):
        if len(fact.param_names) != len(fact.params):
            self.error(fact.name, "fact `{name}` names {names} parameter(s) for {count} domain(s)".format(name=fact.name, names=len(fact.param_names), count=len(fact.params)))
            return
        scope = self.check_params(fact.name, [Parameter(name, domain) for name, domain in zip(fact.param_names, fact.params)])
        if fact.derivation is not None:
            self.check_formula(fact.name, fact.derivation, scope)

    def check_act(self, act: ActFrame):
        scope = self.check_params(act.name, act.all_params)
        self.check_formula(act.name, act.precondition, scope)
        self.check_assignable(act.name, act.creates, "creates", scope)
        self.check_assignable(act.name, act.terminates, "terminates", scope)

    def check_duty(self, duty: DutyFrame):
        self.check_params(duty.name, duty.all_params)
        for role, act_names in duty.roles():
            if not act_names:
                self.error(duty.name, "duty `{name}` lists no act in `{role}`".format(name=duty.name, role=role))
            for act_name in act_names:
                act = self.model.act(act_name)
                if act is None:
                    self.error(duty.name, "duty `{name}` refers to unknown act `{act}` in `{role}`{hint}".format(name=duty.name, act=act_name, role=role, hint=suggestion(self.act_names, act_name)))
                    continue
                for param in duty.all_params:
                    if binding_source(duty, param, act) is None:
                        self.error(duty.name, "act `{act}` has no parameter `{param}` to bind `{name}`".format(act=act_name, param=param, name=duty.name))

    def check_initial(self, initial: InitialFacts):
        for atom in initial.atoms:
            if not atom.is_ground():
                self.error("Init", "initial fact `{atom}` is not ground".format(atom=atom))
        self.check_assignable("Init", initial.atoms, "Init", {})

    def check_cycles(self):
        graph = nx.DiGraph()
        derived = {fact.name: fact for fact in self.model.facts if fact.kind == FactKind.DERIVED}
        for name, fact in derived.items():
            graph.add_node(name)
            for atom in fact.derivation.atoms():
                if atom.symbol in derived:
                    graph.add_edge(name, atom.symbol)
        cycles = []
        for cycle in nx.simple_cycles(graph):
            start = cycle.index(min(cycle))
            cycles.append(cycle[start:] + cycle[:start])
        for cycle in sorted(cycles):
            self.error(cycle[0], "cyclic derivation: {path}".format(path=" -> ".join(cycle + [cycle[0]])))


def check_wellformed(model: Model) -> List[Issue]:
    """
    Checks every structural invariant of the model

    Returns
    -------
        list of Issue
            Empty if and only if the model is well-formed.
    """
    return _Checker(model).check()


def binding_source(duty: DutyFrame, param: Parameter, act: ActFrame) -> Optional[str]:
    """
    The act parameter which gives its value to the duty parameter `param`, or None

    Parameters bind by name and domain; the duty holder also binds from the
    actor when the act has no parameter with the holder's name.
    """
    act_params = {act_param.name: act_param for act_param in act.all_params}
    if param.name in act_params:
        return param.name if act_params[param.name].domain == param.domain else None
    if param.name == duty.holder.name and act.actor.domain == param.domain:
        return act.actor.name
    return None


def duty_binding(duty: DutyFrame, act: ActFrame, act_binding: Binding) -> BindingItems:
    """Restricts a ground act's binding to the duty's parameters"""
    return tuple((param.name, act_binding[binding_source(duty, param, act)]) for param in duty.all_params)


# Substitution and evaluation

def substitute(formula: Formula, binding: Binding) -> Formula:
    """
    Replaces every variable of `formula` with its constant in `binding`

    Raises
    ------
        UnboundVariable
            If a variable of the formula has no value in `binding`.
    """
    if isinstance(formula, Truth):
        return formula
    if isinstance(formula, Atom):
        args = []
        for term in formula.args:
            if isinstance(term, Variable):
                if term.name not in binding:
                    raise UnboundVariable(term.name)
                args.append(Constant(binding[term.name]))
            else:
                args.append(term)
        return Atom(formula.symbol, tuple(args))
    if isinstance(formula, Not):
        return Not(substitute(formula.operand, binding))
    return type(formula)(substitute(formula.left, binding), substitute(formula.right, binding))


class GroundModel:
    """
    A well-formed model together with all of its ground acts and potential duty instances
    """

    def __init__(self, model: Model, acts: Tuple[GroundAct, ...], duties: Tuple[Tuple[str, BindingItems], ...]) -> None:
        self.model = model
        self.acts = acts
        self.duties = duties
        # act frame name -> [(role, duty frame)]
        self.duty_roles = {}
        for duty in model.duties:
            for role, act_names in duty.roles():
                for act_name in act_names:
                    self.duty_roles.setdefault(act_name, []).append((role, duty))
        self._derivations = LRUDictCache(4096)

    def __repr__(self) -> str:
        return "GroundModel(acts={acts}, duties={duties})".format(acts=len(self.acts), duties=len(self.duties))

    def act_frame(self, name: str) -> ActFrame:
        frame = self.model.act(name)
        if frame is None:
            guess, similarity = fuzzy_search([act.name for act in self.model.acts], name)
            raise UnknownSymbol(name, guess, similarity * 100)
        return frame

    def fact_symbol(self, name: str) -> FactSymbol:
        symbol = self.model.fact(name)
        if symbol is None:
            guess, similarity = fuzzy_search([fact.name for fact in self.model.facts], name)
            raise UnknownSymbol(name, guess, similarity * 100)
        return symbol

    def initial_state(self) -> State:
        return State(facts=frozenset(self.model.initial_facts))

    def derivation(self, atom: Atom) -> Formula:
        """The ground derivation formula of a ground derived atom"""
        cached = self._derivations.get(atom)
        if cached is not None:
            return cached
        symbol = self.fact_symbol(atom.symbol)
        result = substitute(symbol.derivation, {name: term.name for name, term in zip(symbol.param_names, atom.args)})
        self._derivations[atom] = result
        return result

    def duty_frame_roles(self, act_name: str, role: str) -> List[DutyFrame]:
        return [duty for duty_role, duty in self.duty_roles.get(act_name, []) if duty_role == role]


def _bindings(model: Model, params: Tuple[Parameter, ...]):
    members = [model.domain(param.domain).members for param in params]
    for constants in sorted(product(*members)):
        yield tuple((param.name, constant) for param, constant in zip(params, constants))


def ground_model(model: Model) -> GroundModel:
    """
    Enumerates every ground act and every potential duty instance of a well-formed model

    Acts are ordered by frame name, then by their constants.

    Raises
    ------
        IllFormedModel
            If check_wellformed reports an error.
    """
    errors = [issue for issue in check_wellformed(model) if issue.severity == Severity.ERROR]
    if errors:
        raise IllFormedModel(errors)
    acts = tuple(
        GroundAct(frame.name, binding)
        for frame in sorted(model.acts, key=lambda frame: frame.name)
        for binding in _bindings(model, frame.all_params)
    )
    duties = tuple(
        (frame.name, binding)
        for frame in sorted(model.duties, key=lambda frame: frame.name)
        for binding in _bindings(model, frame.all_params)
    )
    logger.debug("Grounded the model: {acts} ground act(s), {duties} potential duty instance(s)".format(acts=len(acts), duties=len(duties)))
    return GroundModel(model, acts, duties)


def _resolve(ground: GroundModel, state: State, atom: Atom, env: Optional[Binding]):
    """
    Either the truth value of an atomic fact, or the (derivation, environment) pair
    which a derived fact stands for
    """
    if env is None:
        if not atom.is_ground():
            raise UnboundVariable(sorted(atom.variables())[0])
        symbol = ground.fact_symbol(atom.symbol)
        if symbol.kind == FactKind.ATOMIC:
            return atom in state.facts
        return ground.derivation(atom), None
    values = []
    for term in atom.args:
        if isinstance(term, Variable):
            if term.name not in env:
                raise UnboundVariable(term.name)
            values.append(env[term.name])
        else:
            values.append(term.name)
    symbol = ground.fact_symbol(atom.symbol)
    if symbol.kind == FactKind.ATOMIC:
        return ground_atom(atom.symbol, *values) in state.facts
    return symbol.derivation, dict(zip(symbol.param_names, values))


def _evaluate(ground: GroundModel, state: State, formula: Formula, env: Optional[Binding]) -> bool:
    # an explicit stack, so neither long chains nor deep derivations hit the recursion limit
    values: List[bool] = []
    stack = [(formula, env, False)]
    while stack:
        node, node_env, visited = stack.pop()
        if isinstance(node, Truth):
            values.append(node.value)
        elif isinstance(node, Atom):
            resolved = _resolve(ground, state, node, node_env)
            if isinstance(resolved, bool):
                values.append(resolved)
            else:
                stack.append((resolved[0], resolved[1], False))
        elif not visited:
            stack.append((node, node_env, True))
            stack.append((node.children()[0], node_env, False))
        elif isinstance(node, Not):
            values.append(not values.pop())
        else:
            left = values.pop()
            if isinstance(node, And) and not left:
                values.append(False)
            elif isinstance(node, Or) and left:
                values.append(True)
            elif isinstance(node, Implies) and not left:
                values.append(True)
            else:
                # the right operand decides
                stack.append((node.right, node_env, False))
    return values.pop()


def eval_formula(ground: GroundModel, state: State, formula: Formula) -> bool:
    """
    Evaluates a ground formula in `state`

    An atomic fact is true if it is in the state, a derived fact if its derivation holds.
    `and`, `or` and `->` only evaluate their right operand when the left one does not decide.
    """
    return _evaluate(ground, state, formula, None)


def eval_with_env(ground: GroundModel, state: State, formula: Formula, env: Binding) -> bool:
    """
    Evaluates a formula whose variables take their values from `env`, without substituting
    """
    return _evaluate(ground, state, formula, dict(env))
