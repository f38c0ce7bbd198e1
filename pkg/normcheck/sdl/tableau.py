"""
Tableau prover for standard deontic logic (KD), with plain K available by dropping seriality

Formulas are first put in negation normal form. Every world is saturated with the
propositional rules, then each `~O(a)` opens a successor holding `~a` and the content of
every `O(...)` of the world. In KD a world with obligations but no `~O` still gets one
successor. The search is depth-first and backtracks over disjunctions.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from normcheck.config import Limits, resolve_cap
from normcheck.exceptions import ResourceLimitExceeded
from normcheck.sdl.formula import Conj, Disj, Neg, Obligation, Proposition, SdlFormula, normalize
from normcheck.sdl.kripke import KripkeModel
from normcheck.utils.annotations import FrozenSet, List
from normcheck.utils.lru_cacher import LRUDictCache

logger = logging.getLogger("normcheck")

_results_cache = LRUDictCache(512)


class Rule():
    ALPHA = "and"
    BETA = "or"
    CLASH = "clash"
    DIAMOND = "not-ought"
    SERIAL = "serial"


@dataclass(frozen=True)
class Step:
    """One rule application: the world it happened in and the formula it was applied to"""
    world: int
    rule: str
    formula: str

    def __str__(self) -> str:
        return "w{world}: {rule} {formula}".format(world=self.world, rule=self.rule, formula=self.formula)


class TableauResult:
    """
    Attributes
    ----------
        satisfiable: bool
        model: KripkeModel or None
            A model of the formulas when they are satisfiable.
        certificate: list of Step
            The closed tableau when they are not, empty otherwise.
        nodes: int
            The number of branches visited.
    """

    def __init__(self, satisfiable: bool, model: Optional[KripkeModel], certificate: List[Step], nodes: int) -> None:
        self.satisfiable = bool(satisfiable)
        self.model = model
        self.certificate = list(certificate)
        self.nodes = int(nodes)

    @property
    def verdict(self) -> str:
        return "satisfiable" if self.satisfiable else "unsatisfiable"

    def __repr__(self) -> str:
        return "TableauResult(verdict={verdict}, nodes={nodes})".format(verdict=self.verdict, nodes=self.nodes)


class _World:
    def __init__(self, atoms: FrozenSet[str], children: List["_World"]) -> None:
        self.atoms = atoms
        self.children = children


class _Tableau:
    def __init__(self, serial: bool, budget: int) -> None:
        self.serial = serial
        self.budget = budget
        self.nodes = 0
        self.worlds = 0
        self.steps: List[Step] = []

    def tick(self):
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitExceeded("tableau", self.budget)

    def branches(self, world: int, todo: List[SdlFormula], literals: set, boxes: list, diamonds: list):
        """Yields the open saturations of `todo` as (literals, boxes, diamonds)"""
        self.tick()
        while todo:
            formula = todo.pop()
            if isinstance(formula, Proposition) or (isinstance(formula, Neg) and isinstance(formula.operand, Proposition)):
                complement = formula.operand if isinstance(formula, Neg) else Neg(formula)
                if complement in literals:
                    self.steps.append(Step(world, Rule.CLASH, str(formula)))
                    return
                literals.add(formula)
            elif isinstance(formula, Conj):
                self.steps.append(Step(world, Rule.ALPHA, str(formula)))
                todo.extend((formula.right, formula.left))
            elif isinstance(formula, Disj):
                self.steps.append(Step(world, Rule.BETA, str(formula)))
                for option in (formula.left, formula.right):
                    yield from self.branches(world, todo + [option], set(literals), list(boxes), list(diamonds))
                return
            elif isinstance(formula, Obligation):
                if formula.operand not in boxes:
                    boxes.append(formula.operand)
            elif formula.operand.operand not in diamonds:
                # ~O(a)
                diamonds.append(formula.operand.operand)
        yield literals, boxes, diamonds

    def satisfy(self, formulas: List[SdlFormula]) -> Optional[_World]:
        world = self.worlds
        self.worlds += 1
        for literals, boxes, diamonds in self.branches(world, list(formulas), set(), [], []):
            requirements = [(Rule.DIAMOND, diamond, [normalize(Neg(diamond))] + boxes) for diamond in diamonds]
            if not requirements and boxes and self.serial:
                requirements = [(Rule.SERIAL, boxes[0], list(boxes))]
            children = []
            for rule, formula, requirement in requirements:
                self.steps.append(Step(world, rule, str(formula)))
                child = self.satisfy(requirement)
                if child is None:
                    break
                children.append(child)
            else:
                atoms = frozenset(literal.name for literal in literals if isinstance(literal, Proposition))
                return _World(atoms, children)
        return None


def _extract(root: _World, serial: bool) -> KripkeModel:
    worlds = []
    edges = []
    stack = [(root, None)]
    while stack:
        world, parent = stack.pop()
        index = len(worlds)
        worlds.append(world)
        if parent is not None:
            edges.append((parent, index))
        stack.extend((child, index) for child in reversed(world.children))
    for index, world in enumerate(worlds):
        # worlds without obligations: a self-loop keeps the relation serial
        if serial and not world.children:
            edges.append((index, index))
    return KripkeModel(tuple(range(len(worlds))), tuple(edges), tuple(world.atoms for world in worlds))


def consistent(formulas, serial: bool = True, node_budget: int = None) -> TableauResult:
    """
    Decides whether `formulas` have a common model

    Parameters
    ----------
        formulas: iterable of SdlFormula
        serial: bool, default = True
            KD when True, K when False.
        node_budget: int, default = None
            Defaults to `NORMCHECK_NODE_CAP` or Limits.TABLEAU_NODE_BUDGET.

    Raises
    ------
        ResourceLimitExceeded
            If the search visits more than `node_budget` branches,
            or a formula has more than Limits.FORMULA_CONNECTIVES connectives.
    """
    normalized = tuple(dict.fromkeys(normalize(formula) for formula in formulas))
    budget = resolve_cap(node_budget, Limits.TABLEAU_NODE_BUDGET)
    key = (frozenset(normalized), bool(serial), budget)
    cached = _results_cache.get(key)
    if cached is not None:
        logger.debug("Tableau result served from the cache ({hits} hit(s) so far)".format(hits=_results_cache.hits))
        return cached
    tableau = _Tableau(bool(serial), budget)
    root = tableau.satisfy(list(normalized))
    if root is None:
        result = TableauResult(False, None, tableau.steps, tableau.nodes)
    else:
        result = TableauResult(True, _extract(root, bool(serial)), [], tableau.nodes)
    logger.debug("Tableau over {count} formula(s): {verdict} after {nodes} node(s)".format(count=len(normalized), verdict=result.verdict, nodes=result.nodes))
    _results_cache[key] = result
    return result


def entails(premises, conclusion: SdlFormula, serial: bool = True, node_budget: int = None) -> bool:
    """Returns True if every model of `premises` satisfies `conclusion`"""
    return not consistent(list(premises) + [Neg(conclusion)], serial=serial, node_budget=node_budget).satisfiable
