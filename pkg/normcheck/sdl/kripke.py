"""
Finite Kripke models: truth of SDL formulas at a world, and exhaustive enumeration of small models
"""
import logging
from dataclasses import dataclass

import z3

from normcheck.config import Limits
from normcheck.exceptions import ParameterValueError, ResourceLimitExceeded
from normcheck.sdl.formula import Conj, Disj, Impl, Neg, Obligation, Permission, Proposition, SdlFormula, check_size
from normcheck.utils.annotations import Dict, FrozenSet, List, Tuple

logger = logging.getLogger("normcheck")


@dataclass(frozen=True)
class KripkeModel:
    """
    Worlds are numbered from 0; world 0 is the designated world.
    `valuation[w]` holds the atoms true at world `w`.
    """
    worlds: Tuple[int, ...]
    edges: Tuple[Tuple[int, int], ...]
    valuation: Tuple[FrozenSet[str], ...]

    def __post_init__(self):
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "edges", tuple(sorted(set((int(a), int(b)) for a, b in self.edges))))
        object.__setattr__(self, "valuation", tuple(frozenset(atoms) for atoms in self.valuation))
        if self.worlds != tuple(range(len(self.worlds))) or not self.worlds:
            raise ParameterValueError("Worlds must be numbered 0..n-1, with at least one world")
        if len(self.valuation) != len(self.worlds):
            raise ParameterValueError("There must be one valuation per world")
        if any(world not in range(len(self.worlds)) for edge in self.edges for world in edge):
            raise ParameterValueError("An edge references an unknown world")

    @property
    def designated(self) -> int:
        return self.worlds[0]

    def successors(self, world: int) -> List[int]:
        return [target for source, target in self.edges if source == world]

    def is_serial(self) -> bool:
        sources = {source for source, _ in self.edges}
        return all(world in sources for world in self.worlds)

    def canonical_key(self) -> tuple:
        return (len(self.worlds), self.edges, tuple(tuple(sorted(atoms)) for atoms in self.valuation))

    def __str__(self) -> str:
        edges = ", ".join("w{0} -> w{1}".format(*edge) for edge in self.edges) or "-"
        valuation = "; ".join("w{world}: {atoms}".format(world=world, atoms=", ".join(sorted(self.valuation[world])) or "-") for world in self.worlds)
        return "{count} world(s); {edges}; {valuation}".format(count=len(self.worlds), edges=edges, valuation=valuation)

    def as_dict(self) -> dict:
        return {
            "worlds": ["w{world}".format(world=world) for world in self.worlds],
            "edges": [["w{0}".format(source), "w{0}".format(target)] for source, target in self.edges],
            "valuation": {"w{world}".format(world=world): sorted(self.valuation[world]) for world in self.worlds}
        }


def holds(model: KripkeModel, formula: SdlFormula, world: int) -> bool:
    """Truth of `formula` at `world` of `model`"""
    if isinstance(formula, Proposition):
        return formula.name in model.valuation[world]
    if isinstance(formula, Neg):
        return not holds(model, formula.operand, world)
    if isinstance(formula, Conj):
        return holds(model, formula.left, world) and holds(model, formula.right, world)
    if isinstance(formula, Disj):
        return holds(model, formula.left, world) or holds(model, formula.right, world)
    if isinstance(formula, Impl):
        return (not holds(model, formula.left, world)) or holds(model, formula.right, world)
    if isinstance(formula, Obligation):
        return all(holds(model, formula.operand, successor) for successor in model.successors(world))
    if isinstance(formula, Permission):
        return any(holds(model, formula.operand, successor) for successor in model.successors(world))
    raise ParameterValueError("Not an SDL formula: {formula!r}".format(formula=formula))


def check_model(model: KripkeModel, formulas) -> bool:
    """Returns True if every formula holds at the designated world"""
    formulas = list(formulas)
    check_size(formulas)
    return all(holds(model, formula, model.designated) for formula in formulas)


class _Translation:
    """Standard translation of SDL formulas over `size` worlds into z3 Boolean constraints"""

    def __init__(self, size: int, atoms: List[str]) -> None:
        self.size = size
        self.atoms = atoms
        self.relation = [[z3.Bool("r_{0}_{1}".format(source, target)) for target in range(size)] for source in range(size)]
        self.values: Dict[Tuple[int, str], z3.BoolRef] = {(world, atom): z3.Bool("v_{0}_{1}".format(world, atom)) for world in range(size) for atom in atoms}

    def variables(self) -> List[z3.BoolRef]:
        return [variable for row in self.relation for variable in row] + list(self.values.values())

    def translate(self, formula: SdlFormula, world: int) -> z3.BoolRef:
        if isinstance(formula, Proposition):
            return self.values[(world, formula.name)]
        if isinstance(formula, Neg):
            return z3.Not(self.translate(formula.operand, world))
        if isinstance(formula, Conj):
            return z3.And(self.translate(formula.left, world), self.translate(formula.right, world))
        if isinstance(formula, Disj):
            return z3.Or(self.translate(formula.left, world), self.translate(formula.right, world))
        if isinstance(formula, Impl):
            return z3.Implies(self.translate(formula.left, world), self.translate(formula.right, world))
        if isinstance(formula, Obligation):
            return z3.And([z3.Implies(self.relation[world][target], self.translate(formula.operand, target)) for target in range(self.size)])
        return z3.Or([z3.And(self.relation[world][target], self.translate(formula.operand, target)) for target in range(self.size)])

    def read(self, model: z3.ModelRef) -> KripkeModel:
        def true(variable) -> bool:
            return z3.is_true(model.eval(variable, model_completion=True))

        edges = [(source, target) for source in range(self.size) for target in range(self.size) if true(self.relation[source][target])]
        valuation = [frozenset(atom for atom in self.atoms if true(self.values[(world, atom)])) for world in range(self.size)]
        return KripkeModel(tuple(range(self.size)), tuple(edges), tuple(valuation))


def enumerate_models(formulas, max_worlds: int, serial: bool = True, limit: int = None) -> List[KripkeModel]:
    """
    Every model with at most `max_worlds` worlds whose designated world satisfies all of `formulas`

    Only the atoms occurring in `formulas` are valuated. Models are listed by size, then canonically.

    Parameters
    ----------
        formulas: iterable of SdlFormula
        max_worlds: int
        serial: bool, default = True
            Only list models whose relation is serial.
        limit: int, default = None
            Stop after this many models.

    Raises
    ------
        ParameterValueError
            If `max_worlds` is not positive.
        ResourceLimitExceeded
            If the valuation space (atoms x worlds) is larger than Limits.ENUMERATION_BITS,
            or a formula has more than Limits.FORMULA_CONNECTIVES connectives.
    """
    formulas = list(formulas)
    check_size(formulas)
    max_worlds = int(max_worlds)
    if max_worlds <= 0:
        raise ParameterValueError("max_worlds must be positive, got {value}".format(value=max_worlds))
    atoms = sorted(set().union(*(formula.atoms() for formula in formulas)))
    if len(atoms) * max_worlds > Limits.ENUMERATION_BITS:
        raise ResourceLimitExceeded("model enumeration", Limits.ENUMERATION_BITS)

    models = []
    for size in range(1, max_worlds + 1):
        translation = _Translation(size, atoms)
        solver = z3.Solver()
        if serial:
            for row in translation.relation:
                solver.add(z3.Or(row))
        for formula in formulas:
            solver.add(translation.translate(formula, 0))
        variables = translation.variables()
        found = []
        while solver.check() == z3.sat:
            model = solver.model()
            found.append(translation.read(model))
            solver.add(z3.Or([variable != model.eval(variable, model_completion=True) for variable in variables]))
            if limit is not None and len(models) + len(found) >= limit:
                break
        models.extend(sorted(found, key=KripkeModel.canonical_key))
        logger.debug("Enumerated {count} model(s) with {size} world(s)".format(count=len(found), size=size))
        if limit is not None and len(models) >= limit:
            return models[:limit]
    return models
