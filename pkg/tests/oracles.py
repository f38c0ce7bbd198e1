"""
Independent reference implementations the tests compare the library against
"""
from re import compile

from normcheck.exceptions import PreconditionViolated
from normcheck.norms.core import And, Atom, Implies, Not, Or, Truth
from normcheck.norms.engine import apply

DOT_ID = r"[A-Za-z_][A-Za-z0-9_]*"
DOT_STRING = r'"(?:[^"\\]|\\.)*"'
DOT_ATTRIBUTES = r"\[\s*{id}\s*=\s*(?:{id}|{string})(?:\s*[,;]?\s*{id}\s*=\s*(?:{id}|{string}))*\s*\]".format(id=DOT_ID, string=DOT_STRING)
DOT_HEADER = compile(r"^\s*(?:strict\s+)?digraph\s+{id}\s*\{{\s*$".format(id=DOT_ID))
DOT_STATEMENTS = (
    compile(r"^\s*{id}\s*=\s*(?:{id}|{string})\s*;?\s*$".format(id=DOT_ID, string=DOT_STRING)),
    compile(r"^\s*(?:node|edge|graph)\s*{attributes}\s*;?\s*$".format(attributes=DOT_ATTRIBUTES)),
    compile(r"^\s*{id}\s*(?:{attributes})?\s*;?\s*$".format(id=DOT_ID, attributes=DOT_ATTRIBUTES)),
    compile(r"^\s*{id}\s*->\s*{id}\s*(?:{attributes})?\s*;?\s*$".format(id=DOT_ID, attributes=DOT_ATTRIBUTES))
)


def is_valid_dot(text: str) -> bool:
    """A minimal checker for one-statement-per-line directed DOT graphs"""
    lines = [line for line in text.split("\n") if line.strip()]
    if len(lines) < 2 or not DOT_HEADER.match(lines[0]) or lines[-1].strip() != "}":
        return False
    return all(any(pattern.match(line) for pattern in DOT_STATEMENTS) for line in lines[1:-1])


def python_expression(formula) -> str:
    """The formula as a Python expression over `env`, a dict from zero-arity fact names to booleans"""
    if isinstance(formula, Truth):
        return repr(formula.value)
    if isinstance(formula, Atom):
        return "env[{symbol!r}]".format(symbol=formula.symbol)
    if isinstance(formula, Not):
        return "(not {operand})".format(operand=python_expression(formula.operand))
    if isinstance(formula, And):
        return "({left} and {right})".format(left=python_expression(formula.left), right=python_expression(formula.right))
    if isinstance(formula, Or):
        return "({left} or {right})".format(left=python_expression(formula.left), right=python_expression(formula.right))
    if isinstance(formula, Implies):
        return "((not {left}) or {right})".format(left=python_expression(formula.left), right=python_expression(formula.right))
    raise TypeError(formula)


def truth_table(formula, env: dict) -> bool:
    return eval(python_expression(formula), {"env": env})


def brute_force_states(ground, initial, horizon: int):
    """
    Depth first enumeration of every executable trace of length <= horizon

    Returns
    -------
        tuple
            (shortest trace length per reachable state, set of (source, act, target) transitions
            taken from states reached in fewer than `horizon` acts)
    """
    distance = {}
    visited = set()

    def visit(state, depth):
        if (state, depth) in visited:
            return
        visited.add((state, depth))
        distance[state] = min(distance.get(state, depth), depth)
        if depth == horizon:
            return
        for act in ground.acts:
            try:
                target, _ = apply(ground, state, act)
            except PreconditionViolated:
                continue
            visit(target, depth + 1)

    visit(initial, 0)
    transitions = set()
    for state, depth in distance.items():
        if depth >= horizon:
            continue
        for act in ground.acts:
            try:
                target, _ = apply(ground, state, act)
            except PreconditionViolated:
                continue
            transitions.add((state, act, target))
    return distance, transitions
