"""
Standard deontic logic formulas: syntax tree, parser and negation normal form

    p & O(q -> r)
    ~O(p) | P(~q)
"""
from dataclasses import dataclass
from re import compile
from typing import Optional

from normcheck.config import Limits
from normcheck.exceptions import ResourceLimitExceeded, SdlSyntaxError
from normcheck.norms.core import Severity
from normcheck.norms.parser import MAX_NESTING, Diagnostic
from normcheck.utils.annotations import FrozenSet, List, Tuple

ATOM_REGEX = compile(r"[a-z][a-z0-9_]*")
SYMBOLS = {"~": "NOT", "&": "AND", "|": "OR", "(": "LPAREN", ")": "RPAREN"}
COMMENT = "#"


class SdlFormula:
    precedence = 5

    def children(self) -> Tuple["SdlFormula", ...]:
        return ()

    def atoms(self) -> FrozenSet[str]:
        result = set()
        stack = [self]
        while stack:
            formula = stack.pop()
            if isinstance(formula, Proposition):
                result.add(formula.name)
            stack.extend(formula.children())
        return frozenset(result)

    def connectives(self) -> int:
        """The number of `~`, `&`, `|`, `->`, `O` and `P` nodes"""
        count = 0
        stack = [self]
        while stack:
            children = stack.pop().children()
            if children:
                count += 1
                stack.extend(children)
        return count

    def modal_depth(self) -> int:
        depths = [child.modal_depth() for child in self.children()]
        return max(depths, default=0) + (1 if isinstance(self, (Obligation, Permission)) else 0)

    def _wrap(self, formula: "SdlFormula", parenthesize: bool) -> str:
        return "(" + str(formula) + ")" if parenthesize else str(formula)


@dataclass(frozen=True)
class Proposition(SdlFormula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Neg(SdlFormula):
    operand: SdlFormula
    precedence = 4

    def children(self):
        return (self.operand,)

    def __str__(self) -> str:
        return "~" + self._wrap(self.operand, self.operand.precedence < self.precedence)


@dataclass(frozen=True)
class _Binary(SdlFormula):
    left: SdlFormula
    right: SdlFormula
    symbol = "?"

    def children(self):
        return (self.left, self.right)

    def __str__(self) -> str:
        # `&` and `|` group to the left
        return "{left} {symbol} {right}".format(
            left=self._wrap(self.left, self.left.precedence < self.precedence),
            symbol=self.symbol,
            right=self._wrap(self.right, self.right.precedence <= self.precedence)
        )


@dataclass(frozen=True)
class Conj(_Binary):
    precedence = 3
    symbol = "&"


@dataclass(frozen=True)
class Disj(_Binary):
    precedence = 2
    symbol = "|"


@dataclass(frozen=True)
class Impl(_Binary):
    precedence = 1
    symbol = "->"

    def __str__(self) -> str:
        return "{left} -> {right}".format(
            left=self._wrap(self.left, self.left.precedence <= self.precedence),
            right=self._wrap(self.right, self.right.precedence < self.precedence)
        )


@dataclass(frozen=True)
class Obligation(SdlFormula):
    operand: SdlFormula

    def children(self):
        return (self.operand,)

    def __str__(self) -> str:
        return "O(" + str(self.operand) + ")"


@dataclass(frozen=True)
class Permission(SdlFormula):
    operand: SdlFormula

    def children(self):
        return (self.operand,)

    def __str__(self) -> str:
        return "P(" + str(self.operand) + ")"


class SdlParseResult:
    def __init__(self, formula: Optional[SdlFormula], diagnostics: List[Diagnostic]) -> None:
        self.formula = formula
        self.diagnostics = list(diagnostics)

    @property
    def ok(self) -> bool:
        return self.formula is not None

    def __repr__(self) -> str:
        return "SdlParseResult(formula={formula}, diagnostics={count})".format(formula=self.formula, count=len(self.diagnostics))


class SdlFileResult:
    def __init__(self, formulas: List[SdlFormula], diagnostics: List[Diagnostic]) -> None:
        self.formulas = list(formulas)
        self.diagnostics = list(diagnostics)

    @property
    def ok(self) -> bool:
        return not any(diagnostic.severity == Severity.ERROR for diagnostic in self.diagnostics)

    def __repr__(self) -> str:
        return "SdlFileResult(formulas={formulas}, diagnostics={count})".format(formulas=len(self.formulas), count=len(self.diagnostics))


class _Failure(Exception):
    def __init__(self, message: str, column: int) -> None:
        super().__init__(message)
        self.message = message
        self.column = column


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while position < len(text):
        char = text[position]
        if char.isspace():
            position += 1
        elif text.startswith("->", position):
            tokens.append(("IMPLIES", "->", position + 1))
            position += 2
        elif char in SYMBOLS:
            tokens.append((SYMBOLS[char], char, position + 1))
            position += 1
        elif char in ("O", "P"):
            tokens.append((char, char, position + 1))
            position += 1
        else:
            match = ATOM_REGEX.match(text, position)
            if match is None:
                raise _Failure("unexpected character `{char}`".format(char=char), position + 1)
            tokens.append(("ATOM", match.group(), position + 1))
            position = match.end()
    return tokens


class _FormulaParser:
    """
    formula     := disjunction ['->' formula]
    disjunction := conjunction {'|' conjunction}
    conjunction := unary {'&' unary}
    unary       := '~' unary | primary
    primary     := atom | 'O' '(' formula ')' | 'P' '(' formula ')' | '(' formula ')'
    """

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0
        self.depth = 0
        self.connectives = 0

    def peek(self) -> Optional[Tuple[str, str, int]]:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def at(self, kind: str) -> bool:
        token = self.peek()
        return token is not None and token[0] == kind

    def fail(self, expected: str):
        token = self.peek()
        if token is None:
            raise _Failure("expected {expected}, found end of input".format(expected=expected), len(self.text.rstrip()) + 1)
        raise _Failure("expected {expected}, found `{value}`".format(expected=expected, value=token[1]), token[2])

    def expect(self, kind: str, expected: str):
        if not self.at(kind):
            self.fail(expected)
        self.index += 1

    def connective(self):
        self.connectives += 1
        if self.connectives > Limits.FORMULA_CONNECTIVES:
            raise _Failure("formula has more than {limit} connectives".format(limit=Limits.FORMULA_CONNECTIVES), self.peek()[2])
        self.index += 1

    def parse(self) -> SdlFormula:
        formula = self.formula()
        if self.peek() is not None:
            self.fail("an operator or end of input")
        return formula

    def formula(self) -> SdlFormula:
        self.depth += 1
        if self.depth > MAX_NESTING:
            token = self.peek()
            raise _Failure("formula nested too deeply", token[2] if token else 1)
        try:
            left = self.disjunction()
            if self.at("IMPLIES"):
                self.connective()
                return Impl(left, self.formula())
            return left
        finally:
            self.depth -= 1

    def disjunction(self) -> SdlFormula:
        formula = self.conjunction()
        while self.at("OR"):
            self.connective()
            formula = Disj(formula, self.conjunction())
        return formula

    def conjunction(self) -> SdlFormula:
        formula = self.unary()
        while self.at("AND"):
            self.connective()
            formula = Conj(formula, self.unary())
        return formula

    def unary(self) -> SdlFormula:
        negations = 0
        while self.at("NOT"):
            self.connective()
            negations += 1
        formula = self.primary()
        for _ in range(negations):
            formula = Neg(formula)
        return formula

    def primary(self) -> SdlFormula:
        token = self.peek()
        if token is None:
            self.fail("a formula")
        kind = token[0]
        if kind == "ATOM":
            self.index += 1
            return Proposition(token[1])
        if kind in ("O", "P"):
            self.connective()
            self.expect("LPAREN", "`(` after `{operator}`".format(operator=kind))
            operand = self.formula()
            self.expect("RPAREN", "`)`")
            return Obligation(operand) if kind == "O" else Permission(operand)
        if kind == "LPAREN":
            self.index += 1
            formula = self.formula()
            self.expect("RPAREN", "`)`")
            return formula
        self.fail("a formula")


def sdl_parse(text: str, line: int = 1) -> SdlParseResult:
    """
    Parses one SDL formula, never raising on bad input

    Parameters
    ----------
        text: str
        line: int, default = 1
            The line number given to diagnostics.
    """
    text = str(text)
    try:
        formula = _FormulaParser(text).parse()
    except _Failure as failure:
        return SdlParseResult(None, [Diagnostic(Severity.ERROR, failure.message, line, failure.column)])
    return SdlParseResult(formula, [])


def parse_formula(text: str) -> SdlFormula:
    """
    Parses one SDL formula

    Raises
    ------
        SdlSyntaxError
            If `text` is not a formula.
    """
    result = sdl_parse(text)
    if not result.ok:
        raise SdlSyntaxError(result.diagnostics)
    return result.formula


def parse_formula_file(text: str) -> SdlFileResult:
    """
    Parses a formula file: one formula per line, blank lines and `#` comments ignored
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    formulas = []
    diagnostics = []
    for number, line in enumerate(str(text).split("\n"), start=1):
        content = line.split(COMMENT, 1)[0]
        if not content.strip():
            continue
        result = sdl_parse(content, number)
        diagnostics.extend(result.diagnostics)
        if result.ok:
            formulas.append(result.formula)
    return SdlFileResult(formulas, diagnostics)


def _nnf(formula: SdlFormula, positive: bool) -> SdlFormula:
    if isinstance(formula, Proposition):
        return formula if positive else Neg(formula)
    if isinstance(formula, Neg):
        return _nnf(formula.operand, not positive)
    if isinstance(formula, Conj):
        if positive:
            return Conj(_nnf(formula.left, True), _nnf(formula.right, True))
        return Disj(_nnf(formula.left, False), _nnf(formula.right, False))
    if isinstance(formula, Disj):
        if positive:
            return Disj(_nnf(formula.left, True), _nnf(formula.right, True))
        return Conj(_nnf(formula.left, False), _nnf(formula.right, False))
    if isinstance(formula, Impl):
        if positive:
            return Disj(_nnf(formula.left, False), _nnf(formula.right, True))
        return Conj(_nnf(formula.left, True), _nnf(formula.right, False))
    if isinstance(formula, Obligation):
        inner = Obligation(_nnf(formula.operand, True))
        return inner if positive else Neg(inner)
    # P(a) is ~O(~a)
    inner = Obligation(_nnf(formula.operand, False))
    return Neg(inner) if positive else inner


def check_size(formulas) -> None:
    """
    Raises ResourceLimitExceeded when a formula has more than Limits.FORMULA_CONNECTIVES connectives
    """
    for formula in formulas:
        if formula.connectives() > Limits.FORMULA_CONNECTIVES:
            raise ResourceLimitExceeded("formula size", Limits.FORMULA_CONNECTIVES)


def normalize(formula: SdlFormula) -> SdlFormula:
    """
    Negation normal form: `->` and `P` eliminated, `~` only in front of atoms and `O`

    >>> str(normalize(parse_formula("~(p -> q)")))
    'p & ~q'
    >>> str(normalize(parse_formula("P(p)")))
    '~O(~p)'

    Raises
    ------
        ResourceLimitExceeded
            If the formula has more than Limits.FORMULA_CONNECTIVES connectives.
    """
    check_size([formula])
    return _nnf(formula, True)


def is_normal(formula: SdlFormula) -> bool:
    if isinstance(formula, (Impl, Permission)):
        return False
    if isinstance(formula, Neg):
        return isinstance(formula.operand, Proposition) or (isinstance(formula.operand, Obligation) and is_normal(formula.operand))
    return all(is_normal(child) for child in formula.children())
