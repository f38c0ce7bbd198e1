"""
Textual model and trace formats

Models are line oriented: every declaration starts at the beginning of a line and
its clauses may continue on indented lines. `#` starts a comment.

    Domain Agent = alice
    Fact borrowed(Agent, Item)
    Act borrow(actor: Agent, item: Item)
        pre: not borrowed(actor, item)
        creates: borrowed(actor, item)
        source: "X SHALL RETURN Y BY DATE DUE."

Parsing never raises on bad input: problems come back as positioned diagnostics.
"""
import logging
from dataclasses import dataclass
from re import compile
from typing import Optional

from normcheck.config import Limits
from normcheck.norms.core import (RESERVED_WORDS, TRUE, ActFrame, And, Atom, Constant, DutyFrame, FactKind, FactSymbol,
                                  Formula, GroundAct, Implies, InitialFacts, Model, Not, ObjectDomain, Or, Parameter,
                                  Severity, Truth, Variable, check_wellformed, default_param_names)
from normcheck.utils.annotations import Dict, List, Tuple
from normcheck.utils.similarity import suggestion

logger = logging.getLogger("normcheck")

IDENT_REGEX = compile(r"[a-z][a-z0-9]*(?:-[a-z0-9]+)*")
DOMAIN_REGEX = compile(r"[A-Z][A-Za-z0-9]*")
PUNCTUATION = {"(": "LPAREN", ")": "RPAREN", ",": "COMMA", ":": "COLON", "=": "EQUALS"}
ESCAPES = {'"': '"', "\\": "\\", "n": "\n"}

KEYWORDS = ("Domain", "Fact", "Act", "Duty", "Init")
ACT_CLAUSES = ("pre", "creates", "terminates", "source")
DUTY_CLAUSES = ("created-by", "enforced-by", "terminated-by", "source")
INDENT = "    "
MAX_NESTING = 100


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    line: int
    column: int

    def __str__(self) -> str:
        return "{line}:{column}: {severity}: {message}".format(line=self.line, column=self.column, severity=self.severity, message=self.message)

    def as_dict(self) -> dict:
        return {"severity": self.severity, "message": self.message, "line": self.line, "column": self.column}


@dataclass(frozen=True)
class Token:
    kind: str
    value: str
    line: int
    column: int
    end: int  # column just after the lexeme

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Trace:
    """An ordered list of ground acts"""
    acts: Tuple[GroundAct, ...] = ()

    def __len__(self) -> int:
        return len(self.acts)

    def __iter__(self):
        return iter(self.acts)

    def __getitem__(self, index):
        return self.acts[index]

    def __add__(self, other: "Trace") -> "Trace":
        return Trace(tuple(self.acts) + tuple(other.acts))


class ParseResult:
    """
    Holds the parsed model (None when an error was found) and every diagnostic
    """

    def __init__(self, model: Optional[Model], diagnostics: List[Diagnostic]) -> None:
        self.model = model
        self.diagnostics = sorted(diagnostics, key=lambda diagnostic: (diagnostic.line, diagnostic.column))

    @property
    def ok(self) -> bool:
        return self.model is not None

    @property
    def errors(self) -> List[Diagnostic]:
        return [diagnostic for diagnostic in self.diagnostics if diagnostic.severity == Severity.ERROR]

    @property
    def warnings(self) -> List[Diagnostic]:
        return [diagnostic for diagnostic in self.diagnostics if diagnostic.severity == Severity.WARNING]

    def __repr__(self) -> str:
        return "ParseResult(ok={ok}, diagnostics={count})".format(ok=self.ok, count=len(self.diagnostics))


class TraceParseResult(ParseResult):
    def __init__(self, trace: Optional[Trace], diagnostics: List[Diagnostic]) -> None:
        super().__init__(None, diagnostics)
        self.trace = trace

    @property
    def ok(self) -> bool:
        return self.trace is not None

    def __repr__(self) -> str:
        return "TraceParseResult(ok={ok}, diagnostics={count})".format(ok=self.ok, count=len(self.diagnostics))


class _Failure(Exception):
    def __init__(self, diagnostic: Diagnostic) -> None:
        super().__init__(diagnostic.message)
        self.diagnostic = diagnostic


# Lexing

def _tokenize_line(text: str, line: int, diagnostics: List[Diagnostic]) -> List[Token]:
    tokens = []
    index = 0
    length = len(text)
    while index < length:
        char = text[index]
        column = index + 1
        if char in " \t\r\f\v\ufeff":
            index += 1
        elif char == "#":
            break
        elif char in PUNCTUATION:
            tokens.append(Token(PUNCTUATION[char], char, line, column, column + 1))
            index += 1
        elif text.startswith("->", index):
            tokens.append(Token("ARROW", "->", line, column, column + 2))
            index += 2
        elif char == '"':
            value = []
            index += 1
            closed = False
            while index < length:
                if text[index] == "\\" and index + 1 < length and text[index + 1] in ESCAPES:
                    value.append(ESCAPES[text[index + 1]])
                    index += 2
                elif text[index] == '"':
                    index += 1
                    closed = True
                    break
                else:
                    value.append(text[index])
                    index += 1
            if not closed:
                diagnostics.append(Diagnostic(Severity.ERROR, "unterminated string", line, column))
            tokens.append(Token("STRING", "".join(value), line, column, index + 1))
        else:
            match = IDENT_REGEX.match(text, index) or DOMAIN_REGEX.match(text, index)
            if match is None:
                diagnostics.append(Diagnostic(Severity.ERROR, "unexpected character {char!r}".format(char=char), line, column))
                index += 1
                continue
            kind = "IDENT" if char.islower() else "DOMAIN"
            tokens.append(Token(kind, match.group(), line, column, match.end() + 1))
            index = match.end()
    return tokens


def _logical_lines(text: str, diagnostics: List[Diagnostic]) -> List[List[Token]]:
    """
    Groups tokens by declaration: an indented line continues the previous declaration
    """
    groups = []
    for number, raw_line in enumerate(text.split("\n"), start=1):
        tokens = _tokenize_line(raw_line, number, diagnostics)
        if not tokens:
            continue
        if raw_line[:1] in (" ", "\t") and groups:
            groups[-1].extend(tokens)
        else:
            groups.append(tokens)
    return groups


def _line_lengths(text: str) -> List[int]:
    return [len(line) for line in text.split("\n")]


# Parsing

class _DeclarationParser:
    """
    Recursive descent over the tokens of a single declaration
    """

    def __init__(self, tokens: List[Token]) -> None:
        self.tokens = tokens
        self.index = 0
        # identifiers that resolve to variables while parsing formulas
        self.scope = frozenset()
        self.depth = 0
        self.connectives = 0

    # cursor helpers

    def peek(self, offset: int = 0) -> Optional[Token]:
        position = self.index + offset
        return self.tokens[position] if position < len(self.tokens) else None

    def at(self, kind: str, value: str = None, offset: int = 0) -> bool:
        token = self.peek(offset)
        return token is not None and token.kind == kind and (value is None or token.value == value)

    def fail(self, message: str, token: Optional[Token] = None):
        if token is None:
            token = self.peek()
        if token is None:
            last = self.tokens[-1]
            raise _Failure(Diagnostic(Severity.ERROR, message + ", found end of declaration", last.line, last.end))
        raise _Failure(Diagnostic(Severity.ERROR, message + ", found `{value}`".format(value=token.value), token.line, token.column))

    def expect(self, kind: str, value: str = None, what: str = None) -> Token:
        if not self.at(kind, value):
            self.fail("expected {what}".format(what=what or ("`" + value + "`" if value else kind.lower())))
        token = self.tokens[self.index]
        self.index += 1
        return token

    def name(self, what: str) -> Token:
        token = self.expect("IDENT", what=what)
        if token.value in RESERVED_WORDS:
            self.fail("`{value}` is reserved and cannot be used as {what}".format(value=token.value, what=what), token)
        return token

    def domain_name(self) -> Token:
        return self.expect("DOMAIN", what="a domain name")

    def finished(self) -> bool:
        return self.index >= len(self.tokens)

    def end(self):
        if not self.finished():
            self.fail("expected end of declaration")

    def comma_list(self, item):
        items = [item()]
        while self.at("COMMA"):
            self.index += 1
            items.append(item())
        return items

    # formulas

    def nest(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            self.fail("formula nested too deeply")

    def connective(self):
        self.connectives += 1
        if self.connectives > Limits.FORMULA_CONNECTIVES:
            token = self.peek()
            raise _Failure(Diagnostic(Severity.ERROR, "formula has more than {limit} connectives".format(limit=Limits.FORMULA_CONNECTIVES), token.line, token.column))
        self.index += 1

    def formula(self) -> Formula:
        if self.depth == 0:
            self.connectives = 0
        self.nest()
        left = self.disjunction()
        if self.at("ARROW"):
            self.connective()
            left = Implies(left, self.formula())
        self.depth -= 1
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.at("IDENT", "or"):
            self.connective()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.negation()
        while self.at("IDENT", "and"):
            self.connective()
            left = And(left, self.negation())
        return left

    def negation(self) -> Formula:
        if self.at("IDENT", "not"):
            self.connective()
            self.nest()
            operand = self.negation()
            self.depth -= 1
            return Not(operand)
        return self.primary()

    def primary(self) -> Formula:
        if self.at("IDENT", "true") or self.at("IDENT", "false"):
            token = self.tokens[self.index]
            self.index += 1
            return Truth(token.value == "true")
        if self.at("LPAREN"):
            self.index += 1
            inner = self.formula()
            self.expect("RPAREN", what="`)`")
            return inner
        if not self.at("IDENT"):
            self.fail("expected a formula")
        return self.atom()

    def term(self):
        token = self.name("a term")
        if token.value in self.scope:
            return Variable(token.value)
        return Constant(token.value)

    def atom(self) -> Atom:
        symbol = self.name("a fact name")
        args = ()
        if self.at("LPAREN"):
            self.index += 1
            args = tuple(self.comma_list(self.term))
            self.expect("RPAREN", what="`)` or `,`")
        return Atom(symbol.value, args)

    def strings(self) -> Tuple[str, ...]:
        return tuple(token.value for token in self.comma_list(lambda: self.expect("STRING", what="a quoted string")))

    def typed_parameter(self) -> Parameter:
        name = self.name("a parameter name")
        self.expect("COLON", what="`:`")
        return Parameter(name.value, self.domain_name().value)

    def head_parameters(self, distinguished: str) -> Tuple[Parameter, Tuple[Parameter, ...]]:
        self.expect("LPAREN", what="`(`")
        self.expect("IDENT", distinguished)
        self.expect("COLON", what="`:`")
        first = Parameter(distinguished, self.domain_name().value)
        rest = []
        while self.at("COMMA"):
            self.index += 1
            rest.append(self.typed_parameter())
        self.expect("RPAREN", what="`)` or `,`")
        return first, tuple(rest)

    def clauses(self, allowed: Tuple[str, ...]) -> Dict[str, Tuple[Token, object]]:
        found = {}
        while not self.finished():
            token = self.peek()
            if token.kind != "IDENT" or token.value not in allowed or not self.at("COLON", offset=1):
                self.fail("expected one of {clauses}".format(clauses=", ".join("`" + clause + ":`" for clause in allowed)))
            if token.value in found:
                self.fail("duplicate `{clause}` clause".format(clause=token.value), token)
            self.index += 2
            found[token.value] = (token, self.clause(token.value))
        return found

    def clause(self, clause: str):
        if clause == "pre":
            return self.formula()
        if clause in ("creates", "terminates"):
            return tuple(self.comma_list(self.atom))
        if clause == "source":
            return self.strings()
        return tuple(token.value for token in self.comma_list(lambda: self.name("an act name")))

    # declarations

    def declaration(self):
        keyword = self.peek()
        if keyword.kind != "DOMAIN" or keyword.value not in KEYWORDS:
            self.fail("expected a declaration ({keywords})".format(keywords=", ".join(KEYWORDS)))
        self.index += 1
        return keyword, getattr(self, "parse_" + keyword.value.lower())()

    def parse_domain(self):
        name = self.domain_name()
        self.expect("EQUALS", what="`=`")
        members = self.comma_list(lambda: self.name("an object constant"))
        self.end()
        return name, ObjectDomain(name.value, tuple(member.value for member in members))

    def fact_parameter(self):
        if self.at("IDENT") and self.at("COLON", offset=1):
            name = self.name("a parameter name").value
            self.index += 1
            return name, self.domain_name().value
        return None, self.domain_name().value

    def parse_fact(self):
        name = self.name("a fact name")
        params = []
        if self.at("LPAREN"):
            self.index += 1
            params = self.comma_list(self.fact_parameter)
            self.expect("RPAREN", what="`)` or `,`")
        domains = tuple(domain for _, domain in params)
        defaults = default_param_names(domains)
        param_names = tuple(explicit or default for (explicit, _), default in zip(params, defaults))
        derivation = None
        if self.at("EQUALS"):
            self.index += 1
            self.scope = frozenset(param_names)
            derivation = self.formula()
        sources = ()
        if not self.finished():
            clauses = self.clauses(("source",))
            sources = clauses["source"][1]
        return name, FactSymbol(name.value, domains, param_names, derivation, sources)

    def parse_act(self):
        name = self.name("an act name")
        actor, params = self.head_parameters("actor")
        self.scope = frozenset(param.name for param in (actor,) + params)
        clauses = self.clauses(ACT_CLAUSES)

        def get(clause, default):
            return clauses[clause][1] if clause in clauses else default
        return name, ActFrame(
            name=name.value,
            actor=actor,
            params=params,
            precondition=get("pre", TRUE),
            creates=get("creates", ()),
            terminates=get("terminates", ()),
            sources=get("source", ())
        )

    def parse_duty(self):
        name = self.name("a duty name")
        holder, params = self.head_parameters("holder")
        clauses = self.clauses(DUTY_CLAUSES)
        for clause in DUTY_CLAUSES[:3]:
            if clause not in clauses:
                self.fail("duty `{name}` is missing its `{clause}:` clause".format(name=name.value, clause=clause), name)
        return name, DutyFrame(
            name=name.value,
            holder=holder,
            params=params,
            created_by=clauses["created-by"][1],
            enforced_by=clauses["enforced-by"][1],
            terminated_by=clauses["terminated-by"][1],
            sources=clauses["source"][1] if "source" in clauses else ()
        )

    def parse_init(self):
        keyword = self.tokens[0]
        self.expect("COLON", what="`:`")
        atoms = self.comma_list(self.atom)
        self.end()
        return keyword, InitialFacts(tuple(atoms))


def _clamp(diagnostic: Diagnostic, lengths: List[int]) -> Diagnostic:
    line = min(max(diagnostic.line, 1), len(lengths))
    column = min(max(diagnostic.column, 1), lengths[line - 1] + 1)
    if (line, column) == (diagnostic.line, diagnostic.column):
        return diagnostic
    return Diagnostic(diagnostic.severity, diagnostic.message, line, column)


def _declaration_position(positions: Dict[str, Tuple[int, int]], name: Optional[str]) -> Tuple[int, int]:
    return positions.get(name, (1, 1))


def parse_model(text: str) -> ParseResult:
    """
    Parses the textual model format

    Returns
    -------
        ParseResult
            `.model` is the Model when no error was found, `.diagnostics` holds every error and warning
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    text = str(text)
    diagnostics = []
    declarations = []
    positions = {}
    for tokens in _logical_lines(text, diagnostics):
        parser = _DeclarationParser(tokens)
        try:
            keyword, (name, declaration) = parser.declaration()
        except _Failure as failure:
            diagnostics.append(failure.diagnostic)
            continue
        declarations.append(declaration)
        key = "Init" if isinstance(declaration, InitialFacts) else declaration.name
        positions.setdefault(key, (name.line, name.column))
        if not isinstance(declaration, (ObjectDomain, InitialFacts)) and not declaration.sources:
            if not isinstance(declaration, FactSymbol) or declaration.kind == FactKind.DERIVED:
                diagnostics.append(Diagnostic(Severity.WARNING, "`{name}` has no `source:`".format(name=declaration.name), keyword.line, keyword.column))

    model = Model(tuple(declarations))
    for issue in check_wellformed(model):
        line, column = _declaration_position(positions, issue.declaration)
        diagnostics.append(Diagnostic(issue.severity, issue.message, line, column))
    if not declarations and not any(diagnostic.severity == Severity.ERROR for diagnostic in diagnostics):
        diagnostics.append(Diagnostic(Severity.WARNING, "empty model", 1, 1))

    lengths = _line_lengths(text)
    diagnostics = [_clamp(diagnostic, lengths) for diagnostic in diagnostics]
    if any(diagnostic.severity == Severity.ERROR for diagnostic in diagnostics):
        logger.debug("The model has {count} error(s)".format(count=sum(diagnostic.severity == Severity.ERROR for diagnostic in diagnostics)))
        return ParseResult(None, diagnostics)
    logger.info("Parsed a model with {count} declaration(s)".format(count=len(declarations)))
    return ParseResult(model, diagnostics)


def parse_trace(text: str, model: Model) -> TraceParseResult:
    """
    Parses a trace: one `act(c1, c2, ...)` per line, resolved against `model`
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    text = str(text)
    diagnostics = []
    acts = []
    act_names = [act.name for act in model.acts]
    for number, raw_line in enumerate(text.split("\n"), start=1):
        tokens = _tokenize_line(raw_line, number, diagnostics)
        if not tokens:
            continue
        parser = _DeclarationParser(tokens)
        try:
            name = parser.name("an act name")
            arguments = []
            if parser.at("LPAREN"):
                parser.index += 1
                arguments = parser.comma_list(lambda: parser.name("an object constant"))
                parser.expect("RPAREN", what="`)` or `,`")
            parser.end()
        except _Failure as failure:
            diagnostics.append(failure.diagnostic)
            continue

        frame = model.act(name.value)
        if frame is None:
            diagnostics.append(Diagnostic(Severity.ERROR, "unknown act `{name}`{hint}".format(name=name.value, hint=suggestion(act_names, name.value)), name.line, name.column))
            continue
        if len(arguments) != len(frame.all_params):
            diagnostics.append(Diagnostic(Severity.ERROR, "`{name}` takes {expected} argument(s), {given} given".format(name=name.value, expected=len(frame.all_params), given=len(arguments)), name.line, name.column))
            continue
        valid = True
        for param, argument in zip(frame.all_params, arguments):
            domain = model.domain(param.domain)
            if domain is None or argument.value not in domain.members:
                members = domain.members if domain is not None else ()
                diagnostics.append(Diagnostic(Severity.ERROR, "unknown constant `{value}` for `{param}`{hint}".format(value=argument.value, param=param, hint=suggestion(members, argument.value)), argument.line, argument.column))
                valid = False
        if valid:
            acts.append(GroundAct.of(frame, *(argument.value for argument in arguments)))

    lengths = _line_lengths(text)
    diagnostics = [_clamp(diagnostic, lengths) for diagnostic in diagnostics]
    if any(diagnostic.severity == Severity.ERROR for diagnostic in diagnostics):
        return TraceParseResult(None, diagnostics)
    return TraceParseResult(Trace(tuple(acts)), diagnostics)


# Serialization

def _quote(value: str) -> str:
    return '"' + value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _sources(sources: Tuple[str, ...]) -> List[str]:
    if not sources:
        return []
    return [INDENT + "source: " + ", ".join(_quote(source) for source in sources)]


def _serialize_fact(fact: FactSymbol) -> List[str]:
    head = "Fact " + fact.name
    if fact.params:
        if tuple(fact.param_names) == default_param_names(fact.params):
            head += "(" + ", ".join(fact.params) + ")"
        else:
            head += "(" + ", ".join("{name}: {domain}".format(name=name, domain=domain) for name, domain in zip(fact.param_names, fact.params)) + ")"
    if fact.derivation is not None:
        head += " = " + str(fact.derivation)
    return [head] + _sources(fact.sources)


def _serialize_act(act: ActFrame) -> List[str]:
    lines = ["Act {name}({params})".format(name=act.name, params=", ".join(str(param) for param in act.all_params))]
    if act.precondition != TRUE:
        lines.append(INDENT + "pre: " + str(act.precondition))
    if act.creates:
        lines.append(INDENT + "creates: " + ", ".join(str(atom) for atom in act.creates))
    if act.terminates:
        lines.append(INDENT + "terminates: " + ", ".join(str(atom) for atom in act.terminates))
    return lines + _sources(act.sources)


def _serialize_duty(duty: DutyFrame) -> List[str]:
    lines = ["Duty {name}({params})".format(name=duty.name, params=", ".join(str(param) for param in duty.all_params))]
    for role, act_names in duty.roles():
        lines.append(INDENT + role + ": " + ", ".join(act_names))
    return lines + _sources(duty.sources)


def serialize_model(model: Model) -> str:
    """
    Canonical text of a model: declarations in their original order, clauses on indented lines
    """
    lines = []
    for declaration in model.declarations:
        if isinstance(declaration, ObjectDomain):
            lines.append("Domain {name} = {members}".format(name=declaration.name, members=", ".join(declaration.members)))
        elif isinstance(declaration, FactSymbol):
            lines.extend(_serialize_fact(declaration))
        elif isinstance(declaration, ActFrame):
            lines.extend(_serialize_act(declaration))
        elif isinstance(declaration, DutyFrame):
            lines.extend(_serialize_duty(declaration))
        else:
            lines.append("Init: " + ", ".join(str(atom) for atom in declaration.atoms))
    return "\n".join(lines) + ("\n" if lines else "")
