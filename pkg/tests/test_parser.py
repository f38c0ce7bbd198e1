from hypothesis import given, settings
from hypothesis import strategies as st

from normcheck.norms.core import GroundAct, Severity, Variable
from normcheck.norms.parser import MAX_NESTING, parse_model, parse_trace, serialize_model
from normcheck.utils.files import asset_path, read_text
from tests.generators import SEEDED, fixture, norm_models

HEADER = "Domain Agent = alice\nDomain Item = b1\nFact borrowed(Agent, Item)\n"


def library_text() -> str:
    return read_text(asset_path("library.norm"))


def test_parse_library():
    print("[test] --> Testing normcheck.norms.parser.parse_model")
    result = parse_model(library_text())
    assert result.ok
    assert result.warnings == []
    model = result.model
    assert [act.name for act in model.acts] == ["borrow", "due-date-passes", "return", "take-disciplinary-action"]
    assert [duty.name for duty in model.duties] == ["return-duty"]
    assert [domain.name for domain in model.domains] == ["Agent", "Item", "Clock", "Staff"]
    duty = model.duty("return-duty")
    assert duty.created_by == ("borrow",)
    assert duty.enforced_by == ("take-disciplinary-action",)
    assert duty.terminated_by == ("return",)
    assert str(model.act("due-date-passes").precondition) == "borrowed(holder, item) and not returned(holder, item)"
    assert model.act("return").sources[1].startswith("IF X RETURNS Y")


def test_parse_empty_model():
    print("[test] --> Testing normcheck.norms.parser.parse_model (empty model)")
    for text in ("", "\n\n", "# nothing but a comment\n"):
        result = parse_model(text)
        assert result.ok
        assert len(result.model.declarations) == 0
        assert [(warning.message, warning.line, warning.column) for warning in result.warnings] == [("empty model", 1, 1)]


def test_parse_error_position():
    print("[test] --> Testing normcheck.norms.parser.parse_model (error position)")
    result = parse_model("Act borrow(actor: Agent")
    assert not result.ok
    assert len(result.errors) == 1
    error = result.errors[0]
    assert (error.line, error.column) == (1, 24)
    assert error.message == "expected `)` or `,`, found end of declaration"
    assert str(error) == "1:24: error: expected `)` or `,`, found end of declaration"


def test_parse_errors():
    print("[test] --> Testing normcheck.norms.parser.parse_model (errors)")
    result = parse_model(HEADER + "Act borrow(actor: Agent, item: Item)\n    pre: borrowed(actor, item)\n    pre: true\n    source: \"S\"\n")
    assert [error.message for error in result.errors] == ["duplicate `pre` clause"]
    assert (result.errors[0].line, result.errors[0].column) == (6, 5)

    result = parse_model(HEADER + "Act borrow(actor: Agent)\n    source: \"S\"\nDuty d(holder: Agent)\n    created-by: borrow\n    terminated-by: borrow\n    source: \"S\"\n")
    assert [error.message for error in result.errors] == ["duty `d` is missing its `enforced-by:` clause"]
    assert (result.errors[0].line, result.errors[0].column) == (6, 6)

    result = parse_model("Domain Agent = alice\nWhatever\n")
    assert result.errors[0].line == 2
    assert result.errors[0].message.startswith("expected a declaration")

    result = parse_model("Domain Agent = alice\nFact and(Agent)\n")
    assert "`and` is reserved" in result.errors[0].message

    result = parse_model("Domain Agent = alice\nAct x(actor: Agent)\n    source: \"unterminated\n")
    assert "unterminated string" in [error.message for error in result.errors]

    result = parse_model("Domain Agent = alice\nFact f(Agent) = g(agent)\n    source: \"S\"\n")
    assert result.errors[0].message == "unknown fact `g`"
    assert (result.errors[0].line, result.errors[0].column) == (2, 6)


def test_parse_wellformedness_errors():
    print("[test] --> Testing normcheck.norms.parser.parse_model (well-formedness)")
    result = parse_model(read_text(fixture("unknown-act.norm")))
    assert not result.ok
    assert len(result.errors) == 1
    assert "unknown act `shelve`" in result.errors[0].message
    assert result.errors[0].line == 7


def test_parse_clause_order():
    print("[test] --> Testing normcheck.norms.parser.parse_model (clause order)")
    first = parse_model(HEADER + "Act borrow(actor: Agent, item: Item)\n    pre: not borrowed(actor, item)\n    creates: borrowed(actor, item)\n    source: \"S\"\n")
    second = parse_model(HEADER + "Act borrow(actor: Agent, item: Item)\n    source: \"S\"\n    creates: borrowed(actor, item)\n    pre: not borrowed(actor, item)\n")
    assert first.ok and second.ok
    assert first.model == second.model
    # a clause on the declaration line itself
    third = parse_model(HEADER + "Act borrow(actor: Agent, item: Item) pre: not borrowed(actor, item) creates: borrowed(actor, item) source: \"S\"\n")
    assert third.model == first.model


def test_parse_variables():
    print("[test] --> Testing normcheck.norms.parser.parse_model (variables and constants)")
    result = parse_model(HEADER + "Act borrow(actor: Agent, item: Item)\n    pre: not borrowed(alice, item)\n    source: \"S\"\n")
    atom = result.model.act("borrow").precondition.operand
    assert isinstance(atom.args[1], Variable)
    assert not isinstance(atom.args[0], Variable)


def test_source_warnings():
    print("[test] --> Testing normcheck.norms.parser.parse_model (missing sources)")
    result = parse_model(HEADER + "Fact free(Agent, Item) = not borrowed(agent, item)\nAct borrow(actor: Agent, item: Item)\n    creates: borrowed(actor, item)\n")
    assert result.ok
    assert [(warning.message, warning.line) for warning in result.warnings] == [
        ("`free` has no `source:`", 4),
        ("`borrow` has no `source:`", 5)
    ]


def test_named_fact_parameters():
    print("[test] --> Testing normcheck.norms.parser.parse_model (named fact parameters)")
    result = parse_model("Domain Agent = alice, bob\nFact likes(who: Agent, whom: Agent)\nFact friends(Agent, Agent) = likes(agent, agent-2) and likes(agent-2, agent)\n    source: \"S\"\n")
    assert result.ok
    assert result.model.fact("likes").param_names == ("who", "whom")
    assert result.model.fact("friends").param_names == ("agent", "agent-2")
    text = serialize_model(result.model)
    assert "Fact likes(who: Agent, whom: Agent)\n" in text
    assert "Fact friends(Agent, Agent) = likes(agent, agent-2) and likes(agent-2, agent)\n" in text
    assert parse_model(text).model == result.model


def test_source_escapes():
    print("[test] --> Testing normcheck.norms.parser.parse_model (string escapes)")
    result = parse_model("Domain Agent = alice\nAct speak(actor: Agent)\n    source: \"SAY \\\"HELLO\\\"\", \"back\\\\slash\", \"two\\nlines\"\n")
    assert result.ok
    assert result.model.act("speak").sources == ('SAY "HELLO"', "back\\slash", "two\nlines")
    assert parse_model(serialize_model(result.model)).model == result.model


def test_parse_nesting_limit():
    print("[test] --> Testing normcheck.norms.parser.parse_model (nesting limit)")
    depth = MAX_NESTING + 5
    result = parse_model("Domain Agent = alice\nFact f\nFact g = " + "(" * depth + "f" + ")" * depth + "\n")
    assert not result.ok
    assert "nested too deeply" in result.errors[0].message
    result = parse_model("Domain Agent = alice\nFact f\nFact g = " + "not " * depth + "f\n")
    assert "nested too deeply" in result.errors[0].message


def test_parse_connective_limit():
    print("[test] --> Testing normcheck.norms.parser.parse_model (connective limit)")
    # flat chains do not nest but still build deep trees
    result = parse_model("Domain Agent = alice\nFact f\nFact g = " + " and ".join(["f"] * 1500) + "\nAct a(actor: Agent)\n    pre: g\n")
    assert not result.ok
    error = result.errors[0]
    assert error.message == "formula has more than 128 connectives"
    # at the 129th `and`
    assert (error.line, error.column) == (3, 780)

    result = parse_model("Domain Agent = alice\nFact f\nAct a(actor: Agent)\n    pre: " + " or ".join(["f"] * 200) + "\n")
    assert result.errors[0].message == "formula has more than 128 connectives"
    assert result.errors[0].line == 4

    result = parse_model("Domain Agent = alice\nFact f\nFact g = " + " and ".join(["f"] * 129) + "\n")
    assert result.ok
    # the count starts over for every formula
    result = parse_model("Domain Agent = alice\nFact f\nFact g = " + " and ".join(["f"] * 100) + "\nFact h = " + " or ".join(["f"] * 100) + "\n")
    assert result.ok


def test_parse_trace():
    print("[test] --> Testing normcheck.norms.parser.parse_trace")
    model = parse_model(library_text()).model
    result = parse_trace(read_text(asset_path("overdue.trace")), model)
    assert result.ok
    assert [str(act) for act in result.trace] == ["borrow(alice, b1)", "due-date-passes(clock, alice, b1)", "take-disciplinary-action(librarian, alice, b1)"]
    assert result.trace[0] == GroundAct.of(model.act("borrow"), "alice", "b1")
    assert len(parse_trace("", model).trace) == 0

    result = parse_trace("borrow(alice)\n", model)
    assert not result.ok
    assert result.errors[0].message == "`borrow` takes 2 argument(s), 1 given"

    result = parse_trace("borrow(alice, b1)\nborow(alice, b1)\n", model)
    assert not result.ok
    assert result.trace is None
    assert result.errors[0].message == "unknown act `borow` (did you mean `borrow`?)"
    assert (result.errors[0].line, result.errors[0].column) == (2, 1)

    result = parse_trace("borrow(alice, b2)\n", model)
    assert result.errors[0].message.startswith("unknown constant `b2` for `item: Item`")
    assert (result.errors[0].line, result.errors[0].column) == (1, 15)

    result = parse_trace("borrow(alice b1)\n", model)
    assert result.errors[0].message == "expected `)` or `,`, found `b1`"


def test_serialize_model():
    print("[test] --> Testing normcheck.norms.parser.serialize_model")
    model = parse_model("Domain Agent = alice, bob").model
    assert serialize_model(model) == "Domain Agent = alice, bob\n"
    assert serialize_model(parse_model("").model) == ""

    model = parse_model(library_text()).model
    text = serialize_model(model)
    assert serialize_model(parse_model(text).model) == text
    assert parse_model(text).model == model
    assert "Act borrow(actor: Agent, item: Item)\n    pre: not borrowed(actor, item)\n    creates: borrowed(actor, item)\n" in text
    assert "Duty return-duty(holder: Agent, item: Item)\n    created-by: borrow\n    enforced-by: take-disciplinary-action\n    terminated-by: return\n" in text


def test_serialize_init():
    print("[test] --> Testing normcheck.norms.parser.serialize_model (initial facts)")
    result = parse_model(HEADER + "Init: borrowed(alice, b1)\n")
    assert result.ok
    assert [str(atom) for atom in result.model.initial_facts] == ["borrowed(alice, b1)"]
    assert serialize_model(result.model).endswith("Init: borrowed(alice, b1)\n")


@settings(SEEDED, max_examples=150)
@given(norm_models())
def test_serialize_roundtrip(model):
    text = serialize_model(model)
    result = parse_model(text)
    assert result.ok, result.diagnostics
    assert result.model == model
    assert serialize_model(result.model) == text


def _in_bounds(text, diagnostics):
    lines = text.split("\n")
    for diagnostic in diagnostics:
        assert diagnostic.severity in (Severity.ERROR, Severity.WARNING)
        assert 1 <= diagnostic.line <= len(lines)
        assert 1 <= diagnostic.column <= len(lines[diagnostic.line - 1]) + 1


NOISE = st.text(alphabet="DomainFactActDutyInit =(),:#\"\\\n -><abc123XYZ", max_size=120)


@settings(SEEDED, max_examples=300)
@given(NOISE)
def test_parse_never_raises(text):
    result = parse_model(text)
    _in_bounds(text, result.diagnostics)
    assert result.ok == (result.errors == [])


@settings(SEEDED, max_examples=100)
@given(st.binary(max_size=80))
def test_parse_bytes(data):
    result = parse_model(data)
    _in_bounds(data.decode("utf-8", errors="replace"), result.diagnostics)


@settings(SEEDED, max_examples=150)
@given(NOISE)
def test_parse_trace_never_raises(text):
    model = parse_model(library_text()).model
    result = parse_trace(text, model)
    _in_bounds(text, result.diagnostics)
