from itertools import product as cartesian
from multiprocessing.pool import ThreadPool

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normcheck.exceptions import IllFormedModel, NormcheckException, ParameterValueError, UnboundVariable, UnknownSymbol
from normcheck.norms.core import (FALSE, TRUE, ActFrame, And, Atom, Constant, DutyFrame, DutyInstance, DutyStatus,
                                  FactSymbol, GroundAct, Implies, Model, Not, ObjectDomain, Or, Parameter, Severity,
                                  State, Truth, Variable, check_wellformed, default_param_names, eval_formula,
                                  eval_with_env, ground_atom, ground_model, substitute)
from normcheck.norms.engine import apply, enabled
from normcheck.norms.parser import parse_model
from normcheck.exceptions import PreconditionViolated
from normcheck.utils.files import asset_path, read_text
from normcheck.utils.lru_cacher import LRUDictCache
from tests.generators import SEEDED, norm_models, runs
from tests.oracles import truth_table

SWITCHES = ("f0", "f1", "f2", "f3")


def library() -> Model:
    return parse_model(read_text(asset_path("library.norm"))).model


def lending(agents=("alice",), items=("b1",), duty_acts=None) -> Model:
    x, y = Variable("actor"), Variable("item")
    borrow = ActFrame("borrow", Parameter("actor", "Agent"), (Parameter("item", "Item"),), Not(Atom("borrowed", (x, y))), creates=(Atom("borrowed", (x, y)),))
    give_back = ActFrame("return", Parameter("actor", "Agent"), (Parameter("item", "Item"),), Atom("borrowed", (x, y)), terminates=(Atom("borrowed", (x, y)),))
    created_by, enforced_by, terminated_by = duty_acts or (("borrow",), ("return",), ("return",))
    return Model.build(
        domains=[ObjectDomain("Agent", tuple(agents)), ObjectDomain("Item", tuple(items))],
        facts=[FactSymbol("borrowed", ("Agent", "Item"))],
        acts=[borrow, give_back],
        duties=[DutyFrame("return-duty", Parameter("holder", "Agent"), (Parameter("item", "Item"),), created_by, enforced_by, terminated_by)]
    )


def switches(derivation=None) -> Model:
    facts = [FactSymbol(name) for name in SWITCHES]
    if derivation is not None:
        facts.append(FactSymbol("both", derivation=derivation))
    return Model.build(domains=[ObjectDomain("Agent", ("alice",))], facts=facts)


def test_wellformed_library():
    print("[test] --> Testing normcheck.norms.core.check_wellformed")
    assert check_wellformed(library()) == []
    assert check_wellformed(lending()) == []


def test_wellformed_unknown_act():
    print("[test] --> Testing normcheck.norms.core.check_wellformed (unknown act)")
    issues = check_wellformed(lending(duty_acts=(("borrow",), ("return",), ("shelve",))))
    assert len(issues) == 1
    assert issues[0].severity == Severity.ERROR
    assert issues[0].declaration == "return-duty"
    assert "shelve" in issues[0].message


def test_wellformed_cycle():
    print("[test] --> Testing normcheck.norms.core.check_wellformed (cyclic derivations)")
    model = Model.build(facts=[FactSymbol("d1", derivation=Atom("d2")), FactSymbol("d2", derivation=Atom("d1"))])
    issues = check_wellformed(model)
    assert len(issues) == 1
    assert "cyclic derivation: d1 -> d2 -> d1" in issues[0].message


def test_wellformed_errors():
    print("[test] --> Testing normcheck.norms.core.check_wellformed (invariants)")
    x = Variable("actor")
    model = Model.build(
        domains=[ObjectDomain("Agent", ("alice", "alice")), ObjectDomain("Empty", ())],
        facts=[FactSymbol("member", ("Agent",)), FactSymbol("active", ("Agent",), derivation=Atom("member", (Variable("agent"),)))],
        acts=[
            ActFrame("join", Parameter("actor", "Agnt"), creates=(Atom("member", (x,)),)),
            ActFrame("activate", Parameter("actor", "Agent"), creates=(Atom("active", (x,)),)),
            ActFrame("leave", Parameter("actor", "Agent"), terminates=(Atom("member", (Variable("someone"),)),)),
            ActFrame("invite", Parameter("actor", "Agent"), precondition=Atom("member", (Constant("bob"),)))
        ]
    )
    messages = [issue.message for issue in check_wellformed(model)]
    assert any("listed twice" in message for message in messages)
    assert any("has no members" in message for message in messages)
    assert any("unknown domain `Agnt`" in message and "did you mean `Agent`" in message for message in messages)
    assert any("derived fact `active` cannot appear in `creates`" in message for message in messages)
    assert any("variable `someone` is not a parameter" in message for message in messages)
    assert any("unknown constant `bob`" in message for message in messages)


def test_wellformed_binding_rule():
    print("[test] --> Testing normcheck.norms.core.check_wellformed (duty binding rule)")
    model = Model.build(
        domains=[ObjectDomain("Agent", ("alice",)), ObjectDomain("Staff", ("librarian",)), ObjectDomain("Item", ("b1",))],
        acts=[ActFrame("fine", Parameter("actor", "Staff"))],
        duties=[DutyFrame("pay", Parameter("holder", "Agent"), (Parameter("item", "Item"),), ("fine",), ("fine",), ("fine",))]
    )
    messages = [issue.message for issue in check_wellformed(model)]
    # neither the holder nor the item can be bound from `fine`
    assert len(messages) == 6
    assert all("act `fine` has no parameter" in message for message in messages)


def test_ground_model():
    print("[test] --> Testing normcheck.norms.core.ground_model")
    ground = ground_model(lending(agents=("alice", "bob"), items=("b1", "b2")))
    borrows = [act for act in ground.acts if act.frame == "borrow"]
    assert [act.arguments for act in borrows] == [("alice", "b1"), ("alice", "b2"), ("bob", "b1"), ("bob", "b2")]
    assert len(ground.duties) == 4

    ground = ground_model(library())
    assert [str(act) for act in ground.acts] == [
        "borrow(alice, b1)",
        "due-date-passes(clock, alice, b1)",
        "return(alice, b1)",
        "take-disciplinary-action(librarian, alice, b1)"
    ]
    assert ground.initial_state() == State()


def test_ground_model_rejects_ill_formed():
    print("[test] --> Testing normcheck.norms.core.ground_model (ill-formed)")
    with pytest.raises(IllFormedModel) as info:
        ground_model(lending(duty_acts=(("borrow",), ("return",), ("shelve",))))
    assert len(info.value.diagnostics) == 1
    assert isinstance(info.value, NormcheckException)


@settings(SEEDED, max_examples=100)
@given(norm_models())
def test_grounding_count(model):
    ground = ground_model(model)
    for frame in model.acts:
        expected = 1
        for param in frame.all_params:
            expected *= len(model.domain(param.domain).members)
        assert len([act for act in ground.acts if act.frame == frame.name]) == expected


def test_eval():
    print("[test] --> Testing normcheck.norms.core.eval_formula")
    ground = ground_model(library())
    borrowed = ground_atom("borrowed", "alice", "b1")
    assert eval_formula(ground, State(frozenset([borrowed])), borrowed)
    assert eval_formula(ground, State(), Not(borrowed))
    assert not eval_formula(ground, State(), borrowed)
    assert eval_formula(ground, State(), TRUE) and not eval_formula(ground, State(), FALSE)
    assert eval_formula(ground, State(), Implies(borrowed, FALSE))
    with pytest.raises(UnboundVariable):
        eval_formula(ground, State(), Atom("borrowed", (Variable("actor"), Constant("b1"))))
    with pytest.raises(UnknownSymbol) as info:
        eval_formula(ground, State(), Atom("borowed", (Constant("alice"), Constant("b1"))))
    assert info.value.guessed == "borrowed"


def test_eval_derived():
    print("[test] --> Testing normcheck.norms.core.eval_formula (derived facts)")
    result = parse_model(
        "Domain Agent = alice, bob\n"
        "Fact member(Agent)\n"
        "Fact suspended(Agent)\n"
        "Fact may-borrow(a: Agent) = member(a) and not suspended(a)\n"
        "    source: \"MEMBERS MAY BORROW.\"\n"
        "Fact anyone-may-borrow = may-borrow(alice) or may-borrow(bob)\n"
        "    source: \"MEMBERS MAY BORROW.\"\n"
    )
    assert result.ok
    ground = ground_model(result.model)
    member, suspended = ground_atom("member", "alice"), ground_atom("suspended", "alice")
    may_borrow = ground_atom("may-borrow", "alice")
    for facts, expected in (((), False), ((member,), True), ((suspended,), False), ((member, suspended), False)):
        assert eval_formula(ground, State(frozenset(facts)), may_borrow) == expected
    assert eval_formula(ground, State(frozenset([ground_atom("member", "bob")])), Atom("anyone-may-borrow"))
    assert ground.derivation(may_borrow) == And(member, Not(suspended))


def test_eval_long_derivation_chain():
    print("[test] --> Testing normcheck.norms.core.eval_formula (long derivation chain)")
    lines = ["Domain Agent = alice", "Fact f0", "Fact g0 = f0"]
    lines += ["Fact g{index} = g{previous}".format(index=index, previous=index - 1) for index in range(1, 1500)]
    result = parse_model("\n".join(lines) + "\n")
    assert result.ok
    ground = ground_model(result.model)
    assert eval_formula(ground, State(frozenset([Atom("f0")])), Atom("g1499"))
    assert not eval_formula(ground, State(), Atom("g1499"))
    assert eval_with_env(ground, State(), Not(Atom("g1499")), {})


def test_eval_short_circuit():
    print("[test] --> Testing normcheck.norms.core.eval_formula (short circuit)")
    ground = ground_model(switches())
    unknown = Atom("missing")
    # the right operand is never looked at when the left one decides
    assert not eval_formula(ground, State(), And(FALSE, unknown))
    assert eval_formula(ground, State(), Or(TRUE, unknown))
    assert eval_formula(ground, State(), Implies(FALSE, unknown))
    with pytest.raises(UnknownSymbol):
        eval_formula(ground, State(), And(TRUE, unknown))


def test_wellformed_formula_size():
    print("[test] --> Testing normcheck.norms.core.check_wellformed (formula size)")
    derivation = Atom("f0")
    for _ in range(2000):
        derivation = And(derivation, Atom("f1"))
    assert derivation.connectives() == 2000
    assert len(list(derivation.atoms())) == 2001
    issues = check_wellformed(switches(derivation))
    assert [issue.message for issue in issues] == ["formula has more than 128 connectives"]
    with pytest.raises(IllFormedModel):
        ground_model(switches(derivation))


def _switch_formulas():
    leaves = st.one_of(st.sampled_from(SWITCHES).map(Atom), st.booleans().map(Truth))

    def extend(children):
        return st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda pair: And(*pair)),
            st.tuples(children, children).map(lambda pair: Or(*pair)),
            st.tuples(children, children).map(lambda pair: Implies(*pair))
        )
    return st.recursive(leaves, extend, max_leaves=12)


@settings(SEEDED, max_examples=200)
@given(_switch_formulas())
def test_eval_truth_table(formula):
    ground = ground_model(switches())
    for values in cartesian((False, True), repeat=len(SWITCHES)):
        env = dict(zip(SWITCHES, values))
        state = State(frozenset(Atom(name) for name in SWITCHES if env[name]))
        assert eval_formula(ground, state, formula) == truth_table(formula, env)


@settings(SEEDED, max_examples=100)
@given(_switch_formulas())
def test_eval_derived_truth_table(formula):
    ground = ground_model(switches(derivation=formula))
    for values in cartesian((False, True), repeat=len(SWITCHES)):
        env = dict(zip(SWITCHES, values))
        state = State(frozenset(Atom(name) for name in SWITCHES if env[name]))
        assert eval_formula(ground, state, Not(Atom("both"))) == (not truth_table(formula, env))


@settings(SEEDED, max_examples=150)
@given(runs())
def test_substitute_agrees_with_environment(instance):
    ground, trace = instance
    state = ground.initial_state()
    states = [state]
    for act in trace:
        try:
            state, _ = apply(ground, state, act)
        except PreconditionViolated:
            break
        states.append(state)
    for state in states:
        for act in ground.acts:
            frame = ground.act_frame(act.frame)
            assert enabled(ground, state, act) == eval_with_env(ground, state, frame.precondition, act.binding_dict())


def test_substitute():
    print("[test] --> Testing normcheck.norms.core.substitute")
    x, y = Variable("x"), Variable("y")
    binding = {"x": "alice", "y": "b1"}
    assert substitute(Atom("borrowed", (x, y)), binding) == ground_atom("borrowed", "alice", "b1")
    assert substitute(TRUE, binding) == TRUE
    formula = Or(Atom("returned", (x, y)), Atom("overdue", (y,)))
    assert substitute(formula, binding) == Or(ground_atom("returned", "alice", "b1"), ground_atom("overdue", "b1"))
    assert str(substitute(formula, binding)) == "returned(alice, b1) or overdue(b1)"
    with pytest.raises(UnboundVariable) as info:
        substitute(Atom("borrowed", (x, y)), {"x": "alice"})
    assert info.value.variable == "y"
    assert "`y`" in str(info.value)
    assert isinstance(info.value, KeyError)


def test_formula_printing():
    print("[test] --> Testing normcheck.norms.core.Formula.__str__")
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    assert str(Not(And(a, b))) == "not (a and b)"
    assert str(And(Or(a, b), c)) == "(a or b) and c"
    assert str(Or(And(a, b), c)) == "a and b or c"
    assert str(Implies(Implies(a, b), c)) == "(a -> b) -> c"
    assert str(Implies(a, Implies(b, c))) == "a -> b -> c"
    assert str(And(a, And(b, c))) == "a and (b and c)"
    assert set(Or(a, Not(b)).atoms()) == {a, b}


def test_state_invariants():
    print("[test] --> Testing normcheck.norms.core.State")
    with pytest.raises(ParameterValueError):
        State(frozenset([Atom("borrowed", (Variable("x"), Constant("b1")))]))
    with pytest.raises(ParameterValueError):
        State(frozenset([Not(ground_atom("borrowed", "alice", "b1"))]))
    binding = (("holder", "alice"), ("item", "b1"))
    with pytest.raises(ParameterValueError):
        State(duties=frozenset([DutyInstance("return-duty", binding), DutyInstance("return-duty", binding, DutyStatus.TERMINATED)]))
    state = State(frozenset([ground_atom("borrowed", "alice", "b1")]), frozenset([DutyInstance("return-duty", binding)]))
    assert state.describe() == {
        "facts": ["borrowed(alice, b1)"],
        "duties": [{"name": "return-duty", "binding": {"holder": "alice", "item": "b1"}, "status": "active"}]
    }
    assert state.label() == "borrowed(alice, b1) | return-duty(alice, b1): active"
    assert State().label() == "-"


def test_ground_act():
    print("[test] --> Testing normcheck.norms.core.GroundAct")
    frame = library().act("take-disciplinary-action")
    act = GroundAct.of(frame, "librarian", "alice", "b1")
    assert act.binding_dict() == {"actor": "librarian", "holder": "alice", "item": "b1"}
    assert str(act) == "take-disciplinary-action(librarian, alice, b1)"
    with pytest.raises(ParameterValueError):
        GroundAct.of(frame, "librarian")


def test_unknown_act():
    print("[test] --> Testing normcheck.norms.core.GroundModel.act_frame")
    ground = ground_model(library())
    with pytest.raises(UnknownSymbol) as info:
        ground.act_frame("borow")
    assert info.value.guessed == "borrow"
    assert "Did you mean" in str(info.value)


def test_default_param_names():
    print("[test] --> Testing normcheck.norms.core.default_param_names")
    assert default_param_names(("Agent", "Item", "Agent", "Agent")) == ("agent", "item", "agent-2", "agent-3")
    assert FactSymbol("borrowed", ("Agent", "Item")).param_names == ("agent", "item")


def test_lru_dict_cache():
    print("[test] --> Testing normcheck.utils.lru_cacher.LRUDictCache")
    cache = LRUDictCache(2)
    cache["a"] = 1
    cache["b"] = 2
    assert cache.get("a") == 1
    cache["c"] = 3
    # "b" was the least recently used key
    assert list(cache) == ["a", "c"]
    assert cache.get("b") is None
    assert cache.get("b", 0) == 0
    assert cache["c"] == 3
    assert cache.hits == 2
    cache["a"] = 4
    cache["d"] = 5
    assert list(cache.items()) == [("a", 4), ("d", 5)]
    assert cache.hits == 2

    shared = LRUDictCache(64)

    def churn(offset):
        for index in range(2000):
            key = (offset + index) % 100
            if shared.get(key) not in (None, key):
                return False
            shared[key] = key
        return True

    with ThreadPool(8) as pool:
        assert all(pool.map(churn, range(16)))
    assert len(shared) == 64
