import pytest

from storop.formulas import (
    Arrow,
    Bot,
    FoApp,
    FoVar,
    ForallFo,
    ForallPred,
    PredAbstraction,
    PredVarApp,
    n_type,
    neg,
    parse_equations,
    parse_formula,
    print_formula,
)
from storop.terms import Abs, App, Var, parse_term
from storop.typecheck import (
    CheckReport,
    Context,
    Derivation,
    check_derivation,
    check_fperp,
    forget_derivation,
    lift_star_to_bot,
    read_derivation,
    write_derivation,
)
from storop.prebuilt import build_prebuilt, prebuilt_check_args


def F(src):
    return parse_formula(src)


def test_context_basics():
    c = Context().extended("x", F("A")).extended("y", F("bot"))
    assert c.lookup("x") == F("A")
    assert c.lookup("z") is None
    assert c.names() == ("x", "y")
    assert len(c) == 2
    assert c.without_last().names() == ("x",)


def test_context_rejects_duplicates():
    c = Context().extended("x", F("A"))
    with pytest.raises(ValueError):
        c.extended("x", F("B"))


def test_context_equality_is_order_sensitive():
    a = Context((("x", F("A")), ("y", F("B"))))
    b = Context((("y", F("B")), ("x", F("A"))))
    assert a != b
    assert a == Context((("x", F("A")), ("y", F("B"))))


# a tiny correct derivation: x : A |- \y (x) y ... keep simpler: identity


def identity_derivation(a_src="A"):
    a = F(a_src)
    c1 = Context().extended("x", a)
    leaf = Derivation("ax", c1, Var("x"), a)
    return Derivation("abs", Context(), Abs("x", Var("x")), Arrow(a, a), None, (leaf,))


def test_identity_checks():
    rep = check_derivation(identity_derivation())
    assert rep.ok
    assert rep.failures == []
    assert rep.first_message() == ""


def test_apply_node_checks():
    a, b = F("A"), F("B")
    ctx = Context().extended("f", Arrow(a, b)).extended("u", a)
    df = Derivation("ax", ctx, Var("f"), Arrow(a, b))
    du = Derivation("ax", ctx, Var("u"), a)
    d = Derivation("app", ctx, App(Var("f"), Var("u")), b, None, (df, du))
    assert check_derivation(d).ok


def test_ax_failures():
    a = F("A")
    ctx = Context().extended("x", a)
    bad_name = Derivation("ax", ctx, Var("y"), a)
    rep = check_derivation(bad_name)
    assert not rep.ok and "not in the context" in rep.first_message()

    bad_type = Derivation("ax", ctx, Var("x"), F("B"))
    assert "context gives" in check_derivation(bad_type).first_message()

    bad_subject = Derivation("ax", ctx, Abs("z", Var("z")), a)
    assert "must be a variable" in check_derivation(bad_subject).first_message()


def test_unknown_rule_and_arity():
    d = identity_derivation()
    bad = Derivation("cut", d.ctx, d.term, d.type, None, d.premises)
    assert "unknown rule" in check_derivation(bad).first_message()

    no_premise = Derivation("abs", d.ctx, d.term, d.type, None, ())
    assert "expects 1 premises" in check_derivation(no_premise).first_message()


def test_abs_failures():
    a = F("A")
    good = identity_derivation()

    not_arrow = Derivation("abs", Context(), good.term, a, None, good.premises)
    assert "must be an arrow" in check_derivation(not_arrow).first_message()

    # duplicate binder names cannot even form a context
    shadow_ctx = Context().extended("x", F("B"))
    with pytest.raises(ValueError):
        shadow_ctx.extended("x", a)

    wrong_ctx = Derivation(
        "abs",
        Context(),
        Abs("x", Var("x")),
        Arrow(a, a),
        None,
        (Derivation("ax", Context().extended("y", a), Var("y"), a),),
    )
    rep = check_derivation(wrong_ctx)
    assert not rep.ok
    # the premise subject y is fine for its own context, the abs node is at fault
    assert rep.failures[0][0] == ()

    wrong_body = Derivation(
        "abs",
        Context(),
        Abs("x", Var("x")),
        Arrow(a, a),
        None,
        (Derivation("ax", Context().extended("x", a), Var("x''"), a),),
    )
    assert not check_derivation(wrong_body).ok


def test_app_failures():
    a, b = F("A"), F("B")
    ctx = Context().extended("f", Arrow(a, b)).extended("u", b)
    df = Derivation("ax", ctx, Var("f"), Arrow(a, b))
    du = Derivation("ax", ctx, Var("u"), b)
    d = Derivation("app", ctx, App(Var("f"), Var("u")), b, None, (df, du))
    rep = check_derivation(d)
    assert not rep.ok and "argument type" in rep.first_message()

    d2 = Derivation("app", ctx, App(Var("f"), Var("u")), a, None, (df, Derivation("ax", ctx, Var("u"), b)))
    assert not check_derivation(d2).ok


def test_gen_fo_freshness():
    a = n_type(FoVar("x"))
    ctx = Context().extended("v", a)
    leaf = Derivation("ax", ctx, Var("v"), a)
    d = Derivation("gen-fo", ctx, Var("v"), ForallFo("x", a), None, (leaf,))
    rep = check_derivation(d)
    assert not rep.ok
    assert "occurs free in the context" in rep.first_message()

    # a different variable is fine
    d2 = Derivation("gen-fo", ctx, Var("v"), ForallFo("z", a), None, (leaf,))
    assert check_derivation(d2).ok


def test_inst_fo_checks_the_conclusion():
    a = ForallFo("x", n_type(FoVar("x")))
    ctx = Context().extended("v", a)
    leaf = Derivation("ax", ctx, Var("v"), a)
    good = Derivation("inst-fo", ctx, Var("v"), n_type(FoApp("0")), FoApp("0"), (leaf,))
    assert check_derivation(good).ok

    wrong = Derivation("inst-fo", ctx, Var("v"), n_type(FoApp("s", (FoApp("0"),))), FoApp("0"), (leaf,))
    assert "instantiation yields" in check_derivation(wrong).first_message()

    no_witness = Derivation("inst-fo", ctx, Var("v"), n_type(FoApp("0")), None, (leaf,))
    assert "witness" in check_derivation(no_witness).first_message()


def test_gen_pred_freshness():
    a = F("X -> X")
    ctx = Context().extended("v", a)
    leaf = Derivation("ax", ctx, Var("v"), a)
    d = Derivation("gen-pred", ctx, Var("v"), ForallPred("X", a), None, (leaf,))
    assert "occurs free" in check_derivation(d).first_message()


def test_inst_pred_arity_mismatch_is_reported():
    a = ForallPred("X", F("X -> X"))
    ctx = Context().extended("v", a)
    leaf = Derivation("ax", ctx, Var("v"), a)
    unary = PredAbstraction(("w",), PredVarApp("Y", (FoVar("w"),)))
    d = Derivation("inst-pred", ctx, Var("v"), F("Y -> Y"), unary, (leaf,))
    rep = check_derivation(d)
    assert not rep.ok


def test_bot_rules_and_fragments():
    d = build_prebuilt("t2_fperp")
    assert check_derivation(d).ok
    assert check_fperp(d).ok
    rep = check_derivation(d, fragment="af2")
    assert not rep.ok
    assert "not part of the af2 fragment" in rep.first_message()

    with pytest.raises(ValueError):
        check_derivation(d, fragment="af3")


def test_inst_bot_requires_bottomed_witness_body():
    d = build_prebuilt("t2_fperp")

    def find(node, rule):
        if node.rule == rule:
            return node
        for p in node.premises:
            got = find(p, rule)
            if got is not None:
                return got
        return None

    node = find(d, "inst-bot")
    assert node is not None
    bad_witness = PredAbstraction((), n_type(None))
    bad = Derivation(node.rule, node.ctx, node.term, node.type, bad_witness, node.premises)
    rep = check_derivation(bad)
    assert not rep.ok
    assert any("bottomed type" in m for _, m in rep.failures)


def test_fperp_rejects_first_order_content():
    d = build_prebuilt("succ")
    rep = check_fperp(d)
    assert not rep.ok
    msgs = " ".join(m for _, m in rep.failures)
    assert "propositional fragment" in msgs


def test_eq_rule():
    eqs = parse_equations("ps: p(s(x)) = x")
    ty = n_type(FoApp("p", (FoApp("s", (FoVar("y"),)),)))
    ctx = Context().extended("v", ty)
    leaf = Derivation("ax", ctx, Var("v"), ty)
    good = Derivation("eq", ctx, Var("v"), n_type(FoVar("y")), (("ps", "lr", (0, 1, 1, 0)),), (leaf,))
    assert check_derivation(good, equations=eqs).ok

    rep = check_derivation(good)
    assert "no equations are in scope" in rep.first_message()

    missing = Derivation("eq", ctx, Var("v"), n_type(FoVar("y")), (("nope", "lr", (0,)),), (leaf,))
    assert "no equation named" in check_derivation(missing, equations=eqs).first_message()

    bad_path = Derivation("eq", ctx, Var("v"), n_type(FoVar("y")), (("ps", "lr", (0, 1)),), (leaf,))
    assert not check_derivation(bad_path, equations=eqs).ok

    empty = Derivation("eq", ctx, Var("v"), n_type(FoVar("y")), (), (leaf,))
    assert "non-empty" in check_derivation(empty, equations=eqs).first_message()

    wrong_goal = Derivation("eq", ctx, Var("v"), n_type(FoVar("z")), (("ps", "lr", (0, 1, 1, 0)),), (leaf,))
    assert "rewrites yield" in check_derivation(wrong_goal, equations=eqs).first_message()


def test_failures_are_premises_first():
    # break a leaf deep inside; the first reported failure must sit at that leaf
    d = build_prebuilt("succ")

    def first_leaf_path(node, path=()):
        if not node.premises:
            return path
        return first_leaf_path(node.premises[0], path + (0,))

    target = first_leaf_path(d)

    def rebuild(node, path):
        if not path:
            return Derivation(node.rule, node.ctx, node.term, Arrow(node.type, node.type), node.witness, node.premises)
        i = path[0]
        ps = list(node.premises)
        ps[i] = rebuild(ps[i], path[1:])
        return Derivation(node.rule, node.ctx, node.term, node.type, node.witness, tuple(ps))

    rep = check_derivation(rebuild(d, target))
    assert not rep.ok
    assert rep.failures[0][0] == target


# serialization


def test_write_read_roundtrip_small():
    d = identity_derivation()
    txt = write_derivation(d)
    d2 = read_derivation(txt)
    assert d2 == d
    assert write_derivation(d2) == txt


def test_read_rejects_malformed_input():
    with pytest.raises(ValueError):
        read_derivation("(rule ax (ctx) (term \"x\")")
    with pytest.raises(ValueError):
        read_derivation('(rule ax (ctx) (term "x") (type "A")) (rule ax (ctx) (term "x") (type "A"))')
    with pytest.raises(ValueError):
        read_derivation('(rule ax (ctx) (term "x"))')
    with pytest.raises(ValueError):
        read_derivation('(rule ax (ctx) (term "x) (type "A"))')
    with pytest.raises(ValueError):
        read_derivation('(banana ax (ctx) (term "x") (type "A"))')
    with pytest.raises(ValueError):
        read_derivation('(rule ax (ctx) (term "x") (type "A") (witness (magic)))')


def test_serialized_strings_are_escaped():
    # backslashes in lambda terms survive the quoting
    d = identity_derivation()
    txt = write_derivation(d)
    assert '"\\\\x x"' in txt


# forgetting


def test_forget_collapses_first_order_nodes():
    d = build_prebuilt("succ")
    f = forget_derivation(d)
    assert f.term == d.term
    assert f.type == F("(!X {X, (X -> X) -> X}) -> !X {X, (X -> X) -> X}")
    assert f.node_count() < d.node_count()
    assert check_fperp(f).ok

    def rules(node):
        yield node.rule
        for p in node.premises:
            yield from rules(p)

    assert "gen-fo" not in set(rules(f))
    assert "inst-fo" not in set(rules(f))


def test_forget_drops_eq_nodes():
    d = build_prebuilt("eq_demo")
    f = forget_derivation(d)
    assert f.rule == "ax"
    assert f.type == F("!X {X, (X -> X) -> X}")
    assert check_fperp(f).ok


def test_forget_commutes_with_checking_on_the_star_derivation():
    d = build_prebuilt("t1_star")
    f = forget_derivation(d)
    assert check_fperp(f).ok
    want = F("(!X {~X, (~X -> ~X) -> ~X}) -> ~~(!X {X, (X -> X) -> X})")
    assert f.type == want


# lifting


def test_lift_rejects_wrong_shapes():
    with pytest.raises(ValueError):
        lift_star_to_bot(build_prebuilt("zero"))
    with pytest.raises(ValueError):
        lift_star_to_bot(build_prebuilt("succ"))


def test_lift_produces_the_bottomed_typing():
    from storop.prebuilt import t1_star_derivation

    lifted = lift_star_to_bot(t1_star_derivation())
    rep = check_derivation(lifted)
    assert rep.ok
    want = F(
        "!x ((!X_| {X_|(0), !y (X_|(y) -> X_|(s(y))) -> X_|(x)})"
        " -> ~~(!X {X(0), !y (X(y) -> X(s(y))) -> X(x)}))"
    )
    assert lifted.type == want
