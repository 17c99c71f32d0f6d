import random

import pytest

from storop.formulas import (
    Arrow,
    Bot,
    BotVarApp,
    Equation,
    EquationSet,
    FoApp,
    FormulaError,
    FoVar,
    ForallBot,
    ForallFo,
    ForallPred,
    PredAbstraction,
    PredSymApp,
    PredVarApp,
    apply_equation,
    check_adequacy,
    fo_subst,
    fo_vars,
    fv_bot,
    fv_fo,
    fv_pred,
    is_bot_type,
    n_bot_type,
    n_star_type,
    n_type,
    neg,
    parse_equations,
    parse_formula,
    polarity,
    pred_arities,
    print_formula,
    print_foterm,
    subst_bot,
    subst_fo,
    subst_pred,
)

from genformulas import random_formula

F = parse_formula


# ------------------------------------------------------------------ parsing


def test_parse_atoms():
    assert F("bot") == Bot()
    assert F("X") == PredVarApp("X")
    assert F("X(0)") == PredVarApp("X", (FoApp("0"),))
    assert F("X_|(x)") == BotVarApp("X", (FoVar("x"),))
    assert F("$P(x, s(y))") == PredSymApp("P", (FoVar("x"), FoApp("s", (FoVar("y"),))))


def test_parse_arrow_right_assoc():
    assert F("X -> Y -> Z") == Arrow(F("X"), Arrow(F("Y"), F("Z")))


def test_parse_comma_groups_premises():
    assert F("{X, Y -> Z}") == Arrow(F("X"), Arrow(F("Y"), F("Z")))


def test_parse_negation():
    assert F("~X") == neg(F("X"))
    assert F("~~X") == neg(neg(F("X")))
    assert F("~X -> Y") == Arrow(neg(F("X")), F("Y"))


def test_parse_quantifiers_by_case():
    assert F("!x X(x)") == ForallFo("x", PredVarApp("X", (FoVar("x"),)))
    assert F("!X X") == ForallPred("X", PredVarApp("X"))
    assert F("!X_| X_|") == ForallBot("X", BotVarApp("X"))


def test_quantifier_body_is_tight():
    assert F("!x X(x) -> Y") == Arrow(F("!x X(x)"), F("Y"))


def test_parse_macros():
    assert F("N[x]") == n_type(FoVar("x"))
    assert F("N*[x]") == n_star_type(FoVar("x"))
    assert F("Nstar[x]") == n_star_type(FoVar("x"))
    assert F("N_|[x]") == n_bot_type(FoVar("x"))
    assert F("Nbot[x]") == n_bot_type(FoVar("x"))
    assert F("N") == n_type()
    assert F("N[s(s(0))]") == n_type(FoApp("s", (FoApp("s", (FoApp("0"),)),)))


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "x",
        "X ->",
        "!x",
        "X(",
        "~",
        "N(x)",
        "!Nstar X",
        "X -> y",
        "X,",
        "{X -> Y",
        "X *",
    ],
)
def test_parse_rejects(bad):
    with pytest.raises(FormulaError):
        F(bad)


def test_unicode_forms():
    assert F("∀x X(x)") == F("!x X(x)")
    assert F("⊥") == Bot()


# ------------------------------------------------------------------ printing


def test_print_known():
    assert print_formula(n_type(FoVar("x"))) == "!X {X(0), !y (X(y) -> X(s(y))) -> X(x)}"
    assert print_formula(F("~X")) == "~X"
    assert print_formula(F("X -> Y -> Z")) == "X -> Y -> Z"
    assert print_formula(F("(X -> Y) -> Z")) == "(X -> Y) -> Z"
    assert print_formula(F("!x (X(x) -> Y)")) == "!x (X(x) -> Y)"
    assert print_foterm(FoApp("s", (FoVar("y"),))) == "s(y)"


def test_print_parse_roundtrip_random():
    rng = random.Random(515)
    for _ in range(300):
        a = random_formula(rng, depth=4, allow_bot_vars=True)
        assert parse_formula(print_formula(a)) == a


# ------------------------------------------------------------------ alpha


def test_alpha_quantifiers():
    assert F("!X X") == F("!Y Y")
    assert F("!x X(x)") == F("!z X(z)")
    assert F("!X_| X_|") == F("!Y_| Y_|")
    assert F("!x X(x)") != F("!x Y(x)")
    assert F("!X X") != F("!X_| X_|")


def test_alpha_free_names_matter():
    assert F("X") != F("Y")
    assert F("X(x)") != F("X(y)")


def test_namespaces_are_separate():
    # a bound predicate name does not capture a bottomed variable of the same name
    assert F("!X X_|") == F("!Y X_|")
    assert F("!X X_|") != F("!Y Y_|")


def test_hash_agrees_with_alpha():
    a, b = F("!X {X, (X -> X) -> X}"), F("!Y {Y, (Y -> Y) -> Y}")
    assert a == b and hash(a) == hash(b)
    assert {a: 1}[b] == 1


# ------------------------------------------------------------------ free vars


def test_free_variable_sets():
    a = F("!x (X(x, y) -> X_|(z))")
    assert fv_fo(a) == {"y", "z"}
    assert fv_pred(a) == {"X"}
    assert fv_bot(a) == {"X"}
    assert fv_pred(F("!X X(x)")) == frozenset()
    assert fv_fo(F("N[x]")) == {"x"}


def test_pred_arities():
    got = pred_arities(F("X(0) -> X_|(x, y) -> $P"))
    assert got == {("pred", "X"): 1, ("bot", "X"): 2, ("sym", "P"): 0}
    with pytest.raises(FormulaError):
        pred_arities(F("X(0) -> X"))


# ------------------------------------------------------------------ substitution


def test_subst_fo_basic():
    a = F("X(x) -> Y(x, y)")
    out = subst_fo(a, {"x": FoApp("s", (FoVar("y"),))})
    assert out == F("X(s(y)) -> Y(s(y), y)")


def test_subst_fo_capture_renames():
    a = F("!y X(y, x)")
    out = subst_fo(a, {"x": FoApp("s", (FoVar("y"),))})
    assert out == F("!w X(w, s(y))")


def test_subst_fo_shadowed_is_noop():
    a = F("!x X(x)")
    assert subst_fo(a, {"x": FoApp("0")}) is a


def test_subst_pred_instantiates_atoms():
    a = F("!y (X(y) -> X(s(y)))")
    out = subst_pred(a, "X", PredAbstraction(("w",), F("~Y(w)")))
    assert out == F("!y (~Y(y) -> ~Y(s(y)))")


def test_subst_pred_respects_shadowing():
    a = F("!X (X -> X)")
    assert subst_pred(a, "X", PredAbstraction((), F("Y"))) is a


def test_subst_pred_avoids_fo_capture():
    out = subst_pred(F("!y X(y)"), "X", PredAbstraction(("w",), F("$P(y, w)")))
    assert out == F("!z $P(y, z)")


def test_subst_pred_avoids_pred_capture():
    # substitute X := Y inside !Y (X -> Y): the bound Y must be renamed
    out = subst_pred(F("!Y (X -> Y)"), "X", PredAbstraction((), F("Y")))
    assert out == F("!Z (Y -> Z)")


def test_subst_pred_arity_mismatch():
    with pytest.raises(FormulaError):
        subst_pred(F("X(0)"), "X", PredAbstraction((), F("Y")))


def test_subst_bot():
    a = F("X_|(0) -> X_|(s(0))")
    out = subst_bot(a, "X", PredAbstraction(("w",), F("~Y(w)")))
    assert out == F("~Y(0) -> ~Y(s(0))")
    # bot namespace is untouched by subst_pred
    assert subst_pred(a, "X", PredAbstraction(("w",), F("Y(w)"))) is a


def test_abstraction_validation():
    with pytest.raises(FormulaError):
        PredAbstraction(("w", "w"), F("X"))
    with pytest.raises(FormulaError):
        PredAbstraction(("w",), F("X")).apply(())


# ------------------------------------------------------------------ bot types


def test_is_bot_type():
    assert is_bot_type(F("bot"))
    assert is_bot_type(F("X_|(x)"))
    assert is_bot_type(F("X -> bot"))
    assert is_bot_type(F("!x !X (X -> X_|)"))
    assert is_bot_type(n_bot_type(FoVar("x")))
    # the negative translation ends in a negated atom, so it is bottomed too
    assert is_bot_type(n_star_type(FoVar("x")))
    assert not is_bot_type(F("X"))
    assert not is_bot_type(F("bot -> X"))
    assert not is_bot_type(n_type(FoVar("x")))


# ------------------------------------------------------------------ polarity


def test_polarity_signs():
    assert polarity(F("X -> Y"), "X") == "negative"
    assert polarity(F("X -> Y"), "Y") == "positive"
    assert polarity(F("(X -> Y) -> Z"), "X") == "positive"
    assert polarity(F("X -> X"), "X") == "both"
    assert polarity(F("!X X"), "X") == "absent"
    assert polarity(F("Y"), "X") == "absent"
    assert polarity(F("~X"), "X") == "negative"
    assert polarity(F("~~X"), "X") == "positive"
    assert polarity(F("X_| -> Y_|"), "X", kind="bot") == "negative"
    assert polarity(F("X_|"), "X", kind="pred") == "absent"
    with pytest.raises(ValueError):
        polarity(F("X"), "X", kind="nope")


# ------------------------------------------------------------------ equations


def test_parse_equations_and_signature():
    eqs = parse_equations(
        """
        # predecessor laws
        p0: p(0) = 0
        ps: p(s(x)) = x
        """
    )
    assert len(eqs) == 2
    assert eqs.get("p0") == Equation(FoApp("p", (FoApp("0"),)), FoApp("0"), "p0")
    assert eqs.signature == {"0": 0, "s": 1, "p": 1}
    with pytest.raises(KeyError):
        eqs.get("nope")


def test_parse_equations_rejects():
    with pytest.raises(FormulaError):
        parse_equations("a: f(x) = f(x, x)")
    with pytest.raises(FormulaError):
        parse_equations("just some words")
    with pytest.raises(FormulaError):
        parse_equations("a: x = 0\na: y = 0")


def test_apply_equation_forward_and_back():
    eqs = parse_equations("ps: p(s(x)) = x")
    a = F("X(p(s(y)))")
    out = apply_equation(a, eqs.get("ps"), (0,), "lr")
    assert out == F("X(y)")
    assert apply_equation(out, eqs.get("ps"), (0,), "rl") == a


def test_apply_equation_inside_quantified_formula():
    eqs = parse_equations("ps: p(s(x)) = x")
    a = n_type(FoApp("p", (FoApp("s", (FoVar("y"),)),)))
    out = apply_equation(a, eqs.get("ps"), (0, 1, 1, 0), "lr")
    assert out == n_type(FoVar("y"))


def test_apply_equation_subterm_position():
    eqs = parse_equations("p0: p(0) = 0")
    a = F("X(s(p(0)))")
    out = apply_equation(a, eqs.get("p0"), (0, 0), "lr")
    assert out == F("X(s(0))")


def test_apply_equation_mismatch():
    eqs = parse_equations("p0: p(0) = 0")
    with pytest.raises(FormulaError):
        apply_equation(F("X(s(0))"), eqs.get("p0"), (0,), "lr")


def test_apply_equation_bad_paths():
    eqs = parse_equations("p0: p(0) = 0")
    a = F("X(p(0)) -> Y")
    with pytest.raises(FormulaError):
        apply_equation(a, eqs.get("p0"), (), "lr")
    with pytest.raises(FormulaError):
        apply_equation(a, eqs.get("p0"), (2, 0), "lr")
    with pytest.raises(FormulaError):
        apply_equation(a, eqs.get("p0"), (0, 5), "lr")
    with pytest.raises(FormulaError):
        apply_equation(a, eqs.get("p0"), (0, 0, 0, 0), "lr")


def test_apply_equation_rejects_captured_occurrence():
    eqs = parse_equations("ps: p(s(x)) = x")
    a = F("!y X(p(s(y)))")
    with pytest.raises(FormulaError):
        apply_equation(a, eqs.get("ps"), (0, 0), "lr")


def test_apply_equation_rejects_undetermined_vars():
    eqs = parse_equations("w: f(x, y) = x")
    with pytest.raises(FormulaError):
        apply_equation(F("X(0)"), eqs.get("w"), (0,), "rl")


def test_apply_equation_direction_validation():
    eqs = parse_equations("p0: p(0) = 0")
    with pytest.raises(FormulaError):
        apply_equation(F("X(p(0))"), eqs.get("p0"), (0,), "sideways")


# ------------------------------------------------------------------ adequacy


def test_adequacy_accepts_predecessor_theory():
    eqs = parse_equations("p0: p(0) = 0\nps: p(s(x)) = x")
    assert check_adequacy(eqs) is None


def test_adequacy_flags_successor_collapse():
    eqs = parse_equations("e: s(x) = 0")
    msg = check_adequacy(eqs)
    assert msg is not None and "= 0" in msg


def test_adequacy_flags_indirect_collapse():
    eqs = parse_equations("a: f(s(x)) = 0\nb: f(s(x)) = s(x)")
    msg = check_adequacy(eqs)
    assert msg is not None


def test_adequacy_flags_injectivity_break():
    eqs = parse_equations("e: s(s(x)) = s(0)")
    msg = check_adequacy(eqs)
    assert msg is not None


def test_adequacy_empty_theory():
    assert check_adequacy(EquationSet()) is None


def test_fo_helpers():
    t = FoApp("s", (FoVar("x"),))
    assert fo_vars(t) == {"x"}
    assert fo_subst(t, {"x": FoApp("0")}) == FoApp("s", (FoApp("0"),))
    assert print_foterm(FoApp("0")) == "0"
