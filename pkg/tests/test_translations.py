import random

import pytest

from storop.formulas import (
    Bot,
    FormulaError,
    FoVar,
    bot_transform,
    forget_first_order,
    fv_bot,
    fv_pred,
    godel_star,
    n_bot_type,
    n_star_type,
    n_type,
    parse_formula,
    print_formula,
)

from genformulas import random_formula

F = parse_formula


def test_star_on_numeral_type_display():
    assert (
        print_formula(godel_star(n_type(FoVar("x"))))
        == "!X {~X(0), !y (~X(y) -> ~X(s(y))) -> ~X(x)}"
    )


def test_bot_transform_on_numeral_type_display():
    assert (
        print_formula(bot_transform(n_type(FoVar("x"))))
        == "!X_| {X_|(0), !y (X_|(y) -> X_|(s(y))) -> X_|(x)}"
    )


def test_forget_on_numeral_type_display():
    assert print_formula(forget_first_order(n_type(FoVar("x")))) == "!X {X, (X -> X) -> X}"


def test_star_matches_macro():
    assert godel_star(n_type(FoVar("x"))) == F("N*[x]")
    assert godel_star(n_type()) == F("Nstar")


def test_bot_matches_macro():
    assert bot_transform(n_type(FoVar("x"))) == F("N_|[x]")
    assert bot_transform(n_type()) == F("Nbot")


def test_star_negates_every_atom_kind():
    assert godel_star(F("$P(x)")) == F("~$P(x)")
    assert godel_star(F("X(0) -> bot")) == F("~X(0) -> bot")
    assert godel_star(Bot()) == Bot()


def test_star_requires_unbottomed_input():
    with pytest.raises(FormulaError):
        godel_star(F("X_|(x)"))
    with pytest.raises(FormulaError):
        godel_star(F("!X_| X_|"))


def test_bot_transform_requires_unbottomed_input():
    with pytest.raises(FormulaError):
        bot_transform(F("X_| -> X"))


def test_bot_transform_moves_whole_namespace():
    a = F("!X (X(x) -> Y)")
    out = bot_transform(a)
    assert out == F("!X_| (X_|(x) -> Y_|)")
    assert fv_pred(out) == frozenset()
    assert fv_bot(out) == {"Y"}


def test_forget_drops_fo_layer():
    assert forget_first_order(F("!x X(x, s(y))")) == F("X")
    assert forget_first_order(F("$P(x) -> X_|(y)")) == F("$P -> X_|")
    assert forget_first_order(F("!x !y $Le(x, y)")) == F("$Le")


def test_forget_is_idempotent_random():
    rng = random.Random(616)
    for _ in range(100):
        a = random_formula(rng, depth=4, allow_bot_vars=True)
        d = forget_first_order(a)
        assert forget_first_order(d) == d


def test_translations_commute_with_forget():
    # (A*)<> == (A<>)* and (A_|)<> == (A<>)_| on formulas without bot vars
    rng = random.Random(717)
    checked = 0
    for _ in range(100):
        a = random_formula(rng, depth=4, allow_bot_vars=False)
        left_star = forget_first_order(godel_star(a))
        right_star = godel_star(forget_first_order(a))
        assert left_star == right_star, print_formula(a)
        left_bot = forget_first_order(bot_transform(a))
        right_bot = bot_transform(forget_first_order(a))
        assert left_bot == right_bot, print_formula(a)
        checked += 1
    assert checked == 100


def test_star_and_bot_do_not_commute_with_each_other():
    # star is undefined on bottomed formulas, so the only composition order
    # that typechecks is bot after star; spot-check it differs from star
    a = n_type(FoVar("x"))
    assert bot_transform(a) != godel_star(a)


def test_translations_preserve_propositional_shape():
    n = n_type()
    assert forget_first_order(n) == n  # no first-order layer to erase
    assert forget_first_order(n_star_type()) == n_star_type()
    assert forget_first_order(n_bot_type()) == n_bot_type()


def test_forget_numeral_types_align():
    # the propositional variants are exactly the forgetful images
    assert forget_first_order(n_type(FoVar("x"))) == n_type()
    assert forget_first_order(n_star_type(FoVar("x"))) == n_star_type()
    assert forget_first_order(n_bot_type(FoVar("x"))) == n_bot_type()
