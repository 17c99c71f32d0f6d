"""Bundled derivations for the storage operators and their building blocks.

Each builder assembles a full derivation tree node by node. Conclusions are
computed by the node constructors, so the trees are correct by construction,
and the checker revalidates them independently. Builders take an ambient
context and freshen their binder names against it; subject terms therefore
come out as alpha-variants of the printed combinators, which is all the
checker asks for.
"""

from __future__ import annotations

from importlib import resources
from typing import Callable, Optional

from storop.formulas import (
    Arrow,
    Bot,
    EquationSet,
    FoApp,
    FoTerm,
    FoVar,
    ForallFo,
    ForallPred,
    Formula,
    PredAbstraction,
    PredVarApp,
    apply_equation,
    fv_fo,
    fv_pred,
    n_bot_type,
    n_star_type,
    n_type,
    neg,
    parse_equations,
    subst_bot,
    subst_fo,
    subst_pred,
)
from storop.terms import Abs, App, Var
from storop.typecheck import Context, Derivation, lift_star_to_bot

__all__ = [
    "numeral_derivation",
    "succ_derivation",
    "theta0_star_derivation",
    "t1_star_derivation",
    "t2_star_derivation",
    "t2_fperp_derivation",
    "t_bot_derivation",
    "tp_bot_derivation",
    "eq_demo_derivation",
    "EQ_DEMO_EQUATIONS",
    "PREBUILT",
    "prebuilt_names",
    "prebuilt_check_args",
    "build_prebuilt",
    "load_prebuilt",
]


# ---------------------------------------------------------------------------
# node constructors: each computes its conclusion from the premises


def _ax(ctx: Context, name: str) -> Derivation:
    a = ctx.lookup(name)
    if a is None:
        raise ValueError(f"{name} is not in the context")
    return Derivation("ax", ctx, Var(name), a)


def _abs(p: Derivation) -> Derivation:
    name, a = p.ctx.entries[-1]
    return Derivation("abs", p.ctx.without_last(), Abs(name, p.term), Arrow(a, p.type), None, (p,))


def _app(pf: Derivation, pa: Derivation) -> Derivation:
    return Derivation("app", pf.ctx, App(pf.term, pa.term), pf.type.right, None, (pf, pa))


def _gen_fo(p: Derivation, var: str) -> Derivation:
    return Derivation("gen-fo", p.ctx, p.term, ForallFo(var, p.type), None, (p,))


def _inst_fo(p: Derivation, t: FoTerm) -> Derivation:
    opened = subst_fo(p.type.body, {p.type.var: t})
    return Derivation("inst-fo", p.ctx, p.term, opened, t, (p,))


def _gen_pred(p: Derivation, var: str) -> Derivation:
    return Derivation("gen-pred", p.ctx, p.term, ForallPred(var, p.type), None, (p,))


def _inst_pred(p: Derivation, g: PredAbstraction) -> Derivation:
    opened = subst_pred(p.type.body, p.type.var, g)
    return Derivation("inst-pred", p.ctx, p.term, opened, g, (p,))


def _inst_bot(p: Derivation, g: PredAbstraction) -> Derivation:
    opened = subst_bot(p.type.body, p.type.var, g)
    return Derivation("inst-bot", p.ctx, p.term, opened, g, (p,))


def _eq(p: Derivation, eqs: EquationSet, steps: tuple) -> Derivation:
    cur = p.type
    for name, direction, path in steps:
        cur = apply_equation(cur, eqs.get(name), path, direction)
    return Derivation("eq", p.ctx, p.term, cur, tuple(steps), (p,))


# ---------------------------------------------------------------------------
# freshening


def _fresh(base: str, taken) -> str:
    name = base
    while name in taken:
        name += "'"
    return name

def _fresh_terms(ctx: Context, *bases: str) -> list[str]:
    taken = set(ctx.names())
    out = []
    for b in bases:
        name = _fresh(b, taken)
        taken.add(name)
        out.append(name)
    return out


def _ambient_fo(ctx: Context) -> set[str]:
    out: set[str] = set()
    for _, a in ctx:
        out |= fv_fo(a)
    return out


def _ambient_pred(ctx: Context) -> set[str]:
    out: set[str] = set()
    for _, a in ctx:
        out |= fv_pred(a)
    return out


def _snum(k: int) -> FoTerm:
    t: FoTerm = FoApp("0")
    for _ in range(k):
        t = FoApp("s", (t,))
    return t


def _n_parts(pvar: str, t: Optional[FoTerm]):
    """First premise, iteration premise, and conclusion atom of an opened numeral type."""
    if t is None:
        a = PredVarApp(pvar)
        return a, Arrow(a, a), a
    y = FoVar("y")
    first = PredVarApp(pvar, (FoApp("0"),))
    step = ForallFo("y", Arrow(PredVarApp(pvar, (y,)), PredVarApp(pvar, (FoApp("s", (y,)),))))
    return first, step, PredVarApp(pvar, (t,))


# ---------------------------------------------------------------------------
# numerals and the successor


def numeral_derivation(k: int, ctx: Context = Context(), propositional: bool = False) -> Derivation:
    """Type the k-th iterator: N[s^k(0)], or the plain N when propositional."""
    if k < 0:
        raise ValueError("numeral index must be non-negative")
    x, f = _fresh_terms(ctx, "x", "f")
    pvar = _fresh("X", _ambient_pred(ctx))
    t = None if propositional else _snum(k)
    first, step, _ = _n_parts(pvar, t)
    c2 = ctx.extended(x, first).extended(f, step)
    d = _ax(c2, x)
    for i in range(k):
        df = _ax(c2, f)
        if not propositional:
            df = _inst_fo(df, _snum(i))
        d = _app(df, d)
    return _gen_pred(_abs(_abs(d)), pvar)


def succ_derivation(ctx: Context = Context(), propositional: bool = False, genvar: str = "x") -> Derivation:
    """Type the successor: !x (N[x] -> N[s(x)]), or N -> N when propositional."""
    n, x, f = _fresh_terms(ctx, "n", "x", "f")
    pvar = _fresh("X", _ambient_pred(ctx))
    if propositional:
        xv = None
        nty = n_type(None)
        witness = PredAbstraction((), PredVarApp(pvar))
    else:
        gv = _fresh(genvar, _ambient_fo(ctx))
        xv = FoVar(gv)
        nty = n_type(xv)
        witness = PredAbstraction(("w",), PredVarApp(pvar, (FoVar("w"),)))
    first, step, _ = _n_parts(pvar, xv)
    c1 = ctx.extended(n, nty)
    c2 = c1.extended(x, first).extended(f, step)
    dn = _inst_pred(_ax(c2, n), witness)
    d = _app(dn, _ax(c2, x))
    d = _app(d, _ax(c2, f))
    df = _ax(c2, f)
    if not propositional:
        df = _inst_fo(df, xv)
    d = _app(df, d)
    d = _gen_pred(_abs(_abs(d)), pvar)
    d = _abs(d)
    if not propositional:
        d = _gen_fo(d, gv)
    return d


# ---------------------------------------------------------------------------
# the storage operator over iteration, negatively then bottomed


def _delta_derivation(ctx: Context) -> Derivation:
    """The seed: ~~N[0] for \\f (f) zero."""
    (f,) = _fresh_terms(ctx, "f")
    c1 = ctx.extended(f, neg(n_type(_snum(0))))
    dz = numeral_derivation(0, c1)
    return _abs(_app(_ax(c1, f), dz))


def _g_derivation(ctx: Context) -> Derivation:
    """The iterated step: !y (~~N[y] -> ~~N[s(y)])."""
    a, b, c = _fresh_terms(ctx, "x", "y", "z")
    gv = _fresh("y", _ambient_fo(ctx))
    yv = FoVar(gv)
    n_y = n_type(yv)
    n_sy = n_type(FoApp("s", (yv,)))
    c1 = ctx.extended(a, neg(neg(n_y))).extended(b, neg(n_sy))
    c2 = c1.extended(c, n_y)
    dsucc = _inst_fo(succ_derivation(c2), yv)
    dlam = _abs(_app(_ax(c2, b), _app(dsucc, _ax(c2, c))))
    d = _app(_ax(c1, a), dlam)
    return _gen_fo(_abs(_abs(d)), gv)


def t1_star_derivation(ctx: Context = Context(), genvar: str = "x") -> Derivation:
    """Storage over iteration against the negative translation:
    !x (N*[x] -> ~~N[x])."""
    (nu,) = _fresh_terms(ctx, "n")
    gv = _fresh(genvar, _ambient_fo(ctx))
    xv = FoVar(gv)
    c1 = ctx.extended(nu, n_star_type(xv))
    witness = PredAbstraction(("w",), neg(n_type(FoVar("w"))))
    dnu = _inst_pred(_ax(c1, nu), witness)
    d = _app(dnu, _delta_derivation(c1))
    d = _app(d, _g_derivation(c1))
    return _gen_fo(_abs(d), gv)


# ---------------------------------------------------------------------------
# storage over recursion-style iteration, propositional bottomed fragment


def _f_derivation(ctx: Context) -> Derivation:
    """The propositional step: ~N -> ~N."""
    a, b = _fresh_terms(ctx, "x", "y")
    c1 = ctx.extended(a, neg(n_type(None))).extended(b, n_type(None))
    ds = succ_derivation(c1, propositional=True)
    d = _app(_ax(c1, a), _app(ds, _ax(c1, b)))
    return _abs(_abs(d))


def t2_fperp_derivation(ctx: Context = Context()) -> Derivation:
    """Propositional bottomed typing: N_| -> ~~N."""
    nu, f = _fresh_terms(ctx, "n", "f")
    not_n = neg(n_type(None))
    c2 = ctx.extended(nu, n_bot_type(None)).extended(f, not_n)
    dnu = _inst_bot(_ax(c2, nu), PredAbstraction((), not_n))
    d = _app(dnu, _ax(c2, f))
    d = _app(d, _f_derivation(c2))
    d = _app(d, numeral_derivation(0, c2, propositional=True))
    return _abs(_abs(d))


def t2_star_derivation(ctx: Context = Context()) -> Derivation:
    """Propositional star typing: Nstar -> ~~N."""
    nu, f = _fresh_terms(ctx, "n", "f")
    not_n = neg(n_type(None))
    c2 = ctx.extended(nu, n_star_type(None)).extended(f, not_n)
    dnu = _inst_pred(_ax(c2, nu), PredAbstraction((), n_type(None)))
    d = _app(dnu, _ax(c2, f))
    d = _app(d, _f_derivation(c2))
    d = _app(d, numeral_derivation(0, c2, propositional=True))
    return _abs(_abs(d))


# ---------------------------------------------------------------------------
# the wrapped operators


def theta0_star_derivation(ctx: Context = Context()) -> Derivation:
    """A non-numeral inhabitant of Nstar[0]."""
    a, b, c, d_, w = _fresh_terms(ctx, "x", "f", "z", "d", "x")
    pvar = _fresh("X", _ambient_pred(ctx))
    atom0 = PredVarApp(pvar, (FoApp("0"),))
    yv = FoVar("y")
    step = ForallFo(
        "y",
        Arrow(neg(PredVarApp(pvar, (yv,))), neg(PredVarApp(pvar, (FoApp("s", (yv,)),)))),
    )
    c1 = ctx.extended(a, neg(atom0)).extended(b, step)
    c2 = c1.extended(c, atom0)
    did = _abs(_ax(c2.extended(w, Bot()), w))
    dlam = _abs(_ax(c2.extended(d_, Arrow(Bot(), Bot())), c))
    dx = _app(_ax(c2, a), _app(dlam, did))
    return _gen_pred(_abs(_abs(_abs(dx))), pvar)


def _wrapped_bot(second_arg: str) -> Derivation:
    """Shared shape for the wrapped operators at !x (N_|[x] -> ~~N[x])."""
    ctx = Context()
    nu, f = _fresh_terms(ctx, "v", "f")
    gv = "x"
    xv = FoVar(gv)
    c2 = ctx.extended(nu, n_bot_type(xv)).extended(f, neg(n_type(xv)))
    dnu = _inst_bot(_ax(c2, nu), PredAbstraction(("w",), Bot()))

    def inner_call(cc: Context) -> Derivation:
        dt1 = lift_star_to_bot(t1_star_derivation(cc, genvar="x"))
        d = _app(_inst_fo(dt1, xv), _ax(cc, nu))
        return _app(d, _ax(cc, f))

    d = _app(dnu, inner_call(c2))
    if second_arg == "identity":
        (w,) = _fresh_terms(c2, "x")
        darg = _abs(_ax(c2.extended(w, Bot()), w))
    else:
        (dn,) = _fresh_terms(c2, "d")
        darg = _abs(inner_call(c2.extended(dn, Bot())))
    darg = _gen_fo(darg, _fresh("y", _ambient_fo(c2)))
    d = _app(d, darg)
    return _gen_fo(_abs(_abs(d)), gv)


def t_bot_derivation() -> Derivation:
    """The identity-wrapped operator at !x (N_|[x] -> ~~N[x])."""
    return _wrapped_bot("identity")


def tp_bot_derivation() -> Derivation:
    """The replay-wrapped operator at !x (N_|[x] -> ~~N[x])."""
    return _wrapped_bot("replay")


# ---------------------------------------------------------------------------
# the equational rule in action

EQ_DEMO_EQUATIONS = "p0: p(0) = 0\nps: p(s(x)) = x"


def eq_demo_derivation() -> Derivation:
    """v : N[p(s(y))] |- v : N[y] through one rewrite with the predecessor laws."""
    eqs = parse_equations(EQ_DEMO_EQUATIONS)
    ty = n_type(FoApp("p", (FoApp("s", (FoVar("y"),)),)))
    ctx = Context().extended("v", ty)
    return _eq(_ax(ctx, "v"), eqs, (("ps", "lr", (0, 1, 1, 0)),))


# ---------------------------------------------------------------------------
# registry and golden files

PREBUILT: dict[str, Callable[[], Derivation]] = {
    "zero": lambda: numeral_derivation(0),
    "one": lambda: numeral_derivation(1),
    "two": lambda: numeral_derivation(2),
    "three": lambda: numeral_derivation(3),
    "four": lambda: numeral_derivation(4),
    "five": lambda: numeral_derivation(5),
    "succ": lambda: succ_derivation(),
    "zero_prop": lambda: numeral_derivation(0, propositional=True),
    "succ_prop": lambda: succ_derivation(propositional=True),
    "theta0_star": theta0_star_derivation,
    "t1_star": lambda: t1_star_derivation(),
    "t1_bot": lambda: lift_star_to_bot(t1_star_derivation()),
    "t2_star": t2_star_derivation,
    "t2_fperp": t2_fperp_derivation,
    "t_bot": t_bot_derivation,
    "tp_bot": tp_bot_derivation,
    "eq_demo": eq_demo_derivation,
}


def prebuilt_names() -> tuple[str, ...]:
    return tuple(sorted(PREBUILT))


def prebuilt_check_args(name: str) -> dict:
    """Keyword arguments the checker needs for a bundled derivation."""
    if name == "eq_demo":
        return {"equations": parse_equations(EQ_DEMO_EQUATIONS)}
    if name in ("t2_fperp", "t2_star", "zero_prop", "succ_prop"):
        return {"fragment": "fperp"}
    return {}


def build_prebuilt(name: str) -> Derivation:
    try:
        builder = PREBUILT[name]
    except KeyError:
        raise KeyError(f"no bundled derivation named {name!r}") from None
    return builder()


def load_prebuilt(name: str) -> Derivation:
    """Read the bundled golden file for a derivation."""
    from storop.typecheck import read_derivation

    if name not in PREBUILT:
        raise KeyError(f"no bundled derivation named {name!r}")
    text = resources.files("storop").joinpath(f"data/derivations/{name}.deriv").read_text()
    return read_derivation(text)
