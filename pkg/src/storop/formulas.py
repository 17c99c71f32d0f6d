"""Second-order formulas over a first-order equational signature.

Three variable namespaces: first-order variables (lowercase initial),
predicate variables (uppercase initial), and bottomed predicate variables
(written with a trailing ``_|``, e.g. ``X_|``). Predicate constants are
written ``$P``. ``bot`` is absurdity; ``~A`` abbreviates ``A -> bot``.

Quantifier bodies bind tightly; use braces for rule-style displays:
``!X {X(0), !y (X(y) -> X(s(y))) -> X(x)}`` is the numeral type N[x], also
available as the macro ``N[t]`` (with ``N``, ``Nstar``/``N*``, ``Nbot``/
``N_|`` variants; those names are reserved).

Formula equality is alpha-equivalence in all three namespaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from storop.terms import fresh_name

__all__ = [
    "FoTerm",
    "FoVar",
    "FoApp",
    "fo_vars",
    "fo_subst",
    "print_foterm",
    "Formula",
    "Bot",
    "PredVarApp",
    "BotVarApp",
    "PredSymApp",
    "Arrow",
    "ForallFo",
    "ForallPred",
    "ForallBot",
    "neg",
    "PredAbstraction",
    "FormulaError",
    "parse_formula",
    "print_formula",
    "fv_fo",
    "fv_pred",
    "fv_bot",
    "subst_fo",
    "subst_pred",
    "subst_bot",
    "is_bot_type",
    "godel_star",
    "bot_transform",
    "forget_first_order",
    "polarity",
    "n_type",
    "n_star_type",
    "n_bot_type",
    "Equation",
    "EquationSet",
    "parse_equations",
    "apply_equation",
    "check_adequacy",
    "pred_arities",
]


class FormulaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# first-order terms


class FoTerm:
    __slots__ = ()


@dataclass(frozen=True)
class FoVar(FoTerm):
    name: str

    def __repr__(self):
        return f"<{print_foterm(self)}>"


@dataclass(frozen=True)
class FoApp(FoTerm):
    sym: str
    args: tuple = ()

    def __repr__(self):
        return f"<{print_foterm(self)}>"


def fo_vars(t: FoTerm) -> frozenset[str]:
    if isinstance(t, FoVar):
        return frozenset((t.name,))
    out: frozenset[str] = frozenset()
    for a in t.args:
        out |= fo_vars(a)
    return out


def fo_subst(t: FoTerm, m: Mapping[str, FoTerm]) -> FoTerm:
    if isinstance(t, FoVar):
        return m.get(t.name, t)
    if not t.args:
        return t
    return FoApp(t.sym, tuple(fo_subst(a, m) for a in t.args))


def print_foterm(t: FoTerm) -> str:
    if isinstance(t, FoVar):
        return t.name
    if not t.args:
        return t.sym
    return t.sym + "(" + ", ".join(print_foterm(a) for a in t.args) + ")"


def _match_fo(pattern: FoTerm, target: FoTerm, sigma: dict) -> bool:
    if isinstance(pattern, FoVar):
        prev = sigma.get(pattern.name)
        if prev is None:
            sigma[pattern.name] = target
            return True
        return prev == target
    return (
        isinstance(target, FoApp)
        and target.sym == pattern.sym
        and len(target.args) == len(pattern.args)
        and all(_match_fo(p, t, sigma) for p, t in zip(pattern.args, target.args))
    )


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Formula):
            return NotImplemented
        return _alpha_eq(self, other, {}, {}, 0)

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        h = self._h  # type: ignore[attr-defined]
        if h is None:
            h = _alpha_hash(self, {}, 0)
            self._h = h  # type: ignore[attr-defined]
        return h

    def __repr__(self):
        return f"<{print_formula(self)}>"


class Bot(Formula):
    __slots__ = ("_h",)

    def __init__(self):
        self._h = None


class PredVarApp(Formula):
    __slots__ = ("name", "args", "_h")

    def __init__(self, name: str, args: Sequence[FoTerm] = ()):
        self.name = name
        self.args = tuple(args)
        self._h = None


class BotVarApp(Formula):
    __slots__ = ("name", "args", "_h")

    def __init__(self, name: str, args: Sequence[FoTerm] = ()):
        self.name = name
        self.args = tuple(args)
        self._h = None


class PredSymApp(Formula):
    __slots__ = ("sym", "args", "_h")

    def __init__(self, sym: str, args: Sequence[FoTerm] = ()):
        self.sym = sym
        self.args = tuple(args)
        self._h = None


class Arrow(Formula):
    __slots__ = ("left", "right", "_h")

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._h = None


class ForallFo(Formula):
    __slots__ = ("var", "body", "_h")

    def __init__(self, var: str, body: Formula):
        self.var = var
        self.body = body
        self._h = None


class ForallPred(Formula):
    __slots__ = ("var", "body", "_h")

    def __init__(self, var: str, body: Formula):
        self.var = var
        self.body = body
        self._h = None


class ForallBot(Formula):
    __slots__ = ("var", "body", "_h")

    def __init__(self, var: str, body: Formula):
        self.var = var
        self.body = body
        self._h = None


def neg(a: Formula) -> Formula:
    return Arrow(a, Bot())


_QUANT_NS = {ForallFo: 0, ForallPred: 1, ForallBot: 2}
_ATOM_NS = {PredVarApp: 1, BotVarApp: 2}


def _fo_alpha(t: FoTerm, u: FoTerm, envt: dict, envu: dict) -> bool:
    if isinstance(t, FoVar):
        if not isinstance(u, FoVar):
            return False
        bt = envt.get((0, t.name))
        bu = envu.get((0, u.name))
        if bt is None and bu is None:
            return t.name == u.name
        return bt == bu
    if not isinstance(u, FoApp):
        return False
    return (
        t.sym == u.sym
        and len(t.args) == len(u.args)
        and all(_fo_alpha(a, b, envt, envu) for a, b in zip(t.args, u.args))
    )


def _alpha_eq(a: Formula, b: Formula, envt: dict, envu: dict, depth: int) -> bool:
    ta, tb = type(a), type(b)
    if ta is not tb:
        return False
    if ta is Bot:
        return True
    if ta is PredSymApp:
        return (
            a.sym == b.sym
            and len(a.args) == len(b.args)
            and all(_fo_alpha(x, y, envt, envu) for x, y in zip(a.args, b.args))
        )
    if ta in (PredVarApp, BotVarApp):
        ns = _ATOM_NS[ta]
        bt = envt.get((ns, a.name))
        bu = envu.get((ns, b.name))
        if (bt is None) != (bu is None):
            return False
        if bt is None and a.name != b.name:
            return False
        if bt is not None and bt != bu:
            return False
        return len(a.args) == len(b.args) and all(
            _fo_alpha(x, y, envt, envu) for x, y in zip(a.args, b.args)
        )
    if ta is Arrow:
        return _alpha_eq(a.left, b.left, envt, envu, depth) and _alpha_eq(
            a.right, b.right, envt, envu, depth
        )
    ns = _QUANT_NS[ta]
    ka, kb = (ns, a.var), (ns, b.var)
    olda, oldb = envt.get(ka), envu.get(kb)
    envt[ka] = depth
    envu[kb] = depth
    try:
        return _alpha_eq(a.body, b.body, envt, envu, depth + 1)
    finally:
        if olda is None:
            del envt[ka]
        else:
            envt[ka] = olda
        if oldb is None:
            del envu[kb]
        else:
            envu[kb] = oldb


def _fo_hash(t: FoTerm, env: dict) -> int:
    if isinstance(t, FoVar):
        b = env.get((0, t.name))
        if b is None:
            return hash(("fo", t.name))
        return hash(("fob", b))
    return hash(("foa", t.sym, tuple(_fo_hash(a, env) for a in t.args)))


def _alpha_hash(a: Formula, env: dict, depth: int) -> int:
    ta = type(a)
    if ta is Bot:
        return hash("bot")
    if ta is PredSymApp:
        return hash(("ps", a.sym, tuple(_fo_hash(x, env) for x in a.args)))
    if ta in (PredVarApp, BotVarApp):
        ns = _ATOM_NS[ta]
        b = env.get((ns, a.name))
        head = ("pv", ns, a.name) if b is None else ("pvb", ns, b)
        return hash((head, tuple(_fo_hash(x, env) for x in a.args)))
    if ta is Arrow:
        return hash(("ar", _alpha_hash(a.left, env, depth), _alpha_hash(a.right, env, depth)))
    ns = _QUANT_NS[ta]
    key = (ns, a.var)
    old = env.get(key)
    env[key] = depth
    try:
        return hash(("fa", ns, _alpha_hash(a.body, env, depth + 1)))
    finally:
        if old is None:
            del env[key]
        else:
            env[key] = old


# ---------------------------------------------------------------------------
# free variables


def fv_fo(a: Formula) -> frozenset[str]:
    ta = type(a)
    if ta is Bot:
        return frozenset()
    if ta in (PredVarApp, BotVarApp, PredSymApp):
        out: frozenset[str] = frozenset()
        for t in a.args:
            out |= fo_vars(t)
        return out
    if ta is Arrow:
        return fv_fo(a.left) | fv_fo(a.right)
    if ta is ForallFo:
        return fv_fo(a.body) - {a.var}
    return fv_fo(a.body)


def fv_pred(a: Formula) -> frozenset[str]:
    ta = type(a)
    if ta is PredVarApp:
        return frozenset((a.name,))
    if ta in (Bot, BotVarApp, PredSymApp):
        return frozenset()
    if ta is Arrow:
        return fv_pred(a.left) | fv_pred(a.right)
    if ta is ForallPred:
        return fv_pred(a.body) - {a.var}
    return fv_pred(a.body)


def fv_bot(a: Formula) -> frozenset[str]:
    ta = type(a)
    if ta is BotVarApp:
        return frozenset((a.name,))
    if ta in (Bot, PredVarApp, PredSymApp):
        return frozenset()
    if ta is Arrow:
        return fv_bot(a.left) | fv_bot(a.right)
    if ta is ForallBot:
        return fv_bot(a.body) - {a.var}
    return fv_bot(a.body)


def _has_bot_vars(a: Formula) -> bool:
    ta = type(a)
    if ta is BotVarApp or ta is ForallBot:
        return True
    if ta is Arrow:
        return _has_bot_vars(a.left) or _has_bot_vars(a.right)
    if ta in (ForallFo, ForallPred):
        return _has_bot_vars(a.body)
    return False


def pred_arities(a: Formula, out: Optional[dict] = None) -> dict:
    """Arity of every predicate/bottomed variable and symbol; raises on conflict."""
    if out is None:
        out = {}
    ta = type(a)
    if ta in (PredVarApp, BotVarApp, PredSymApp):
        key = (
            "sym" if ta is PredSymApp else ("bot" if ta is BotVarApp else "pred"),
            a.sym if ta is PredSymApp else a.name,
        )
        arity = len(a.args)
        if out.setdefault(key, arity) != arity:
            raise FormulaError(f"{key[1]} used with arities {out[key]} and {arity}")
    elif ta is Arrow:
        pred_arities(a.left, out)
        pred_arities(a.right, out)
    elif ta in (ForallFo, ForallPred, ForallBot):
        pred_arities(a.body, out)
    return out


# ---------------------------------------------------------------------------
# substitution


def subst_fo(a: Formula, m: Mapping[str, FoTerm]) -> Formula:
    """Capture-avoiding first-order substitution inside a formula."""
    live = {k: v for k, v in m.items() if k in fv_fo(a)}
    if not live:
        return a
    return _subst_fo(a, live)


def _subst_fo(a: Formula, m: dict) -> Formula:
    ta = type(a)
    if ta is Bot:
        return a
    if ta is PredVarApp:
        return PredVarApp(a.name, tuple(fo_subst(t, m) for t in a.args))
    if ta is BotVarApp:
        return BotVarApp(a.name, tuple(fo_subst(t, m) for t in a.args))
    if ta is PredSymApp:
        return PredSymApp(a.sym, tuple(fo_subst(t, m) for t in a.args))
    if ta is Arrow:
        return Arrow(subst_fo(a.left, m), subst_fo(a.right, m))
    if ta is ForallFo:
        live = {k: v for k, v in m.items() if k != a.var and k in fv_fo(a.body)}
        if not live:
            return a
        introduced: set[str] = set()
        for v in live.values():
            introduced |= fo_vars(v)
        if a.var in introduced:
            nv = fresh_name(a.var, introduced | fv_fo(a.body) | set(live))
            live[a.var] = FoVar(nv)
            return ForallFo(nv, _subst_fo(a.body, live))
        return ForallFo(a.var, _subst_fo(a.body, live))
    if ta is ForallPred:
        return ForallPred(a.var, subst_fo(a.body, m))
    return ForallBot(a.var, subst_fo(a.body, m))


@dataclass(frozen=True)
class PredAbstraction:
    """A predicate of explicit arity: params are first-order, body a formula."""

    params: tuple
    body: Formula

    def __post_init__(self):
        if len(set(self.params)) != len(self.params):
            raise FormulaError("abstraction parameters must be distinct")

    @property
    def arity(self) -> int:
        return len(self.params)

    def apply(self, args: Sequence[FoTerm]) -> Formula:
        if len(args) != len(self.params):
            raise FormulaError(
                f"abstraction of arity {len(self.params)} applied to {len(args)} arguments"
            )
        return subst_fo(self.body, dict(zip(self.params, args)))

    def free_fo(self) -> frozenset[str]:
        return fv_fo(self.body) - set(self.params)


def _rename_pred(f: Formula, old: str, new: str) -> Formula:
    tf = type(f)
    if tf is PredVarApp:
        return PredVarApp(new, f.args) if f.name == old else f
    if tf in (Bot, BotVarApp, PredSymApp):
        return f
    if tf is Arrow:
        return Arrow(_rename_pred(f.left, old, new), _rename_pred(f.right, old, new))
    if tf is ForallPred and f.var == old:
        return f
    if tf is ForallFo:
        return ForallFo(f.var, _rename_pred(f.body, old, new))
    if tf is ForallPred:
        return ForallPred(f.var, _rename_pred(f.body, old, new))
    return ForallBot(f.var, _rename_pred(f.body, old, new))


def _rename_bot(f: Formula, old: str, new: str) -> Formula:
    tf = type(f)
    if tf is BotVarApp:
        return BotVarApp(new, f.args) if f.name == old else f
    if tf in (Bot, PredVarApp, PredSymApp):
        return f
    if tf is Arrow:
        return Arrow(_rename_bot(f.left, old, new), _rename_bot(f.right, old, new))
    if tf is ForallBot and f.var == old:
        return f
    if tf is ForallFo:
        return ForallFo(f.var, _rename_bot(f.body, old, new))
    if tf is ForallPred:
        return ForallPred(f.var, _rename_bot(f.body, old, new))
    return ForallBot(f.var, _rename_bot(f.body, old, new))


def _subst_second_order(a: Formula, name: str, abst: PredAbstraction, bottomed: bool) -> Formula:
    atom_cls = BotVarApp if bottomed else PredVarApp
    fv_ns = fv_bot if bottomed else fv_pred
    body_fo = abst.free_fo()
    body_pred = fv_pred(abst.body)
    body_bot = fv_bot(abst.body)

    def walk(f: Formula) -> Formula:
        tf = type(f)
        if tf is atom_cls and f.name == name:
            return abst.apply(f.args)
        if tf in (Bot, PredVarApp, BotVarApp, PredSymApp):
            return f
        if tf is Arrow:
            return Arrow(walk(f.left), walk(f.right))
        if name not in fv_ns(f):
            return f
        if tf is ForallFo:
            var, body = f.var, f.body
            if var in body_fo:
                nv = fresh_name(var, body_fo | fv_fo(body))
                return ForallFo(nv, walk(subst_fo(body, {var: FoVar(nv)})))
            return ForallFo(var, walk(body))
        if tf is ForallPred:
            var, body = f.var, f.body
            if var in body_pred:
                nv = fresh_name(var, body_pred | fv_pred(body))
                var, body = nv, _rename_pred(body, f.var, nv)
            return ForallPred(var, walk(body))
        # ForallBot; shadowing was already handled by the fv_ns prune for
        # the bottomed case (a ForallBot binding `name` has name not free)
        var, body = f.var, f.body
        if var in body_bot:
            nv = fresh_name(var, body_bot | fv_bot(body))
            var, body = nv, _rename_bot(body, f.var, nv)
        return ForallBot(var, walk(body))

    if name not in fv_ns(a):
        return a
    return walk(a)


def subst_pred(a: Formula, name: str, abst: PredAbstraction) -> Formula:
    """Substitute a predicate abstraction for a free predicate variable."""
    return _subst_second_order(a, name, abst, bottomed=False)


def subst_bot(a: Formula, name: str, abst: PredAbstraction) -> Formula:
    """Substitute a predicate abstraction for a free bottomed variable."""
    return _subst_second_order(a, name, abst, bottomed=True)


# ---------------------------------------------------------------------------
# bot-types and translations


def is_bot_type(a: Formula) -> bool:
    """Bottomed types: bot, bottomed atoms, arrows into them, quantifications."""
    ta = type(a)
    if ta is Bot or ta is BotVarApp:
        return True
    if ta is Arrow:
        return is_bot_type(a.right)
    if ta in (ForallFo, ForallPred, ForallBot):
        return is_bot_type(a.body)
    return False


def godel_star(a: Formula) -> Formula:
    """Negative translation: every atom is negated, bot is fixed.

    Defined only on formulas without bottomed variables.
    """
    if _has_bot_vars(a):
        raise FormulaError("negative translation is undefined on bottomed formulas")

    def walk(f: Formula) -> Formula:
        tf = type(f)
        if tf is Bot:
            return f
        if tf in (PredVarApp, PredSymApp):
            return neg(f)
        if tf is Arrow:
            return Arrow(walk(f.left), walk(f.right))
        if tf is ForallFo:
            return ForallFo(f.var, walk(f.body))
        return ForallPred(f.var, walk(f.body))

    return walk(a)


def bot_transform(a: Formula) -> Formula:
    """Replace every predicate variable by its bottomed twin (binders too).

    Predicate symbols and bot itself are unchanged. Defined only on formulas
    that do not already contain bottomed variables.
    """
    if _has_bot_vars(a):
        raise FormulaError("formula already contains bottomed variables")

    def walk(f: Formula) -> Formula:
        tf = type(f)
        if tf in (Bot, PredSymApp):
            return f
        if tf is PredVarApp:
            return BotVarApp(f.name, f.args)
        if tf is Arrow:
            return Arrow(walk(f.left), walk(f.right))
        if tf is ForallFo:
            return ForallFo(f.var, walk(f.body))
        return ForallBot(f.var, walk(f.body))

    return walk(a)


def forget_first_order(a: Formula) -> Formula:
    """Erase the first-order layer: drop atom arguments and fo quantifiers."""
    ta = type(a)
    if ta is Bot:
        return a
    if ta is PredVarApp:
        return PredVarApp(a.name)
    if ta is BotVarApp:
        return BotVarApp(a.name)
    if ta is PredSymApp:
        return PredSymApp(a.sym)
    if ta is Arrow:
        return Arrow(forget_first_order(a.left), forget_first_order(a.right))
    if ta is ForallFo:
        return forget_first_order(a.body)
    if ta is ForallPred:
        return ForallPred(a.var, forget_first_order(a.body))
    return ForallBot(a.var, forget_first_order(a.body))


def polarity(a: Formula, name: str, kind: str = "pred") -> str:
    """Sign of the free occurrences of a predicate/bottomed variable.

    Returns 'absent', 'positive', 'negative' or 'both'. Occurrences to the
    left of an arrow flip sign.
    """
    if kind not in ("pred", "bot"):
        raise ValueError("kind must be 'pred' or 'bot'")
    atom_cls = PredVarApp if kind == "pred" else BotVarApp
    quant_cls = ForallPred if kind == "pred" else ForallBot
    signs: set[int] = set()

    def walk(f: Formula, sign: int) -> None:
        tf = type(f)
        if tf is atom_cls and f.name == name:
            signs.add(sign)
        elif tf is Arrow:
            walk(f.left, -sign)
            walk(f.right, sign)
        elif tf is quant_cls:
            if f.var != name:
                walk(f.body, sign)
        elif tf in (ForallFo, ForallPred, ForallBot):
            walk(f.body, sign)

    walk(a, +1)
    if not signs:
        return "absent"
    if signs == {+1}:
        return "positive"
    if signs == {-1}:
        return "negative"
    return "both"


# ---------------------------------------------------------------------------
# the numeral types


def n_type(t: Optional[FoTerm] = None) -> Formula:
    """N[t] = !X {X(0), !y (X(y) -> X(s(y))) -> X(t)}; N (propositional) when t is None."""
    if t is None:
        x = PredVarApp("X")
        return ForallPred("X", Arrow(x, Arrow(Arrow(x, x), x)))
    zero = FoApp("0")
    y = FoVar("y")
    step = ForallFo("y", Arrow(PredVarApp("X", (y,)), PredVarApp("X", (FoApp("s", (y,)),))))
    return ForallPred("X", Arrow(PredVarApp("X", (zero,)), Arrow(step, PredVarApp("X", (t,)))))


def n_star_type(t: Optional[FoTerm] = None) -> Formula:
    """The negative translation of N[t]."""
    return godel_star(n_type(t))


def n_bot_type(t: Optional[FoTerm] = None) -> Formula:
    """The bottomed variant of N[t]."""
    return bot_transform(n_type(t))


# ---------------------------------------------------------------------------
# equations


@dataclass(frozen=True)
class Equation:
    lhs: FoTerm
    rhs: FoTerm
    name: str = ""

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"<{label}{print_foterm(self.lhs)} = {print_foterm(self.rhs)}>"


class EquationSet:
    """Named equations over an inferred first-order signature."""

    def __init__(self, equations: Iterable[Equation] = ()):
        self.equations: list[Equation] = list(equations)
        names = [e.name for e in self.equations if e.name]
        if len(names) != len(set(names)):
            raise FormulaError("duplicate equation names")
        self.signature = self._infer_signature()

    def _infer_signature(self) -> dict[str, int]:
        sig: dict[str, int] = {"0": 0, "s": 1}

        def scan(t: FoTerm) -> None:
            if isinstance(t, FoApp):
                if sig.setdefault(t.sym, len(t.args)) != len(t.args):
                    raise FormulaError(
                        f"function symbol {t.sym} used with conflicting arities"
                    )
                for a in t.args:
                    scan(a)

        for e in self.equations:
            scan(e.lhs)
            scan(e.rhs)
        return sig

    def __iter__(self):
        return iter(self.equations)

    def __len__(self):
        return len(self.equations)

    def get(self, name: str) -> Equation:
        for e in self.equations:
            if e.name == name:
                return e
        raise KeyError(f"no equation named {name!r}")


def parse_equations(text: str) -> EquationSet:
    """One equation per line: ``name: lhs = rhs``; ``#`` starts a comment."""
    eqs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name = ""
        if ":" in line:
            name, line = line.split(":", 1)
            name = name.strip()
        if "=" not in line:
            raise FormulaError(f"line {lineno}: expected lhs = rhs")
        lhs_src, rhs_src = line.split("=", 1)
        eqs.append(Equation(_parse_foterm_src(lhs_src), _parse_foterm_src(rhs_src), name))
    return EquationSet(eqs)


def apply_equation(
    a: Formula, eq: Equation, path: Sequence[int], direction: str = "lr"
) -> Formula:
    """Rewrite one first-order subterm of a formula with an equation instance.

    The path indexes children: arrows 0/1, quantifier bodies 0, atom
    arguments by position, then positions inside the first-order term.
    """
    if direction not in ("lr", "rl"):
        raise FormulaError("direction must be 'lr' or 'rl'")
    pattern, replacement = (eq.lhs, eq.rhs) if direction == "lr" else (eq.rhs, eq.lhs)
    missing = fo_vars(replacement) - fo_vars(pattern)
    if missing:
        raise FormulaError(
            f"rewrite would not determine {sorted(missing)}; "
            "these variables occur only in the replacement side"
        )

    def rewrite_term(t: FoTerm, path: Sequence[int], bound: frozenset[str]) -> FoTerm:
        if not path:
            sigma: dict[str, FoTerm] = {}
            if not _match_fo(pattern, t, sigma):
                raise FormulaError(
                    f"equation side {print_foterm(pattern)} does not match "
                    f"{print_foterm(t)}"
                )
            captured = fo_vars(t) & bound
            if captured:
                raise FormulaError(
                    f"occurrence mentions {sorted(captured)} bound above it; "
                    "the equation does not apply to captured positions"
                )
            return fo_subst(replacement, sigma)
        i, rest = path[0], path[1:]
        if not isinstance(t, FoApp) or i >= len(t.args):
            raise FormulaError("path leaves the term")
        return FoApp(
            t.sym, t.args[:i] + (rewrite_term(t.args[i], rest, bound),) + t.args[i + 1 :]
        )

    def rewrite(f: Formula, path: Sequence[int], bound: frozenset[str]) -> Formula:
        tf = type(f)
        if tf in (PredVarApp, BotVarApp, PredSymApp):
            if not path:
                raise FormulaError("path stops at an atom, not at a term position")
            i, rest = path[0], path[1:]
            if i >= len(f.args):
                raise FormulaError("no such atom argument")
            args = f.args[:i] + (rewrite_term(f.args[i], rest, bound),) + f.args[i + 1 :]
            if tf is PredSymApp:
                return PredSymApp(f.sym, args)
            return tf(f.name, args)
        if not path:
            raise FormulaError("path stops before reaching an atom")
        i, rest = path[0], path[1:]
        if tf is Arrow:
            if i == 0:
                return Arrow(rewrite(f.left, rest, bound), f.right)
            if i == 1:
                return Arrow(f.left, rewrite(f.right, rest, bound))
            raise FormulaError("arrow children are 0 and 1")
        if tf in (ForallFo, ForallPred, ForallBot):
            if i != 0:
                raise FormulaError("quantifier child is 0")
            inner = bound | {f.var} if tf is ForallFo else bound
            return tf(f.var, rewrite(f.body, rest, inner))
        raise FormulaError("path leaves the formula")

    return rewrite(a, tuple(path), frozenset())


def check_adequacy(eqs: EquationSet, size_bound: int = 4) -> Optional[str]:
    """Refutation lint for the two numeral-soundness conditions.

    Builds the congruence closure of all ground instances of the equations
    over ground terms of at most size_bound nodes and looks for a provable
    s(a) = 0 (condition i) or a provable s(a) = s(b) whose a = b was not
    provable within the bound (condition ii, heuristic). Returns None when
    nothing was found; this is a bounded search, not a proof of adequacy.
    """
    sig = eqs.signature
    by_size: dict[int, list[FoTerm]] = {}
    for size in range(1, size_bound + 1):
        layer: list[FoTerm] = []
        for sym, arity in sorted(sig.items()):
            if arity == 0 and size == 1:
                layer.append(FoApp(sym))
            elif arity > 0 and size > 1:
                for split in _compositions(size - 1, arity):
                    pools = [by_size.get(s, []) for s in split]
                    for combo in _product(pools):
                        layer.append(FoApp(sym, tuple(combo)))
        by_size[size] = layer
    universe: list[FoTerm] = [t for size in range(1, size_bound + 1) for t in by_size[size]]
    index = {t: i for i, t in enumerate(universe)}

    parent = list(range(len(universe)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> bool:
        ri, rj = find(i), find(j)
        if ri == rj:
            return False
        parent[ri] = rj
        return True

    ground = [t for t in universe]
    for eq in eqs:
        vars_ = sorted(fo_vars(eq.lhs) | fo_vars(eq.rhs))
        for combo in _product([ground] * len(vars_)):
            sigma = dict(zip(vars_, combo))
            lhs, rhs = fo_subst(eq.lhs, sigma), fo_subst(eq.rhs, sigma)
            if lhs in index and rhs in index:
                union(index[lhs], index[rhs])

    changed = True
    while changed:
        changed = False
        buckets: dict[tuple, list[int]] = {}
        for i, t in enumerate(universe):
            key = (t.sym, tuple(find(index[a]) for a in t.args))
            buckets.setdefault(key, []).append(i)
        for group in buckets.values():
            first = group[0]
            for other in group[1:]:
                if union(first, other):
                    changed = True

    zero_class = find(index[FoApp("0")])
    succs = [t for t in universe if isinstance(t, FoApp) and t.sym == "s"]
    for t in succs:
        if find(index[t]) == zero_class:
            return f"{print_foterm(t)} = 0 is derivable"
    for i, t in enumerate(succs):
        for u in succs[i + 1 :]:
            if find(index[t]) == find(index[u]) and find(index[t.args[0]]) != find(
                index[u.args[0]]
            ):
                return (
                    f"{print_foterm(t)} = {print_foterm(u)} is derivable but "
                    f"{print_foterm(t.args[0])} = {print_foterm(u.args[0])} was not "
                    "found within the bound"
                )
    return None


def _compositions(total: int, parts: int):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _product(pools):
    if not pools:
        yield ()
        return
    head, *rest = pools
    for h in head:
        for r in _product(rest):
            yield (h,) + r


# ---------------------------------------------------------------------------
# concrete syntax

_RESERVED = {"N", "Nstar", "Nbot"}

_F_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_F_NAME_CONT = _F_NAME_START | set("0123456789'")


def _tokenize_formula(src: str):
    toks = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
            continue
        if src.startswith("->", i):
            toks.append(("->", "", i))
            i += 2
        elif c in "(){}[],~$*=":
            toks.append((c, "", i))
            i += 1
        elif c in "!∀":
            toks.append(("!", "", i))
            i += 1
        elif c == "⊥":
            toks.append(("bot", "", i))
            i += 1
        elif c.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            toks.append(("num", src[i:j], i))
            i = j
        elif c in _F_NAME_START:
            j = i
            while j < n and src[j] in _F_NAME_CONT:
                j += 1
            name = src[i:j]
            if name.endswith("_") and j < n and src[j] == "|":
                toks.append(("botname", name[:-1], i))
                i = j + 1
            elif name == "bot":
                toks.append(("bot", "", i))
                i = j
            else:
                toks.append(("name", name, i))
                i = j
        else:
            raise FormulaError(f"unexpected character {c!r} at offset {i}")
    toks.append(("end", "", n))
    return toks


def _is_fo_name(name: str) -> bool:
    for ch in name:
        if ch.isalpha():
            return ch.islower()
    return True


class _FormulaParser:
    def __init__(self, toks):
        self.toks = toks
        self.pos = 0

    def peek(self):
        return self.toks[self.pos]

    def take(self):
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise FormulaError(f"expected {kind!r} at offset {tok[2]}")
        return tok

    # first-order terms ------------------------------------------------

    def foterm(self) -> FoTerm:
        kind, val, at = self.take()
        if kind == "num":
            return FoApp(val)
        if kind != "name":
            raise FormulaError(f"expected a first-order term at offset {at}")
        if self.peek()[0] == "(":
            self.take()
            args = [self.foterm()]
            while self.peek()[0] == ",":
                self.take()
                args.append(self.foterm())
            self.expect(")")
            return FoApp(val, tuple(args))
        return FoVar(val)

    def atom_args(self) -> tuple:
        if self.peek()[0] != "(":
            return ()
        self.take()
        args = [self.foterm()]
        while self.peek()[0] == ",":
            self.take()
            args.append(self.foterm())
        self.expect(")")
        return tuple(args)

    # formulas ----------------------------------------------------------

    def seq(self) -> Formula:
        left = self.arr()
        if self.peek()[0] == ",":
            self.take()
            return Arrow(left, self.seq())
        return left

    def arr(self) -> Formula:
        left = self.un()
        if self.peek()[0] == "->":
            self.take()
            return Arrow(left, self.arr())
        return left

    def un(self) -> Formula:
        kind, val, at = self.peek()
        if kind == "~":
            self.take()
            return neg(self.un())
        if kind == "!":
            self.take()
            bkind, bval, bat = self.take()
            if bkind == "botname":
                if bval in _RESERVED:
                    raise FormulaError(f"{bval!r} is reserved (offset {bat})")
                return ForallBot(bval, self.un())
            if bkind != "name":
                raise FormulaError(f"expected a quantifier variable at offset {bat}")
            if _is_fo_name(bval):
                return ForallFo(bval, self.un())
            if bval in _RESERVED:
                raise FormulaError(f"{bval!r} is reserved (offset {bat})")
            return ForallPred(bval, self.un())
        return self.atom()

    def _macro(self, variant: str) -> Formula:
        arg = None
        if self.peek()[0] == "[":
            self.take()
            arg = self.foterm()
            self.expect("]")
        if variant == "plain":
            return n_type(arg)
        if variant == "star":
            return n_star_type(arg)
        return n_bot_type(arg)

    def atom(self) -> Formula:
        kind, val, at = self.take()
        if kind == "bot":
            return Bot()
        if kind == "$":
            nkind, nval, nat = self.take()
            if nkind != "name":
                raise FormulaError(f"expected a predicate symbol at offset {nat}")
            return PredSymApp(nval, self.atom_args())
        if kind == "botname":
            if val == "N":
                return self._macro("bot")
            if val in _RESERVED:
                raise FormulaError(f"{val!r} is reserved (offset {at})")
            return BotVarApp(val, self.atom_args())
        if kind == "name":
            if val == "N":
                if self.peek()[0] == "*":
                    self.take()
                    return self._macro("star")
                return self._macro("plain")
            if val == "Nstar":
                return self._macro("star")
            if val == "Nbot":
                return self._macro("bot")
            if _is_fo_name(val):
                raise FormulaError(
                    f"first-order name {val!r} cannot stand alone as a formula "
                    f"(offset {at})"
                )
            return PredVarApp(val, self.atom_args())
        if kind == "(":
            inner = self.seq()
            self.expect(")")
            return inner
        if kind == "{":
            inner = self.seq()
            self.expect("}")
            return inner
        raise FormulaError(f"expected a formula at offset {at}")


def parse_formula(src: str) -> Formula:
    parser = _FormulaParser(_tokenize_formula(src))
    out = parser.seq()
    kind, _, at = parser.peek()
    if kind != "end":
        raise FormulaError(f"unexpected trailing input at offset {at}")
    return out


def _parse_foterm_src(src: str) -> FoTerm:
    parser = _FormulaParser(_tokenize_formula(src))
    out = parser.foterm()
    kind, _, at = parser.peek()
    if kind != "end":
        raise FormulaError(f"unexpected trailing input at offset {at}")
    return out


def _flatten_arrows(a: Formula):
    premises = []
    node = a
    while type(node) is Arrow and type(node.right) is not Bot:
        premises.append(node.left)
        node = node.right
    return premises, node


def _print_args(args) -> str:
    if not args:
        return ""
    return "(" + ", ".join(print_foterm(t) for t in args) + ")"


def _unit(a: Formula) -> str:
    ta = type(a)
    if ta is Bot:
        return "bot"
    if ta is PredVarApp:
        return a.name + _print_args(a.args)
    if ta is BotVarApp:
        return a.name + "_|" + _print_args(a.args)
    if ta is PredSymApp:
        return "$" + a.sym + _print_args(a.args)
    if ta is Arrow:
        if type(a.right) is Bot:
            return "~" + _tight(a.left)
        return "(" + _chain(a) + ")"
    if ta is ForallFo:
        return "!" + a.var + " " + _qbody(a.body)
    if ta is ForallPred:
        return "!" + a.var + " " + _qbody(a.body)
    return "!" + a.var + "_| " + _qbody(a.body)


def _tight(a: Formula) -> str:
    ta = type(a)
    if ta in (Bot, PredVarApp, BotVarApp, PredSymApp):
        return _unit(a)
    if ta is Arrow and type(a.right) is Bot:
        return _unit(a)
    return "(" + _chain(a) + ")"


def _qbody(b: Formula) -> str:
    premises, goal = _flatten_arrows(b)
    if not premises:
        return _unit(b)
    if len(premises) == 1:
        return "(" + _unit(premises[0]) + " -> " + _unit(goal) + ")"
    return "{" + ", ".join(_unit(p) for p in premises) + " -> " + _unit(goal) + "}"


def _chain(a: Formula) -> str:
    premises, goal = _flatten_arrows(a)
    if not premises:
        return _unit(a)
    return " -> ".join([_unit(p) for p in premises] + [_unit(goal)])


def print_formula(a: Formula) -> str:
    """Render a formula; parse_formula(print_formula(a)) recovers it."""
    return _chain(a)
