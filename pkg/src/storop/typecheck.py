"""Typed derivation trees and their checker.

A derivation node records rule, context, subject term, stated type, an
optional witness, and premises. The checker revalidates every node against
the rule's side conditions; nothing is inferred or repaired, so a stored
derivation is evidence, not a search problem.

Rules: ax, abs, app, gen-fo, inst-fo, gen-pred, inst-pred, gen-bot,
inst-bot, eq. Fragments restrict the rule set: 'af2' forbids the bottomed
rules, 'af2-bot' allows everything, 'fperp' is propositional (no
first-order layer anywhere, no eq) with the bottomed rules allowed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from storop.formulas import (
    Arrow,
    Bot,
    BotVarApp,
    EquationSet,
    FormulaError,
    ForallBot,
    ForallFo,
    ForallPred,
    Formula,
    PredAbstraction,
    PredSymApp,
    PredVarApp,
    apply_equation,
    fv_bot,
    fv_fo,
    fv_pred,
    is_bot_type,
    parse_formula,
    print_formula,
    subst_bot,
    subst_fo,
    subst_pred,
)
from storop.formulas import FoTerm, _parse_foterm_src, print_foterm
from storop.terms import Abs, App, Term, Var, parse_term, print_term

__all__ = [
    "Context",
    "Derivation",
    "CheckReport",
    "FRAGMENTS",
    "check_derivation",
    "check_fperp",
    "forget_derivation",
    "lift_star_to_bot",
    "write_derivation",
    "read_derivation",
]

FRAGMENTS = ("af2", "af2-bot", "fperp")


class Context:
    """Ordered typing context; names are unique."""

    __slots__ = ("entries",)

    def __init__(self, entries: Sequence[tuple[str, Formula]] = ()):
        self.entries = tuple(entries)
        names = [n for n, _ in self.entries]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate names in context: {names}")

    def extended(self, name: str, a: Formula) -> "Context":
        return Context(self.entries + ((name, a),))

    def without_last(self) -> "Context":
        return Context(self.entries[:-1])

    def lookup(self, name: str) -> Optional[Formula]:
        for n, a in self.entries:
            if n == name:
                return a
        return None

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def formulas(self) -> tuple[Formula, ...]:
        return tuple(a for _, a in self.entries)

    def __eq__(self, other):
        if not isinstance(other, Context):
            return NotImplemented
        return (
            len(self.entries) == len(other.entries)
            and all(n1 == n2 for (n1, _), (n2, _) in zip(self.entries, other.entries))
            and all(a1 == a2 for (_, a1), (_, a2) in zip(self.entries, other.entries))
        )

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self):
        inside = ", ".join(f"{n}: {print_formula(a)}" for n, a in self.entries)
        return f"[{inside}]"


@dataclass
class Derivation:
    rule: str
    ctx: Context
    term: Term
    type: Formula
    witness: object = None
    premises: tuple = ()

    def conclusion(self) -> str:
        return f"{self.ctx!r} |- {print_term(self.term)} : {print_formula(self.type)}"

    def node_count(self) -> int:
        return 1 + sum(p.node_count() for p in self.premises)


@dataclass
class CheckReport:
    ok: bool
    failures: list = field(default_factory=list)

    def first_message(self) -> str:
        if not self.failures:
            return ""
        path, msg = self.failures[0]
        return f"at {list(path)}: {msg}"


_ARITY = {
    "ax": 0,
    "abs": 1,
    "app": 2,
    "gen-fo": 1,
    "inst-fo": 1,
    "gen-pred": 1,
    "inst-pred": 1,
    "gen-bot": 1,
    "inst-bot": 1,
    "eq": 1,
}


def _is_propositional(a: Formula) -> bool:
    ta = type(a)
    if ta is Bot:
        return True
    if ta in (PredVarApp, BotVarApp, PredSymApp):
        return not a.args
    if ta is Arrow:
        return _is_propositional(a.left) and _is_propositional(a.right)
    if ta is ForallFo:
        return False
    return _is_propositional(a.body)


def check_derivation(
    d: Derivation,
    equations: Optional[EquationSet] = None,
    fragment: str = "af2-bot",
) -> CheckReport:
    """Revalidate every node, premises first; failures carry node paths."""
    if fragment not in FRAGMENTS:
        raise ValueError(f"fragment must be one of {FRAGMENTS}")
    failures: list = []

    def fail(path, msg):
        failures.append((path, msg))

    def walk(node: Derivation, path: tuple) -> None:
        for i, p in enumerate(node.premises):
            walk(p, path + (i,))
        rule = node.rule
        want = _ARITY.get(rule)
        if want is None:
            fail(path, f"unknown rule {rule!r}")
            return
        if len(node.premises) != want:
            fail(path, f"{rule} expects {want} premises, found {len(node.premises)}")
            return
        if fragment == "af2" and rule in ("gen-bot", "inst-bot"):
            fail(path, f"{rule} is not part of the af2 fragment")
            return
        if fragment == "fperp":
            if rule in ("gen-fo", "inst-fo", "eq"):
                fail(path, f"{rule} is not part of the propositional fragment")
                return
            if not _is_propositional(node.type) or not all(
                _is_propositional(a) for a in node.ctx.formulas()
            ):
                fail(path, "propositional fragment requires first-order-free formulas")
                return
        try:
            _check_node(node, equations, fail, path)
        except (FormulaError, ValueError) as exc:
            fail(path, str(exc))

    walk(d, ())
    return CheckReport(not failures, failures)


def _check_node(node: Derivation, equations, fail, path) -> None:
    rule, ctx, term, a = node.rule, node.ctx, node.term, node.type
    if rule == "ax":
        if type(term) is not Var:
            fail(path, "ax subject must be a variable")
            return
        found = ctx.lookup(term.name)
        if found is None:
            fail(path, f"{term.name} is not in the context")
        elif found != a:
            fail(path, f"context gives {term.name} : {print_formula(found)}, node says {print_formula(a)}")
        return

    if rule == "abs":
        (p,) = node.premises
        if type(term) is not Abs:
            fail(path, "abs subject must be an abstraction")
            return
        if type(a) is not Arrow:
            fail(path, "abs type must be an arrow")
            return
        if ctx.lookup(term.binder) is not None:
            fail(path, f"binder {term.binder} shadows a context entry")
            return
        if p.ctx != ctx.extended(term.binder, a.left):
            fail(path, "premise context must extend the conclusion context with the binder")
            return
        if p.term != term.body:
            fail(path, "premise subject must be the abstraction body")
            return
        if p.type != a.right:
            fail(path, "premise type must be the arrow target")
        return

    if rule == "app":
        pf, pa = node.premises
        if type(term) is not App:
            fail(path, "app subject must be an application")
            return
        if pf.ctx != ctx or pa.ctx != ctx:
            fail(path, "premises must share the conclusion context")
            return
        if pf.term != term.fn or pa.term != term.arg:
            fail(path, "premise subjects must be the function and argument")
            return
        if type(pf.type) is not Arrow:
            fail(path, "function premise must have an arrow type")
            return
        if pa.type != pf.type.left:
            fail(path, "argument type must match the arrow source")
            return
        if a != pf.type.right:
            fail(path, "conclusion type must be the arrow target")
        return

    # the remaining rules keep subject and context fixed
    (p,) = node.premises
    if p.ctx != ctx:
        fail(path, "premise context must match")
        return
    if p.term != term:
        fail(path, "premise subject must match")
        return

    if rule == "gen-fo":
        if type(a) is not ForallFo:
            fail(path, "gen-fo conclusion must be a first-order quantification")
            return
        if p.type != a.body:
            fail(path, "premise type must be the quantifier body")
            return
        for name, b in ctx:
            if a.var in fv_fo(b):
                fail(path, f"{a.var} occurs free in the context entry {name}")
                return
        return

    if rule == "inst-fo":
        if type(p.type) is not ForallFo:
            fail(path, "inst-fo premise must be a first-order quantification")
            return
        if not isinstance(node.witness, FoTerm):
            fail(path, "inst-fo witness must be a first-order term")
            return
        expect = subst_fo(p.type.body, {p.type.var: node.witness})
        if a != expect:
            fail(path, f"instantiation yields {print_formula(expect)}")
        return

    if rule == "gen-pred":
        if type(a) is not ForallPred:
            fail(path, "gen-pred conclusion must be a predicate quantification")
            return
        if p.type != a.body:
            fail(path, "premise type must be the quantifier body")
            return
        for name, b in ctx:
            if a.var in fv_pred(b):
                fail(path, f"{a.var} occurs free in the context entry {name}")
                return
        return

    if rule == "inst-pred":
        if type(p.type) is not ForallPred:
            fail(path, "inst-pred premise must be a predicate quantification")
            return
        if not isinstance(node.witness, PredAbstraction):
            fail(path, "inst-pred witness must be a predicate abstraction")
            return
        expect = subst_pred(p.type.body, p.type.var, node.witness)
        if a != expect:
            fail(path, f"instantiation yields {print_formula(expect)}")
        return

    if rule == "gen-bot":
        if type(a) is not ForallBot:
            fail(path, "gen-bot conclusion must be a bottomed quantification")
            return
        if p.type != a.body:
            fail(path, "premise type must be the quantifier body")
            return
        for name, b in ctx:
            if a.var in fv_bot(b):
                fail(path, f"{a.var} occurs free in the context entry {name}")
                return
        return

    if rule == "inst-bot":
        if type(p.type) is not ForallBot:
            fail(path, "inst-bot premise must be a bottomed quantification")
            return
        if not isinstance(node.witness, PredAbstraction):
            fail(path, "inst-bot witness must be a predicate abstraction")
            return
        if not is_bot_type(node.witness.body):
            fail(path, "inst-bot witness body must be a bottomed type")
            return
        expect = subst_bot(p.type.body, p.type.var, node.witness)
        if a != expect:
            fail(path, f"instantiation yields {print_formula(expect)}")
        return

    if rule == "eq":
        if equations is None:
            fail(path, "eq rule used but no equations are in scope")
            return
        steps = node.witness
        if not isinstance(steps, (list, tuple)) or not steps:
            fail(path, "eq witness must be a non-empty list of rewrite steps")
            return
        cur = p.type
        for step in steps:
            try:
                name, direction, spath = step
            except (TypeError, ValueError):
                fail(path, "eq step must be (equation-name, direction, path)")
                return
            try:
                eq = equations.get(name)
            except KeyError as exc:
                fail(path, str(exc))
                return
            cur = apply_equation(cur, eq, tuple(spath), direction)
        if a != cur:
            fail(path, f"rewrites yield {print_formula(cur)}")
        return

    raise AssertionError(f"unhandled rule {rule}")


def check_fperp(d: Derivation) -> CheckReport:
    """Propositional fragment check (no first-order layer, bottomed rules allowed)."""
    return check_derivation(d, fragment="fperp")


# ---------------------------------------------------------------------------
# forgetting the first-order layer


def forget_derivation(d: Derivation) -> Derivation:
    """Erase the first-order layer of a derivation.

    gen-fo, inst-fo and eq nodes collapse onto their premise; every other
    node keeps its rule with types, contexts and witnesses forgotten.
    """
    from storop.formulas import forget_first_order as fo

    def walk(node: Derivation) -> Derivation:
        if node.rule in ("gen-fo", "inst-fo", "eq"):
            return walk(node.premises[0])
        ctx = Context(tuple((n, fo(a)) for n, a in node.ctx))
        witness = node.witness
        if node.rule in ("inst-pred", "inst-bot"):
            witness = PredAbstraction((), fo(witness.body))
        return Derivation(
            node.rule,
            ctx,
            node.term,
            fo(node.type),
            witness,
            tuple(walk(p) for p in node.premises),
        )

    return walk(d)


# ---------------------------------------------------------------------------
# lifting a negative-translation typing to a bottomed typing


def lift_star_to_bot(d: Derivation) -> Derivation:
    """Rebuild a derivation of |- M : !x (N*[x] -> A) as one of !x (N_|[x] -> A).

    Expects the root to be gen-fo over abs; the ambient context is kept.
    Each axiom leaf for the abstracted variable is replaced by the
    three-step opening of N_|[x]: ax, inst-bot at ([w], ~X(w)), gen-pred X.
    """
    from storop.formulas import n_bot_type, n_star_type, neg
    from storop.formulas import FoVar

    if d.rule != "gen-fo" or type(d.type) is not ForallFo:
        raise ValueError("expected a gen-fo root")
    absd = d.premises[0]
    if absd.rule != "abs" or type(absd.term) is not Abs:
        raise ValueError("expected abs under the root quantifier")
    xvar = d.type.var
    nu = absd.term.binder
    star = n_star_type(FoVar(xvar))
    bot = n_bot_type(FoVar(xvar))
    if type(absd.type) is not Arrow or absd.type.left != star:
        raise ValueError("expected the abstraction to consume the starred numeral type")

    def rewrite_ctx(ctx: Context) -> Context:
        out = []
        for n, a in ctx:
            if n == nu:
                if a != star:
                    raise ValueError(f"context entry for {nu} is not the starred type")
                out.append((n, bot))
            else:
                out.append((n, a))
        return Context(tuple(out))

    def walk(node: Derivation) -> Derivation:
        if node.rule == "abs" and node.term.binder == nu:
            raise ValueError(f"inner binder shadows {nu}; shape not supported")
        if node.rule == "ax" and type(node.term) is Var and node.term.name == nu:
            if node.type != star:
                raise ValueError(f"axiom for {nu} has unexpected type")
            ctx = rewrite_ctx(node.ctx)
            pred_free = set()
            for _, b in ctx:
                pred_free |= fv_pred(b)
            gen_name = "X"
            while gen_name in pred_free:
                gen_name += "'"
            w = FoVar("w")
            witness = PredAbstraction(("w",), neg(PredVarApp(gen_name, (w,))))
            leaf = Derivation("ax", ctx, node.term, bot)
            opened = subst_bot(bot.body, bot.var, witness)
            instd = Derivation("inst-bot", ctx, node.term, opened, witness, (leaf,))
            gend = Derivation(
                "gen-pred", ctx, node.term, ForallPred(gen_name, opened), None, (instd,)
            )
            if gend.type != star:
                raise ValueError("reopening did not recover the starred type")
            return gend
        return Derivation(
            node.rule,
            rewrite_ctx(node.ctx),
            node.term,
            node.type,
            node.witness,
            tuple(walk(p) for p in node.premises),
        )

    body = walk(absd.premises[0])
    new_abs = Derivation(
        "abs", absd.ctx, absd.term, Arrow(bot, absd.type.right), None, (body,)
    )
    return Derivation("gen-fo", d.ctx, d.term, ForallFo(xvar, new_abs.type), None, (new_abs,))


# ---------------------------------------------------------------------------
# serialization


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_derivation(d: Derivation) -> str:
    """Stable s-expression text for a derivation tree."""
    lines: list[str] = []

    def emit(node: Derivation, indent: int) -> None:
        pad = "  " * indent
        lines.append(f"{pad}(rule {node.rule}")
        ctx_body = " ".join(f"({n} {_q(print_formula(a))})" for n, a in node.ctx)
        lines.append(f"{pad}  (ctx {ctx_body})".rstrip() if ctx_body else f"{pad}  (ctx)")
        lines.append(f"{pad}  (term {_q(print_term(node.term))})")
        lines.append(f"{pad}  (type {_q(print_formula(node.type))})")
        if node.witness is not None:
            lines.append(f"{pad}  (witness {_write_witness(node)})")
        if node.premises:
            lines.append(f"{pad}  (premises")
            for p in node.premises:
                emit(p, indent + 2)
            lines.append(f"{pad}  )")
        lines.append(f"{pad})")

    emit(d, 0)
    return "\n".join(lines) + "\n"


def _write_witness(node: Derivation) -> str:
    w = node.witness
    if node.rule == "inst-fo":
        return f"(foterm {_q(print_foterm(w))})"
    if node.rule in ("inst-pred", "inst-bot"):
        params = " ".join(w.params)
        return f"(abst ({params}) {_q(print_formula(w.body))})"
    if node.rule == "eq":
        steps = []
        for name, direction, spath in w:
            pth = " ".join(str(i) for i in spath)
            steps.append(f"(step {name} {direction} ({pth}))")
        return "(steps " + " ".join(steps) + ")"
    raise ValueError(f"rule {node.rule} carries no witness encoding")


def _sexp_tokens(src: str):
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
        elif c in "()":
            yield c
            i += 1
        elif c == '"':
            j = i + 1
            out = []
            while j < n and src[j] != '"':
                if src[j] == "\\" and j + 1 < n:
                    out.append(src[j + 1])
                    j += 2
                else:
                    out.append(src[j])
                    j += 1
            if j >= n:
                raise ValueError("unterminated string in derivation file")
            yield ("str", "".join(out))
            i = j + 1
        else:
            j = i
            while j < n and src[j] not in ' \t\r\n()"':
                j += 1
            yield ("atom", src[i:j])
            i = j


def _sexp_parse(src: str):
    stack: list[list] = [[]]
    for tok in _sexp_tokens(src):
        if tok == "(":
            stack.append([])
        elif tok == ")":
            done = stack.pop()
            if not stack:
                raise ValueError("unbalanced parentheses")
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise ValueError("unbalanced parentheses")
    return stack[0]


def read_derivation(src: str) -> Derivation:
    forms = _sexp_parse(src)
    if len(forms) != 1:
        raise ValueError("expected exactly one derivation form")
    return _read_node(forms[0])


def _atom(x) -> str:
    if isinstance(x, tuple) and x[0] == "atom":
        return x[1]
    raise ValueError(f"expected an atom, found {x!r}")


def _string(x) -> str:
    if isinstance(x, tuple) and x[0] == "str":
        return x[1]
    raise ValueError(f"expected a string, found {x!r}")


def _read_node(form) -> Derivation:
    if not isinstance(form, list) or not form or _atom(form[0]) != "rule":
        raise ValueError("expected a (rule ...) form")
    rule = _atom(form[1])
    ctx = Context()
    term = None
    ftype = None
    witness = None
    premises: list[Derivation] = []
    for part in form[2:]:
        if not isinstance(part, list) or not part:
            raise ValueError("malformed derivation section")
        head = _atom(part[0])
        if head == "ctx":
            entries = []
            for entry in part[1:]:
                entries.append((_atom(entry[0]), parse_formula(_string(entry[1]))))
            ctx = Context(tuple(entries))
        elif head == "term":
            term = parse_term(_string(part[1]))
        elif head == "type":
            ftype = parse_formula(_string(part[1]))
        elif head == "witness":
            witness = _read_witness(rule, part[1])
        elif head == "premises":
            premises = [_read_node(p) for p in part[1:]]
        else:
            raise ValueError(f"unknown section {head!r}")
    if term is None or ftype is None:
        raise ValueError("derivation node needs term and type")
    return Derivation(rule, ctx, term, ftype, witness, tuple(premises))


def _read_witness(rule: str, form):
    head = _atom(form[0])
    if head == "foterm":
        return _parse_foterm_src(_string(form[1]))
    if head == "abst":
        params = tuple(_atom(p) for p in form[1])
        return PredAbstraction(params, parse_formula(_string(form[2])))
    if head == "steps":
        steps = []
        for s in form[1:]:
            if _atom(s[0]) != "step":
                raise ValueError("expected (step name direction (path))")
            name = _atom(s[1])
            direction = _atom(s[2])
            spath = tuple(int(_atom(i)) for i in s[3])
            steps.append((name, direction, spath))
        return tuple(steps)
    raise ValueError(f"unknown witness form {head!r}")
