"""Untyped lambda terms: syntax, parsing, printing, substitution.

Application is written in head-group notation: ``(u) v w`` applies u to v,
then to w. Juxtaposition also works inside parentheses, so ``(u v) w`` means
the same thing. An argument that itself starts with ``(`` or a lambda extends
to the end of the enclosing group, so ``(h) a (g) b`` reads as (h) a ((g) b).
Abstraction is ``\\x y BODY`` (or with a literal lambda); a trailing run of
bare variables uses its last variable as the body, so ``\\x f x`` is the
numeral zero.

Term equality is alpha-equivalence; hashing agrees with it.
"""

from __future__ import annotations

import sys
from typing import Iterator, Mapping, Optional

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20_000))

__all__ = [
    "Term",
    "Var",
    "Abs",
    "App",
    "ParseError",
    "parse_term",
    "print_term",
    "substitute",
    "fresh_name",
    "church",
    "numeral_of",
    "match_holes",
    "term_size",
    "subterms",
]


class Term:
    """Base class; instances are Var, Abs or App. Treat as immutable."""

    __slots__ = ()

    fv: frozenset[str]

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Term):
            return NotImplemented
        return _alpha_eq(self, other, {}, {}, 0)

    def __ne__(self, other: object) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self) -> int:
        h = self._h  # type: ignore[attr-defined]
        if h is None:
            h = _alpha_hash(self, {}, 0)
            self._h = h  # type: ignore[attr-defined]
        return h

    def __repr__(self) -> str:
        return f"<{print_term(self)}>"


class Var(Term):
    __slots__ = ("name", "fv", "_h")

    def __init__(self, name: str):
        self.name = name
        self.fv = frozenset((name,))
        self._h = None


class Abs(Term):
    __slots__ = ("binder", "body", "fv", "_h")

    def __init__(self, binder: str, body: Term):
        self.binder = binder
        self.body = body
        self.fv = body.fv - {binder}
        self._h = None


class App(Term):
    __slots__ = ("fn", "arg", "fv", "_h")

    def __init__(self, fn: Term, arg: Term):
        self.fn = fn
        self.arg = arg
        self.fv = fn.fv | arg.fv
        self._h = None


def _alpha_eq(t: Term, u: Term, envt: dict, envu: dict, depth: int) -> bool:
    if type(t) is not type(u):
        return False
    if type(t) is Var:
        bt = envt.get(t.name)
        bu = envu.get(u.name)
        if bt is None and bu is None:
            return t.name == u.name
        return bt == bu
    if type(t) is App:
        return _alpha_eq(t.fn, u.fn, envt, envu, depth) and _alpha_eq(
            t.arg, u.arg, envt, envu, depth
        )
    # Abs
    oldt = envt.get(t.binder)
    oldu = envu.get(u.binder)
    envt[t.binder] = depth
    envu[u.binder] = depth
    try:
        return _alpha_eq(t.body, u.body, envt, envu, depth + 1)
    finally:
        if oldt is None:
            del envt[t.binder]
        else:
            envt[t.binder] = oldt
        if oldu is None:
            del envu[u.binder]
        else:
            envu[u.binder] = oldu


def _alpha_hash(t: Term, env: dict, depth: int) -> int:
    if type(t) is Var:
        b = env.get(t.name)
        if b is None:
            return hash(("fv", t.name))
        return hash(("bv", depth - b))
    if type(t) is App:
        return hash(("ap", _alpha_hash(t.fn, env, depth), _alpha_hash(t.arg, env, depth)))
    old = env.get(t.binder)
    env[t.binder] = depth
    try:
        return hash(("lm", _alpha_hash(t.body, env, depth + 1)))
    finally:
        if old is None:
            del env[t.binder]
        else:
            env[t.binder] = old


def subterms(t: Term) -> Iterator[Term]:
    """Yield t and all its subterms, preorder."""
    stack = [t]
    while stack:
        cur = stack.pop()
        yield cur
        if type(cur) is App:
            stack.append(cur.arg)
            stack.append(cur.fn)
        elif type(cur) is Abs:
            stack.append(cur.body)


def term_size(t: Term) -> int:
    """Number of syntax nodes."""
    return sum(1 for _ in subterms(t))


def fresh_name(stem: str, avoid) -> str:
    """Return stem with primes appended until it avoids the given names."""
    name = stem
    while name in avoid:
        name += "'"
    return name


# ---------------------------------------------------------------------------
# substitution


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    """Simultaneous capture-avoiding substitution of free variables.

    Binders are renamed (with primes) only when they would capture a free
    variable of a substituted term.
    """
    if not mapping:
        return t
    return _subst(t, dict(mapping))


def _subst(t: Term, m: dict[str, Term]) -> Term:
    if not (t.fv & m.keys()):
        return t
    if type(t) is Var:
        return m.get(t.name, t)
    if type(t) is App:
        return App(_subst(t.fn, m), _subst(t.arg, m))
    # Abs: restrict to the keys that actually occur free in the body
    body = t.body
    live = {k: v for k, v in m.items() if k != t.binder and k in body.fv}
    if not live:
        return t
    captured = set()
    for v in live.values():
        captured |= v.fv
    if t.binder in captured:
        new_binder = fresh_name(t.binder, captured | body.fv | set(live))
        live[t.binder] = Var(new_binder)
        return Abs(new_binder, _subst(body, live))
    return Abs(t.binder, _subst(body, live))


# ---------------------------------------------------------------------------
# numerals


def church(n: int) -> Term:
    """The Church-style numeral \\x f (f)^n x."""
    if n < 0:
        raise ValueError("numeral index must be >= 0")
    body: Term = Var("x")
    f = Var("f")
    for _ in range(n):
        body = App(f, body)
    return Abs("x", Abs("f", body))


def numeral_of(t: Term) -> Optional[int]:
    """Return n when t is alpha-equal to church(n), else None.

    Purely structural: performs no reduction.
    """
    if type(t) is not Abs or type(t.body) is not Abs:
        return None
    x, f = t.binder, t.body.binder
    if x == f:
        return None
    count = 0
    cur = t.body.body
    while type(cur) is App:
        fn = cur.fn
        if type(fn) is not Var or fn.name != f:
            return None
        count += 1
        cur = cur.arg
    if type(cur) is Var and cur.name == x:
        return count
    return None


# ---------------------------------------------------------------------------
# matching


def match_holes(
    pattern: Term, term: Term, holes: frozenset[str] | set[str]
) -> Optional[dict[str, Term]]:
    """First-order match of term against pattern.

    Free occurrences of hole names in the pattern may stand for any term
    whose free variables are not captured by binders of the surrounding
    term context. Returns the assignment, or None when the shapes differ
    or one hole would need two non-alpha-equal values.
    """
    sigma: dict[str, Term] = {}
    if not _match(pattern, term, holes, {}, {}, 0, sigma):
        return None
    if substitute(pattern, sigma) != term:
        return None
    return sigma


def _match(p, t, holes, penv, tenv, depth, sigma) -> bool:
    if type(p) is Var:
        pb = penv.get(p.name)
        if pb is not None:
            return type(t) is Var and tenv.get(t.name) == pb
        if p.name in holes:
            if t.fv & tenv.keys():
                return False  # value would escape a binder entered during the match
            prev = sigma.get(p.name)
            if prev is None:
                sigma[p.name] = t
                return True
            return prev == t
        return type(t) is Var and t.name == p.name and t.name not in tenv
    if type(p) is App:
        return (
            type(t) is App
            and _match(p.fn, t.fn, holes, penv, tenv, depth, sigma)
            and _match(p.arg, t.arg, holes, penv, tenv, depth, sigma)
        )
    if type(t) is not Abs:
        return False
    oldp = penv.get(p.binder)
    oldt = tenv.get(t.binder)
    penv[p.binder] = depth
    tenv[t.binder] = depth
    try:
        return _match(p.body, t.body, holes, penv, tenv, depth + 1, sigma)
    finally:
        if oldp is None:
            del penv[p.binder]
        else:
            penv[p.binder] = oldp
        if oldt is None:
            del tenv[t.binder]
        else:
            tenv[t.binder] = oldt


# ---------------------------------------------------------------------------
# concrete syntax


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at offset {pos})")
        self.pos = pos


_NAME_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_NAME_CONT = _NAME_START | set("0123456789'")


def _tokenize(src: str):
    toks = []
    i, n = 0, len(src)
    while i < n:
        c = src[i]
        if c in " \t\r\n":
            i += 1
            continue
        if c in "\\λ":
            toks.append(("lam", "", i))
            i += 1
        elif c == "(":
            toks.append(("(", "", i))
            i += 1
        elif c == ")":
            toks.append((")", "", i))
            i += 1
        elif c == "@":
            j = i + 1
            if j >= n or src[j] not in _NAME_START:
                raise ParseError("expected a name after '@'", i)
            k = j
            while k < n and src[k] in _NAME_CONT:
                k += 1
            name = src[j:k]
            payload = None
            if k < n and src[k] == ":":
                k += 1
                d = k
                while k < n and src[k].isdigit():
                    k += 1
                if k == d:
                    raise ParseError("expected digits after ':'", k)
                payload = int(src[d:k])
            toks.append(("at", (name, payload), i))
            i = k
        elif c in _NAME_START:
            j = i
            while j < n and src[j] in _NAME_CONT:
                j += 1
            toks.append(("name", src[i:j], i))
            i = j
        else:
            raise ParseError(f"unexpected character {c!r}", i)
    toks.append(("end", "", n))
    return toks


def parse_term(src: str, builtins: Mapping[str, Term] | None = None) -> Term:
    """Parse the concrete syntax described in the module docstring.

    ``@name`` splices a term from the builtins mapping; ``@church:N`` is the
    numeral N and needs no mapping.
    """
    toks = _tokenize(src)
    pos = 0

    def peek():
        return toks[pos]

    def take():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        return tok

    def resolve(name: str, payload, at: int) -> Term:
        if payload is not None:
            if name != "church":
                raise ParseError(f"'@{name}:' takes no numeric suffix", at)
            return church(payload)
        if builtins is not None and name in builtins:
            return builtins[name]
        raise ParseError(f"unknown builtin reference '@{name}'", at)

    def p_term() -> Term:
        kind, val, at = peek()
        if kind == "lam":
            take()
            names = []
            while peek()[0] == "name":
                names.append(take()[1])
            nxt = peek()[0]
            if nxt in ("(", "lam", "at"):
                if not names:
                    raise ParseError("lambda needs at least one binder", at)
                body = p_term()
            else:
                if len(names) < 2:
                    raise ParseError("lambda needs a body", at)
                body = Var(names.pop())
            for b in reversed(names):
                body = Abs(b, body)
            return body
        if kind == "(":
            take()
            cur = p_term()
            while peek()[0] != ")":
                kind, val, at = peek()
                if kind == "name":
                    take()
                    cur = App(cur, Var(val))
                elif kind == "at":
                    take()
                    cur = App(cur, resolve(val[0], val[1], at))
                elif kind in ("(", "lam"):
                    cur = App(cur, p_term())
                else:
                    raise ParseError("expected ')'", at)
            take()
            while True:
                kind, val, at = peek()
                if kind == "name":
                    take()
                    cur = App(cur, Var(val))
                elif kind == "at":
                    take()
                    cur = App(cur, resolve(val[0], val[1], at))
                elif kind in ("(", "lam"):
                    cur = App(cur, p_term())
                    break
                else:
                    break
            return cur
        if kind == "name":
            take()
            return Var(val)
        if kind == "at":
            take()
            return resolve(val[0], val[1], at)
        raise ParseError("expected a term", at)

    t = p_term()
    kind, _, at = peek()
    if kind != "end":
        raise ParseError("unexpected trailing input", at)
    return t


def print_term(t: Term) -> str:
    """Render t; parse_term(print_term(t)) recovers t exactly."""
    if type(t) is Var:
        return t.name
    if type(t) is Abs:
        parts = []
        cur: Term = t
        while type(cur) is Abs:
            parts.append(cur.binder)
            cur = cur.body
        if type(cur) is Var:
            parts.append(cur.name)
            return "\\" + " ".join(parts)
        return "\\" + " ".join(parts) + " " + print_term(cur)
    # App: flatten the spine
    rev_args = []
    cur = t
    while type(cur) is App:
        rev_args.append(cur.arg)
        cur = cur.fn
    args = rev_args[::-1]
    s = "(" + print_term(cur) + ")"
    last = len(args) - 1
    for i, a in enumerate(args):
        if type(a) is Var:
            s += " " + a.name
        elif i == last:
            s += " " + print_term(a)
        else:
            s = "(" + s + " " + print_term(a) + ")"
    return s
