"""Pure-Python reduction kernel.

storop._reduce_cy is a line-for-line transliteration of this module; the two
must produce identical terms (same bound-variable names) and identical step
counts on every input. storop.reduction picks one at import time.

A head step contracts the head redex of \\x1..xk ((\\y.M) N) a1..am and
counts as one step. head_reduce_core and normalize_core return
(term, steps, finished); on fuel exhaustion the term is the partial reduct.
"""

from storop.terms import Abs, App, Var

KERNEL = "pure"


def subst1(t, name, value):
    """Capture-avoiding substitution of a single free variable."""
    if name not in t.fv:
        return t
    tt = type(t)
    if tt is Var:
        return value
    if tt is App:
        return App(subst1(t.fn, name, value), subst1(t.arg, name, value))
    binder = t.binder
    if binder in value.fv:
        avoid = value.fv | t.body.fv
        nb = binder
        while nb in avoid:
            nb = nb + "'"
        body = subst1(t.body, binder, Var(nb))
        return Abs(nb, subst1(body, name, value))
    return Abs(binder, subst1(t.body, name, value))


def head_step_core(t):
    """Contract the head redex, or return None when t is in head normal form."""
    binders = []
    while type(t) is Abs:
        binders.append(t.binder)
        t = t.body
    rev_args = []
    while type(t) is App:
        rev_args.append(t.arg)
        t = t.fn
    if type(t) is not Abs or not rev_args:
        return None
    core = subst1(t.body, t.binder, rev_args.pop())
    for a in reversed(rev_args):
        core = App(core, a)
    for b in reversed(binders):
        core = Abs(b, core)
    return core


def head_reduce_core(t, fuel):
    steps = 0
    while steps < fuel:
        nxt = head_step_core(t)
        if nxt is None:
            return t, steps, True
        t = nxt
        steps += 1
    return t, steps, head_step_core(t) is None


class _Budget:
    __slots__ = ("left", "dead")

    def __init__(self, left):
        self.left = left
        self.dead = False


def _norm(t, budget):
    if budget.dead:
        return t
    while True:
        nxt = head_step_core(t)
        if nxt is None:
            break
        if budget.left == 0:
            budget.dead = True
            return t
        t = nxt
        budget.left -= 1
    binders = []
    while type(t) is Abs:
        binders.append(t.binder)
        t = t.body
    rev_args = []
    while type(t) is App:
        rev_args.append(t.arg)
        t = t.fn
    core = t
    for a in reversed(rev_args):
        core = App(core, a if budget.dead else _norm(a, budget))
    for b in reversed(binders):
        core = Abs(b, core)
    return core


def normalize_core(t, fuel):
    """Normal-order (leftmost-outermost) normalization."""
    budget = _Budget(fuel)
    out = _norm(t, budget)
    return out, fuel - budget.left, not budget.dead
