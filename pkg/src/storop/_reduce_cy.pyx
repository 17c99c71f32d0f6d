# cython: language_level=3
"""Compiled twin of storop._reduce_py.

Same algorithm on the same Term objects; must match the pure kernel step for
step and name for name (tests/test_parity_backends.py enforces this).
"""

from storop.terms import Abs, App, Var

KERNEL = "compiled"

cdef object _VAR = Var
cdef object _ABS = Abs
cdef object _APP = App


cdef object _subst1(object t, str name, object value):
    cdef str binder, nb
    cdef object tt, body, avoid
    if name not in t.fv:
        return t
    tt = type(t)
    if tt is _VAR:
        return value
    if tt is _APP:
        return _APP(_subst1(t.fn, name, value), _subst1(t.arg, name, value))
    binder = t.binder
    if binder in value.fv:
        avoid = value.fv | t.body.fv
        nb = binder
        while nb in avoid:
            nb = nb + "'"
        body = _subst1(t.body, binder, _VAR(nb))
        return _ABS(nb, _subst1(body, name, value))
    return _ABS(binder, _subst1(t.body, name, value))


def subst1(t, name, value):
    """Capture-avoiding substitution of a single free variable."""
    return _subst1(t, name, value)


cdef object _head_step(object t):
    cdef list binders = []
    cdef list rev_args = []
    cdef object core
    while type(t) is _ABS:
        binders.append(t.binder)
        t = t.body
    while type(t) is _APP:
        rev_args.append(t.arg)
        t = t.fn
    if type(t) is not _ABS or not rev_args:
        return None
    core = _subst1(t.body, t.binder, rev_args.pop())
    for a in reversed(rev_args):
        core = _APP(core, a)
    for b in reversed(binders):
        core = _ABS(b, core)
    return core


def head_step_core(t):
    """Contract the head redex, or return None when t is in head normal form."""
    return _head_step(t)


def head_reduce_core(t, fuel):
    cdef long long steps = 0
    cdef long long cap = fuel
    cdef object nxt
    while steps < cap:
        nxt = _head_step(t)
        if nxt is None:
            return t, steps, True
        t = nxt
        steps += 1
    return t, steps, _head_step(t) is None


cdef class _Budget:
    cdef long long left
    cdef bint dead

    def __cinit__(self, long long left):
        self.left = left
        self.dead = False


cdef object _norm(object t, _Budget budget):
    cdef list binders = []
    cdef list rev_args = []
    cdef object core, nxt
    if budget.dead:
        return t
    while True:
        nxt = _head_step(t)
        if nxt is None:
            break
        if budget.left == 0:
            budget.dead = True
            return t
        t = nxt
        budget.left -= 1
    while type(t) is _ABS:
        binders.append(t.binder)
        t = t.body
    while type(t) is _APP:
        rev_args.append(t.arg)
        t = t.fn
    core = t
    for a in reversed(rev_args):
        core = _APP(core, a if budget.dead else _norm(a, budget))
    for b in reversed(binders):
        core = _ABS(b, core)
    return core


def normalize_core(t, fuel):
    """Normal-order (leftmost-outermost) normalization."""
    cdef _Budget budget = _Budget(fuel)
    out = _norm(t, budget)
    return out, fuel - budget.left, not budget.dead
