"""The compiled and pure kernels must agree term-for-term and step-for-step."""

import random

import pytest

from storop import _reduce_py
from storop.terms import App, Var, church, print_term

_reduce_cy = pytest.importorskip("storop._reduce_cy")

from genterms import random_closed_term, random_term


KERNELS = (_reduce_py, _reduce_cy)


def test_kernel_tags():
    assert _reduce_py.KERNEL == "pure"
    assert _reduce_cy.KERNEL == "compiled"


def test_subst1_parity():
    rng = random.Random(101)
    for _ in range(300):
        t = random_term(rng, depth=5)
        value = random_term(rng, depth=3)
        name = rng.choice(sorted(t.fv) or ["a"])
        a = _reduce_py.subst1(t, name, value)
        b = _reduce_cy.subst1(t, name, value)
        assert print_term(a) == print_term(b)


def test_head_reduce_parity():
    rng = random.Random(202)
    for _ in range(400):
        t = random_term(rng, depth=rng.randint(2, 7))
        ra = _reduce_py.head_reduce_core(t, 150)
        rb = _reduce_cy.head_reduce_core(t, 150)
        assert ra[1] == rb[1]
        assert ra[2] == rb[2]
        assert print_term(ra[0]) == print_term(rb[0])


def test_normalize_parity():
    rng = random.Random(303)
    for _ in range(400):
        t = random_term(rng, depth=rng.randint(2, 6))
        ra = _reduce_py.normalize_core(t, 200)
        rb = _reduce_cy.normalize_core(t, 200)
        assert ra[1] == rb[1]
        assert ra[2] == rb[2]
        assert print_term(ra[0]) == print_term(rb[0])


def test_storage_run_parity():
    from storop.builtins import BUILTINS

    T = BUILTINS["T"]
    for n in range(6):
        t = App(App(T, church(n)), Var("f"))
        ra = _reduce_py.head_reduce_core(t, 100_000)
        rb = _reduce_cy.head_reduce_core(t, 100_000)
        assert ra[1] == rb[1]
        assert print_term(ra[0]) == print_term(rb[0])


def test_closed_term_normalize_parity():
    rng = random.Random(404)
    for _ in range(200):
        t = random_closed_term(rng, depth=6)
        ra = _reduce_py.normalize_core(t, 300)
        rb = _reduce_cy.normalize_core(t, 300)
        assert ra[1] == rb[1] and ra[2] == rb[2]
        assert print_term(ra[0]) == print_term(rb[0])
