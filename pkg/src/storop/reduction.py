"""Reduction API: head reduction, normal-order normalization, equivalence.

The step kernel is selected at import: the compiled extension when available,
else the pure-Python fallback. Set STOROP_BACKEND=pure|compiled|auto to
force a lane (``compiled`` raises if the extension is missing).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from storop.terms import Abs, App, Term, subterms

__all__ = [
    "DEFAULT_FUEL",
    "NORMAL_FORM",
    "HEAD_NORMAL_FORM",
    "FUEL_EXHAUSTED",
    "ReductionOutcome",
    "backend_name",
    "head_step",
    "normal_step",
    "head_reduce",
    "normalize",
    "is_head_normal",
    "is_normal",
    "beta_equiv",
    "is_solvable",
]

_choice = os.environ.get("STOROP_BACKEND", "auto")
if _choice not in ("auto", "pure", "compiled"):
    raise RuntimeError(f"STOROP_BACKEND must be auto, pure or compiled, not {_choice!r}")

if _choice == "pure":
    from storop import _reduce_py as _kernel
else:
    try:
        from storop import _reduce_cy as _kernel  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        from storop import _reduce_py as _kernel  # type: ignore[no-redef]


DEFAULT_FUEL = 100_000

NORMAL_FORM = "normal-form-reached"
HEAD_NORMAL_FORM = "head-normal-form-reached"
FUEL_EXHAUSTED = "fuel-exhausted"


def backend_name() -> str:
    """'compiled' or 'pure', whichever kernel is active."""
    return _kernel.KERNEL


@dataclass(frozen=True)
class ReductionOutcome:
    result: Term
    steps: int
    status: str

    @property
    def completed(self) -> bool:
        return self.status != FUEL_EXHAUSTED


def _check_fuel(fuel: int) -> None:
    if not isinstance(fuel, int) or isinstance(fuel, bool) or fuel <= 0:
        raise ValueError("fuel must be a positive integer")


def head_step(t: Term) -> Optional[Term]:
    """One head reduction step, or None when t is already in head normal form."""
    return _kernel.head_step_core(t)


def normal_step(t: Term) -> Optional[Term]:
    """One normal-order (leftmost-outermost) step, or None when t is normal.

    Iterating this matches normalize step for step, including variable names.
    """
    nxt = _kernel.head_step_core(t)
    if nxt is not None:
        return nxt
    if type(t) is Abs:
        body = normal_step(t.body)
        return None if body is None else Abs(t.binder, body)
    if type(t) is App:
        fn = normal_step(t.fn)
        if fn is not None:
            return App(fn, t.arg)
        arg = normal_step(t.arg)
        return None if arg is None else App(t.fn, arg)
    return None


def head_reduce(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Head-reduce until head normal form or until fuel steps were taken.

    steps is the exact number of head reductions performed.
    """
    _check_fuel(fuel)
    result, steps, done = _kernel.head_reduce_core(t, fuel)
    return ReductionOutcome(result, steps, HEAD_NORMAL_FORM if done else FUEL_EXHAUSTED)


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> ReductionOutcome:
    """Normal-order normalization; on exhaustion result is the partial reduct."""
    _check_fuel(fuel)
    result, steps, done = _kernel.normalize_core(t, fuel)
    return ReductionOutcome(result, steps, NORMAL_FORM if done else FUEL_EXHAUSTED)


def is_head_normal(t: Term) -> bool:
    return _kernel.head_step_core(t) is None


def is_normal(t: Term) -> bool:
    """True when t contains no beta redex at all."""
    return not any(type(s) is App and type(s.fn) is Abs for s in subterms(t))


def beta_equiv(t: Term, u: Term, fuel: int = DEFAULT_FUEL) -> Optional[bool]:
    """Semi-decision of beta-equivalence by comparing normal forms.

    True/False when both sides normalize within fuel; None when either side
    runs out (the question is then open, not settled).
    """
    _check_fuel(fuel)
    a = normalize(t, fuel)
    b = normalize(u, fuel)
    if a.completed and b.completed:
        return a.result == b.result
    return None


def is_solvable(t: Term, fuel: int = DEFAULT_FUEL) -> Optional[bool]:
    """True when head reduction terminates within fuel; None otherwise.

    Never returns False: unsolvability is not witnessed by running out of
    fuel.
    """
    _check_fuel(fuel)
    if head_reduce(t, fuel).completed:
        return True
    return None
