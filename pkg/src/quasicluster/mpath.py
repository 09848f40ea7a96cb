"""Standard step sequences along a curve and their 2x2 matrices.

A curve is traversed as a chain of elementary moves near the marked points:

  type 1   pivot between two arcs of a triangle       [[1, 0], [s/(t t'), 1]]
  type 2   cross an arc                               diag pair carrying y
  type 3   run parallel to an arc                     [[0, x], [-1/x, 0]]
  type 3'  run parallel to an arc through a crosscap  [[0, x], [1/x, 0]]

The type 2 matrix places the coefficient variable according to the arc's
shear sign; with sqrt enabled it becomes diag(y^{-1/2}, y^{1/2}) or its
swap, which has determinant one.  The expansion of the curve is the upper
right entry (open arcs) or the trace (closed curves) of the step product,
up to one global sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curvespec import CCW, CLOSE, CW, UNIT, y_name
from .errors import DomainError, ValidationError
from .laurent import mono, one, var, zero
from .mat2 import Mat2, identity, normalize_sign, trace, upper_right

T1 = "t1"
T2 = "t2"
T3 = "t3"
T3P = "t3p"

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Step:
    kind: str
    arcs: tuple  # (sigma, tau, tau2) for t1; (tau,) for t2/t3/t3p
    clockwise: bool = True  # t2 travel direction
    tau_right: bool = True  # t3/t3p viewing side
    positive: bool = True  # t1 sign
    flip: bool = False  # t2: flips the shear sign of this crossing
    sqrt: bool = False  # t2: use the determinant-one variant


def _x(label):
    return one() if label == UNIT else var(label)


def step_matrix(step, signs):
    """Matrix of one elementary move."""
    if step.kind == T1:
        sigma, tau, tau2 = step.arcs
        entry = _x(sigma) / (_x(tau) * _x(tau2))
        if not step.positive:
            entry = -entry
        return Mat2(one(), zero(), entry, one())
    if step.kind == T2:
        (tau,) = step.arcs
        s = signs.sign(tau)
        if step.flip:
            s = -s
        yv = y_name(tau)
        if step.sqrt:
            lo, hi = mono(1, {yv: -HALF}), mono(1, {yv: HALF})
        else:
            lo, hi = one(), var(yv)
        if (s > 0) == step.clockwise:
            return Mat2(lo, zero(), zero(), hi)
        return Mat2(hi, zero(), zero(), lo)
    if step.kind == T3:
        (tau,) = step.arcs
        x = _x(tau)
        if step.tau_right:
            return Mat2(zero(), x, -(one() / x), zero())
        return Mat2(zero(), -x, one() / x, zero())
    if step.kind == T3P:
        (tau,) = step.arcs
        x = _x(tau)
        if step.tau_right:
            return Mat2(zero(), x, one() / x, zero())
        return Mat2(zero(), -x, -(one() / x), zero())
    raise ValidationError(f"unknown step kind {step.kind!r}")


def _transition(u, v, third, ccw, flip_u, sqrt):
    """Steps crossing arc u and moving on to arc v through their shared triangle."""
    steps = [Step(T2, (u,), flip=flip_u, sqrt=sqrt)]
    if ccw:
        steps.append(Step(T1, (third, u, v)))
    else:
        steps.append(Step(T1, (v, third, u)))
        steps.append(Step(T3, (third,)))
        steps.append(Step(T1, (u, third, v)))
    return steps


def standard_mpath(spec, sqrt=False):
    """The standard step sequence for a curve."""
    cs = spec.crossings
    d = spec.d
    steps = []
    if spec.kind == "arc":
        a, b = spec.initial
        w, z = spec.final
        steps.append(Step(T3, (a,)))
        steps.append(Step(T1, (b, a, cs[0].arc)))
        for j in range(d - 1):
            steps.extend(
                _transition(
                    cs[j].arc,
                    cs[j + 1].arc,
                    cs[j].third,
                    cs[j].turn == CCW,
                    cs[j].flip,
                    sqrt,
                )
            )
        steps.append(Step(T2, (cs[-1].arc,), flip=cs[-1].flip, sqrt=sqrt))
        steps.append(Step(T1, (w, cs[-1].arc, z)))
        steps.append(Step(T3, (z,)))
        return steps
    for j in range(d - 1):
        steps.extend(
            _transition(
                cs[j].arc, cs[j + 1].arc, cs[j].third, cs[j].turn == CCW, cs[j].flip, sqrt
            )
        )
    steps.extend(
        _transition(
            cs[-1].arc, cs[0].arc, cs[-1].third, spec.close_ccw, cs[-1].flip, sqrt
        )
    )
    if spec.kind == "onesided":
        steps.append(Step(T3P, (cs[0].arc,)))
    return steps


def path_matrix(spec, signs, sqrt=False, steps=None):
    """Product of the step matrices, applied first step rightmost."""
    if steps is None:
        steps = standard_mpath(spec, sqrt=sqrt)
    m = identity()
    for s in steps:
        m = step_matrix(s, signs) @ m
    return m


def reduced_path_matrix(spec, signs, sqrt=False):
    """Step product of a one-sided curve without its crosscap passage."""
    if spec.kind != "onesided":
        raise DomainError("reduced path applies to one-sided curves only")
    steps = standard_mpath(spec, sqrt=sqrt)
    assert steps[-1].kind == T3P
    return path_matrix(spec, signs, sqrt=sqrt, steps=steps[:-1])


def chi(spec, signs, sqrt=False):
    """Laurent expansion of the curve from its standard step product."""
    m = path_matrix(spec, signs, sqrt=sqrt)
    value = upper_right(m) if spec.kind == "arc" else trace(m)
    return normalize_sign(value)
