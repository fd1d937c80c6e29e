"""Built-in test problems with manufactured right-hand sides."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .operators import ZERO_KERNEL, KernelModel


@dataclass(frozen=True, eq=False)
class Problem:
    """Second-kind equation ``x - K(x) = f`` on [a, b] with known solution."""

    name: str
    kernel: KernelModel
    rhs: Callable
    exact: Callable
    a: float = 0.0
    b: float = 1.0


def _reciprocal_kernel():
    # kappa(s, t, u) = 1 / (s + t + u); pole at s + t + u = 0
    return KernelModel(
        kappa=lambda s, t, u: 1.0 / (s + t + u),
        d_kappa_du=lambda s, t, u: -1.0 / (s + t + u) ** 2,
        d2_kappa_du2=lambda s, t, u: 2.0 / (s + t + u) ** 3,
        name="reciprocal",
    )


RECIPROCAL_KERNEL = _reciprocal_kernel()


def _rational_integral(s, c):
    """``int_0^1 (t + c) / (t^2 + B t + C) dt`` with ``B = s + c``, ``C = c s + 1``.

    The quadratic has positive coefficients, so any real roots are negative
    and the integrand is smooth on [0, 1].
    """
    B = s + c
    C = c * s + 1.0
    gap = C - 0.25 * B * B
    log_part = 0.5 * np.log((1.0 + B + C) / C)
    lin = 0.5 * (c - s)  # coefficient left after splitting off (2t + B)/2
    out = np.empty(np.broadcast(s, c).shape)
    out[...] = log_part
    pos = gap > 0
    neg = ~pos
    sq = np.sqrt(np.abs(gap))
    with np.errstate(divide="ignore", invalid="ignore"):
        # arctan form: (1/sq) [atan((1 + B/2)/sq) - atan((B/2)/sq)]
        at = (np.arctan((1.0 + 0.5 * B) / sq) - np.arctan(0.5 * B / sq)) / sq
        # real roots: (1/(2 sq)) ln[((t + B/2 - sq)/(t + B/2 + sq))] between 0 and 1
        lg = (np.log((1.0 + 0.5 * B - sq) / (1.0 + 0.5 * B + sq))
              - np.log((0.5 * B - sq) / (0.5 * B + sq))) / (2.0 * sq)
        # double root: int dt/(t + B/2)^2
        dbl = 1.0 / (0.5 * B) - 1.0 / (1.0 + 0.5 * B)
    quad = np.where(pos, at, np.where(gap < 0, lg, dbl))
    out = out + lin * quad
    return out


def builtin_example_f(c: float, s):
    """Right-hand side making ``1/(t + c)`` solve the reciprocal-kernel equation
    on [0, 1]."""
    if c <= 0:
        raise ValueError(f"c must be positive, got {c!r}")
    s_arr = np.asarray(s, dtype=float)
    out = 1.0 / (s_arr + c) - _rational_integral(s_arr, c)
    return float(out) if np.ndim(s) == 0 else out


def reciprocal_problem(c: float = 1.0) -> Problem:
    c = float(c)
    if c <= 0:
        raise ValueError(f"c must be positive, got {c!r}")
    return Problem(
        name=f"reciprocal(c={c:g})",
        kernel=RECIPROCAL_KERNEL,
        rhs=lambda s: builtin_example_f(c, s),
        exact=lambda s: 1.0 / (np.asarray(s, dtype=float) + c),
    )


def linear_problem() -> Problem:
    """Fredholm problem ``k(s, t) = 1/(s + t + 2)`` with solution ``1/(t + 1)``.

    ``int_0^1 dt / ((t + 1)(s + t + 2)) = [ln 2 - ln((s + 3)/(s + 2))] / (s + 1)``.
    """
    kernel = KernelModel.from_linear(lambda s, t: 1.0 / (s + t + 2.0), name="linear")

    def rhs(s):
        s = np.asarray(s, dtype=float)
        return 1.0 / (s + 1.0) - (np.log(2.0) - np.log((s + 3.0) / (s + 2.0))) / (s + 1.0)

    return Problem("linear", kernel, rhs, lambda s: 1.0 / (np.asarray(s, dtype=float) + 1.0))


def zero_problem() -> Problem:
    def f(s):
        return np.exp(np.asarray(s, dtype=float))

    return Problem("zero", ZERO_KERNEL, f, f)


PROBLEMS = {
    "reciprocal": reciprocal_problem,
    "linear": lambda c=None: linear_problem(),
    "zero": lambda c=None: zero_problem(),
}


def get_problem(name: str, c: float = 1.0) -> Problem:
    try:
        factory = PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {sorted(PROBLEMS)}") from None
    return factory(c)
