"""Brownian normalization tags.

``VAR2T`` is the normalization with ``E B(t)^2 = 2t`` per coordinate (heat kernel
``exp(-|x|^2/4t)/(4 pi t)`` in the plane); ``VAR1T`` is standard Brownian motion
with ``E B(t)^2 = t``. A path of the ``VAR2T`` process observed at time ``s`` is a
``VAR1T`` path at time ``2s``, so a ``VAR2T`` time density ``f2`` and its ``VAR1T``
counterpart ``f1`` are related by ``f2(s) = 2 f1(2s)``.
"""

from enum import Enum


class Convention(str, Enum):
    VAR1T = "VAR1T"
    VAR2T = "VAR2T"
    NONE = "NONE"  # time-free objects (place distributions, special functions)


VAR1T = Convention.VAR1T
VAR2T = Convention.VAR2T


def tagged(formula, convention=Convention.NONE):
    """Attach a formula id and a normalization tag to an evaluator."""

    def deco(func):
        func.formula = formula
        func.convention = Convention(convention)
        return func

    return deco


def var1t_to_var2t_density(f1):
    """Turn a VAR1T time density ``f1(s, ...)`` into the VAR2T one."""

    def f2(s, *args, **kwargs):
        return 2.0 * f1(2.0 * s, *args, **kwargs)

    return f2
