"""Explicit horizons beyond which a closed form's behaviour is certified.

Logarithms are replaced by bit lengths (``ln n < bins(n)``) so every bound is
an exact integer computed in polynomial time.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .closedform import ClosedForm, poly_degree
from .linalg import ZERO, format_rational


def bins(n: int) -> int:
    """Number of binary digits of a positive integer."""
    if n < 1:
        raise ValueError("bins is defined for positive integers")
    return n.bit_length()


def ceil(x) -> int:
    return math.ceil(Fraction(x))


def log_threshold(D) -> int:
    """An integer ``T`` with ``D ln x < x`` for every ``x > T``; needs ``ln D > 2``."""
    d = ceil(D)
    return 3 * d * bins(d)


class Regime(enum.Enum):
    CONSTANT = "constant"
    NOT_LIMIT = "not-limit"  # cutpoint differs from the limit c
    AT_LIMIT = "at-limit"  # cutpoint equals c


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class HorizonBound:
    """For every ``k > k_star``:

    * NOT_LIMIT: ``|value(k) - c| < epsilon``
    * AT_LIMIT: ``sign(value(k) - c) == sign``
    * CONSTANT: ``value(k) == c``
    """

    k_star: int
    regime: Regime
    sign: int = 0
    epsilon: Fraction | None = None
    audit: dict = field(default_factory=dict)

    def certificate(self) -> str:
        lines = [f"regime {self.regime.value}", f"k_star {self.k_star}"]
        if self.epsilon is not None:
            lines.append(f"epsilon {format_rational(self.epsilon)}")
        if self.regime is Regime.AT_LIMIT:
            lines.append(f"sign {'+' if self.sign > 0 else '-'}")
        for key, val in self.audit.items():
            if isinstance(val, Fraction):
                val = format_rational(val)
            lines.append(f"{key} {val}")
        return "\n".join(lines)


def _abs_sum(polys) -> Fraction:
    return sum((abs(x) for p in polys for x in p), ZERO)


def bound_not_limit(cf: ClosedForm, lam) -> HorizonBound:
    lam = Fraction(lam)
    if lam == cf.c:
        raise BoundError("cutpoint equals the limit; use bound_at_limit")
    eps = abs(cf.c - lam) / 2
    if not cf.terms:
        return HorizonBound(0, Regime.NOT_LIMIT, epsilon=eps, audit={"m": 0})
    lam1 = cf.terms[0][0]
    d_sum = _abs_sum(p for _, p in cf.terms)
    s = cf.max_degree
    D = max(Fraction(2 * s) / (1 - lam1), Fraction(9))
    k1 = log_threshold(D)
    audit = {"d_sum": d_sum, "lambda_1": lam1, "s": s, "D": D, "bins(ceil D)": bins(ceil(D)), "k1": k1}
    if eps / d_sum >= 1:
        k0 = k1
    else:
        b = bins(ceil(d_sum / eps))
        audit["bins(ceil d/eps)"] = b
        k0 = max(ceil(Fraction(2 * b) / (1 - lam1)), k1)
    audit["k0"] = k0
    return HorizonBound(k0, Regime.NOT_LIMIT, epsilon=eps, audit=audit)


def bound_at_limit(cf: ClosedForm) -> HorizonBound:
    if not cf.terms:
        raise BoundError("closed form is constant; no deviation to bound")
    lam1, p1 = cf.terms[0]
    t = poly_degree(p1)
    lead = p1[t]
    sign = 1 if lead > 0 else -1
    # the negative case is the positive one applied to the negated deviation
    a = abs(lead)
    lower = sum((abs(x) for x in p1[:t]), ZERO)
    k0 = max(1, ceil(2 * lower / a))
    audit = {"lambda_1": lam1, "t": t, "a_1t": lead, "k0": k0, "m": len(cf.terms)}
    if len(cf.terms) == 1:
        k1 = k0
    else:
        rest = [p for _, p in cf.terms[1:]]
        d = _abs_sum(rest)
        s = max(poly_degree(p) for p in rest)
        gap = lam1 - cf.terms[1][0]
        R = 2 * d / a
        audit.update({"d": d, "s": s, "lambda_2": cf.terms[1][0], "2d/a": R})
        if s <= t:
            k1 = ceil(Fraction(bins(ceil(R))) / gap) if R > 1 else 1
        elif R >= 1:
            E = max(Fraction(9), R * (s - t) / gap)
            audit["E"] = E
            k1 = log_threshold(E)
        else:
            E = max(Fraction(9), Fraction(s - t) / gap)
            audit["E"] = E
            k1 = 3 * ceil(E / R) * bins(ceil(E))
        audit["k1"] = k1
    k_star = max(k0, k1)
    return HorizonBound(k_star, Regime.AT_LIMIT, sign=sign, audit=audit)


def horizon(cf: ClosedForm, lam) -> HorizonBound:
    """The regime's bound, lifted past the nilpotent transient so the guarantee
    holds for the true values and not only for the closed form."""
    lam = Fraction(lam)
    if lam != cf.c:
        bound = bound_not_limit(cf, lam)
    elif not cf.terms:
        bound = HorizonBound(0, Regime.CONSTANT)
    else:
        bound = bound_at_limit(cf)
    if cf.transient - 1 > bound.k_star:
        audit = dict(bound.audit, transient=cf.transient, formula_k_star=bound.k_star)
        bound = replace(bound, k_star=cf.transient - 1, audit=audit)
    return bound
