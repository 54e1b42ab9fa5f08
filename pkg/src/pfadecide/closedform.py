"""Exact closed form ``u^T U^k v = c + sum_i p_i(k) * lam_i^k`` for upper-triangular ``U``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .linalg import ONE, ZERO, JordanDecomposition, RMatrix, jordan_decompose, vec_mat, mat_vec

Poly = tuple[Fraction, ...]  # coefficients, constant term first


def poly_trim(p: Sequence[Fraction]) -> Poly:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def poly_add(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    n = max(len(p), len(q))
    return poly_trim((p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO) for i in range(n))


def poly_scale(p: Sequence[Fraction], k) -> Poly:
    return poly_trim(x * k for x in p)


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return poly_trim(out)


def poly_eval(p: Sequence[Fraction], k) -> Fraction:
    acc = ZERO
    for coef in reversed(p):
        acc = acc * k + coef
    return acc


def poly_degree(p: Sequence[Fraction]) -> int:
    """Degree of a trimmed polynomial; -1 for the zero polynomial."""
    return len(p) - 1


def binomial_poly(p: int) -> Poly:
    """``C(k, p)`` as a polynomial in ``k``."""
    out: Poly = (ONE,)
    for i in range(p):
        out = poly_mul(out, (Fraction(-i, i + 1), Fraction(1, i + 1)))
    return out


def format_poly(p: Sequence[Fraction], var: str = "k") -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        coef = p[i]
        if not coef:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(coef) == 1:
            txt = mono
        else:
            txt = str(abs(coef)) + ("*" + mono if mono else "")
        sign = "-" if coef < 0 else "+"
        parts.append((sign, txt))
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, txt in parts[1:]:
        out += f" {sign} {txt}"
    return out


@dataclass(frozen=True)
class ClosedForm:
    """``evaluate(k)`` is exact for every ``k >= transient``.

    ``terms`` pairs each eigenvalue ``0 < lam < 1`` (strictly descending) with
    a nonzero polynomial. Nilpotent parts vanish after ``transient`` steps and
    are not represented.
    """

    c: Fraction
    terms: tuple[tuple[Fraction, Poly], ...]
    transient: int = 0
    max_block: int = 1

    def evaluate(self, k: int) -> Fraction:
        if k < self.transient:
            raise ValueError(f"closed form is only exact for k >= {self.transient}")
        return self.c + sum((poly_eval(p, k) * lam**k for lam, p in self.terms), ZERO)

    def deviation(self, k: int) -> Fraction:
        return self.evaluate(k) - self.c

    @property
    def is_constant(self) -> bool:
        return not self.terms

    @property
    def max_degree(self) -> int:
        return max((poly_degree(p) for _, p in self.terms), default=0)

    def __str__(self) -> str:
        body = [str(self.c)]
        for lam, p in self.terms:
            body.append(f"({format_poly(p)})*({lam})^k")
        return " + ".join(body) + (f"   [k >= {self.transient}]" if self.transient else "")


def closed_form(
    u: Sequence[Fraction], U: RMatrix, v: Sequence[Fraction], jordan: JordanDecomposition | None = None
) -> ClosedForm:
    """Closed form of ``k -> u^T U^k v``.

    With ``U = S_inv J S``, ``alpha = u^T S_inv`` and ``beta = S v``, a Jordan
    block of size ``m`` at offset ``o`` contributes
    ``lam^k * sum_p C(k,p) lam^-p * sum_i alpha[o+i] beta[o+i+p]``.
    """
    jd = jordan or jordan_decompose(U)
    alpha = vec_mat(u, jd.S_inv) if jd.blocks else ()
    beta = mat_vec(jd.S, v) if jd.blocks else ()
    c = ZERO
    by_lam: dict[Fraction, Poly] = {}
    transient = 0
    max_block = 0
    for (lam, size), off in zip(jd.blocks, jd.offsets()):
        max_block = max(max_block, size)
        if lam == 0:
            transient = max(transient, size)
            continue
        if lam > 1 or lam < 0:
            raise ValueError(f"eigenvalue {lam} outside [0, 1]; not a stochastic matrix")
        if lam == 1:
            if size != 1:
                raise ValueError("eigenvalue 1 with a non-trivial Jordan block; not a stochastic matrix")
            c += alpha[off] * beta[off]
            continue
        poly: Poly = ()
        for p in range(size):
            gamma = sum((alpha[off + i] * beta[off + i + p] for i in range(size - p)), ZERO)
            if gamma:
                poly = poly_add(poly, poly_scale(binomial_poly(p), gamma / lam**p))
        by_lam[lam] = poly_add(by_lam.get(lam, ()), poly)
    terms = tuple((lam, by_lam[lam]) for lam in sorted(by_lam, reverse=True) if by_lam[lam])
    return ClosedForm(c=c, terms=terms, transient=transient, max_block=max_block)
