"""Recurrence representation, validation, companion operator, unrolling.

State convention (normative): U_n = (u_n, ..., u_{n+d-1}) stacked forward,
companion matrix with identity superdiagonal and the coefficient row at the
bottom, so that U_{n+1} = A(n) U_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .polys import RationalFunction, UniPoly


class InvalidRecurrence(ValueError):
    pass


@dataclass(frozen=True)
class Recurrence:
    """p_d(n) u_{n+d} = p_{d-1}(n) u_{n+d-1} + ... + p_0(n) u_n with exact
    rational initial values u_0..u_{d-1}."""

    coefficients: tuple[UniPoly, ...]  # p_0, ..., p_d
    initial: tuple[Fraction, ...]

    @staticmethod
    def make(coefficients, initial) -> "Recurrence":
        coeffs = tuple(
            c if isinstance(c, UniPoly) else UniPoly.make(c) for c in coefficients
        )
        init = tuple(Fraction(v) for v in initial)
        rec = Recurrence(coeffs, init)
        rec.validate()
        return rec

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> UniPoly:
        return self.coefficients[-1]

    def validate(self) -> None:
        d = self.order
        if d < 1:
            raise InvalidRecurrence("order must be at least 1")
        if len(self.initial) != d:
            raise InvalidRecurrence(
                f"need exactly {d} initial values, got {len(self.initial)}"
            )
        pd = self.leading
        if pd.is_zero():
            raise InvalidRecurrence("leading coefficient is identically zero")
        for root in pd.rational_roots():
            if root.denominator == 1 and root >= 0:
                raise InvalidRecurrence(
                    f"leading coefficient vanishes at n = {root}"
                )
        deg = pd.degree
        for i, p in enumerate(self.coefficients[:-1]):
            if p.degree > deg:
                raise InvalidRecurrence(
                    f"not Poincare type: deg p_{i} = {p.degree} exceeds deg p_d = {deg}"
                )


def companion(rec: Recurrence) -> list[list[RationalFunction]]:
    """Companion matrix A(n) with U_{n+1} = A(n) U_n."""
    d = rec.order
    zero = RationalFunction.const(0)
    one = RationalFunction.const(1)
    rows = []
    for i in range(d - 1):
        rows.append([one if j == i + 1 else zero for j in range(d)])
    bottom = [
        RationalFunction.make(rec.coefficients[i], rec.leading) for i in range(d)
    ]
    rows.append(bottom)
    return rows


def unroll(rec: Recurrence, count: int) -> list[Fraction]:
    """Exact values u_0 .. u_{count-1}."""
    d = rec.order
    if count < 0:
        raise ValueError("count must be nonnegative")
    vals = list(rec.initial[: min(count, d)])
    n = 0
    while len(vals) < count:
        lead = rec.leading.eval(n)
        acc = Fraction(0)
        for i in range(d):
            acc += rec.coefficients[i].eval(n) * vals[n + i]
        vals.append(acc / lead)
        n += 1
    return vals[:count]


def state_vector(rec: Recurrence, n: int) -> tuple[Fraction, ...]:
    """U_n = (u_n, ..., u_{n+d-1}), exactly."""
    vals = unroll(rec, n + rec.order)
    return tuple(vals[n : n + rec.order])


def limit_matrix(a: list[list[RationalFunction]]) -> list[list[Fraction]]:
    """Entrywise limit as n goes to infinity (Poincare type required)."""
    out = []
    for row in a:
        out.append([entry.limit_at_infinity() for entry in row])
    return out
