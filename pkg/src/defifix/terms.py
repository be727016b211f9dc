"""Polynomial terms over the formula language: sparse multivariate
polynomials with exact integer or rational coefficients.

A monomial is a tuple of (variable, exponent) pairs sorted by variable name
with every exponent >= 1; the empty tuple is the constant monomial. A Term
stores nonzero (monomial, coefficient) pairs in descending graded
lexicographic order (higher total degree first, ties by variable name then
by higher exponent), which is also the printing order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import EvaluationError

Monomial = tuple[tuple[str, int], ...]

Coefficient = int | Fraction


def _norm_coeff(c: Coefficient) -> Coefficient:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_key(m: Monomial):
    return (-_mono_degree(m), tuple((v, -e) for v, e in m))


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    exps: dict[str, int] = {}
    for v, e in a:
        exps[v] = exps.get(v, 0) + e
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items()))


def _canon(pairs: dict[Monomial, Coefficient]) -> tuple[tuple[Monomial, Coefficient], ...]:
    items = [(m, _norm_coeff(c)) for m, c in pairs.items() if c != 0]
    items.sort(key=lambda mc: _mono_key(mc[0]))
    return tuple(items)


@dataclass(frozen=True)
class Term:
    coeffs: tuple[tuple[Monomial, Coefficient], ...]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(c: Coefficient) -> "Term":
        c = _norm_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
        return Term((((), c),) if c != 0 else ())

    @staticmethod
    def variable(name: str) -> "Term":
        return Term(((((name, 1),), 1),))

    @staticmethod
    def zero() -> "Term":
        return Term(())

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return all(m == () for m, _ in self.coeffs)

    def constant_value(self) -> Coefficient:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.coeffs[0][1] if self.coeffs else 0

    def degree(self) -> int:
        return _mono_degree(self.coeffs[0][0]) if self.coeffs else 0

    def free_variables(self) -> set[str]:
        return {v for m, _ in self.coeffs for v, _ in m}

    def terms(self) -> list["Term"]:
        """Monomial summands as single-term polynomials, in print order."""
        return [Term((mc,)) for mc in self.coeffs]

    def as_dict(self) -> dict[Monomial, Coefficient]:
        return dict(self.coeffs)

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "Term":
        if isinstance(other, Term):
            return other
        return Term.constant(other)

    def __add__(self, other) -> "Term":
        other = self._coerce(other)
        acc = dict(self.coeffs)
        for m, c in other.coeffs:
            acc[m] = acc.get(m, 0) + c
        return Term(_canon(acc))

    __radd__ = __add__

    def __neg__(self) -> "Term":
        return Term(tuple((m, _norm_coeff(-c)) for m, c in self.coeffs))

    def __sub__(self, other) -> "Term":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Term":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "Term":
        other = self._coerce(other)
        acc: dict[Monomial, Coefficient] = {}
        for m1, c1 in self.coeffs:
            for m2, c2 in other.coeffs:
                m = _mono_mul(m1, m2)
                acc[m] = acc.get(m, 0) + c1 * c2
        return Term(_canon(acc))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Term":
        if n < 0:
            raise ValueError("negative exponent")
        out = Term.constant(1)
        for _ in range(n):
            out = out * self
        return out

    # -- semantics ---------------------------------------------------------

    def substitute(self, mapping: dict[str, "Term"]) -> "Term":
        out = Term.zero()
        for m, c in self.coeffs:
            part = Term.constant(c)
            for v, e in m:
                factor = mapping.get(v, Term.variable(v))
                part = part * factor**e
            out = out + part
        return out

    def evaluate(self, assignment: dict[str, "FieldElement"], field) -> "FieldElement":
        """Value of the term under a variable assignment, in the given field.

        Integer and rational coefficients embed through the characteristic
        map; a coefficient whose denominator vanishes in the field is an
        evaluation error, as is an unassigned variable.
        """
        total = field.zero()
        for m, c in self.coeffs:
            try:
                part = field.element(c)
            except ZeroDivisionError as exc:
                raise EvaluationError(f"coefficient {c} undefined in {field.spec()}") from exc
            for v, e in m:
                if v not in assignment:
                    raise EvaluationError(f"variable {v!r} has no value")
                part = part * assignment[v] ** e
            total = total + part
        return total

    def clear_denominators(self) -> tuple["Term", int]:
        """Scale by the least common denominator of the coefficients.

        Returns (integer-coefficient term, multiplier). Over a field of
        characteristic p the scaling preserves zero sets only when p does
        not divide the multiplier, which holds whenever the original
        coefficients are themselves defined in the field.
        """
        dens = [c.denominator for _, c in self.coeffs if isinstance(c, Fraction)]
        if not dens:
            return self, 1
        mult = lcm(*dens)
        return self * mult, mult

    # -- text --------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts: list[str] = []
        for i, (m, c) in enumerate(self.coeffs):
            neg = c < 0
            mag = -c if neg else c
            body = _coeff_str(mag) if (m == () or mag != 1) else ""
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if body and mono:
                body = f"{body}*{mono}"
            else:
                body = body or mono
            if i == 0:
                parts.append(f"-{body}" if neg else body)
            else:
                parts.append(f"- {body}" if neg else f"+ {body}")
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Term({str(self)!r})"


def _coeff_str(c: Coefficient) -> str:
    if isinstance(c, Fraction) and c.denominator != 1:
        return f"{c.numerator}/{c.denominator}"
    return str(int(c))
