"""Exact arithmetic over the supported computable fields: Q, F_p, and F_{p^k}.

Field elements are immutable values: rationals are stdlib Fractions in
canonical form, finite-field elements are coefficient vectors of length k
(entries reduced mod p) with respect to a fixed monic irreducible modulus.
Everything here is pure; elements and descriptors hash and compare
structurally.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import FieldMismatchError, FieldSpecError, InfiniteFieldError

_SPEC_RE = re.compile(r"^F(\d+)(?:\^(\d+))?(?::(.+))?$")

MAX_EXTENSION_DEGREE = 4


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# -- dense univariate polynomial helpers over F_p (ascending coefficients) --


def _poly_trim(c):
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _poly_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _poly_trim(out)


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] - x) % p
    return _poly_trim(out)


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return _poly_trim(out)


def _poly_mod(a, m, p):
    # m monic
    a = list(a)
    dm = len(m) - 1
    while len(a) > dm:
        lead = a[-1] % p
        if lead:
            shift = len(a) - 1 - dm
            for i, c in enumerate(m):
                a[shift + i] = (a[shift + i] - lead * c) % p
        a.pop()
    return _poly_trim(a)


def _poly_inv_mod(a, m, p):
    """Inverse of a modulo the monic polynomial m over F_p (extended Euclid)."""
    r0, r1 = list(m), _poly_trim(list(a))
    s0, s1 = [], [1]
    while r1:
        # divide r0 by r1
        q = []
        r = list(r0)
        inv_lead = pow(r1[-1], -1, p)
        while len(r) >= len(r1) and r:
            c = (r[-1] * inv_lead) % p
            d = len(r) - len(r1)
            while len(q) <= d:
                q.append(0)
            q[d] = c
            for i, x in enumerate(r1):
                r[d + i] = (r[d + i] - c * x) % p
            r = _poly_trim(r)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1, p), p)
    # r0 = gcd; must be a nonzero constant since m is irreducible and a != 0
    if len(r0) != 1:
        raise ZeroDivisionError("element has no inverse")
    c = pow(r0[0], -1, p)
    return _poly_mod([x * c % p for x in s0], m, p)


def _poly_is_irreducible(m, p):
    """Exhaustive divisor search; adequate for the supported degrees (<= 4)."""
    k = len(m) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for n in range(p**d):
            g, t = [], n
            for _ in range(d):
                g.append(t % p)
                t //= p
            g.append(1)
            if not _poly_mod(m, g, p):
                return False
    # degree 1: irreducible by definition; degrees 2, 3 need only the (root)
    # search above; degree 4 also rules out quadratic factors there
    return True


def _canonical_modulus(p: int, k: int):
    """Smallest monic irreducible of degree k over F_p, in base-p counting
    order of the non-leading coefficient vector (constant term least
    significant)."""
    for n in range(p**k):
        c, t = [], n
        for _ in range(k):
            c.append(t % p)
            t //= p
        c.append(1)
        if _poly_is_irreducible(c, p):
            return tuple(c)
    raise FieldSpecError(f"no irreducible monic polynomial of degree {k} over F_{p}")


@dataclass(frozen=True)
class FieldDescriptor:
    """One of Q (p is None), a prime field F_p, or an extension F_{p^k}.

    For finite fields `modulus` is a monic irreducible polynomial over F_p
    given as an ascending coefficient tuple of length k+1; prime fields use
    the degree-1 modulus x.
    """

    p: int | None
    modulus: tuple[int, ...] | None

    @property
    def kind(self) -> str:
        if self.p is None:
            return "rationals"
        return "prime" if self.degree == 1 else "extension"

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def degree(self) -> int:
        return len(self.modulus) - 1 if self.modulus else 1

    @property
    def order(self) -> int:
        if self.p is None:
            raise InfiniteFieldError("Q is infinite")
        return self.p**self.degree

    @property
    def characteristic(self) -> int:
        return self.p or 0

    def spec(self) -> str:
        if self.p is None:
            return "Q"
        if self.degree == 1:
            return f"F{self.p}"
        mods = ",".join(str(c) for c in self.modulus)
        return f"F{self.p}^{self.degree}:{mods}"

    def __repr__(self):
        return f"FieldDescriptor({self.spec()!r})"

    # -- element construction -------------------------------------------

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def element(self, value) -> "FieldElement":
        """Coerce an int, Fraction, coefficient sequence, or string to an
        element of this field. Integers embed via the characteristic map."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"element of {value.field.spec()} used in {self.spec()}")
            return value
        if isinstance(value, str):
            return parse_element(value, self)
        if self.p is None:
            return FieldElement(self, Fraction(value))
        if isinstance(value, Fraction):
            num = self.element(value.numerator)
            return num / self.element(value.denominator)
        if isinstance(value, int):
            vec = (value % self.p,) + (0,) * (self.degree - 1)
            return FieldElement(self, vec)
        coeffs = tuple(int(c) % self.p for c in value)
        if len(coeffs) > self.degree:
            reduced = _poly_mod(list(coeffs), list(self.modulus), self.p)
            coeffs = tuple(reduced)
        coeffs = coeffs + (0,) * (self.degree - len(coeffs))
        return FieldElement(self, coeffs)


@dataclass(frozen=True)
class FieldElement:
    """Immutable field element; arithmetic via the usual operators.

    `value` is a canonical Fraction over Q, or a coefficient tuple of
    length k (entries in [0, p)) over a finite field.
    """

    field: FieldDescriptor
    value: Fraction | tuple[int, ...]

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return self.field.element(other)
        if other.field != self.field:
            raise FieldMismatchError(
                f"mixed operands: {self.field.spec()} and {other.field.spec()}"
            )
        return other

    @property
    def is_zero(self) -> bool:
        if self.field.p is None:
            return self.value == 0
        return all(c == 0 for c in self.value)

    @property
    def is_one(self) -> bool:
        return self == self.field.one()

    def __add__(self, other):
        other = self._check(other)
        if self.field.p is None:
            return FieldElement(self.field, self.value + other.value)
        p = self.field.p
        vec = tuple((a + b) % p for a, b in zip(self.value, other.value))
        return FieldElement(self.field, vec)

    def __sub__(self, other):
        other = self._check(other)
        if self.field.p is None:
            return FieldElement(self.field, self.value - other.value)
        p = self.field.p
        vec = tuple((a - b) % p for a, b in zip(self.value, other.value))
        return FieldElement(self.field, vec)

    def __neg__(self):
        if self.field.p is None:
            return FieldElement(self.field, -self.value)
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.value))

    def __mul__(self, other):
        other = self._check(other)
        if self.field.p is None:
            return FieldElement(self.field, self.value * other.value)
        p = self.field.p
        prod = _poly_mul(list(self.value), list(other.value), p)
        prod = _poly_mod(prod, list(self.field.modulus), p)
        vec = tuple(prod) + (0,) * (self.field.degree - len(prod))
        return FieldElement(self.field, vec)

    def inverse(self) -> "FieldElement":
        if self.is_zero:
            raise ZeroDivisionError("inversion of zero")
        if self.field.p is None:
            return FieldElement(self.field, 1 / self.value)
        inv = _poly_inv_mod(list(self.value), list(self.field.modulus), self.field.p)
        vec = tuple(inv) + (0,) * (self.field.degree - len(inv))
        return FieldElement(self.field, vec)

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __str__(self):
        return element_str(self)

    def __repr__(self):
        return f"<{element_str(self)} in {self.field.spec()}>"


def make_field(spec: str) -> FieldDescriptor:
    """Build a field descriptor from a specification string.

    Accepted forms: "Q", "F<p>", "F<p>^<k>", and "F<p>^<k>:<c0,c1,...,ck>"
    with an explicit monic modulus (ascending coefficients). When the
    modulus is omitted the canonical (smallest) irreducible one is chosen.
    """
    spec = spec.strip()
    if spec == "Q":
        return FieldDescriptor(None, None)
    m = _SPEC_RE.match(spec)
    if not m:
        raise FieldSpecError(f"malformed field spec {spec!r}")
    p = int(m.group(1))
    if not _is_prime(p):
        raise FieldSpecError(f"{p} is not prime; use extension syntax F<p>^<k> for prime powers")
    k = int(m.group(2)) if m.group(2) else 1
    if k < 1 or k > MAX_EXTENSION_DEGREE:
        raise FieldSpecError(f"extension degree must be in 1..{MAX_EXTENSION_DEGREE}, got {k}")
    if m.group(3) is not None:
        raw = m.group(3).strip().strip("[]")
        try:
            coeffs = tuple(int(c) % p for c in raw.split(","))
        except ValueError:
            raise FieldSpecError(f"malformed modulus {m.group(3)!r}") from None
        if len(coeffs) != k + 1 or coeffs[-1] != 1:
            raise FieldSpecError(f"modulus must be monic of degree {k}")
        if not _poly_is_irreducible(list(coeffs), p):
            raise FieldSpecError(f"modulus {list(coeffs)} is reducible over F_{p}")
        modulus = coeffs
    elif k == 1:
        modulus = (0, 1)
    else:
        modulus = _canonical_modulus(p, k)
    return FieldDescriptor(p, modulus)


def arith(op: str, a: FieldElement, b: FieldElement | None = None) -> FieldElement:
    """Apply a named field operation; `inv` and `neg` take one operand."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown operation {op!r}")


def enumerate_elements(field: FieldDescriptor) -> list[FieldElement]:
    """All elements of a finite field, in base-p counting order of the
    coefficient vector (so the prime subfield comes first as 0, 1, ..., p-1)."""
    if not field.is_finite:
        raise InfiniteFieldError("cannot enumerate Q")
    p, k = field.p, field.degree
    out = []
    for n in range(p**k):
        vec, t = [], n
        for _ in range(k):
            vec.append(t % p)
            t //= p
        out.append(FieldElement(field, tuple(vec)))
    return out


def frobenius(a: FieldElement) -> FieldElement:
    """The map x -> x^p on a finite field."""
    if not a.field.is_finite:
        raise InfiniteFieldError("Frobenius endomorphism needs a finite field")
    return a ** a.field.p


def element_str(a: FieldElement) -> str:
    """Canonical text form: "c" or "c/d" for rationals, "[c0,c1,...]" with
    trailing zeros trimmed for finite-field coefficient vectors."""
    if a.field.p is None:
        v = a.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    vec = list(a.value)
    while len(vec) > 1 and vec[-1] == 0:
        vec.pop()
    return "[" + ",".join(str(c) for c in vec) + "]"


def parse_element(text: str, field: FieldDescriptor) -> FieldElement:
    """Parse the canonical element forms; bare integers and "c/d" embed into
    finite fields through the characteristic map."""
    text = text.strip()
    if text.startswith("["):
        if not field.is_finite:
            raise FieldSpecError("coefficient-vector syntax is only for finite fields")
        body = text.strip("[]")
        coeffs = [int(c) for c in body.split(",")] if body else [0]
        if len(coeffs) > field.degree:
            raise FieldSpecError(
                f"vector of length {len(coeffs)} too long for degree {field.degree}"
            )
        return field.element(coeffs)
    if "/" in text:
        num, den = text.split("/", 1)
        frac = Fraction(int(num), int(den))
        if field.is_finite and frac.denominator % field.p == 0:
            raise ZeroDivisionError(f"denominator {frac.denominator} vanishes in {field.spec()}")
        return field.element(frac)
    try:
        return field.element(int(text))
    except ValueError:
        raise FieldSpecError(f"malformed element {text!r}") from None


RATIONALS = FieldDescriptor(None, None)
