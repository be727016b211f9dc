"""Between neighbourhoods and existential formulas, in both directions.

A neighbourhood's internal addition/multiplication facts written out as a
conjunction pin its distinguished element; conversely a defining formula's
witness values assemble back into a neighbourhood.  The single-equation
encoder folds the emitted equation system into one polynomial through a
two-variable form that vanishes only at the origin.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product

from .errors import (
    FieldSpecError,
    InfiniteFieldError,
    NoSatisfiableDisjunctError,
    NotDefiningError,
    NotSingletonError,
)
from .fields import FieldDescriptor, enumerate_elements
from .formulas import Equal, Exists, Formula, conj, definable_set, free_variables
from .neighbourhood import Neighbourhood, facts
from .normalize import normalize, solve_system
from .terms import Term


# -- fact emission ---------------------------------------------------------


def _kept_facts(A: Neighbourhood):
    """The facts worth writing down, in a deterministic order.

    Commuted duplicates are dropped, as are instances already implied by a
    kept atom: a product with a factor 1 follows from that factor's `= 1`
    atom, and a sum or product with a factor 0 follows from the always-kept
    `0 + 0 = 0` atom.  The remaining conjunction has exactly the same
    solutions as the full fact list.
    """
    fs = facts(A)
    elems = A.elements
    zero = A.field.zero()
    one = A.field.one()
    ones = sorted(fs.ones)
    sums = []
    for i, j, k in sorted(fs.sums):
        if i > j:
            continue
        if (elems[i] == zero or elems[j] == zero) and not i == j == k:
            continue
        sums.append((i, j, k))
    products = []
    for i, j, k in sorted(fs.products):
        if i > j:
            continue
        if elems[i] in (zero, one) or elems[j] in (zero, one):
            continue
        products.append((i, j, k))
    return ones, sums, products


def _names(A: Neighbourhood, free_name: str) -> dict[int, str]:
    # distinguished element first, the rest numbered from x2 in stored order
    out = {}
    counter = 2
    for idx in range(len(A.elements)):
        if idx == A.target_index:
            out[idx] = free_name
        else:
            out[idx] = f"x{counter}"
            counter += 1
    return out


def _mentioned(ones, sums, products) -> set[int]:
    seen = set(ones)
    for tri in sums:
        seen.update(tri)
    for tri in products:
        seen.update(tri)
    return seen


def _close_existentially(body: Formula, free_name: str) -> Formula:
    bound = sorted(free_variables(body) - {free_name}, key=lambda n: int(n[1:]))
    f = body
    for name in reversed(bound):
        f = Exists(name, f)
    return f


def neighbourhood_to_formula(A: Neighbourhood) -> Formula:
    """Existential formula with free variable x1 whose sole solution is A.r,
    provided A really is a neighbourhood of it."""
    ones, sums, products = _kept_facts(A)
    if A.target_index not in _mentioned(ones, sums, products):
        raise NotDefiningError(
            "the distinguished element participates in no fact; "
            "any map moving it alone is arithmetic"
        )
    names = _names(A, "x1")
    v = {i: Term.variable(names[i]) for i in range(len(A.elements))}
    parts = [Equal(v[i], Term.constant(1)) for i in ones]
    parts += [Equal(v[i] + v[j], v[k]) for i, j, k in sums]
    parts += [Equal(v[i] * v[j], v[k]) for i, j, k in products]
    return _close_existentially(conj(parts), "x1")


def formula_to_neighbourhood(f: Formula, K: FieldDescriptor) -> Neighbourhood:
    """Recover a neighbourhood of the element a defining formula pins down.

    The formula must define a singleton {r} over finite K.  Its normal form
    is searched disjunct by disjunct; the first satisfiable system's first
    solution supplies the witness values, and {1, r} plus those values is
    the answer.
    """
    if not K.is_finite:
        raise InfiniteFieldError("recovering a neighbourhood needs a finite field")
    fv = free_variables(f)
    if len(fv) != 1:
        raise NotSingletonError(f"expected one free variable, found {sorted(fv)}")
    (free,) = fv
    target = definable_set(f, K, free)
    if len(target) != 1:
        raise NotSingletonError(
            f"definable set has {len(target)} elements", definable=target
        )
    (r,) = target
    for system in normalize(f).systems:
        solutions = solve_system(system, K)
        if not solutions:
            continue
        # a satisfiable disjunct can only project onto the singleton
        projection = {s[system.free_var] for s in solutions}
        if projection != {r}:
            raise NoSatisfiableDisjunctError(
                "disjunct projection disagrees with the definable set"
            )
        witness = solutions[0]
        ordered = [K.one(), r] + [witness[name] for name in system.variables]
        elements = []
        for a in ordered:
            if a not in elements:
                elements.append(a)
        return Neighbourhood(K, tuple(elements), elements.index(r))
    raise NoSatisfiableDisjunctError("no disjunct is satisfiable")


# -- single-equation encoding ----------------------------------------------


def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [d for d in range(1, n + 1) if n % d == 0]


def _find_root(poly: Term, var: str, field: FieldDescriptor):
    if field.is_finite:
        for a in enumerate_elements(field):
            if poly.evaluate({var: a}, field).is_zero:
                return a
        return None
    # over Q every root of an integer polynomial is +-(divisor of the
    # constant term)/(divisor of the leading term)
    by_degree = {}
    for m, c in poly.as_dict().items():
        by_degree[m[0][1] if m else 0] = c
    if 0 not in by_degree:
        return field.zero()
    lead = by_degree[max(by_degree)]
    for num in _divisors(by_degree[0]):
        for den in _divisors(lead):
            for sign in (1, -1):
                a = field.element(Fraction(sign * num, den))
                if poly.evaluate({var: a}, field).is_zero:
                    return a
    return None


@dataclass(frozen=True)
class RootlessPolynomial:
    """A univariate integer polynomial of degree >= 2 with no root in the
    target field; checked exhaustively for finite fields and through the
    rational-root bound over Q."""

    poly: Term
    field: FieldDescriptor

    def __post_init__(self):
        if len(self.poly.free_variables()) != 1:
            raise ValueError("expected a univariate polynomial")
        if self.poly.degree() < 2:
            raise ValueError("degree must be at least 2")
        if any(not isinstance(c, int) for c in self.poly.as_dict().values()):
            raise ValueError("coefficients must be integers")
        root = _find_root(self.poly, self.variable, self.field)
        if root is not None:
            raise ValueError(f"{self.poly} has root {root} in {self.field.spec()}")

    @property
    def variable(self) -> str:
        (v,) = self.poly.free_variables()
        return v

    @property
    def degree(self) -> int:
        return self.poly.degree()

    def coefficients(self) -> tuple[int, ...]:
        """Ascending, length degree + 1."""
        out = [0] * (self.degree + 1)
        for m, c in self.poly.as_dict().items():
            out[m[0][1] if m else 0] = c
        return tuple(out)


def find_rootless(K: FieldDescriptor) -> RootlessPolynomial:
    """The first monic integer polynomial without a root in K, scanning
    degree 2 then 3 with coefficient tuples in lexicographic order.

    Degree 2 suffices except over degree-2 and degree-4 extensions, where
    every integer quadratic acquires a root and the scan moves on to cubics
    (an irreducible cubic over F_p has its roots in a degree-3 extension,
    which such fields do not contain).
    """
    x = Term.variable("x")
    if not K.is_finite:
        return RootlessPolynomial(x**2 + 1, K)
    p = K.characteristic
    for degree in (2, 3):
        for rest in iter_product(range(p), repeat=degree):
            poly = x**degree
            for offset, c in enumerate(rest):
                if c:
                    poly = poly + c * x ** (degree - 1 - offset)
            if _find_root(poly, "x", K) is None:
                return RootlessPolynomial(poly, K)
    raise FieldSpecError(f"no rootless cubic over {K.spec()}")


def homogenize(p: RootlessPolynomial) -> Term:
    """Two-variable form sum(a_i * x^i * y^(n-i)); vanishes only at the
    origin exactly because p has no root."""
    a = p.coefficients()
    n = p.degree
    x = Term.variable("x")
    y = Term.variable("y")
    out = Term.zero()
    for i, c in enumerate(a):
        if c:
            out = out + c * x**i * y ** (n - i)
    return out


def combine_equations(eqs, B: Term) -> Term:
    """Left fold of B over the equations' left-hand sides: the result is
    zero exactly where every input is."""
    eqs = list(eqs)
    if not eqs:
        raise ValueError("need at least one equation")
    T = eqs[0]
    for e in eqs[1:]:
        T = B.substitute({"x": T, "y": e})
    return T


def _linear_equation(A: Neighbourhood):
    """w1*x + w0 = 0 pinning A.r, available when r is an integer or
    rational image; None otherwise."""
    x = Term.variable("x")
    K = A.field
    if K.is_finite:
        p = K.characteristic
        for c in range(p):
            if K.element(c) == A.r:
                return Equal(x + (p - c) % p, Term.zero())
        return None
    q = A.r.value
    return Equal(q.denominator * x - q.numerator, Term.zero())


def compile_singleton(A: Neighbourhood, prefer_linear: bool = False) -> Formula:
    """One-equation defining formula: exists x2 ... xm (T(x, x2, ..., xm) = 0).

    The facts of A become polynomials (xi + xj - xk, xi*xj - xk, xi - 1)
    and are folded into a single T by combine_equations.  With
    prefer_linear=True an element of the prime-field image short-circuits
    to w1*x + w0 = 0 with no bound variables.
    """
    if prefer_linear:
        linear = _linear_equation(A)
        if linear is not None:
            return linear
    ones, sums, products = _kept_facts(A)
    if A.target_index not in _mentioned(ones, sums, products):
        raise NotDefiningError(
            "the distinguished element participates in no fact; "
            "any map moving it alone is arithmetic"
        )
    names = _names(A, "x")
    v = {i: Term.variable(names[i]) for i in range(len(A.elements))}
    eqs = [v[i] - 1 for i in ones]
    eqs += [v[i] + v[j] - v[k] for i, j, k in sums]
    eqs += [v[i] * v[j] - v[k] for i, j, k in products]
    T = combine_equations(eqs, homogenize(find_rootless(A.field)))
    return _close_existentially(Equal(T, Term.zero()), "x")


def term_to_json(t: Term) -> dict:
    """Sparse-monomial rendering with coefficients as strings."""
    return {
        "variables": sorted(t.free_variables()),
        "monomials": [
            {"coefficient": str(c), "powers": {v: e for v, e in m}}
            for m, c in t.coeffs
        ],
    }
