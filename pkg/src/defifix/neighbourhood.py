"""Arithmetic maps and arithmetic neighbourhoods.

A map f: A -> K on a finite subset A of a field K is arithmetic when
f(1)=1 if 1 is in A, f(a+b)=f(a)+f(b) whenever a, b, a+b all lie in A,
and f(a*b)=f(a)*f(b) likewise. A is an arithmetic neighbourhood of r in A
when every arithmetic map on A fixes r.

Over a finite field the decision is exact: all arithmetic maps are
enumerated by backtracking over A's order with forward propagation of the
relation triples holding inside A. Over any field (the infinite-field
path) a one-sided certificate is available: iterate the forced-value
closure and report Certified only when f(r)=r is pinned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapExceededError, FieldMismatchError, InfiniteFieldError
from .fields import FieldDescriptor, FieldElement, element_str, enumerate_elements

DEFAULT_MAP_CAP = 10**6


@dataclass(frozen=True)
class Neighbourhood:
    field: FieldDescriptor
    elements: tuple[FieldElement, ...]
    target_index: int

    def __post_init__(self):
        if not 0 <= self.target_index < len(self.elements):
            raise ValueError("distinguished index out of range")
        seen = set()
        for a in self.elements:
            if a.field != self.field:
                raise FieldMismatchError(
                    f"element of {a.field.spec()} in a {self.field.spec()} neighbourhood"
                )
            if a in seen:
                raise ValueError(f"duplicate element {element_str(a)}")
            seen.add(a)

    @property
    def r(self) -> FieldElement:
        return self.elements[self.target_index]

    def to_json(self) -> dict:
        return {
            "field": self.field.spec(),
            "elements": [element_str(a) for a in self.elements],
            "target_index": self.target_index,
        }


def neighbourhood(field: FieldDescriptor, elements, target: FieldElement) -> Neighbourhood:
    """Build a Neighbourhood from possibly-duplicated elements (first
    occurrence wins) and a distinguished element that must be among them."""
    out: list[FieldElement] = []
    seen = set()
    for a in elements:
        a = field.element(a)
        if a not in seen:
            seen.add(a)
            out.append(a)
    target = field.element(target)
    if target not in seen:
        raise ValueError(f"target {element_str(target)} not among the elements")
    return Neighbourhood(field, tuple(out), out.index(target))


@dataclass(frozen=True)
class FactSet:
    """Complete relation triples inside A, by element index: every
    satisfied instance a_i + a_j = a_k and a_i * a_j = a_k over ordered
    pairs (i, j), plus the indices of 1."""

    ones: frozenset[int]
    sums: frozenset[tuple[int, int, int]]
    products: frozenset[tuple[int, int, int]]

    @property
    def is_empty(self) -> bool:
        return not (self.ones or self.sums or self.products)


def facts(A: Neighbourhood) -> FactSet:
    index = {a: i for i, a in enumerate(A.elements)}
    one = A.field.one()
    ones = frozenset(i for i, a in enumerate(A.elements) if a == one)
    sums = set()
    products = set()
    for i, a in enumerate(A.elements):
        for j, b in enumerate(A.elements):
            k = index.get(a + b)
            if k is not None:
                sums.add((i, j, k))
            k = index.get(a * b)
            if k is not None:
                products.add((i, j, k))
    return FactSet(ones, frozenset(sums), frozenset(products))


@dataclass(frozen=True)
class ArithmeticMap:
    domain: tuple[FieldElement, ...]
    values: tuple[FieldElement, ...]

    def __call__(self, a: FieldElement) -> FieldElement:
        return self.values[self.domain.index(a)]

    @property
    def is_identity(self) -> bool:
        return self.domain == self.values

    def as_pairs(self) -> list[list[str]]:
        return [[element_str(a), element_str(v)] for a, v in zip(self.domain, self.values)]


def _map_search(A: Neighbourhood, cap: int):
    """Yield the value tuples of all total arithmetic maps on A, in
    backtracking order (A's order, field enumeration order per slot)."""
    if not A.field.is_finite:
        raise InfiniteFieldError("map enumeration needs a finite field")
    fs = facts(A)
    elems = enumerate_elements(A.field)
    one = A.field.one()
    zero = A.field.zero()
    n = len(A.elements)
    vals: list[FieldElement | None] = [None] * n
    incidence: list[list[tuple[str, tuple[int, int, int]]]] = [[] for _ in range(n)]
    for t in fs.sums:
        for i in set(t):
            incidence[i].append(("sum", t))
    for t in fs.products:
        for i in set(t):
            incidence[i].append(("prod", t))
    trail: list[int] = []
    queue: list[int] = []

    def assign(i: int, v: FieldElement) -> bool:
        if vals[i] is not None:
            return vals[i] == v
        vals[i] = v
        trail.append(i)
        queue.append(i)
        return True

    def check(kind: str, t: tuple[int, int, int]) -> bool:
        i, j, k = t
        vi, vj, vk = vals[i], vals[j], vals[k]
        if kind == "sum":
            if vi is not None and vj is not None:
                return assign(k, vi + vj)
            if vi is not None and vk is not None:
                return assign(j, vk - vi)
            if vj is not None and vk is not None:
                return assign(i, vk - vj)
            return True
        if vi is not None and vj is not None:
            return assign(k, vi * vj)
        if vi is not None and vk is not None:
            if vi == zero:
                return vk == zero
            return assign(j, vk / vi)
        if vj is not None and vk is not None:
            if vj == zero:
                return vk == zero
            return assign(i, vk / vj)
        return True

    def propagate() -> bool:
        while queue:
            i = queue.pop()
            for kind, t in incidence[i]:
                if not check(kind, t):
                    return False
        return True

    def undo(mark: int):
        while len(trail) > mark:
            vals[trail.pop()] = None
        queue.clear()

    count = 0

    def search():
        nonlocal count
        for i in range(n):
            if vals[i] is None:
                for v in elems:
                    mark = len(trail)
                    if assign(i, v) and propagate():
                        yield from search()
                    undo(mark)
                return
        count += 1
        if count > cap:
            raise CapExceededError(f"more than {cap} arithmetic maps")
        yield tuple(vals)

    mark0 = len(trail)
    ok = all(assign(i, one) for i in fs.ones)
    if ok and propagate():
        yield from search()
    undo(mark0)


def enumerate_arithmetic_maps(A: Neighbourhood, cap: int = DEFAULT_MAP_CAP) -> list[ArithmeticMap]:
    """All total arithmetic maps on A, deterministically ordered."""
    return [ArithmeticMap(A.elements, vals) for vals in _map_search(A, cap)]


@dataclass(frozen=True)
class Decision:
    yes: bool
    witness: ArithmeticMap | None = None

    def __bool__(self) -> bool:
        return self.yes


def is_neighbourhood(A: Neighbourhood, cap: int = DEFAULT_MAP_CAP) -> Decision:
    """Exact decision over a finite field: Yes iff every arithmetic map on
    A fixes the distinguished element; otherwise No with the first
    violating map as witness."""
    r = A.r
    ri = A.target_index
    for vals in _map_search(A, cap):
        if vals[ri] != r:
            return Decision(False, ArithmeticMap(A.elements, vals))
    return Decision(True)


def certify_by_propagation(A: Neighbourhood) -> bool:
    """Sound one-sided check valid over any field: True (Certified) only
    when the forced-value closure pins f(r)=r. False means Unknown, not
    refuted. Forcing rules: f(1)=1; a+a=a forces f(a)=0; a sum triple with
    two values known forces the third; a product triple likewise, dividing
    only by known nonzero values."""
    fs = facts(A)
    known: dict[int, FieldElement] = {}
    one = A.field.one()
    zero = A.field.zero()
    for i in fs.ones:
        known[i] = one
    for (i, j, k) in fs.sums:
        if i == j == k:
            known[i] = zero
    changed = True
    while changed:
        changed = False

        def learn(i: int, v: FieldElement) -> bool:
            if i in known:
                if known[i] != v:
                    raise AssertionError("forced values conflict on a satisfiable fact set")
                return False
            known[i] = v
            return True

        for (i, j, k) in fs.sums:
            if i in known and j in known and k not in known:
                changed |= learn(k, known[i] + known[j])
            elif i in known and k in known and j not in known:
                changed |= learn(j, known[k] - known[i])
            elif j in known and k in known and i not in known:
                changed |= learn(i, known[k] - known[j])
        for (i, j, k) in fs.products:
            if i in known and j in known and k not in known:
                changed |= learn(k, known[i] * known[j])
            elif i in known and k in known and j not in known and known[i] != zero:
                changed |= learn(j, known[k] / known[i])
            elif j in known and k in known and i not in known and known[j] != zero:
                changed |= learn(i, known[k] / known[j])
    return known.get(A.target_index) == A.r


# -- combinators -----------------------------------------------------------------


def combine(kind: str, *inputs: Neighbourhood, field: FieldDescriptor | None = None) -> Neighbourhood:
    """Closure steps: zero, one (no inputs, field required), neg, inv (one
    input), add, mul (two inputs). The output set is the new distinguished
    element(s) followed by the input sets, duplicates merged keeping the
    first occurrence."""
    if kind in ("zero", "one"):
        if inputs or field is None:
            raise ValueError(f"{kind} takes no inputs and an explicit field")
        a = field.zero() if kind == "zero" else field.one()
        return neighbourhood(field, [a], a)
    if kind in ("neg", "inv"):
        if len(inputs) != 1:
            raise ValueError(f"{kind} takes exactly one input")
        (A,) = inputs
        r = A.r
        if kind == "neg":
            new = [A.field.zero(), -r]
            target = -r
        else:
            new = [A.field.one(), r.inverse()]
            target = r.inverse()
        return neighbourhood(A.field, new + list(A.elements), target)
    if kind in ("add", "mul"):
        if len(inputs) != 2:
            raise ValueError(f"{kind} takes exactly two inputs")
        A, B = inputs
        if A.field != B.field:
            raise FieldMismatchError("combining neighbourhoods over different fields")
        r = A.r + B.r if kind == "add" else A.r * B.r
        return neighbourhood(A.field, [r] + list(A.elements) + list(B.elements), r)
    raise ValueError(f"unknown combinator {kind!r}")


def nbhd_rational(q, K: FieldDescriptor) -> Neighbourhood:
    """A neighbourhood of the image of the rational q in K, built from the
    closure combinators with binary doubling (O(log) size). In
    characteristic p the denominator must be invertible."""
    q = Fraction(q)
    c, d = q.numerator, q.denominator
    if K.is_finite and d % K.p == 0:
        raise ZeroDivisionError(f"denominator {d} vanishes in {K.spec()}")
    if c == 0:
        return combine("zero", field=K)

    def ints(n: int) -> Neighbourhood:
        # n >= 1, by doubling: A(2m) = add(A(m), A(m)), A(2m+1) = add(A(2m), A(1))
        if n == 1:
            return combine("one", field=K)
        if n % 2 == 0:
            half = ints(n // 2)
            return combine("add", half, half)
        return combine("add", ints(n - 1), combine("one", field=K))

    if c == 1 and d > 1:
        return combine("inv", ints(d))
    num = ints(abs(c))
    if c < 0:
        num = combine("neg", num)
    if d == 1:
        return num
    return combine("mul", num, combine("inv", ints(d)))


def fixed_subfield(K: FieldDescriptor, cap: int = DEFAULT_MAP_CAP) -> set[FieldElement]:
    """The arithmetically fixed elements of a finite field: enumerate the
    arithmetic maps on A = K once (they are exactly the field
    endomorphisms) and keep the elements every map fixes."""
    if not K.is_finite:
        raise InfiniteFieldError("fixed-subfield computation needs a finite field")
    elems = tuple(enumerate_elements(K))
    A = Neighbourhood(K, elems, 0)
    maps = enumerate_arithmetic_maps(A, cap)
    return {a for i, a in enumerate(elems) if all(m.values[i] == a for m in maps)}
