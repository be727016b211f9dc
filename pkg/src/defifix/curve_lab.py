"""Symmetric values of a plane curve's abscissas, with a constructed
neighbourhood certifying each of them.

Given g(x,y) over a finite field, the abscissa set P collects every u with a
partner s on the curve.  The elementary symmetric values t_k of P acquire an
explicit neighbourhood: the coefficient heights and exponents of g bound a
rational grid W(m), the grid scales monomials in each point into a set N,
k-fold products of distinct abscissas form M_k, and a sum closure over these
plus the abscissa differences and their inverses assembles the candidate
set.  Every arithmetic map on the result is then pinned on W(m), sends
abscissas to abscissas injectively, and so fixes each t_k.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CapExceededError, InfiniteFieldError
from .fields import FieldDescriptor, FieldElement, element_str, enumerate_elements
from .formulas import Equal, Exists, Formula, Not, conj
from .neighbourhood import DEFAULT_MAP_CAP, Neighbourhood, enumerate_arithmetic_maps
from .terms import Term

DEFAULT_CLOSURE_CAP = 10**6


def abscissa_set(g: Term, K: FieldDescriptor) -> list[FieldElement]:
    """{u : some s has g(u,s)=0}, in field enumeration order."""
    if not K.is_finite:
        raise InfiniteFieldError("abscissa scan needs a finite field")
    elems = enumerate_elements(K)
    out = []
    for u in elems:
        for s in elems:
            if g.evaluate({"x": u, "y": s}, K).is_zero:
                out.append(u)
                break
    return out


def coefficient_table(g: Term) -> tuple[int, dict]:
    """Minimal m with every coefficient c/d satisfying |c|,|d| <= m and every
    exponent <= m, plus the full {0..m}x{0..m} coefficient table."""
    if g.is_zero:
        raise ValueError("the zero polynomial has no coefficient table")
    extra = g.free_variables() - {"x", "y"}
    if extra:
        raise ValueError(f"expected a curve in x and y, found {sorted(extra)}")
    m = 1
    entries = {}
    for mono, c in g.as_dict().items():
        powers = dict(mono)
        i = powers.get("x", 0)
        j = powers.get("y", 0)
        frac = Fraction(c)
        m = max(m, i, j, abs(frac.numerator), abs(frac.denominator))
        entries[(i, j)] = c
    h = {(i, j): entries.get((i, j), 0) for i in range(m + 1) for j in range(m + 1)}
    return m, h


def w_set(m: int) -> list[Fraction]:
    """0 together with all c/d for c,d in +-{1..m}, ascending."""
    out = {Fraction(0)}
    for c in range(1, m + 1):
        for d in range(1, m + 1):
            out.add(Fraction(c, d))
            out.add(Fraction(-c, d))
    return sorted(out)


def elementary_symmetric(k: int, values) -> FieldElement:
    """Sum of all k-fold products of distinct entries, by the product
    recurrence."""
    values = list(values)
    n = len(values)
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    K = values[0].field
    e = [K.one()] + [K.zero()] * k
    for v in values:
        for i in range(k, 0, -1):
            e[i] = e[i] + e[i - 1] * v
    return e[k]


@dataclass(frozen=True)
class CurveData:
    """A curve over a finite carrier with its abscissas and witnesses.

    Solvable only when the characteristic exceeds the height bound m, so
    that every W(m) denominator stays invertible.
    """

    g: Term
    field: FieldDescriptor
    m: int
    h: dict
    abscissas: tuple[FieldElement, ...]
    witnesses: tuple[FieldElement, ...]

    def __post_init__(self):
        if self.field.characteristic <= self.m:
            raise ValueError(f"need characteristic > {self.m}")
        if len(set(self.abscissas)) != len(self.abscissas):
            raise ValueError("abscissas must be pairwise distinct")
        if len(self.witnesses) != len(self.abscissas):
            raise ValueError("one witness per abscissa")
        for u, z in zip(self.abscissas, self.witnesses):
            if not self.g.evaluate({"x": u, "y": z}, self.field).is_zero:
                raise ValueError(f"({element_str(u)}, {element_str(z)}) is not on the curve")

    @classmethod
    def build(cls, g: Term, K: FieldDescriptor) -> "CurveData":
        if not K.is_finite:
            raise InfiniteFieldError("curve data needs a finite field")
        m, h = coefficient_table(g)
        if K.characteristic <= m:
            raise ValueError(f"need characteristic > {m}")
        abscissas = abscissa_set(g, K)
        if not abscissas:
            raise ValueError("the curve has no points over this field")
        witnesses = []
        for u in abscissas:
            for s in enumerate_elements(K):
                if g.evaluate({"x": u, "y": s}, K).is_zero:
                    witnesses.append(s)
                    break
        return cls(g, K, m, h, tuple(abscissas), tuple(witnesses))

    @property
    def n(self) -> int:
        return len(self.abscissas)

    def to_json(self) -> dict:
        return {
            "g": str(self.g),
            "field": self.field.spec(),
            "m": self.m,
            "h": [
                [i, j, str(self.h[(i, j)])]
                for (i, j) in sorted(self.h)
                if self.h[(i, j)] != 0
            ],
            "abscissas": [element_str(u) for u in self.abscissas],
            "witnesses": [element_str(z) for z in self.witnesses],
        }


@dataclass(frozen=True)
class ClosureRecipe:
    """The assembled candidate set with its building blocks and targets."""

    mode: str
    elements: tuple[FieldElement, ...]
    targets: tuple[FieldElement, ...]
    w_image: tuple[FieldElement, ...]
    scaled_monomials: tuple[FieldElement, ...]
    products: tuple[tuple[FieldElement, ...], ...]
    sum_closure: tuple[FieldElement, ...]
    differences: tuple[FieldElement, ...]

    def neighbourhood(self, k: int) -> Neighbourhood:
        """The candidate set distinguished at t_k."""
        target = self.targets[k - 1]
        if target not in self.elements:
            raise ValueError(f"t_{k} fell outside the closure")
        return Neighbourhood(
            self.targets[0].field, self.elements, self.elements.index(target)
        )

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "size": len(self.elements),
            "elements": [element_str(a) for a in self.elements],
            "targets": [element_str(t) for t in self.targets],
        }


def _dedup(items) -> list:
    out = []
    for a in items:
        if a not in out:
            out.append(a)
    return out


def build_closure(
    c: CurveData, mode: str = "prefix", cap: int = DEFAULT_CLOSURE_CAP
) -> ClosureRecipe:
    """Assemble the neighbourhood candidate for every symmetric value.

    mode="paper" keeps the literal construction: all non-empty subset sums
    of the block values (exponential, so the block must stay within
    log2(cap)).  mode="prefix" keeps only the prefix sums of each point's
    monomial sequence and of each product list M_k — linear-size, and still
    forcing: each prefix chain pins the next partial sum by induction, and
    any superset of a neighbourhood is one.
    """
    if mode not in ("paper", "prefix"):
        raise ValueError(f"unknown mode {mode!r}")
    K = c.field
    u = c.abscissas
    z = c.witnesses
    n = c.n
    grid = w_set(c.m)
    w_image = _dedup(K.element(q) for q in grid)

    scaled = []
    for kk in range(n):
        for i in range(c.m + 1):
            for j in range(c.m + 1):
                power = u[kk] ** i * z[kk] ** j
                for b in grid:
                    scaled.append(K.element(b) * power)
    scaled = _dedup(scaled)

    products = tuple(
        tuple(
            _product(K, [u[i] for i in combo])
            for combo in combinations(range(n), kk + 1)
        )
        for kk in range(n)
    )

    block = _dedup(scaled + [a for row in products for a in row])
    if mode == "paper":
        if 2 ** len(block) - 1 > cap:
            raise CapExceededError(
                f"{len(block)} block values give more than {cap} subset sums"
            )
        sums = [None] * (1 << len(block))
        closure = []
        for mask in range(1, 1 << len(block)):
            low = mask & -mask
            rest = mask ^ low
            part = block[low.bit_length() - 1]
            sums[mask] = part if rest == 0 else sums[rest] + part
            closure.append(sums[mask])
    else:
        closure = []
        for kk in range(n):
            running = None
            for i in range(c.m + 1):
                for j in range(c.m + 1):
                    coeff = c.h[(i, j)]
                    if coeff == 0:
                        continue
                    term = K.element(coeff) * u[kk] ** i * z[kk] ** j
                    running = term if running is None else running + term
                    closure.append(running)
        for row in products:
            running = None
            for a in row:
                running = a if running is None else running + a
                closure.append(running)

    differences = []
    for i in range(n):
        for j in range(n):
            if i != j:
                differences.append(u[i] - u[j])
    differences += [d.inverse() for d in differences]

    if mode == "paper":
        assembled = _dedup(closure + differences)
    else:
        assembled = _dedup(
            w_image + scaled + [a for row in products for a in row] + closure + differences
        )
    if len(assembled) > cap:
        raise CapExceededError(f"closure size {len(assembled)} exceeds cap {cap}")

    targets = tuple(elementary_symmetric(k, u) for k in range(1, n + 1))
    return ClosureRecipe(
        mode=mode,
        elements=tuple(assembled),
        targets=targets,
        w_image=tuple(w_image),
        scaled_monomials=tuple(scaled),
        products=products,
        sum_closure=tuple(closure),
        differences=tuple(differences),
    )


def _product(K: FieldDescriptor, values) -> FieldElement:
    out = K.one()
    for v in values:
        out = out * v
    return out


def verify_closure(
    c: CurveData, recipe: ClosureRecipe, cap: int = DEFAULT_MAP_CAP
) -> dict:
    """Check the recipe end to end by full map enumeration.

    Reports, per k, whether t_k lies in the closure and is fixed by every
    arithmetic map, plus the three intermediate claims: maps restrict to
    the identity on W(m)'s image, send abscissas into the abscissa set, and
    are injective on it.
    """
    maps = enumerate_arithmetic_maps(
        Neighbourhood(c.field, recipe.elements, 0), cap=cap
    )
    u = c.abscissas
    in_p = set(u)
    identity_on_w = all(f(a) == a for f in maps for a in recipe.w_image)
    into_p = all(f(uk) in in_p for f in maps for uk in u)
    injective = all(len({f(uk) for uk in u}) == len(u) for f in maps)
    per_k = []
    for k in range(1, c.n + 1):
        t = recipe.targets[k - 1]
        present = t in recipe.elements
        fixed = present and all(f(t) == t for f in maps)
        per_k.append(
            {
                "k": k,
                "target": element_str(t),
                "in_closure": present,
                "is_neighbourhood": fixed,
            }
        )
    return {
        "mode": recipe.mode,
        "size": len(recipe.elements),
        "maps": len(maps),
        "identity_on_w_image": identity_on_w,
        "abscissas_into_abscissas": into_p,
        "injective_on_abscissas": injective,
        "per_k": per_k,
    }


def symmetric_value_formula(g: Term, n: int, k: int) -> Formula:
    """exists u1 s1 ... un sn: each (u_i, s_i) on the curve, abscissas
    pairwise distinct, and v = t_k(u_1,...,u_n)."""
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    us = [Term.variable(f"u{i}") for i in range(1, n + 1)]
    ss = [Term.variable(f"s{i}") for i in range(1, n + 1)]
    parts = [
        Equal(g.substitute({"x": us[i], "y": ss[i]}), Term.zero()) for i in range(n)
    ]
    parts += [
        Not(Equal(us[i], us[j])) for i in range(n) for j in range(i + 1, n)
    ]
    sym = Term.zero()
    for combo in combinations(range(n), k):
        part = Term.constant(1)
        for i in combo:
            part = part * us[i]
        sym = sym + part
    parts.append(Equal(Term.variable("v"), sym))
    f: Formula = conj(parts)
    for i in range(n, 0, -1):
        f = Exists(f"u{i}", Exists(f"s{i}", f))
    return f
