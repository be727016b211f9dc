"""Compilation of existential ring formulas into systems of three-address
atoms x_i+x_j=x_k, x_i*x_j=x_k, x_i=1.

Pipeline: desugar -> hoist existentials (renaming on clash) -> DNF ->
negation elimination (each W != 0 becomes W*t-1 = 0 with a fresh t) ->
atomization (each polynomial equation becomes a conjunction of
three-address atoms over fresh temporaries). Fresh variables are named
"_t<n>" from a single counter per run, so output is reproducible.

Atomization walks each equation's monomial summands in ascending degree
order, accumulating a running sum; constants expand as 1+1+...+1 chains
and monomials as left-folded products, with already-built values reused
within a system. Only integer coefficients are accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import CapExceededError, InfiniteFieldError, NormalizationError
from .fields import FieldDescriptor, FieldElement, enumerate_elements
from .formulas import (
    And,
    Equal,
    Exists,
    ForAll,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    PredicateApp,
    all_variables,
    conj,
    desugar,
    disj,
    free_variables,
    substitute_terms,
)
from .terms import Monomial, Term

DEFAULT_DNF_CAP = 10_000


@dataclass(frozen=True)
class Plus:
    i: int
    j: int
    k: int


@dataclass(frozen=True)
class Times:
    i: int
    j: int
    k: int


@dataclass(frozen=True)
class One:
    i: int


ThreeAddressAtom = Union[Plus, Times, One]


@dataclass(frozen=True)
class ConstraintSystem:
    variables: tuple[str, ...]
    atoms: tuple[ThreeAddressAtom, ...]
    free_index: int

    def __post_init__(self):
        n = len(self.variables)
        if not 0 <= self.free_index < n:
            raise NormalizationError("distinguished variable missing from table")
        for a in self.atoms:
            if any(not 0 <= i < n for i in _atom_indices(a)):
                raise NormalizationError(f"atom {a} indexes outside the variable table")

    @property
    def free_var(self) -> str:
        return self.variables[self.free_index]

    def atom_text(self, a: ThreeAddressAtom) -> str:
        v = self.variables
        if isinstance(a, Plus):
            return f"{v[a.i]} + {v[a.j]} = {v[a.k]}"
        if isinstance(a, Times):
            return f"{v[a.i]} * {v[a.j]} = {v[a.k]}"
        return f"{v[a.i]} = 1"

    def to_text(self) -> str:
        lines = ["  vars: " + ", ".join(self.variables)]
        lines += [f"  {self.atom_text(a)}" for a in self.atoms]
        return "\n".join(lines)


@dataclass(frozen=True)
class NormalizedFormula:
    systems: tuple[ConstraintSystem, ...]
    free_var: str

    def __post_init__(self):
        if not self.systems:
            raise NormalizationError("no disjuncts")
        for s in self.systems:
            if s.free_var != self.free_var:
                raise NormalizationError("disjuncts disagree on the free variable")

    def to_text(self) -> str:
        lines = [f"free: {self.free_var}"]
        for s in self.systems:
            lines.append("system:")
            lines.append(s.to_text())
        return "\n".join(lines)


def _atom_indices(a: ThreeAddressAtom) -> tuple[int, ...]:
    if isinstance(a, One):
        return (a.i,)
    return (a.i, a.j, a.k)


# -- fresh names ---------------------------------------------------------------


class _FreshNames:
    def __init__(self, used: set[str]):
        self.used = set(used)
        self.n = 0

    def __call__(self) -> str:
        while True:
            self.n += 1
            name = f"_t{self.n}"
            if name not in self.used:
                self.used.add(name)
                return name


# -- DNF -----------------------------------------------------------------------


def _nnf(f: Formula) -> Formula:
    if isinstance(f, (Equal, PredicateApp)):
        return f
    if isinstance(f, Not):
        b = f.body
        if isinstance(b, (Equal, PredicateApp)):
            return f
        if isinstance(b, Not):
            return _nnf(b.body)
        if isinstance(b, And):
            return Or(tuple(_nnf(Not(p)) for p in b.parts))
        if isinstance(b, Or):
            return And(tuple(_nnf(Not(p)) for p in b.parts))
        raise NormalizationError(f"cannot push negation through {type(b).__name__}")
    if isinstance(f, And):
        return And(tuple(_nnf(p) for p in f.parts))
    if isinstance(f, Or):
        return Or(tuple(_nnf(p) for p in f.parts))
    if isinstance(f, (Exists, ForAll)):
        raise NormalizationError("quantifier inside the propositional pipeline")
    raise NormalizationError(f"unsupported node {type(f).__name__}")


def _distribute(f: Formula, cap: int) -> list[list[Formula]]:
    if isinstance(f, Or):
        out: list[list[Formula]] = []
        for p in f.parts:
            out.extend(_distribute(p, cap))
            _check_cap(out, cap)
        return out
    if isinstance(f, And):
        out = [[]]
        for p in f.parts:
            branches = _distribute(p, cap)
            out = [d + b for d in out for b in branches]
            _check_cap(out, cap)
        return out
    return [[f]]


def _check_cap(disjuncts: list[list[Formula]], cap: int):
    total = sum(len(d) for d in disjuncts)
    if total > cap:
        raise CapExceededError(f"DNF size {total} exceeds cap {cap}")


def to_dnf(f: Formula, cap: int = DEFAULT_DNF_CAP) -> Formula:
    """Disjunctive normal form of a quantifier-free formula (Implies/Iff
    are desugared on the way in)."""
    disjuncts = _distribute(_nnf(desugar(f)), cap)
    return disj([conj(d) for d in disjuncts])


# -- Rabinowitsch negation elimination ------------------------------------------


def _literals(d: Formula) -> list[Formula]:
    if isinstance(d, And):
        out: list[Formula] = []
        for p in d.parts:
            out.extend(_literals(p))
        return out
    return [d]


def _eliminate(literals: Iterable[Formula], fresh: _FreshNames) -> tuple[list[Equal], int]:
    eqs: list[Equal] = []
    count = 0
    for lit in literals:
        if isinstance(lit, Equal):
            eqs.append(lit)
        elif isinstance(lit, Not) and isinstance(lit.body, Equal):
            w = lit.body.lhs - lit.body.rhs
            t = Term.variable(fresh())
            eqs.append(Equal(w * t - 1, Term.zero()))
            count += 1
        else:
            raise NormalizationError(
                f"literal {type(lit).__name__} is not a ring (in)equation"
            )
    return eqs, count


def eliminate_negations(d: Formula) -> tuple[Formula, int]:
    """Replace every negated equation W != 0 in a conjunction of literals
    by W*t - 1 = 0 with a fresh variable t. Returns the rewritten
    conjunction and the number of fresh variables introduced."""
    fresh = _FreshNames(all_variables(d))
    eqs, count = _eliminate(_literals(d), fresh)
    return conj(eqs) if eqs else d, count


# -- atomization -----------------------------------------------------------------


def _bare_var(t: Term) -> str | None:
    if len(t.coeffs) == 1:
        m, c = t.coeffs[0]
        if c == 1 and len(m) == 1 and m[0][1] == 1:
            return m[0][0]
    return None


def _plus_shape(t: Term) -> tuple[str, str] | None:
    entries = t.coeffs
    if len(entries) == 2:
        (m1, c1), (m2, c2) = entries
        if (
            c1 == 1
            and c2 == 1
            and len(m1) == 1
            and len(m2) == 1
            and m1[0][1] == 1
            and m2[0][1] == 1
        ):
            return m1[0][0], m2[0][0]
    if len(entries) == 1:
        m, c = entries[0]
        if c == 2 and len(m) == 1 and m[0][1] == 1:
            return m[0][0], m[0][0]
    return None


def _times_shape(t: Term) -> tuple[str, str] | None:
    if len(t.coeffs) != 1:
        return None
    m, c = t.coeffs[0]
    if c != 1:
        return None
    if len(m) == 2 and m[0][1] == 1 and m[1][1] == 1:
        return m[0][0], m[1][0]
    if len(m) == 1 and m[0][1] == 2:
        return m[0][0], m[0][0]
    return None


class _Builder:
    """Accumulates one ConstraintSystem: variable table, atoms, caches."""

    def __init__(self, fresh: _FreshNames, free_var: str | None):
        self.names: list[str] = []
        self.index: dict[str, int] = {}
        self.atoms: list[ThreeAddressAtom] = []
        self.fresh = fresh
        self.const_cache: dict[int, int] = {}
        self.mono_cache: dict[Monomial, int] = {}
        self.zero_idx: int | None = None
        if free_var is not None:
            self.ensure(free_var)

    def ensure(self, name: str) -> int:
        if name not in self.index:
            self.index[name] = len(self.names)
            self.names.append(name)
        return self.index[name]

    def temp(self) -> int:
        return self.ensure(self.fresh())

    def emit(self, atom: ThreeAddressAtom):
        self.atoms.append(atom)

    def zero_var(self) -> int:
        if self.zero_idx is None:
            v = self.temp()
            self.emit(Plus(v, v, v))
            self.zero_idx = v
        return self.zero_idx

    def one_var(self) -> int:
        if 1 not in self.const_cache:
            v = self.temp()
            self.emit(One(v))
            self.const_cache[1] = v
        return self.const_cache[1]

    def equate(self, i: int, j: int):
        if i != j:
            self.emit(Plus(i, self.zero_var(), j))

    def const_value(self, c: int, target: int | None = None) -> int:
        # value c >= 1, built as a 1+1+...+1 chain with cached prefixes
        if c == 1:
            if target is None:
                return self.one_var()
            self.emit(One(target))
            return target
        one = self.one_var()
        cur = one
        for i in range(2, c + 1):
            if i in self.const_cache and not (target is not None and i == c):
                cur = self.const_cache[i]
                continue
            dest = target if (target is not None and i == c) else self.temp()
            self.emit(Plus(cur, one, dest))
            if target is None or i < c:
                self.const_cache.setdefault(i, dest)
            cur = dest
        return cur

    def mono_value(self, m: Monomial, target: int | None = None) -> int:
        # product of the monomial's variable factors, left-folded
        if target is None and m in self.mono_cache:
            return self.mono_cache[m]
        factors = [v for v, e in m for _ in range(e)]
        if len(factors) == 1:
            idx = self.ensure(factors[0])
            if target is not None:
                self.equate(idx, target)
                return target
            return idx
        cur = self.ensure(factors[0])
        for pos, name in enumerate(factors[1:], start=2):
            last = pos == len(factors)
            dest = target if (target is not None and last) else self.temp()
            self.emit(Times(cur, self.ensure(name), dest))
            cur = dest
        if target is None:
            self.mono_cache[m] = cur
        return cur

    def term_value(self, m: Monomial, c: int, target: int | None = None) -> int:
        # value of the summand c * m, c >= 1
        if m == ():
            return self.const_value(c, target)
        if c == 1:
            return self.mono_value(m, target)
        w = self.mono_value(m)
        cur = w
        for i in range(2, c + 1):
            dest = target if (target is not None and i == c) else self.temp()
            self.emit(Plus(cur, w, dest))
            cur = dest
        return cur

    def side_value(self, terms: list[tuple[Monomial, int]], target: int | None = None) -> int:
        # running sum over the summands, in the order given
        if len(terms) == 1:
            m, c = terms[0]
            return self.term_value(m, c, target)
        cur = self.term_value(*terms[0])
        for pos, (m, c) in enumerate(terms[1:], start=2):
            v = self.term_value(m, c)
            last = pos == len(terms)
            dest = target if (target is not None and last) else self.temp()
            self.emit(Plus(cur, v, dest))
            cur = dest
        return cur

    def assert_zero(self, i: int):
        self.emit(Plus(i, i, i))

    def equation(self, lhs: Term, rhs: Term):
        for a, b in ((lhs, rhs), (rhs, lhs)):
            vb = _bare_var(b)
            if vb is not None:
                shape = _plus_shape(a)
                if shape is not None:
                    self.emit(Plus(self.ensure(shape[0]), self.ensure(shape[1]), self.ensure(vb)))
                    return
                shape = _times_shape(a)
                if shape is not None:
                    self.emit(
                        Times(self.ensure(shape[0]), self.ensure(shape[1]), self.ensure(vb))
                    )
                    return
            va = _bare_var(a)
            if va is not None and b == Term.constant(1):
                self.emit(One(self.ensure(va)))
                return
            if va is not None and b.is_zero:
                self.assert_zero(self.ensure(va))
                return
        p = lhs - rhs
        if p.is_zero:
            return
        if any(not isinstance(c, int) for _, c in p.coeffs):
            raise NormalizationError("rational coefficients are not atomizable; scale first")
        ascending = list(reversed(p.coeffs))
        pos = [(m, c) for m, c in ascending if c > 0]
        neg = [(m, -c) for m, c in ascending if c < 0]
        if not neg:
            self.assert_zero(self.side_value(pos))
            return
        if not pos:
            self.assert_zero(self.side_value(neg))
            return
        bpos = pos[0][0][0][0] if _is_bare_side(pos) else None
        bneg = neg[0][0][0][0] if _is_bare_side(neg) else None
        if bpos is not None and bneg is not None:
            self.equate(self.ensure(bpos), self.ensure(bneg))
            return
        if bneg is not None:
            self.side_value(pos, target=self.ensure(bneg))
            return
        if bpos is not None:
            self.side_value(neg, target=self.ensure(bpos))
            return
        if neg == [((), 1)]:
            self.emit(One(self.side_value(pos)))
            return
        if pos == [((), 1)]:
            self.emit(One(self.side_value(neg)))
            return
        a = self.side_value(pos)
        self.side_value(neg, target=a)

    def finish(self, free_var: str) -> ConstraintSystem:
        idx = self.ensure(free_var)
        return ConstraintSystem(tuple(self.names), tuple(self.atoms), idx)


def _is_bare_side(terms: list[tuple[Monomial, int]]) -> bool:
    if len(terms) != 1:
        return False
    m, c = terms[0]
    return c == 1 and len(m) == 1 and m[0][1] == 1


def atomize(c: Formula | Iterable[Equal], free_var: str | None = None) -> ConstraintSystem:
    """Rewrite a negation-free conjunction of polynomial equations into a
    system of three-address atoms over fresh temporaries."""
    if isinstance(c, (And, Equal, Not, Or, Implies, Iff, Exists, ForAll, PredicateApp)):
        literals = _literals(c)
    else:
        literals = list(c)
    used: set[str] = set()
    for lit in literals:
        if not isinstance(lit, Equal):
            raise NormalizationError("atomize expects a conjunction of equations")
        used |= lit.lhs.free_variables() | lit.rhs.free_variables()
    fresh = _FreshNames(used | ({free_var} if free_var else set()))
    builder = _Builder(fresh, free_var)
    for lit in literals:
        builder.equation(lit.lhs, lit.rhs)
    if free_var is None:
        if not builder.names:
            raise NormalizationError("no variables in system")
        free_var = builder.names[0]
    return builder.finish(free_var)


# -- existential hoisting ----------------------------------------------------------


def _hoist(f: Formula, fresh: _FreshNames, claimed: set[str]) -> tuple[list[str], Formula]:
    # `claimed` holds the free variable plus every binder name already
    # hoisted; a clashing binder is renamed before its scope dissolves.
    if isinstance(f, (Equal, PredicateApp)):
        return [], f
    if isinstance(f, Exists):
        var, body = f.var, f.body
        if var in claimed:
            renamed = fresh()
            body = substitute_terms(body, {var: Term.variable(renamed)})
            var = renamed
        claimed.add(var)
        prefix, matrix = _hoist(body, fresh, claimed)
        return [var] + prefix, matrix
    if isinstance(f, ForAll):
        raise NormalizationError("universal quantifier is outside the existential fragment")
    if isinstance(f, (And, Or)):
        prefix: list[str] = []
        matrices = []
        for p in f.parts:
            sub_prefix, m = _hoist(p, fresh, claimed)
            prefix.extend(sub_prefix)
            matrices.append(m)
        node = And if isinstance(f, And) else Or
        return prefix, node(tuple(matrices))
    if isinstance(f, Not):
        sub_prefix, m = _hoist(f.body, fresh, claimed)
        if sub_prefix:
            raise NormalizationError("negation over a quantifier is not reducible")
        return [], Not(m)
    raise NormalizationError(f"unsupported node {type(f).__name__} during hoisting")


def normalize(f: Formula, cap: int = DEFAULT_DNF_CAP) -> NormalizedFormula:
    """Full pipeline: existential formula with one free variable ->
    disjunction of three-address constraint systems with the same
    definable set over every finite field."""
    return normalize_with_stats(f, cap)[0]


def normalize_with_stats(
    f: Formula, cap: int = DEFAULT_DNF_CAP
) -> tuple[NormalizedFormula, int]:
    """normalize together with the number of negations eliminated, which
    equals the number of inversion witnesses introduced."""
    fvs = free_variables(f)
    if len(fvs) != 1:
        raise NormalizationError(f"expected exactly one free variable, found {sorted(fvs)}")
    free_var = fvs.pop()
    fresh = _FreshNames(all_variables(f))
    _, matrix = _hoist(desugar(f), fresh, {free_var})
    disjuncts = _distribute(_nnf(matrix), cap)
    systems = []
    negations = 0
    for d in disjuncts:
        eqs, count = _eliminate(d, fresh)
        negations += count
        builder = _Builder(fresh, free_var)
        for eq in eqs:
            builder.equation(eq.lhs, eq.rhs)
        systems.append(builder.finish(free_var))
    return NormalizedFormula(tuple(systems), free_var), negations


# -- brute-force system solving -------------------------------------------------------


def solve_system(s: ConstraintSystem, K: FieldDescriptor) -> list[dict[str, FieldElement]]:
    """All satisfying assignments, by backtracking over the variable table
    in order with forward propagation of forced values. Deterministic."""
    if not K.is_finite:
        raise InfiniteFieldError("system solving needs a finite field")
    elems = enumerate_elements(K)
    one = K.one()
    zero = K.zero()
    n = len(s.variables)
    vals: list[FieldElement | None] = [None] * n
    incidence: list[list[ThreeAddressAtom]] = [[] for _ in range(n)]
    for a in s.atoms:
        for i in set(_atom_indices(a)):
            incidence[i].append(a)
    trail: list[int] = []
    solutions: list[dict[str, FieldElement]] = []

    def assign(i: int, v: FieldElement) -> bool:
        if vals[i] is not None:
            return vals[i] == v
        vals[i] = v
        trail.append(i)
        queue.append(i)
        return True

    def check_atom(a: ThreeAddressAtom) -> bool:
        if isinstance(a, One):
            return assign(a.i, one)
        vi, vj, vk = vals[a.i], vals[a.j], vals[a.k]
        if isinstance(a, Plus):
            if vi is not None and vj is not None:
                return assign(a.k, vi + vj)
            if vi is not None and vk is not None:
                return assign(a.j, vk - vi)
            if vj is not None and vk is not None:
                return assign(a.i, vk - vj)
            return True
        # Times
        if vi is not None and vj is not None:
            return assign(a.k, vi * vj)
        if vi is not None and vk is not None:
            if vi == zero:
                return vk == zero  # 0 * j = 0 leaves j free
            return assign(a.j, vk / vi)
        if vj is not None and vk is not None:
            if vj == zero:
                return vk == zero
            return assign(a.i, vk / vj)
        return True

    queue: list[int] = []

    def propagate() -> bool:
        while queue:
            i = queue.pop()
            for a in incidence[i]:
                if not check_atom(a):
                    return False
        return True

    def undo(mark: int):
        while len(trail) > mark:
            vals[trail.pop()] = None
        queue.clear()

    def search():
        for i in range(n):
            if vals[i] is None:
                for v in elems:
                    mark = len(trail)
                    if assign(i, v) and propagate():
                        search()
                    undo(mark)
                return
        solutions.append({s.variables[i]: vals[i] for i in range(n)})

    # initial propagation from One atoms and anything already forced
    mark0 = len(trail)
    ok = True
    for a in s.atoms:
        if not check_atom(a):
            ok = False
            break
    if ok and propagate():
        search()
    undo(mark0)
    return solutions


def normalized_definable_set(nf: NormalizedFormula, K: FieldDescriptor) -> set[FieldElement]:
    """Union over disjuncts of the projection of solve_system to the free
    variable."""
    out: set[FieldElement] = set()
    for s in nf.systems:
        for assignment in solve_system(s, K):
            out.add(assignment[nf.free_var])
    return out
