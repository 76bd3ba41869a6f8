"""Buchberger-based Groebner engine over Q and odd prime fields.

Everything runs in graded reverse lexicographic order.  The completion
uses normal pair selection (smallest lcm first) with the coprimality and
chain criteria; over Q every intermediate polynomial is stripped to
integer content to keep coefficients bounded.  All computations are
budgeted: exceeding the cap raises BudgetExceeded rather than returning
a possibly-wrong answer.

On top of the engine: Krull dimension of homogeneous ideals via maximal
independent variable sets modulo the leading-term ideal, regular-sequence
verification by expected-codimension checks on every prefix, and the
Jacobian smoothness certificate for projective complete intersections.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

from .fields import QQ, Field
from .poly import SparsePoly, grevlex_key, jacobian


class IdealError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    """Raised when the computation budget runs out; never a wrong answer."""


DEFAULT_MAX_STEPS = 2_000_000
DEFAULT_MAX_BASIS = 4_000


class Budget:
    """Cap on total reduction steps and on basis size."""

    __slots__ = ("max_steps", "max_basis", "steps")

    def __init__(self, max_steps: int = DEFAULT_MAX_STEPS, max_basis: int = DEFAULT_MAX_BASIS):
        if max_steps <= 0 or max_basis <= 0:
            raise IdealError("budget caps must be positive")
        self.max_steps = max_steps
        self.max_basis = max_basis
        self.steps = 0

    def step(self, n: int = 1):
        self.steps += n
        if self.steps > self.max_steps:
            raise BudgetExceeded(
                f"budget exceeded: more than {self.max_steps} reduction steps"
            )

    def check_basis(self, size: int):
        if size > self.max_basis:
            raise BudgetExceeded(f"budget exceeded: basis grew past {self.max_basis}")


@dataclass(frozen=True)
class Ideal:
    field: Field
    nvars: int
    gens: tuple

    def __init__(self, field: Field, nvars: int, gens: Iterable[SparsePoly]):
        kept = []
        for g in gens:
            if g.field != field or g.nvars != nvars:
                raise IdealError("generator does not live in the stated ring")
            if not g.is_zero():
                kept.append(g)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "gens", tuple(kept))


@dataclass(frozen=True)
class GroebnerBasis:
    field: Field
    nvars: int
    basis: tuple
    order: str = "degrevlex"


# -- monomial helpers -------------------------------------------------


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _mono_lcm(a: tuple, b: tuple) -> tuple:
    return tuple(max(x, y) for x, y in zip(a, b))


def _heap_key(exp: tuple):
    # negated grevlex key: the min-heap then pops the grevlex-largest monomial
    return (-sum(exp), tuple(reversed(exp)))


class _Elt:
    __slots__ = ("lm", "lc", "deg", "terms")

    def __init__(self, terms: dict):
        self.terms = terms
        self.lm = next(iter(terms))
        self.lc = terms[self.lm]
        self.deg = sum(self.lm)


def _sorted_terms(terms: dict) -> dict:
    return dict(sorted(terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True))


def _strip_content(F: Field, terms: dict) -> dict:
    """Normalize a nonzero term dict: primitive integer form over Q, monic over F_p."""
    lead = next(iter(terms))
    if F is QQ or F.char == 0:
        den = 1
        for c in terms.values():
            den = den * c.denominator // gcd(den, c.denominator)
        num = 0
        for c in terms.values():
            num = gcd(num, c.numerator * (den // c.denominator))
        scale = Fraction(den, num)
        if terms[lead] < 0:
            scale = -scale
        return {e: c * scale for e, c in terms.items()}
    inv = F.inv(terms[lead])
    return {e: F.mul(c, inv) for e, c in terms.items()}


def _normal_form(F: Field, terms: dict, basis: list[_Elt], budget: Budget) -> dict:
    """Full normal form of the term dict against the basis (grevlex-sorted)."""
    work = dict(terms)
    heap = [(_heap_key(e), e) for e in work]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, exp = heapq.heappop(heap)
        c = work.get(exp)
        if c is None:
            continue
        dexp = sum(exp)
        red = None
        for b in basis:
            if b.deg <= dexp and _divides(b.lm, exp):
                red = b
                break
        if red is None:
            rem[exp] = c
            del work[exp]
            continue
        budget.step()
        shift = tuple(x - a for x, a in zip(exp, red.lm))
        factor = F.div(c, red.lc)
        for e2, c2 in red.terms.items():
            tgt = tuple(s + t for s, t in zip(shift, e2))
            cur = work.get(tgt)
            if cur is None:
                nv = F.neg(F.mul(factor, c2))
                if not F.is_zero(nv):
                    work[tgt] = nv
                    heapq.heappush(heap, (_heap_key(tgt), tgt))
            else:
                nv = F.sub(cur, F.mul(factor, c2))
                if F.is_zero(nv):
                    del work[tgt]
                else:
                    work[tgt] = nv
    return _sorted_terms(rem)


def _s_poly_terms(F: Field, f: _Elt, g: _Elt) -> dict:
    lcm = _mono_lcm(f.lm, g.lm)
    sf = tuple(x - a for x, a in zip(lcm, f.lm))
    sg = tuple(x - a for x, a in zip(lcm, g.lm))
    out: dict = {}
    for e, c in f.terms.items():
        tgt = tuple(s + t for s, t in zip(sf, e))
        out[tgt] = F.div(c, f.lc)
    for e, c in g.terms.items():
        tgt = tuple(s + t for s, t in zip(sg, e))
        cur = out.get(tgt, F.zero)
        nv = F.sub(cur, F.div(c, g.lc))
        if F.is_zero(nv):
            out.pop(tgt, None)
        else:
            out[tgt] = nv
    return out


class _Completion:
    """Incremental Buchberger state: a growing basis plus its pair queue.

    The state can be paused and resumed: callers may stop processing as
    soon as the leading terms collected so far certify what they need
    (dimension bounds are monotone in the leading-term ideal), add more
    generators, and continue later.  Conclusions that need the full
    Groebner basis must drain the queue first (run without a stop
    condition).
    """

    def __init__(self, F: Field, budget: Budget):
        self.F = F
        self.budget = budget
        self.G: list[_Elt] = []
        self.pairs: list = []
        self.pending: set = set()

    def _add_elt(self, terms: dict):
        elt = _Elt(_sorted_terms(_strip_content(self.F, terms)))
        i = len(self.G)
        self.G.append(elt)
        self.budget.check_basis(len(self.G))
        for j in range(i):
            key = (grevlex_key(_mono_lcm(self.G[j].lm, elt.lm)), j, i)
            heapq.heappush(self.pairs, key)
            self.pending.add((j, i))

    def add_generator(self, terms: dict) -> bool:
        """Reduce a generator against the current basis and adjoin it if nonzero."""
        red = _normal_form(self.F, terms, self.G, self.budget)
        if red:
            self._add_elt(red)
            return True
        return False

    def run(self, stop_when=None) -> bool:
        """Process pairs; returns True if stop_when fired before the queue drained."""
        if stop_when is not None and stop_when(self.G):
            return True
        G, pending = self.G, self.pending
        while self.pairs:
            _, i, j = heapq.heappop(self.pairs)
            if (i, j) not in pending:
                continue
            pending.discard((i, j))
            lmi, lmj = G[i].lm, G[j].lm
            if all(a == 0 or b == 0 for a, b in zip(lmi, lmj)):
                continue  # coprime leading terms: S-polynomial reduces to zero
            lcm = _mono_lcm(lmi, lmj)
            skip = False
            for k in range(len(G)):
                if k in (i, j) or not _divides(G[k].lm, lcm):
                    continue
                a = (i, k) if i < k else (k, i)
                b = (j, k) if j < k else (k, j)
                if a not in pending and b not in pending:
                    skip = True
                    break
            if skip:
                continue
            self.budget.step()
            red = _normal_form(self.F, _s_poly_terms(self.F, G[i], G[j]), G, self.budget)
            if red:
                self._add_elt(red)
                if stop_when is not None and stop_when(G):
                    return True
        return False


def _complete(F: Field, gens: Sequence[dict], budget: Budget) -> list[_Elt]:
    """Full Buchberger completion of the given generators."""
    state = _Completion(F, budget)
    for terms in gens:
        state.add_generator(terms)
    state.run()
    return state.G


def _reduce_basis(F: Field, G: list[_Elt], budget: Budget) -> list[_Elt]:
    """Minimalize and auto-reduce; leading coefficients normalized to 1."""
    order = sorted(range(len(G)), key=lambda i: grevlex_key(G[i].lm))
    kept: list[_Elt] = []
    for i in order:
        if any(_divides(e.lm, G[i].lm) for e in kept):
            continue
        kept.append(G[i])
    changed = True
    while changed:
        changed = False
        for i in range(len(kept)):
            others = kept[:i] + kept[i + 1 :]
            red = _normal_form(F, kept[i].terms, others, budget)
            if not red:
                kept.pop(i)
                changed = True
                break
            if red != kept[i].terms:
                kept[i] = _Elt(red)
                changed = True
    final = []
    for e in sorted(kept, key=lambda e: grevlex_key(e.lm), reverse=True):
        inv = F.inv(e.lc)
        final.append(_Elt({m: F.mul(c, inv) for m, c in e.terms.items()}))
    return final


def groebner(I: Ideal, budget: Budget | None = None) -> GroebnerBasis:
    """Reduced Groebner basis in degrevlex; deterministic for fixed input order."""
    budget = budget or Budget()
    F = I.field
    G = _complete(F, [g.terms for g in I.gens], budget)
    G = _reduce_basis(F, G, budget)
    basis = tuple(SparsePoly._raw(F, I.nvars, dict(e.terms)) for e in G)
    return GroebnerBasis(field=F, nvars=I.nvars, basis=basis)


def reduce_poly(f: SparsePoly, basis: Sequence[SparsePoly], budget: Budget | None = None) -> SparsePoly:
    """Normal form of f modulo the given polynomials (used as reducers as-is)."""
    budget = budget or Budget()
    elts = [_Elt(dict(g.terms)) for g in basis if not g.is_zero()]
    red = _normal_form(f.field, dict(f.terms), elts, budget)
    return SparsePoly._raw(f.field, f.nvars, red)


def s_polynomial(f: SparsePoly, g: SparsePoly) -> SparsePoly:
    f._check_ring(g)
    if f.is_zero() or g.is_zero():
        raise IdealError("S-polynomial of a zero polynomial")
    terms = _s_poly_terms(f.field, _Elt(dict(f.terms)), _Elt(dict(g.terms)))
    return SparsePoly(f.field, f.nvars, terms)


# -- dimension --------------------------------------------------------


def _min_hitting_set(supports: list[frozenset]) -> int:
    """Size of the smallest variable set meeting every support (exact)."""
    sups = sorted(supports, key=lambda s: (len(s), sorted(s)))
    minimal = []
    for s in sups:
        if not any(m <= s for m in minimal):
            minimal.append(s)
    all_vars = sorted(set().union(*minimal)) if minimal else []
    best = len(all_vars)

    def bt(remaining: list[frozenset], chosen: int):
        nonlocal best
        if chosen >= best:
            return
        if not remaining:
            best = chosen
            return
        target = min(remaining, key=lambda s: (len(s), sorted(s)))
        for v in sorted(target):
            bt([s for s in remaining if v not in s], chosen + 1)

    bt(minimal, 0)
    return best


def _dim_from_elements(G: list[_Elt], nvars: int) -> int:
    for e in G:
        if e.deg == 0:
            return -1
    supports = [frozenset(i for i, x in enumerate(e.lm) if x) for e in G]
    if not supports:
        return nvars
    return nvars - _min_hitting_set(supports)


def krull_dim(I: Ideal, budget: Budget | None = None) -> int:
    """Dimension of the affine cone V(I) for a homogeneous ideal.

    Computed as the maximal number of variables independent modulo the
    leading-term ideal of a Groebner basis.  The unit ideal (empty cone)
    gives -1; any proper homogeneous ideal gives >= 0 since its cone
    contains the origin.
    """
    for g in I.gens:
        if not g.is_homogeneous():
            raise IdealError("krull_dim requires homogeneous generators")
    budget = budget or Budget()
    G = _complete(I.field, [g.terms for g in I.gens], budget)
    return _dim_from_elements(G, I.nvars)


def dim_at_most(I: Ideal, bound: int, budget: Budget | None = None) -> bool:
    """Decide krull_dim(I) <= bound, stopping early once it is certain.

    Leading terms of a partial basis generate a subideal of the full
    leading-term ideal, so the dimension they imply only shrinks as the
    computation proceeds; the moment it reaches the bound the answer is
    settled without finishing the basis.
    """
    for g in I.gens:
        if not g.is_homogeneous():
            raise IdealError("dimension bounds require homogeneous generators")
    budget = budget or Budget()
    state = _Completion(I.field, budget)
    for g in I.gens:
        state.add_generator(g.terms)
    stopped = state.run(stop_when=lambda G: _dim_from_elements(G, I.nvars) <= bound)
    if stopped:
        return True
    return _dim_from_elements(state.G, I.nvars) <= bound


@dataclass(frozen=True)
class RegSeqVerdict:
    is_regular: bool
    failing_index: int | None = None  # 1-based position in the sequence
    reason: str = ""

    def __bool__(self):
        return self.is_regular


def is_regular_sequence(fs: Sequence[SparsePoly], budget: Budget | None = None) -> RegSeqVerdict:
    """Regularity of a sequence of homogeneous forms of positive degree.

    Checked prefix by prefix: f_1..f_d is regular at the origin iff the
    cone V(f_1..f_d) has the expected dimension n - d.  A zero polynomial
    fails at its own index (it divides nothing).  The Groebner basis is
    grown incrementally, one generator at a time.
    """
    if not fs:
        return RegSeqVerdict(True)
    budget = budget or Budget()
    F = fs[0].field
    n = fs[0].nvars
    state = _Completion(F, budget)
    for d, f in enumerate(fs, start=1):
        if f.is_zero():
            return RegSeqVerdict(False, d, "zero polynomial in the sequence")
        fs[0]._check_ring(f)
        if not f.is_homogeneous() or f.total_degree() < 1:
            raise IdealError(f"sequence entry {d} is not homogeneous of positive degree")
        state.add_generator(f.terms)
        # the prefix dimension is always >= n - d (height theorem), so a
        # partial-basis certificate of <= n - d settles equality early
        target = n - d
        stopped = state.run(stop_when=lambda G: _dim_from_elements(G, n) <= target)
        if not stopped:
            dim = _dim_from_elements(state.G, n)
            if dim != target:
                return RegSeqVerdict(
                    False, d, f"prefix of length {d} has dimension {dim}, expected {target}"
                )
    return RegSeqVerdict(True)


def projective_empty(I: Ideal, budget: Budget | None = None) -> bool:
    """True iff the projective zero set is empty (cone at most the origin)."""
    return dim_at_most(I, 0, budget)


@dataclass(frozen=True)
class CIReport:
    correct_codim: bool
    smooth: bool

    @property
    def ok(self) -> bool:
        return self.correct_codim and self.smooth


def poly_det(mat: list[list[SparsePoly]]) -> SparsePoly:
    """Cofactor-expansion determinant of a small polynomial matrix."""
    k = len(mat)
    if k == 0:
        raise IdealError("determinant of an empty matrix")
    if k == 1:
        return mat[0][0]
    f0 = mat[0][0]
    total = SparsePoly.zero(f0.field, f0.nvars)
    for j in range(k):
        if mat[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
        term = mat[0][j] * poly_det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def smooth_complete_intersection(
    fs: Sequence[SparsePoly], budget: Budget | None = None
) -> CIReport:
    """Certify that {fs = 0} is a smooth projective complete intersection.

    correct_codim holds iff the cone has dimension n - k; smooth holds
    iff the ideal generated by fs together with all k x k minors of the
    Jacobian has empty projective zero set.  Both together certify a
    non-singular codimension-k complete intersection.
    """
    if not fs:
        raise IdealError("empty system")
    budget = budget or Budget()
    F = fs[0].field
    n = fs[0].nvars
    k = len(fs)
    if k > n:
        raise IdealError(f"more equations ({k}) than variables ({n})")
    # dim >= n - k holds unconditionally, so dim <= n - k is equality
    correct_codim = dim_at_most(Ideal(F, n, fs), n - k, budget)
    jac = jacobian(list(fs))
    minors = []
    for cols in combinations(range(n), k):
        sub = [[jac[i][j] for j in cols] for i in range(k)]
        m = poly_det(sub)
        if not m.is_zero():
            minors.append(m)
    sing = Ideal(F, n, list(fs) + minors)
    smooth = projective_empty(sing, budget)
    return CIReport(correct_codim=correct_codim, smooth=smooth)


# -- generic symmetric determinantal ideals (cross-check utility) ------


def symmetric_matrix_variables(n: int) -> dict:
    """Index of the variable carrying entry (i, j), i <= j, of a generic symmetric matrix."""
    idx = {}
    k = 0
    for i in range(n):
        for j in range(i, n):
            idx[(i, j)] = k
            k += 1
    return idx


def generic_symmetric_minors(n: int, size: int, field: Field = QQ) -> Ideal:
    """Ideal of all size x size minors of a generic symmetric n x n matrix.

    Lives in n(n+1)/2 variables, one per upper-triangle entry.  Minors
    related by transposing row and column sets coincide and are emitted
    once.
    """
    if not 1 <= size <= n:
        raise IdealError("minor size out of range")
    idx = symmetric_matrix_variables(n)
    nv = n * (n + 1) // 2
    entries = [
        [SparsePoly.variable(field, nv, idx[(min(i, j), max(i, j))]) for j in range(n)]
        for i in range(n)
    ]
    gens = []
    for rows in combinations(range(n), size):
        for cols in combinations(range(n), size):
            if cols < rows:
                continue  # minor(R, C) = minor(C, R) for a symmetric matrix
            sub = [[entries[i][j] for j in cols] for i in rows]
            gens.append(poly_det(sub))
    return Ideal(field, nv, gens)
