"""Sparse multivariate polynomials over an exact field.

A polynomial is a finite map from exponent vectors (tuples of
non-negative ints, one slot per variable) to nonzero coefficients.  Terms
are kept sorted in descending graded-reverse-lexicographic order, so the
first term is always the leading term and iteration order is
deterministic; the zero polynomial has no terms.

The module also provides the linear-geometry helpers the regularity
checks are built on: homogeneous decomposition, translation to a point,
restriction to a linear subspace, Jacobian matrices, and the JSON
interchange format used by the CLI.
"""

from __future__ import annotations

import re
from itertools import combinations_with_replacement
from typing import Iterable, Sequence

from .fields import Field, FieldError, field_from_json

Exponent = tuple  # tuple[int, ...], one entry per variable


class PolyError(ValueError):
    pass


class PolyFormatError(PolyError):
    """Malformed polynomial JSON; the message names the offending field."""


def grevlex_key(exp: Exponent):
    """Sort key realizing degrevlex: bigger key = bigger monomial."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


def _dict_mul(F: Field, a: dict, b: dict) -> dict:
    """Product of raw term dicts (no sorting, zeros removed)."""
    out: dict = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            exp = tuple(x + y for x, y in zip(e1, e2))
            s = F.add(out.get(exp, F.zero), F.mul(c1, c2))
            if F.is_zero(s):
                out.pop(exp, None)
            else:
                out[exp] = s
    return out


class SparsePoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: Field, nvars: int, terms=None):
        if nvars < 0:
            raise PolyError("nvars must be non-negative")
        self.field = field
        self.nvars = nvars
        clean = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(exp)
                if len(exp) != nvars:
                    raise PolyError(
                        f"exponent vector {exp} has length {len(exp)}, expected {nvars}"
                    )
                if any(e < 0 or not isinstance(e, int) for e in exp):
                    raise PolyError(f"exponents must be non-negative ints: {exp}")
                c = field.coerce(c)
                if not field.is_zero(c):
                    clean[exp] = c
        self.terms = dict(
            sorted(clean.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)
        )

    @classmethod
    def _raw(cls, field: Field, nvars: int, sorted_terms: dict) -> "SparsePoly":
        # trusted constructor: terms already coerced, nonzero, grevlex-sorted
        self = object.__new__(cls)
        self.field = field
        self.nvars = nvars
        self.terms = sorted_terms
        return self

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, field: Field, nvars: int) -> "SparsePoly":
        return cls._raw(field, nvars, {})

    @classmethod
    def constant(cls, field: Field, nvars: int, c) -> "SparsePoly":
        c = field.coerce(c)
        if field.is_zero(c):
            return cls.zero(field, nvars)
        return cls._raw(field, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, field: Field, nvars: int, i: int) -> "SparsePoly":
        if not 0 <= i < nvars:
            raise PolyError(f"variable index {i} out of range for nvars={nvars}")
        exp = [0] * nvars
        exp[i] = 1
        return cls._raw(field, nvars, {tuple(exp): field.one})

    # -- basic queries ------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def leading(self):
        """(exponent, coefficient) of the degrevlex-leading term."""
        if not self.terms:
            raise PolyError("zero polynomial has no leading term")
        exp = next(iter(self.terms))
        return exp, self.terms[exp]

    def coefficient(self, exp: Exponent):
        return self.terms.get(tuple(exp), self.field.zero)

    def __eq__(self, other):
        return (
            isinstance(other, SparsePoly)
            and self.field == other.field
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.field, self.nvars, frozenset(self.terms.items())))

    def _check_ring(self, other: "SparsePoly"):
        if not isinstance(other, SparsePoly):
            raise PolyError(f"expected SparsePoly, got {type(other).__name__}")
        if self.field != other.field:
            raise PolyError("coefficient fields differ; refusing to mix domains")
        if self.nvars != other.nvars:
            raise PolyError(f"variable counts differ: {self.nvars} vs {other.nvars}")

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_ring(other)
        F = self.field
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = F.add(out.get(exp, F.zero), c)
            if F.is_zero(s):
                out.pop(exp, None)
            else:
                out[exp] = s
        return SparsePoly._raw(
            F, self.nvars, dict(sorted(out.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True))
        )

    def __neg__(self) -> "SparsePoly":
        F = self.field
        return SparsePoly._raw(F, self.nvars, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other: "SparsePoly") -> "SparsePoly":
        return self + (-other)

    def __mul__(self, other: "SparsePoly") -> "SparsePoly":
        self._check_ring(other)
        F = self.field
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                s = F.add(out.get(exp, F.zero), F.mul(c1, c2))
                if F.is_zero(s):
                    out.pop(exp, None)
                else:
                    out[exp] = s
        return SparsePoly._raw(
            F, self.nvars, dict(sorted(out.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True))
        )

    def scale(self, c) -> "SparsePoly":
        F = self.field
        c = F.coerce(c)
        if F.is_zero(c):
            return SparsePoly.zero(F, self.nvars)
        return SparsePoly._raw(F, self.nvars, {e: F.mul(a, c) for e, a in self.terms.items()})

    def __pow__(self, k: int) -> "SparsePoly":
        if k < 0:
            raise PolyError("negative power")
        out = SparsePoly.constant(self.field, self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    # -- calculus and substitution -------------------------------------

    def partial(self, j: int) -> "SparsePoly":
        """Partial derivative with respect to variable j."""
        if not 0 <= j < self.nvars:
            raise PolyError(f"variable index {j} out of range")
        F = self.field
        out: dict = {}
        for exp, c in self.terms.items():
            e = exp[j]
            if e == 0:
                continue
            newexp = exp[:j] + (e - 1,) + exp[j + 1 :]
            out[newexp] = F.mul(c, F.coerce(e))
        return SparsePoly(F, self.nvars, out)

    def evaluate(self, point: Sequence):
        if len(point) != self.nvars:
            raise PolyError(f"point has {len(point)} coordinates, expected {self.nvars}")
        F = self.field
        pt = [F.coerce(x) for x in point]
        total = F.zero
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    v = F.mul(v, F.pow(x, e))
            total = F.add(total, v)
        return total

    def compose(self, images: Sequence["SparsePoly"]) -> "SparsePoly":
        """Substitute images[i] for variable i; images share one target ring."""
        if len(images) != self.nvars:
            raise PolyError(f"need {self.nvars} substitution images, got {len(images)}")
        if self.nvars == 0:
            return self
        tgt = images[0]
        for im in images:
            tgt._check_ring(im)
        if tgt.field != self.field:
            raise PolyError("substitution images must use the same coefficient field")
        F = self.field
        tn = tgt.nvars
        one = {(0,) * tn: F.one}
        powers: list[list[dict]] = [[one] for _ in images]
        acc: dict = {}
        for exp, c in self.terms.items():
            term = {(0,) * tn: c}
            for i, e in enumerate(exp):
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(_dict_mul(F, cache[-1], images[i].terms))
                    term = _dict_mul(F, term, cache[e])
            for tgt_exp, tc in term.items():
                s = F.add(acc.get(tgt_exp, F.zero), tc)
                if F.is_zero(s):
                    acc.pop(tgt_exp, None)
                else:
                    acc[tgt_exp] = s
        return SparsePoly._raw(
            F, tn, dict(sorted(acc.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True))
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for exp, c in self.terms.items():
            factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exp) if e]
            cs = self.field.to_str(c)
            neg = cs.startswith("-")
            if neg:
                cs = cs[1:]
            if factors and cs == "1":
                body = "*".join(factors)
            elif factors:
                body = cs + "*" + "*".join(factors)
            else:
                body = cs
            if not out:
                out.append("-" + body if neg else body)
            else:
                out.append(("- " if neg else "+ ") + body)
        return " ".join(out)


# ---------------------------------------------------------------------------
# spec'd operations on polynomials


def homogeneous_components(f: SparsePoly) -> list[SparsePoly]:
    """Split f by total degree; entry d holds the degree-d part.

    Trailing zero components are omitted, so the list length is
    total_degree(f) + 1 (empty for f = 0) and summing the entries gives
    back f.
    """
    if f.is_zero():
        return []
    buckets: dict[int, dict] = {}
    for exp, c in f.terms.items():
        buckets.setdefault(sum(exp), {})[exp] = c
    top = max(buckets)
    return [
        SparsePoly(f.field, f.nvars, buckets.get(d, {})) for d in range(top + 1)
    ]


def shift_to_point(f: SparsePoly, point: Sequence) -> SparsePoly:
    """Translate coordinates: returns g with g(z) = f(z + point)."""
    if len(point) != f.nvars:
        raise PolyError(f"point has {len(point)} coordinates, expected {f.nvars}")
    F = f.field
    images = []
    for i, x in enumerate(point):
        v = SparsePoly.variable(F, f.nvars, i)
        images.append(v + SparsePoly.constant(F, f.nvars, x))
    return f.compose(images)


class LinearSubspace:
    """A linear subspace of F^ambient given by an independent basis.

    Independence is verified at construction by a rank computation.
    """

    __slots__ = ("field", "ambient", "basis")

    def __init__(self, field: Field, ambient: int, basis: Iterable[Sequence]):
        rows = [tuple(field.coerce(x) for x in vec) for vec in basis]
        for vec in rows:
            if len(vec) != ambient:
                raise PolyError(
                    f"basis vector of length {len(vec)} in ambient dimension {ambient}"
                )
        if _row_rank(field, [list(r) for r in rows]) != len(rows):
            raise PolyError("basis vectors are linearly dependent")
        self.field = field
        self.ambient = ambient
        self.basis = tuple(rows)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def map_point(self, coords: Sequence) -> list:
        """Image of a coordinate vector (length dim) in the ambient space."""
        F = self.field
        cs = [F.coerce(x) for x in coords]
        if len(cs) != self.dim:
            raise PolyError(f"expected {self.dim} coordinates, got {len(cs)}")
        out = [F.zero] * self.ambient
        for c, vec in zip(cs, self.basis):
            for i, b in enumerate(vec):
                out[i] = F.add(out[i], F.mul(c, b))
        return out


def _row_rank(field: Field, rows: list[list]) -> int:
    """Rank by row reduction; mutates its argument."""
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for r in range(rank, len(rows)):
            if not field.is_zero(rows[r][col]):
                pivot = r
                break
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(x, inv) for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and not field.is_zero(rows[r][col]):
                factor = rows[r][col]
                rows[r] = [
                    field.sub(x, field.mul(factor, y)) for x, y in zip(rows[r], rows[rank])
                ]
        rank += 1
        if rank == len(rows):
            break
    return rank


def restrict_linear(f: SparsePoly, subspace: LinearSubspace) -> SparsePoly:
    """Pull f back along the parametrization of the subspace.

    The result lives in dim(subspace) variables t_j and satisfies
    result(v) = f(sum_j v_j b_j) for every coordinate vector v.
    """
    if subspace.ambient != f.nvars:
        raise PolyError(
            f"subspace ambient {subspace.ambient} does not match nvars {f.nvars}"
        )
    if subspace.field != f.field:
        raise PolyError("subspace and polynomial fields differ")
    F = f.field
    s = subspace.dim
    images = []
    for i in range(f.nvars):
        terms = {}
        for j, vec in enumerate(subspace.basis):
            if not F.is_zero(vec[i]):
                exp = [0] * s
                exp[j] = 1
                terms[tuple(exp)] = vec[i]
        images.append(SparsePoly(F, s, terms))
    return f.compose(images)


def jacobian(fs: Sequence[SparsePoly]) -> list[list[SparsePoly]]:
    """Matrix of partials: entry (i, j) is d fs[i] / d x_j."""
    if not fs:
        return []
    n = fs[0].nvars
    for f in fs:
        fs[0]._check_ring(f)
    return [[f.partial(j) for j in range(n)] for f in fs]


def linear_forms_independent(forms: Sequence[SparsePoly]) -> bool:
    """Test linear independence of homogeneous degree-1 forms."""
    if not forms:
        return True
    F = forms[0].field
    n = forms[0].nvars
    rows = []
    for f in forms:
        if f.is_zero():
            return False
        if not (f.is_homogeneous() and f.total_degree() == 1):
            raise PolyError("expected homogeneous linear forms")
        row = [F.zero] * n
        for exp, c in f.terms.items():
            row[exp.index(1)] = c
        rows.append(row)
    return _row_rank(F, rows) == len(rows)


def linear_form_coeffs(f: SparsePoly) -> list:
    """Coefficient vector of a homogeneous linear form."""
    if f.is_zero() or not f.is_homogeneous() or f.total_degree() != 1:
        raise PolyError("expected a nonzero homogeneous linear form")
    row = [f.field.zero] * f.nvars
    for exp, c in f.terms.items():
        row[exp.index(1)] = c
    return row


def exponents_of_degree(nvars: int, d: int) -> list[Exponent]:
    """All exponent vectors of total degree d, in a fixed order."""
    if nvars == 0:
        return [()] if d == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        exp = [0] * nvars
        for i in combo:
            exp[i] += 1
        out.append(tuple(exp))
    return out


# ---------------------------------------------------------------------------
# JSON interchange format:
#   {"nvars": n, "field": "Q" | {"Fp": p},
#    "terms": [{"c": "<int or a/b>", "e": [e0, ..., e_{n-1}]}, ...]}


def poly_to_json(f: SparsePoly) -> dict:
    return {
        "nvars": f.nvars,
        "field": f.field.to_json(),
        "terms": [
            {"c": f.field.to_str(c), "e": list(exp)} for exp, c in f.terms.items()
        ],
    }


def poly_from_json(obj) -> SparsePoly:
    if not isinstance(obj, dict):
        raise PolyFormatError("polynomial must be a JSON object")
    for key in ("nvars", "field", "terms"):
        if key not in obj:
            raise PolyFormatError(f"polynomial object missing field {key!r}")
    nvars = obj["nvars"]
    if not isinstance(nvars, int) or nvars < 0:
        raise PolyFormatError('"nvars" must be a non-negative integer')
    try:
        field = field_from_json(obj["field"])
    except FieldError as exc:
        raise PolyFormatError(f'"field": {exc}') from exc
    if not isinstance(obj["terms"], list):
        raise PolyFormatError('"terms" must be a list')
    terms: dict = {}
    for k, t in enumerate(obj["terms"]):
        if not isinstance(t, dict) or "c" not in t or "e" not in t:
            raise PolyFormatError(f'terms[{k}] must be an object with "c" and "e"')
        e = t["e"]
        if (
            not isinstance(e, list)
            or len(e) != nvars
            or any(not isinstance(x, int) or x < 0 for x in e)
        ):
            raise PolyFormatError(
                f'terms[{k}].e must be a list of {nvars} non-negative integers'
            )
        exp = tuple(e)
        if exp in terms:
            raise PolyFormatError(f"terms[{k}].e duplicates exponent vector {e}")
        if not isinstance(t["c"], (str, int)):
            raise PolyFormatError(f'terms[{k}].c must be a string or integer')
        try:
            terms[exp] = field.coerce(t["c"])
        except FieldError as exc:
            raise PolyFormatError(f"terms[{k}].c: {exc}") from exc
    return SparsePoly(field, nvars, terms)


_TERM_SPLIT = re.compile(r"(?=[+-])")
_FACTOR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def from_string(field: Field, nvars: int, text: str) -> SparsePoly:
    """Parse a human-friendly expression like ``"x0^2*x1 - 3/2*x2 + 1"``.

    Only sums of monomial terms are accepted (no parentheses); meant for
    tests and quick CLI experiments, not as a general parser.
    """
    total = SparsePoly.zero(field, nvars)
    compact = text.replace(" ", "")
    if not compact:
        return total
    for chunk in _TERM_SPLIT.split(compact):
        if not chunk or chunk in "+-":
            if chunk:
                raise PolyError(f"dangling sign in {text!r}")
            continue
        sign = 1
        if chunk[0] == "+":
            chunk = chunk[1:]
        elif chunk[0] == "-":
            sign = -1
            chunk = chunk[1:]
        coeff = field.coerce(sign)
        exp = [0] * nvars
        for factor in chunk.split("*"):
            m = _FACTOR.match(factor)
            if m:
                i = int(m.group(1))
                if i >= nvars:
                    raise PolyError(f"variable x{i} out of range in {text!r}")
                exp[i] += int(m.group(2) or 1)
            else:
                coeff = field.mul(coeff, field.coerce(factor))
        term = SparsePoly(field, nvars, {tuple(exp): coeff})
        total = total + term
    return total
