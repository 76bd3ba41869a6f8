"""Quadratic forms as symmetric matrices over an exact field.

Rank is computed by congruence diagonalization (uniform over Q and odd
prime fields); an exhaustive-minors rank is kept as an independent
oracle for small sizes.  The module also houses the one-parameter pencil
analysis used by the bi-quadratic regularity screen: existence of a
pencil member of rank <= 1 (a square of a linear form) and, more
generally, of rank <= t, decided exactly over the algebraic closure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from . import univar as uv
from .fields import Field
from .poly import PolyError, SparsePoly, linear_form_coeffs


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class SymMatrix:
    field: Field
    n: int
    rows: tuple

    def __post_init__(self):
        if len(self.rows) != self.n or any(len(r) != self.n for r in self.rows):
            raise LinalgError(f"expected a {self.n} x {self.n} matrix")
        for i in range(self.n):
            for j in range(i):
                if self.rows[i][j] != self.rows[j][i]:
                    raise LinalgError(f"matrix not symmetric at ({i}, {j})")

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence]) -> "SymMatrix":
        coerced = tuple(tuple(field.coerce(x) for x in row) for row in rows)
        return cls(field, len(coerced), coerced)

    @classmethod
    def zero(cls, field: Field, n: int) -> "SymMatrix":
        z = field.zero
        return cls(field, n, tuple(tuple(z for _ in range(n)) for _ in range(n)))

    def apply(self, v: Sequence):
        """The quadratic form value v^T A v."""
        F = self.field
        vv = [F.coerce(x) for x in v]
        total = F.zero
        for i in range(self.n):
            row = self.rows[i]
            for j in range(self.n):
                total = F.add(total, F.mul(F.mul(vv[i], row[j]), vv[j]))
        return total


def quad_to_sym(q: SparsePoly) -> SymMatrix:
    """Symmetric matrix A with v^T A v = q(v); needs 1/2, hence char != 2.

    Accepts the zero polynomial (zero matrix); any other input must be
    homogeneous of degree exactly 2.
    """
    F = q.field
    n = q.nvars
    if q.is_zero():
        return SymMatrix.zero(F, n)
    if not q.is_homogeneous() or q.total_degree() != 2:
        raise LinalgError("quad_to_sym expects a homogeneous quadratic form")
    half = F.div(F.one, F.coerce(2))
    rows = [[F.zero] * n for _ in range(n)]
    for exp, c in q.terms.items():
        support = [i for i, e in enumerate(exp) if e]
        if len(support) == 1:
            i = support[0]
            rows[i][i] = c
        else:
            i, j = support
            rows[i][j] = rows[j][i] = F.mul(c, half)
    return SymMatrix(F, n, tuple(tuple(r) for r in rows))


def sym_rank(A: SymMatrix) -> int:
    """Rank by symmetric Gaussian elimination (congruence diagonalization).

    Pivot search is deterministic: smallest-index nonzero diagonal entry
    first, otherwise the first nonzero off-diagonal entry is folded onto
    the diagonal (possible because 2 is invertible).
    """
    F = A.field
    n = A.n
    work = [list(row) for row in A.rows]
    rank = 0
    for k in range(n):
        piv = None
        for i in range(k, n):
            if not F.is_zero(work[i][i]):
                piv = i
                break
        if piv is None:
            found = None
            for i in range(k, n):
                for j in range(i + 1, n):
                    if not F.is_zero(work[i][j]):
                        found = (i, j)
                        break
                if found:
                    break
            if found is None:
                break
            i, j = found
            # row_i += row_j and col_i += col_j turns the (i, i) entry into 2*a_ij
            for c in range(n):
                work[i][c] = F.add(work[i][c], work[j][c])
            for r in range(n):
                work[r][i] = F.add(work[r][i], work[r][j])
            piv = i
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
            for r in range(n):
                work[r][k], work[r][piv] = work[r][piv], work[r][k]
        d = work[k][k]
        for r in range(k + 1, n):
            if F.is_zero(work[r][k]):
                continue
            factor = F.div(work[r][k], d)
            for c in range(n):
                work[r][c] = F.sub(work[r][c], F.mul(factor, work[k][c]))
            for rr in range(n):
                work[rr][r] = F.sub(work[rr][r], F.mul(factor, work[rr][k]))
        rank += 1
    return rank


def rank_by_minors(A: SymMatrix) -> int:
    """Oracle rank: largest k with a nonvanishing k x k minor (exponential)."""
    F = A.field
    for k in range(A.n, 0, -1):
        for rows in combinations(range(A.n), k):
            for cols in combinations(range(A.n), k):
                sub = [[A.rows[i][j] for j in cols] for i in rows]
                if not F.is_zero(_det(F, sub)):
                    return k
    return 0


def _det(F: Field, mat: list) -> object:
    n = len(mat)
    if n == 0:
        return F.one
    if n == 1:
        return mat[0][0]
    total = F.zero
    sign = F.one
    for j in range(n):
        if not F.is_zero(mat[0][j]):
            minor = [row[:j] + row[j + 1 :] for row in mat[1:]]
            total = F.add(total, F.mul(F.mul(sign, mat[0][j]), _det(F, minor)))
        sign = F.neg(sign)
    return total


def matrix_rank(field: Field, rows: Sequence[Sequence]) -> int:
    """Plain row-echelon rank of an arbitrary rectangular matrix."""
    work = [list(r) for r in rows]
    if not work:
        return 0
    ncols = len(work[0])
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(work)):
            if not field.is_zero(work[r][col]):
                piv = r
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.inv(work[rank][col])
        work[rank] = [field.mul(x, inv) for x in work[rank]]
        for r in range(len(work)):
            if r != rank and not field.is_zero(work[r][col]):
                f = work[r][col]
                work[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(work[r], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def kernel_basis(field: Field, rows: Sequence[Sequence], ncols: int) -> list[list]:
    """Basis of the common kernel of the given row vectors.

    Pivots are chosen lowest column index first, so the result is
    deterministic; each basis vector has a 1 in one free coordinate.
    """
    work = [list(r) for r in rows]
    for r in work:
        if len(r) != ncols:
            raise LinalgError("row length mismatch in kernel computation")
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(work)):
            if not field.is_zero(work[r][col]):
                piv = r
                break
        if piv is None:
            continue
        work[rank], work[piv] = work[piv], work[rank]
        inv = field.inv(work[rank][col])
        work[rank] = [field.mul(x, inv) for x in work[rank]]
        for r in range(len(work)):
            if r != rank and not field.is_zero(work[r][col]):
                f = work[r][col]
                work[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(work[r], work[rank])]
        pivots.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(work[r][fc])
        basis.append(vec)
    return basis


def restrict_to_subspace(A: SymMatrix, basis: Sequence[Sequence]) -> SymMatrix:
    """B^T A B for B the matrix with the given vectors as columns."""
    F = A.field
    s = len(basis)
    rows = [[F.zero] * s for _ in range(s)]
    for a in range(s):
        Av = [F.zero] * A.n
        for i in range(A.n):
            acc = F.zero
            for j in range(A.n):
                acc = F.add(acc, F.mul(A.rows[i][j], basis[a][j]))
            Av[i] = acc
        for b in range(s):
            acc = F.zero
            for i in range(A.n):
                acc = F.add(acc, F.mul(basis[b][i], Av[i]))
            rows[b][a] = acc
    return SymMatrix(F, s, tuple(tuple(r) for r in rows))


def restrict_rank(q: SparsePoly, cuts: Sequence[SparsePoly]) -> int:
    """Rank of the quadratic form q on the common kernel of linear cuts."""
    A = quad_to_sym(q)
    if not cuts:
        return sym_rank(A)
    F = q.field
    rows = []
    for cut in cuts:
        try:
            rows.append(linear_form_coeffs(cut))
        except PolyError as exc:
            raise LinalgError(f"cuts must be nonzero linear forms: {exc}") from exc
        if cut.nvars != q.nvars:
            raise LinalgError("cut and form live in different variable counts")
        if cut.field != F:
            raise LinalgError("cut and form use different coefficient fields")
    if matrix_rank(F, rows) != len(rows):
        raise LinalgError("cuts are linearly dependent")
    basis = kernel_basis(F, rows, q.nvars)
    return sym_rank(restrict_to_subspace(A, basis))


def rank_stratum_codim(n: int, r: int) -> int:
    """Codimension of {rank <= r} inside symmetric n x n matrices."""
    if not 0 <= r <= n:
        raise LinalgError(f"rank bound r={r} out of range for n={n}")
    return (n + 1 - r) * (n - r) // 2


# ---------------------------------------------------------------------------
# one-parameter pencils of symmetric matrices


def pencil_square_member(Q: SymMatrix, W: SymMatrix) -> dict | None:
    """Does some member W - lambda*Q (lambda in the algebraic closure) have rank <= 1?

    Decided exactly: rank <= 1 at lambda iff every 2 x 2 minor of the
    pencil vanishes there, and the common roots of that family of
    univariate polynomials are the roots of their gcd.  Returns a witness
    dict (with the rational root when the gcd is linear) or None.
    """
    if Q.n != W.n or Q.field != W.field:
        raise LinalgError("pencil members must have matching size and field")
    F = Q.field
    n = Q.n
    # entry (i, j) of W - x*Q as a univariate polynomial in x
    ent = [[uv.up_trim(F, [W.rows[i][j], F.neg(Q.rows[i][j])]) for j in range(n)] for i in range(n)]
    g = None
    for i1, i2 in combinations(range(n), 2):
        for j1, j2 in combinations(range(n), 2):
            minor = uv.up_sub(
                F,
                uv.up_mul(F, ent[i1][j1], ent[i2][j2]),
                uv.up_mul(F, ent[i1][j2], ent[i2][j1]),
            )
            if not minor:
                continue
            g = minor if g is None else uv.up_gcd(F, g, minor)
            if uv.up_deg(g) == 0:
                return None
    if g is None:
        return {"lambda": "all", "note": "pencil has rank <= 1 identically"}
    g = uv.up_monic(F, g)
    if uv.up_deg(g) == 1:
        root = F.neg(g[0])
        return {"lambda": F.to_str(root)}
    return {"lambda_min_poly": [F.to_str(c) for c in g]}


def _complement_indices(F: Field, kernel: list[list], n: int) -> list[int]:
    # greedily extend the kernel basis by standard vectors; the chosen
    # coordinates span a complement of the kernel
    rows = [list(v) for v in kernel]
    chosen = []
    for i in range(n):
        e = [F.zero] * n
        e[i] = F.one
        if matrix_rank(F, rows + [e]) == len(rows) + 1:
            rows.append(e)
            chosen.append(i)
    return chosen


def _pencil_det(F: Field, mat: list[list[list]]) -> list:
    """Fraction-free (Bareiss) determinant of a matrix of univariate polys."""
    n = len(mat)
    if n == 0:
        return uv.up_const(F, 1)
    m = [[list(e) for e in row] for row in mat]
    sign = 1
    prev = uv.up_const(F, 1)
    for k in range(n - 1):
        if not m[k][k]:
            swap = None
            for r in range(k + 1, n):
                if m[r][k]:
                    swap = r
                    break
            if swap is None:
                return []
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = uv.up_sub(
                    F,
                    uv.up_mul(F, m[i][j], m[k][k]),
                    uv.up_mul(F, m[i][k], m[k][j]),
                )
                m[i][j] = uv.up_divexact(F, num, prev)
        prev = m[k][k]
        for i in range(k + 1, n):
            m[i][k] = []
    det = m[n - 1][n - 1]
    return uv.up_neg(F, det) if sign < 0 else det


def _rank_leq_mod(F: Field, mat: list[list[list]], modulus: list, t: int) -> bool:
    """True if rank(mat) <= t over F[x]/(f) for some irreducible factor f of modulus.

    D5-style dynamic evaluation: when a pivot candidate is a zero divisor
    the modulus splits and both branches are explored.
    """
    m = [[uv.up_divmod(F, e, modulus)[1] for e in row] for row in mat]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    row0 = 0
    for col in range(ncols):
        piv = None
        for r in range(row0, nrows):
            e = m[r][col]
            if not e:
                continue
            g = uv.up_gcd(F, e, modulus)
            if uv.up_deg(g) == 0:
                piv = r
                break
            if uv.up_deg(g) < uv.up_deg(modulus):
                # zero divisor: split the modulus and recurse on both branches
                other = uv.up_divexact(F, modulus, g)
                return _rank_leq_mod(F, mat, g, t) or _rank_leq_mod(F, mat, other, t)
            # e is 0 modulo the modulus; normalize and keep scanning
            m[r][col] = []
        if piv is None:
            continue
        m[row0], m[piv] = m[piv], m[row0]
        inv = uv.up_invmod(F, m[row0][col], modulus)
        m[row0] = [uv.up_divmod(F, uv.up_mul(F, e, inv), modulus)[1] for e in m[row0]]
        for r in range(row0 + 1, nrows):
            f = m[r][col]
            if f:
                m[r] = [
                    uv.up_divmod(F, uv.up_sub(F, a, uv.up_mul(F, f, b)), modulus)[1]
                    for a, b in zip(m[r], m[row0])
                ]
        rank += 1
        row0 += 1
        if rank > t:
            return False
    return rank <= t


def pencil_low_rank_member(Q: SymMatrix, W: SymMatrix, t: int):
    """Does some member x*Q - W (x in the algebraic closure) have rank <= t?

    Returns (True, witness), (False, None) with both answers exact, or
    (None, None) when the computation is inconclusive (singular pencil
    with generic rank above t, or characteristic too small for the
    squarefree step).
    """
    if Q.n != W.n or Q.field != W.field:
        raise LinalgError("pencil members must have matching size and field")
    F = Q.field
    n = Q.n
    if t >= n:
        return True, {"reason": "rank bound is vacuous"}
    stacked = [list(r) for r in Q.rows] + [list(r) for r in W.rows]
    kern = kernel_basis(F, stacked, n)
    idx = _complement_indices(F, kern, n) if kern else list(range(n))
    np = len(idx)
    if np <= t:
        return True, {"lambda": "all", "reason": f"common kernel forces rank <= {np}"}
    Qs = [[Q.rows[i][j] for j in idx] for i in idx]
    Ws = [[W.rows[i][j] for j in idx] for i in idx]
    # entries of x*Q' - W'
    ent = [
        [uv.up_trim(F, [F.neg(Ws[i][j]), Qs[i][j]]) for j in range(np)]
        for i in range(np)
    ]
    det = _pencil_det(F, ent)
    if det:
        try:
            sqf = uv.squarefree_decomposition(F, det)
        except uv.UnivarError:
            return None, None
        needed = np - t
        for factor, mult in sqf:
            if mult < needed:
                continue
            if uv.up_deg(factor) == 1:
                x0 = F.neg(factor[0])
                spec = [
                    [F.sub(F.mul(x0, Qs[i][j]), Ws[i][j]) for j in range(np)]
                    for i in range(np)
                ]
                if matrix_rank(F, spec) <= t:
                    return True, {"lambda": F.to_str(x0)}
            else:
                if _rank_leq_mod(F, ent, factor, t):
                    return True, {
                        "lambda_min_poly": [F.to_str(c) for c in factor]
                    }
        return False, None
    # det vanishes identically: certify a generic rank drop if we can
    points_needed = np + 1
    if F.char != 0 and F.char < points_needed:
        return None, None
    ranks = []
    for k in range(points_needed):
        x0 = F.coerce(k)
        spec = [
            [F.sub(F.mul(x0, Qs[i][j]), Ws[i][j]) for j in range(np)]
            for i in range(np)
        ]
        ranks.append(matrix_rank(F, spec))
    if max(ranks) <= t:
        # every (t+1)-minor has degree <= np and np+1 roots, hence is zero
        return True, {"lambda": "all", "reason": "generic pencil rank <= bound"}
    return None, None
