import random
from itertools import product

import pytest

from rigidcheck.fields import GF, QQ
from rigidcheck.linalg import (
    LinalgError,
    SymMatrix,
    kernel_basis,
    matrix_rank,
    pencil_low_rank_member,
    pencil_square_member,
    quad_to_sym,
    rank_by_minors,
    rank_stratum_codim,
    restrict_rank,
    sym_rank,
)
from rigidcheck.poly import SparsePoly

from conftest import P


def diag(field, entries, n=None):
    n = n if n is not None else len(entries)
    rows = [[field.coerce(0)] * n for _ in range(n)]
    for i, e in enumerate(entries):
        rows[i][i] = field.coerce(e)
    return SymMatrix.from_rows(field, rows)


class TestQuadToSym:
    def test_diagonal(self):
        A = quad_to_sym(P(QQ, 3, "x0^2 + x1^2"))
        assert A == diag(QQ, [1, 1, 0])

    def test_mixed_term_halved(self):
        A = quad_to_sym(P(QQ, 2, "x0*x1"))
        assert A.rows[0][1] == QQ.coerce("1/2")
        assert A.rows[1][0] == QQ.coerce("1/2")
        assert A.rows[0][0] == 0 and A.rows[1][1] == 0

    def test_zero_form(self):
        assert quad_to_sym(SparsePoly.zero(QQ, 4)) == SymMatrix.zero(QQ, 4)

    def test_wrong_degree_rejected(self):
        with pytest.raises(LinalgError):
            quad_to_sym(P(QQ, 2, "x0^3"))
        with pytest.raises(LinalgError):
            quad_to_sym(P(QQ, 2, "x0^2 + x1"))

    def test_matrix_reproduces_form(self, rng):
        for _ in range(50):
            n = rng.randint(1, 4)
            terms = {}
            for i in range(n):
                for j in range(i, n):
                    e = [0] * n
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = QQ.coerce(rng.randint(-4, 4))
            q = SparsePoly(QQ, n, terms)
            A = quad_to_sym(q)
            v = [rng.randint(-3, 3) for _ in range(n)]
            assert A.apply(v) == q.evaluate(v)


class TestSymRank:
    def test_diagonal_count(self):
        assert sym_rank(diag(QQ, [1, 1, 0])) == 2

    def test_perfect_square_rank_one(self):
        assert sym_rank(quad_to_sym(P(QQ, 2, "x0^2 + 2*x0*x1 + x1^2"))) == 1

    def test_r21_threshold_case(self):
        q = P(QQ, 8, " + ".join(f"x{i}^2" for i in range(7)))
        assert sym_rank(quad_to_sym(q)) == 7

    def test_congruence_invariance(self, rng):
        # rank(P^T A P) = rank(A) for 50 random invertible P
        F = QQ
        count = 0
        while count < 50:
            n = rng.randint(2, 4)
            A = _random_sym(rng, F, n)
            Pm = [[F.coerce(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
            if matrix_rank(F, Pm) != n:
                continue
            PtAP = _congruence(F, A, Pm)
            assert sym_rank(PtAP) == sym_rank(A)
            count += 1

    def test_agrees_with_minors_oracle(self, rng):
        for _ in range(40):
            n = rng.randint(1, 3)
            A = _random_sym(rng, QQ, n)
            assert sym_rank(A) == rank_by_minors(A)

    def test_exhaustive_small_fields(self, F3):
        # all symmetric 2x2 over F_3 against plain row reduction
        for a, b, c in product(range(3), repeat=3):
            A = SymMatrix.from_rows(F3, [[a, b], [b, c]])
            assert sym_rank(A) == matrix_rank(F3, [list(r) for r in A.rows])

    def test_sample_f5(self, F5, rng):
        for _ in range(120):
            A = _random_sym(rng, F5, 3)
            assert sym_rank(A) == matrix_rank(F5, [list(r) for r in A.rows])


def _random_sym(rng, field, n, span=4):
    rows = [[field.coerce(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            rows[i][j] = rows[j][i] = field.coerce(rng.randint(-span, span))
    return SymMatrix.from_rows(field, rows)


def _congruence(field, A, Pm):
    n = A.n
    AP = [
        [
            sum((field.mul(A.rows[i][k], Pm[k][j]) for k in range(n)), field.zero)
            for j in range(n)
        ]
        for i in range(n)
    ]
    PtAP = [
        [
            sum((field.mul(Pm[k][i], AP[k][j]) for k in range(n)), field.zero)
            for j in range(n)
        ]
        for i in range(n)
    ]
    return SymMatrix.from_rows(field, PtAP)


class TestRestrictRank:
    def test_kills_one_diagonal(self):
        q = P(QQ, 8, " + ".join(f"x{i}^2" for i in range(8)))
        assert restrict_rank(q, [P(QQ, 8, "x0")]) == 7

    def test_form_vanishing_on_slice(self):
        assert restrict_rank(P(QQ, 2, "x0*x1"), [P(QQ, 2, "x0")]) == 0

    def test_empty_cuts(self):
        q = P(QQ, 3, "x0^2 + x1*x2")
        assert restrict_rank(q, []) == sym_rank(quad_to_sym(q))

    def test_dependent_cuts_rejected(self):
        with pytest.raises(LinalgError, match="dependent"):
            restrict_rank(P(QQ, 3, "x0^2"), [P(QQ, 3, "x0"), P(QQ, 3, "2*x0")])

    def test_oblique_cut(self):
        # on {x0 = -x1}: x0^2 + x1^2 restricts to 2t^2 plus untouched x2^2
        q = P(QQ, 3, "x0^2 + x1^2 + x2^2")
        assert restrict_rank(q, [P(QQ, 3, "x0 + x1")]) == 2


class TestRankStratumCodim:
    def test_formula_values(self):
        assert rank_stratum_codim(3, 1) == 3
        assert rank_stratum_codim(11, 6) == 15  # the quadratic-case threshold count
        assert rank_stratum_codim(7, 7) == 0

    def test_full_rank_no_constraint(self):
        for n in range(1, 8):
            assert rank_stratum_codim(n, n) == 0

    def test_out_of_range(self):
        with pytest.raises(LinalgError):
            rank_stratum_codim(3, 4)
        with pytest.raises(LinalgError):
            rank_stratum_codim(3, -1)

    def test_brute_force_census_f3(self, F3):
        # count symmetric 3x3 of rank <= 1 over F_3 by enumeration: 27 = 3^3,
        # exponent gap 6 - 3 = 3 matches the formula
        count = 0
        for entries in product(range(3), repeat=6):
            a, b, c, d, e, f = entries
            A = SymMatrix.from_rows(F3, [[a, b, c], [b, d, e], [c, e, f]])
            if sym_rank(A) <= 1:
                count += 1
        assert count == 27
        assert rank_stratum_codim(3, 1) == 6 - 3


class TestKernelBasis:
    def test_deterministic_pivots(self):
        basis = kernel_basis(QQ, [[1, 2, 3]], 3)
        assert basis == [
            [QQ.coerce(-2), QQ.coerce(1), QQ.coerce(0)],
            [QQ.coerce(-3), QQ.coerce(0), QQ.coerce(1)],
        ]

    def test_vectors_annihilate(self, rng):
        for _ in range(30):
            n = rng.randint(2, 5)
            k = rng.randint(1, n)
            rows = [[QQ.coerce(rng.randint(-3, 3)) for _ in range(n)] for _ in range(k)]
            for vec in kernel_basis(QQ, rows, n):
                for row in rows:
                    assert sum((QQ.mul(a, b) for a, b in zip(row, vec)), QQ.zero) == 0


class TestPencils:
    def test_square_member_detected(self):
        # w2 = q2 + x0^2: the member at lambda = 1 is a square
        q2 = P(QQ, 3, "x0^2 + x1^2 + x2^2")
        w2 = P(QQ, 3, "2*x0^2 + x1^2 + x2^2")
        wit = pencil_square_member(quad_to_sym(q2), quad_to_sym(w2))
        assert wit == {"lambda": "1"}

    def test_no_square_member(self):
        q2 = P(QQ, 3, "x0^2 + x1^2 + x2^2")
        w2 = P(QQ, 3, "2*x0^2 + 3*x1^2 + 5*x2^2")
        assert pencil_square_member(quad_to_sym(q2), quad_to_sym(w2)) is None

    def test_irrational_square_member_detected(self):
        # det(w2 - x*q2) minors share the factor x^2 - 2: roots +-sqrt(2)
        q2 = P(QQ, 2, "x0^2 + x1^2")
        w2 = P(QQ, 2, "2*x0*x1")
        wit = pencil_square_member(quad_to_sym(q2), quad_to_sym(w2))
        assert wit is not None and "lambda_min_poly" in wit

    def test_low_rank_rational_member(self):
        q2 = P(QQ, 4, "x0^2 + x1^2 + x2^2 + x3^2")
        w2 = P(QQ, 4, "3*x0^2 + 3*x1^2 + 3*x2^2 + 7*x3^2")
        found, wit = pencil_low_rank_member(quad_to_sym(q2), quad_to_sym(w2), 1)
        assert found and wit["lambda"] == "3"

    def test_low_rank_absent(self):
        q2 = P(QQ, 3, "x0^2 + x1^2 + x2^2")
        w2 = P(QQ, 3, "2*x0^2 + 3*x1^2 + 5*x2^2")
        found, _ = pencil_low_rank_member(quad_to_sym(q2), quad_to_sym(w2), 1)
        assert found is False

    def test_low_rank_irrational_member(self):
        # pencil diag(x - a_i) with quadratic irrational double root
        # det(x*I - W) where W has char poly (x^2 - 2)^2 * (x - 1)
        F = QQ
        W = SymMatrix.from_rows(
            F,
            [
                [0, 1, 0, 0, 0],
                [1, 0, 0, 0, 0],
                [0, 0, 0, 1, 0],
                [0, 0, 1, 0, 0],
                [0, 0, 0, 0, 1],
            ],
        )
        # eigenvalues +-1 (twice each) and 1: rank of W - x at x = 1 is 5 - 3 = 2
        Q = diag(F, [1, 1, 1, 1, 1])
        found, wit = pencil_low_rank_member(Q, W, 2)
        assert found and wit["lambda"] == "1"

    def test_common_kernel_reduction(self):
        # both forms ignore the last coordinate entirely; any pencil member
        # x*q2 - w2 with rank <= 2 is a valid witness (x = 1 gives rank 1,
        # x = 2 gives rank 2)
        q2 = P(QQ, 4, "x0^2 + x1^2 + x2^2")
        w2 = P(QQ, 4, "2*x0^2 + x1^2 + x2^2")
        Q, W = quad_to_sym(q2), quad_to_sym(w2)
        found, wit = pencil_low_rank_member(Q, W, 2)
        assert found
        x0 = QQ.coerce(wit["lambda"])
        spec = [
            [QQ.sub(QQ.mul(x0, Q.rows[i][j]), W.rows[i][j]) for j in range(4)]
            for i in range(4)
        ]
        assert matrix_rank(QQ, spec) <= 2
