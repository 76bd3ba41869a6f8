import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigidcheck.fields import GF, QQ, FieldError, PrimeField
from rigidcheck.poly import (
    LinearSubspace,
    PolyError,
    PolyFormatError,
    SparsePoly,
    from_string,
    homogeneous_components,
    jacobian,
    linear_forms_independent,
    poly_from_json,
    poly_to_json,
    restrict_linear,
    shift_to_point,
)

from conftest import P, sparse_polys


class TestFields:
    def test_char2_rejected(self):
        with pytest.raises(FieldError, match="characteristic 2"):
            PrimeField(2)

    def test_nonprime_rejected(self):
        for bad in (1, 9, 15, 32004):
            with pytest.raises(FieldError):
                PrimeField(bad)

    def test_residues_normalized(self):
        F = GF(7)
        assert F.coerce(-1) == 6
        assert F.coerce("10") == 3
        assert F.coerce("1/2") == F.inv(2)

    def test_rationals_reduced(self):
        x = QQ.coerce("4/6")
        assert (x.numerator, x.denominator) == (2, 3)

    def test_no_domain_mixing(self):
        f = P(QQ, 2, "x0")
        g = P(GF(5), 2, "x0")
        with pytest.raises(PolyError, match="fields differ"):
            f + g


class TestHomogeneousComponents:
    def test_zero_polynomial(self):
        assert homogeneous_components(SparsePoly.zero(QQ, 3)) == []

    def test_term_degree_sorting(self):
        f = P(QQ, 2, "x0 + x0*x1")
        comps = homogeneous_components(f)
        assert [str(c) for c in comps] == ["0", "x0", "x0*x1"]

    def test_dehomogenized_cubic(self):
        # g = x0^2*x1 + x2^3 on the chart x0 = 1 splits as z1 + z2^3
        g = P(QQ, 3, "x0^2*x1 + x2^3")
        ones = [SparsePoly.constant(QQ, 2, 1)]
        imgs = ones + [SparsePoly.variable(QQ, 2, 0), SparsePoly.variable(QQ, 2, 1)]
        local = g.compose(imgs)
        comps = homogeneous_components(local)
        assert comps[1] == P(QQ, 2, "x0")
        assert comps[2].is_zero()
        assert comps[3] == P(QQ, 2, "x1^3")

    @given(sparse_polys())
    @settings(max_examples=60)
    def test_components_sum_and_degrees(self, f):
        comps = homogeneous_components(f)
        total = SparsePoly.zero(f.field, f.nvars)
        for d, c in enumerate(comps):
            assert c.is_homogeneous()
            assert c.is_zero() or c.total_degree() == d
            total = total + c
        assert total == f
        if comps:
            assert not comps[-1].is_zero()


class TestShift:
    def test_binomial_expansion(self):
        assert shift_to_point(P(QQ, 1, "x0^2"), [1]) == P(QQ, 1, "x0^2 + 2*x0 + 1")

    def test_identity_shift(self):
        f = P(QQ, 2, "x0 + x1")
        assert shift_to_point(f, [0, 0]) == f

    def test_mixed_term(self):
        assert shift_to_point(P(QQ, 2, "x0*x1"), [1, -1]) == P(
            QQ, 2, "x0*x1 - x0 + x1 - 1"
        )

    def test_evaluation_at_origin_gives_value(self):
        f = P(QQ, 2, "x0^2*x1 - 3*x1 + 7")
        p = [QQ.coerce(2), QQ.coerce(-5)]
        assert shift_to_point(f, p).evaluate([0, 0]) == f.evaluate(p)

    def test_dimension_mismatch(self):
        with pytest.raises(PolyError):
            shift_to_point(P(QQ, 2, "x0"), [1])

    @given(sparse_polys(max_nvars=2), st.lists(st.integers(-4, 4), min_size=2, max_size=2))
    @settings(max_examples=60)
    def test_shift_inverse(self, f, pt):
        if f.nvars != 2:
            f = SparsePoly(QQ, 2, {e + (0,) * (2 - f.nvars): c for e, c in f.terms.items()})
        shifted = shift_to_point(f, pt)
        assert shift_to_point(shifted, [-x for x in pt]) == f


class TestRestrictLinear:
    def test_coordinate_subspace(self):
        f = P(QQ, 2, "x0^2 + x1^2")
        sub = LinearSubspace(QQ, 2, [[1, 0]])
        assert restrict_linear(f, sub) == P(QQ, 1, "x0^2")

    def test_diagonal_line(self):
        f = P(QQ, 2, "x0*x1")
        sub = LinearSubspace(QQ, 2, [[1, 1]])
        assert restrict_linear(f, sub) == P(QQ, 1, "x0^2")

    def test_identity_subspace(self):
        f = P(QQ, 3, "x0^2*x2 - x1")
        sub = LinearSubspace(QQ, 3, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
        assert restrict_linear(f, sub) == f

    def test_dependent_basis_rejected(self):
        with pytest.raises(PolyError, match="dependent"):
            LinearSubspace(QQ, 2, [[1, 1], [2, 2]])

    def test_commutes_with_evaluation(self, rng):
        # result(v) = f(P,v) on random data, 100 draws
        for _ in range(100):
            n = rng.randint(2, 4)
            s = rng.randint(1, n)
            f = _random_poly(rng, n)
            vecs = None
            while vecs is None:
                cand = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(s)]
                try:
                    vecs = LinearSubspace(QQ, n, cand)
                except PolyError:
                    vecs = None
            v = [rng.randint(-3, 3) for _ in range(s)]
            lhs = restrict_linear(f, vecs).evaluate(v)
            rhs = f.evaluate(vecs.map_point(v))
            assert lhs == rhs


def _random_poly(rng, n, max_terms=6, max_exp=2):
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        exp = tuple(rng.randint(0, max_exp) for _ in range(n))
        terms[exp] = QQ.coerce(rng.randint(-5, 5))
    return SparsePoly(QQ, n, terms)


class TestJacobian:
    def test_gradient(self):
        jac = jacobian([P(QQ, 2, "x0^2 + x1^2")])
        assert jac == [[P(QQ, 2, "2*x0"), P(QQ, 2, "2*x1")]]

    def test_two_rows(self):
        jac = jacobian([P(QQ, 2, "x0*x1"), P(QQ, 2, "x1")])
        assert jac[0] == [P(QQ, 2, "x1"), P(QQ, 2, "x0")]
        assert jac[1] == [SparsePoly.zero(QQ, 2), P(QQ, 2, "1")]

    def test_constant_row_is_zero(self):
        jac = jacobian([P(QQ, 3, "5")])
        assert all(entry.is_zero() for entry in jac[0])

    def test_finite_difference_first_order(self, rng):
        # (f(x + eps*e_j) - f(x))/eps, expanded symbolically in eps, has the
        # jacobian entry as its constant term; exact identity for linear f
        for _ in range(25):
            n = rng.randint(1, 3)
            f = _random_poly(rng, n)
            x = [rng.randint(-3, 3) for _ in range(n)]
            j = rng.randrange(n)
            imgs = [
                SparsePoly.constant(QQ, 1, x[i])
                + (SparsePoly.variable(QQ, 1, 0) if i == j else SparsePoly.zero(QQ, 1))
                for i in range(n)
            ]
            in_eps = f.compose(imgs)  # univariate in eps
            diff = in_eps - SparsePoly.constant(QQ, 1, f.evaluate(x))
            # divide by eps: every term of diff has positive degree
            quotient = SparsePoly(
                QQ, 1, {(e[0] - 1,): c for e, c in diff.terms.items()}
            )
            expected = jacobian([f])[0][j].evaluate(x)
            assert quotient.coefficient((0,)) == expected
            if f.total_degree() <= 1:
                assert quotient == SparsePoly.constant(QQ, 1, expected)


class TestLinearIndependence:
    def test_independent(self):
        assert linear_forms_independent([P(QQ, 3, "x0"), P(QQ, 3, "x1")])

    def test_proportional(self):
        assert not linear_forms_independent([P(QQ, 3, "x0 + x1"), P(QQ, 3, "2*x0 + 2*x1")])

    def test_zero_form_dependent(self):
        assert not linear_forms_independent([SparsePoly.zero(QQ, 2), P(QQ, 2, "x0")])


class TestJsonFormat:
    def test_round_trip_examples(self):
        for field in (QQ, GF(13)):
            f = P(field, 3, "x0^2*x1 - 3*x2 + 1")
            assert poly_from_json(poly_to_json(f)) == f

    @given(sparse_polys())
    @settings(max_examples=60)
    def test_round_trip_property(self, f):
        assert poly_from_json(poly_to_json(f)) == f

    def test_round_trip_through_text(self):
        f = P(QQ, 2, "3/2*x0*x1 - x1^2")
        assert poly_from_json(json.loads(json.dumps(poly_to_json(f)))) == f

    def test_duplicate_exponents_rejected(self):
        obj = {
            "nvars": 1,
            "field": "Q",
            "terms": [{"c": "1", "e": [1]}, {"c": "2", "e": [1]}],
        }
        with pytest.raises(PolyFormatError, match="duplicates"):
            poly_from_json(obj)

    def test_error_names_offending_field(self):
        with pytest.raises(PolyFormatError, match="nvars"):
            poly_from_json({"field": "Q", "terms": []})
        with pytest.raises(PolyFormatError, match=r"terms\[0\]\.e"):
            poly_from_json({"nvars": 2, "field": "Q", "terms": [{"c": "1", "e": [1]}]})
        with pytest.raises(PolyFormatError, match="field"):
            poly_from_json({"nvars": 1, "field": "R", "terms": []})

    def test_fp_field_tag(self):
        f = poly_from_json({"nvars": 1, "field": {"Fp": 7}, "terms": [{"c": "9", "e": [1]}]})
        assert f.field == GF(7)
        assert f.coefficient((1,)) == 2


class TestArithmetic:
    @given(sparse_polys(nvars=2), sparse_polys(nvars=2), sparse_polys(nvars=2))
    @settings(max_examples=40)
    def test_ring_axioms(self, f, g, h):
        assert f + g == g + f
        assert f * g == g * f
        assert (f + g) * h == f * h + g * h

    def test_leading_term_is_degrevlex_max(self):
        f = P(QQ, 3, "x0^2 + x0*x1 + x1*x2")
        exp, _ = f.leading()
        assert exp == (2, 0, 0)
        # among degree-2 monomials x0^2 > x0*x1 > x1*x2 in degrevlex
        assert list(f.terms) == [(2, 0, 0), (1, 1, 0), (0, 1, 1)]

    def test_pow(self):
        f = P(QQ, 2, "x0 + x1")
        assert f**2 == P(QQ, 2, "x0^2 + 2*x0*x1 + x1^2")
        assert f**0 == P(QQ, 2, "1")
