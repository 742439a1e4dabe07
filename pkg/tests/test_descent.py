"""Certificate compression through the rational integers."""

import random

import pytest

from soslen import (
    Certificate,
    CertificateInvalidError,
    DescentProblem,
    Exact,
    GramForm,
    Shape,
    TargetUnknownError,
    compress,
    descend,
    expand,
    g_table,
    lift,
    make_field,
    verify_certificate,
)

Q = make_field(Shape(()))
Q2 = make_field(Shape((2,)))


def problem_ten_ones():
    gram = GramForm.from_element(Q2.element_from_coords((10, 0)))
    cert = Certificate(Q2, 1, tuple((Q2.one(),) for _ in range(10)))
    return DescentProblem(Q2, gram, cert)


def problem_shifted_square():
    gram = GramForm.from_element(Q2.element_from_coords((4, 2)))
    cert = Certificate(
        Q2, 1, ((Q2.element_from_coords((1, 1)),), (Q2.one(),))
    )
    return DescentProblem(Q2, gram, cert)


class TestExpand:
    def test_ten_ones(self):
        e = expand(problem_ten_ones())
        assert e.zgram == ((10, 0), (0, 0))

    def test_shifted_square(self):
        e = expand(problem_shifted_square())
        assert e.zgram == ((2, 1), (1, 1))

    def test_rational_identity_descent(self):
        gram = GramForm.from_element(Q.element_from_coords((9,)))
        cert = Certificate(Q, 1, ((Q.element_from_coords((3,)),),))
        e = expand(DescentProblem(Q, gram, cert))
        assert e.zgram == ((9,),)

    def test_invalid_certificate_rejected(self):
        gram = GramForm.from_element(Q2.element_from_coords((10, 0)))
        cert = Certificate(Q2, 1, ((Q2.one(),),))
        with pytest.raises(CertificateInvalidError):
            expand(DescentProblem(Q2, gram, cert))

    def test_expansion_reproduces_gram_randomized(self):
        rng = random.Random(53)
        for shape in (Shape((2,)), Shape((5,)), Shape((6, 7))):
            f = make_field(shape)
            for _ in range(10):
                r = rng.choice((1, 2))
                rows = [
                    tuple(
                        f.element_from_coords(
                            tuple(rng.randint(-2, 2) for _ in range(f.degree))
                        )
                        for _ in range(r)
                    )
                    for _ in range(rng.randint(1, 4))
                ]
                rows = [row for row in rows if any(not v.is_zero() for v in row)]
                if not rows:
                    continue
                gram = GramForm.from_rows(f, rows)
                cert = Certificate(f, r, tuple(rows))
                expand(DescentProblem(f, gram, cert))  # asserts internally


class TestCompressAndLift:
    def test_compress_drops_zero_columns(self):
        e = expand(problem_ten_ones())
        w = compress(e, 5)
        assert all(row[1] == 0 for row in w)
        total = sum(row[0] * row[0] for row in w)
        assert total == 10 and len(w) <= 5

    def test_compress_binary(self):
        e = expand(problem_shifted_square())
        w = compress(e, 5)
        for p in range(2):
            for q in range(2):
                assert sum(row[p] * row[q] for row in w) == e.zgram[p][q]

    def test_lift_roundtrip(self):
        p = problem_shifted_square()
        e = expand(p)
        w = compress(e, 5)
        out = lift(w, e, Q2)
        assert verify_certificate(p.gram, out).ok

    def test_zero_certificate(self):
        gram = GramForm.zero(Q2, 1)
        cert = Certificate(Q2, 1, ())
        out = descend(DescentProblem(Q2, gram, cert))
        assert len(out.rows) == 0


class TestDescend:
    def test_ten_ones_compresses_to_at_most_five(self):
        p = problem_ten_ones()
        out = descend(p)
        assert len(out.rows) <= 5
        assert verify_certificate(p.gram, out).ok

    def test_idempotence_on_short_inputs(self):
        p = problem_shifted_square()
        out = descend(p)
        assert len(out.rows) <= len(p.input_cert.rows)
        assert verify_certificate(p.gram, out).ok

    def test_rational_rank1_bound_four(self):
        gram = GramForm.from_element(Q.element_from_coords((30,)))
        rows = tuple((Q.element_from_coords((1,)),) for _ in range(30))
        out = descend(DescentProblem(Q, gram, Certificate(Q, 1, rows)))
        assert len(out.rows) <= 4
        assert verify_certificate(gram, out).ok

    def test_unknown_target_needs_explicit_value(self):
        f = make_field(Shape((6, 7)))
        rows = [(f.one(), f.zero()), (f.zero(), f.one())]
        gram = GramForm.from_rows(f, rows)
        cert = Certificate(f, 2, tuple(rows))
        problem = DescentProblem(f, gram, cert)
        with pytest.raises(TargetUnknownError):
            descend(problem)  # rank*degree = 8 has only an upper bound
        out = descend(problem, target=10)
        assert verify_certificate(gram, out).ok

    def test_randomized_roundtrip_with_bound(self):
        rng = random.Random(59)
        shapes = (Shape((2,)), Shape((5,)), Shape((6,)))
        for i in range(25):
            f = make_field(shapes[i % 3])
            r = rng.choice((1, 2))
            rows = [
                tuple(
                    f.element_from_coords(
                        tuple(rng.randint(-1, 1) for _ in range(2))
                    )
                    for _ in range(r)
                )
                for _ in range(rng.randint(1, 12))
            ]
            rows = [row for row in rows if any(not v.is_zero() for v in row)]
            gram = GramForm.from_rows(f, rows) if rows else GramForm.zero(f, r)
            cert = Certificate(f, r, tuple(rows))
            out = descend(DescentProblem(f, gram, cert))
            entry = g_table(2 * r)
            assert isinstance(entry, Exact)
            assert len(out.rows) <= entry.value
            assert len(out.rows) <= max(len(rows), 0) or not rows
            assert verify_certificate(gram, out).ok


class TestGTable:
    def test_exact_values(self):
        assert g_table(1) == Exact(4)
        assert g_table(2) == Exact(5)
        assert g_table(6) == Exact(10)

    def test_bounds_and_unknown(self):
        from soslen import Unknown, UpperBound

        assert g_table(8) == UpperBound(37)
        assert g_table(10) == UpperBound(68)
        assert g_table(7) == Unknown()
        assert g_table(11) == Unknown()

    def test_invalid_rank(self):
        with pytest.raises(ValueError):
            g_table(0)
