from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from rigid_turbine.scalar import (ApproxField, ConductorMismatchError, Cyclotomic, ScalarParseError,
                                  cyclotomic_field, cyclotomic_polynomial, euler_phi, parse_scalar,
                                  root_of_unity)

CONDUCTORS = (1, 3, 4, 5, 6, 7, 8, 12, 15, 20)


def elements(conductor):
    f = cyclotomic_field(conductor)
    coeffs = st.lists(st.integers(-6, 6), min_size=f.degree, max_size=f.degree)
    return st.builds(lambda c, d: f.from_coefficients([Fraction(x, d) for x in c]),
                     coeffs, st.integers(1, 4))


@st.composite
def field_triples(draw):
    n = draw(st.sampled_from(CONDUCTORS))
    el = elements(n)
    return cyclotomic_field(n), draw(el), draw(el), draw(el)


class TestParse:
    def test_zeta_power(self):
        f = cyclotomic_field(5)
        assert parse_scalar(f, "zeta(5)^2") == f.zeta_power(2)

    def test_minus_one_is_rational(self):
        f = cyclotomic_field(5)
        x = parse_scalar(f, "-1")
        assert x.is_rational() and x.rational_value() == -1

    def test_foreign_conductor_rejected(self):
        with pytest.raises(ConductorMismatchError):
            parse_scalar(cyclotomic_field(5), "1/2 + 3*zeta(12)")

    def test_sub_conductor_embeds(self):
        f = cyclotomic_field(15)
        assert f.parse("zeta(5)") == f.zeta_power(3)
        assert f.parse("zeta(3)^2") == f.zeta_power(10)

    def test_imaginary_unit(self):
        f = cyclotomic_field(12)
        assert f.parse("i") ** 2 == f.parse("-1")
        with pytest.raises(ConductorMismatchError):
            cyclotomic_field(6).parse("i")

    def test_negative_exponent_and_parentheses(self):
        f = cyclotomic_field(7)
        assert f.parse("zeta(7)^-1") == f.zeta_power(6)
        assert f.parse("(1 + zeta(7)) * (1 - zeta(7))") == f.one() - f.zeta_power(2)
        assert f.parse("3/6") == Fraction(1, 2)

    @pytest.mark.parametrize("text", ["", "zeta(", "1 +", "zeta(5)^", "2 ** 3", "x", "1/0", "(1"])
    def test_malformed(self, text):
        with pytest.raises((ScalarParseError, ZeroDivisionError)):
            cyclotomic_field(5).parse(text)

    def test_decimals_rejected_in_exact_mode(self):
        with pytest.raises(ScalarParseError):
            cyclotomic_field(5).parse("0.5")


class TestRootsOfUnity:
    def test_examples(self):
        f5 = cyclotomic_field(5)
        assert root_of_unity(f5, 5, 1) == f5.zeta_power(1)
        assert root_of_unity(f5, 1, 0) == f5.one()
        f6 = cyclotomic_field(6)
        w = root_of_unity(f6, 3, 2)
        assert w ** 3 == f6.one() and w != f6.one()
        assert f6.multiplicative_order(w) == 3

    def test_order_must_divide_conductor(self):
        with pytest.raises(ConductorMismatchError):
            root_of_unity(cyclotomic_field(5), 3, 1)

    def test_odd_conductor_contains_minus_zeta(self):
        f = cyclotomic_field(5)
        assert f.multiplicative_order(-f.zeta_power(1)) == 10
        assert f.multiplicative_order(f.parse("2")) is None


class TestArithmetic:
    def test_sum_of_primitive_cube_roots(self):
        f = cyclotomic_field(3)
        assert f.zeta_power(1) + f.zeta_power(2) == -1

    def test_self_division(self):
        f = cyclotomic_field(5)
        x = f.parse("1 + zeta(5)")
        assert x / x == f.one()

    def test_zeta_times_inverse(self):
        f = cyclotomic_field(5)
        assert f.zeta_power(1) * f.zeta_power(4) == 1

    def test_division_by_zero(self):
        f = cyclotomic_field(5)
        with pytest.raises(ZeroDivisionError):
            f.one() / f.zero()

    def test_mixed_fields_refused(self):
        with pytest.raises(Exception):
            cyclotomic_field(5).one() + cyclotomic_field(7).one()

    def test_polynomial_tables(self):
        assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
        assert [euler_phi(n) for n in (1, 2, 12, 15, 30)] == [1, 1, 4, 8, 8]

    @given(field_triples())
    def test_ring_axioms(self, t):
        f, a, b, c = t
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == f.zero()
        assert a * f.one() == a

    @given(field_triples())
    def test_inverse(self, t):
        f, a, _, _ = t
        if not f.is_zero(a):
            assert a * a.inverse() == f.one()

    @given(field_triples())
    def test_embedding_is_a_homomorphism(self, t):
        _, a, b, _ = t
        mpmath.mp.prec = 100
        za, zb = a.to_complex(), b.to_complex()
        assert abs((a * b).to_complex() - za * zb) < 1e-20
        assert abs((a + b).to_complex() - za - zb) < 1e-20
        assert abs(a.conjugate().to_complex() - mpmath.conj(za)) < 1e-20

    @given(field_triples())
    def test_render_parse_round_trip(self, t):
        f, a, _, _ = t
        assert f.parse(f.render(a)) == a

    @given(field_triples())
    def test_hash_consistent_with_equality(self, t):
        f, a, _, _ = t
        b = f.parse(f.render(a))
        assert hash(a) == hash(b)

    def test_render_format(self):
        f = cyclotomic_field(15)
        assert f.render(f.parse("1/3 + zeta(15)^6")) == "1/3 + zeta(15)^6"
        assert f.render(f.parse("2*zeta(15)^7")) == "2*zeta(15)^7"
        assert cyclotomic_field(5).render(cyclotomic_field(5).parse("-zeta(5)^3")) == "-zeta(5)^3"


class TestApprox:
    def test_parse_matches_exact_embedding(self):
        f = ApproxField(128)
        exact = cyclotomic_field(5).parse("1 + 2*zeta(5)^3")
        assert f.eq(f.parse("1 + 2*zeta(5)^3"), exact.to_complex(f.ctx))

    def test_decimals_and_tolerance(self):
        f = ApproxField(64, tol=1e-6)
        assert f.eq(f.parse("0.5"), f.parse("1/2"))
        assert f.is_zero(f.parse("0.0000000001"))
        assert not f.is_zero(f.parse("0.001"))

    def test_roots_of_unity(self):
        f = ApproxField(96)
        assert f.eq(f.root_of_unity(7, 3) ** 7, 1)
        assert f.multiplicative_order(f.root_of_unity(12, 5)) == 12

    def test_precision_floor(self):
        with pytest.raises(ValueError):
            ApproxField(8)

    def test_render_round_trip(self):
        f = ApproxField(128)
        x = f.parse("zeta(7)^2 - 1/3")
        assert f.eq(f.parse(f.render(x)), x)
