"""Scalar fields for matrix entries.

Two backends share one small interface (``zero``, ``one``, ``coerce``,
``root_of_unity``, ``parse``, ``render``, ``is_zero``, ``eq``):

* :class:`CyclotomicField` -- exact arithmetic in Q(zeta_N).  Elements are
  :class:`Cyclotomic` values stored in the power basis modulo the N-th
  cyclotomic polynomial, so equality and zero tests are exact.
* :class:`ApproxField` -- complex numbers at a fixed binary precision
  (mpmath), compared with an absolute tolerance.

Literal grammar accepted by :meth:`parse` (both backends)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('+' | '-') unary | power
    power   := primary ('^' ['-'] INT)?
    primary := INT | DECIMAL | 'i' | 'zeta' '(' INT ')' | '(' expr ')'

Decimal literals are only accepted by :class:`ApproxField`.
"""

from __future__ import annotations

import functools
import math
import re
from fractions import Fraction

import mpmath

__all__ = [
    "ScalarError",
    "ScalarParseError",
    "ConductorMismatchError",
    "Cyclotomic",
    "CyclotomicField",
    "ApproxField",
    "cyclotomic_field",
    "cyclotomic_polynomial",
    "euler_phi",
    "parse_scalar",
    "root_of_unity",
]


class ScalarError(ValueError):
    pass


class ScalarParseError(ScalarError):
    pass


class ConductorMismatchError(ScalarError):
    pass


def euler_phi(n: int) -> int:
    result, p, m = n, 2, n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n)[:-1]:
        poly = _exact_monic_div(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


def _exact_monic_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    quot = [0] * (len(num) - dn)
    for top in range(len(num) - 1, dn - 1, -1):
        c = num[top]
        if c:
            quot[top - dn] = c
            for t, dc in enumerate(den):
                num[top - dn + t] -= c * dc
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return quot


class Cyclotomic:
    """Element of Q(zeta_N): ``sum(num[j] * zeta_N**j) / den``.

    ``num`` has length phi(N); ``gcd(den, *num) == 1`` and ``den > 0``.
    Instances are immutable and hashable.
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field: CyclotomicField, num: tuple[int, ...], den: int = 1):
        self.field = field
        self.num = num
        self.den = den

    @classmethod
    def _make(cls, field, num, den):
        if den < 0:
            num = [-c for c in num]
            den = -den
        g = math.gcd(den, *num)
        if g != 1:
            num = [c // g for c in num]
            den //= g
        obj = cls.__new__(cls)
        obj.field = field
        obj.num = tuple(num)
        obj.den = den
        return obj

    # -- inspection -------------------------------------------------------
    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    def height(self) -> int:
        """Rough size: 0 for roots of unity, growing with terms and bit length."""
        terms = [c for c in self.num if c]
        if len(terms) == 1 and abs(terms[0]) == 1 and self.den == 1:
            return 0
        return len(terms) + sum(abs(c).bit_length() for c in terms) + self.den.bit_length()

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self):
        return any(self.num)

    def __eq__(self, other):
        if isinstance(other, Cyclotomic):
            return self.field is other.field and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and Fraction(self.num[0], self.den) == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.field.conductor, self.num, self.den))

    def __repr__(self):
        return f"Cyclotomic({self.field.render(self)!r}, N={self.field.conductor})"

    def __str__(self):
        return self.field.render(self)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Cyclotomic):
            if other.field is not self.field:
                raise ConductorMismatchError(
                    f"cannot mix Q(zeta_{self.field.conductor}) and Q(zeta_{other.field.conductor})")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return Cyclotomic._make(self.field, [a + b for a, b in zip(self.num, other.num)], self.den)
        da, db = self.den, other.den
        return Cyclotomic._make(self.field, [a * db + b * da for a, b in zip(self.num, other.num)], da * db)

    __radd__ = __add__

    def __neg__(self):
        obj = Cyclotomic.__new__(Cyclotomic)
        obj.field, obj.num, obj.den = self.field, tuple(-c for c in self.num), self.den
        return obj

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        field = self.field
        a, b = self.num, other.num
        if not any(a[1:]):
            c = a[0]
            return Cyclotomic._make(field, [c * x for x in b], self.den * other.den)
        if not any(b[1:]):
            c = b[0]
            return Cyclotomic._make(field, [c * x for x in a], self.den * other.den)
        return Cyclotomic._make(field, field._mul_poly(a, b), self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if not any(self.num):
            raise ZeroDivisionError("division by zero in cyclotomic field")
        field = self.field
        if self.is_rational():
            num = [0] * field.degree
            num[0] = self.den
            return Cyclotomic._make(field, num, self.num[0])
        support = [j for j, c in enumerate(self.num) if c]
        if len(support) == 1:
            # (c/d) zeta^j  ->  (d/c) zeta^-j
            j = support[0]
            power = field._powers[(-j) % field.conductor]
            return Cyclotomic._make(field, [self.den * v for v in power], self.num[j])
        # a^{-1} = prod_{sigma != 1} sigma(a) / Norm(a); the norm is rational.
        cofactor = None
        for j in field.galois_exponents[1:]:
            conj = field._galois(self.num, j)
            cofactor = conj if cofactor is None else field._mul_poly(cofactor, conj)
        norm = field._mul_poly(self.num, cofactor)
        if any(norm[1:]):
            raise ArithmeticError("norm computation produced a non-rational value")
        scale = self.den ** field.degree
        den_cof = self.den ** (field.degree - 1)
        # (num/den)^{-1} = cofactor/den^(phi-1) * den^phi / norm
        return Cyclotomic._make(field, [c * scale for c in cofactor], norm[0] * den_cof)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        base = self
        if exponent < 0:
            base, exponent = self.inverse(), -exponent
        result = self.field.one()
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def conjugate(self) -> Cyclotomic:
        """Complex conjugation (zeta -> zeta^-1)."""
        f = self.field
        return Cyclotomic._make(f, f._galois(self.num, f.conductor - 1), self.den)

    def to_complex(self, ctx=mpmath.mp) -> mpmath.mpc:
        z = ctx.expjpi(ctx.mpf(2) / self.field.conductor)
        total = ctx.mpc(0)
        for j, c in enumerate(self.num):
            if c:
                total += c * z ** j
        return total / self.den


class _LiteralParser:
    _token = re.compile(r"\s*(?:(\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+)|(\d+)|(zeta)|(i)|([-+*/^()]))")

    def __init__(self, field, text: str):
        self.field = field
        self.text = text
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text):
        tokens = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = self._token.match(stripped, pos)
            if not m:
                raise ScalarParseError(f"unexpected character at {pos} in {self.text!r}")
            dec, integer, zeta, imag, op = m.groups()
            if dec is not None:
                tokens.append(("dec", dec))
            elif integer is not None:
                tokens.append(("int", int(integer)))
            elif zeta is not None:
                tokens.append(("zeta", zeta))
            elif imag is not None:
                tokens.append(("i", imag))
            else:
                tokens.append(("op", op))
            pos = m.end()
        if not tokens:
            raise ScalarParseError("empty scalar literal")
        return tokens

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def _take(self, kind=None, value=None):
        tok = self._peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ScalarParseError(f"expected {want!r} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        value = self._expr()
        if self.pos != len(self.tokens):
            raise ScalarParseError(f"trailing input in {self.text!r}")
        return value

    def _expr(self):
        value = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            op = self._take()[1]
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._unary()
        while self._peek() in (("op", "*"), ("op", "/")):
            op = self._take()[1]
            rhs = self._unary()
            if op == "*":
                value = value * rhs
            else:
                if self.field.is_zero(rhs):
                    raise ScalarParseError(f"division by zero in {self.text!r}")
                value = value / rhs
        return value

    def _unary(self):
        tok = self._peek()
        if tok == ("op", "-"):
            self._take()
            return -self._unary()
        if tok == ("op", "+"):
            self._take()
            return self._unary()
        return self._power()

    def _power(self):
        base = self._primary()
        if self._peek() == ("op", "^"):
            self._take()
            sign = 1
            if self._peek() == ("op", "-"):
                self._take()
                sign = -1
            exp = self._take("int")[1] * sign
            if exp < 0 and self.field.is_zero(base):
                raise ScalarParseError(f"negative power of zero in {self.text!r}")
            base = base ** exp
        return base

    def _primary(self):
        kind, value = self._peek()
        if kind == "int":
            self._take()
            return self.field.coerce(value)
        if kind == "dec":
            self._take()
            return self.field.from_decimal(value)
        if kind == "i":
            self._take()
            return self.field.imaginary_unit()
        if kind == "zeta":
            self._take()
            self._take("op", "(")
            order = self._take("int")[1]
            self._take("op", ")")
            if order < 1:
                raise ScalarParseError("zeta order must be positive")
            return self.field.root_of_unity(order, 1)
        if (kind, value) == ("op", "("):
            self._take()
            inner = self._expr()
            self._take("op", ")")
            return inner
        raise ScalarParseError(f"unexpected token {value!r} in {self.text!r}")


class CyclotomicField:
    """Exact arithmetic in Q(zeta_N), power basis modulo Phi_N."""

    exact = True

    def __init__(self, conductor: int):
        if conductor < 1:
            raise ValueError("conductor must be >= 1")
        self.conductor = conductor
        self.modulus = cyclotomic_polynomial(conductor)
        self.degree = len(self.modulus) - 1
        self.galois_exponents = tuple(j for j in range(1, conductor + 1)
                                      if math.gcd(j, conductor) == 1 and j <= conductor)
        if conductor == 1:
            self.galois_exponents = (1,)
        # x^e mod Phi_N for 0 <= e < N
        self._powers = tuple(self._reduce([0] * e + [1]) for e in range(conductor))
        self._zero = Cyclotomic(self, (0,) * self.degree, 1)
        self._one = Cyclotomic(self, (1,) + (0,) * (self.degree - 1), 1)

    def __repr__(self):
        return f"CyclotomicField({self.conductor})"

    def __reduce__(self):
        return (cyclotomic_field, (self.conductor,))

    # -- polynomial kernel ------------------------------------------------
    def _reduce(self, poly):
        poly = list(poly)
        d = self.degree
        low = self.modulus
        for top in range(len(poly) - 1, d - 1, -1):
            c = poly[top]
            if c:
                base = top - d
                for t in range(d):
                    if low[t]:
                        poly[base + t] -= c * low[t]
        poly = poly[:d]
        return tuple(poly) + (0,) * (d - len(poly))

    def _mul_poly(self, a, b):
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        low = self.modulus
        for top in range(2 * d - 2, d - 1, -1):
            c = prod[top]
            if c:
                base = top - d
                for t in range(d):
                    lt = low[t]
                    if lt:
                        prod[base + t] -= c * lt
        return prod[:d]

    def _galois(self, num, j):
        out = [0] * self.degree
        n = self.conductor
        for e, c in enumerate(num):
            if c:
                for t, v in enumerate(self._powers[(e * j) % n]):
                    if v:
                        out[t] += c * v
        return out

    # -- constructors -----------------------------------------------------
    def zero(self) -> Cyclotomic:
        return self._zero

    def one(self) -> Cyclotomic:
        return self._one

    def coerce(self, value) -> Cyclotomic:
        if isinstance(value, Cyclotomic):
            if value.field is not self:
                raise ConductorMismatchError(
                    f"value lives in Q(zeta_{value.field.conductor}), not Q(zeta_{self.conductor})")
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            num = [0] * self.degree
            num[0] = value
            return Cyclotomic._make(self, num, 1)
        if isinstance(value, Fraction):
            num = [0] * self.degree
            num[0] = value.numerator
            return Cyclotomic._make(self, num, value.denominator)
        raise TypeError(f"cannot coerce {type(value).__name__} into {self!r}")

    def from_coefficients(self, coefficients) -> Cyclotomic:
        coefficients = [Fraction(c) for c in coefficients]
        if len(coefficients) > self.degree:
            return sum((c * self.zeta_power(j) for j, c in enumerate(coefficients)), self.zero())
        coefficients += [Fraction(0)] * (self.degree - len(coefficients))
        den = math.lcm(*(c.denominator for c in coefficients))
        return Cyclotomic._make(self, [int(c * den) for c in coefficients], den)

    def from_decimal(self, text: str):
        raise ScalarParseError(f"decimal literal {text!r} requires approx mode")

    def zeta_power(self, e: int) -> Cyclotomic:
        return Cyclotomic(self, self._powers[e % self.conductor], 1)

    def root_of_unity(self, order: int, power: int = 0) -> Cyclotomic:
        if order < 1:
            raise ValueError("order must be positive")
        if self.conductor % order:
            raise ConductorMismatchError(
                f"zeta({order}) is not in Q(zeta_{self.conductor})")
        return self.zeta_power((self.conductor // order) * power)

    def imaginary_unit(self) -> Cyclotomic:
        return self.root_of_unity(4, 1)

    def parse(self, text: str) -> Cyclotomic:
        return _LiteralParser(self, str(text)).parse()

    def render(self, x: Cyclotomic) -> str:
        x = self.coerce(x)
        if not any(x.num):
            return "0"
        parts = []
        for j, c in enumerate(x.num):
            if not c:
                continue
            coef = Fraction(c, x.den)
            sign = "-" if coef < 0 else "+"
            mag = abs(coef)
            if j == 0:
                body = str(mag)
            else:
                gen = f"zeta({self.conductor})" + (f"^{j}" if j > 1 else "")
                body = gen if mag == 1 else f"{mag}*{gen}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # -- comparisons ------------------------------------------------------
    def is_zero(self, x) -> bool:
        return not any(x.num) if isinstance(x, Cyclotomic) else x == 0

    def eq(self, a, b) -> bool:
        return self.coerce(a) == self.coerce(b)

    def multiplicative_order(self, x) -> int | None:
        """Order of ``x`` as a root of unity, or None if it is not one."""
        x = self.coerce(x)
        n = self.conductor
        two_n = 2 * n if n % 2 else n
        for d in _divisors(two_n):
            if x ** d == self._one:
                return d
        return None

    def to_complex(self, x, ctx=mpmath.mp):
        return self.coerce(x).to_complex(ctx)


@functools.lru_cache(maxsize=None)
def cyclotomic_field(conductor: int) -> CyclotomicField:
    """Shared field instance for Q(zeta_N); elements of one N interoperate."""
    return CyclotomicField(conductor)


class ApproxField:
    """Complex numbers at ``precision`` bits; ``|a - b| < tol`` means equal."""

    exact = False

    def __init__(self, precision: int = 128, tol=None):
        if precision < 16:
            raise ValueError("precision must be at least 16 bits")
        self.precision = precision
        self.ctx = mpmath.MPContext()
        self.ctx.prec = precision
        self.tol = self.ctx.mpf(2) ** (-(precision // 2)) if tol is None else self.ctx.mpf(tol)
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        self._zero = self.ctx.mpc(0)
        self._one = self.ctx.mpc(1)

    def __repr__(self):
        return f"ApproxField(precision={self.precision}, tol={mpmath.nstr(self.tol, 5)})"

    def zero(self):
        return self._zero

    def one(self):
        return self._one

    def coerce(self, value):
        ctx = self.ctx
        if isinstance(value, Fraction):
            return ctx.mpc(ctx.mpf(value.numerator) / value.denominator)
        if isinstance(value, Cyclotomic):
            return value.to_complex(ctx)
        return ctx.mpc(value)

    def from_decimal(self, text: str):
        return self.ctx.mpc(self.ctx.mpf(text))

    def root_of_unity(self, order: int, power: int = 0):
        if order < 1:
            raise ValueError("order must be positive")
        return self.ctx.expjpi(self.ctx.mpf(2 * (power % order)) / order)

    def imaginary_unit(self):
        return self.ctx.mpc(0, 1)

    def parse(self, text: str):
        return _LiteralParser(self, str(text)).parse()

    def render(self, x) -> str:
        x = self.coerce(x)
        digits = max(6, int(self.precision * 0.30103) - 2)
        re_s = mpmath.nstr(x.real, digits)
        if abs(x.imag) < self.tol:
            return re_s
        im = x.imag
        sign = "-" if im < 0 else "+"
        return f"{re_s} {sign} {mpmath.nstr(abs(im), digits)}*i"

    def is_zero(self, x) -> bool:
        return abs(x) < self.tol

    def eq(self, a, b) -> bool:
        return abs(self.coerce(a) - self.coerce(b)) < self.tol

    def multiplicative_order(self, x, max_order: int = 720) -> int | None:
        x = self.coerce(x)
        if abs(abs(x) - 1) >= self.tol:
            return None
        for d in range(1, max_order + 1):
            if abs(x ** d - 1) < self.tol:
                return d
        return None

    def to_complex(self, x, ctx=None):
        return self.coerce(x)


def parse_scalar(field, text: str):
    return field.parse(text)


def root_of_unity(field, order: int, power: int = 0):
    return field.root_of_unity(order, power)
