"""Sparse formal series in ``t`` with rational exponents.

Every element handled here is a finite sum ``sum c_i t^(a_i)`` with exact
rational exponents and coefficients.  Terms are kept sorted by exponent with
zero coefficients removed, so equality and valuation are read directly off
the representation.

Integral rationals are stored as ``int`` rather than ``Fraction``; the two
hash and compare identically, and plain integers keep the big-integer
arithmetic of fraction-free elimination fast.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import total_ordering
from math import lcm
from typing import Iterable, Iterator, Mapping, Union

Rational = Union[int, Fraction]
RationalLike = Union[int, Fraction, str]

__all__ = [
    "INFINITY",
    "FieldElement",
    "Rational",
    "add",
    "mul",
    "valuation",
    "monomial",
    "random_unit",
    "as_rational",
    "format_rational",
    "parse_rational",
    "parse_field_element",
    "InvalidSupportError",
]


class InvalidSupportError(ValueError):
    """Raised when a random unit is requested on a support whose minimum is not 0."""


def as_rational(x: RationalLike) -> Rational:
    """Coerce ``x`` to an exact rational, normalised to ``int`` when integral."""
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return as_rational(parse_rational(x))
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass a Fraction or a 'p/q' string")
    q = Fraction(x)
    return q.numerator if q.denominator == 1 else q


def _exponent_den(terms: tuple) -> int:
    d = 1
    for e, _ in terms:
        if type(e) is not int:
            d = lcm(d, e.denominator)
    return d


def _scaled(e: Rational, den: int) -> int:
    if type(e) is int:
        return e * den
    return e.numerator * (den // e.denominator)


def _norm(x: Rational) -> Rational:
    if type(x) is int:
        return x
    return x.numerator if x.denominator == 1 else x


def format_rational(x: Rational) -> str:
    """Serialise an exact rational as ``p/q`` (integers get ``/1``)."""
    q = Fraction(x)
    return f"{q.numerator}/{q.denominator}"


_RAT = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: str) -> Rational:
    """Parse ``p``, ``p/q`` or a terminating decimal such as ``4.5``."""
    m = _RAT.match(text)
    if m:
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ValueError(f"zero denominator in {text!r}")
        return _norm(Fraction(num, den))
    try:
        return _norm(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not an exact rational: {text!r}") from exc


@total_ordering
class _Infinity:
    """The valuation of zero: larger than every rational, absorbing under +."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    __str__ = __repr__

    def __eq__(self, other) -> bool:
        return other is self

    def __hash__(self) -> int:
        return hash("lrval-infinity")

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("cannot subtract INFINITY from a finite valuation")

    def __neg__(self):
        raise ArithmeticError("-INFINITY is not a valuation")

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class FieldElement:
    """An element ``sum c t^a`` of the series field, in canonical form.

    ``terms`` is a tuple of ``(exponent, coefficient)`` pairs with strictly
    increasing exponents and nonzero coefficients.  Instances are immutable.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Iterable[tuple[RationalLike, RationalLike]] | Mapping = ()):
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        acc: dict = {}
        for e, c in items:
            e = as_rational(e)
            c = as_rational(c)
            if c:
                acc[e] = acc.get(e, 0) + c
        self._terms = _canon(acc)
        self._hash = None

    @classmethod
    def _from_dict(cls, acc: dict) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._terms = _canon(acc)
        obj._hash = None
        return obj

    @classmethod
    def _from_sorted(cls, terms: tuple) -> "FieldElement":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    # -- basic protocol -------------------------------------------------
    @property
    def terms(self) -> tuple:
        return self._terms

    def __iter__(self) -> Iterator[tuple[Rational, Rational]]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == FieldElement.constant(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls) -> "FieldElement":
        return _ZERO

    @classmethod
    def one(cls) -> "FieldElement":
        return _ONE

    @classmethod
    def constant(cls, c: RationalLike) -> "FieldElement":
        return monomial(0, c)

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other) -> "FieldElement":
        other = _coerce(other)
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for e, c in other._terms:
            acc[e] = acc.get(e, 0) + c
        return FieldElement._from_dict(acc)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement._from_sorted(tuple((e, -c) for e, c in self._terms))

    def __sub__(self, other) -> "FieldElement":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "FieldElement":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "FieldElement":
        other = _coerce(other)
        a, b = self._terms, other._terms
        if not a or not b:
            return _ZERO
        if len(a) == 1 and len(b) == 1:
            (ea, ca), (eb, cb) = a[0], b[0]
            return FieldElement._from_sorted(((_norm(ea + eb), ca * cb),))
        den = lcm(_exponent_den(a), _exponent_den(b))
        acc: dict = {}
        get = acc.get
        if den == 1:
            for ea, ca in a:
                for eb, cb in b:
                    e = ea + eb
                    acc[e] = get(e, 0) + ca * cb
            return FieldElement._from_dict(acc)
        # integer exponent keys on a common grid: hashing and adding Fractions is slow
        ia = [(_scaled(e, den), c) for e, c in a]
        ib = [(_scaled(e, den), c) for e, c in b]
        for ea, ca in ia:
            for eb, cb in ib:
                e = ea + eb
                acc[e] = get(e, 0) + ca * cb
        return FieldElement._from_dict({_norm(Fraction(e, den)): c for e, c in acc.items()})

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "FieldElement":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        result, base = _ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: RationalLike) -> "FieldElement":
        """Multiply every coefficient by the rational ``c``."""
        c = as_rational(c)
        if not c:
            return _ZERO
        return FieldElement._from_sorted(tuple((e, _norm(k * c)) for e, k in self._terms))

    def shift(self, s: RationalLike) -> "FieldElement":
        """Multiply by ``t^s``."""
        s = as_rational(s)
        if not s:
            return self
        return FieldElement._from_sorted(tuple((_norm(e + s), c) for e, c in self._terms))

    def truncate(self, precision: RationalLike) -> "FieldElement":
        """Drop every term with exponent ``>= precision``."""
        terms = self._terms
        if not terms or terms[-1][0] < precision:
            return self
        return FieldElement._from_sorted(tuple(t for t in terms if t[0] < precision))

    # -- valuation data -------------------------------------------------
    def valuation(self):
        return self._terms[0][0] if self._terms else INFINITY

    def leading_term(self) -> tuple[Rational, Rational]:
        if not self._terms:
            raise ValueError("zero has no leading term")
        return self._terms[0]

    def unit_part(self) -> "FieldElement":
        """``t^(-v) * self`` where ``v`` is the valuation; a unit of the ring."""
        if not self._terms:
            raise ValueError("zero has no unit part")
        return self.shift(-self._terms[0][0])

    def is_unit(self) -> bool:
        """True iff the element is a unit of the valuation ring (valuation 0)."""
        return bool(self._terms) and self._terms[0][0] == 0

    def in_ring(self) -> bool:
        """True iff the valuation is non-negative (zero counts)."""
        return not self._terms or self._terms[0][0] >= 0

    def max_exponent(self):
        return self._terms[-1][0] if self._terms else None

    # -- text -----------------------------------------------------------
    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{format_rational(c)}*t^({format_rational(e)})" for e, c in self._terms)

    def __repr__(self) -> str:
        return f"FieldElement({self})"

    @classmethod
    def parse(cls, text: str) -> "FieldElement":
        """Parse the textual form emitted by ``str``."""
        return parse_field_element(text)


def _canon(acc: dict) -> tuple:
    return tuple(sorted((_norm(e), _norm(c)) for e, c in acc.items() if c))


def _coerce(x) -> FieldElement:
    if isinstance(x, FieldElement):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return FieldElement.constant(x)
    raise TypeError(f"cannot use {type(x).__name__} as a field element")


_ZERO = FieldElement()
_ONE = FieldElement([(0, 1)])

_TERM = re.compile(
    r"^\s*(?P<c>[+-]?\s*\d+(?:\s*/\s*\d+)?)\s*\*\s*t\s*\^\s*\(\s*(?P<e>[+-]?\d+(?:\s*/\s*\d+)?)\s*\)\s*$"
)

# shorthand accepted on input: "3", "-1/2", "t", "-t", "2*t", "t^3", "t^(5/2)", "-3*t^-1"
_SHORT_TERM = re.compile(
    r"^\s*(?P<c>[+-]?\s*\d+(?:\s*/\s*\d+)?|[+-])?\s*(?:\*?\s*(?P<t>t)"
    r"(?:\s*\^\s*(?:\(\s*(?P<e>[+-]?\d+(?:\s*/\s*\d+)?)\s*\)|(?P<e2>[+-]?\d+(?:/\d+)?)))?)?\s*$"
)


def _match_term(part: str):
    """``(coefficient, exponent)`` of one term, or ``None`` if malformed."""
    m = _TERM.match(part)
    if m:
        return parse_rational(m.group("c").replace(" ", "")), parse_rational(m.group("e").replace(" ", ""))
    m = _SHORT_TERM.match(part)
    if not m or not (m.group("c") or m.group("t")):
        return None
    c = m.group("c")
    if c is None or c.strip() == "+":
        coeff = Fraction(1)
    elif c.strip() == "-":
        coeff = Fraction(-1)
    else:
        coeff = parse_rational(c.replace(" ", ""))
    if m.group("c") in ("+", "-") and not m.group("t"):
        return None
    e = m.group("e") or m.group("e2")
    if e:
        exp = parse_rational(e.replace(" ", ""))
    else:
        exp = Fraction(1) if m.group("t") else Fraction(0)
    return coeff, exp


def parse_field_element(text: str) -> FieldElement:
    """Parse ``"c*t^(p/q) + c*t^(p/q) + ..."``; ``"0"`` is the zero element."""
    s = text.strip()
    if s == "0" or s == "":
        return _ZERO
    # split on '+' separators that sit between terms; a leading sign belongs to c
    parts = re.split(r"\s\+\s", s)
    acc: dict = {}
    for pos, part in enumerate(parts):
        ce = _match_term(part)
        if ce is None:
            raise ValueError(f"malformed term {part!r} (term {pos + 1}) in {text!r}")
        c, e = ce
        if e in acc:
            raise ValueError(f"repeated exponent {format_rational(e)} in {text!r}")
        if c == 0:
            raise ValueError(f"zero coefficient in {text!r}")
        acc[e] = c
    return FieldElement._from_dict(acc)


def add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def valuation(a: FieldElement):
    """Least exponent of ``a``; ``INFINITY`` for zero."""
    return a.valuation()


def monomial(s: RationalLike, c: RationalLike = 1) -> FieldElement:
    """The element ``c * t^s`` (zero when ``c == 0``)."""
    c = as_rational(c)
    if not c:
        return _ZERO
    return FieldElement._from_sorted(((as_rational(s), c),))


def random_unit(seed: int | random.Random, support: Iterable[RationalLike] = (0,)) -> FieldElement:
    """A unit whose coefficients are uniform integers in ``[1, 2**31)``.

    ``support`` lists the exponents to populate and must have minimum 0, so the
    result always has valuation exactly 0.  ``seed`` may be an integer or an
    existing ``random.Random`` (to draw several units from one stream).
    """
    exps = sorted({as_rational(s) for s in support})
    if not exps or exps[0] != 0:
        raise InvalidSupportError(f"support must have minimum 0, got {list(support)!r}")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    return FieldElement._from_sorted(tuple((e, rng.randrange(1, 2**31)) for e in exps))
