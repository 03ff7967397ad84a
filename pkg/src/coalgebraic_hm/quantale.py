"""Integral commutative quantales with exact arithmetic.

Two instances ship: the Boolean quantale ``BOOL`` (payloads are ``bool``)
and the reversed unit interval ``INTERVAL`` (payloads are ``Fraction`` in
[0, 1]). Interval values are stored in the ordinary real order, so ``0`` is
the unit/top and ``1`` the bottom; every comparison goes through
:meth:`Quantale.leq`, which reverses the order for you.
"""

from __future__ import annotations

import enum
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterable, Union

Value = Union[bool, Fraction]


class QuantaleError(ValueError):
    """Raised on instance mismatches and out-of-range values."""


class Kind(str, enum.Enum):
    """Whether a truth-value or state conformance is directed or symmetric."""

    DIRECTED = "directed"
    SYMMETRIC = "symmetric"


def parse_rational(text) -> Fraction:
    """Parse ``"p/q"`` or a finite decimal exactly.

    Binary floats are rejected so no rounding can enter the pipeline.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise QuantaleError(f"expected a rational string, got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Decimal):
        return _from_decimal(text, text)
    if not isinstance(text, str):
        raise QuantaleError(f"expected a rational string, got {text!r}")
    s = text.strip()
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            return Fraction(int(num), int(den))
        except (ValueError, ZeroDivisionError) as exc:
            raise QuantaleError(f"malformed rational {text!r}") from exc
    try:
        d = Decimal(s)
    except InvalidOperation as exc:
        raise QuantaleError(f"malformed rational {text!r}") from exc
    return _from_decimal(d, text)


# far beyond any meaningful literal; stops 1e999999999 from allocating a huge int
_MAX_EXPONENT = 1000


def _from_decimal(d: Decimal, text) -> Fraction:
    if not d.is_finite():
        raise QuantaleError(f"malformed rational {text!r}")
    if abs(d.as_tuple().exponent) > _MAX_EXPONENT:
        raise QuantaleError(f"exponent out of range in {text!r}")
    return Fraction(d)


def format_rational(x: Fraction) -> str:
    return str(x)


class Quantale:
    """Operations of an integral commutative quantale on raw payloads."""

    name: str

    def check(self, x) -> Value:
        raise NotImplementedError

    @property
    def unit(self) -> Value:
        raise NotImplementedError

    @property
    def top(self) -> Value:
        raise NotImplementedError

    @property
    def bottom(self) -> Value:
        raise NotImplementedError

    def tensor(self, x, y) -> Value:
        raise NotImplementedError

    def hom(self, y, z) -> Value:
        """Right adjoint of ``- (x) y``: the largest x with ``x (x) y <= z``."""
        raise NotImplementedError

    def leq(self, x, y) -> bool:
        raise NotImplementedError

    def join(self, x, y) -> Value:
        raise NotImplementedError

    def meet(self, x, y) -> Value:
        raise NotImplementedError

    def join_all(self, xs: Iterable) -> Value:
        acc = self.bottom
        for x in xs:
            acc = self.join(acc, x)
        return acc

    def meet_all(self, xs: Iterable) -> Value:
        acc = self.top
        for x in xs:
            acc = self.meet(acc, x)
        return acc

    def truth_distance(self, kind: Kind, x, y) -> Value:
        if kind is Kind.DIRECTED:
            return self.hom(x, y)
        return self.meet(self.hom(x, y), self.hom(y, x))

    def parse(self, text) -> Value:
        raise NotImplementedError

    def format(self, x) -> str:
        raise NotImplementedError

    def values(self) -> tuple:
        """All elements, when the carrier is finite."""
        raise QuantaleError(f"{self.name} quantale is not finite")

    def __repr__(self) -> str:
        return f"<{self.name} quantale>"


class BooleanQuantale(Quantale):
    name = "boolean"

    def check(self, x) -> bool:
        if type(x) is not bool:
            raise QuantaleError(f"boolean quantale expects bool, got {x!r}")
        return x

    unit = True
    top = True
    bottom = False

    def tensor(self, x, y):
        return self.check(x) and self.check(y)

    def hom(self, y, z):
        return (not self.check(y)) or self.check(z)

    def leq(self, x, y):
        return (not self.check(x)) or self.check(y)

    def join(self, x, y):
        return self.check(x) or self.check(y)

    def meet(self, x, y):
        return self.check(x) and self.check(y)

    def parse(self, text):
        if isinstance(text, bool):
            return text
        s = str(text).strip().lower()
        if s in ("1", "true"):
            return True
        if s in ("0", "false"):
            return False
        raise QuantaleError(f"not a boolean truth value: {text!r}")

    def format(self, x):
        return "1" if self.check(x) else "0"

    def values(self):
        return (False, True)


_ZERO = Fraction(0)
_ONE = Fraction(1)


class IntervalQuantale(Quantale):
    """[0, 1] under the reversed real order with truncated addition."""

    name = "interval"

    def check(self, x) -> Fraction:
        if type(x) is not Fraction:
            raise QuantaleError(f"interval quantale expects Fraction, got {x!r}")
        if x < 0 or x > 1:
            raise QuantaleError(f"interval value {x} outside [0, 1]")
        return x

    unit = _ZERO
    top = _ZERO
    bottom = _ONE

    def tensor(self, x, y):
        s = self.check(x) + self.check(y)
        return s if s < 1 else _ONE

    def hom(self, y, z):
        d = self.check(z) - self.check(y)
        return d if d > 0 else _ZERO

    def leq(self, x, y):
        return self.check(x) >= self.check(y)

    def join(self, x, y):
        return min(self.check(x), self.check(y))

    def meet(self, x, y):
        return max(self.check(x), self.check(y))

    def parse(self, text):
        return self.check(parse_rational(text))

    def format(self, x):
        return format_rational(self.check(x))


BOOL = BooleanQuantale()
INTERVAL = IntervalQuantale()

QUANTALES = {q.name: q for q in (BOOL, INTERVAL)}


def quantale_of(x) -> Quantale:
    """Instance a raw payload belongs to."""
    if type(x) is bool:
        return BOOL
    if type(x) is Fraction:
        return INTERVAL
    raise QuantaleError(f"{x!r} is not a quantale value")


def _same(x, y) -> Quantale:
    q = quantale_of(x)
    if quantale_of(y) is not q:
        raise QuantaleError(f"cannot mix {x!r} and {y!r}")
    return q


def tensor(x, y):
    return _same(x, y).tensor(x, y)


def hom(y, z):
    return _same(y, z).hom(y, z)


def leq(x, y) -> bool:
    return _same(x, y).leq(x, y)


def truth_distance(kind: Kind, x, y):
    return _same(x, y).truth_distance(Kind(kind), x, y)
