"""Exact univariate polynomials in ``q`` and the q-combinatorial operators
built on them (q-integers, Gaussian binomials, symmetric powers, degree
convolution).

Coefficients are exact rationals (``int`` or ``fractions.Fraction``);
nothing here touches floating point.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Union

__all__ = [
    "QPoly",
    "GFTable",
    "NonIntegralError",
    "q_int",
    "gaussian_binomial",
    "sym_power",
    "multichoose",
    "star",
    "Q",
    "ONE",
    "ZERO",
]

Scalar = Union[int, Fraction]


class NonIntegralError(ArithmeticError):
    """A counting polynomial came out with a non-integer coefficient."""


class QPoly:
    """Polynomial in ``q`` with exact rational coefficients.

    ``coeffs[i]`` is the coefficient of ``q**i``. Trailing zeros are stripped on
    construction, so the zero polynomial has ``coeffs == ()`` and equality is
    plain tuple equality. Integral coefficients are held as ``int`` and the
    rest as ``Fraction``; counting code is almost entirely integral.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [_norm(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("QPoly is immutable")

    @classmethod
    def monomial(cls, k: int, c: Scalar = 1) -> QPoly:
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    @classmethod
    def const(cls, c: Scalar) -> QPoly:
        return cls([c])

    # -- inspection ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Scalar:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self) -> int:
        return len(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.coeffs)

    def int_coeffs(self) -> list[int]:
        """Coefficients as Python ints; raises :class:`NonIntegralError` otherwise."""
        if not self.is_integral():
            raise NonIntegralError(f"non-integral coefficients in {self}")
        return [int(c) for c in self.coeffs]

    def __call__(self, x: Scalar) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, QPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == QPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __add__(self, other) -> QPoly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return QPoly(out)

    __radd__ = __add__

    def __neg__(self) -> QPoly:
        return QPoly(-c for c in self.coeffs)

    def __sub__(self, other) -> QPoly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> QPoly:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> QPoly:
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, QPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return ZERO
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return QPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> QPoly:
        if k < 0:
            raise ValueError("negative power")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Scalar) -> QPoly:
        c = _norm(c)
        return QPoly(x * c for x in self.coeffs)

    def substitute_power(self, j: int) -> QPoly:
        """Return ``self(q**j)``."""
        if j < 1:
            raise ValueError("substitute_power needs j >= 1")
        if not self.coeffs:
            return ZERO
        out = [0] * ((len(self.coeffs) - 1) * j + 1)
        for i, c in enumerate(self.coeffs):
            out[i * j] = c
        return QPoly(out)

    def shift(self, k: int) -> QPoly:
        """Multiply by ``q**k``."""
        if not self.coeffs:
            return ZERO
        return QPoly([0] * k + list(self.coeffs))

    def __divmod__(self, other: QPoly) -> tuple[QPoly, QPoly]:
        if not isinstance(other, QPoly):
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = [Fraction(c) for c in self.coeffs]
        dlen = len(other.coeffs)
        lead = other.coeffs[-1]
        quot = [Fraction(0)] * max(len(rem) - dlen + 1, 0)
        for k in range(len(rem) - dlen, -1, -1):
            c = rem[k + dlen - 1] / lead
            quot[k] = c
            if c:
                for i, y in enumerate(other.coeffs):
                    rem[k + i] -= c * y
        return QPoly(quot), QPoly(rem[: dlen - 1])

    def exact_div(self, other: QPoly) -> QPoly:
        """Quotient ``self / other``; raises ``ArithmeticError`` on a remainder."""
        quot, rem = divmod(self, other)
        if rem:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quot

    # -- display ------------------------------------------------------------

    def __repr__(self) -> str:
        return f"QPoly({[_fmt_coeff(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        return format_qpoly(self)


def _norm(c) -> Scalar:
    if type(c) is int:
        return c
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def _coerce(x) -> QPoly | None:
    if isinstance(x, QPoly):
        return x
    if isinstance(x, (int, Fraction)):
        return QPoly.const(x)
    return None


def _fmt_coeff(c: Scalar) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_qpoly(p: QPoly, var: str = "q") -> str:
    """Ascending-power text form, e.g. ``1 + 3q + q^2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if i == 0:
            body = _fmt_coeff(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            if mag == 1:
                body = mono
            elif mag.denominator == 1:
                body = f"{mag.numerator}{mono}"
            else:
                body = f"({_fmt_coeff(mag)}){mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


ZERO = QPoly()
ONE = QPoly([1])
Q = QPoly([0, 1])


def q_int(k: int) -> QPoly:
    """``1 + q + ... + q**(k-1)``; zero for ``k <= 0``.

    Non-positive ``k`` returning zero is what makes empty b-ranges vanish
    without special-casing in the tree and recursion code.
    """
    if k <= 0:
        return ZERO
    return QPoly([1] * k)


def q_minus_one_power(k: int) -> QPoly:
    """``q**k - 1``."""
    return QPoly.monomial(k) - ONE


def gaussian_binomial(top: int, i: int) -> QPoly:
    """The q-binomial ``[top choose i]_q``.

    Computed as ``prod_{j=1..i} (q^{top-i+j} - 1)`` divided exactly by
    ``prod_{j=1..i} (q^j - 1)``. A negative exponent in the numerator means the
    quotient is not a polynomial and raises ``ValueError``.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if i == 0:
        return ONE
    if top - i + 1 < 0:
        raise ValueError(f"gaussian_binomial({top}, {i}) is not a polynomial")
    num, den = ONE, ONE
    for j in range(1, i + 1):
        num = num * q_minus_one_power(top - i + j)
        den = den * q_minus_one_power(j)
    return num.exact_div(den)


def multichoose(c: int, i: int) -> int:
    """Number of size-``i`` multisets drawn from ``c`` kinds."""
    if i == 0:
        return 1
    if c <= 0:
        return 0
    return comb(c + i - 1, i)


def sym_power(f: QPoly, i: int) -> QPoly:
    """Generating polynomial of size-``i`` multisets of the objects counted by ``f``.

    ``f`` must have non-negative integer coefficients. Uses the Newton
    recurrence ``i * S^i = sum_{j=1..i} f(q^j) * S^{i-j}``, which stays inside
    exact polynomial arithmetic.
    """
    if i < 0:
        raise ValueError("i must be non-negative")
    if any(c < 0 or c.denominator != 1 for c in f.coeffs):
        raise ValueError("sym_power needs non-negative integer coefficients")
    powers = [ONE]
    subs = [None] + [f.substitute_power(j) for j in range(1, i + 1)]
    for k in range(1, i + 1):
        acc = ZERO
        for j in range(1, k + 1):
            acc = acc + subs[j] * powers[k - j]
        powers.append(acc.scale(Fraction(1, k)))
    result = powers[i]
    if not result.is_integral():
        raise NonIntegralError(f"sym_power produced {result!r}")
    return result


class GFTable:
    """Memoized family ``d -> QPoly``.

    Each entry is computed at most once per observed value; concurrent fills of
    the same key race harmlessly because the stored value must match any
    recomputation (checked, since a mismatch means the generator is impure).
    """

    def __init__(self, compute: Callable[[int], QPoly], name: str = ""):
        self._compute = compute
        self._entries: dict[int, QPoly] = {}
        self._lock = threading.Lock()
        self.name = name

    def __getitem__(self, d: int) -> QPoly:
        if d < 0:
            raise KeyError(d)
        try:
            return self._entries[d]
        except KeyError:
            pass
        value = self._compute(d)
        return self.put(d, value)

    def put(self, d: int, value: QPoly) -> QPoly:
        with self._lock:
            existing = self._entries.setdefault(d, value)
        if existing != value:
            raise RuntimeError(f"GFTable {self.name!r}[{d}] filled inconsistently")
        return existing

    def __contains__(self, d: int) -> bool:
        return d in self._entries

    def items(self) -> list[tuple[int, QPoly]]:
        with self._lock:
            return sorted(self._entries.items())


def star(P: Mapping[int, QPoly] | GFTable, Qt: Mapping[int, QPoly] | GFTable, d: int) -> QPoly:
    """Degree convolution ``sum_{e=0..d} P[e] * Q[d-e]``."""
    acc = ZERO
    for e in range(d + 1):
        acc = acc + P[e] * Qt[d - e]
    return acc
