"""Sparse multivariate polynomials with exact coefficients.

A :class:`Poly` is a mapping from exponent tuples to nonzero coefficients.
Coefficients are ints/Fractions, or :class:`QuadraticNumber` when a change of
variables needs a square root that is not rational.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from typing import Mapping, Sequence


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    x = Fraction(x)
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = isqrt(p), isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


class QuadraticNumber:
    """``a + b*sqrt(r)`` with rational ``a, b`` and a fixed non-square rational ``r``."""

    __slots__ = ("a", "b", "r")

    def __init__(self, a, b=0, r=None):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.r = None if r is None else Fraction(r)
        if self.b and self.r is None:
            raise ValueError("irrational part needs a radicand")

    @classmethod
    def sqrt(cls, r) -> QuadraticNumber:
        return cls(0, 1, r)

    def _coerce(self, other):
        if isinstance(other, QuadraticNumber):
            if self.r is not None and other.r is not None and self.r != other.r:
                raise ValueError("mixing different quadratic extensions")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadraticNumber(other, 0, self.r)
        return NotImplemented

    def _radicand(self, other):
        return self.r if self.r is not None else other.r

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.r)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        r = self._radicand(o)
        rr = r if r is not None else 0
        return QuadraticNumber(self.a * o.a + rr * self.b * o.b, self.a * o.b + self.b * o.a, r)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadraticNumber(self.a, -self.b, self.r)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        norm = o.a * o.a - (o.r or 0) * o.b * o.b
        if norm == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        num = self * o.conjugate()
        return QuadraticNumber(num.a / norm, num.b / norm, num.r)

    def __rtruediv__(self, other):
        return QuadraticNumber(other, 0, self.r) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.r)) if self.b else hash(self.a)

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def simplify(self):
        return self.a if not self.b else self

    def __repr__(self):
        return f"QuadraticNumber({self.a}, {self.b}, {self.r})"

    def __str__(self):
        if not self.b:
            return str(self.a)
        root = f"sqrt({self.r})"
        irr = root if self.b == 1 else f"-{root}" if self.b == -1 else f"{self.b}*{root}"
        if not self.a:
            return irr
        return f"{self.a} + {irr}" if not irr.startswith("-") else f"{self.a} - {irr[1:]}"


def _norm_coeff(c):
    if isinstance(c, QuadraticNumber):
        return c.simplify()
    return Fraction(c)


class Poly:
    """Immutable sparse polynomial in ``nvars`` variables."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nvars:
                raise ValueError("exponent length does not match nvars")
            if c:
                clean[exp] = _norm_coeff(c)
        self._terms = clean

    @classmethod
    def zero(cls, nvars):
        return cls(nvars)

    @classmethod
    def const(cls, nvars, c):
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def var(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1):
        return cls(len(exp), {tuple(exp): c})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in lex order, largest exponent tuple first."""
        return sorted(self._terms.items(), reverse=True)

    def monomials(self) -> list[tuple[int, ...]]:
        return sorted(self._terms, reverse=True)

    def coeff(self, exp) -> object:
        return self._terms.get(tuple(exp), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Poly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(self.nvars, {e: c * other for e, c in self._terms.items()})
        if other.nvars != self.nvars:
            raise ValueError("variable count mismatch")
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, c):
        if isinstance(c, Poly):
            raise TypeError("only division by constants is supported")
        return Poly(self.nvars, {e: x / c for e, x in self._terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self._terms), default=-1)

    def involves(self, i: int) -> bool:
        return any(e[i] for e in self._terms)

    def homogeneous_part(self, d: int) -> Poly:
        return Poly(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == d})

    def split_by_divisibility(self, i: int) -> tuple[Poly, Poly]:
        """``(quotient, rest)`` with ``self == x_i * quotient + rest`` and ``rest`` free of ``x_i``."""
        quo, rest = {}, {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                quo[tuple(e2)] = c
            else:
                rest[e] = c
        return Poly(self.nvars, quo), Poly(self.nvars, rest)

    def substitute(self, mapping: Mapping[int, Poly]) -> Poly:
        """Simultaneously replace ``x_i`` by ``mapping[i]``."""
        powers: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = mapping[i] ** k
            return powers[key]

        out = Poly.zero(self.nvars)
        for e, c in self._terms.items():
            term = Poly.monomial(tuple(0 if i in mapping else k for i, k in enumerate(e)), c)
            for i, k in enumerate(e):
                if k and i in mapping:
                    term = term * power(i, k)
            out = out + term
        return out

    def format(self, names: Sequence[str]) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "*".join(
                names[i] if k == 1 else f"{names[i]}^{k}" for i, k in enumerate(e) if k
            )
            neg = False
            if isinstance(c, QuadraticNumber):
                cs = f"({c})"
            else:
                neg = c < 0
                cs = str(abs(c))
            if mono:
                body = mono if cs == "1" else f"{cs}*{mono}"
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"Poly({self.nvars}, {self._terms!r})"


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    """Parse ``text`` as a polynomial in ``names``.

    ``^`` or ``**`` denote powers, ``*`` is optional between factors, and
    ``/`` divides by a constant.

    >>> parse_poly("x^2 - 3/4 y", ["x", "y"]).format(["x", "y"])
    'x^2 - 3/4*y'
    """
    index = {n: i for i, n in enumerate(names)}
    nv = len(names)
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character {text[pos]!r} in polynomial")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name not in index:
                raise ValueError(f"unknown variable {name!r}")
            tokens.append(("var", index[name]))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    k = 0

    def peek():
        return tokens[k] if k < len(tokens) else None

    def take():
        nonlocal k
        k += 1
        return tokens[k - 1]

    def expr():
        if peek() == ("op", "-"):
            take()
            val = -term()
        else:
            if peek() == ("op", "+"):
                take()
            val = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            t = term()
            val = val + t if op == "+" else val - t
        return val

    def term():
        val = power()
        while True:
            t = peek()
            if t == ("op", "*"):
                take()
                val = val * power()
            elif t == ("op", "/"):
                take()
                d = power()
                if d.total_degree() > 0 or d.is_zero():
                    raise ValueError("division by a non-constant or zero")
                val = val / d.coeff((0,) * nv)
            elif t is not None and (t[0] in ("num", "var") or t == ("op", "(")):
                val = val * power()
            else:
                return val

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            t = take() if peek() else None
            if t is None or t[0] != "num":
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** t[1]
        return base

    def atom():
        t = take() if peek() else None
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t[0] == "num":
            return Poly.const(nv, t[1])
        if t[0] == "var":
            return Poly.var(nv, t[1])
        if t == ("op", "("):
            val = expr()
            if peek() != ("op", ")"):
                raise ValueError("missing ')'")
            take()
            return val
        if t == ("op", "-"):
            return -atom()
        raise ValueError(f"unexpected token {t[1]!r}")

    if not tokens:
        raise ValueError("empty polynomial")
    result = expr()
    if k != len(tokens):
        raise ValueError(f"trailing input at token {tokens[k][1]!r}")
    return result

