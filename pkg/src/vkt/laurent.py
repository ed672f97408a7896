"""Exact Laurent polynomials in the variable A with integer coefficients."""
from __future__ import annotations

import re
from typing import Iterable, Mapping


class LaurentPoly:
    """Immutable Laurent polynomial ``sum c_k A^k``.

    Terms are stored as a map exponent -> coefficient with no zero
    coefficients, so equality is structural.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None):
        clean = {}
        if terms:
            for k, c in terms.items():
                if c:
                    clean[int(k)] = int(c)
        self._terms = clean
        self._hash = None

    # -- constructors -------------------------------------------------------
    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls({0: c})

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "LaurentPoly":
        return cls({int(k): int(v) for k, v in data.items()})

    @classmethod
    def parse(cls, text: str) -> "LaurentPoly":
        """Parse the canonical text rendering (or any sum of ``cA^k`` terms)."""
        s = text.replace(" ", "").replace("*", "")
        if s in ("", "0"):
            return cls()
        if s[0] not in "+-":
            s = "+" + s
        terms: dict[int, int] = {}
        pos = 0
        pat = re.compile(r"([+-])(\d*)(A(?:\^\{?(-?\d+)\}?)?)?")
        while pos < len(s):
            m = pat.match(s, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
            sign = -1 if m.group(1) == "-" else 1
            coeff = int(m.group(2)) if m.group(2) else 1
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
            terms[exp] = terms.get(exp, 0) + sign * coeff
            pos = m.end()
        return cls(terms)

    # -- accessors ------------------------------------------------------------
    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return sorted(self._terms.items())

    def coeff(self, exponent: int) -> int:
        return self._terms.get(exponent, 0)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        return min(self._terms)

    def max_degree(self) -> int:
        return max(self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    # -- arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for k, c in other._terms.items():
            out[k] = out.get(k, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                out[k1 + k2] = out.get(k1 + k2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial")
            (k, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("negative power of a non-unit monomial")
            return LaurentPoly({k * n: c ** (-n)})
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``A^k``."""
        return LaurentPoly({e + k: c for e, c in self._terms.items()})

    def div_monomial(self, exponent: int, coeff: int = 1) -> "LaurentPoly":
        if coeff == 0:
            raise ZeroDivisionError("division by zero monomial")
        out = {}
        for e, c in self._terms.items():
            q, r = divmod(c, coeff)
            if r:
                raise ValueError("inexact monomial division")
            out[e - exponent] = q
        return LaurentPoly(out)

    def div_d(self) -> "LaurentPoly":
        """Exact division by d = -A^-2 - A^2; raises ValueError if inexact."""
        # p = d*q  <=>  -A^2 p = (1 + A^4) q ; peel off from the lowest degree
        if not self._terms:
            return ZERO
        rem = {e + 2: -c for e, c in self._terms.items()}
        q: dict[int, int] = {}
        while rem:
            lo = min(rem)
            c = rem.pop(lo)
            if not c:
                continue
            q[lo] = c
            rem[lo + 4] = rem.get(lo + 4, 0) - c
            if not rem[lo + 4]:
                del rem[lo + 4]
            if q and lo > self.max_degree() + 2:
                raise ValueError("polynomial is not divisible by d")
        return LaurentPoly(q)

    def mirror(self) -> "LaurentPoly":
        """Substitute A -> A^-1."""
        return LaurentPoly({-e: c for e, c in self._terms.items()})

    # -- comparison / hashing ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # -- rendering -------------------------------------------------------------
    def to_json(self) -> dict[str, str]:
        return {str(k): str(c) for k, c in sorted(self._terms.items())}

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(sorted(self._terms.items())):
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if e == 0:
                body = str(mag)
            elif mag == 1:
                body = f"A^{e}"
            else:
                body = f"{mag}A^{e}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(f" {sign} {body}")
        return "".join(parts)

    def __repr__(self):
        return f"LaurentPoly({str(self)!r})"


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.constant(x)
    raise TypeError(f"cannot combine LaurentPoly with {type(x).__name__}")


ZERO = LaurentPoly()
ONE = LaurentPoly({0: 1})
A = LaurentPoly({1: 1})
#: loop value d = -A^-2 - A^2
D = LaurentPoly({-2: -1, 2: -1})


def add(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p + q


def mul(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    return p * q


def d_power(k: int) -> LaurentPoly:
    if k < 0:
        raise ValueError("d_power needs k >= 0")
    return D ** k


def poly_sum(polys: Iterable[LaurentPoly]) -> LaurentPoly:
    out: dict[int, int] = {}
    for p in polys:
        for k, c in p._terms.items():
            out[k] = out.get(k, 0) + c
    return LaurentPoly(out)


def jones_display(p: LaurentPoly) -> str:
    """Render an f-polynomial in t = A^-4 when every exponent is a multiple of 4."""
    if any(e % 4 for e in p._terms):
        raise ValueError("exponents are not multiples of 4")
    parts = []
    for e, c in sorted(p._terms.items(), key=lambda kv: -kv[0]):
        parts.append(f"{c:+d}t^{-e // 4}")
    return " ".join(parts) if parts else "0"
