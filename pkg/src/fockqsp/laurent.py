"""Laurent polynomials in one variable v with integer coefficients.

A polynomial is stored as a sparse mapping ``exponent -> coefficient`` with
no zero coefficients, so equality of values is equality of mappings.
"""

from __future__ import annotations

from typing import Iterable, Mapping


class NotDivisible(ArithmeticError):
    """Raised when an exact quotient does not exist in Z[v, v^-1]."""


class DivisionByZero(ZeroDivisionError):
    pass


class LaurentPoly:
    """Immutable element of Z[v, v^-1]."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[int, int] = {}
        for e, c in items:
            c = clean.get(e, 0) + c
            if c:
                clean[e] = c
            else:
                clean.pop(e, None)
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict[int, int]) -> "LaurentPoly":
        # caller guarantees there are no zero coefficients
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> "LaurentPoly":
        return cls._raw({exponent: coeff} if coeff else {})

    @classmethod
    def const(cls, c: int) -> "LaurentPoly":
        return cls.monomial(0, c)

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        return max(self._terms)

    def low_degree(self) -> int:
        return min(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"LaurentPoly({self.to_json()})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for e in sorted(self._terms, reverse=True):
            c = self._terms[e]
            mono = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other):
        return lp_add(self, _coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return lp_add(self, -_coerce(other))

    def __rsub__(self, other):
        return lp_add(_coerce(other), -self)

    def __mul__(self, other):
        if not isinstance(other, (LaurentPoly, int)):
            return NotImplemented
        return lp_mul(self, _coerce(other))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise NotDivisible("only monomials are invertible")
            ((e, c),) = self._terms.items()
            if c not in (1, -1):
                raise NotDivisible("only monomials with unit coefficient are invertible")
            return LaurentPoly.monomial(e * n, c ** (-n))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by v^k."""
        if k == 0:
            return self
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()})

    def bar(self) -> "LaurentPoly":
        """Substitute v -> v^-1."""
        return LaurentPoly._raw({-e: c for e, c in self._terms.items()})

    def eval_one(self) -> int:
        return lp_eval_one(self)

    def to_json(self) -> list[list[int]]:
        return [[e, self._terms[e]] for e in sorted(self._terms)]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls((int(e), int(c)) for e, c in data)


def _coerce(x) -> LaurentPoly:
    if isinstance(x, LaurentPoly):
        return x
    if isinstance(x, int):
        return LaurentPoly.const(x)
    raise TypeError(f"cannot use {type(x).__name__} as a Laurent polynomial")


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.monomial(1)


def v_pow(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if not b._terms:
        return a
    if not a._terms:
        return b
    out = dict(a._terms)
    for e, c in b._terms.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            del out[e]
    return LaurentPoly._raw(out)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if not a._terms or not b._terms:
        return ZERO
    out: dict[int, int] = {}
    for e1, c1 in a._terms.items():
        for e2, c2 in b._terms.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return LaurentPoly._raw({e: c for e, c in out.items() if c})


def lp_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return q with q*b == a, eliminating from the lowest exponent upward.

    Raises NotDivisible when the elimination leaves a remainder.
    """
    if not b._terms:
        raise DivisionByZero("division by the zero Laurent polynomial")
    if not a._terms:
        return ZERO
    b_low = min(b._terms)
    b_lead = b._terms[b_low]
    b_span = max(b._terms) - b_low
    rem = dict(a._terms)
    quot: dict[int, int] = {}
    top = max(rem)
    while rem:
        low = min(rem)
        if low + b_span > top:
            raise NotDivisible(f"{a} is not divisible by {b}")
        c, r = divmod(rem[low], b_lead)
        if r:
            raise NotDivisible(f"{a} is not divisible by {b}")
        shift = low - b_low
        quot[shift] = c
        for e, bc in b._terms.items():
            k = e + shift
            s = rem.get(k, 0) - c * bc
            if s:
                rem[k] = s
            else:
                rem.pop(k, None)
    return LaurentPoly._raw(quot)


def lp_eval_one(a: LaurentPoly) -> int:
    return sum(a._terms.values())


def quantum_int(n: int) -> LaurentPoly:
    """[n]_v = (v^n - v^-n) / (v - v^-1), for n >= 0."""
    if n < 0:
        raise ValueError("quantum_int expects n >= 0")
    return LaurentPoly._raw({n - 1 - 2 * k: 1 for k in range(n)})


def quantum_factorial(n: int) -> LaurentPoly:
    if n < 0:
        raise ValueError("quantum_factorial expects n >= 0")
    out = ONE
    for m in range(1, n + 1):
        out = out * quantum_int(m)
    return out


def quantum_binomial(k: int, n: int) -> LaurentPoly:
    """Gaussian binomial by the product formula prod_{m=1..n} (v^{k+1-m} - v^{-(k+1-m)}) / (v^m - v^-m)."""
    if n < 0:
        raise ValueError("quantum_binomial expects n >= 0")
    num = ONE
    den = ONE
    for m in range(1, n + 1):
        t = k + 1 - m
        num = num * LaurentPoly({t: 1, -t: -1})
        den = den * LaurentPoly({m: 1, -m: -1})
    return lp_div_exact(num, den)


QUANTUM_TWO = quantum_int(2)
V_MINUS_VINV = LaurentPoly({1: 1, -1: -1})
