"""Charged {0,1}-sequences on Z or H = 1/2 + Z, moving operators and statistics.

Positions are stored doubled: an integer position i is the even number 2i
and a half-integer position is odd.  A sequence on Z has its cells at even
doubled positions and its move indices (the positions between two cells) at
odd ones; for sequences on H it is the other way round.

A ``Sequence`` is kept in canonical window form: every cell left of ``left``
holds 1, the window ``bits`` covers the cells left, left+2, ... (doubled),
and every cell to the right of the window holds 0.  A non-empty window
starts with 0 and ends with 1.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, Mapping

from .laurent import ZERO, LaurentPoly, lp_add, lp_mul


class SupportMismatch(ValueError):
    """A position, residue class or vector lives on the wrong lattice."""


class Support(str, Enum):
    INT = "INT"
    HALF = "HALF"

    @property
    def cell_parity(self) -> int:
        """Parity of doubled cell positions."""
        return 0 if self is Support.INT else 1

    @property
    def move_parity(self) -> int:
        """Parity of doubled move indices (the dual lattice)."""
        return 1 - self.cell_parity

    @classmethod
    def of_parity(cls, parity: int) -> "Support":
        return cls.INT if parity % 2 == 0 else cls.HALF


def to_doubled(x) -> int:
    """Doubled integer for an int, Fraction, half-integer float, string like '7/2', or Position."""
    if isinstance(x, Position):
        return x.doubled
    if isinstance(x, bool):
        raise TypeError("booleans are not positions")
    if isinstance(x, int):
        return 2 * x
    if isinstance(x, str):
        x = Fraction(x.strip())
    elif isinstance(x, float):
        x = Fraction(x)
    if isinstance(x, Fraction):
        d = 2 * x
        if d.denominator != 1:
            raise ValueError(f"{x} is neither an integer nor a half-integer")
        return int(d)
    raise TypeError(f"cannot interpret {x!r} as a position")


def from_doubled(d: int) -> Fraction | int:
    """Inverse of to_doubled, returning an int when the position is integral."""
    return d // 2 if d % 2 == 0 else Fraction(d, 2)


def format_doubled(d: int) -> str:
    return str(d // 2) if d % 2 == 0 else f"{d}/2"


@dataclass(frozen=True, order=True)
class Position:
    doubled: int

    @property
    def support(self) -> Support:
        return Support.of_parity(self.doubled)

    @classmethod
    def of(cls, x) -> "Position":
        return cls(to_doubled(x))

    @property
    def value(self) -> Fraction | int:
        return from_doubled(self.doubled)

    def __str__(self) -> str:
        return format_doubled(self.doubled)


@dataclass(frozen=True)
class ResidueClass:
    """A class p + rZ of integers or half-integers, stored as doubled value mod 2r."""

    modulus: int
    value_doubled: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "value_doubled", self.value_doubled % (2 * self.modulus))

    @classmethod
    def of(cls, x, modulus: int) -> "ResidueClass":
        return cls(modulus, to_doubled(x))

    @property
    def modulus_doubled(self) -> int:
        return 2 * self.modulus

    @property
    def parity(self) -> int:
        return self.value_doubled % 2

    @property
    def lattice(self) -> Support:
        """Support of the lattice the class lives in (Z/rZ or H/rZ)."""
        return Support.of_parity(self.parity)

    def contains(self, d: int) -> bool:
        return (d - self.value_doubled) % (2 * self.modulus) == 0

    def theta(self) -> "ResidueClass":
        return ResidueClass(self.modulus, -self.value_doubled)

    def __neg__(self) -> "ResidueClass":
        return self.theta()

    def __add__(self, k: int) -> "ResidueClass":
        """Translate the class by the integer k."""
        return ResidueClass(self.modulus, self.value_doubled + 2 * k)

    def __sub__(self, k: int) -> "ResidueClass":
        return self + (-k)

    def is_linked(self, other: "ResidueClass") -> bool:
        return other == self + 1 or other == self - 1

    def representative(self) -> Fraction | int:
        return from_doubled(self.value_doubled)

    def __str__(self) -> str:
        return f"{format_doubled(self.value_doubled)} mod {self.modulus}"


def all_classes(lattice: Support, modulus: int) -> list[ResidueClass]:
    """All classes of Z/rZ (lattice INT) or H/rZ (lattice HALF), in increasing order."""
    start = lattice.cell_parity
    return [ResidueClass(modulus, start + 2 * k) for k in range(modulus)]


def _count_cells(lo: int, hi: int, parity: int) -> int:
    """Number of doubled positions d with lo <= d < hi and d of the given parity."""
    if hi <= lo:
        return 0
    return (hi - parity + 1) // 2 - (lo - parity + 1) // 2


def _canonical(left: int, bits: str) -> tuple[int, str]:
    stripped = bits.lstrip("1")
    left += 2 * (len(bits) - len(stripped))
    return left, stripped.rstrip("0")


@dataclass(frozen=True)
class Sequence:
    """Basis element of the Fock space on Z (support INT) or H (support HALF)."""

    support: Support
    left: int
    bits: str = ""

    def __post_init__(self):
        support = Support(self.support)
        if self.left % 2 != support.cell_parity:
            raise SupportMismatch(f"window start {self.left} (doubled) is not a {support.value} cell")
        if self.bits.strip("01"):
            raise ValueError("bits must be a 0/1 string")
        left, bits = _canonical(self.left, self.bits)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "bits", bits)

    # construction

    @classmethod
    def from_cells(cls, support: Support, below: int, ones: Iterable[int] = ()) -> "Sequence":
        """Sequence with 1 at every cell d < below and at the given doubled cells."""
        support = Support(support)
        par = support.cell_parity
        left = below if below % 2 == par else below + 1
        ones = sorted(set(d for d in ones if d >= left))
        for d in ones:
            if d % 2 != par:
                raise SupportMismatch(f"doubled position {d} is not a {support.value} cell")
        if not ones:
            return cls(support, left, "")
        width = (ones[-1] - left) // 2 + 1
        cells = ["0"] * width
        for d in ones:
            cells[(d - left) // 2] = "1"
        return cls(support, left, "".join(cells))

    @classmethod
    def vacuum(cls, support: Support = Support.INT, charge: int = 0) -> "Sequence":
        """The sequence with 1 exactly at the cells i < charge + 1/2."""
        return cls.from_cells(support, 2 * charge + 1)

    # basic queries

    @property
    def right(self) -> int:
        """Doubled position of the first cell right of the window."""
        return self.left + 2 * len(self.bits)

    def at(self, d: int) -> int:
        """Value a(i) at the doubled cell position d."""
        if d % 2 != self.support.cell_parity:
            raise SupportMismatch(f"doubled position {d} is not a {self.support.value} cell")
        if d < self.left:
            return 1
        if d >= self.right:
            return 0
        return 1 if self.bits[(d - self.left) // 2] == "1" else 0

    def __call__(self, i) -> int:
        return self.at(to_doubled(i))

    def ones(self, lo: int) -> list[int]:
        """Doubled positions of all 1-cells at or above lo, in increasing order."""
        par = self.support.cell_parity
        start = lo if lo % 2 == par else lo + 1
        out = list(range(start, min(self.left, self.right), 2)) if start < self.left else []
        for k, b in enumerate(self.bits):
            d = self.left + 2 * k
            if b == "1" and d >= start:
                out.append(d)
        return out

    @cached_property
    def charge(self) -> int:
        par = self.support.cell_parity
        pos_ones = _count_cells(1, self.left, par)
        nonpos_zeros = _count_cells(self.right, 1, par)
        for k, b in enumerate(self.bits):
            d = self.left + 2 * k
            if d > 0 and b == "1":
                pos_ones += 1
            elif d <= 0 and b == "0":
                nonpos_zeros += 1
        return pos_ones - nonpos_zeros

    @cached_property
    def _moves(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        # scan the window padded with one forced 1 on the left and one forced 0 on the right
        ext = "1" + self.bits + "0"
        base = self.left - 1
        e_moves, f_moves = [], []
        for k in range(len(ext) - 1):
            pair = ext[k : k + 2]
            if pair == "01":
                e_moves.append(base + 2 * k)
            elif pair == "10":
                f_moves.append(base + 2 * k)
        return tuple(e_moves), tuple(f_moves)

    @property
    def e_moves(self) -> tuple[int, ...]:
        """Doubled indices j with e_j a != 0, increasing."""
        return self._moves[0]

    @property
    def f_moves(self) -> tuple[int, ...]:
        """Doubled indices j with f_j a != 0, increasing."""
        return self._moves[1]

    def _swap(self, j: int, lower: str, upper: str) -> "Sequence":
        # set cells j-1 and j+1 (doubled), both within the padded window
        start = self.left - 2
        ext = "1" + self.bits + "0"
        k = (j - 1 - start) // 2
        new = ext[:k] + lower + upper + ext[k + 2 :]
        left, bits = _canonical(start, new)
        return Sequence(self.support, left, bits)

    def translate(self, steps: int) -> "Sequence":
        """The sequence i -> a(i - steps); raises the charge by ``steps``."""
        return Sequence(self.support, self.left + 2 * steps, self.bits)

    # serialization

    def to_json(self) -> dict:
        return {"support": self.support.value, "left": self.left, "bits": self.bits}

    @classmethod
    def from_json(cls, data: Mapping) -> "Sequence":
        return cls(Support(data["support"]), int(data["left"]), str(data["bits"]))

    def sort_key(self) -> tuple:
        return (self.support.value, self.left, self.bits)

    def __str__(self) -> str:
        return f"{self.support.value}[{format_doubled(self.left)}:{self.bits}]"


def _check_index(j: int, a: Sequence) -> None:
    if j % 2 != a.support.move_parity:
        raise SupportMismatch(
            f"move index {format_doubled(j)} is not in the dual lattice of a {a.support.value} sequence"
        )


def move_e(i, a: Sequence) -> Sequence | None:
    """Move the 1 at i+1/2 to i-1/2, or None if that is impossible."""
    j = to_doubled(i)
    _check_index(j, a)
    if a.at(j + 1) == 1 and a.at(j - 1) == 0:
        return a._swap(j, "1", "0")
    return None


def move_f(i, a: Sequence) -> Sequence | None:
    """Move the 1 at i-1/2 to i+1/2, or None if that is impossible."""
    j = to_doubled(i)
    _check_index(j, a)
    if a.at(j - 1) == 1 and a.at(j + 1) == 0:
        return a._swap(j, "0", "1")
    return None


def _apply_e_unchecked(j: int, a: Sequence) -> Sequence:
    return a._swap(j, "1", "0")


def _apply_f_unchecked(j: int, a: Sequence) -> Sequence:
    return a._swap(j, "0", "1")


# ---------------------------------------------------------------------------
# counting statistics

_KINDS = {"e": (1, 0), "f": (0, 1), "e-f": (1, -1), "f-e": (-1, 1)}


def _kind(kind: str) -> tuple[int, int]:
    try:
        return _KINDS[kind.replace("−", "-").replace(" ", "")]
    except KeyError:
        raise ValueError(f"unknown statistic kind {kind!r}; expected one of {sorted(_KINDS)}") from None


@lru_cache(maxsize=1 << 16)
def class_moves(a: Sequence, modulus: int) -> tuple[dict, dict]:
    """Moves of ``a`` grouped by doubled residue mod 2*modulus, each list increasing."""
    m2 = 2 * modulus
    e_by: dict[int, list[int]] = {}
    f_by: dict[int, list[int]] = {}
    for j in a.e_moves:
        e_by.setdefault(j % m2, []).append(j)
    for j in a.f_moves:
        f_by.setdefault(j % m2, []).append(j)
    return e_by, f_by


_EMPTY: list[int] = []


def _counts_right(lst: list[int], j: int) -> int:
    return len(lst) - bisect.bisect_right(lst, j)


def _counts_left(lst: list[int], j: int) -> int:
    return bisect.bisect_left(lst, j)


def stat_R(kind: str, r: int, j, a: Sequence) -> int:
    """Signed count of moves at k in j + r*Z_{>0}."""
    ce, cf = _kind(kind)
    jd = to_doubled(j)
    _check_index(jd, a)
    e_by, f_by = class_moves(a, r)
    c = jd % (2 * r)
    return ce * _counts_right(e_by.get(c, _EMPTY), jd) + cf * _counts_right(f_by.get(c, _EMPTY), jd)


def stat_L(kind: str, r: int, j, a: Sequence) -> int:
    """Signed count of moves at k in j - r*Z_{>0}."""
    ce, cf = _kind(kind)
    jd = to_doubled(j)
    _check_index(jd, a)
    e_by, f_by = class_moves(a, r)
    c = jd % (2 * r)
    return ce * _counts_left(e_by.get(c, _EMPTY), jd) + cf * _counts_left(f_by.get(c, _EMPTY), jd)


def stat_T(kind: str, r: int, pbar: ResidueClass, a: Sequence) -> int:
    """Signed count of moves over the whole class pbar."""
    ce, cf = _kind(kind)
    if pbar.modulus != r:
        raise ValueError(f"class {pbar} does not have modulus {r}")
    if pbar.parity != a.support.move_parity:
        raise SupportMismatch(f"class {pbar} is not in the dual lattice of a {a.support.value} sequence")
    e_by, f_by = class_moves(a, r)
    c = pbar.value_doubled
    return ce * len(e_by.get(c, _EMPTY)) + cf * len(f_by.get(c, _EMPTY))


# ---------------------------------------------------------------------------
# Fock vectors


class FockVector:
    """Finite linear combination of sequences with Laurent polynomial coefficients."""

    __slots__ = ("support", "_terms")

    def __init__(self, support: Support, terms: Mapping[Sequence, LaurentPoly] | None = None):
        self.support = Support(support)
        self._terms: dict[Sequence, LaurentPoly] = {}
        if terms:
            for a, c in terms.items():
                if a.support is not self.support:
                    raise SupportMismatch("sequence support differs from vector support")
                if c:
                    self._terms[a] = c

    @classmethod
    def basis(cls, a: Sequence, coeff: LaurentPoly | int = 1) -> "FockVector":
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        return cls(a.support, {a: c})

    @classmethod
    def zero(cls, support: Support) -> "FockVector":
        return cls(support)

    def items(self):
        return self._terms.items()

    def __iter__(self) -> Iterator[Sequence]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __getitem__(self, a: Sequence) -> LaurentPoly:
        return self._terms.get(a, ZERO)

    def coefficient(self, a: Sequence) -> LaurentPoly:
        return self._terms.get(a, ZERO)

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.support is other.support and self._terms == other._terms

    def __hash__(self):
        raise TypeError("FockVector is mutable-by-construction and not hashable")

    def __add__(self, other: "FockVector") -> "FockVector":
        return fv_add(self, other)

    def __sub__(self, other: "FockVector") -> "FockVector":
        return fv_add(self, fv_scale(LaurentPoly.const(-1), other))

    def __neg__(self) -> "FockVector":
        return fv_scale(LaurentPoly.const(-1), self)

    def __rmul__(self, c) -> "FockVector":
        if isinstance(c, int):
            c = LaurentPoly.const(c)
        return fv_scale(c, self)

    def sorted_items(self) -> list[tuple[Sequence, LaurentPoly]]:
        return sorted(self._terms.items(), key=lambda t: (t[0].left, t[0].bits))

    def to_json(self) -> list:
        return [[a.to_json(), c.to_json()] for a, c in self.sorted_items()]

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"({c})*{a}" for a, c in self.sorted_items())


def _accumulate(out: dict[Sequence, LaurentPoly], a: Sequence, c: LaurentPoly) -> None:
    s = out.get(a)
    if s is None:
        if c:
            out[a] = c
        return
    s = lp_add(s, c)
    if s:
        out[a] = s
    else:
        del out[a]


def fv_add(x: FockVector, y: FockVector) -> FockVector:
    if not y._terms:
        return x
    if not x._terms:
        return y
    if x.support is not y.support:
        raise SupportMismatch("cannot add vectors on different supports")
    out = dict(x._terms)
    for a, c in y._terms.items():
        _accumulate(out, a, c)
    res = FockVector(x.support)
    res._terms = out
    return res


def fv_scale(c: LaurentPoly | int, x: FockVector) -> FockVector:
    if isinstance(c, int):
        c = LaurentPoly.const(c)
    res = FockVector(x.support)
    if c:
        res._terms = {a: lp_mul(c, k) for a, k in x._terms.items()}
    return res


def fv_sum(vectors: Iterable[FockVector], support: Support) -> FockVector:
    out: dict[Sequence, LaurentPoly] = {}
    for x in vectors:
        if x._terms and x.support is not support:
            raise SupportMismatch("cannot add vectors on different supports")
        for a, c in x._terms.items():
            _accumulate(out, a, c)
    res = FockVector(support)
    res._terms = out
    return res


def fv_from_json(data, support: Support | None = None) -> FockVector:
    seqs = [(Sequence.from_json(a), LaurentPoly.from_json(c)) for a, c in data]
    sup = support if support is not None else (seqs[0][0].support if seqs else Support.INT)
    out: dict[Sequence, LaurentPoly] = {}
    for a, c in seqs:
        _accumulate(out, a, c)
    return FockVector(sup, out)


# ---------------------------------------------------------------------------
# random sampling


def random_sequence(rng: random.Random, width: int, support: Support = Support.INT) -> Sequence:
    """Uniform bits on a window of ``width`` cells starting near doubled position -width."""
    support = Support(support)
    start = -width if (-width) % 2 == support.cell_parity else -width + 1
    bits = "".join(rng.choice("01") for _ in range(width))
    return Sequence(support, start, bits)


def random_sequence_with_charge(
    rng: random.Random, width: int, support: Support, charge: int
) -> Sequence:
    """Random window as in random_sequence, translated by unit steps to the requested charge."""
    a = random_sequence(rng, width, support)
    return a.translate(charge - a.charge)
