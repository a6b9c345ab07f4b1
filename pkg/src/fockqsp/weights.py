"""Weights for types A, C and B, rho, and the embedding of dominant weights into sequences.

Coordinates are stored doubled, like positions.  Type B comes in two
families that live on different Fock spaces:

* ``B_INT``: half-integer weights, whose rho-shifted coordinates are
  integers, embedded into sequences on Z;
* ``B_HALF``: integer weights, whose rho-shifted coordinates are
  half-integers, embedded into sequences on H.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .fockseq import (
    ResidueClass,
    Sequence,
    Support,
    all_classes,
    format_doubled,
    from_doubled,
    to_doubled,
)

__all__ = [
    "Family",
    "LieType",
    "Weight",
    "ResidueClass",
    "all_classes",
    "rho",
    "is_dominant",
    "embed",
    "extract",
    "shift",
    "stabilize",
    "seq_to_partition",
    "dominant_weights",
    "NotDominant",
    "ParityMismatch",
    "ChargeOutOfRange",
    "RankOutOfRange",
]


class NotDominant(ValueError):
    pass


class ParityMismatch(ValueError):
    pass


class ChargeOutOfRange(ValueError):
    pass


class RankOutOfRange(ValueError):
    pass


class Family(str, Enum):
    A = "A"
    C = "C"
    B_INT = "B_INT"
    B_HALF = "B_HALF"

    @property
    def root_family(self) -> str:
        return "B" if self in (Family.B_INT, Family.B_HALF) else self.value

    @property
    def support(self) -> Support:
        return Support.HALF if self is Family.B_HALF else Support.INT

    @property
    def weight_parity(self) -> int:
        """Parity of doubled weight coordinates (1 means half-integers)."""
        return 1 if self is Family.B_INT else 0

    @property
    def min_rank(self) -> int:
        return {"A": 1, "C": 3, "B": 2}[self.root_family]


@dataclass(frozen=True)
class LieType:
    family: Family
    rank: int
    relaxed: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        floor = 1 if self.relaxed else self.family.min_rank
        if self.rank < floor:
            raise RankOutOfRange(
                f"rank {self.rank} is too small for family {self.family.value} (need >= {floor})"
            )

    @property
    def support(self) -> Support:
        return self.family.support

    def __str__(self) -> str:
        return f"{self.family.value}_{self.rank}"


@dataclass(frozen=True)
class Weight:
    """A coordinate vector in the epsilon basis, stored as doubled integers."""

    type: LieType
    coords2: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords2", tuple(int(c) for c in self.coords2))
        if len(self.coords2) != self.type.rank:
            raise ValueError(f"expected {self.type.rank} coordinates, got {len(self.coords2)}")

    @classmethod
    def of(cls, type: LieType, coords: Iterable) -> "Weight":
        return cls(type, tuple(to_doubled(c) for c in coords))

    @classmethod
    def zero(cls, type: LieType) -> "Weight":
        return cls(type, (0,) * type.rank)

    @property
    def coords(self) -> tuple:
        return tuple(from_doubled(c) for c in self.coords2)

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.type, tuple(a + b for a, b in zip(self.coords2, other.coords2)))

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.type, tuple(a - b for a, b in zip(self.coords2, other.coords2)))

    def plus_eps(self, i: int, sign: int = 1) -> "Weight":
        """Add sign * epsilon_i (0-based index)."""
        c = list(self.coords2)
        c[i] += 2 * sign
        return Weight(self.type, tuple(c))

    def labels(self) -> list:
        """JSON-friendly coordinates: ints when integral, 'p/2' strings otherwise."""
        return [c // 2 if c % 2 == 0 else f"{c}/2" for c in self.coords2]

    def to_json(self) -> dict:
        return {"family": self.type.family.value, "rank": self.type.rank, "coords": self.labels()}

    def __str__(self) -> str:
        return "(" + ",".join(format_doubled(c) for c in self.coords2) + ")"


def rho(type: LieType) -> Weight:
    n = type.rank
    fam = type.family.root_family
    if fam == "C":
        c = [2 * (n - i) for i in range(n)]
    elif fam == "B":
        c = [2 * (n - i) - 1 for i in range(n)]
    else:
        c = [-2 * i for i in range(n)]
    return Weight(type, tuple(c))


def _check_parity(type: LieType, lam: Weight) -> None:
    par = type.family.weight_parity
    for c in lam.coords2:
        if c % 2 != par:
            kind = "half-integral" if par else "integral"
            raise ParityMismatch(f"{type.family.value} weights must be {kind}, got {lam}")


def is_dominant(type: LieType, lam: Weight) -> bool:
    _check_parity(type, lam)
    c = lam.coords2
    if any(c[i] < c[i + 1] for i in range(len(c) - 1)):
        return False
    return c[-1] >= 0


def _mandatory_below(type: LieType) -> int:
    """Every cell with doubled position below this value holds 1 in an embedded sequence."""
    fam = type.family
    if fam is Family.A:
        return -2 * type.rank + 1
    if fam is Family.B_HALF:
        return 0
    return 1


def _image_charge(type: LieType) -> int:
    return 0 if type.family is Family.A else type.rank


def embed(type: LieType, lam: Weight) -> Sequence:
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    shifted = lam + rho(type)
    return Sequence.from_cells(type.support, _mandatory_below(type), shifted.coords2)


def embed_shifted(type: LieType, shifted: Iterable[int]) -> Sequence:
    """Sequence of a rho-shifted point given by doubled coordinates (no dominance check)."""
    return Sequence.from_cells(type.support, _mandatory_below(type), shifted)


def extract_shifted(type: LieType, a: Sequence) -> tuple[int, ...] | None:
    """Doubled rho-shifted coordinates of ``a`` if it lies in the embedded image."""
    if a.support is not type.support:
        return None
    below = _mandatory_below(type)
    if a.left < below:
        return None
    if a.charge != _image_charge(type):
        return None
    ones = a.ones(below)
    if len(ones) != type.rank:
        return None
    return tuple(reversed(ones))


def extract(type: LieType, a: Sequence) -> Weight | None:
    shifted = extract_shifted(type, a)
    if shifted is None:
        return None
    return Weight(type, shifted) - rho(type)


def in_image(type: LieType, a: Sequence) -> bool:
    return extract_shifted(type, a) is not None


def shift(a: Sequence, m: int, ell: int) -> Sequence:
    """The sequence i -> a(i + m*ell)."""
    return a.translate(-m * ell)


def stabilize(a: Sequence, reserve: int, ell: int, family: Family | str) -> tuple[int, Weight]:
    """Smallest m >= 0 such that a = shift(embed(lam), m, ell) with room for ``reserve`` operator steps.

    The leftmost 0 of ``a`` sits at z; after ``reserve`` steps it can move at
    most ``reserve`` cells to the left, so m*ell > reserve - z keeps every
    intermediate sequence inside the shifted image at rank m*ell + charge.
    """
    family = Family(family)
    if family is Family.A:
        raise ValueError("stabilize applies to families C, B_INT, B_HALF")
    if a.support is not family.support:
        raise ValueError(f"{family.value} uses {family.support.value} sequences")
    k = a.charge
    if not 0 <= k < ell:
        raise ChargeOutOfRange(f"charge {k} is outside [0, {ell})")
    z2 = a.left  # doubled position of the leftmost 0
    m = 0
    while 2 * m * ell <= 2 * reserve - z2 or m * ell + k < 1:
        m += 1
    ltype = LieType(family, m * ell + k, relaxed=True)
    lam = extract(ltype, shift(a, -m, ell))
    if lam is None:  # pragma: no cover - guarded by the choice of m
        raise AssertionError("stabilized sequence is not in the embedded image")
    return m, lam


def seq_to_partition(a: Sequence) -> tuple[int, ...]:
    """Partition of a charge-0 sequence on Z: the i-th rightmost 1 sits at lambda_i - (i - 1)."""
    if a.support is not Support.INT or a.charge != 0:
        raise ValueError("partitions correspond to charge-0 sequences on Z")
    ones = a.ones(a.left - 2)
    parts = []
    for i, d in enumerate(reversed(ones)):
        part = d // 2 + i
        if part == 0:
            break
        parts.append(part)
    return tuple(parts)


def dominant_weights(type: LieType, max_first: Fraction | int) -> list[Weight]:
    """All dominant weights with first coordinate at most max_first, in lexicographic order."""
    top = to_doubled(max_first)
    par = type.family.weight_parity
    out: list[Weight] = []

    def rec(prefix: list[int], bound: int):
        if len(prefix) == type.rank:
            out.append(Weight(type, tuple(prefix)))
            return
        c = par
        while c <= bound:
            rec(prefix + [c], c)
            c += 2

    rec([], top if top % 2 == par else top - 1)
    return out


def weight_from_text(type: LieType, text: str) -> Weight:
    parts = [p for p in text.replace(" ", "").split(",") if p]
    return Weight.of(type, parts)


def classes_for(type: LieType, modulus: int) -> list[ResidueClass]:
    return all_classes(Support.of_parity(type.support.move_parity), modulus)
