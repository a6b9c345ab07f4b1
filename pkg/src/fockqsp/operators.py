"""Operators on Fock spaces: type A generators, symmetric pair generators, theorem aggregates.

Every operator is described by an ``OperatorSpec`` and applied through one
generic ``apply``; the action on a basis sequence is memoised because the
relation checks hit the same sequences many times.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence as Seq

from .fockseq import (
    FockVector,
    ResidueClass,
    Sequence,
    Support,
    SupportMismatch,
    _apply_e_unchecked,
    _apply_f_unchecked,
    all_classes,
    class_moves,
    fv_sum,
    to_doubled,
)
from .laurent import ONE, LaurentPoly, lp_add
from .weights import Family, LieType, NotDominant, Weight, embed, extract, is_dominant, shift


class ConstraintViolated(ValueError):
    pass


class IdentityViolation(AssertionError):
    pass


class NegativeMultiplicity(AssertionError):
    pass


class NegativeCoefficient(AssertionError):
    pass


class LeftEmbeddedImage(AssertionError):
    pass


class OpFamily(str, Enum):
    E_HAT = "E_HAT"
    F_HAT = "F_HAT"
    K_HAT = "K_HAT"
    K_HAT_INV = "K_HAT_INV"
    B_HAT = "B_HAT"
    L_HAT = "L_HAT"
    L_HAT_INV = "L_HAT_INV"
    B_HAT_Z = "B_HAT_Z"


class Variant(str, Enum):
    STANDARD = "STANDARD"
    NONSTANDARD = "NONSTANDARD"


class IndexKind(str, Enum):
    FIXED = "FIXED"
    THETA_LINKED = "THETA_LINKED"
    STANDARD = "STANDARD"


def classify_index(pbar: ResidueClass) -> IndexKind:
    neg = pbar.theta()
    if neg == pbar:
        return IndexKind.FIXED
    if pbar.is_linked(neg):
        return IndexKind.THETA_LINKED
    return IndexKind.STANDARD


@dataclass(frozen=True)
class OperatorSpec:
    family: OpFamily
    modulus: int
    pbar: ResidueClass
    variant: Variant = Variant.STANDARD
    z: int | None = None  # doubled position, B_HAT_Z only

    def __post_init__(self):
        object.__setattr__(self, "family", OpFamily(self.family))
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.pbar.modulus != self.modulus:
            raise ValueError(f"class {self.pbar} does not have modulus {self.modulus}")
        if self.family is OpFamily.B_HAT_Z:
            if self.pbar.lattice is not Support.INT or self.pbar.value_doubled != 0:
                raise ValueError("B_HAT_Z is defined for the class 0 of Z/rZ (sequences on H)")
            if self.z is None or (self.z - 1) % (2 * self.modulus) != 0:
                raise ValueError("B_HAT_Z needs z in 1/2 + rZ")
        elif self.z is not None:
            raise ValueError("only B_HAT_Z carries a position z")

    @property
    def sequence_support(self) -> Support:
        """Support of the sequences this operator acts on."""
        return Support.of_parity(1 - self.pbar.parity)

    def __str__(self) -> str:
        extra = ""
        if self.family is OpFamily.B_HAT and self.variant is Variant.NONSTANDARD:
            extra = ",nonstd"
        if self.z is not None:
            extra = f",z={self.z}/2"
        return f"{self.family.value}[{self.pbar}{extra}]"


# ---------------------------------------------------------------------------
# basis action


def _e_terms(a: Sequence, e_list, f_list, offset: int):
    """Pairs (e_j a, exponent offset + R^{e-f}(j)) for j in e_list."""
    n = len(e_list)
    out = []
    for t, j in enumerate(e_list):
        r_e = n - t - 1
        r_f = len(f_list) - bisect_right(f_list, j)
        out.append((_apply_e_unchecked(j, a), offset + r_e - r_f))
    return out


def _f_terms(a: Sequence, e_list, f_list):
    """Pairs (f_j a, exponent L^{f-e}(j)) for j in f_list."""
    out = []
    for t, j in enumerate(f_list):
        out.append((_apply_f_unchecked(j, a), t - bisect_left(e_list, j)))
    return out


_NONE: tuple = ()


@lru_cache(maxsize=1 << 18)
def apply_basis(op: OperatorSpec, a: Sequence) -> tuple[tuple[Sequence, LaurentPoly], ...]:
    """Action of ``op`` on a single basis sequence, as (sequence, coefficient) pairs."""
    if a.support is not op.sequence_support:
        raise SupportMismatch(f"{op} acts on {op.sequence_support.value} sequences, got {a.support.value}")
    r = op.modulus
    m2 = 2 * r
    c = op.pbar.value_doubled
    nc = (-c) % m2
    e_by, f_by = class_moves(a, r)
    e_c, f_c = e_by.get(c, _NONE), f_by.get(c, _NONE)
    fam = op.family
    if fam is OpFamily.K_HAT or fam is OpFamily.K_HAT_INV:
        k = len(f_c) - len(e_c)
        return ((a, LaurentPoly.monomial(k if fam is OpFamily.K_HAT else -k)),)
    if fam is OpFamily.L_HAT or fam is OpFamily.L_HAT_INV:
        e_n, f_n = e_by.get(nc, _NONE), f_by.get(nc, _NONE)
        k = (len(f_c) - len(e_c)) + (len(e_n) - len(f_n))
        return ((a, LaurentPoly.monomial(k if fam is OpFamily.L_HAT else -k)),)
    if fam is OpFamily.E_HAT:
        terms = _e_terms(a, e_c, f_c, 0)
    elif fam is OpFamily.F_HAT:
        terms = _f_terms(a, e_c, f_c)
    else:
        fixed = c == nc
        e_n, f_n = e_by.get(nc, _NONE), f_by.get(nc, _NONE)
        t_ef = len(e_n) - len(f_n)  # T^{e-f} of the negated class (equal to pbar when fixed)
        offset = t_ef - 1 if fixed else t_ef
        terms = _e_terms(a, e_c, f_c, offset) + _f_terms(a, e_n, f_n)
        if fixed:
            if fam is OpFamily.B_HAT_Z:
                if a.at(op.z) == 0:
                    terms.append((a, t_ef))
            elif op.variant is Variant.NONSTANDARD:
                terms.append((a, t_ef))
    out: dict[Sequence, LaurentPoly] = {}
    for b, k in terms:
        mono = LaurentPoly.monomial(k)
        out[b] = lp_add(out[b], mono) if b in out else mono
    return tuple((b, co) for b, co in out.items() if co)


def apply(op: OperatorSpec, x: FockVector | Sequence) -> FockVector:
    """Linear extension of the basis action."""
    if isinstance(x, Sequence):
        x = FockVector.basis(x)
    if x.is_zero():
        return FockVector(op.sequence_support)
    if x.support is not op.sequence_support:
        raise SupportMismatch(f"{op} acts on {op.sequence_support.value} sequences")
    out: dict[Sequence, LaurentPoly] = {}
    for a, c in x.items():
        for b, k in apply_basis(op, a):
            term = k if c == ONE else c * k
            s = out.get(b)
            if s is None:
                out[b] = term
            else:
                s = lp_add(s, term)
                if s:
                    out[b] = s
                else:
                    del out[b]
    res = FockVector(op.sequence_support)
    res._terms = out
    return res


def apply_word(ops: Iterable[OperatorSpec], x: FockVector) -> FockVector:
    """Apply the operators of a word from right to left (the last one acts first)."""
    for op in reversed(list(ops)):
        x = apply(op, x)
    return x


# ---------------------------------------------------------------------------
# type A generators


def E(pbar: ResidueClass) -> OperatorSpec:
    return OperatorSpec(OpFamily.E_HAT, pbar.modulus, pbar)


def F(pbar: ResidueClass) -> OperatorSpec:
    return OperatorSpec(OpFamily.F_HAT, pbar.modulus, pbar)


def K(pbar: ResidueClass) -> OperatorSpec:
    return OperatorSpec(OpFamily.K_HAT, pbar.modulus, pbar)


def K_inv(pbar: ResidueClass) -> OperatorSpec:
    return OperatorSpec(OpFamily.K_HAT_INV, pbar.modulus, pbar)


# ---------------------------------------------------------------------------
# index systems of the symmetric pair actions


class FixedRule(str, Enum):
    """Which fixed indices get the generator with the extra identity summand."""

    ALL_STANDARD = "all-standard"
    ALL_NONSTANDARD = "all-nonstandard"
    ZERO_NONSTANDARD = "zero-nonstandard"


@dataclass(frozen=True)
class IndexSystem:
    """Index set Z/rZ or H/rZ together with the variants used at fixed indices."""

    lattice: Support
    modulus: int
    rule: FixedRule = FixedRule.ALL_STANDARD

    def __post_init__(self):
        object.__setattr__(self, "lattice", Support(self.lattice))
        object.__setattr__(self, "rule", FixedRule(self.rule))

    @property
    def sequence_support(self) -> Support:
        return Support.of_parity(1 - self.lattice.cell_parity)

    def classes(self) -> list[ResidueClass]:
        return all_classes(self.lattice, self.modulus)

    def cls(self, x) -> ResidueClass:
        p = ResidueClass(self.modulus, to_doubled(x))
        if p.lattice is not self.lattice:
            raise SupportMismatch(f"{x} is not in {'Z' if self.lattice is Support.INT else 'H'}/{self.modulus}Z")
        return p

    def kind(self, pbar: ResidueClass) -> IndexKind:
        return classify_index(pbar)

    def variant(self, pbar: ResidueClass) -> Variant:
        if classify_index(pbar) is not IndexKind.FIXED or self.rule is FixedRule.ALL_STANDARD:
            return Variant.STANDARD
        if self.rule is FixedRule.ALL_NONSTANDARD:
            return Variant.NONSTANDARD
        return Variant.NONSTANDARD if pbar.contains(0) else Variant.STANDARD

    def B(self, pbar: ResidueClass) -> OperatorSpec:
        return OperatorSpec(OpFamily.B_HAT, self.modulus, pbar, self.variant(pbar))

    def B_z(self, z2: int) -> OperatorSpec:
        return OperatorSpec(OpFamily.B_HAT_Z, self.modulus, ResidueClass(self.modulus, 0), Variant.NONSTANDARD, z2)

    def L(self, pbar: ResidueClass) -> OperatorSpec:
        return OperatorSpec(OpFamily.L_HAT, self.modulus, pbar)

    def L_inv(self, pbar: ResidueClass) -> OperatorSpec:
        return OperatorSpec(OpFamily.L_HAT_INV, self.modulus, pbar)

    def label(self) -> str:
        name = "Z" if self.lattice is Support.INT else "H"
        return f"{name}/{self.modulus}Z ({self.rule.value})"


def action_modulus(family: Family, ell: int) -> int:
    if family.root_family == "B" and ell % 2 == 0:
        return ell // 2
    return ell


def index_system(family: Family | str, ell: int, check: bool = True) -> IndexSystem:
    """Index set and fixed-index variants of the symmetric pair acting for (family, ell)."""
    family = Family(family)
    if family is Family.A:
        raise ValueError("type A uses the quantum affine generators, not an index system")
    r = action_modulus(family, ell)
    if check and r <= 3:
        raise ConstraintViolated(f"the action needs modulus > 3, got {r} for {family.value} with ell={ell}")
    lattice = Support.INT if family is Family.B_HALF else Support.HALF
    if family is Family.C:
        rule = FixedRule.ALL_STANDARD
    elif ell % 2:
        rule = FixedRule.ALL_NONSTANDARD
    else:
        rule = FixedRule.ZERO_NONSTANDARD
    return IndexSystem(lattice, r, rule)


# ---------------------------------------------------------------------------
# comparison with the type A generators


@dataclass
class IdentityReport:
    pbar: str
    kind: str
    variant: str
    checked: int

    def to_json(self) -> dict:
        return {"pbar": self.pbar, "kind": self.kind, "variant": self.variant, "checked": self.checked, "ok": True}


def typeA_composite(op: OperatorSpec, x: FockVector) -> FockVector:
    """The right-hand side of B in terms of E, F, K applied to x."""
    p = op.pbar
    if op.family is OpFamily.L_HAT:
        return apply(K(p), apply(K_inv(-p), x))
    if op.family not in (OpFamily.B_HAT, OpFamily.B_HAT_Z):
        raise ValueError("only B and L generators have a type A expression")
    if classify_index(p) is not IndexKind.FIXED:
        return apply(E(p), apply(K_inv(-p), x)) + apply(F(-p), x)
    kx = apply(K_inv(p), x)
    out = LaurentPoly.monomial(-1) * apply(E(p), kx) + apply(F(p), x)
    if op.family is OpFamily.B_HAT_Z:
        zero_at_z = FockVector(x.support, {a: c for a, c in kx.items() if a.at(op.z) == 0})
        out = out + zero_at_z
    elif op.variant is Variant.NONSTANDARD:
        out = out + kx
    return out


def compare_typeA_identity(op: OperatorSpec, samples: Iterable[FockVector | Sequence]) -> IdentityReport:
    """Check op(x) equals its type A expression on every sample; raise IdentityViolation otherwise."""
    n = 0
    for x in samples:
        if isinstance(x, Sequence):
            x = FockVector.basis(x)
        lhs = apply(op, x)
        rhs = typeA_composite(op, x)
        if lhs != rhs:
            raise IdentityViolation(f"{op} disagrees with its type A expression on {x!r}: {lhs!r} vs {rhs!r}")
        n += 1
    return IdentityReport(str(op.pbar), classify_index(op.pbar).value, op.variant.value, n)


# ---------------------------------------------------------------------------
# theorem aggregates


def step_operators(type: LieType, ell: int, lam_last_zero: bool, z2: int = 1) -> tuple[list[OperatorSpec], bool]:
    """Operators summed in one tensoring step, and whether the identity is added on top."""
    system = index_system(type.family, ell)
    ops = []
    for p in system.classes():
        if type.family is Family.B_HALF and lam_last_zero and p.value_doubled == 0:
            ops.append(system.B_z(z2))
        else:
            ops.append(system.B(p))
    add_identity = type.family is Family.B_INT and ell % 2 == 0
    return ops, add_identity


def _apply_step(ops: Seq[OperatorSpec], add_identity: bool, x: FockVector) -> FockVector:
    parts = [apply(op, x) for op in ops]
    if add_identity:
        parts.append(x)
    return fv_sum(parts, x.support)


def apply_sum_B(type: LieType, ell: int, lam: Weight) -> FockVector:
    """Sum of all B generators applied to the embedded lam, with the per-family adjustments."""
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    ops, add_identity = step_operators(type, ell, lam.coords2[-1] == 0)
    return _apply_step(ops, add_identity, FockVector.basis(embed(type, lam)))


def per_class_contributions(type: LieType, ell: int, lam: Weight) -> list[tuple[OperatorSpec, FockVector]]:
    """Each summand of apply_sum_B separately, projected onto the embedded image."""
    ops, _ = step_operators(type, ell, lam.coords2[-1] == 0)
    base = FockVector.basis(embed(type, lam))
    return [(op, project_embedded(type, apply(op, base))) for op in ops]


def project_embedded(type: LieType, x: FockVector) -> FockVector:
    keep = {a: c for a, c in x.items() if extract(type, a) is not None}
    return FockVector(x.support, keep)


def eval_decomposition(x: FockVector, type: LieType) -> Counter:
    """Multiset of weights with multiplicities obtained at v = 1."""
    out: Counter = Counter()
    for a, c in x.items():
        w = extract(type, a)
        if w is None:
            raise ValueError(f"{a} is not in the embedded image of {type}")
        m = c.eval_one()
        if m < 0:
            raise NegativeMultiplicity(f"multiplicity {m} at {w}")
        if m:
            out[w] = m
    return out


def iterated_sum(type: LieType, ell: int, lam: Weight, reps: int) -> dict[Weight, LaurentPoly]:
    """Coefficients d_{lam,mu}(v) of the reps-fold step operator applied to the shifted lam.

    ``type.rank`` = m*ell + k with 0 <= k < ell fixes the shift m.  For B_HALF the
    class 0 uses the corrected generator with z = 1/2 - m*ell at every step.
    """
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    m = type.rank // ell
    ops, add_identity = step_operators(type, ell, True, z2=1 - 2 * m * ell)
    x = FockVector.basis(shift(embed(type, lam), m, ell))
    for _ in range(reps):
        x = _apply_step(ops, add_identity, x)
    out: dict[Weight, LaurentPoly] = {}
    for a, c in x.items():
        w = extract(type, shift(a, -m, ell))
        if w is None:
            raise LeftEmbeddedImage(f"{a} left the shifted image of {type}")
        if any(coef < 0 for _, coef in c.items()):
            raise NegativeCoefficient(f"coefficient {c} of {w} has a negative entry")
        out[w] = c
    return out
