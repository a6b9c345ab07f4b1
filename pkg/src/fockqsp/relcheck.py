"""Checks of the symmetric pair presentation and the quantum affine relations on Fock space samples.

Each relation is instantiated for every admissible tuple of residue classes
and tested as an exact identity between Fock vectors on a pool of samples.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .fockseq import FockVector, ResidueClass, Sequence, Support, all_classes, random_sequence_with_charge
from .laurent import QUANTUM_TWO, V_MINUS_VINV, LaurentPoly, NotDivisible, lp_div_exact
from .operators import (
    E,
    F,
    IndexKind,
    IndexSystem,
    K,
    K_inv,
    OperatorSpec,
    apply,
    classify_index,
)
from .weights import Family, LieType, dominant_weights, embed


class ModulusTooSmall(ValueError):
    pass


class RelationViolated(AssertionError):
    pass


@dataclass(frozen=True)
class RelationInstance:
    name: str
    indices: tuple[ResidueClass, ...]
    modulus: int
    case: str = ""

    def label(self) -> str:
        idx = ",".join(str(p).split(" mod ")[0] for p in self.indices)
        extra = f":{self.case}" if self.case else ""
        return f"{self.name}{extra}({idx})"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "case": self.case,
            "indices": [str(p).split(" mod ")[0] for p in self.indices],
            "modulus": self.modulus,
        }


def _scale(c: LaurentPoly, x: FockVector) -> FockVector:
    return c * x


def _v(k: int) -> LaurentPoly:
    return LaurentPoly.monomial(k)


class _Evaluator:
    """Applies operators to samples with per-sample memoisation of words."""

    def __init__(self, x: FockVector):
        self.x = x
        self.memo: dict[tuple, FockVector] = {(): x}

    def word(self, *ops: OperatorSpec) -> FockVector:
        """ops[0] ops[1] ... ops[-1] x (rightmost acts first)."""
        key = tuple(ops)
        got = self.memo.get(key)
        if got is None:
            got = apply(ops[0], self.word(*ops[1:]))
            self.memo[key] = got
        return got


def _serre(ev: _Evaluator, x: OperatorSpec, y: OperatorSpec) -> FockVector:
    return ev.word(x, x, y) - _scale(QUANTUM_TWO, ev.word(x, y, x)) + ev.word(y, x, x)


def _commutator(ev: _Evaluator, x: OperatorSpec, y: OperatorSpec) -> FockVector:
    return ev.word(x, y) - ev.word(y, x)


def _divide(vec: FockVector, d: LaurentPoly) -> FockVector:
    return FockVector(vec.support, {a: lp_div_exact(c, d) for a, c in vec.items()})


# ---------------------------------------------------------------------------
# symmetric pair relations


def lb_exponent(p: ResidueClass, q: ResidueClass) -> tuple[int, str]:
    """Power of v in L_q B_p = v^k B_p L_q, with the case name."""
    kind = classify_index(p)
    if kind is IndexKind.FIXED:
        return 0, "fixed"
    neg_q = q.theta()
    if kind is IndexKind.STANDARD:
        if p == q:
            return 2, "p=q"
        if p == neg_q:
            return -2, "p=-q"
        if p.is_linked(q):
            return -1, "linked"
        if p.is_linked(neg_q):
            return 1, "linked-theta"
        return 0, "other"
    if p == q:
        return 3, "p=q"
    if p == neg_q:
        return -3, "p=-q"
    if p.is_linked(q) and q != p.theta():
        return -1, "linked"
    if p.is_linked(neg_q) and q != p:
        return 1, "linked-theta"
    return 0, "other"


def enumerate_relations(system: IndexSystem) -> list[RelationInstance]:
    r = system.modulus
    if r <= 3:
        raise ModulusTooSmall(f"relations are only set up for r > 3, got {r}")
    classes = system.classes()
    nonfixed = [p for p in classes if classify_index(p) is not IndexKind.FIXED]
    out: list[RelationInstance] = []
    for i, p in enumerate(nonfixed):
        for q in nonfixed[i + 1 :]:
            out.append(RelationInstance("L_COMMUTE", (p, q), r))
        out.append(RelationInstance("L_INVERSE", (p,), r))
    for q in nonfixed:
        for p in classes:
            _, case = lb_exponent(p, q)
            out.append(RelationInstance("LB", (q, p), r, f"{classify_index(p).value.lower()}:{case}"))
    for i, p in enumerate(classes):
        for q in classes[i + 1 :]:
            if not p.is_linked(q) and q != p.theta():
                out.append(RelationInstance("B_COMMUTE", (p, q), r))
    for p in classes:
        if classify_index(p) is IndexKind.STANDARD:
            out.append(RelationInstance("B_THETA_COMMUTATOR", (p,), r))
    for p in classes:
        for q in (p + 1, p - 1):
            kp, kq = classify_index(p), classify_index(q)
            if kp is not IndexKind.FIXED and kq is not IndexKind.FIXED and q != p.theta():
                out.append(RelationInstance("SERRE_PLAIN", (p, q), r))
            elif kp is IndexKind.STANDARD and kq is IndexKind.FIXED:
                out.append(RelationInstance("SERRE_FIXED_RIGHT", (p, q), r))
            elif kp is IndexKind.FIXED and kq is IndexKind.STANDARD:
                out.append(RelationInstance("SERRE_FIXED_LEFT", (p, q), r))
            elif kp is IndexKind.THETA_LINKED and q == p.theta():
                out.append(RelationInstance("SERRE_THETA_DEFORMED", (p, q), r))
    return out


def _qsp_sides(rel: RelationInstance, system: IndexSystem, ev: _Evaluator) -> tuple[FockVector, FockVector]:
    B, L, x = system.B, system.L, ev.x
    name = rel.name
    if name == "L_COMMUTE":
        p, q = rel.indices
        return ev.word(L(p), L(q)), ev.word(L(q), L(p))
    if name == "L_INVERSE":
        (p,) = rel.indices
        return ev.word(L(p), L(p.theta())), x
    if name == "LB":
        q, p = rel.indices
        k, _ = lb_exponent(p, q)
        return ev.word(L(q), B(p)), _scale(_v(k), ev.word(B(p), L(q)))
    if name == "B_COMMUTE":
        p, q = rel.indices
        return ev.word(B(p), B(q)), ev.word(B(q), B(p))
    if name == "B_THETA_COMMUTATOR":
        (p,) = rel.indices
        lhs = _commutator(ev, B(p), B(p.theta()))
        num = ev.word(L(p)) - ev.word(L(p.theta()))
        return lhs, _divide(num, V_MINUS_VINV)
    p, q = rel.indices
    lhs = _serre(ev, B(p), B(q))
    zero = FockVector(x.support)
    if name in ("SERRE_PLAIN", "SERRE_FIXED_RIGHT"):
        return lhs, zero
    if name == "SERRE_FIXED_LEFT":
        return lhs, ev.word(B(q))
    if name == "SERRE_THETA_DEFORMED":
        inner = _scale(_v(1), ev.word(L(p))) + _scale(_v(-2), ev.word(L(p.theta())))
        rhs = _scale(-QUANTUM_TWO, apply(B(p), inner))
        return lhs, rhs
    raise ValueError(f"unknown relation {name}")


# ---------------------------------------------------------------------------
# quantum affine (type A) relations


def _cartan(p: ResidueClass, q: ResidueClass) -> int:
    if p == q:
        return 2
    return -1 if p.is_linked(q) else 0


def enumerate_typeA_relations(lattice: Support, modulus: int) -> list[RelationInstance]:
    if modulus <= 2:
        raise ModulusTooSmall("type A relations need modulus > 2")
    classes = all_classes(lattice, modulus)
    out = []
    for i, p in enumerate(classes):
        for q in classes[i + 1 :]:
            out.append(RelationInstance("A_K_COMMUTE", (p, q), modulus))
    for p in classes:
        for q in classes:
            out.append(RelationInstance("A_KE", (p, q), modulus))
            out.append(RelationInstance("A_KF", (p, q), modulus))
            out.append(RelationInstance("A_EF_COMMUTATOR", (p, q), modulus))
    for i, p in enumerate(classes):
        for q in classes[i + 1 :]:
            if not p.is_linked(q):
                out.append(RelationInstance("A_E_COMMUTE", (p, q), modulus))
                out.append(RelationInstance("A_F_COMMUTE", (p, q), modulus))
    for p in classes:
        for q in (p + 1, p - 1):
            out.append(RelationInstance("A_SERRE_E", (p, q), modulus))
            out.append(RelationInstance("A_SERRE_F", (p, q), modulus))
    return out


def _typeA_sides(rel: RelationInstance, ev: _Evaluator) -> tuple[FockVector, FockVector]:
    name = rel.name
    p, q = rel.indices
    x = ev.x
    if name == "A_K_COMMUTE":
        return ev.word(K(p), K(q)), ev.word(K(q), K(p))
    if name == "A_KE":
        return ev.word(K(p), E(q)), _scale(_v(_cartan(p, q)), ev.word(E(q), K(p)))
    if name == "A_KF":
        return ev.word(K(p), F(q)), _scale(_v(-_cartan(p, q)), ev.word(F(q), K(p)))
    if name == "A_EF_COMMUTATOR":
        lhs = _commutator(ev, E(p), F(q))
        if p != q:
            return lhs, FockVector(x.support)
        return lhs, _divide(ev.word(K(p)) - ev.word(K_inv(p)), V_MINUS_VINV)
    if name == "A_E_COMMUTE":
        return ev.word(E(p), E(q)), ev.word(E(q), E(p))
    if name == "A_F_COMMUTE":
        return ev.word(F(p), F(q)), ev.word(F(q), F(p))
    if name == "A_SERRE_E":
        return _serre(ev, E(p), E(q)), FockVector(x.support)
    if name == "A_SERRE_F":
        return _serre(ev, F(p), F(q)), FockVector(x.support)
    raise ValueError(f"unknown relation {name}")


# ---------------------------------------------------------------------------
# running


@dataclass
class RelationReport:
    relations_checked: int = 0
    instances: int = 0
    evaluations: int = 0
    failures: list = field(default_factory=list)
    by_name: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "relations_checked": self.relations_checked,
            "instances": self.instances,
            "evaluations": self.evaluations,
            "by_name": dict(sorted(self.by_name.items())),
            "failures": self.failures,
        }


def _run(
    rels: list[RelationInstance],
    samples: list[FockVector],
    sides: Callable[[RelationInstance, _Evaluator], tuple[FockVector, FockVector]],
    max_failures: int,
) -> RelationReport:
    report = RelationReport(relations_checked=len({r.name for r in rels}), instances=len(rels))
    evaluators = [_Evaluator(x) for x in samples]
    for rel in rels:
        report.by_name[rel.name] = report.by_name.get(rel.name, 0) + 1
        for idx, ev in enumerate(evaluators):
            report.evaluations += 1
            try:
                lhs, rhs = sides(rel, ev)
                good = lhs == rhs
                detail = "" if good else "sides differ"
            except NotDivisible as exc:
                good, detail = False, f"not divisible: {exc}"
            if not good:
                if len(report.failures) < max_failures:
                    report.failures.append(
                        {"relation": rel.to_json(), "sample": idx, "vector": ev.x.to_json(), "detail": detail}
                    )
                break
    return report


def check_relation(rel: RelationInstance, samples: Iterable[FockVector], system: IndexSystem | None = None) -> int:
    """Verify one relation on every sample; returns the number checked or raises RelationViolated."""
    n = 0
    for x in samples:
        if isinstance(x, Sequence):
            x = FockVector.basis(x)
        ev = _Evaluator(x)
        try:
            lhs, rhs = _typeA_sides(rel, ev) if rel.name.startswith("A_") else _qsp_sides(rel, system, ev)
        except NotDivisible as exc:
            raise RelationViolated(f"{rel.label()}: exact division failed on {x!r}") from exc
        if lhs != rhs:
            raise RelationViolated(f"{rel.label()} fails on {x!r}: {lhs!r} != {rhs!r}")
        n += 1
    return n


def sample_pool(
    support: Support,
    count: int,
    seed: int,
    width: int = 30,
    embedded_type: LieType | None = None,
    charge: int | None = None,
) -> list[FockVector]:
    """Seeded mix of random window sequences and (optionally) embedded dominant weights."""
    rng = random.Random(seed)
    pool: list[FockVector] = []
    if embedded_type is not None:
        weights = dominant_weights(embedded_type, 3)
        rng.shuffle(weights)
        for w in weights[: count // 4]:
            pool.append(FockVector.basis(embed(embedded_type, w)))
    while len(pool) < count:
        w = rng.randint(max(4, width // 2), width)
        if charge is None:
            a = random_sequence_with_charge(rng, w, support, rng.randint(-3, 6))
        else:
            a = random_sequence_with_charge(rng, w, support, charge)
        pool.append(FockVector.basis(a))
    return pool


def check_qsp_relations(
    system: IndexSystem, samples: list[FockVector], max_failures: int = 20
) -> RelationReport:
    rels = enumerate_relations(system)
    return _run(rels, samples, lambda rel, ev: _qsp_sides(rel, system, ev), max_failures)


def check_typeA_relations(
    lattice: Support, modulus: int, samples: list[FockVector], max_failures: int = 20
) -> RelationReport:
    rels = enumerate_typeA_relations(lattice, modulus)
    return _run(rels, samples, _typeA_sides, max_failures)


def embedded_type_for(system: IndexSystem) -> LieType:
    """A small embedded weight family living on the same sequences as the system."""
    return LieType(Family.B_HALF, 3) if system.sequence_support is Support.HALF else LieType(Family.C, 3)
