"""Tensor rules with the natural module, Weyl characters, and the theorem-level comparisons."""

from __future__ import annotations

import heapq
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product

from .laurent import LaurentPoly
from .linkage import LinkageContext, linked, positive_roots
from .operators import apply_sum_B, eval_decomposition, iterated_sum, per_class_contributions, project_embedded
from .weights import Family, LieType, NotDominant, Weight, dominant_weights, extract, is_dominant, rho

MAX_CHARACTER_RANK = 4


class RankTooLarge(ValueError):
    pass


class PeelingFailure(AssertionError):
    pass


# ---------------------------------------------------------------------------
# tensoring with the natural module


def tensor_natural(type: LieType, lam: Weight) -> Counter:
    """Highest weights of lam (x) natural module, each with multiplicity one."""
    if type.family is Family.A:
        raise ValueError("the tensor rule is implemented for families C, B_INT, B_HALF")
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    out: Counter = Counter()
    for i in range(type.rank):
        for sign in (1, -1):
            mu = lam.plus_eps(i, sign)
            if is_dominant(type, mu):
                out[mu] += 1
    if type.family is not Family.C and lam.coords2[-1] > 0:
        out[lam] += 1
    return out


def iterate_tensor_natural(type: LieType, lam: Weight, reps: int) -> Counter:
    current = Counter({lam: 1})
    for _ in range(reps):
        nxt: Counter = Counter()
        for mu, k in current.items():
            for nu, j in tensor_natural(type, mu).items():
                nxt[nu] += k * j
        current = nxt
    return current


# ---------------------------------------------------------------------------
# characters


def _root_family(type: LieType) -> str:
    return type.family.root_family


@lru_cache(maxsize=None)
def _weyl_group(fam: str, n: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...], int], ...]:
    """Elements as (permutation, signs, determinant)."""
    out = []
    sign_choices = [(1,) * n] if fam == "A" else list(product((1, -1), repeat=n))
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        for signs in sign_choices:
            det = (-1) ** inv
            for s in signs:
                det *= s
            out.append((perm, signs, det))
    return tuple(out)


def _act(w, x: tuple[int, ...]) -> tuple[int, ...]:
    perm, signs, _ = w
    return tuple(signs[k] * x[perm[k]] for k in range(len(x)))


def _divide_by_string(p: dict, alpha: tuple[int, ...]) -> dict:
    """Exact quotient of p by (1 - e^{-alpha}); q(mu) = sum over k >= 0 of p(mu + k alpha)."""
    # Group keys by alpha-string, indexing each point by its step along alpha.
    pivot = next(i for i, a in enumerate(alpha) if a)
    strings: dict[tuple, dict[int, int]] = defaultdict(dict)
    for mu, c in p.items():
        k, rem = divmod(mu[pivot], alpha[pivot])
        base = tuple(m - k * a for m, a in zip(mu, alpha))
        strings[base][k] = c
    q: dict = {}
    for base, pts in strings.items():
        total = 0
        for k in range(max(pts), min(pts) - 1, -1):
            total += pts.get(k, 0)
            if total:
                q[tuple(b + k * a for b, a in zip(base, alpha))] = total
        if total:
            raise PeelingFailure("Weyl numerator is not divisible by the denominator")
    return q


def _character2(fam: str, n: int, lam2: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Character of the irreducible module of highest weight lam2 (doubled), as doubled weights."""
    if n > MAX_CHARACTER_RANK:
        raise RankTooLarge(f"characters are computed up to rank {MAX_CHARACTER_RANK}")
    rho2 = rho(LieType(Family.C if fam == "C" else Family.B_HALF if fam == "B" else Family.A, n, relaxed=True)).coords2
    shifted = tuple(a + b for a, b in zip(lam2, rho2))
    num: dict = defaultdict(int)
    for w in _weyl_group(fam, n):
        num[_act(w, shifted)] += w[2]
    p = {k: c for k, c in num.items() if c}
    for root in positive_roots(fam, n):
        alpha2 = tuple(2 * c for c in root.vector(n))
        q = _divide_by_string(p, alpha2)
        half = root.vector(n)  # alpha/2 in doubled coordinates
        p = {tuple(m - h for m, h in zip(mu, half)): c for mu, c in q.items()}
    return p


def weyl_character(type: LieType, lam: Weight) -> dict[Weight, int]:
    """Weight multiplicities of the irreducible module with highest weight lam."""
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    ch = _character2(_root_family(type), type.rank, lam.coords2)
    return {Weight(type, mu): c for mu, c in ch.items()}


def weyl_dimension(type: LieType, lam: Weight) -> int:
    fam = _root_family(type)
    r = rho(type).coords2
    x = tuple(a + b for a, b in zip(lam.coords2, r))
    num, den = Fraction(1), Fraction(1)
    for root in positive_roots(fam, type.rank):
        a = root.vector(type.rank)
        num *= sum(p * q for p, q in zip(x, a))
        den *= sum(p * q for p, q in zip(r, a))
    result = num / den
    if result.denominator != 1:
        raise AssertionError(f"non-integral dimension {result}")
    return int(result)


def freudenthal_character(type: LieType, lam: Weight) -> dict[Weight, int]:
    """Weight multiplicities by Freudenthal's recursion; an independent check on weyl_character."""
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    fam = _root_family(type)
    n = type.rank
    roots = [root.vector(n) for root in positive_roots(fam, n)]
    roots2 = [tuple(2 * c for c in a) for a in roots]
    r2 = rho(type).coords2

    def norm(x):
        return sum(c * c for c in x)

    def height(x):
        return sum(a * b for a, b in zip(x, r2))

    top = norm(tuple(a + b for a, b in zip(lam.coords2, r2)))
    mult: dict[tuple[int, ...], int] = {lam.coords2: 1}
    heap = [(-height(lam.coords2), lam.coords2)]
    queued = {lam.coords2}
    while heap:
        _, mu = heapq.heappop(heap)
        if mu != lam.coords2:
            acc = 0
            for a2 in roots2:
                k = 1
                while True:
                    nu = tuple(m + k * a for m, a in zip(mu, a2))
                    if nu not in mult:
                        break
                    acc += mult[nu] * sum(x * y for x, y in zip(nu, a2))
                    k += 1
            den = top - norm(tuple(a + b for a, b in zip(mu, r2)))
            # doubled coordinates: the pairing picks up a factor 4 on both sides
            value = Fraction(2 * acc, den) if den else Fraction(0)
            if value.denominator != 1 or value < 0:
                raise AssertionError(f"non-integral multiplicity {value} at {mu}")
            if not value:
                continue
            mult[mu] = int(value)
        for a2 in roots2:
            nu = tuple(m - a for m, a in zip(mu, a2))
            if nu not in queued:
                queued.add(nu)
                heapq.heappush(heap, (-height(nu), nu))
    return {Weight(type, mu): c for mu, c in mult.items()}


def _natural_character2(fam: str, n: int) -> dict[tuple[int, ...], int]:
    out: dict = {}
    for i in range(n):
        for s in (2, -2):
            x = [0] * n
            x[i] = s
            out[tuple(x)] = 1
    if fam == "B":
        out[(0,) * n] = 1
    return out


def tensor_oracle(type: LieType, lam: Weight) -> Counter:
    """Decompose ch(lam) * ch(natural) by repeatedly removing the character of the largest weight."""
    if not is_dominant(type, lam):
        raise NotDominant(f"{lam} is not dominant for {type}")
    fam = _root_family(type)
    n = type.rank
    left = _character2(fam, n, lam.coords2)
    prod: dict = defaultdict(int)
    for mu, a in left.items():
        for nu, b in _natural_character2(fam, n).items():
            prod[tuple(x + y for x, y in zip(mu, nu))] += a * b
    remaining = {k: c for k, c in prod.items() if c}
    out: Counter = Counter()
    while remaining:
        top = max(remaining)
        k = remaining[top]
        if k < 0:
            raise PeelingFailure(f"negative multiplicity {k} at {top}")
        out[Weight(type, top)] += k
        for mu, c in _character2(fam, n, top).items():
            v = remaining.get(mu, 0) - k * c
            if v:
                remaining[mu] = v
            else:
                remaining.pop(mu, None)
    return out


# ---------------------------------------------------------------------------
# theorem checks


def _weights_json(c: Counter) -> list:
    return [{"weight": w.labels(), "mult": m} for w, m in sorted(c.items(), key=lambda t: t[0].coords2, reverse=True)]


@dataclass
class TheoremReport:
    type: LieType
    ell: int
    weight: Weight
    expected: Counter
    got: Counter
    mismatch: dict | None = None

    @property
    def passed(self) -> bool:
        return self.mismatch is None

    def to_json(self) -> dict:
        return {
            "family": self.type.family.value,
            "rank": self.type.rank,
            "ell": self.ell,
            "weight": self.weight.labels(),
            "pass": self.passed,
            "expected": _weights_json(self.expected),
            "got": _weights_json(self.got),
            "mismatch": self.mismatch,
        }


def _uniqueness_violation(type: LieType, ell: int, lam: Weight, outputs) -> dict | None:
    sources: dict[Weight, set[str]] = defaultdict(set)
    for op, vec in per_class_contributions(type, ell, lam):
        for a, c in vec.items():
            if c.eval_one():
                sources[extract(type, a)].add(str(op))
    ctx = LinkageContext(type, ell)
    ws = sorted(outputs, key=lambda w: w.coords2, reverse=True)
    for i, mu in enumerate(ws):
        for nu in ws[i + 1 :]:
            if not linked(mu, nu, ctx):
                continue
            pm, pn = sources.get(mu, set()), sources.get(nu, set())
            if len(pm) != 1 or pm != pn:
                return {
                    "kind": "uniqueness",
                    "pair": [mu.labels(), nu.labels()],
                    "sources": [sorted(pm), sorted(pn)],
                }
    return None


def check_theorem(type: LieType, ell: int, lam: Weight) -> TheoremReport:
    """Compare the projected operator sum at v = 1 with the tensor rule, plus the uniqueness clause."""
    expected = tensor_natural(type, lam)
    got = eval_decomposition(project_embedded(type, apply_sum_B(type, ell, lam)), type)
    report = TheoremReport(type, ell, lam, expected, got)
    if got != expected:
        diff = sorted(set(got) ^ set(expected) | {w for w in got if got[w] != expected.get(w)}, key=lambda w: w.coords2)
        w = diff[-1]
        report.mismatch = {"kind": "multiset", "weight": w.labels(), "expected": expected.get(w, 0), "got": got.get(w, 0)}
        return report
    report.mismatch = _uniqueness_violation(type, ell, lam, expected)
    return report


@dataclass
class GridReport:
    total: int = 0
    passed: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.total == self.passed

    def to_json(self) -> dict:
        return {"total": self.total, "pass": self.passed, "failures": self.failures}


def check_theorem_grid(type: LieType, ell: int, max_coord, max_failures: int = 20) -> GridReport:
    grid = GridReport()
    for lam in dominant_weights(type, max_coord):
        rep = check_theorem(type, ell, lam)
        grid.total += 1
        if rep.passed:
            grid.passed += 1
        elif len(grid.failures) < max_failures:
            grid.failures.append(rep.to_json())
    return grid


@dataclass
class IteratedReport:
    type: LieType
    ell: int
    weight: Weight
    reps: int
    expected: Counter
    got: Counter
    coefficients: dict[Weight, LaurentPoly]

    @property
    def passed(self) -> bool:
        return self.expected == self.got

    def to_json(self) -> dict:
        return {
            "family": self.type.family.value,
            "rank": self.type.rank,
            "ell": self.ell,
            "weight": self.weight.labels(),
            "reps": self.reps,
            "pass": self.passed,
            "coefficients": [
                {"weight": w.labels(), "coeff": c.to_json(), "mult": c.eval_one()}
                for w, c in sorted(self.coefficients.items(), key=lambda t: t[0].coords2, reverse=True)
            ],
            "expected": _weights_json(self.expected),
        }


def check_iterated(type: LieType, ell: int, lam: Weight, reps: int) -> IteratedReport:
    """iterated_sum at v = 1 against the reps-fold tensor rule, at the rank carried by ``type``."""
    coeffs = iterated_sum(type, ell, lam, reps)
    got = Counter({w: c.eval_one() for w, c in coeffs.items() if c.eval_one()})
    expected = iterate_tensor_natural(type, lam, reps)
    return IteratedReport(type, ell, lam, reps, expected, got, coeffs)
