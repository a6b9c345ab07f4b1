"""Linkage under the l-scaled affine reflection group W_l.

Points are rho-shifted weights, handled as tuples of doubled coordinates.
W_l is generated by the affine reflections

    s_{alpha,k}: x -> x - ((x, alpha^vee) - k * l_alpha) * alpha,   l_alpha = l / gcd(l, d_alpha),

over all positive roots alpha and integers k.  Two points are linked when
they lie in one W_l-orbit.  This is decided by folding each point into the
closed fundamental alcove of the reflection arrangement, which is a strict
fundamental domain; a bounded breadth-first orbit search serves as an
independent cross-check.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import gcd

from .fockseq import format_doubled, move_e, move_f, to_doubled
from .weights import Family, LieType, Weight, dominant_weights, embed, extract, rho


class FamilyMismatch(ValueError):
    pass


class TypeMismatch(ValueError):
    pass


class CaseInapplicable(ValueError):
    pass


class RootKind(str, Enum):
    MINUS = "MINUS_ij"
    PLUS = "PLUS_ij"
    SINGLE = "SINGLE_i"


@dataclass(frozen=True)
class Root:
    """Positive root eps_i - eps_j, eps_i + eps_j, or the single root on eps_i (1-based indices)."""

    family: str
    kind: RootKind
    i: int
    j: int = 0

    def __post_init__(self):
        if self.family not in ("A", "B", "C"):
            raise FamilyMismatch(f"unknown root family {self.family!r}")
        if self.kind is RootKind.SINGLE:
            if self.family == "A":
                raise FamilyMismatch("type A has no single roots")
        elif not self.i < self.j:
            raise ValueError("pair roots need i < j")
        if self.kind is RootKind.PLUS and self.family == "A":
            raise FamilyMismatch("type A has no roots eps_i + eps_j")

    def vector(self, n: int) -> tuple[int, ...]:
        v = [0] * n
        if self.kind is RootKind.SINGLE:
            v[self.i - 1] = 2 if self.family == "C" else 1
        else:
            v[self.i - 1] = 1
            v[self.j - 1] = 1 if self.kind is RootKind.PLUS else -1
        return tuple(v)

    def coroot(self, n: int) -> tuple[int, ...]:
        v = [0] * n
        if self.kind is RootKind.SINGLE:
            v[self.i - 1] = 1 if self.family == "C" else 2
        else:
            v[self.i - 1] = 1
            v[self.j - 1] = 1 if self.kind is RootKind.PLUS else -1
        return tuple(v)

    @property
    def d(self) -> int:
        """Squared-length normalisation: long roots have d = 2, short roots d = 1."""
        if self.family == "A":
            return 1
        long_single = self.family == "C"
        is_single = self.kind is RootKind.SINGLE
        return 2 if is_single == long_single else 1

    def __str__(self) -> str:
        if self.kind is RootKind.SINGLE:
            return f"beta_{self.i}"
        sign = "+" if self.kind is RootKind.PLUS else "-"
        return f"beta_{self.i}{self.j}^{sign}"


def positive_roots(family: str, n: int) -> list[Root]:
    out = []
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            out.append(Root(family, RootKind.MINUS, i, j))
            if family != "A":
                out.append(Root(family, RootKind.PLUS, i, j))
        if family != "A":
            out.append(Root(family, RootKind.SINGLE, i))
    return out


@dataclass(frozen=True)
class _RootData:
    root: Root
    alpha: tuple[int, ...]
    coroot: tuple[int, ...]
    step2: int  # 2 * l_alpha


def _pair2(x2, coroot) -> int:
    """Doubled pairing (x, alpha^vee) for doubled coordinates x2."""
    return sum(a * b for a, b in zip(x2, coroot) if b)


@dataclass(frozen=True)
class LinkageContext:
    type: LieType
    ell: int
    check_bounds: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.check_bounds:
            if self.ell <= 3:
                raise ValueError("linkage needs ell > 3")
            if self.family == "B" and self.ell % 2 == 0 and self.ell // 2 <= 3:
                raise ValueError("type B with even ell needs ell/2 > 3")

    @property
    def family(self) -> str:
        return self.type.family.root_family

    @property
    def rank(self) -> int:
        return self.type.rank

    def ell_alpha(self, root: Root) -> int:
        return self.ell // gcd(self.ell, root.d)

    @cached_property
    def roots(self) -> tuple[_RootData, ...]:
        n = self.rank
        return tuple(
            _RootData(r, r.vector(n), r.coroot(n), 2 * self.ell_alpha(r))
            for r in positive_roots(self.family, n)
        )

    @cached_property
    def _alcove(self) -> tuple[tuple[tuple[_RootData, int, int], ...], tuple[Fraction, ...]]:
        """Walls (root, k, side) of the fundamental alcove and an interior point (doubled)."""
        n, ell, fam = self.rank, self.ell, self.family
        by_root = {rd.root: rd for rd in self.roots}
        walls = []
        for i in range(1, n):
            walls.append((by_root[Root(fam, RootKind.MINUS, i, i + 1)], 0))
        if fam == "A":
            if n >= 2:
                walls.append((by_root[Root(fam, RootKind.MINUS, 1, n)], 1))
            p0 = [Fraction(ell * (n - i), n) for i in range(1, n + 1)]
        else:
            walls.append((by_root[Root(fam, RootKind.SINGLE, n)], 0))
            lattice_z = (fam == "C") == (ell % 2 == 0)
            if lattice_z:
                walls.append((by_root[Root(fam, RootKind.SINGLE, 1)], 1))
                c = ell
            else:
                c = ell if fam == "C" else ell // 2
                if n >= 2:
                    walls.append((by_root[Root(fam, RootKind.PLUS, 1, 2)], 1))
                else:
                    walls.append((by_root[Root(fam, RootKind.SINGLE, 1)], 1))
            p0 = [Fraction(c * (n + 1 - i), 2 * n + 2) for i in range(1, n + 1)]
        p02 = tuple(2 * p for p in p0)
        sided = []
        for rd, k in walls:
            s = _pair2(p02, rd.coroot) - k * rd.step2
            assert s != 0, "reference point lies on a wall"
            sided.append((rd, k, 1 if s > 0 else -1))
        for rd in self.roots:
            assert (_pair2(p02, rd.coroot) / rd.step2).denominator != 1, "reference point on a hyperplane"
        return tuple(sided), p02

    @property
    def interior_point(self) -> tuple[Fraction, ...]:
        return self._alcove[1]

    def wall_spacing2(self) -> int:
        """Doubled spacing of the coordinate hyperplanes x_i = const (type A: of x_i - x_j)."""
        if self.family == "A":
            return 2 * self.ell
        single = next(rd for rd in self.roots if rd.root.kind is RootKind.SINGLE)
        # x_i * coroot_i = k * l_alpha  ->  x_i in (l_alpha / coroot_i) Z
        cr = max(single.coroot)
        return Fraction(single.step2, cr)


def _check(ctx: LinkageContext, x2) -> tuple[int, ...]:
    x2 = tuple(x2)
    if len(x2) != ctx.rank:
        raise TypeMismatch(f"expected {ctx.rank} coordinates")
    return x2


def pairing(v: Weight, root: Root):
    """Exact value of (v, alpha^vee); an int when integral."""
    if v.type.family.root_family != root.family:
        raise FamilyMismatch(f"{root} does not belong to {v.type}")
    p2 = _pair2(v.coords2, root.coroot(v.type.rank))
    return p2 // 2 if p2 % 2 == 0 else Fraction(p2, 2)


def reflect2(x2: tuple[int, ...], rd: _RootData, k: int) -> tuple[int, ...]:
    t = _pair2(x2, rd.coroot) - k * rd.step2
    if t == 0:
        return x2
    return tuple(a - t * b for a, b in zip(x2, rd.alpha))


def reflect(v: Weight, root: Root, k: int, ctx: LinkageContext) -> Weight:
    """Affine reflection s_{alpha,k} applied to a rho-shifted point."""
    if v.type.family.root_family != root.family or ctx.family != root.family:
        raise FamilyMismatch(f"{root} does not belong to {v.type}")
    n = v.type.rank
    rd = _RootData(root, root.vector(n), root.coroot(n), 2 * ctx.ell_alpha(root))
    return Weight(v.type, reflect2(v.coords2, rd, k))


def separating_count(ctx: LinkageContext, x2) -> int:
    """Number of hyperplanes H_{alpha,k} strictly between x and the alcove's interior point."""
    p02 = ctx.interior_point
    total = 0
    for rd in ctx.roots:
        a = Fraction(_pair2(x2, rd.coroot), rd.step2)
        b = _pair2(p02, rd.coroot) / rd.step2
        if a < b:
            total += (b.__floor__()) - (a.__floor__())
        elif a > b:
            total += (-((-a).__floor__())) - b.__floor__() - 1
    return total


def canonical2(ctx: LinkageContext, x2, trace: list | None = None) -> tuple[int, ...]:
    """Fold x into the closed fundamental alcove by reflecting in violated walls.

    With ``trace`` given, the separating-hyperplane count is recorded before
    every step and asserted to drop by exactly one per reflection.
    """
    x = _check(ctx, x2)
    walls = ctx._alcove[0]
    if trace is not None:
        trace.append(separating_count(ctx, x))
    while True:
        for rd, k, side in walls:
            s = _pair2(x, rd.coroot) - k * rd.step2
            if s * side < 0:
                x = tuple(a - s * b for a, b in zip(x, rd.alpha))
                if trace is not None:
                    cur = separating_count(ctx, x)
                    if cur >= trace[-1]:
                        raise AssertionError("progress measure failed to decrease")
                    trace.append(cur)
                break
        else:
            return x


def canonical(lam: Weight, ctx: LinkageContext) -> Weight:
    """Canonical representative (in the closed fundamental alcove) of the orbit of lam + rho."""
    shifted = lam + rho(lam.type)
    return Weight(lam.type, canonical2(ctx, shifted.coords2))


def _same_type(lam: Weight, mu: Weight, ctx: LinkageContext) -> None:
    if lam.type != mu.type or lam.type.family.root_family != ctx.family or lam.type.rank != ctx.rank:
        raise TypeMismatch("weights and context must share the Lie type")


def linked(lam: Weight, mu: Weight, ctx: LinkageContext) -> bool:
    """True iff lam + rho and mu + rho lie in one W_l orbit."""
    _same_type(lam, mu, ctx)
    r = rho(lam.type).coords2
    x = tuple(a + b for a, b in zip(lam.coords2, r))
    y = tuple(a + b for a, b in zip(mu.coords2, r))
    return canonical2(ctx, x) == canonical2(ctx, y)


def linked_shifted(ctx: LinkageContext, x2, y2) -> bool:
    return canonical2(ctx, x2) == canonical2(ctx, y2)


# ---------------------------------------------------------------------------
# bounded breadth-first orbit search


def default_radius2(ctx: LinkageContext, *points) -> int:
    """Doubled box radius: max |coordinate| + 2l, rounded up to a hyperplane multiple.

    Rounding makes the box an intersection of half-spaces of the arrangement,
    so minimal galleries between alcoves inside the box never leave it.
    """
    spacing = ctx.wall_spacing2()
    if ctx.family == "A":
        m = max((max(p) - min(p) for p in points), default=0)
    else:
        m = max((abs(c) for p in points for c in p), default=0)
    m += 4 * ctx.ell
    q = -(-Fraction(m) // spacing)
    return int(q * spacing)


def _in_box(ctx: LinkageContext, y, radius2: int) -> bool:
    if ctx.family == "A":
        return max(y) - min(y) <= radius2
    return all(-radius2 <= c <= radius2 for c in y)


def orbit_bfs(ctx: LinkageContext, x2, radius2: int, target=None) -> set | bool:
    """All orbit points of x inside the box, or (with target) whether target is reached.

    Moves reflect in the nearest hyperplanes of each root on either side of
    the current point, which are exactly the walls of its alcove.
    """
    x = _check(ctx, x2)
    seen = {x}
    if target is not None and x == tuple(target):
        return True
    queue = deque([x])
    roots = ctx.roots
    while queue:
        p = queue.popleft()
        for rd in roots:
            s = _pair2(p, rd.coroot)
            q, rem = divmod(s, rd.step2)
            ks = (q, q + 1) if rem else (q - 1, q + 1)
            for k in ks:
                t = s - k * rd.step2
                y = tuple(a - t * b for a, b in zip(p, rd.alpha))
                if y in seen or not _in_box(ctx, y, radius2):
                    continue
                if target is not None and y == target:
                    return True
                seen.add(y)
                queue.append(y)
    if target is not None:
        return False
    return seen


def linked_bfs(lam: Weight, mu: Weight, ctx: LinkageContext, radius2: int | None = None) -> bool:
    _same_type(lam, mu, ctx)
    r = rho(lam.type).coords2
    x = tuple(a + b for a, b in zip(lam.coords2, r))
    y = tuple(a + b for a, b in zip(mu.coords2, r))
    if radius2 is None:
        radius2 = default_radius2(ctx, x, y)
    return orbit_bfs(ctx, x, radius2, target=y)


# ---------------------------------------------------------------------------
# closed-form predictions for pairs of moves


class LemmaCase(str, Enum):
    EE = "EE"  # e_r and e_s, r != s
    FF = "FF"  # f_r and f_s, r != s
    EF_DIFF = "EF_DIFF"  # e_r and f_s, s != r + 1
    EF_SAME = "EF_SAME"  # e_{r-1} and f_r
    E_ID = "E_ID"  # e_r against lambda itself (type B)
    F_ID = "F_ID"  # f_r against lambda itself (type B)


@dataclass(frozen=True)
class OneSided:
    """Only the implication 'linked => condition' is known; ``condition`` is its truth value."""

    condition: bool


def _in_class(x2: int, offset2: int, step: int) -> bool:
    """Is x in offset + step*Z (all doubled except step)."""
    return (x2 - offset2) % (2 * step) == 0


def _moved(lam_seq, op: str, r2: int):
    return move_e(Fraction(r2, 2), lam_seq) if op == "e" else move_f(Fraction(r2, 2), lam_seq)


def lemma_moves(case: LemmaCase, r2: int, s2: int) -> tuple[tuple[str, int], tuple[str, int] | None]:
    """The two moves (kind, doubled index) a case compares; None stands for lambda itself."""
    if case is LemmaCase.EE:
        return ("e", r2), ("e", s2)
    if case is LemmaCase.FF:
        return ("f", r2), ("f", s2)
    if case is LemmaCase.EF_DIFF:
        return ("e", r2), ("f", s2)
    if case is LemmaCase.EF_SAME:
        return ("e", r2 - 2), ("f", r2)
    if case is LemmaCase.E_ID:
        return ("e", r2), None
    return ("f", r2), None


def predict_linkage(case: LemmaCase, lam: Weight, r, s, ctx: LinkageContext) -> bool | OneSided:
    """Congruence prediction for whether the two moved weights are linked."""
    case = LemmaCase(case)
    fam = lam.type.family
    if fam is Family.A:
        raise CaseInapplicable("no move lemmas for type A")
    r2 = to_doubled(r)
    s2 = to_doubled(s) if s is not None else None
    if case in (LemmaCase.EE, LemmaCase.FF) and r2 == s2:
        raise CaseInapplicable("the two moves must differ")
    if case is LemmaCase.EF_DIFF and s2 == r2 + 2:
        raise CaseInapplicable("EF_DIFF requires s != r + 1; use EF_SAME")
    if case in (LemmaCase.E_ID, LemmaCase.F_ID) and fam is Family.C:
        raise CaseInapplicable("identity cases are specific to type B")
    seq = embed(lam.type, lam)
    for mv in lemma_moves(case, r2, s2 if s2 is not None else 0):
        if mv is None:
            continue
        b = _moved(seq, *mv)
        if b is None or extract(lam.type, b) is None:
            raise CaseInapplicable(f"{mv[0]}_{Fraction(mv[1], 2)} is not defined on {lam}")

    ell = ctx.ell
    even_b = fam in (Family.B_INT, Family.B_HALF) and ell % 2 == 0
    step = ell // 2 if even_b else ell
    on_z = fam is not Family.B_HALF  # sequences on Z

    if case in (LemmaCase.EE, LemmaCase.FF):
        return (r2 - s2) % (2 * step) == 0
    if case is LemmaCase.EF_DIFF:
        return (r2 + s2) % (2 * step) == 0
    if case is LemmaCase.EF_SAME:
        if fam is Family.C:
            return _in_class(r2, 1, ell if ell % 2 else ell // 2)
        if not even_b:
            return _in_class(r2, 1, ell) if on_z else _in_class(r2, ell + 1, ell)
        c = ell // 2
        if on_z and c % 2 == 1:
            return _in_class(r2, 1, c)
        if on_z:
            return OneSided(_in_class(r2, 1, c) or _in_class(r2, c + 1, c))
        if c % 2 == 1:
            return OneSided(_in_class(r2, c + 1, c))
        return False
    # identity cases, type B
    if not even_b:
        return _in_class(r2, ell, ell) if on_z else _in_class(r2, 0, ell)
    if on_z:
        return False
    return _in_class(r2, 0, ell // 2)


def moved_weight(lam: Weight, kind: str, r2: int) -> Weight | None:
    """Weight of e_r / f_r applied to the embedded lam, or None if undefined or outside the image."""
    b = _moved(embed(lam.type, lam), kind, r2)
    return None if b is None else extract(lam.type, b)


# ---------------------------------------------------------------------------
# conformance of the predictions with the orbit computation


@dataclass
class ConformanceReport:
    type: str
    ell: int
    weights: int = 0
    checked: int = 0
    implications: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "ell": self.ell,
            "weights": self.weights,
            "checked": self.checked,
            "implications": self.implications,
            "mismatches": self.mismatches,
        }


def _case_pairs(case: LemmaCase, e_moves, f_moves):
    if case is LemmaCase.EE:
        return [(r, s) for r in e_moves for s in e_moves if r < s]
    if case is LemmaCase.FF:
        return [(r, s) for r in f_moves for s in f_moves if r < s]
    if case is LemmaCase.EF_DIFF:
        return [(r, s) for r in e_moves for s in f_moves if s != r + 2]
    if case is LemmaCase.EF_SAME:
        return [(s, None) for s in f_moves if s - 2 in e_moves]
    if case is LemmaCase.E_ID:
        return [(r, None) for r in e_moves]
    return [(r, None) for r in f_moves]


def lemma_conformance(type: LieType, ell: int, max_shifted=8, max_mismatches: int = 20) -> ConformanceReport:
    """Compare every applicable prediction with the orbit computation.

    Covers all dominant weights whose rho-shifted first coordinate is at most
    ``max_shifted``.  One-sided cases only check 'linked => condition'.
    """
    ctx = LinkageContext(type, ell)
    report = ConformanceReport(str(type), ell)
    cases = [c for c in LemmaCase if type.family is not Family.C or c not in (LemmaCase.E_ID, LemmaCase.F_ID)]
    top2 = to_doubled(max_shifted) - rho(type).coords2[0]
    for lam in dominant_weights(type, Fraction(top2, 2)):
        report.weights += 1
        seq = embed(type, lam)
        e_ok = [r for r in seq.e_moves if moved_weight(lam, "e", r) is not None]
        f_ok = [r for r in seq.f_moves if moved_weight(lam, "f", r) is not None]
        for case in cases:
            for r2, s2 in _case_pairs(case, e_ok, f_ok):
                (k1, i1), second = lemma_moves(case, r2, s2 if s2 is not None else 0)
                mu = moved_weight(lam, k1, i1)
                nu = lam if second is None else moved_weight(lam, *second)
                actual = linked(mu, nu, ctx)
                pred = predict_linkage(case, lam, Fraction(r2, 2), None if s2 is None else Fraction(s2, 2), ctx)
                if isinstance(pred, OneSided):
                    report.implications += 1
                    good = not actual or pred.condition
                else:
                    report.checked += 1
                    good = pred == actual
                if not good and len(report.mismatches) < max_mismatches:
                    report.mismatches.append(
                        {
                            "case": case.value,
                            "weight": lam.labels(),
                            "r": format_doubled(r2),
                            "s": None if s2 is None else format_doubled(s2),
                            "linked": actual,
                        }
                    )
    return report


@dataclass
class CrossCheckReport:
    type: str
    ell: int
    pairs: int = 0
    linked_pairs: int = 0
    disagreements: list = field(default_factory=list)
    measure_violations: int = 0

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.measure_violations

    def to_json(self) -> dict:
        return {
            "type": self.type,
            "ell": self.ell,
            "pairs": self.pairs,
            "linked_pairs": self.linked_pairs,
            "disagreements": self.disagreements[:20],
            "measure_violations": self.measure_violations,
        }


def cross_validate(type: LieType, ell: int, pairs: int, seed: int, max_coord=3) -> CrossCheckReport:
    """Canonical-form linkage against bounded orbit search on seeded pairs.

    Half of the second weights are drawn from the first weight's own orbit so
    that both answers occur.  One box, large enough for every weight in the
    pool, is shared so each orbit is searched once.
    """
    import random

    ctx = LinkageContext(type, ell)
    rng = random.Random(seed)
    pool = dominant_weights(type, max_coord)
    r2 = rho(type).coords2
    shifted = {lam: tuple(a + b for a, b in zip(lam.coords2, r2)) for lam in pool}
    radius2 = default_radius2(ctx, *shifted.values())
    orbits: dict[Weight, set] = {}
    report = CrossCheckReport(str(type), ell)

    def orbit(lam):
        if lam not in orbits:
            found = orbit_bfs(ctx, shifted[lam], radius2)
            for other, y in shifted.items():
                if y in found:
                    orbits[other] = found
        return orbits[lam]

    for _ in range(pairs):
        lam = rng.choice(pool)
        mu = rng.choice(pool)
        if rng.random() < 0.5:
            own = sorted(y for y in orbit(lam) if all(y[i] > y[i + 1] for i in range(len(y) - 1)) and y[-1] > 0)
            cands = [Weight(type, tuple(a - b for a, b in zip(y, r2))) for y in own]
            cands = [w for w in cands if w in shifted]
            if cands:
                mu = rng.choice(cands)
        trace: list = []
        by_form = canonical2(ctx, shifted[lam], trace) == canonical2(ctx, shifted[mu])
        if any(b >= a for a, b in zip(trace, trace[1:])):
            report.measure_violations += 1
        by_search = shifted[mu] in orbit(lam)
        report.pairs += 1
        report.linked_pairs += by_search
        if by_form != by_search:
            report.disagreements.append({"weights": [lam.labels(), mu.labels()], "canonical": by_form, "search": by_search})
    return report
