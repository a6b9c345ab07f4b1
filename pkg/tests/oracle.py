"""Brute-force reference model used by the tests.

Sequences are expanded into explicit cell dictionaries over a padded range
and every statistic is recounted by direct enumeration.  Nothing here
imports the package's move or statistic code.
"""

from __future__ import annotations

from collections import defaultdict


class Dense:
    def __init__(self, support: str, left: int, bits: str):
        self.parity = 0 if support == "INT" else 1
        self.support = support
        cells = {}
        lo = min(left, 0) - 6
        lo -= (lo - self.parity) % 2
        hi = max(left + 2 * len(bits), 0) + 6
        for d in range(lo, hi + 1, 2):
            if d < left:
                cells[d] = 1
            elif d < left + 2 * len(bits):
                cells[d] = int(bits[(d - left) // 2])
            else:
                cells[d] = 0
        self.lo, self.hi, self.cells = lo, hi, cells

    @classmethod
    def of(cls, seq) -> "Dense":
        j = seq.to_json()
        return cls(j["support"], j["left"], j["bits"])

    def cell(self, d: int) -> int:
        if d < self.lo:
            return 1
        if d > self.hi:
            return 0
        return self.cells[d]

    def charge(self) -> int:
        pos = sum(1 for d, c in self.cells.items() if d > 0 and c == 1)
        neg = sum(1 for d, c in self.cells.items() if d <= 0 and c == 0)
        return pos - neg

    def move_indices(self):
        return range(self.lo + 1, self.hi, 2)

    def e_ok(self, i: int) -> bool:
        return self.cell(i + 1) == 1 and self.cell(i - 1) == 0

    def f_ok(self, i: int) -> bool:
        return self.cell(i - 1) == 1 and self.cell(i + 1) == 0

    def moved(self, i: int, kind: str) -> "Dense":
        out = Dense.__new__(Dense)
        out.parity, out.support, out.lo, out.hi = self.parity, self.support, self.lo, self.hi
        out.cells = dict(self.cells)
        src, dst = (i + 1, i - 1) if kind == "e" else (i - 1, i + 1)
        out.cells[src], out.cells[dst] = 0, 1
        return out

    def key(self) -> tuple:
        """(support, left, bits) of the canonical window."""
        ds = sorted(self.cells)
        left = next(d for d in ds if self.cells[d] == 0)
        last = max((d for d in ds if self.cells[d] == 1), default=left - 2)
        bits = "".join(str(self.cells[d]) for d in range(left, last + 1, 2)) if last > left else ""
        return (self.support, left, bits)

    # statistics by enumeration

    def _count(self, kind: str, indices) -> int:
        sign_e, sign_f = {"e": (1, 0), "f": (0, 1), "e-f": (1, -1), "f-e": (-1, 1)}[kind]
        return sum(sign_e * self.e_ok(k) + sign_f * self.f_ok(k) for k in indices)

    def R(self, kind: str, r: int, j: int) -> int:
        return self._count(kind, range(j + 2 * r, self.hi + 2, 2 * r))

    def L(self, kind: str, r: int, j: int) -> int:
        return self._count(kind, range(j - 2 * r, self.lo - 2, -2 * r))

    def T(self, kind: str, r: int, c: int) -> int:
        return self._count(kind, [k for k in self.move_indices() if (k - c) % (2 * r) == 0])


def _add(out, key, exp, coef=1):
    out[key][exp] += coef


def naive_apply(family: str, r: int, c: int, seq, variant: str = "STANDARD", z2: int | None = None) -> dict:
    """Basis action transcribed term by term; returns {(support, left, bits): {exp: coef}}."""
    a = Dense.of(seq)
    nc = (-c) % (2 * r)
    cls = [k for k in a.move_indices() if (k - c) % (2 * r) == 0]
    ncls = [k for k in a.move_indices() if (k - nc) % (2 * r) == 0]
    out: dict = defaultdict(lambda: defaultdict(int))
    if family == "E_HAT":
        for j in cls:
            if a.e_ok(j):
                _add(out, a.moved(j, "e").key(), a.R("e-f", r, j))
    elif family == "F_HAT":
        for j in cls:
            if a.f_ok(j):
                _add(out, a.moved(j, "f").key(), a.L("f-e", r, j))
    elif family == "K_HAT":
        _add(out, a.key(), a.T("f-e", r, c))
    elif family == "K_HAT_INV":
        _add(out, a.key(), -a.T("f-e", r, c))
    elif family == "L_HAT":
        _add(out, a.key(), a.T("f-e", r, c) + a.T("e-f", r, nc))
    elif family == "L_HAT_INV":
        _add(out, a.key(), -(a.T("f-e", r, c) + a.T("e-f", r, nc)))
    elif family in ("B_HAT", "B_HAT_Z"):
        fixed = c == nc
        pre = a.T("e-f", r, nc) - (1 if fixed else 0)
        for j in cls:
            if a.e_ok(j):
                _add(out, a.moved(j, "e").key(), pre + a.R("e-f", r, j))
        for j in ncls:
            if a.f_ok(j):
                _add(out, a.moved(j, "f").key(), a.L("f-e", r, j))
        if fixed and family == "B_HAT" and variant == "NONSTANDARD":
            _add(out, a.key(), a.T("e-f", r, c))
        if fixed and family == "B_HAT_Z" and a.cell(z2) == 0:
            _add(out, a.key(), a.T("e-f", r, c))
    else:
        raise ValueError(family)
    return {k: {e: v for e, v in d.items() if v} for k, d in out.items() if any(d.values())}


def as_plain(vec) -> dict:
    """FockVector -> the same dictionary shape as naive_apply."""
    out = {}
    for a, c in vec.items():
        j = a.to_json()
        out[(j["support"], j["left"], j["bits"])] = dict(c.items())
    return out
