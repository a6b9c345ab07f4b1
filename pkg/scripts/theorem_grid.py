"""Tensor theorem checks on larger grids than the acceptance suite.

Each row is one (family, rank, ell) with the number of dominant weights
checked and how many passed.  FOCKQSP_THREADS spreads weights over processes.

    FOCKQSP_THREADS=4 python3 scripts/theorem_grid.py --ranks 3,4,5 --ells 5,7,8,9 --max-coord 5
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass, field
from fractions import Fraction

from fockqsp.cli import pmap
from fockqsp.grothendieck import check_theorem
from fockqsp.weights import Family, LieType, Weight, dominant_weights


@dataclass
class GridConfig:
    families: list[str] = field(default_factory=lambda: ["C", "B_INT", "B_HALF"])
    ranks: list[int] = field(default_factory=lambda: [3, 4])
    ells: list[int] = field(default_factory=lambda: [5, 7, 8, 9, 10])
    max_coord: Fraction = Fraction(4)


def _job(job):
    family, rank, ell, coords2 = job
    t = LieType(family, rank)
    return check_theorem(t, ell, Weight(t, coords2)).passed


def admissible(family: Family, rank: int, ell: int) -> bool:
    if family is Family.C and rank < 3:
        return False
    if family.root_family == "B" and ell % 2 == 0:
        return ell // 2 > 3
    return ell > 3


def run(cfg: GridConfig):
    for name in cfg.families:
        family = Family(name)
        for rank in cfg.ranks:
            for ell in cfg.ells:
                if not admissible(family, rank, ell):
                    continue
                t = LieType(family, rank)
                bound = cfg.max_coord if family is not Family.B_INT else cfg.max_coord + Fraction(1, 2)
                weights = dominant_weights(t, bound)
                start = time.perf_counter()
                results = pmap(_job, [(family, rank, ell, w.coords2) for w in weights])
                yield name, rank, ell, len(results), sum(results), time.perf_counter() - start


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--families", type=lambda s: s.split(","), default=GridConfig().families)
    ap.add_argument("--ranks", type=lambda s: [int(x) for x in s.split(",")], default=GridConfig().ranks)
    ap.add_argument("--ells", type=lambda s: [int(x) for x in s.split(",")], default=GridConfig().ells)
    ap.add_argument("--max-coord", type=Fraction, default=GridConfig.max_coord)
    cfg = GridConfig(**vars(ap.parse_args()))
    print(f"{'family':<7} {'rank':>4} {'ell':>4} {'weights':>8} {'pass':>6} {'sec':>6}")
    for name, rank, ell, total, passed, sec in run(cfg):
        print(f"{name:<7} {rank:>4} {ell:>4} {total:>8} {passed:>6} {sec:>6.1f}")


if __name__ == "__main__":
    main()
