"""Census of linkage classes among small dominant weights.

For every (type, ell) it reports how many dominant weights fall into how many
orbits of the affine reflection group, the largest class, and the outcome of
the lemma conformance sweep.

    python3 scripts/linkage_census.py --max-coord 6
"""

from __future__ import annotations

import argparse
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from fockqsp.linkage import LinkageContext, canonical, lemma_conformance
from fockqsp.weights import Family, LieType, dominant_weights


@dataclass
class CensusConfig:
    types: list[tuple[str, int]] = field(
        default_factory=lambda: [("C", 3), ("B_INT", 2), ("B_HALF", 2), ("B_INT", 3), ("B_HALF", 3)]
    )
    ells: list[int] = field(default_factory=lambda: [5, 7, 8, 9, 10])
    max_coord: Fraction = Fraction(5)
    lemma_bound: Fraction = Fraction(8)


def census(cfg: CensusConfig):
    for name, rank in cfg.types:
        t = LieType(Family(name), rank)
        for ell in cfg.ells:
            if t.family.root_family == "B" and ell % 2 == 0 and ell // 2 <= 3:
                continue
            ctx = LinkageContext(t, ell)
            classes = Counter(canonical(w, ctx).coords2 for w in dominant_weights(t, cfg.max_coord))
            conf = lemma_conformance(t, ell, cfg.lemma_bound)
            yield {
                "type": str(t),
                "ell": ell,
                "weights": sum(classes.values()),
                "classes": len(classes),
                "largest": max(classes.values()),
                "lemma_checks": conf.checked + conf.implications,
                "lemma_mismatches": len(conf.mismatches),
            }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ells", type=lambda s: [int(x) for x in s.split(",")], default=CensusConfig().ells)
    ap.add_argument("--max-coord", type=Fraction, default=CensusConfig.max_coord)
    ap.add_argument("--lemma-bound", type=Fraction, default=CensusConfig.lemma_bound)
    cfg = CensusConfig(**vars(ap.parse_args()))
    keys = ["type", "ell", "weights", "classes", "largest", "lemma_checks", "lemma_mismatches"]
    print("  ".join(f"{k:>16}" for k in keys))
    for row in census(cfg):
        print("  ".join(f"{str(row[k]):>16}" for k in keys))


if __name__ == "__main__":
    main()
