"""Relation suite over a sweep of moduli, beyond the acceptance grid.

Prints one row per (lattice, modulus, fixed-index rule) with the instance
count, evaluation count and failures, and optionally writes the full reports.

    python3 scripts/relation_sweep.py --moduli 4-12 --samples 40 --out sweep.json
"""

from __future__ import annotations

import argparse
import json
import time
from dataclasses import asdict, dataclass, field

from fockqsp.fockseq import Support
from fockqsp.operators import FixedRule, IndexSystem
from fockqsp.relcheck import check_qsp_relations, embedded_type_for, sample_pool


@dataclass
class SweepConfig:
    moduli: list[int] = field(default_factory=lambda: list(range(4, 13)))
    lattices: list[str] = field(default_factory=lambda: ["HALF", "INT"])
    rules: list[str] = field(default_factory=lambda: [r.value for r in FixedRule])
    samples: int = 40
    width: int = 24
    seed: int = 0
    out: str | None = None


def parse_range(text: str) -> list[int]:
    if "-" in text:
        lo, hi = text.split("-")
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",")]


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for lattice in cfg.lattices:
        for r in cfg.moduli:
            for rule in cfg.rules:
                system = IndexSystem(Support(lattice), r, FixedRule(rule))
                pool = sample_pool(system.sequence_support, cfg.samples, cfg.seed, cfg.width, embedded_type_for(system))
                start = time.perf_counter()
                rep = check_qsp_relations(system, pool)
                rows.append(
                    {
                        "index": system.label(),
                        "instances": rep.instances,
                        "evaluations": rep.evaluations,
                        "failures": len(rep.failures),
                        "failing": sorted({f["relation"]["name"] for f in rep.failures}),
                        "seconds": round(time.perf_counter() - start, 2),
                    }
                )
    return rows


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--moduli", type=parse_range, default=SweepConfig().moduli)
    ap.add_argument("--samples", type=int, default=SweepConfig.samples)
    ap.add_argument("--width", type=int, default=SweepConfig.width)
    ap.add_argument("--seed", type=int, default=SweepConfig.seed)
    ap.add_argument("--out")
    cfg = SweepConfig(**vars(ap.parse_args()))
    rows = run(cfg)
    for row in rows:
        failing = ",".join(row["failing"]) or "-"
        print(f"{row['index']:<28} {row['instances']:>5} {row['evaluations']:>7} {row['failures']:>3}  {failing}")
    if cfg.out:
        with open(cfg.out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
