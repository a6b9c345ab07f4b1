"""Command-line front end.  Every subcommand prints one canonical JSON document."""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .fockseq import FockVector, ResidueClass, Sequence, Support, all_classes, random_sequence_with_charge, to_doubled
from .grothendieck import check_iterated, check_theorem, tensor_natural, tensor_oracle, weyl_character, weyl_dimension
from .laurent import NotDivisible
from .linkage import LinkageContext, canonical, cross_validate, lemma_conformance, linked
from .operators import (
    E,
    F,
    FixedRule,
    IndexSystem,
    K,
    K_inv,
    apply,
    classify_index,
    compare_typeA_identity,
    eval_decomposition,
    IdentityViolation,
    index_system,
    apply_sum_B,
    project_embedded,
)
from .relcheck import (
    ModulusTooSmall,
    check_qsp_relations,
    check_typeA_relations,
    embedded_type_for,
    sample_pool,
)
from .weights import (
    Family,
    LieType,
    Weight,
    dominant_weights,
    embed,
    extract,
    stabilize,
    weight_from_text,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    family: Family | None = None
    rank: int | None = None
    ell: int | None = None
    seed: int = 42
    samples: int = 100
    width: int = 30
    max_coord: Fraction | int = 4
    output: str | None = None

    def __post_init__(self):
        if self.ell is not None:
            if self.ell <= 3:
                raise UsageError(f"ell must be > 3, got {self.ell}")
            if self.family in (Family.B_INT, Family.B_HALF) and self.ell % 2 == 0 and self.ell // 2 <= 3:
                raise UsageError(f"even ell needs ell/2 > 3 for type B, got {self.ell}")
        if self.width > 40:
            raise UsageError("window width is capped at 40")

    def lie_type(self) -> LieType:
        if self.family is None or self.rank is None:
            raise UsageError("--family and --rank are required")
        return LieType(self.family, self.rank)


def threads() -> int:
    """Worker count from FOCKQSP_THREADS (default 1)."""
    raw = os.environ.get("FOCKQSP_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"FOCKQSP_THREADS must be an integer, got {raw!r}")
    return max(1, min(n, os.cpu_count() or 1))


def pmap(fn, items: list) -> list:
    """Order-preserving map, spread over worker processes when FOCKQSP_THREADS > 1."""
    n = threads()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * n))))


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _simple(v) -> bool:
    return not isinstance(v, dict) and not (isinstance(v, list) and any(isinstance(x, dict) for x in v))


def human(obj, indent: int = 0) -> str:
    """Aligned key/value text; nested records are indented, list entries start with '-'."""
    pad = " " * indent
    if isinstance(obj, dict):
        width = max((len(str(k)) for k in obj), default=0)
        lines = []
        for k in sorted(obj):
            v = obj[k]
            if _simple(v):
                lines.append(f"{pad}{str(k).ljust(width)} : {dumps(v)}")
            else:
                lines.append(f"{pad}{k}:")
                lines.append(human(v, indent + 2))
        return "\n".join(lines)
    if isinstance(obj, list):
        if not obj:
            return pad + "(none)"
        blocks = []
        for x in obj:
            body = human(x, indent + 2) if not _simple(x) else " " * (indent + 2) + dumps(x)
            blocks.append(pad + "-" + body[indent + 1 :])
        return "\n".join(blocks)
    return pad + dumps(obj)


# ---------------------------------------------------------------------------
# argument helpers


def _family(text: str) -> Family:
    try:
        return Family(text.upper())
    except ValueError:
        raise argparse.ArgumentTypeError(f"family must be one of {[f.value for f in Family]}")


def _number(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _lattice(text: str) -> Support:
    t = text.upper()
    if t == "Z":
        return Support.INT
    if t == "H":
        return Support.HALF
    raise argparse.ArgumentTypeError("index set must be Z or H")


def _config(args) -> RunConfig:
    return RunConfig(
        family=getattr(args, "family", None),
        rank=getattr(args, "rank", None),
        ell=getattr(args, "ell", None),
        seed=getattr(args, "seed", 42),
        samples=getattr(args, "samples", 100),
        width=getattr(args, "width", 30),
        max_coord=getattr(args, "max_coord", 4),
        output=getattr(args, "output", None),
    )


def _weight(cfg: RunConfig, text: str) -> Weight:
    return weight_from_text(cfg.lie_type(), text)


def _summands(c, coeffs=None) -> list:
    out = []
    for w in sorted(c, key=lambda w: w.coords2, reverse=True):
        item = {"weight": w.labels(), "mult": c[w]}
        if coeffs is not None:
            item["coeff"] = coeffs[w].to_json()
        out.append(item)
    return out


def _terms_json(x: FockVector, type: LieType | None) -> list:
    out = []
    for a, c in x.sorted_items():
        item = {"sequence": a.to_json(), "coeff": c.to_json()}
        if type is not None:
            w = extract(type, a)
            item["weight"] = None if w is None else w.labels()
        out.append(item)
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_act(args) -> tuple[dict, int]:
    cfg = _config(args)
    t = cfg.lie_type()
    lam = _weight(cfg, args.weight)
    x = FockVector.basis(embed(t, lam))
    if args.pbar is None and args.op != "B_Z":
        raise UsageError(f"--op {args.op} needs --pbar")
    if t.family is Family.A:
        p = ResidueClass(cfg.ell, to_doubled(args.pbar))
        op = {"E": E, "F": F, "K": K, "K_INV": K_inv}.get(args.op)
        if op is None:
            raise UsageError("type A supports --op E, F, K, K_INV")
        spec = op(p)
    else:
        system = index_system(t.family, cfg.ell)
        if args.op == "B_Z":
            z2 = to_doubled(args.z) if args.z is not None else 1
            spec = system.B_z(z2)
        else:
            p = system.cls(args.pbar)
            makers = {"B": system.B, "L": system.L, "L_INV": system.L_inv, "E": E, "F": F, "K": K, "K_INV": K_inv}
            if args.op not in makers:
                raise UsageError(f"unknown operator {args.op}")
            spec = makers[args.op](p)
    y = apply(spec, x)
    return {"operator": str(spec), "terms": _terms_json(y, t)}, EXIT_OK


def cmd_decompose(args) -> tuple[dict, int]:
    cfg = _config(args)
    t = cfg.lie_type()
    lam = _weight(cfg, args.weight)
    projected = project_embedded(t, apply_sum_B(t, cfg.ell, lam))
    mults = eval_decomposition(projected, t)
    coeffs = {extract(t, a): c for a, c in projected.items()} if args.coefficients else None
    return {"summands": _summands(mults, coeffs)}, EXIT_OK


def _cross_check(args, cfg: RunConfig) -> tuple[dict, int]:
    rep = cross_validate(cfg.lie_type(), cfg.ell, args.pairs, cfg.seed, cfg.max_coord)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAIL


def cmd_linkage(args) -> tuple[dict, int]:
    cfg = _config(args)
    t = cfg.lie_type()
    if args.lemmas:
        rep = lemma_conformance(t, cfg.ell, args.max_shifted)
        return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAIL
    if args.cross_check:
        return _cross_check(args, cfg)
    if args.weight is None:
        raise UsageError("linkage needs --weight (and optionally --other), --lemmas or --cross-check")
    ctx = LinkageContext(t, cfg.ell)
    lam = _weight(cfg, args.weight)
    out = {"weight": lam.labels(), "canonical": canonical(lam, ctx).labels()}
    if args.other is not None:
        mu = _weight(cfg, args.other)
        out["other"] = mu.labels()
        out["linked"] = linked(lam, mu, ctx)
    return out, EXIT_OK


def _system_from_args(args) -> IndexSystem:
    if args.family is not None:
        if args.ell is None:
            raise UsageError("--family needs --ell")
        return index_system(args.family, args.ell)
    if args.index is None or args.modulus is None:
        raise UsageError("give --index and --modulus, or --family and --ell")
    if args.rule is not None:
        rule = FixedRule(args.rule)
    else:
        rule = FixedRule.ALL_STANDARD if args.index is Support.HALF else FixedRule.ZERO_NONSTANDARD
    return IndexSystem(args.index, args.modulus, rule)


def cmd_check_relations(args) -> tuple[dict, int]:
    cfg = _config(args)
    if args.type_a:
        modulus = args.modulus or cfg.ell
        if modulus is None:
            raise UsageError("type A relations need --modulus")
        charges = [int(c) for c in args.charges.split(",")]
        pool = []
        for i, k in enumerate(charges):
            pool += sample_pool(Support.INT, cfg.samples, cfg.seed + i, cfg.width, charge=k)
        rep = check_typeA_relations(Support.HALF, modulus, pool)
        return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAIL
    system = _system_from_args(args)
    pool = sample_pool(system.sequence_support, cfg.samples, cfg.seed, cfg.width, embedded_type_for(system))
    if args.identities:
        out, ok = [], True
        for p in system.classes():
            ops = [system.B(p), system.L(p)]
            if p.value_doubled == 0 and system.lattice is Support.INT:
                ops.append(system.B_z(1))
            for op in ops:
                try:
                    rep = compare_typeA_identity(op, pool)
                    out.append({"operator": str(op), **rep.to_json()})
                except IdentityViolation as exc:
                    ok = False
                    out.append({"operator": str(op), "ok": False, "detail": str(exc)[:500]})
        return {"index": system.label(), "identities": out}, EXIT_OK if ok else EXIT_FAIL
    rep = check_qsp_relations(system, pool)
    data = rep.to_json()
    data["index"] = system.label()
    return data, EXIT_OK if rep.ok else EXIT_FAIL


def _theorem_job(job):
    family, rank, ell, coords2 = job
    t = LieType(family, rank)
    return check_theorem(t, ell, Weight(t, coords2)).to_json()


def _oracle_job(job):
    family, rank, coords2 = job
    t = LieType(family, rank)
    lam = Weight(t, coords2)
    ok = tensor_natural(t, lam) == tensor_oracle(t, lam)
    ok = ok and sum(weyl_character(t, lam).values()) == weyl_dimension(t, lam)
    return {"weight": lam.labels(), "pass": ok}


def cmd_check_theorems(args) -> tuple[dict, int]:
    cfg = _config(args)
    t = cfg.lie_type()
    weights = dominant_weights(t, cfg.max_coord)
    if args.tensor_oracle:
        results = pmap(_oracle_job, [(t.family, t.rank, w.coords2) for w in weights])
    else:
        results = pmap(_theorem_job, [(t.family, t.rank, cfg.ell, w.coords2) for w in weights])
    failures = [r for r in results if not r["pass"]]
    out = {"total": len(results), "pass": len(results) - len(failures), "failures": failures[:20]}
    return out, EXIT_OK if not failures else EXIT_FAIL


def _iterated_job(job):
    family, ell, seq_json, reps = job
    a = Sequence.from_json(seq_json)
    m, lam = stabilize(a, reps, ell, family)
    rep = check_iterated(lam.type, ell, lam, reps)
    data = rep.to_json()
    data["shift"] = m
    data["sequence"] = seq_json
    negative = any(c < 0 for item in data["coefficients"] for _, c in item["coeff"])
    data["pass"] = rep.passed and not negative
    return data


def cmd_check_iterated(args) -> tuple[dict, int]:
    cfg = _config(args)
    if cfg.family is None or cfg.ell is None:
        raise UsageError("--family and --ell are required")
    if cfg.family is Family.A:
        raise UsageError("stabilization applies to families C, B_INT, B_HALF")
    if args.weight is not None:
        t = LieType(cfg.family, cfg.rank, relaxed=True) if cfg.rank else None
        if t is None:
            raise UsageError("--weight needs --rank")
        rep = check_iterated(t, cfg.ell, weight_from_text(t, args.weight), args.reps)
        return rep.to_json(), EXIT_OK if rep.passed else EXIT_FAIL
    rng = random.Random(cfg.seed)
    jobs = []
    for _ in range(cfg.samples):
        a = random_sequence_with_charge(rng, rng.randint(4, cfg.width), cfg.family.support, args.charge)
        for reps in range(args.reps + 1):
            jobs.append((cfg.family, cfg.ell, a.to_json(), reps))
    results = pmap(_iterated_job, jobs)
    failures = [r for r in results if not r["pass"]]
    out = {"total": len(results), "pass": len(results) - len(failures), "failures": failures[:20]}
    return out, EXIT_OK if not failures else EXIT_FAIL


def _parse_sequence(args, family: Family) -> Sequence:
    if args.sequence is not None:
        return Sequence.from_json(json.loads(args.sequence))
    if args.below is None:
        raise UsageError("give --sequence JSON or --below with --ones")
    ones = [to_doubled(Fraction(x)) for x in args.ones.split(",") if x] if args.ones else []
    return Sequence.from_cells(family.support, to_doubled(args.below), ones)


def cmd_stabilize(args) -> tuple[dict, int]:
    cfg = _config(args)
    if cfg.family is None or cfg.ell is None:
        raise UsageError("--family and --ell are required")
    a = _parse_sequence(args, cfg.family)
    m, lam = stabilize(a, args.reserve, cfg.ell, cfg.family)
    return {"shift": m, "rank": lam.type.rank, "weight": lam.labels(), "charge": a.charge}, EXIT_OK


def cmd_classify(args) -> tuple[dict, int]:
    if args.pbar is not None:
        p = ResidueClass(args.modulus, to_doubled(args.pbar))
        classes = [p]
    else:
        if args.index is None:
            raise UsageError("give --index or --pbar")
        classes = all_classes(args.index, args.modulus)
    out = [{"pbar": str(p).split(" mod ")[0], "kind": classify_index(p).value} for p in classes]
    return {"modulus": args.modulus, "classes": out}, EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fockqsp", description=__doc__)
    parser.add_argument("--human", action="store_true", help="aligned text instead of JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, family=True, rank=True, ell=True):
        if family:
            p.add_argument("--family", type=_family)
        if rank:
            p.add_argument("--rank", type=int)
        if ell:
            p.add_argument("--ell", type=int)
        p.add_argument("--output", help="also write the JSON to this file")
        p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)

    p = sub.add_parser("act", help="apply one operator to an embedded weight")
    common(p)
    p.add_argument("--op", required=True, choices=["B", "L", "L_INV", "B_Z", "E", "F", "K", "K_INV"])
    p.add_argument("--pbar", type=_number)
    p.add_argument("--z", type=_number, help="position z of the corrected generator (default 1/2)")
    p.add_argument("--weight", required=True)
    p.set_defaults(func=cmd_act)

    p = sub.add_parser("decompose", help="projected operator sum at v = 1")
    common(p)
    p.add_argument("--weight", required=True)
    p.add_argument("--coefficients", action="store_true", help="include the Laurent coefficients")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("linkage", help="linkage of weights, lemma conformance, or oracle cross-check")
    common(p)
    p.add_argument("--weight", "--lhs", dest="weight")
    p.add_argument("--other", "--rhs", dest="other")
    p.add_argument("--lemmas", action="store_true")
    p.add_argument("--max-shifted", type=_number, default=Fraction(8))
    p.add_argument("--cross-check", action="store_true")
    p.add_argument("--pairs", type=int, default=500)
    p.add_argument("--max-coord", type=_number, default=Fraction(3))
    p.add_argument("--seed", type=int, default=42)
    p.set_defaults(func=cmd_linkage)

    p = sub.add_parser("check-relations", help="relation suite on seeded samples")
    common(p, rank=False)
    p.add_argument("--index", type=_lattice)
    p.add_argument("--modulus", type=int)
    p.add_argument("--rule", choices=[r.value for r in FixedRule])
    p.add_argument("--type-a", action="store_true", help="quantum affine relations instead")
    p.add_argument("--charges", default="0,3")
    p.add_argument("--identities", action="store_true", help="compare B and L with their type A expressions")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--width", type=int, default=30)
    p.set_defaults(func=cmd_check_relations)

    p = sub.add_parser("check-theorems", help="tensor theorem grid over dominant weights")
    common(p)
    p.add_argument("--max-coord", type=_number, default=Fraction(4))
    p.add_argument("--tensor-oracle", action="store_true", help="compare the tensor rule with characters instead")
    p.set_defaults(func=cmd_check_theorems)

    p = sub.add_parser("check-iterated", help="iterated operator sums at the stabilized rank")
    common(p)
    p.add_argument("--charge", type=int, default=1)
    p.add_argument("--reps", type=int, default=2)
    p.add_argument("--weight")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--width", type=int, default=20)
    p.set_defaults(func=cmd_check_iterated)

    p = sub.add_parser("stabilize", help="shift and weight of a sequence")
    common(p, rank=False)
    p.add_argument("--sequence", help='JSON such as {"support":"INT","left":-4,"bits":"01"}')
    p.add_argument("--below", type=_number, help="every cell below this position is 1")
    p.add_argument("--ones", help="comma-separated further positions holding 1")
    p.add_argument("--reserve", type=int, default=0)
    p.set_defaults(func=cmd_stabilize)

    p = sub.add_parser("classify", help="fixed / theta-linked / standard residue classes")
    p.add_argument("--index", type=_lattice)
    p.add_argument("--modulus", type=int, required=True)
    p.add_argument("--pbar", type=_number)
    p.add_argument("--output")
    p.add_argument("--human", action="store_true", default=argparse.SUPPRESS)
    p.set_defaults(func=cmd_classify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        data, code = args.func(args)
    except (UsageError, ValueError, ModulusTooSmall) as exc:
        print(dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except NotDivisible as exc:  # pragma: no cover - reported inside the relation suites
        print(dumps({"error": "NotDivisible", "message": str(exc)}), file=sys.stderr)
        return EXIT_FAIL
    text = human(data) if getattr(args, "human", False) else dumps(data)
    print(text)
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(dumps(data) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
