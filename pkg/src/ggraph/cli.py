"""Command-line front end.

Commands::

    ggraph analyze   --group FILE --p P [--class SEL] [--rational] [--all-classes]
                     [--format json|tsv] [--seed N] [--oracle]
    ggraph spe       --group FILE --p P [--seed N]
    ggraph coeff     --table FILE (--classes C1,C2,C3 | --edge C)
    ggraph reproduce [--manifest FILE] [--tier mandatory|extended] [--jobs N]

``--group`` takes a ``.grp`` path, the stem of a shipped file (``m11``) or a
built-in name such as ``alt:7`` or ``psl2:11``.  Class selectors are
fingerprints (``o3s440a``) or class names supplied by the group file.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .chartab import (
    DataIntegrityError,
    OrthogonalityError,
    TableParseError,
    class_mult_coeff,
    edge_exists,
    load_table,
    multiclass_lift_test,
)
from .classops import ClassesIncomplete, ConjClassRep
from .gggraph import (
    ClassUnion,
    ComponentReport,
    analyze,
    brute_force_component,
    order_p_classes,
    strongly_p_embedded,
)
from .groups import (
    GroupFile,
    GroupFileError,
    _resolve,
    builtin_group,
    data_dir,
    load_group,
)

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3

TSV_FIELDS = [
    "group",
    "class",
    "rational",
    "union_size",
    "lambda_size",
    "delta_order",
    "delta_structure",
    "stabilizer_order",
    "connected",
    "method",
]


# ------------------------------------------------------------------ analyze


def _select(gf: GroupFile, classes: list[ConjClassRep], selector: str) -> ConjClassRep:
    for c in classes:
        if selector in (c.label, c.name):
            return c
    known = ", ".join(f"{c.label}" + (f"={c.name}" if c.name else "") for c in classes)
    raise KeyError(f"no class {selector!r} of order {classes[0].elt_order if classes else '?'} in {gf.name}; "
                   f"known: {known}")


def run_analyze(
    group: str,
    p: int,
    *,
    selector: str | None = None,
    rational: bool = False,
    seed: int = 0,
    oracle: bool = False,
    sylow_neighbours: bool = False,
) -> list[dict]:
    """Reports (as dictionaries) for the selected classes of elements of order ``p``."""
    gf = load_group(group)
    G = gf.group
    rng = random.Random(seed)
    classes, S = order_p_classes(G, p, rng)
    if not classes:
        raise ValueError(f"{gf.name} has no elements of order {p}")
    gf.name_classes(classes)
    chosen = [_select(gf, classes, selector)] if selector else list(classes)
    out = []
    for c in chosen:
        if rational:
            CU = ClassUnion.rational_closure(G, c, classes, sylow=S)
        else:
            CU = ClassUnion.single(G, c, classes, sylow=S)
        rep = analyze(CU, rng=random.Random(seed), sylow_neighbours=sylow_neighbours)
        rep.group = gf.name
        d = rep.to_dict()
        if oracle:
            d["oracle"] = _oracle(CU, rep)
        out.append(d)
    return out


def _oracle(CU: ClassUnion, rep: ComponentReport) -> dict:
    o = brute_force_component(CU)
    lam = int(o.vertices.shape[0])
    connected = "yes" if lam == o.union_size else "no"
    agree = lam == rep.lambda_size and rep.stabilizer_order == o.stabilizer_order and rep.connected == connected
    return {"lambda_size": lam, "stabilizer_order": o.stabilizer_order, "connected": connected, "agrees": agree}


def format_tsv(reports: Sequence[dict]) -> str:
    lines = ["\t".join(TSV_FIELDS)]
    for d in reports:
        c = d["class"]
        delta = d["delta"] or {}
        row = [
            d["group"],
            c.get("label", ""),
            str(d["rational"]).lower(),
            str(d["union_size"]),
            str(d["lambda_size"]),
            str(delta.get("order", "")),
            delta.get("structure", ""),
            str(d["stabilizer_order"]),
            d["connected"],
            d["method"],
        ]
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    reports = run_analyze(
        args.group,
        args.p,
        selector=None if args.all_classes else args.cls,
        rational=args.rational,
        seed=args.seed,
        oracle=args.oracle,
        sylow_neighbours=args.sylow_neighbours,
    )
    if args.format == "json":
        sys.stdout.write(json.dumps(reports, indent=2) + "\n")
    else:
        sys.stdout.write(format_tsv(reports))
    if any(d["connected"] == "unknown" for d in reports):
        return EXIT_UNKNOWN
    if args.oracle and not all(d["oracle"]["agrees"] for d in reports):
        log.error("oracle disagreement")
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------- spe


def cmd_spe(args) -> int:
    G = load_group(args.group).group
    verdict = strongly_p_embedded(G, args.p, random.Random(args.seed))
    sys.stdout.write({True: "true", False: "false", None: "unknown"}[verdict] + "\n")
    return EXIT_UNKNOWN if verdict is None else EXIT_OK


# -------------------------------------------------------------------- coeff


def cmd_coeff(args) -> int:
    T = load_table(args.table)
    if args.edge:
        sys.stdout.write(("true" if edge_exists(T, args.edge) else "false") + "\n")
    else:
        labels = [x.strip() for x in args.classes.split(",")]
        if len(labels) != 3:
            raise ValueError("--classes needs exactly three labels")
        sys.stdout.write(f"{class_mult_coeff(T, *labels)}\n")
    return EXIT_OK


# ---------------------------------------------------------------- reproduce


@dataclass
class EntryResult:
    index: int
    id: str
    status: str  # "pass" | "fail" | "skipped" | "error"
    expected: dict
    computed: dict = field(default_factory=dict)
    cite: str = ""
    seconds: float = 0.0
    message: str = ""


def default_manifest() -> Path:
    return data_dir() / "manifest.json"


def _data_available(entry: dict) -> bool:
    try:
        if "group" in entry and builtin_group(entry["group"]) is None:
            _resolve(entry["group"], ".grp")
        if "table" in entry:
            _resolve(entry["table"], ".ctbl")
    except FileNotFoundError:
        return False
    return True


def _compute(entry: dict, seed: int) -> dict:
    kind = entry["kind"]
    if kind == "component":
        (d,) = run_analyze(
            entry["group"], entry["p"], selector=entry["class"], rational=entry.get("rational", False), seed=seed
        )
        delta = d["delta"] or {}
        return {
            "lambda_size": d["lambda_size"],
            "delta_order": delta.get("order"),
            "delta_invariants": delta.get("invariants"),
            "stabilizer_order": d["stabilizer_order"],
            "connected": d["connected"],
        }
    if kind == "spe":
        G = load_group(entry["group"]).group
        return {"spe": strongly_p_embedded(G, entry["p"], random.Random(seed))}
    if kind == "coeff":
        T = load_table(entry["table"])
        return {"coeff": class_mult_coeff(T, *entry["classes"])}
    if kind == "edge":
        T = load_table(entry["table"])
        return {"edge": edge_exists(T, entry["class"])}
    if kind == "lift":
        T = load_table(entry["table"])
        return {"verdicts": multiclass_lift_test(T, entry["classes"], entry.get("quotient_connected", True))}
    raise ValueError(f"unknown manifest entry kind {kind!r}")


def run_entry(index: int, entry: dict, seed: int = 0) -> EntryResult:
    expected = dict(entry["expect"])
    res = EntryResult(index, entry["id"], "skipped", expected, cite=entry.get("cite", ""))
    if not _data_available(entry):
        res.message = "skipped (data unavailable)"
        return res
    t0 = time.perf_counter()
    try:
        computed = _compute(entry, seed)
    except (GroupFileError, TableParseError, OrthogonalityError, DataIntegrityError, ClassesIncomplete,
            KeyError, ValueError) as exc:
        res.status, res.message = "error", f"{type(exc).__name__}: {exc}"
        res.seconds = time.perf_counter() - t0
        return res
    res.seconds = time.perf_counter() - t0
    res.computed = {k: computed.get(k) for k in expected}
    diff = [k for k in expected if res.computed[k] != expected[k]]
    res.status = "fail" if diff else "pass"
    if diff:
        res.message = "; ".join(f"{k}: expected {expected[k]!r}, computed {res.computed[k]!r}" for k in diff)
    return res


def _tiers(tier: str) -> set[str]:
    return {"mandatory"} if tier == "mandatory" else {"mandatory", "extended"}


def load_manifest(path: str | Path) -> list[dict]:
    data = json.loads(Path(path).read_text())
    entries = data["entries"] if isinstance(data, dict) else data
    for e in entries:
        for key in ("id", "kind", "tier", "expect", "cite"):
            if key not in e:
                raise ValueError(f"manifest entry {e.get('id', '?')} lacks {key!r}")
    return entries


def run_manifest(path: str | Path, tier: str = "mandatory", jobs: int = 1, seed: int = 0) -> list[EntryResult]:
    entries = [(i, e) for i, e in enumerate(load_manifest(path)) if e["tier"] in _tiers(tier)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = [pool.submit(run_entry, i, e, seed) for i, e in entries]
            results = [f.result() for f in futs]
    else:
        results = [run_entry(i, e, seed) for i, e in entries]
    return sorted(results, key=lambda r: r.index)


def format_results(results: Sequence[EntryResult]) -> str:
    lines = []
    for r in results:
        exp = json.dumps(r.expected, sort_keys=True)
        got = json.dumps(r.computed, sort_keys=True) if r.computed else "-"
        lines.append(f"{r.status.upper():8} {r.id:28} {r.seconds:7.1f}s  expected {exp}  computed {got}  [{r.cite}]")
        if r.message and r.status != "pass":
            lines.append(f"         {r.message}")
    counts = {s: sum(1 for r in results if r.status == s) for s in ("pass", "fail", "error", "skipped")}
    lines.append(" ".join(f"{k}={v}" for k, v in counts.items()))
    return "\n".join(lines) + "\n"


def cmd_reproduce(args) -> int:
    path = args.manifest or default_manifest()
    results = run_manifest(path, args.tier, args.jobs, args.seed)
    sys.stdout.write(format_results(results))
    return EXIT_FAIL if any(r.status in ("fail", "error") for r in results) else EXIT_OK


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ggraph", description="Connectivity of GG(C) for classes of prime-order elements."
    )
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="component data for classes of elements of order p")
    a.add_argument("--group", required=True)
    a.add_argument("--p", type=int, required=True)
    a.add_argument("--class", dest="cls", help="fingerprint (o3s440a) or class name")
    a.add_argument("--rational", action="store_true", help="use the rational closure of the class")
    a.add_argument("--all-classes", action="store_true")
    a.add_argument("--format", choices=("json", "tsv"), default="json")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--oracle", action="store_true", help="also run the brute-force oracle and compare")
    a.add_argument("--sylow-neighbours", action="store_true", help="restrict neighbour search to a Sylow subgroup")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("spe", help="does G have a strongly p-embedded subgroup")
    s.add_argument("--group", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_spe)

    c = sub.add_parser("coeff", help="class multiplication coefficients from a character table")
    c.add_argument("--table", required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--classes", help="three class labels, comma separated")
    g.add_argument("--edge", help="involution class: does GG(C) have an edge")
    c.set_defaults(func=cmd_coeff)

    r = sub.add_parser("reproduce", help="run the regression manifest")
    r.add_argument("--manifest")
    r.add_argument("--tier", choices=("mandatory", "extended"), default="mandatory")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_reproduce)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (FileNotFoundError, GroupFileError, TableParseError, OrthogonalityError, DataIntegrityError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_FAIL
    except (KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {exc.args[0] if exc.args else exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
