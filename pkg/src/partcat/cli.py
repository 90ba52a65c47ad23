"""Command-line front end.

Exit status: 0 all checks pass, 1 mismatch, 2 inconclusive (closure did not
saturate), 64 usage error, 74 cache I/O error.  Reports are deterministic:
sorted keys, no timestamps.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import closure as cl
from . import experiments as ex
from . import fattening as fat
from . import partition as pc
from .cache import Cache, CacheError, default_dir
from .echelon import span_dimension
from .operators import OperatorError, duality_from_matrix, gram_matrix, read_operator, realize

EXIT_OK, EXIT_MISMATCH, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_IO = 0, 1, 2, 64, 74
STATUS_EXIT = {"pass": EXIT_OK, "mismatch": EXIT_MISMATCH, "inconclusive": EXIT_INCONCLUSIVE}
FORMATS = ("json", "csv", "markdown")
PROJECTIVE = ("theorem-t", "twisted", "pu-po")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    n: int | None = None
    max_legs: int | None = None
    slack: int | None = None
    preset: str | None = None
    seed: int = 0
    tolerance: float = 1e-9
    cache_dir: str | None = None
    fmt: str = "json"
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.n is not None and self.n < 1:
            raise UsageError("--n must be at least 1")
        if self.max_legs is not None and self.max_legs < 0:
            raise UsageError("--max-legs must be non-negative")
        if self.command in PROJECTIVE and self.max_legs is not None and self.max_legs % 2:
            raise UsageError(f"{self.command} needs an even --max-legs")
        if self.slack is not None and self.slack < 0:
            raise UsageError("--slack must be non-negative")
        if not self.tolerance > 0:
            raise UsageError("--tol must be positive")
        if self.fmt not in FORMATS:
            raise UsageError(f"--format must be one of {FORMATS}")

    def cache(self) -> Cache | None:
        if self.options.get("no_cache"):
            return None
        path = Path(self.cache_dir) if self.cache_dir else default_dir()
        return Cache(path) if path is not None else None


# -- report rendering -----------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list) and not all(isinstance(x, (str, int, float, bool)) or x is None for x in obj):
        for i, x in enumerate(obj):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, obj if not isinstance(obj, list) else " ".join(map(str, obj))


def _sig(key: str) -> tuple[int, int]:
    k, l = key.split(",")
    return int(k), int(l)


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    dims = report.get("dims")
    ref = report.get("reference_dims", {})
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        if isinstance(dims, dict):
            w.writerow(["k", "l", "dim", "reference"])
            for key in sorted(dims, key=_sig):
                w.writerow([*_sig(key), dims[key], ref.get(key, "")])
        else:
            w.writerow(["field", "value"])
            for k, v in _flatten(report):
                w.writerow([k, v])
        return buf.getvalue()
    # markdown
    title = report.get("kind", "report")
    buf.write(f"# {title}\n\n")
    buf.write(f"status: **{report.get('status', '')}**\n\n")
    if isinstance(dims, dict) and dims:
        sigs = [_sig(s) for s in dims]
        ks, ls = sorted({k for k, _ in sigs}), sorted({l for _, l in sigs})
        buf.write("| k \\ l | " + " | ".join(map(str, ls)) + " |\n")
        buf.write("|---" * (len(ls) + 1) + "|\n")
        for k in ks:
            cells = []
            for l in ls:
                key = f"{k},{l}"
                if key not in dims:
                    cells.append("")
                elif key in ref and ref[key] != dims[key]:
                    cells.append(f"{dims[key]} ({ref[key]})")
                else:
                    cells.append(str(dims[key]))
            buf.write(f"| {k} | " + " | ".join(cells) + " |\n")
        buf.write("\n")
    buf.write("| field | value |\n|---|---|\n")
    for k, v in _flatten({a: b for a, b in report.items() if a not in ("dims", "reference_dims")}):
        buf.write(f"| {k} | {v} |\n")
    return buf.getvalue()


# -- verbs --------------------------------------------------------------------------------

def _family(name: str, k: int, l: int):
    if name == "ncpair":
        return pc.enumerate_nc_pairings(k, l)
    if name == "ncpart":
        return pc.enumerate_nc_partitions(k, l)
    if name == "pairings":
        return pc.enumerate_pairings(k, l)
    raise UsageError(f"unknown family {name!r}")


def cmd_enumerate(cfg: RunConfig) -> dict:
    o = cfg.options
    if o["check"]:
        return ex.enumeration_counts(o["max_k"]).to_dict()
    family = "pairings" if o["all_pairings"] else "ncpair" if o["pairings"] else "ncpart"
    items = _family(family, o["k"], o["l"])
    rep = {"kind": "enumerate", "family": family, "k": o["k"], "l": o["l"], "count": len(items), "status": "pass"}
    if o["list"]:
        rep["diagrams"] = [str(p) for p in items]
    return rep


def cmd_dims(cfg: RunConfig) -> dict:
    o = cfg.options
    dims = o["n"] or [2]
    if o["homomorphism"]:
        reps = [ex.homomorphism_check(N, o["max_points"]).to_dict() for N in dims]
        return _combine("homomorphism", reps)
    if o["independence"]:
        return ex.independence_check().to_dict()
    out = {}
    for N in dims:
        for k, l in ex.signatures(o["max_points"]):
            out[f"{k},{l}"] = span_dimension(realize(p, N) for p in _family(o["family"], k, l))
        if len(dims) == 1:
            return {"kind": "dims", "family": o["family"], "n": N, "dims": out, "status": "pass"}
    return {"kind": "dims", "family": o["family"], "n": dims, "dims": out, "status": "pass"}


def _combine(kind: str, reports: list[dict]) -> dict:
    statuses = [r["status"] for r in reports]
    status = "mismatch" if "mismatch" in statuses else "inconclusive" if "inconclusive" in statuses else "pass"
    return {"kind": kind, "runs": reports, "status": status}


def cmd_gram(cfg: RunConfig) -> dict:
    o = cfg.options
    ns = o["n"] or [2, 3]
    if o["k"] is not None:
        parts = pc.enumerate_nc_partitions(o["k"], o["l"])
        N = ns[0]
        mat = gram_matrix(parts, N, "entrywise" if o["entrywise"] else "join")
        return {"kind": "gram-matrix", "n": N, "partitions": [str(p) for p in parts],
                "matrix": [[str(x) for x in row] for row in mat], "status": "pass"}
    reps = [ex.gram_equivalence_check(n, o["max_points"]).to_dict() for n in ns]
    if o["join"]:
        reps += [ex.gram_join_check(n, min(o["max_points"], 4)).to_dict() for n in ns]
    return _combine("gram", reps)


def cmd_fatten(cfg: RunConfig) -> dict:
    o = cfg.options
    if o["partition"]:
        p = pc.parse(o["partition"])
        rep = ex.scalar_table(p, cfg.n or 2)
        rep.update(kind="fatten", status="pass")
        return rep
    return ex.fattening_check(o["max_points"], o["roundtrip_points"]).to_dict()


def _generator_set(cfg: RunConfig) -> cl.GeneratorSet:
    o = cfg.options
    n = cfg.n or 2
    if o["duality_matrix"]:
        R = duality_from_matrix(json.loads(o["duality_matrix"]))
        n = R.dim
    else:
        R = realize(pc.pairpart(), n)
    gens = [read_operator(Path(f).read_text()) for f in o["generator"]]
    if cfg.preset:
        gens = cl.preset_generators(cfg.preset, n) + gens
    if o["mode"] == "projective" and o["sandwich"]:
        gens = [x for T in gens for x in (T, cl.sandwich(T))]
    return cl.GeneratorSet(n, o["mode"], R, tuple(gens))


def cmd_closure(cfg: RunConfig) -> dict:
    o = cfg.options
    G = _generator_set(cfg)
    res = cl.close(G, cfg.max_legs or 4, cfg.slack, o["max_rounds"], cache=cfg.cache())
    dims = {f"{k},{l}": d for (k, l), d in res.dims().items()}
    rep = {"kind": "closure", "mode": G.mode, "n": G.dim, "max_legs": res.max_legs, "slack": res.slack,
           "preset": cfg.preset, "dims": dims, "saturated": res.saturated, "rounds": res.rounds}
    mism = []
    reference = cfg.preset is not None and not o["generator"] and not o["duality_matrix"]
    if reference and (G.mode == "projective" or cfg.preset != "s-plus"):
        ref = {s: cl.reference_dim(cfg.preset, G.dim, *_sig(s)) for s in dims}
        rep["reference_dims"] = ref
        mism = [f"{s}: closure {dims[s]} vs reference {ref[s]}" for s in sorted(ref) if dims[s] != ref[s]]
    rep["mismatches"] = mism
    rep["status"] = "inconclusive" if not res.saturated else "mismatch" if mism else "pass"
    return rep


def cmd_theorem_t(cfg: RunConfig) -> dict:
    return cl.verify_theorem_T(cfg.n or 2, cfg.preset or "o-plus", cfg.max_legs or 8, cfg.slack,
                               with_sandwich=not cfg.options["no_sandwich"], max_rounds=cfg.options["max_rounds"],
                               seed=cfg.seed, cache=cfg.cache()).to_dict()


def cmd_pu_po(cfg: RunConfig) -> dict:
    return cl.verify_pu_po(cfg.n or 2, cfg.max_legs or 8, cfg.options["max_points"]).to_dict()


def cmd_twisted(cfg: RunConfig) -> dict:
    return cl.compare_twisted(cfg.n or 2, cfg.max_legs or 6, cfg.slack, cfg.options["max_rounds"],
                              cache=cfg.cache()).to_dict()


def cmd_classical(cfg: RunConfig) -> dict:
    return ex.classical_check(cfg.n or 3, cfg.options["samples"], cfg.seed, cfg.tolerance).to_dict()


def cmd_cache(cfg: RunConfig) -> dict:
    cache = cfg.cache()
    if cache is None:
        raise UsageError(f"no cache directory: pass --cache-dir or set the environment variable")
    action = cfg.options["action"]
    if action == "list":
        entries = [p.name for p in cache.entries()]
        return {"kind": "cache", "action": action, "dir": str(cache.dir), "entries": entries, "status": "pass"}
    if action == "verify":
        res = cache.verify()
        bad = sorted(k for k, ok in res.items() if not ok)
        return {"kind": "cache", "action": action, "dir": str(cache.dir), "checked": len(res),
                "corrupted": bad, "status": "mismatch" if bad else "pass"}
    removed = cache.clear()
    return {"kind": "cache", "action": action, "dir": str(cache.dir), "removed": removed, "status": "pass"}


COMMANDS = {
    "enumerate": cmd_enumerate,
    "dims": cmd_dims,
    "gram": cmd_gram,
    "fatten-verify": cmd_fatten,
    "closure": cmd_closure,
    "theorem-t": cmd_theorem_t,
    "pu-po": cmd_pu_po,
    "twisted": cmd_twisted,
    "classical-check": cmd_classical,
    "cache": cmd_cache,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="partcat", description="Partition categories, their realizations and closure experiments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, n=True, n_multi=False):
        p.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
        p.add_argument("--output", help="write the report here instead of stdout")
        if n:
            if n_multi:
                p.add_argument("--n", type=int, nargs="+")
            else:
                p.add_argument("--n", type=int)

    def closure_flags(p, preset=True):
        p.add_argument("--max-legs", type=int)
        p.add_argument("--slack", type=int, help="extra legs of headroom (default: two objects)")
        p.add_argument("--max-rounds", type=int, default=64)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cache-dir")
        p.add_argument("--no-cache", action="store_true")
        if preset:
            p.add_argument("--preset", choices=cl.PRESETS)

    p = sub.add_parser("enumerate", help="count or list diagrams")
    common(p, n=False)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--l", type=int, default=0)
    p.add_argument("--pairings", action="store_true", help="noncrossing pairings instead of partitions")
    p.add_argument("--all-pairings", action="store_true", help="all pairings, crossing ones included")
    p.add_argument("--list", action="store_true")
    p.add_argument("--check", action="store_true", help="compare counts with the Catalan numbers")
    p.add_argument("--max-k", type=int, default=8)

    p = sub.add_parser("dims", help="ranks of realized families; functor and independence checks")
    common(p, n_multi=True)
    p.add_argument("--family", choices=("ncpair", "ncpart", "pairings"), default="ncpair")
    p.add_argument("--max-points", type=int, default=6)
    p.add_argument("--homomorphism", action="store_true")
    p.add_argument("--independence", action="store_true")

    p = sub.add_parser("gram", help="Gram matrices and the equivalence check")
    common(p, n_multi=True)
    p.add_argument("--max-points", type=int, default=5)
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--entrywise", action="store_true")
    p.add_argument("--join", action="store_true", help="also check the join formula against entries")

    p = sub.add_parser("fatten-verify", help="outline bijection and functoriality")
    common(p)
    p.add_argument("--max-points", type=int, default=5)
    p.add_argument("--roundtrip-points", type=int, default=8)
    p.add_argument("--partition", help='show one outline, e.g. "0|3 : [1,3][2]"')

    p = sub.add_parser("closure", help="saturate a generator set")
    common(p)
    closure_flags(p)
    p.add_argument("--mode", choices=cl.MODES, default="plain")
    p.add_argument("--generator", action="append", default=[], help="sparse operator file (repeatable)")
    p.add_argument("--duality-matrix", help="JSON matrix F with R^{ij} = F[i][j]")
    p.add_argument("--sandwich", action="store_true", help="projective mode: add id (x) T (x) id for each generator")

    p = sub.add_parser("theorem-t", help="projective closure of S' against reference spans")
    common(p)
    closure_flags(p)
    p.add_argument("--no-sandwich", action="store_true", help="exploratory: drop the id (x) T (x) id generators")

    p = sub.add_parser("pu-po", help="colored against uncolored pairings on alternating words")
    common(p)
    p.add_argument("--max-legs", type=int)
    p.add_argument("--max-points", type=int, default=12)

    p = sub.add_parser("twisted", help="twisted against untwisted projective closures")
    common(p)
    closure_flags(p, preset=False)

    p = sub.add_parser("classical-check", help="sampled orthogonal matrices and the crossing identity")
    common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("cache", help="inspect the closure cache")
    common(p, n=False)
    p.add_argument("action", choices=("list", "verify", "clear"))
    p.add_argument("--cache-dir")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    d = dict(vars(args))
    n = d.pop("n", None)
    cfg = RunConfig(
        command=d.pop("command"),
        n=n[0] if isinstance(n, list) else n,
        max_legs=d.pop("max_legs", None),
        slack=d.pop("slack", None),
        preset=d.pop("preset", None),
        seed=d.pop("seed", 0),
        tolerance=d.pop("tol", 1e-9),
        cache_dir=d.pop("cache_dir", None),
        fmt=d.pop("fmt"),
    )
    d["n"] = n if isinstance(n, list) else None
    cfg.options = d
    return cfg


def run(cfg: RunConfig) -> tuple[int, str]:
    cfg.validate()
    report = COMMANDS[cfg.command](cfg)
    return STATUS_EXIT[report["status"]], render(report, cfg.fmt)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    cfg = config_from_args(args)
    try:
        code, text = run(cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"partcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CacheError as exc:
        print(f"partcat: cache error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (pc.PartitionError, pc.ParseError, OperatorError, cl.ClosureError, ValueError) as exc:
        print(f"partcat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"partcat: error: {exc}", file=sys.stderr)
        return EXIT_IO
    out = cfg.options.get("output")
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            print(f"partcat: cannot write {out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
