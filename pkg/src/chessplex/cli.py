"""Command-line entry point: every command writes one JSON report.

Exit status: 0 when the claim is verified or a partition is found, 1 when it
is refuted or the search is exhausted, 2 on invalid input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__
from .complex import ComplexSpec, ResourceLimitError, SimplicialComplex, complex_to_json, enumerate_facets, f_vector
from .homology import DEFAULT_FIELDS, connectivity_evidence, euler_from_homology, homology
from .matching import is_collectively_unavoidable
from .posets import (
    alpha_difference,
    alpha_hypothesis,
    free_cyclic_action,
    is_antichain,
    model_poset,
    order_complex_dim,
)
from .shelling import ShellingCertificate, ShellingError, paper_shelling_order, verify_shelling
from .tverberg import (
    DEFAULT_LP_LIMIT,
    AdmissibleTuple,
    DimensionProfile,
    PointConfiguration,
    check_admissible,
    format_rational,
    reduce_to_tight,
    run_trials,
    search_partition,
)

OK, REFUTED, ERROR = 0, 1, 2


class UsageError(ValueError):
    pass


def default_threads() -> int:
    env = os.environ.get("CHESSPLEX_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _json_default(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"


def load_schema() -> dict:
    return json.loads(resources.files("chessplex").joinpath("report.schema.json").read_text())


def _ints(text: str | None) -> list[int] | None:
    if text is None:
        return None
    return [int(x) for x in text.replace(" ", "").split(",") if x]


def _fields(args) -> list[str]:
    return [f.strip() for f in args.fields.split(",")] if args.fields else list(DEFAULT_FIELDS)


def _spec(args) -> ComplexSpec:
    if args.m is None or args.n is None:
        raise UsageError("--m and --n are required")
    if args.nu is not None:
        return ComplexSpec.symmetric(args.m, args.n, args.nu, args.s or 0)
    caps = _ints(args.k)
    if caps is None:
        raise UsageError("give --nu/--s for a symmetric complex or --k for row caps")
    if len(caps) == 1:
        caps = caps * args.n
    return ComplexSpec.chessboard(args.m, args.n, tuple(caps), symmetrized=getattr(args, "symmetrized", False))


def _spec_derived(spec: ComplexSpec) -> dict:
    out = {"working_hypothesis": spec.working_hypothesis}
    bal = spec.balanced
    if spec.symmetrized and bal is not None:
        nu, s = bal
        out.update({"nu": nu, "s": s, "mu": nu * spec.n + s - 2})
    return out


# -- commands -------------------------------------------------------------------


def cmd_build(args) -> tuple[int, dict, dict, dict]:
    spec = _spec(args)
    K = enumerate_facets(spec, args.limit_facets)
    result = {
        "facet_count": len(K.facets),
        "dim": K.dim,
        "pure": K.is_pure,
        "f_vector": list(f_vector(K)),
        "euler_characteristic": f_vector(K).euler_characteristic,
    }
    if args.facets:
        result["complex"] = complex_to_json(K)
    return OK, spec.to_dict(), _spec_derived(spec), result


def cmd_shell(args):
    spec = _spec(args)
    order = paper_shelling_order(spec, args.limit_facets, verify=False)
    cert = verify_shelling(order.complex, order)
    result = {"facet_count": len(order)}
    if isinstance(cert, ShellingCertificate):
        result.update({"certified": True, "pairs": cert.pair_count})
        if args.certificate:
            result["certificate"] = cert.to_json()
        status = OK
    else:
        result.update({"certified": False, "refutation": cert.to_json()})
        status = REFUTED
    return status, spec.to_dict(), _spec_derived(spec), result


def cmd_homology(args):
    spec = _spec(args)
    K = enumerate_facets(spec, args.limit_facets)
    h = homology(K, _fields(args))
    name = "Q" if "Q" in h.ranks else next(iter(h.ranks))
    result = {
        "dim": K.dim,
        "fields": h.ranks,
        "minus_one": h.minus_one,
        "euler_f_vector": f_vector(K).euler_characteristic,
        "euler_homology": euler_from_homology(h.ranks[name], h.minus_one[name]),
    }
    return OK, spec.to_dict(), _spec_derived(spec), result


def cmd_connectivity(args):
    spec = _spec(args)
    rep = connectivity_evidence(spec, _fields(args), args.limit_facets)
    status = OK if rep.verdict == "pass" else REFUTED
    return status, spec.to_dict(), _spec_derived(spec), rep.to_json()


def _profile(args) -> DimensionProfile:
    if args.r is None or args.k is None or args.d is None:
        raise UsageError("--d, --r and --k are required")
    return DimensionProfile(args.r, int(args.k), args.s or 0)


def cmd_tverberg(args):
    if args.config:
        with open(args.config) as fh:
            config = PointConfiguration.from_json(json.load(fh))
        caps = _ints(args.dims) if args.dims else _profile(args).caps
        res = search_partition(config, caps, args.limit_lp)
        inputs = {"config": config.to_json(), "caps": list(caps)}
        return (OK if res.found else REFUTED), inputs, {}, res.to_json()
    profile = _profile(args)
    d = args.d
    derived = profile.to_json(d)
    if profile.admissible(d):
        tight = reduce_to_tight(profile, d)
        derived["tight"] = {"k": tight.k, "s": tight.s}
    rep = run_trials(profile, d, args.trials, args.seed, args.N, args.threads)
    inputs = {"d": d, "r": profile.r, "k": profile.k, "s": profile.s, "N": rep.N, "trials": args.trials, "seed": args.seed}
    status = OK if rep.found == rep.trials else REFUTED
    return status, inputs, derived, rep.to_json()


def _family_from_args(args) -> list[SimplicialComplex]:
    if args.family:
        with open(args.family) as fh:
            data = json.load(fh)
        m = data["m"]
        return [SimplicialComplex(m, tuple(tuple(x - 1 for x in f) for f in facets)) for facets in data["complexes"]]
    dims = _ints(args.skeletons)
    if args.m is None or dims is None:
        raise UsageError("give --family FILE or --m with --skeletons")
    return [SimplicialComplex.skeleton(args.m, k) for k in dims]


def cmd_unavoidable(args):
    family = _family_from_args(args)
    res = is_collectively_unavoidable(family)
    inputs = {"m": family[0].vertex_count, "complexes": [[[x + 1 for x in f] for f in K.facets] for K in family]}
    return (OK if res else REFUTED), inputs, {}, res.to_json()


def _antichain_row(m, r, nu, s) -> dict:
    ok, pair = is_antichain(alpha_difference(m, r, nu, s))
    row = {"m": m, "r": r, "nu": nu, "s": s, "antichain": ok}
    if pair:
        row["comparable"] = [sorted([c.column, c.row] for c in x) for x in pair]
    return row


def _model_row(r, s, t) -> dict:
    P = model_poset(r, s, t)
    dim = order_complex_dim(P)
    free, _ = free_cyclic_action(P, r)
    return {"r": r, "s": s, "t": t, "dim": dim, "expected": t - s - 1, "ok": dim == t - s - 1, "free_cyclic": free}


def cmd_antichain(args):
    if args.model:
        r, s, t = _ints(args.model)
        row = _model_row(r, s, t)
        return (OK if row["ok"] else REFUTED), {"model": [r, s, t]}, {}, row
    if None in (args.m, args.r, args.nu, args.s):
        raise UsageError("give --m --r --nu --s, or --model r,s,t")
    row = _antichain_row(args.m, args.r, args.nu, args.s)
    derived = {"working_hypothesis": alpha_hypothesis(args.m, args.r, args.nu, args.s)}
    return (OK if row["antichain"] else REFUTED), {"m": args.m, "r": args.r, "nu": args.nu, "s": args.s}, derived, row


# -- presets ---------------------------------------------------------------------


def symmetric_grid():
    for n in (2, 3):
        for nu in (1, 2):
            for s in range(n):
                for m in (n * (nu + 1) + s - 1, n * (nu + 1) + s):
                    yield m, n, nu, s


def preset_shelling_connectivity(args) -> tuple[bool, list[dict]]:
    rows = []
    for m, n, nu, s in symmetric_grid():
        spec = ComplexSpec.symmetric(m, n, nu, s)
        row = {"m": m, "n": n, "nu": nu, "s": s}
        try:
            order = paper_shelling_order(spec, args.limit_facets)
            row["facets"] = len(order)
            row["shelling_certified"] = True
        except ShellingError as exc:
            row["shelling_certified"] = False
            row["shelling_error"] = str(exc)
            order = None
        rep = connectivity_evidence(spec, _fields(args), args.limit_facets)
        row["mu"] = rep.mu
        row["dim"] = rep.dim
        row["verdict"] = rep.verdict
        row["top_degree_only"] = all(
            all(r == 0 for i, r in enumerate(ranks) if i != rep.dim) for ranks in rep.betti.values()
        )
        row["top_rank"] = rep.betti["Q"][rep.dim] if "Q" in rep.betti else None
        rows.append(row)
    ok = all(r["shelling_certified"] and r["verdict"] == "pass" and r["top_degree_only"] for r in rows)
    return ok, rows


EXISTENCE_PROFILES = ((2, 2, 1, 0), (3, 2, 1, 1), (2, 3, 1, 1), (4, 2, 2, 0))
NECESSITY_PROFILES = ((2, 2, 0, 1), (3, 2, 0, 1))


def preset_partitions(args) -> tuple[bool, list[dict]]:
    rows = []
    trials = args.trials or 100
    for d, r, k, s in EXISTENCE_PROFILES:
        rep = run_trials(DimensionProfile(r, k, s), d, trials, args.seed, threads=args.threads)
        rows.append({"kind": "existence", **rep.to_json(), "ok": rep.found == rep.trials})
    linked = args.trials or 500
    rep = run_trials(DimensionProfile(2, 1, 1), 3, linked, args.seed, N=5, threads=args.threads)
    rows.append({"kind": "linked_triangle_edge", **rep.to_json(), "ok": rep.found == rep.trials})
    necessity = args.trials or 50
    for d, r, k, s in NECESSITY_PROFILES:
        rep = run_trials(DimensionProfile(r, k, s), d, necessity, args.seed, threads=args.threads)
        rows.append({"kind": "necessity", **rep.to_json(), "ok": rep.found == 0})
    return all(r["ok"] for r in rows), rows


SQUARE = ((0, 0), (1, 0), (1, 1), (0, 1))


def preset_square(args) -> tuple[bool, list[dict]]:
    config = PointConfiguration.of(SQUARE)
    rows = []
    for dims, expect in (((2, 0), False), ((1, 1), True)):
        res = search_partition(config, dims)
        adm = check_admissible(AdmissibleTuple(2, dims))
        rows.append({"dims": list(dims), "expected": expect, **res.to_json(), "admissibility": adm, "ok": res.found == expect})
    return all(r["ok"] for r in rows), rows


def preset_antichain(args) -> tuple[bool, list[dict]]:
    rows = []
    for r in (2, 3):
        for nu in (1, 2):
            for s in range(2, r + 1):
                for m in range(1, 9):
                    if alpha_hypothesis(m, r, nu, s):
                        rows.append({"kind": "antichain", **_antichain_row(m, r, nu, s)})
    for r in range(2, 7):
        for t in range(2, r):
            for s in range(1, t):
                rows.append({"kind": "model", **_model_row(r, s, t)})
    ok = all(row.get("antichain", row.get("ok")) for row in rows)
    return ok, rows


PRESETS = {"thm33": preset_shelling_connectivity, "thm12": preset_partitions, "fig1": preset_square, "antichain": preset_antichain}


def cmd_grid(args):
    if args.preset not in PRESETS:
        raise UsageError(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
    ok, rows = PRESETS[args.preset](args)
    return (OK if ok else REFUTED), {"preset": args.preset}, {}, {"all_ok": ok, "rows": rows}


COMMANDS = {
    "build": cmd_build,
    "shell": cmd_shell,
    "homology": cmd_homology,
    "connectivity": cmd_connectivity,
    "tverberg": cmd_tverberg,
    "unavoidable": cmd_unavoidable,
    "antichain": cmd_antichain,
    "grid": cmd_grid,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=int)
    common.add_argument("--n", type=int)
    common.add_argument("--nu", type=int)
    common.add_argument("--s", type=int)
    common.add_argument("--k", help="an integer, or comma-separated row caps")
    common.add_argument("--r", type=int)
    common.add_argument("--d", type=int)
    common.add_argument("--N", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--out")
    common.add_argument("--limit-facets", type=int, default=10**7)
    common.add_argument("--limit-lp", type=int, default=DEFAULT_LP_LIMIT)
    common.add_argument("--fields", help="comma-separated, e.g. Q,F2,F3,F5")
    common.add_argument("--timing", action="store_true", help="add wall-clock time (output is then not reproducible)")

    parser = argparse.ArgumentParser(prog="chessplex", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"chessplex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("build", parents=[common], help="enumerate facets and the f-vector")
    p.add_argument("--symmetrized", action="store_true")
    p.add_argument("--facets", action="store_true", help="include the facet list")
    p = sub.add_parser("shell", parents=[common], help="build and verify the shelling order")
    p.add_argument("--certificate", action="store_true", help="include the compressed certificate")
    p = sub.add_parser("homology", parents=[common], help="reduced homology ranks")
    p.add_argument("--symmetrized", action="store_true")
    p = sub.add_parser("connectivity", parents=[common], help="homology evidence for the connectivity bound")
    p.add_argument("--symmetrized", action="store_true")
    p = sub.add_parser("tverberg", parents=[common], help="search constrained Tverberg partitions")
    p.add_argument("--config", help="JSON file with a point configuration")
    p.add_argument("--dims", help="comma-separated dimension caps (with --config)")
    p = sub.add_parser("unavoidable", parents=[common], help="collective unavoidability of a family")
    p.add_argument("--family", help='JSON file {"m": .., "complexes": [[facet, ..], ..]} (1-based vertices)')
    p.add_argument("--skeletons", help="comma-separated skeleton dimensions of the full simplex on [m]")
    p = sub.add_parser("antichain", parents=[common], help="antichain check for consecutive cap families")
    p.add_argument("--model", help="r,s,t: check the model poset of subsets instead")
    p = sub.add_parser("grid", parents=[common], help="run a preset parameter grid")
    p.add_argument("--preset", required=True, choices=sorted(PRESETS))
    return parser


def execute(args) -> tuple[int, dict]:
    if args.threads is None:
        args.threads = default_threads()
    if args.trials is None and args.command == "tverberg":
        args.trials = 100
    started = time.perf_counter()
    report: dict = {"command": args.command, "version": __version__}
    try:
        status, inputs, derived, result = COMMANDS[args.command](args)
        report.update({"inputs": inputs, "derived": derived, "result": result})
    except (UsageError, ValueError, ResourceLimitError, ShellingError) as exc:
        status = ERROR
        report["error"] = f"{type(exc).__name__}: {exc}"
    report["status"] = {OK: "verified", REFUTED: "refuted", ERROR: "error"}[status]
    if args.timing:
        report["timing"] = {"seconds": round(time.perf_counter() - started, 3)}
    return status, report


def run(argv: list[str] | None = None) -> tuple[int, dict]:
    return execute(build_parser().parse_args(argv))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    status, report = execute(args)
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == ERROR:
        sys.stderr.write(report["error"] + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
