"""Command-line front end.

Every subcommand except ``gen`` writes one JSON report document::

    {"schema": "signedturan.report/1", "command": [...], "results": {...}}

with floats rounded to 12 significant digits. ``--timing`` adds a
``timing`` block (and makes the output depend on the clock).

Exit status: 0 success, 1 a checked property failed, 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import constructions, sg1
from .graph import GraphError, SignedGraph, switch, underlying
from .invariants import (
    CheckFailed,
    balanced_clique_number,
    check_radius_equals_index,
    clique_number,
    find_unbalanced_complete,
    is_balanced,
    is_c3_minus_free,
    negative_girth,
)
from .perturb import (
    Kind,
    Perturbation,
    PerturbationError,
    apply,
    equality_diagnosis,
    nonneg_switch_set,
)
from .spectra import (
    NoSignChangeError,
    NonEquitableError,
    Partition,
    char_poly,
    eigenpairs,
    eigenvalues,
    quotient_matrix,
)

SCHEMA = "signedturan.report/1"
SIG_DIGITS = 12


class UsageError(Exception):
    """Bad arguments or input; exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- output -------------------------------------------------------------------


def _clean(obj):
    """JSON-ready copy: fixed float precision, numpy scalars unwrapped."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        x = float(obj)
        if not math.isfinite(x):
            return None
        return float(f"{x:.{SIG_DIGITS}g}") + 0.0
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(args, results: dict, started: float) -> str:
    doc = {"schema": SCHEMA, "command": list(args.argv), "results": results}
    if getattr(args, "timing", False):
        doc["timing"] = {"seconds": time.perf_counter() - started}
    return json.dumps(_clean(doc), indent=2) + "\n"


# -- input --------------------------------------------------------------------


def _load(path: str) -> SignedGraph:
    if path == "-":
        return sg1.loads(sys.stdin.read())
    return sg1.read(path)


def _pairs(text: str) -> tuple[tuple[int, int], ...]:
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            u, v = (int(t) for t in item.replace(":", "-").split("-"))
        except ValueError:
            raise UsageError(f"bad edge {item!r}; expected u-v")
        out.append((u, v))
    return tuple(out)


def _triple(text: str) -> tuple[int, int, int]:
    try:
        i, j, k = (int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"bad triple {text!r}; expected i,j,k")
    return i, j, k


def _partition(text: str) -> Partition:
    try:
        blocks = [tuple(int(t) for t in b.split(",") if t.strip()) for b in text.split("|")]
    except ValueError:
        raise UsageError(f"bad partition {text!r}; expected blocks like 0|1|2,3")
    return Partition(tuple(blocks))


def _sign(text: str) -> int:
    if text in ("+", "+1", "1", "pos", "positive"):
        return 1
    if text in ("-", "-1", "neg", "negative"):
        return -1
    raise UsageError(f"bad sign {text!r}; expected + or -")


# -- subcommands --------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.family == "gamma":
        g = constructions.gamma_construction(args.n, args.r)
    elif args.family == "turan":
        g, _ = constructions.turan_graph(args.n, args.r)
    elif args.family == "complete":
        g = constructions.complete(args.n, _sign(args.sign))
    else:
        g = constructions.unbalanced_complete(args.k)
    _emit(sg1.dumps(g), args.out)
    return 0


def _spectrum_payload(g: SignedGraph, with_poly: bool) -> dict:
    spec = eigenvalues(g.sign_matrix())
    out = {
        "n": g.n,
        "e": g.e,
        "eigenvalues": list(spec.values),
        "index": spec.index if g.n else None,
        "spectral_radius": spec.spectral_radius if g.n else None,
    }
    if with_poly:
        poly = char_poly(g.sign_matrix().astype(np.int64))
        out["charpoly"] = {"coefficients": list(poly.coeffs), "text": str(poly)}
    return out


def cmd_spectrum(args, started) -> int:
    g = _load(args.input)
    _emit(_report(args, _spectrum_payload(g, args.charpoly), started), args.out)
    return 0


def cmd_check(args, started) -> int:
    g = _load(args.input)
    what = args.property
    if what == "balanced":
        ok, cert = is_balanced(g)
        results = {
            "balanced": ok,
            "switch_set": sorted(cert.switch_set) if cert.switch_set is not None else None,
            "negative_cycle": list(cert.cycle) if cert.cycle is not None else None,
            "negative_girth": negative_girth(g),
        }
        status = 0
    elif what == "free":
        if args.k is None and not args.c3:
            raise UsageError("check free needs --k K or --c3")
        results = {}
        if args.k is not None:
            found = find_unbalanced_complete(g, args.k)
            results["k"] = args.k
            results["unbalanced_complete_free"] = found is None
            results["witness"] = list(found) if found is not None else None
        if args.c3:
            results["negative_triangle_free"] = is_c3_minus_free(g)
        status = 0
    elif what == "bounds":
        results, status = _bounds(g)
    else:
        if args.r is None:
            raise UsageError("check radius-index needs --r R")
        try:
            held = check_radius_equals_index(g, args.r)
            results = {"r": args.r, "hypotheses_hold": held, "radius_equals_index": True if held else None}
            status = 0
        except CheckFailed as exc:
            results = {"r": args.r, "hypotheses_hold": True, "radius_equals_index": False,
                       "error": str(exc)}
            status = 1
        spec = eigenvalues(g.sign_matrix())
        results["index"] = spec.index
        results["spectral_radius"] = spec.spectral_radius
    _emit(_report(args, results, started), args.out)
    return status


def _bounds(g: SignedGraph) -> tuple[dict, int]:
    tol = 1e-9
    n = g.n
    if n == 0:
        raise UsageError("bounds need at least one vertex")
    values, vectors = eigenpairs(g)
    lam = float(values[0])
    omega = clique_number(g)
    omega_b = balanced_clique_number(g)
    lam_under = float(eigenvalues(underlying(g).sign_matrix()).index)
    balanced = is_balanced(g)[0]
    complete = g.e == n * (n - 1) // 2
    k = int(np.floor(n - lam + tol)) + 1
    zeros = int(np.sum(np.abs(vectors[:, 0]) <= 1e-8))
    rows = {
        "clique_bound": {"bound": n * (1 - 1 / omega), "holds": lam <= n * (1 - 1 / omega) + tol},
        "balanced_clique_bound": {
            "bound": n * (1 - 1 / omega_b),
            "holds": lam <= n * (1 - 1 / omega_b) + tol,
        },
        "underlying_bound": {"bound": lam_under, "holds": lam <= lam_under + tol},
        "order_bound": {
            "bound": n - 1,
            "holds": lam <= n - 1 + tol,
            "attained": abs(lam - (n - 1)) <= tol,
            "attained_iff_balanced_complete": (abs(lam - (n - 1)) <= tol) == (balanced and complete),
        },
        "zero_entry_bound": {"zeros": zeros, "allowed": k - 2, "holds": zeros <= k - 2},
    }
    results = {
        "index": lam,
        "clique_number": omega,
        "balanced_clique_number": omega_b,
        "bounds": rows,
    }
    ok = all(r["holds"] for r in rows.values()) and rows["order_bound"]["attained_iff_balanced_complete"]
    results["all_hold"] = ok
    return results, 0 if ok else 1


def cmd_perturb(args, started) -> int:
    g = _load(args.input)
    switch_set = x = None
    if args.nonneg_switch:
        u_set, x = nonneg_switch_set(g)
        g = switch(g, u_set)
        x = np.abs(x)
        switch_set = sorted(u_set)
    kind = Kind(args.kind)
    if kind.uses_edges:
        if not args.edges:
            raise UsageError(f"{kind.value} needs --edges")
        p = Perturbation(kind, _pairs(args.edges))
    else:
        if not args.triple:
            raise UsageError(f"{kind.value} needs --triple")
        p = Perturbation(kind, triple=_triple(args.triple))
    d = equality_diagnosis(g, p, x)
    results = {
        "switched_vertices": switch_set,
        "diagnosis": d.as_dict(),
        "result_graph": sg1.dumps(apply(g, p)),
    }
    failed = (d.precondition and d.delta < -1e-9) or (
        d.index_unchanged and not d.degenerate and d.precondition and not d.condition_met
    )
    _emit(_report(args, results, started), args.out)
    return 1 if failed else 0


def cmd_quotient(args, started) -> int:
    g = _load(args.input)
    p = _partition(args.partition)
    q = quotient_matrix(g.sign_matrix().astype(np.int64), p)
    poly = char_poly(q)
    q_values = sorted(np.linalg.eigvals(q.astype(float)).real.tolist(), reverse=True)
    spec = list(eigenvalues(g.sign_matrix()).values)
    remaining = list(spec)
    contained = True
    for v in q_values:
        j = int(np.argmin([abs(v - w) for w in remaining])) if remaining else -1
        if j < 0 or abs(v - remaining[j]) > 1e-8:
            contained = False
            break
        remaining.pop(j)
    results = {
        "blocks": [list(b) for b in p.blocks],
        "quotient": q.tolist(),
        "charpoly": {"coefficients": list(poly.coeffs), "text": str(poly)},
        "quotient_eigenvalues": q_values,
        "eigenvalues": spec,
        "quotient_spectrum_contained": contained,
    }
    _emit(_report(args, results, started), args.out)
    return 0 if contained else 1


def cmd_verify(args, started) -> int:
    from . import search

    kw = {"jobs": args.jobs, "cache_dir": args.cache_dir}
    if args.mode == "all":
        results = search.verify_all(
            args.n_max, allow_n7=args.allow_n7, seed=args.seed, trials=args.trials, **kw
        )
        passed = results["all_passed"]
    else:
        if args.n is None:
            raise UsageError(f"verify --mode {args.mode} needs --n")
        if args.mode == "c3":
            reports = list(search.c3_reports(args.n, allow_n7=args.allow_n7, **kw))
        else:
            rs = [args.r] if args.r is not None else list(range(3, args.n))
            if not rs:
                raise UsageError(f"no r with 3 <= r <= n-1 for n={args.n}")
            for r in rs:
                search._check_nr(args.n, r)
            if args.mode == "edges":
                res = search.scan(args.n, rs, index=False, **kw)
                reports = [search.edges_report(res, r) for r in rs]
            else:
                search._gate(args.n, args.allow_n7)
                res = search.scan(args.n, rs, index=True, **kw)
                reports = [search.index_report(res, r) for r in rs]
        results = {"mode": args.mode, "reports": [rep.as_dict() for rep in reports]}
        passed = all(rep.holds for rep in reports)
        results["all_passed"] = passed
    _emit(_report(args, results, started), args.out)
    return 0 if passed else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="signedturan", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="progress logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing")

    graph_in = _Parser(add_help=False)
    graph_in.add_argument("--in", dest="input", default="-", help="SG1 file, '-' for stdin")

    gen = sub.add_parser("gen", help="emit a named graph as SG1")
    gen.add_argument("family", choices=["gamma", "turan", "complete", "unbalanced-complete"])
    gen.add_argument("--n", type=int)
    gen.add_argument("--r", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--sign", default="+")
    gen.add_argument("--out")

    spec = sub.add_parser("spectrum", parents=[graph_in, common], help="eigenvalues of a graph")
    spec.add_argument("--charpoly", action="store_true", help="also the exact characteristic polynomial")

    check = sub.add_parser("check", parents=[graph_in, common], help="structural and spectral checks")
    check.add_argument("property", choices=["balanced", "free", "bounds", "radius-index"])
    check.add_argument("--k", type=int, help="order of the forbidden unbalanced complete graph")
    check.add_argument("--c3", action="store_true", help="check for negative triangles")
    check.add_argument("--r", type=int, help="r for the radius/index check")

    pert = sub.add_parser("perturb", parents=[graph_in, common], help="apply an index-monotone edit")
    pert.add_argument("--kind", required=True, choices=[k.value for k in Kind])
    pert.add_argument("--edges", help="comma-separated pairs, e.g. 0-1,2-3")
    pert.add_argument("--triple", help="i,j,k for rotate-positive and swap-signs")
    pert.add_argument("--nonneg-switch", action="store_true",
                      help="switch first so the leading eigenvector is non-negative")

    quot = sub.add_parser("quotient", parents=[graph_in, common], help="equitable-partition quotient")
    quot.add_argument("--partition", required=True, help="blocks separated by '|', e.g. 0|1|2,3")

    ver = sub.add_parser("verify", parents=[common], help="exhaustive verification at small order")
    ver.add_argument("--mode", choices=["edges", "index", "c3", "all"], default="all")
    ver.add_argument("--n", type=int)
    ver.add_argument("--r", type=int)
    ver.add_argument("--n-max", type=int, default=6)
    ver.add_argument("--jobs", type=int, default=1)
    ver.add_argument("--allow-n7", action="store_true")
    ver.add_argument("--cache-dir")
    ver.add_argument("--seed", type=int, default=0)
    ver.add_argument("--trials", type=int, default=1000)
    return parser


def _check_gen_args(args) -> None:
    need = {"gamma": ("n", "r"), "turan": ("n", "r"), "complete": ("n",),
            "unbalanced-complete": ("k",)}[args.family]
    missing = [f"--{name}" for name in need if getattr(args, name) is None]
    if missing:
        raise UsageError(f"gen {args.family} needs {' '.join(missing)}")


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    started = time.perf_counter()
    try:
        args = build_parser().parse_args(argv)
        args.argv = argv
        logging.basicConfig(
            level=logging.INFO if args.verbose else logging.WARNING,
            format="%(levelname)s %(name)s: %(message)s",
        )
        if args.command == "gen":
            _check_gen_args(args)
            return cmd_gen(args)
        handler = {
            "spectrum": cmd_spectrum,
            "check": cmd_check,
            "perturb": cmd_perturb,
            "quotient": cmd_quotient,
            "verify": cmd_verify,
        }[args.command]
        return handler(args, started)
    except (UsageError, GraphError, PerturbationError, NonEquitableError, NoSignChangeError,
            ValueError, OSError) as exc:
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"signedturan: error: {message}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
