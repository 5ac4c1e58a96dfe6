"""Command line front end.

    looprate exact GRAPH.json
    looprate table square|all
    looprate sample GRAPH.json --steps 1000000 --seed 1
    looprate sandpile CONFIG.json
    looprate verify --n 24
    looprate lattice-check square --n 32

Output is JSON (or CSV where asked); exact rationals are written as "p/q"
strings.  Any package error becomes {"error": code, "message": ...} on
stdout with exit status 1.
"""
import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import sympy

from . import numerics as nm
from .errors import LoopRateError, PreconditionFailed
from .forests import f2_minor, fk, unicycles_via_dual
from .graph import graph_from_json
from .kernels import kernel_for, tree_weight
from .looping import loop_stats


def render(x, backend=nm.EXACT):
    if isinstance(x, Fraction):
        return float(x) if backend == nm.FLOAT else str(x)
    if isinstance(x, sympy.Basic):
        return str(x) if x.free_symbols else float(x)
    if isinstance(x, dict):
        return {str(k): render(v, backend) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render(v, backend) for v in x]
    if isinstance(x, float) and not math.isfinite(x):
        return None  # strict JSON has no NaN
    return x


def _load_json(path):
    with open(path) as fh:
        return json.load(fh)


def cmd_exact(args):
    g, rot = graph_from_json(_load_json(args.graph))
    backend = args.backend
    if backend == nm.FLOAT:
        st = loop_stats(g, rot, backend=nm.FLOAT)
        f1 = tree_weight(g, backend=nm.FLOAT)
        f2 = fk(g, 2, backend=nm.FLOAT) * f1
    else:
        st = loop_stats(g, rot)
        f1 = tree_weight(g)
        f2 = f2_minor(g)
    out = st.as_dict()
    out.update({"F1": f1, "F2": f2, "unicycles": unicycles_via_dual(g, rot)})
    return render(out, backend)


def _row_dict(name, stats):
    from .lattice import TABLE_COLUMNS

    d = stats.as_dict()
    return {"lattice": name, **{c: d[c] for c in TABLE_COLUMNS}}


def cmd_table(args):
    from .lattice import TABLE_ORDER, builtin, table_row

    names = TABLE_ORDER if args.lattice == "all" else [args.lattice]
    beta = Fraction(args.beta) if args.beta is not None else 1
    return [render(_row_dict(n, table_row(builtin(n, beta))), args.backend) for n in names]


def cmd_sample(args):
    from .sampler import estimate_edge_probs, estimate_looping, resolve_seed
    from .looping import lambda_mean_loop

    g, rot = graph_from_json(_load_json(args.graph))
    steps = args.steps
    seed = resolve_seed(args.seed)
    est = estimate_looping(g, steps, seed)
    out = {k: render(est[k].as_dict()) for k in ("rho", "tau", "lambda")}
    samples = max(1000, min(steps // 10, 10**5))
    probs = estimate_edge_probs(g, g.default_sink(), samples, seed)
    out["edge_in_tree"] = {str(eid): render(r.as_dict()) for eid, r in probs.items()}
    out["seed"] = seed
    out["steps"] = steps
    if rot is not None and g.n <= nm.EXACT_MAX_VERTICES:
        st = loop_stats(g, rot)
        A = kernel_for(g)
        exact = {"rho": st.rho, "tau": st.tau}
        try:
            exact["lambda"] = lambda_mean_loop(st.tau, st.rho)
        except LoopRateError:
            pass
        exact["edge_in_tree"] = {str(e.id): e.w * (A(e.u, e.v) + A(e.v, e.u)) for e in g.edges}
        out["exact"] = render(exact)
    return out


def cmd_sandpile(args):
    from .sandpile import SandpileConfig, is_recurrent, stabilize

    obj = _load_json(args.config)
    g, _ = graph_from_json(obj["graph"])
    by_name = {str(v): v for v in g.vertices}
    heights = {by_name[k]: int(h) for k, h in obj.get("heights", {}).items()}
    c = SandpileConfig(g, heights)
    stable, counts = stabilize(c)
    return {
        "heights": {str(k): v for k, v in stable.heights.items()},
        "topples": {str(k): v for k, v in counts.items()},
        "recurrent": is_recurrent(stable),
        "level": stable.level(),
    }


def cmd_verify(args):
    from .checks import run_checks
    from .forests import ORACLE_MAX_EDGES

    bound = args.n if args.n is not None else ORACLE_MAX_EDGES
    results, used = run_checks(bound)
    report = {k: {"passed": p, "total": t, "ok": p == t} for k, (p, t) in results.items()}
    out = {"graphs": used, "identities": report, "ok": all(r["ok"] for r in report.values())}
    if used == 0:
        out["warning"] = f"no test graph has at most {bound} edges; nothing was checked"
        print(out["warning"], file=sys.stderr)
    return out


def cmd_lattice_check(args):
    from .lattice import builtin, limit_check

    beta = float(Fraction(args.beta)) if args.beta is not None else 1
    spec = builtin(args.lattice, beta)
    sizes = [args.n] if args.n else [8, 16, 32]
    rows = []
    for n in sizes:
        r = limit_check(spec, n, tol=args.tol)
        rows.append({
            "n": n,
            "deviation": r.deviation,
            "edges": [
                {"from": e.i, "to": e.j, "offset": list(e.offset),
                 "A_ij": a, "A_ji": b, "closed_ij": ca, "closed_ji": cb}
                for e, a, b, ca, cb in r.rows
            ],
        })
    return {"lattice": spec.name, "beta": beta, "patches": rows}


VERBS = {
    "exact": cmd_exact,
    "table": cmd_table,
    "sample": cmd_sample,
    "sandpile": cmd_sandpile,
    "verify": cmd_verify,
    "lattice-check": cmd_lattice_check,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="overrides $LOOPRATE_SEED")
    common.add_argument("--backend", choices=[nm.EXACT, nm.FLOAT], default=nm.EXACT)
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--steps", type=int, default=10**6)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--format", choices=["json", "csv"], default="json")

    p = argparse.ArgumentParser(prog="looprate", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="verb", required=True)
    sub.add_parser("exact", parents=[common]).add_argument("graph")
    t = sub.add_parser("table", parents=[common])
    t.add_argument("lattice")
    t.add_argument("--beta", default=None)
    sub.add_parser("sample", parents=[common]).add_argument("graph")
    sub.add_parser("sandpile", parents=[common]).add_argument("config")
    sub.add_parser("verify", parents=[common])
    lc = sub.add_parser("lattice-check", parents=[common])
    lc.add_argument("lattice")
    lc.add_argument("--beta", default=None)
    return p


def to_csv(result):
    rows = result if isinstance(result, list) else [result]
    buf = io.StringIO()
    flat = [{k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in r.items()} for r in rows]
    w = csv.DictWriter(buf, fieldnames=list(flat[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(flat)
    return buf.getvalue()


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.tol <= 0:
        args.tol = 1e-10
    try:
        if args.verb == "sample" and args.steps < 1:
            raise PreconditionFailed("--steps must be positive")
        result = VERBS[args.verb](args)
        status = 0
        if args.verb == "verify" and not result["ok"]:
            status = 1
    except LoopRateError as exc:
        result, status = {"error": exc.code, "message": str(exc)}, 1
    except (OSError, ValueError, KeyError) as exc:
        result, status = {"error": type(exc).__name__, "message": str(exc)}, 1
    if args.format == "csv" and status == 0:
        text = to_csv(result)
    else:
        text = json.dumps(result, indent=2) + "\n"
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
