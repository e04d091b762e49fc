"""Command-line interface: ``gen``, ``invariants``, ``verify``, ``css``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import generators as gen
from .complex import Chain, Cochain, SimplicialComplex, dumps_complex, load_complex, save_complex
from .errors import DegeneratePairingError
from .homology import (
    betti_numbers,
    class_with_dual,
    cohomology_basis,
    cohomology_class,
    homology_class,
)
from .minweight import Budget
from .systolic import cut_alpha, min_weight_in_class, sys_detected
from .verification import cup_pair, verify_multiclass, verify_theorem, write_csv


def _budget(args) -> Budget:
    return Budget(enum_cap=args.enum_cap, weight_cap=args.weight_cap, budget_ms=args.budget_ms, seed=args.seed)


def _add_budget_flags(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0, help="seed for randomized searches and samples")
    p.add_argument("--enum-cap", type=int, default=24, help="largest boundary rank enumerated exhaustively")
    p.add_argument("--weight-cap", type=int, default=None, help="largest support tried by exact searches")
    p.add_argument("--budget-ms", type=float, default=None, help="wall-clock budget per search")


def _emit(text: str, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def _simplices_arg(value: str):
    """Inline JSON list of simplices, or a path to a JSON file holding one."""
    p = Path(value)
    data = json.loads(p.read_text()) if p.exists() else json.loads(value)
    if isinstance(data, dict):
        data = data.get("simplices", data.get("alpha_star"))
    return [list(s) for s in data]


# -- gen ---------------------------------------------------------------------------------------


def cmd_gen(args) -> int:
    fam = args.family
    extra = None
    if fam == "cycle":
        M = gen.cycle_graph(args.m)
    elif fam == "grid-torus":
        M = gen.grid_torus(args.k)
    elif fam == "torus7":
        M = gen.torus7()
    elif fam == "rp2":
        M = gen.rp2_minimal()
    elif fam == "s1-x-sphere":
        M = gen.s1_x_sphere(args.p, args.n)
    elif fam == "connected-sum":
        if not (args.a and args.b):
            raise SystemExit("connected-sum needs --a and --b")
        M, cmap = gen.connected_sum(load_complex(args.a), load_complex(args.b))
        extra = {"alpha_star": [[int(v) for v in s] for s in cmap.alpha_star(_budget(args)).support]}
    elif fam == "subdivision":
        if not args.input:
            raise SystemExit("subdivision needs --input")
        M = gen.subdivide(load_complex(args.input), "barycentric", args.t)
    elif fam == "random":
        M = gen.random_pure_complex(args.vertices, args.top, args.dim, args.seed)
    else:
        raise SystemExit(f"unknown family {fam}")
    if args.output:
        save_complex(M, args.output)
        if extra is not None:
            Path(str(args.output) + ".alpha_star.json").write_text(json.dumps(extra) + "\n")
    else:
        sys.stdout.write(dumps_complex(M))
    print(f"f-vector {M.f_vector}", file=sys.stderr)
    return 0


# -- invariants -----------------------------------------------------------------------------------


def _selected_classes(M: SimplicialComplex, args):
    if args.cocycle:
        c = Cochain.from_simplices(M, args.k, _simplices_arg(args.cocycle))
        return [cohomology_class(Cochain(M, c.k, c.bits))]
    if args.dual_cycle:
        simplices = _simplices_arg(args.dual_cycle)
        z = Chain.from_simplices(M, M.n - args.k, simplices)
        return [class_with_dual(M, homology_class(z))]
    return cohomology_basis(M, args.k)


def _result_dict(res) -> dict:
    return {"weight": res.weight, "certified": res.certified, "method": res.method}


def cmd_invariants(args) -> int:
    M = load_complex(args.input)
    budget = _budget(args)
    out = {"f_vector": list(M.f_vector), "betti": list(betti_numbers(M)), "k": args.k, "classes": []}
    classes = _selected_classes(M, args)
    if not classes:
        print(f"H^{args.k} is trivial", file=sys.stderr)
    for alpha in classes:
        if alpha.is_zero():
            raise SystemExit("selected class is zero")
        entry = {"alpha": list(alpha.coords)}
        entry["sys_alpha"] = _result_dict(sys_detected(M, alpha, budget))
        cut = cut_alpha(M, alpha, budget)
        entry["cut_alpha"] = _result_dict(cut)
        entry["cut_notes"] = list(cut.notes)
        try:
            from .homology import poincare_dual

            dual = poincare_dual(M, alpha)
            entry["dual_class"] = list(dual.coords)
            entry["sys_dual"] = _result_dict(min_weight_in_class(M, dual, budget))
        except DegeneratePairingError as exc:
            entry["dual_class"] = None
            entry["dual_note"] = str(exc)
        out["classes"].append(entry)
    _emit(json.dumps(out, indent=2) + "\n", args.output)
    return 0


# -- verify -----------------------------------------------------------------------------------------


def _instances(args):
    if args.sweep:
        fam = args.sweep
        lo, hi = args.range
        for k in range(lo, hi + 1):
            if fam == "grid-torus":
                yield f"grid_torus_{k:02d}", f"grid_torus(k={k})", gen.grid_torus(k)
            elif fam == "cycle":
                yield f"cycle_{k:02d}", f"cycle(m={k})", gen.cycle_graph(k)
            elif fam == "s1-x-sphere":
                yield f"s1_x_sphere_{k:02d}_3", f"s1_x_sphere(p={k},n=3)", gen.s1_x_sphere(k, 3)
            else:
                raise SystemExit(f"no sweep for family {fam}")
    for path in args.inputs:
        yield Path(path).stem, "file", load_complex(path)


def cmd_verify(args) -> int:
    budget = _budget(args)
    reports = []
    failed = False
    for inst, family, M in _instances(args):
        if args.suite in ("theorem", "all"):
            for alpha in cohomology_basis(M, args.k):
                try:
                    rep = verify_theorem(M, alpha, args.eps, budget, instance=inst, family=family, seed=args.seed, order=args.order)
                except Exception as exc:  # per-instance failures are reported, the sweep continues
                    print(f"{inst}: {type(exc).__name__}: {exc}", file=sys.stderr)
                    failed = True
                    continue
                reports.append(rep)
        if args.suite in ("multiclass", "all"):
            pair = cup_pair(M)
            if pair is None:
                print(f"{inst}: no degree-1 pair with nonzero cup product", file=sys.stderr)
            else:
                reports.append(verify_multiclass(M, list(pair), args.eps, budget, instance=inst, family=family, seed=args.seed))
    for r in reports:
        for c in r.checks:
            if c.failed:
                failed = True
                print(f"{r.instance} [{r.alpha}] {c.name} FAILED: {c.detail}", file=sys.stderr)
    _emit(write_csv(reports), args.output)
    return 1 if failed else 0


# -- css ---------------------------------------------------------------------------------------------


def cmd_css(args) -> int:
    from .codes import css_code, write_check_matrix

    M = load_complex(args.input)
    code = css_code(M, args.k, _budget(args))
    if args.output:
        write_check_matrix(code.hx, f"{args.output}.hx.txt")
        write_check_matrix(code.hz, f"{args.output}.hz.txt")
    print(code.summary())
    return 0 if code.orthogonal else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="z2systole", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a complex as JSON")
    g.add_argument("family", choices=["cycle", "grid-torus", "torus7", "rp2", "s1-x-sphere", "connected-sum", "subdivision", "random"])
    g.add_argument("--m", type=int, default=6, help="cycle length")
    g.add_argument("--k", type=int, default=4, help="grid size of the torus")
    g.add_argument("--p", type=int, default=4, help="circle length of S^1 x S^(n-1)")
    g.add_argument("--n", type=int, default=3, help="dimension of S^1 x S^(n-1)")
    g.add_argument("--a", help="first summand (JSON file)")
    g.add_argument("--b", help="second summand (JSON file)")
    g.add_argument("--input", help="complex to subdivide (JSON file)")
    g.add_argument("--t", type=int, default=1, help="number of barycentric subdivisions")
    g.add_argument("--vertices", type=int, default=10, help="vertex count for random complexes")
    g.add_argument("--top", type=int, default=12, help="top simplex count for random complexes")
    g.add_argument("--dim", type=int, default=2, help="dimension of random complexes")
    g.add_argument("-o", "--output", help="output JSON path (default stdout)")
    _add_budget_flags(g)
    g.set_defaults(func=cmd_gen)

    inv = sub.add_parser("invariants", help="sys^alpha, cut^alpha and dual systoles")
    inv.add_argument("input", help="complex JSON file")
    inv.add_argument("--k", type=int, default=1, help="degree of alpha")
    sel = inv.add_mutually_exclusive_group()
    sel.add_argument("--cocycle", help="support of a cocycle (JSON list of simplices or a file)")
    sel.add_argument("--dual-cycle", help="cycle representing the dual class (JSON or file)")
    inv.add_argument("-o", "--output", help="output JSON path (default stdout)")
    _add_budget_flags(inv)
    inv.set_defaults(func=cmd_invariants)

    v = sub.add_parser("verify", help="run lemma and inequality checks, write CSV")
    v.add_argument("inputs", nargs="*", help="complex JSON files")
    v.add_argument("--sweep", choices=["grid-torus", "cycle", "s1-x-sphere"], help="family to sweep over --range")
    v.add_argument("--range", type=int, nargs=2, default=(3, 8), metavar=("LO", "HI"), help="inclusive size range of the sweep")
    v.add_argument("--suite", choices=["theorem", "multiclass", "all"], default="theorem", help="single-class checks, cup-product checks or both")
    v.add_argument("--k", type=int, default=1, help="degree of the classes checked")
    v.add_argument("--eps", type=float, default=0.5, help="exponent slack for ratios and the good-ball search")
    v.add_argument("--order", choices=["largest-first", "paper"], default="largest-first", help="greedy order for the ball cover")
    v.add_argument("-o", "--output", help="CSV path (default stdout)")
    _add_budget_flags(v)
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("css", help="extract a CSS code")
    c.add_argument("input", help="complex JSON file")
    c.add_argument("--k", type=int, default=1, help="qubit degree")
    c.add_argument("-o", "--output", help="prefix for the .hx.txt and .hz.txt check files")
    _add_budget_flags(c)
    c.set_defaults(func=cmd_css)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
