"""``passinet`` command line.

Exit codes: 0 success, 1 usage or parse error, 2 assumption violated
(A1: agent not hyper-minimum-phase, A2: no directed spanning tree),
3 numerical failure.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import digraph as dg
from . import gains as gn
from . import netfile, output, region, simkit
from .errors import (
    AssumptionError,
    BracketError,
    DimensionError,
    DivergenceError,
    DomainError,
    InvalidInputError,
    PassifiabilityError,
    PassinetError,
    TopologyError,
)
from .passify import passify_report

EXIT_OK, EXIT_USAGE, EXIT_ASSUMPTION, EXIT_NUMERIC = 0, 1, 2, 3
KAPPA0_TOL = 1e-6


class UsageError(PassinetError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_source(p, cases=False):
    p.add_argument("file", nargs="?", help="network file (JSON)")
    p.add_argument("--preset", choices=sorted(netfile.PRESETS), help="built-in network")
    p.add_argument("--n", type=int, help="cycle preset: number of agents")
    p.add_argument("--k", type=float, help="identical gain when the network has none")
    p.add_argument("--nu", type=float, help="dodeca preset: gain on the leading cycle")
    p.add_argument("--mu", type=float, help="dodeca preset: gain on the outer agents")
    if cases:
        p.add_argument("--case", choices=["1", "2", "both"], default="2",
                       help="three_node preset gain case")
    else:
        p.add_argument("--case", choices=["1", "2"], default="2", help="three_node preset gain case")


def build_parser():
    parser = _Parser(prog="passinet", description="Static consensus analysis for passifiable networks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="spectrum, passification level and gain thresholds")
    _add_source(p)
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--exact", action="store_true", help="run the bisection threshold for any agent")

    p = sub.add_parser("simulate", help="RK4 closed-loop simulation")
    _add_source(p, cases=True)
    p.add_argument("--t-end", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--out", help="trace CSV path")
    p.add_argument("--svg", help="SVG path for e(t); a phase-plane SVG is added for n=2 agents")
    p.add_argument("--decimate", type=int, default=10, help="keep every k-th step in the CSV")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("region", help="sample the sufficient gain-region boundary")
    _add_source(p)
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--samples", type=int)
    p.add_argument("--out", help="boundary CSV path")
    p.add_argument("--svg", help="SVG path for the boundary curve (two gain coordinates)")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("scaling", help="cycle threshold against its quadratic asymptote")
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--out", help="CSV path")

    p = sub.add_parser("passify", help="transfer numerator, HMP test and kappa0 of the agent")
    _add_source(p)
    p.add_argument("--json", action="store_true")
    return parser


def _load(args, case=None):
    if args.preset and args.file:
        raise UsageError("give either a network file or --preset, not both")
    if args.preset:
        kw = {}
        if args.preset == "three_node":
            kw["case"] = int(case or args.case)
        elif args.preset == "cycle":
            kw["n"] = args.n if args.n is not None else 10
            kw["k"] = args.k
        elif args.preset == "dodeca":
            kw["nu"], kw["mu"] = args.nu, args.mu
        return netfile.preset(args.preset, **kw)
    if not args.file:
        raise UsageError("a network file or --preset is required")
    return netfile.load_network_file(args.file)


def _c(z):
    return [float(z.real), float(z.imag)]


def _fmtc(z):
    return f"{z.real:.6g}{z.imag:+.6g}j"


def cmd_analyze(args, out):
    nf = _load(args)
    agent, g = nf.agent, nf.graph
    rep = passify_report(agent)
    lam_L = dg.spectrum_report(g)
    gains = nf.resolve_gains(args.k if args.k is not None else 1.0)
    res = {
        "network": nf.name or args.file,
        "agent": {
            "numerator": rep.numerator.coef.real.tolist(),
            "denominator": rep.denominator.coef.real.tolist(),
            "is_hmp": rep.is_hmp,
            "kappa0": rep.kappa0 if rep.is_hmp else None,
            "kappa0_tolerance": KAPPA0_TOL,
            "strictly_passive": rep.strictly_passive,
        },
        "graph": {
            "n": g.n,
            "has_spanning_tree": lam_L.has_spanning_tree,
            "leading_set": list(lam_L.leading_set),
            "laplacian_eigenvalues": [_c(z) for z in lam_L.eigenvalues],
            "r": lam_L.r,
        },
        "gains": gains.tolist(),
        "violations": [],
    }
    if not rep.is_hmp:
        res["violations"].append("A1 violated: g^T chi(s) is not hyper-minimum-phase")
    if not lam_L.has_spanning_tree:
        res["violations"].append("A2 violated: digraph has no directed spanning tree")

    if not res["violations"]:
        res["graph"]["v_left"] = lam_L.v_left.tolist()
        suff = gn.sufficient_gain_identical(agent, g)
        th = {"sufficient_identical": suff}
        kp = gains / np.linalg.norm(gains)
        uniform = np.allclose(gains, gains[0])
        if not uniform:
            th["direction"] = kp.tolist()
            th["sufficient_direction"] = gn.sufficient_gain_nonidentical(agent, g, kp)
        scale = gn.double_integrator_scale(agent)
        if scale is not None:
            th["exact_identical_closed_form"] = gn.general_threshold(lam_L.nonzero_eigenvalues) / scale
            if not uniform:
                lam_dir = gn.nonzero_spectrum(g, kp)
                th["exact_direction_closed_form"] = gn.general_threshold(lam_dir) / scale
        if scale is not None or args.exact:
            hi = max(2.0 * suff, 1.0)
            try:
                th["exact_identical_bisection"] = gn.threshold_bisection(agent, g, 0.0, hi)
                if not uniform:
                    hi_d = max(2.0 * th["sufficient_direction"], 1.0)
                    th["exact_direction_bisection"] = gn.threshold_bisection(agent, g, 0.0, hi_d, kp)
            except BracketError as exc:
                th["bisection_error"] = str(exc)
        verdict = gn.exact_consensus_test(agent, g, gains)
        res["thresholds"] = th
        res["verdict"] = {
            "achieved": verdict.achieved,
            "max_real_part": verdict.max_real_part,
            "witness": verdict.witness,
        }

    if args.json:
        out.write(json.dumps(res, indent=2) + "\n")
    else:
        _print_analysis(res, out)
    return EXIT_ASSUMPTION if res["violations"] else EXIT_OK


def _print_analysis(res, out):
    a, g = res["agent"], res["graph"]
    w = out.write
    w(f"network: {res['network']}\n")
    w(f"numerator (ascending): {a['numerator']}\n")
    w(f"denominator (ascending): {a['denominator']}\n")
    w(f"hyper-minimum-phase: {a['is_hmp']}\n")
    if a["is_hmp"]:
        note = " (already strictly passive, clamped)" if a["strictly_passive"] else ""
        w(f"kappa0: {a['kappa0']:.9g} (abs tol {a['kappa0_tolerance']:g}){note}\n")
    w(f"vertices: {g['n']}  spanning tree: {g['has_spanning_tree']}  leading set: {g['leading_set']}\n")
    w("Laplacian eigenvalues: " + ", ".join(_fmtc(complex(*z)) for z in g["laplacian_eigenvalues"]) + "\n")
    w(f"r(L): {g['r']:.9g}\n")
    for v in res["violations"]:
        w(v + "\n")
    if "thresholds" in res:
        w(f"left zero-eigenvector v(L): {np.round(g['v_left'], 9).tolist()}\n")
        for k, v in res["thresholds"].items():
            if isinstance(v, float):
                w(f"{k}: {v:.9g}\n")
            else:
                w(f"{k}: {v}\n")
        vd = res["verdict"]
        w(f"gains {res['gains']}: consensus={vd['achieved']} (max Re {vd['max_real_part']:.6g}; {vd['witness']})\n")


def _sim_params(args, nf):
    t_end = args.t_end if args.t_end is not None else nf.sim_value("t_end")
    dt = args.dt if args.dt is not None else nf.sim_value("dt")
    tol = args.tol if args.tol is not None else nf.sim_value("tol")
    return t_end, dt, tol


def _suffixed(path, tag):
    p = Path(path)
    return str(p.with_name(f"{p.stem}_{tag}{p.suffix}"))


def cmd_simulate(args, out):
    cases = ["1", "2"] if (args.preset == "three_node" and args.case == "both") else [args.case]
    runs = []
    for case in cases:
        nf = _load(args, case)
        spec = nf.to_spec(k=args.k if args.k is not None else 1.0)
        t_end, dt, tol = _sim_params(args, nf)
        try:
            trace = simkit.simulate(spec, t_end=t_end, dt=dt, tol=tol)
        except DivergenceError as exc:
            out.write(f"{nf.name or args.file}: diverged, first exceed at t={exc.time:.6g}\n")
            return EXIT_NUMERIC
        summary = simkit.convergence_report(trace, spec)
        tag = f"case{case}" if len(cases) > 1 else ""
        runs.append((nf, spec, trace, summary, tag))

    results = []
    for nf, spec, trace, summary, tag in runs:
        if args.out:
            path = _suffixed(args.out, tag) if tag else args.out
            output.write_trace_csv(path, trace, spec.N, spec.agent.n, args.decimate)
        label = nf.name or args.file
        results.append({"network": label, "t_end": float(trace.t[-1]), **summary.__dict__})
        if not args.json:
            out.write(f"{label}: {summary.line()}\n")
    if args.svg:
        series = [(f"e {tag}" if tag else "e(t)", tr.t, tr.e) for _, _, tr, _, tag in runs]
        Path(args.svg).write_text(
            output.svg_plot(series, "disagreement e(t)", "t [s]", "e", logy=True), encoding="utf-8"
        )
        for nf, spec, trace, _, tag in runs:
            if spec.agent.n != 2:
                continue
            ph = []
            for i in range(spec.N):
                xs = trace.states[:, 2 * i]
                ys = trace.states[:, 2 * i + 1]
                ph.append(("", ys, xs, output.PALETTE[1 + (i * 3) // spec.N]))
            path = _suffixed(args.svg, "phase" + (f"_{tag}" if tag else ""))
            Path(path).write_text(
                output.svg_plot(ph, "phase plane", "x_2 (position)", "x_1 (velocity)"),
                encoding="utf-8",
            )
    if args.json:
        out.write(json.dumps(results, indent=2) + "\n")
    return EXIT_OK


def cmd_region(args, out):
    nf = _load(args)
    bt = region.trace_boundary(nf.agent, nf.graph, eps=args.eps, samples=args.samples)
    if args.out:
        output.write_boundary_csv(args.out, bt)
    res = {"network": nf.name or args.file, "samples": len(bt.samples), "note": bt.note}
    for key, s in (("min", bt.min_sample), ("max", bt.max_sample)):
        item = {"h_rho": s.radius, "k_prime": s.k_prime.tolist(), "point": s.point.tolist()}
        if s.polar is not None:
            item["gamma"], item["rho"] = s.polar
            item["delta"] = s.delta
            a, b = (s.point[i - 1] for i in s.effective)
            item["ratio"] = a / b
        res[key] = item
    if args.svg and bt.samples[0].polar is not None:
        eff = bt.samples[0].effective
        xs = [s.point[eff[0] - 1] for s in bt.samples]
        ys = [s.point[eff[1] - 1] for s in bt.samples]
        Path(args.svg).write_text(
            output.svg_plot([("boundary", xs, ys)], "sufficient gain-region boundary",
                            f"k_{eff[0]}", f"k_{eff[1]}"),
            encoding="utf-8",
        )
    if args.json:
        out.write(json.dumps(res, indent=2) + "\n")
        return EXIT_OK
    out.write(f"network: {res['network']}  samples: {res['samples']}\n")
    if bt.note:
        out.write(f"note: {bt.note}\n")
    for key in ("min", "max"):
        it = res[key]
        line = f"{key} h_rho = {it['h_rho']:.9g} at k' = {np.round(it['k_prime'], 9).tolist()}"
        line += f", point = {np.round(it['point'], 9).tolist()}"
        if "gamma" in it:
            line += (f", polar (gamma, rho) = ({it['gamma']:.9g}, {it['rho']:.9g})"
                     f", delta = {it['delta']:.9g}, ratio = {it['ratio']:.9g}:1")
        out.write(line + "\n")
    return EXIT_OK


def scaling_table(n_max):
    if n_max < 3:
        raise UsageError("--n-max must be at least 3")
    rows = []
    for N in range(3, n_max + 1):
        th = gn.cycle_threshold(N)
        asym = N * N / (2 * math.pi**2)
        rows.append((N, th, asym, th / asym))
    return rows


def cmd_scaling(args, out):
    rows = scaling_table(args.n_max)
    header = ["N", "cycle_threshold", "asymptote", "ratio"]
    text = output._write(args.out, header, [[str(r[0])] + [output._fmt(v) for v in r[1:]] for r in rows])
    if not args.out:
        out.write(text)
    else:
        out.write(f"N={rows[-1][0]}: ratio {rows[-1][3]:.6f}\n")
    return EXIT_OK


def cmd_passify(args, out):
    nf = _load(args)
    rep = passify_report(nf.agent)
    res = {
        "numerator": rep.numerator.coef.real.tolist(),
        "denominator": rep.denominator.coef.real.tolist(),
        "is_hmp": rep.is_hmp,
        "kappa0": rep.kappa0 if rep.is_hmp else None,
        "kappa0_tolerance": KAPPA0_TOL,
        "strictly_passive": rep.strictly_passive,
    }
    if args.json:
        out.write(json.dumps(res, indent=2) + "\n")
    else:
        for k, v in res.items():
            out.write(f"{k}: {v}\n")
        if not rep.is_hmp:
            out.write("A1 violated: g^T chi(s) is not hyper-minimum-phase\n")
    return EXIT_OK if rep.is_hmp else EXIT_ASSUMPTION


COMMANDS = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "region": cmd_region,
    "scaling": cmd_scaling,
    "passify": cmd_passify,
}


def main(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, netfile.ParseError, DomainError, InvalidInputError, DimensionError) as exc:
        print(f"passinet: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PassifiabilityError, TopologyError) as exc:
        label = "A1" if isinstance(exc, PassifiabilityError) else "A2"
        msg = str(exc)
        if not msg.startswith(label):
            msg = f"{label} violated: {msg}"
        print(f"passinet: {msg}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except AssumptionError as exc:
        print(f"passinet: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except (PassinetError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"passinet: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
