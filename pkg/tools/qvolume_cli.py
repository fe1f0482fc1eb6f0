#!/usr/bin/env python3
"""
qvolume command line
Reproducible jobs for the q^Volume lozenge-tiling lab: moments, polynomial
checks, zeros, densities, arctic curves, kernels, edge scaling and sampling.
"""

import sys
import os
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))


def _cap_threads(argv):
    """Apply --threads to the BLAS pools; must run before numpy is imported."""
    for i, arg in enumerate(argv):
        value = None
        if arg == '--threads' and i + 1 < len(argv):
            value = argv[i + 1]
        elif arg.startswith('--threads='):
            value = arg.split('=', 1)[1]
        if value is not None and value.isdigit():
            for key in ('OMP_NUM_THREADS', 'OPENBLAS_NUM_THREADS', 'MKL_NUM_THREADS'):
                os.environ[key] = value


_cap_threads(sys.argv[1:])

import argparse
import json
import logging

import numpy as np
import pandas as pd
from colorama import Fore, Style, init

from qvolume import arctic, asymptotics, equilibrium, global_value, kernel, qcore, render, sampler
from qvolume import config
from qvolume.constants import EXIT, FIGURES, REFERENCE
from qvolume.exceptions import ConvergenceError
from qvolume.objects.job import COMMANDS, JobConfig
from qvolume.objects.tiling import PlanePartition

init(autoreset=True)
logger = logging.getLogger("qvolume.cli")
REF = REFERENCE()


def check(name, passed, value=None, hard=True):
    """Record and print one PASS/FAIL line."""
    global_value.record_check(name, passed, value, hard)
    colour = Fore.GREEN if passed else (Fore.RED if hard else Fore.YELLOW)
    label = "PASS" if passed else ("FAIL" if hard else "WARN")
    shown = "" if value is None else f"  ({value})"
    print(f"{colour}{label}{Style.RESET_ALL} {name}{shown}")
    return passed


def artifact(path):
    global_value.artifacts.append(os.path.relpath(path))
    global_value.logger(f"wrote {path}", "INFO")
    return path


def _out(job, name):
    return os.path.join(job.out or global_value.dp, name)


def _svg(job, default):
    return job.svg or _out(job, default)


# =============================================
# jobs
# =============================================

def run_moments(job):
    N = job.require_N()
    q = job.q_value()
    table = qcore.to_json_table(N, q, job.options.get("n_max"))
    artifact(render.write_json(table, _out(job, f"moments_N{N}.json")))
    if job.q is not None:
        residues = [r for n in range(1, 2 * N) for r in qcore.orthogonality_residues(n, N, job.q)]
        check("exact orthogonality of P_n, n < 2N", all(r == 0 for r in residues),
              f"{len(residues)} residues")
    print(f"moments mu'_0..mu'_{2 * N - 1} and P_0..P_{len(table['polynomials']) - 1} written")


def run_op_check(job):
    N = job.require_N()
    q = job.q
    if q is None:
        raise ValueError("op-check compares exact coefficients and needs --q")
    n_max = min(int(job.options.get("n_max", 6)), 2 * N - 1)
    rows = []
    for n in range(n_max + 1):
        hankel = qcore.op_via_hankel(n, N, q)
        routes = {
            "closed_form": qcore.op_via_closed_form(n, N, q),
            "qjacobi": qcore.op_via_qjacobi(n, N, q),
            "recurrence": qcore.op_via_model_recurrence(n, N, q),
        }
        row = {"n": n}
        for name, poly in routes.items():
            row[name] = poly.coefficients == hankel.coefficients
        row["orthogonal"] = all(r == 0 for r in qcore.orthogonality_residues(n, N, q))
        rows.append(row)
    frame = pd.DataFrame(rows)
    artifact(render.write_csv(frame, _out(job, f"op_check_N{N}.csv")))
    check("polynomial routes agree coefficientwise",
          bool(frame[["closed_form", "qjacobi", "recurrence"]].all().all()), f"n <= {n_max}")
    check("orthogonality residues vanish", bool(frame["orthogonal"].all()))


def run_zeros(job):
    c = job.c_value()
    Ns = job.options.get("Ns") or [job.require_N(50)]
    geo = equilibrium.arc_geometry(c)
    zero_sets = asymptotics.zeros_batch([(int(N), c) for N in Ns], global_value.threads)
    frame = pd.concat([asymptotics.zeros_frame(zs) for zs in zero_sets], ignore_index=True)
    artifact(render.write_csv(frame, _out(job, f"zeros_c{c:g}.csv")))
    artifact(render.plot_zeros(zero_sets, geo, _svg(job, f"zeros_c{c:g}.svg")))
    distances = [zs.max_distance for zs in zero_sets]
    global_value.set_cache(f"zeros_c{c:g}", {str(zs.N): zs.max_distance for zs in zero_sets})
    for zs in zero_sets:
        check(f"conjugate symmetry N={zs.N}", asymptotics.conjugate_defect(zs) < 1e-6,
              f"{asymptotics.conjugate_defect(zs):.2e}")
    if len(distances) > 1:
        check("max zero-to-arc distance decreasing", all(b < a for a, b in zip(distances, distances[1:])),
              [round(d, 6) for d in distances])
        check("final distance below 0.05 e^(c/2)", distances[-1] < 0.05 * geo.radius, distances[-1])
    weight = asymptotics.weight_approx_study(c, job.options.get("weight_Ns", (25, 50, 100)))
    artifact(render.write_csv(weight, _out(job, f"weight_approx_c{c:g}.csv")))
    check("weight approximation error decreasing", bool(weight["error"].is_monotonic_decreasing), hard=False)
    studies = []
    for z in asymptotics.default_base_points(c):
        studies.append(asymptotics.plancherel_rotach_study(z, c, job.options.get("pr_Ns", (20, 40, 80))))
        errors = studies[-1]["error"]
        check(f"strong asymptotics error decreasing at z={complex(z):.3f}", bool(errors.is_monotonic_decreasing),
              [float(e) for e in errors])
    artifact(render.write_csv(pd.concat(studies, ignore_index=True), _out(job, f"plancherel_rotach_c{c:g}.csv")))


def run_density(job):
    cs = job.options.get("cs") or [job.c_value()]
    profiles = {}
    for c in cs:
        geo = equilibrium.arc_geometry(float(c))
        report = equilibrium.equilibrium_measure_check(geo)
        check(f"equilibrium measure c={c:g}", report["passed"],
              f"mass={report['mass']:.12f}, min={report['min_density']:.3e}")
        profiles[float(c)] = equilibrium.density_profile(geo)
    frame = pd.concat([f.assign(c=c) for c, f in profiles.items()], ignore_index=True)
    artifact(render.write_csv(frame, _out(job, "density.csv")))
    artifact(render.plot_density(profiles, _svg(job, "density.svg")))


def run_arctic(job):
    c = job.c_value()
    frame = arctic.arctic_curve_frame(c, int(job.options.get("samples", 400)))
    artifact(render.write_csv(frame, _out(job, f"arctic_c{c:g}.csv")))
    artifact(render.plot_arctic(frame, c, _svg(job, f"arctic_c{c:g}.svg"),
                                ellipse=job.options.get("check_ellipse", False)))
    grid = arctic.liquid_grid(c, int(job.options.get("liquid_points", 21)))
    artifact(render.write_csv(grid, _out(job, f"liquid_c{c:g}.csv")))
    ends = arctic.curve_endpoints(c)
    check("eta -> -1 as s -> 0", abs(ends["eta_at_zero"] + 1.0) < 1e-10, ends["eta_at_zero"])
    check("xi(e^c) = 0", abs(ends["xi_at_e_c"]) < 1e-10, ends["xi_at_e_c"])
    if job.options.get("check_ellipse"):
        defect = arctic.ellipse_defect(c)
        check("curve within 1e-2 of the ellipse", defect < 1e-2, f"{defect:.3e}")


def run_cstar(job):
    c_star = arctic.find_c_star()
    print(f"c* = {c_star:.6f}")
    check("c* matches 3.32577", abs(c_star - REF.C_STAR) < 1e-3, round(c_star, 6))
    if global_value.check_cache("c_star"):
        golden = global_value.get_cache("c_star")
        check("c* reproduces the golden value", abs(c_star - golden) < 1e-9, golden, hard=False)
    global_value.set_cache("c_star", c_star)
    below = len(arctic.inflection_scan(3.0))
    above = len(arctic.inflection_scan(5.0))
    check("no inflection at c = 3", below == 0, below)
    check("one inflection at c = 5", above == 1, above)
    artifact(render.write_json({"c_star": c_star, "inflections_c3": below, "inflections_c5": above},
                               _out(job, "cstar.json")))


def run_levelsets(job):
    c = job.c_value()
    geo = equilibrium.arc_geometry(c)
    s = float(job.options.get("s", 0.5 * geo.radius))
    traces = arctic.level_set_trace(s, c, geo=geo)
    artifact(render.write_csv(arctic.level_set_frame(traces), _out(job, f"levelsets_c{c:g}.csv")))
    artifact(render.plot_level_sets(traces, s, geo, _svg(job, f"levelsets_c{c:g}.svg")))
    artifact(render.write_csv(equilibrium.phi_sign_map(geo), _out(job, f"phi_sign_c{c:g}.csv")))
    for index, trace in enumerate(traces):
        check(f"branch {index} traced", trace["status"] != "truncated", trace["status"], hard=False)


def run_kernel(job):
    N = job.require_N()
    if job.q is not None:
        frame = kernel.kernel_table(N, job.q)
        if N <= 3:
            states, _ = sampler.enumerate_tilings(N, job.q)
            exact = [float(sampler.occupancy_probability([(x, y)], N, job.q, states))
                     for x, y in zip(frame["x1"], frame["y1"])]
            worst = float(np.max(np.abs(frame["K"].to_numpy() - np.array(exact))))
            check("one-point kernel matches enumeration", worst < 1e-7, f"{worst:.2e}")
    else:
        c = job.c_value()
        rows = []
        for x in range(2 * N + 1):
            for y in kernel.y_range(x, N):
                query = kernel.KernelQuery.diagonal(x, y)
                rows.append((x, y, x, y, kernel.correlation_kernel_mp(query, N, c)))
        frame = pd.DataFrame(rows, columns=["x1", "y1", "x2", "y2", "K"])
    artifact(render.write_csv(frame, _out(job, f"kernel_N{N}.csv")))
    columns = frame.groupby("x1")["K"].sum()
    check("N paths cross every column", bool(np.allclose(columns.to_numpy(), N, atol=1e-7)))


def run_edge(job):
    c = job.c_value()
    geo = equilibrium.arc_geometry(c)
    inflection = bool(job.options.get("inflection", False))
    s = float(job.options["s"]) if "s" in job.options else (
        arctic.find_inflection(c) if inflection else 0.5 * geo.radius)
    table = kernel.edge_scaling_diagnostic(s, c, inflection=inflection, Ns=job.options.get("Ns"))
    artifact(render.write_csv(table, _out(job, f"edge_c{c:g}.csv")))
    check("deviation shrinks with N", table.attrs["improves"], hard=False)
    if "avatar_z" in job.options:
        z = complex(*job.options["avatar_z"])
        avatar = kernel.avatar_study(c, z, job.options.get("avatar_Ns", (16, 32, 64)))
        artifact(render.write_csv(avatar, _out(job, f"avatar_c{c:g}.csv")))
        check("avatar normalization approaches 1", bool(avatar["error"].is_monotonic_decreasing),
              [float(e) for e in avatar["error"]], hard=False)


def run_sample(job):
    N = job.require_N()
    q = job.q_value()
    sweeps = int(job.options.get("sweeps", 1000))
    seed = job.seed if job.seed is not None else config.SAMPLER_CONFIG['seed']
    burn_in = job.options.get("burn_in")
    result = sampler.stats(sampler.chain(N, q, sweeps, seed, burn_in), seed)
    final = sampler.sample(N, q, 1, seed, burn_in, progress=False)
    artifact(render.write_csv(sampler.stats_frame(result), _out(job, f"sample_stats_N{N}.csv")))
    artifact(render.write_json(final.to_dict(), _out(job, f"sample_N{N}.json")))
    artifact(render.plot_tiling(final, _svg(job, f"sample_N{N}.svg")))
    check("site frequencies sum to 1", result.normalization_defect() < 1e-12)
    if N <= 3:
        exact, _ = sampler.exact_marginals(N, q)
        tv = result.total_variation(exact)
        check("site frequencies near exact marginals", tv < 0.02, f"TV={tv:.4f}", hard=False)
    else:
        density = sampler.frozen_corner_density(result)
        check("frozen type-II corner", density > 0.95, f"{density:.3f}", hard=False)


def run_render(job):
    source = job.options.get("input")
    if not source:
        raise ValueError("render needs options.input, a plane partition JSON file")
    with open(source, "r", encoding="utf-8") as fh:
        partition = PlanePartition(json.load(fh)["heights"])
    frame = job.options.get("frame", "symmetric")
    artifact(render.plot_tiling(partition, _svg(job, f"tiling_N{partition.N}.svg"), frame))


JOBS = {
    "moments": run_moments,
    "op-check": run_op_check,
    "zeros": run_zeros,
    "density": run_density,
    "arctic": run_arctic,
    "cstar": run_cstar,
    "levelsets": run_levelsets,
    "kernel": run_kernel,
    "edge": run_edge,
    "sample": run_sample,
    "render": run_render,
}


def run(job):
    """Run one job and write summary.json; returns the exit status."""
    global_value.reset_run()
    global_value.current_job = job
    logger.debug(f"running {job.command} with {job.to_dict()}")
    config.merge(job.overrides)
    JOBS[job.command](job)
    failed = [c for c in global_value.checks if c["hard"] and not c["passed"]]
    summary = {
        "job": job.to_dict(),
        "model": job.model().to_dict() if job.N and (job.c is not None or job.q is not None) else None,
        "checks": global_value.checks,
        "artifacts": global_value.artifacts,
        "passed": not failed,
    }
    render.write_json(summary, _out(job, config.OUTPUT_CONFIG['summary_name']))
    return EXIT.NUMERICAL if failed else EXIT.OK


def describe():
    print("Figure reproductions:")
    for command in COMMANDS:
        print(f"  {command:<10} {FIGURES[command]}")


def build_parser():
    parser = argparse.ArgumentParser(
        description="q^Volume lozenge tilings: numerical lab",
        formatter_class=argparse.RawTextHelpFormatter
    )
    parser.add_argument('command', nargs='?', choices=list(COMMANDS), help="""Available commands:
  moments   - moment table and P_n coefficients (exact q)
  op-check  - agreement of the polynomial constructions
  zeros     - zeros of P_N and their distance to the arc
  density   - equilibrium density profiles
  arctic    - arctic curve over the hexagon
  cstar     - critical c of the first inflection point
  levelsets - level lines of Re Phi at an arctic point
  kernel    - finite-N correlation kernel table
  edge      - rescaled kernel against the extended Airy kernel
  sample    - Glauber sample and tile statistics
  render    - SVG of a stored plane partition""")
    parser.add_argument('--N', type=int)
    parser.add_argument('--c', type=str, help="decimal string")
    parser.add_argument('--q', type=str, help='exact rational such as "13/10"')
    parser.add_argument('--seed', type=int)
    parser.add_argument('--out', type=str, help="output directory (default results/)")
    parser.add_argument('--svg', type=str, help="figure path")
    parser.add_argument('--config', type=str, help="JSON job file merged under the flags")
    parser.add_argument('--save-config', type=str, help="write the merged job as JSON")
    parser.add_argument('--describe', action='store_true', help="list the figure each command reproduces")
    parser.add_argument('--loglevel', choices=['DEBUG', 'INFO', 'ERROR'], default='INFO')
    parser.add_argument('--threads', type=int, help="cap worker and BLAS threads")
    parser.add_argument('--quiet', action='store_true', help="no progress bars")
    parser.add_argument('--check-ellipse', action='store_true', help="arctic: compare with the c -> 0 ellipse")
    parser.add_argument('--option', action='append', default=[], metavar="KEY=JSON",
                        help="command option, e.g. --option 'Ns=[25,50,100]'")
    return parser


def job_from_args(args):
    data = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    options = dict(data.get("options") or {})
    for item in args.option:
        key, _, value = item.partition("=")
        if not key or not value:
            raise ValueError(f"--option expects KEY=JSON, got {item!r}")
        options[key] = json.loads(value)
    if args.check_ellipse:
        options["check_ellipse"] = True
    flags = {"command": args.command, "N": args.N, "c": args.c, "q": args.q, "seed": args.seed,
             "out": args.out, "svg": args.svg}
    for key, value in flags.items():
        if value is not None:
            data[key] = value
    if args.c is not None and args.q is not None:
        raise ValueError("give exactly one of --c and --q")
    if args.c is not None:
        data.pop("q", None)
    if args.q is not None:
        data.pop("c", None)
    data["options"] = options
    if not data.get("command"):
        return None
    return JobConfig.from_dict(data)


def main(argv=None):
    """Main CLI interface"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT.USAGE if exc.code else EXIT.OK

    global_value.loglevel = args.loglevel
    global_value.quiet = args.quiet
    global_value.threads = args.threads
    logging.basicConfig(level=getattr(logging, args.loglevel),
                        format='%(asctime)s :[%(levelname)s]: %(name)s: %(message)s')

    if args.describe:
        describe()
        return EXIT.OK

    try:
        job = job_from_args(args)
        if job is None:
            parser.print_help()
            return EXIT.USAGE
        if args.save_config:
            config.merge(job.overrides)
            render.write_json(dict(job.to_dict(), config=config.snapshot()), args.save_config)
        return run(job)
    except KeyboardInterrupt:
        print("\n\n🛑 Operation cancelled by user")
        return EXIT.INTERRUPTED
    except ConvergenceError as e:
        print(f"\n❌ Numerical failure: {e} {e.detail or ''}")
        return EXIT.NUMERICAL
    except ValueError as e:
        print(f"\n❌ Invalid job: {e}")
        return EXIT.USAGE
    except Exception as e:
        print(f"\n❌ Error: {e}")
        return EXIT.UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
