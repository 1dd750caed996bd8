"""``teichkit`` command line.

Exit status: 0 when the command succeeds and every reported check
passes, 1 when a check fails or an input violates a precondition, 2 for
usage, parse and configuration errors.
"""

import argparse
import sys
from pathlib import Path

from . import io, metrics, plot, verify
from .config import ConfigError, RunConfig, load_config
from .curves import gateaux_check
from .disk_maps import DiskMap, RationalMap, check_univalence
from .operators import OneDifferential, beta, beta_hat, chi, pre_schwarzian, schwarzian
from .surface_atlas import (check_nonoverlap, default_chart, domains_disjoint, transition,
                            transition_holomorphy_check)
from .welding import unweld, verify_welding, weld

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

PLOT_HELP = """\
Artifacts written to --out (a directory, default from the run configuration):
  boundary.csv / boundary.svg   disk map: theta,re,im of f(r e^{i theta}) with r = 1,
                                or r = 0.98 rho for a rational map with rho <= 1
  heat.csv                      disk map: re,im,weighted_modulus of (1-|z|^2)|f''/f'|,
                                one row per node of the configured norm grid
  boundary_f.csv, boundary_g.csv, pair.svg
                                welding pair: theta,re,im of f(e^{i theta}) and g(e^{i theta})
  images.svg, image_<i>.csv     tuple: boundaries of the images on the sphere
"""


class CommandFailed(Exception):
    """A check reported by the command did not pass."""


# ---------------------------------------------------------------- helpers


def _emit(text, out):
    if out:
        path = Path(out)
        if path.parent != Path("."):
            path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _norm_report(phi, cfg):
    return metrics.sup_norm(phi, cfg.grid, cfg.norm_tol).report()


def _coeffs(x):
    return io.complex_list(x)


# --------------------------------------------------------------- commands


def cmd_analyze(args, cfg):
    f = io.load(args.map, ("disk_map", "rational_map"))
    n = cfg.N
    a, s = pre_schwarzian(f, n), schwarzian(f, n)
    b, bh, x = beta(f, n), beta_hat(f, n), chi(f, n)
    report = {
        "input": io.to_json(f),
        "N": n,
        "seed": cfg.seed,
        "pre_schwarzian": _coeffs(a.coeffs),
        "schwarzian": _coeffs(s.coeffs),
        "beta": {"quad": _coeffs(b.quad.coeffs), "c": b.c},
        "beta_hat": _coeffs(bh.coeffs),
        "chi": {"one": _coeffs(x.one.coeffs), "c": x.c},
        "norms": {"pre_schwarzian": _norm_report(a, cfg), "schwarzian": _norm_report(s, cfg)},
    }
    if isinstance(f, DiskMap):
        u = check_univalence(f, cfg.grid)
        report["univalence"] = {"passed": u.passed, "reason": u.reason,
                                "witness": io._clean(u.witness)}
    _emit(io.dumps(report), args.out)


def cmd_distance(args, cfg):
    f1 = io.load(args.a, ("disk_map", "rational_map"))
    f2 = io.load(args.b, ("disk_map", "rational_map"))
    rep = metrics.distance_report(args.metric, f1, f2, cfg.grid, cfg.norm_tol)
    rep["seed"] = cfg.seed
    _emit(io.dumps(rep), args.out)


def cmd_weld(args, cfg):
    gamma = io.load(args.gamma, "circle_map")
    pair = weld(gamma, args.m, tol=cfg.newton_tol)
    out = io.to_json(pair)
    out["checks"] = verify_welding(pair, gamma)
    _emit(io.dumps(out), args.out)


def cmd_unweld(args, cfg):
    f = io.load(args.f, ("disk_map", "welding_pair"))
    f = getattr(f, "f", f)
    gamma, m, info = unweld(f, u_modes=args.modes, return_info=True)
    info = dict(info, g=io.to_json(info["g"]))
    _emit(io.dumps({"gamma": io.to_json(gamma), "m": m, "info": info}), args.out)


def cmd_chart(args, cfg):
    conf = io.load(args.config_file, "config")
    idx = range(conf.n) if args.index is None else [args.index]
    if args.index is not None and not 0 <= args.index < conf.n:
        raise ValueError(f"index {args.index} out of range for {conf.n} points")
    charts = [default_chart(conf, i, b_factor=args.b_factor, k_radius=args.k_radius) for i in idx]
    rep = {"config": io.to_json(conf), "separation": conf.separation,
           "charts": [io.to_json(c) for c in charts],
           "domains_disjoint": domains_disjoint(charts)}
    _emit(io.dumps(rep), args.out)
    if not rep["domains_disjoint"]:
        raise CommandFailed("chart domains overlap")


def cmd_nonoverlap(args, cfg):
    tup = io.load(args.tuple, "tuple")
    tup.check_containment(cfg.grid)
    rep = check_nonoverlap(tup, n=args.samples)
    _emit(io.dumps({"status": rep.status, "pairs": rep.pairs}), args.out)
    if not rep.passed:
        raise CommandFailed(f"non-overlap check: {rep.status}")


def cmd_transition(args, cfg):
    c1 = io.load(args.source, "chart")
    c2 = io.load(args.target, "chart")
    psi = io.load(args.psi, "disk_map")
    out = {"psi": io.to_json(transition(c1, c2, psi, cfg.grid, n=cfg.N))}
    failed = False
    if args.holomorphy:
        rep = transition_holomorphy_check(c1, c2, psi, [OneDifferential([1.0]), OneDifferential([0.0, 1.0])],
                                          eps=cfg.fd_step, n=cfg.N)
        out["holomorphy"] = rep
        failed = rep["max"] > 1e-6
    _emit(io.dumps(out), args.out)
    if failed:
        raise CommandFailed("Cauchy-Riemann residual above 1e-6")


def cmd_gateaux(args, cfg):
    h = io.load(args.h, ("mobius", "polynomial_map"))
    c = io.load(args.curve, "curve").padded(cfg.N)
    rep = gateaux_check(h, c, fd_step=cfg.fd_step)
    _emit(plot.residual_csv(rep.ts, rep.residuals), args.out)
    sys.stderr.write(f"slope={rep.slope!r} cr_residual={rep.cr_residual!r} "
                     f"bound_ratio={rep.bound_ratio!r}\n")
    if not (rep.slope >= 0.9 and rep.cr_residual <= 1e-6 and rep.bound_ratio <= 1.0):
        raise CommandFailed("Gateaux check failed")


def cmd_verify(args, cfg):
    kw = {}
    if args.corpus:
        if args.suite != "identities":
            raise ConfigError("--corpus applies to the identities suite only")
        raw = io.loads(Path(args.corpus).read_text(), args.corpus)
        items = raw.get("maps") if isinstance(raw, dict) else raw
        if not isinstance(items, list):
            raise io.ParseError(f"{args.corpus}: expected a list of disk maps")
        kw["maps"] = [io.from_json(d, "disk_map") for d in items]
    results = verify.run(args.suite, cfg, **kw)
    man = verify.manifest(results)
    man["config"] = cfg.as_dict()
    _emit(io.dumps(man), args.out)
    for r in results:
        for c in r.failures:
            sys.stderr.write(f"FAIL {r.suite}: {c.name} (value {c.value!r}, threshold {c.threshold!r})\n")
    if not man["passed"]:
        raise CommandFailed("verification failed")


def cmd_plot(args, cfg):
    obj = io.load(args.object)
    out = Path(args.out or cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    n = args.samples
    if isinstance(obj, (DiskMap, RationalMap)):
        r = 1.0 if isinstance(obj, DiskMap) or obj.rho > 1 else 0.98 * obj.rho
        theta, z = plot.sample_circle(n, r)
        b = obj(z)
        (out / "boundary.csv").write_text(plot.boundary_csv(theta, b))
        (out / "boundary.svg").write_text(plot.svg_paths([b]))
        (out / "heat.csv").write_text(plot.heat_csv(pre_schwarzian(obj), cfg.grid))
    elif hasattr(obj, "g") and hasattr(obj, "f"):
        theta, z = plot.sample_circle(n)
        bf, bg = obj.f(z), obj.g(z)
        (out / "boundary_f.csv").write_text(plot.boundary_csv(theta, bf))
        (out / "boundary_g.csv").write_text(plot.boundary_csv(theta, bg))
        (out / "pair.svg").write_text(plot.svg_paths([bf, bg]))
    elif hasattr(obj, "charts"):
        theta, _ = plot.sample_circle(n)
        curves = [obj.surface_points(i, theta) for i in range(len(obj.maps))]
        for i, c in enumerate(curves):
            (out / f"image_{i}.csv").write_text(plot.boundary_csv(theta, c))
        (out / "images.svg").write_text(plot.svg_paths(curves))
    else:
        raise io.ParseError(f"{args.object}: nothing to plot for this object")


# ------------------------------------------------------------------ parser


def _global_options(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--config", default=d, help="run configuration (.toml or .json)")
    parser.add_argument("--N", type=int, default=d, help="truncation degree (>= 8)")
    parser.add_argument("--tol", type=float, default=d, help="relative norm refinement tolerance")
    parser.add_argument("--seed", type=int, default=d, help="seed for randomized corpora")
    parser.add_argument("--out", default=d,
                        help="output file (directory for plot); stdout when omitted")


def build_parser():
    p = argparse.ArgumentParser(prog="teichkit", description=__doc__,
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    _global_options(p, False)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        sp = sub.add_parser(name, **kw)
        _global_options(sp, True)
        sp.set_defaults(func=fn)
        return sp

    sp = add("analyze", cmd_analyze, help="operators, embeddings and norms of a disk map")
    sp.add_argument("map")
    sp = add("distance", cmd_distance, help="d_s, d_ps or d_o between two maps")
    sp.add_argument("--metric", choices=("s", "ps", "o"), default="o")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("weld", cmd_weld, help="welding pair of a circle map")
    sp.add_argument("--gamma", required=True)
    sp.add_argument("--m", type=float, default=0.0, help="log |f'(0)|")
    sp = add("unweld", cmd_unweld, help="circle map and scale of a disk map")
    sp.add_argument("--f", required=True)
    sp.add_argument("--modes", type=int, default=48)
    sp = add("chart", cmd_chart, help="default charts of a configuration")
    sp.add_argument("config_file")
    sp.add_argument("--index", type=int)
    sp.add_argument("--b-factor", type=float, default=1.0 / 3.0)
    sp.add_argument("--k-radius", type=float, default=0.9)
    sp = add("nonoverlap", cmd_nonoverlap, help="disjointness of the closed images of a tuple")
    sp.add_argument("tuple")
    sp.add_argument("--samples", type=int, default=1024)
    sp = add("transition", cmd_transition, help="change of chart of a disk map")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--psi", required=True)
    sp.add_argument("--holomorphy", action="store_true", help="also report the Cauchy-Riemann residual")
    sp = add("gateaux", cmd_gateaux, help="difference-quotient residual table (CSV t,residual)")
    sp.add_argument("--h", required=True)
    sp.add_argument("--curve", required=True)
    sp = add("verify", cmd_verify, help="run a property suite")
    sp.add_argument("suite", choices=verify.SUITES + ("all",))
    sp.add_argument("--corpus", help="JSON list of disk maps for the identities suite")
    sp = add("plot", cmd_plot, help="CSV/SVG artifacts", description=PLOT_HELP,
             formatter_class=argparse.RawDescriptionHelpFormatter)
    sp.add_argument("object")
    sp.add_argument("--samples", type=int, default=512)
    return p


def resolve_config(args):
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.updated(N=args.N, norm_tol=args.tol, seed=args.seed)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        args.func(args, cfg)
    except (io.ParseError, ConfigError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except CommandFailed as exc:
        sys.stderr.write(f"failed: {exc}\n")
        return EXIT_FAIL
    except (ValueError, ArithmeticError, RuntimeError, KeyError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_FAIL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
